"""Command-line entry point: ``hopfield-qr {synth,train,corrupt,denoise,bench}``."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .bench import RULE_ALIASES, format_csv, parse_config, run_experiment
from .core import to_bipolar, vectorize
from .dynamics import DEFAULT_MAX_UPDATES
from .errors import HopfieldError, ParameterError
from .noise import NoiseSpec, flip_count
from .persistence import load_bank, read_pbm, save_bank, synth_patterns, write_pbm
from .selector import CRITERIA, DEFAULT_PROBE_UPDATES, denoise
from .training import TrainingSet, train_bank

_SYNTH_DEFAULTS = {"count": 100, "rows": 21, "cols": 21, "density": 0.5, "finder": 0, "seed": 0}


def parse_synthetic(spec: str) -> dict:
    """``synthetic:count=4000,rows=57,cols=57,density=0.5,finder=1,seed=0`` (all keys optional)."""
    opts = dict(_SYNTH_DEFAULTS)
    body = spec.partition(":")[2]
    for item in filter(None, (p.strip() for p in body.split(","))):
        key, sep, value = item.partition("=")
        if not sep or key not in opts:
            raise ParameterError(f"bad synthetic option {item!r}; keys are {', '.join(opts)}")
        try:
            opts[key] = float(value) if key == "density" else int(value)
        except ValueError:
            raise ParameterError(f"bad value in synthetic option {item!r}") from None
    return opts


def load_patterns(source: str):
    """Return ``(ids, images)`` from a directory of PBM files or a synthetic spec."""
    if source.startswith("synthetic"):
        o = parse_synthetic(source)
        images = synth_patterns(o["count"], o["rows"], o["cols"], o["density"], bool(o["finder"]), o["seed"])
        return [f"p{i:04d}" for i in range(len(images))], images
    root = Path(source)
    if not root.is_dir():
        raise ParameterError(f"{source}: not a directory or synthetic spec")
    files = sorted(root.glob("*.pbm"))
    if not files:
        raise ParameterError(f"{source}: no .pbm files found")
    images = [read_pbm(f) for f in files]
    shapes = {img.shape for img in images}
    if len(shapes) > 1:
        raise ParameterError(f"{source}: patterns have mixed geometry {sorted(shapes)}")
    return [f.stem for f in files], images


def cmd_synth(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    images = synth_patterns(args.count, args.rows, args.cols, args.density, args.finder, args.seed)
    for i, img in enumerate(images):
        write_pbm(img, out / f"p{i:04d}.pbm", args.format)
    print(f"wrote {len(images)} patterns of {args.rows}x{args.cols} to {out}")


def cmd_train(args):
    ids, images = load_patterns(args.patterns)
    rows, cols = images[0].shape
    ts = TrainingSet.from_patterns([to_bipolar(vectorize(img)) for img in images], ids)
    start = time.perf_counter()
    bank = train_bank(ts, args.k, RULE_ALIASES[args.rule], args.seed, rows=rows, cols=cols, workers=args.workers)
    elapsed = time.perf_counter() - start
    save_bank(bank, args.out)
    for idx, load in enumerate(bank.loads()):
        print(f"network {idx}: {load} patterns")
    print(f"trained {bank.k} networks of {bank.n} nodes ({RULE_ALIASES[args.rule]}) -> {args.out}")
    print(f"training wall time: {elapsed:.3f} s", file=sys.stderr)


def cmd_corrupt(args):
    spec = NoiseSpec.parse(args.noise)
    img = read_pbm(args.inp)
    noisy = spec.apply(img, args.seed)
    write_pbm(noisy, args.out, args.format)
    print(f"flipped {flip_count(img, noisy)} of {img.rows * img.cols} pixels ({spec})")


def format_report(rep, args, bank) -> str:
    sel, st = rep.selection, rep.final_stats
    lines = [
        f"input: {args.inp}",
        f"bank: {args.bank} (k={bank.k}, rows={bank.rows}, cols={bank.cols}, n={bank.n})",
        f"probe_updates: {sel.probe_updates}",
        f"criterion: {sel.criterion}",
        f"seed: {args.seed}",
        "",
        f"{'network':>7}  {'E_k':>22}  {'E_k_probe':>22}  {'delta_k':>22}",
    ]
    for r in sel.records:
        mark = "  <- winner" if r.index == sel.winner else ""
        lines.append(f"{r.index:>7}  {r.energy_before:>22.15g}  {r.energy_after:>22.15g}  {r.delta:>22.15g}{mark}")
    lines += [
        "",
        f"winner: {sel.winner}",
        f"tie_broken: {'yes' if sel.tie_broken else 'no'}",
    ]
    if args.reject_below is not None:
        lines.append(f"rejected: {'yes' if sel.rejected else 'no'} (threshold {args.reject_below:g})")
    lines += [
        f"final_run_node_updates: {st.node_updates}",
        f"final_run_flips: {st.flips}",
        f"total_node_updates: {rep.total_updates}",
        f"final_run_initial_energy: {st.initial_energy:.15g}",
        f"final_energy: {st.final_energy:.15g}",
        f"converged: {'yes' if st.converged else 'no'}",
        f"matched_stored_id: {rep.matched_stored_id or '-'}",
    ]
    return "\n".join(lines) + "\n"


def cmd_denoise(args):
    bank = load_bank(args.bank)
    img = read_pbm(args.inp)
    stored = None
    if args.patterns:
        ids, images = load_patterns(args.patterns)
        stored = dict(zip(ids, images))
    rep = denoise(bank, img, args.probe, args.max_updates, args.seed, stored, args.criterion, args.reject_below)
    write_pbm(rep.output, args.out, args.format)
    text = format_report(rep, args, bank)
    if args.report:
        Path(args.report).write_text(text)
    print(f"winner {rep.winner}, converged={rep.final_stats.converged}, "
          f"{rep.total_updates} node updates -> {args.out}")


def cmd_bench(args):
    configs = parse_config(Path(args.config).read_text())
    reports = []
    for i, cfg in enumerate(configs):
        rep = run_experiment(cfg)
        agg = rep.aggregates()
        print(f"config {i}: k={cfg.k} rule={cfg.rule} noise={cfg.noise} trials={agg['trials']} "
              f"selection={agg['selection_accuracy']} recovery={agg['exact_recovery_rate']}")
        reports.append(rep)
    Path(args.out).write_text(format_csv(reports, timing=args.timing))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfield-qr", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="write random QR-like patterns as PBM files")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--rows", type=int, default=21)
    s.add_argument("--cols", type=int, default=21)
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--finder", action="store_true", help="stamp QR finder motifs in three corners")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("P1", "P4"), default="P4")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("train", help="train a bank of networks on a pattern set")
    s.add_argument("--patterns", required=True, help="directory of .pbm files or synthetic:key=value,...")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--rule", choices=("paper", "projection", "hebbian"), default="paper")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("corrupt", help="apply a noise model to a PBM image")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--noise", required=True,
                   help="gaussian:VAR | saltpepper:D | corner-sp:D | corner-fill:0 | corner-fill:1")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("P1", "P4"), default="P4")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_corrupt)

    s = sub.add_parser("denoise", help="recover a stored pattern from a noisy image")
    s.add_argument("--bank", required=True)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--probe", type=int, default=DEFAULT_PROBE_UPDATES)
    s.add_argument("--max-updates", type=int, default=DEFAULT_MAX_UPDATES)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--patterns", help="stored patterns (as for train) to match the output against")
    s.add_argument("--criterion", choices=CRITERIA, default="delta",
                   help="winner statistic: largest energy drop (delta) or lowest probed energy (energy)")
    s.add_argument("--reject-below", type=float, default=None,
                   help="flag the input as unknown when the best energy drop is below this")
    s.add_argument("--format", choices=("P1", "P4"), default="P4")
    s.add_argument("--out", required=True)
    s.add_argument("--report")
    s.set_defaults(func=cmd_denoise)

    s = sub.add_parser("bench", help="run recall experiments from a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--timing", action="store_true", help="add wall-clock columns (not reproducible)")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (HopfieldError, OSError) as exc:
        print(f"hopfield-qr {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0
