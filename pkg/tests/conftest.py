import numpy as np
import pytest

from hopfield_qr import TrainingSet, to_bipolar, train_bank, vectorize
from hopfield_qr.persistence import synth_patterns

DESK_ROWS = DESK_COLS = 21
DESK_K = 4
DESK_PER_NET = 30


def random_patterns(p, n, seed):
    rng = np.random.default_rng(seed)
    return rng.choice(np.array([-1, 1], dtype=np.int8), size=(p, n))


def random_symmetric(n, rng, scale=1.0):
    a = rng.normal(scale=scale, size=(n, n))
    w = (a + a.T) / 2
    np.fill_diagonal(w, 0.0)
    return w


def flip(s, fraction, rng):
    out = np.array(s, copy=True)
    mask = rng.random(out.size) < fraction
    out[mask] *= -1
    return out


def desk_bank(rule="paper-pseudoinverse", seed=11):
    images = synth_patterns(DESK_K * DESK_PER_NET, DESK_ROWS, DESK_COLS, seed=seed)
    ts = TrainingSet.from_patterns([to_bipolar(vectorize(img)) for img in images])
    bank = train_bank(ts, DESK_K, rule, seed=seed, rows=DESK_ROWS, cols=DESK_COLS)
    return bank, ts, dict(zip(ts.ids, images))


@pytest.fixture(scope="session")
def paper_bank():
    return desk_bank("paper-pseudoinverse")


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def record_criterion(number, name, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {number:>3}. {name}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
