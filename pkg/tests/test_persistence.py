import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hopfield_qr import BinaryImage, CorruptionError, FormatError, ParameterError, ParseError
from hopfield_qr.core import NetworkBank
from hopfield_qr.persistence import (
    bank_file_size,
    format_pbm,
    load_bank,
    parse_pbm,
    read_pbm,
    save_bank,
    synth_pattern,
    synth_patterns,
    write_pbm,
)

from conftest import random_symmetric

DIAG = BinaryImage.from_rows([[1, 0], [0, 1]])


class TestPbm:
    def test_p1(self):
        assert parse_pbm(b"P1\n2 2\n1 0\n0 1\n") == DIAG

    def test_p1_comments_and_packed_digits(self):
        assert parse_pbm(b"P1 # a comment\n# another\n2 # w\n2\n10\n01") == DIAG

    def test_p4_same_image(self):
        data = b"P4\n2 2\n" + bytes([0b10000000, 0b01000000])
        assert parse_pbm(data) == DIAG

    def test_p4_row_padding(self):
        img = BinaryImage(np.ones((1, 9)))
        data = format_pbm(img, "P4")
        assert data == b"P4\n9 1\n" + bytes([0xFF, 0x80])
        assert parse_pbm(data) == img

    def test_truncated_p4(self):
        with pytest.raises(ParseError) as err:
            parse_pbm(b"P4\n16 2\n\xff\xff\xff")
        assert err.value.offset == 11

    def test_truncated_p1(self):
        with pytest.raises(ParseError):
            parse_pbm(b"P1\n2 2\n1 0 1")

    def test_bad_header(self):
        with pytest.raises(ParseError):
            parse_pbm(b"P1\nx 2\n")
        with pytest.raises(ParseError):
            parse_pbm(b"P1\n0 2\n")
        with pytest.raises(ParseError):
            parse_pbm(b"P1\n2 2\n1 0 2 1")

    def test_unsupported_magic(self):
        with pytest.raises(FormatError):
            parse_pbm(b"P5\n2 2\n255\n")

    def test_unknown_write_format(self):
        with pytest.raises(ParameterError):
            format_pbm(DIAG, "P2")

    @pytest.mark.parametrize("fmt", ["P1", "P4"])
    def test_file_round_trip_57(self, tmp_path, fmt):
        for seed in range(5):
            img = synth_pattern(57, 57, seed=seed)
            path = tmp_path / f"{seed}.pbm"
            write_pbm(img, path, fmt)
            assert read_pbm(path) == img
            first = path.read_bytes()
            write_pbm(img, path, fmt)
            assert path.read_bytes() == first

    def test_p1_line_length(self):
        text = format_pbm(synth_pattern(57, 57, seed=0), "P1").decode()
        assert max(len(line) for line in text.splitlines()) <= 70

    @settings(max_examples=60)
    @given(st.tuples(st.integers(1, 20), st.integers(1, 20)).flatmap(
        lambda shape: arrays(np.uint8, shape, elements=st.integers(0, 1))), st.sampled_from(["P1", "P4"]))
    def test_round_trip_property(self, px, fmt):
        img = BinaryImage(px)
        assert parse_pbm(format_pbm(img, fmt)) == img


class TestSynth:
    def test_zero_density(self):
        assert not synth_pattern(10, 12, 0.0, seed=1).pixels.any()

    def test_half_density(self):
        means = [img.pixels.mean() for img in synth_patterns(200, 57, 57, 0.5, seed=3)]
        assert abs(np.mean(means) - 0.5) <= 0.02

    def test_finder_corners(self):
        img = synth_pattern(21, 21, 0.5, finder_corners=True, seed=2)
        motif = np.ones((7, 7), dtype=np.uint8)
        motif[1:6, 1:6] = 0
        motif[2:5, 2:5] = 1
        px = img.pixels
        assert np.array_equal(px[:7, :7], motif)
        assert np.array_equal(px[:7, -7:], motif)
        assert np.array_equal(px[-7:, :7], motif)

    def test_seeded(self):
        assert synth_pattern(9, 9, seed=4) == synth_pattern(9, 9, seed=4)
        assert synth_patterns(3, 9, 9, seed=4) == synth_patterns(3, 9, 9, seed=4)

    def test_bad_density(self):
        with pytest.raises(ParameterError):
            synth_pattern(5, 5, 1.5)


def small_bank(k=3, rows=3, cols=4, seed=0):
    rng = np.random.default_rng(seed)
    n = rows * cols
    weights = tuple(random_symmetric(n, rng) for _ in range(k))
    assignment = {f"pat-{i}": int(rng.integers(k)) for i in range(7)}
    assignment["ünïcode"] = 0
    return NetworkBank(rows, cols, weights, assignment)


class TestBankFile:
    def test_round_trip(self, tmp_path):
        bank = small_bank()
        path = tmp_path / "b.hpbk"
        save_bank(bank, path)
        back = load_bank(path)
        assert back == bank
        for a, b in zip(back.weights, bank.weights):
            assert a.tobytes() == b.tobytes()
        assert back.assignment == bank.assignment

    def test_layout_size(self, tmp_path):
        w = random_symmetric(4, np.random.default_rng(1))
        bank = NetworkBank(2, 2, (w,), {"a": 0, "bb": 0})
        path = tmp_path / "one.hpbk"
        save_bank(bank, path)
        manifest = 4 + (4 + 1 + 4) + (4 + 2 + 4)
        assert os.path.getsize(path) == 20 + 128 + manifest + 4 == bank_file_size(bank)
        raw = path.read_bytes()
        assert raw[:4] == b"HPBK"
        assert np.array_equal(np.frombuffer(raw[20:148], dtype="<f8").reshape(4, 4), w)

    def test_byte_deterministic(self, tmp_path):
        bank = small_bank()
        reordered = NetworkBank(bank.rows, bank.cols, bank.weights, dict(reversed(list(bank.assignment.items()))))
        save_bank(bank, tmp_path / "a")
        save_bank(reordered, tmp_path / "b")
        assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()

    def test_flipped_weight_byte(self, tmp_path):
        path = tmp_path / "b.hpbk"
        save_bank(small_bank(), path)
        raw = bytearray(path.read_bytes())
        raw[20 + 37] ^= 0x01
        path.write_bytes(bytes(raw))
        with pytest.raises(CorruptionError):
            load_bank(path)

    def test_flipped_manifest_byte(self, tmp_path):
        path = tmp_path / "b.hpbk"
        save_bank(small_bank(), path)
        raw = bytearray(path.read_bytes())
        raw[-8] ^= 0x40  # inside the last id
        path.write_bytes(bytes(raw))
        with pytest.raises((CorruptionError, ParseError)):
            load_bank(path)

    def test_truncated(self, tmp_path):
        path = tmp_path / "b.hpbk"
        save_bank(small_bank(), path)
        raw = path.read_bytes()
        for cut in (10, 100, len(raw) - 2):
            path.write_bytes(raw[:cut])
            with pytest.raises(ParseError):
                load_bank(path)

    def test_bad_magic_and_version(self, tmp_path):
        path = tmp_path / "b.hpbk"
        save_bank(small_bank(), path)
        raw = bytearray(path.read_bytes())
        path.write_bytes(b"XXXX" + bytes(raw[4:]))
        with pytest.raises(FormatError):
            load_bank(path)
        raw[4] = 9
        path.write_bytes(bytes(raw))
        with pytest.raises(FormatError):
            load_bank(path)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
    def test_round_trip_property(self, tmp_path_factory, k, rows, cols, seed):
        bank = small_bank(k, rows, cols, seed)
        path = tmp_path_factory.mktemp("bank") / "p.hpbk"
        save_bank(bank, path)
        assert load_bank(path) == bank
