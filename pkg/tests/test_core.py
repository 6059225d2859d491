import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from hopfield_qr import BinaryImage, DimensionError, DomainError, devectorize, to_binary, to_bipolar, vectorize
from hopfield_qr.core import NetworkBank, check_weights


def test_vectorize_row_major():
    img = BinaryImage.from_rows([[1, 0], [0, 1]])
    assert vectorize(img).tolist() == [1, 0, 0, 1]
    assert vectorize(BinaryImage.from_rows([[0]])).tolist() == [0]
    img = BinaryImage.from_rows([[1, 1, 0], [0, 0, 1]])
    v = vectorize(img)
    for r in range(2):
        for c in range(3):
            assert v[r * 3 + c] == img.pixels[r, c]


def test_full_size_vector_length():
    assert vectorize(BinaryImage(np.zeros((57, 57)))).size == 3249


def test_devectorize():
    assert devectorize([1, 0, 0, 1], 2, 2) == BinaryImage.from_rows([[1, 0], [0, 1]])
    assert devectorize([0], 1, 1) == BinaryImage.from_rows([[0]])
    with pytest.raises(DimensionError):
        devectorize([1, 1, 0], 2, 2)


def test_to_bipolar():
    assert to_bipolar([0, 1, 0]).tolist() == [-1, 1, -1]
    assert np.all(to_bipolar(np.ones(7, dtype=int)) == 1)
    assert np.all(to_bipolar(np.zeros(7, dtype=int)) == -1)
    with pytest.raises(DomainError):
        to_bipolar([0, 2])


def test_to_binary():
    assert to_binary([-1, 1]).tolist() == [0, 1]
    assert to_binary(to_bipolar([0, 1, 1, 0])).tolist() == [0, 1, 1, 0]
    with pytest.raises(DomainError):
        to_binary([1, 0, -1])


def test_image_validation():
    with pytest.raises(DomainError):
        BinaryImage.from_rows([[0, 3]])
    with pytest.raises(DimensionError):
        BinaryImage(np.zeros(4))
    img = BinaryImage.from_rows([[1, 0]])
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 0


images = st.tuples(st.integers(1, 12), st.integers(1, 12)).flatmap(
    lambda shape: arrays(np.uint8, shape, elements=st.integers(0, 1)))


@given(images)
def test_round_trips(px):
    img = BinaryImage(px)
    v = vectorize(img)
    assert devectorize(v, img.rows, img.cols) == img
    s = to_bipolar(v)
    assert not np.any(s == 0)
    assert np.array_equal(to_binary(s), v)


def test_check_weights():
    w = np.array([[0.0, 1.0], [1.0, 0.0]])
    check_weights(w)
    with pytest.raises(DomainError):
        check_weights(np.array([[1.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(DomainError):
        check_weights(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(DomainError):
        check_weights(np.array([[0.0, np.inf], [np.inf, 0.0]]))


def test_bank_geometry_checked():
    with pytest.raises(DimensionError):
        NetworkBank(2, 2, (np.zeros((3, 3)),))
    bank = NetworkBank(1, 2, (np.zeros((2, 2)), np.zeros((2, 2))), {"a": 1, "b": 0})
    assert bank.k == 2 and bank.n == 2
    assert bank.loads() == [1, 1]
    assert bank.nbytes == 2 * 4 * 8
