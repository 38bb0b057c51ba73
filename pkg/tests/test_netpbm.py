import numpy as np
import pytest

from ca_commlab import netpbm


def test_pbm_roundtrip():
    rng = np.random.default_rng(0)
    for h, w in [(1, 1), (3, 5), (8, 8), (5, 17), (64, 128)]:
        m = rng.integers(0, 2, size=(h, w)).astype(np.uint8)
        assert np.array_equal(netpbm.read_pbm(netpbm.pbm_bytes(m)), m)


def test_pbm_header():
    m = np.zeros((2, 3), dtype=np.uint8)
    assert netpbm.pbm_bytes(m).startswith(b"P4\n3 2\n")


def test_pbm_bit_convention():
    # a single 1 is a single black pixel in the top-left corner
    m = np.array([[1, 0], [0, 0]], dtype=np.uint8)
    data = netpbm.pbm_bytes(m)
    assert data.endswith(bytes([0b10000000, 0b00000000]))


def test_pbm_rejects_nonbinary():
    with pytest.raises(ValueError):
        netpbm.pbm_bytes(np.array([[2]], dtype=np.uint8))


def test_pgm_roundtrip():
    rng = np.random.default_rng(1)
    for states in (3, 27, 256):
        m = rng.integers(0, states, size=(6, 9)).astype(np.int64)
        back, q = netpbm.read_pgm(netpbm.pgm_bytes(m, states))
        assert q == states
        assert np.array_equal(back, m.astype(np.uint8))


def test_pgm_gray_convention():
    # state 0 is white (maxval), the top state is black (0)
    m = np.array([[0, 2]], dtype=np.uint8)
    data = netpbm.pgm_bytes(m, 3)
    assert data.endswith(bytes([2, 0]))


def test_pgm_rejects_out_of_range():
    with pytest.raises(ValueError):
        netpbm.pgm_bytes(np.array([[3]]), 3)
