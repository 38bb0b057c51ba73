import pytest

from ca_commlab.problems import (
    background_orbit,
    cycle_length,
    cycle_pred,
    diff_extent,
    invasion,
    pred,
    replay_no_invasion,
)
from ca_commlab.rules import from_wolfram, make_rule
from ca_commlab.words import CyclicWord, Word, apply_local, cyclic, word

R110 = from_wolfram(110)
R218 = from_wolfram(218)
R33 = from_wolfram(33)
R170 = from_wolfram(170)
R0 = from_wolfram(0)


def brute_pred(rule, w):
    """Oracle: build the whole triangle row by row and read the apex."""
    rows = [w]
    while len(rows[-1]) >= 2 * rule.radius + 1 and rule.radius > 0:
        rows.append(apply_local(rule, rows[-1]))
    return rows[-1].cells[0]


def test_pred_110_fig_row():
    assert pred(R110, word(2, "1101001")) == 1


def test_pred_matches_triangle_oracle():
    for code in (110, 218, 94, 33, 90, 30):
        rule = from_wolfram(code)
        for n in range(1, 14):
            for _ in range(1):
                pass
            # sample exhaustively for small n, strided for large
            step = 1 if n <= 9 else 37
            for v in range(0, 2**n, step):
                w = Word(2, tuple((v >> i) & 1 for i in range(n)))
                assert pred(rule, w) == brute_pred(rule, w)


def test_pred_218_matched_family():
    for n in range(1, 9):
        for k in range(n + 1):
            w = word(2, "1" * (n - k) + "0" * (2 * k + 1) + "1" * (n - k))
            assert pred(R218, w) == 0


def test_pred_218_mismatched_family():
    for n in range(1, 9):
        for i in range(n + 1):
            for j in range(n + 1):
                if i != j:
                    w = word(2, "1" * (n - i) + "0" * (i + j + 1) + "1" * (n - j))
                    assert pred(R218, w) == 1


def test_background_orbit_rule0():
    sig = background_orbit(R0, cyclic(2, "1"))
    assert sig.preperiod == 1 and sig.period == 1


def test_background_orbit_shift():
    sig = background_orbit(R170, cyclic(2, "01"))
    assert sig.preperiod == 0 and sig.period == 2


def test_background_orbit_rule33():
    sig = background_orbit(R33, cyclic(2, "011011"))
    assert sig.period == 2 and sig.preperiod <= 4


def test_cycle_length_rotation_invariant():
    for code in (33, 110, 218):
        rule = from_wolfram(code)
        for n in range(1, 8):
            for v in range(2**n):
                u = CyclicWord(2, tuple((v >> i) & 1 for i in range(n)))
                t0, lam = cycle_length(rule, u)
                for k in range(1, n):
                    assert cycle_length(rule, u.rotate(k)) == (t0, lam)


def test_cycle_pred_identity_rule():
    ident = make_rule(2, 0, [0, 1])
    assert cycle_length(ident, cyclic(2, "0110")) == (0, 1)
    assert cycle_pred(ident, 1, cyclic(2, "0110"))


def test_cycle_pred_shift():
    assert not cycle_pred(R170, 1, cyclic(2, "01"))
    assert cycle_pred(R170, 2, cyclic(2, "01"))


def test_invasion_equal_to_background():
    v = invasion(R218, cyclic(2, "0"), word(2, "00"))
    assert v.outcome == "no_invasion"


def test_invasion_218_additive_background():
    # over the all-zero background any nonempty difference expands full speed
    for x in ("1", "11", "101", "1001"):
        v = invasion(R218, cyclic(2, "0"), word(2, x), allow_decider=False)
        assert v.outcome == "invasion", x
        assert v.certificate["reason"] == "periodic-maximal-growth"


def test_invasion_218_wall_background():
    # backgrounds growing walls trap every difference
    for u in ("1", "11", "001"):
        for x in ("1", "01", "110"):
            v = invasion(R218, cyclic(2, u), word(2, x), allow_decider=False)
            assert v.outcome == "no_invasion", (u, x)


def test_invasion_shift_is_bounded():
    v = invasion(R170, cyclic(2, "0"), word(2, "101"), allow_decider=False)
    assert v.outcome == "no_invasion"


def test_invasion_unknown_on_tiny_budget():
    v = invasion(R218, cyclic(2, "0"), word(2, "1"), step_budget=1,
                 width_budget=2, allow_decider=False)
    assert v.outcome == "unknown"


def test_no_invasion_certificate_replays():
    cases = [
        (R170, "0", "101"),
        (R218, "1", "01"),
        (R218, "001", "110"),
        (from_wolfram(94), "01", "11"),
    ]
    for rule, u, x in cases:
        v = invasion(rule, cyclic(2, u), word(2, x), allow_decider=False)
        assert v.outcome == "no_invasion"
        assert replay_no_invasion(rule, cyclic(2, u), word(2, x), v)


def test_diff_extent_t0_is_window():
    assert diff_extent(R218, cyclic(2, "0"), word(2, "101"), 0) == (1, 3)


def test_diff_extent_218_growth():
    base = diff_extent(R218, cyclic(2, "0"), word(2, "1"), 0)
    after = diff_extent(R218, cyclic(2, "0"), word(2, "1"), 5)
    assert after == (base[0] - 5, base[1] + 5)


def test_diff_extent_shift_constant_width():
    for t in range(6):
        lo, hi = diff_extent(R170, cyclic(2, "0"), word(2, "101"), t)
        assert (lo, hi) == (1 - t, 3 - t)


def test_diff_extent_equal():
    assert diff_extent(R0, cyclic(2, "0"), word(2, "1"), 1) == "equal"


def test_registered_decider_shortcut():
    # the packaged 218 decider answers instantly on a huge instance
    v = invasion(R218, cyclic(2, "0"), word(2, "1" * 50), step_budget=5)
    assert v.outcome == "invasion"
    assert v.certificate["reason"].startswith("structural:")
