import pytest

from ca_commlab.analysis import XOR, dependency_width, is_linear, is_reversible
from ca_commlab.rules import GuardError, from_wolfram, make_rule


def test_dependency_width_shift():
    assert dependency_width(from_wolfram(170), 3) == 1


def test_dependency_width_identity():
    ident = make_rule(2, 0, [0, 1])
    assert dependency_width(ident, 5) == 1


def test_dependency_width_rule90():
    # xor-of-ends iterates follow the odd binomial pattern: 2 cells at n=2,
    # all four of -3,-1,+1,+3 at n=3
    assert dependency_width(from_wolfram(90), 2) == 2
    assert dependency_width(from_wolfram(90), 3) == 4


def test_dependency_width_rule110_full():
    assert dependency_width(from_wolfram(110), 2) == 5


def test_dependency_width_guard():
    with pytest.raises(GuardError):
        dependency_width(from_wolfram(110), 15)


def test_is_linear_rule90():
    assert is_linear(from_wolfram(90), XOR, 0)


def test_is_linear_rule60():
    assert is_linear(from_wolfram(60), XOR, 0)


def test_is_linear_identity():
    assert is_linear(make_rule(2, 0, [0, 1]), XOR, 0)


def test_is_linear_rule110_fails():
    assert not is_linear(from_wolfram(110), XOR, 0)


def test_is_linear_rejects_bad_operation():
    # (1+1)+1 = 1 but 1+(1+1) = 0 under this table, despite 0 being neutral
    not_associative = ((0, 1, 2), (1, 2, 0), (2, 1, 1))
    ident3 = make_rule(3, 0, [0, 1, 2])
    with pytest.raises(ValueError):
        is_linear(ident3, not_associative, 0)
    with pytest.raises(ValueError):
        is_linear(from_wolfram(90), XOR, 1)  # 1 is not neutral for xor


@pytest.mark.parametrize(
    "code,expected",
    [
        (170, True),
        (204, True),
        (15, True),
        (51, True),
        (85, True),
        (110, False),
        (90, False),
        (0, False),
        (218, False),
        (94, False),
        (33, False),
    ],
)
def test_is_reversible_elementary(code, expected):
    assert is_reversible(from_wolfram(code)) is expected


def test_is_reversible_radius0():
    assert is_reversible(make_rule(2, 0, [1, 0]))
    assert not is_reversible(make_rule(2, 0, [0, 0]))
    assert is_reversible(make_rule(3, 0, [2, 0, 1]))


def test_is_reversible_surjective_but_not_injective():
    # rule 90 is surjective yet two-to-one
    assert not is_reversible(from_wolfram(90))


def test_is_reversible_finds_collision_witnessless():
    # sanity: the shift composed with negation is still reversible
    neg_shift = make_rule(2, 1, [1 - ((i >> 0) & 1) for i in range(8)])
    assert is_reversible(neg_shift)
