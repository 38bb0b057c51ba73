import pytest

from ca_commlab.algebra import (
    RescaleParams,
    is_subautomaton,
    pack_cyclic,
    pack_word,
    product,
    project_layer,
    rescale,
    simulates,
    unpack_cyclic,
    unpack_word,
)
from ca_commlab.rules import GuardError, canonicalize, from_wolfram
from ca_commlab.words import CyclicWord, Word, step_cyclic

R90 = from_wolfram(90)
R110 = from_wolfram(110)
R170 = from_wolfram(170)
R218 = from_wolfram(218)
R204 = from_wolfram(204)
R0 = from_wolfram(0)


def all_cyclic(n):
    for v in range(2**n):
        yield CyclicWord(2, tuple((v >> i) & 1 for i in range(n)))


def test_rescale_identity_params():
    for rule in (R90, R110, R218):
        rs = rescale(rule, RescaleParams(1, 1, 0))
        for n in range(1, 11):
            for c in all_cyclic(n):
                assert step_cyclic(rs, c) == step_cyclic(rule, c)


def test_rescale_shift_inverse_is_identity():
    rs = canonicalize(rescale(R170, RescaleParams(1, 1, 1)))
    assert rs.radius == 0 and rs.table == (0, 1)


def test_rescale_radius_formula():
    assert rescale(R90, RescaleParams(2, 1, 0)).radius == 1
    assert rescale(R90, RescaleParams(1, 2, 0)).radius == 2
    assert rescale(R90, RescaleParams(3, 1, 2)).radius == 1
    assert rescale(R90, RescaleParams(1, 1, 2)).radius == 3


def test_pack_unpack_roundtrip_words():
    w = Word(2, (1, 0, 1, 1, 0, 0))
    assert unpack_word(pack_word(w, 2), 2, 2) == w
    assert unpack_word(pack_word(w, 3), 3, 2) == w
    with pytest.raises(ValueError):
        pack_word(Word(2, (1, 0, 1)), 2)


@pytest.mark.parametrize("code", [90, 110, 218])
@pytest.mark.parametrize("m", [2, 3])
def test_packed_step_equals_plain_steps(code, m):
    rule = from_wolfram(code)
    rs = rescale(rule, RescaleParams(m, 1, 0))
    for n in range(m, 13, m):
        for c in all_cyclic(n):
            packed = pack_cyclic(c, m)
            lhs = unpack_cyclic(step_cyclic(rs, packed), m, 2)
            assert lhs == step_cyclic(rule, c)


def test_rescale_t_z_composition():
    # <F>^{1,2,0}: one packed step equals two plain steps
    rs = rescale(R110, RescaleParams(1, 2, 0))
    for n in range(1, 10):
        for c in all_cyclic(n):
            assert step_cyclic(rs, c) == step_cyclic(R110, step_cyclic(R110, c))


def test_rescale_table_cap():
    with pytest.raises(GuardError):
        rescale(R90, RescaleParams(3, 3, 2), table_cap=1 << 10)


def test_subautomaton_identity():
    emb = is_subautomaton(R90, R90)
    assert emb is not None and emb.map == (0, 1)


def test_subautomaton_constant_not_in_identity():
    assert is_subautomaton(R0, R204) is None


def test_subautomaton_layer_embedding():
    prod, spec = product([R90, R170])
    emb = is_subautomaton(R90, prod)
    assert emb is not None
    # verify the commuting property on cyclic words up to length 8
    iota = emb.map
    for n in range(1, 9):
        for c in all_cyclic(n):
            lifted = CyclicWord(prod.states, tuple(iota[v] for v in c.period))
            lhs = CyclicWord(
                prod.states, tuple(iota[v] for v in step_cyclic(R90, c).period)
            )
            assert step_cyclic(prod, lifted) == lhs


def test_subautomaton_guard():
    from ca_commlab.algebra import make_layered_rule

    big, _ = make_layered_rule([3, 3, 3], 1, lambda nh: nh[1], state_cap=256)
    with pytest.raises(GuardError):
        is_subautomaton(big, big, max_states=8)


def test_product_componentwise_and_projections():
    prod, spec = product([R170, from_wolfram(240)])
    assert prod.states == 4
    p0 = project_layer(prod, spec, 0)
    p1 = project_layer(prod, spec, 1)
    assert p0.table == R170.table
    assert p1.table == from_wolfram(240).table
    # opposite shifts: component 0 moves left, component 1 moves right
    c = CyclicWord(4, tuple(spec.encode(p) for p in [(1, 0), (0, 1), (0, 0), (0, 0)]))
    decoded = [spec.decode(v) for v in step_cyclic(prod, c).period]
    assert [d[0] for d in decoded] == [0, 0, 0, 1]
    assert [d[1] for d in decoded] == [0, 0, 1, 0]


def test_product_state_cap():
    from ca_commlab.algebra import make_layered_rule

    with pytest.raises(GuardError):
        make_layered_rule([7, 7, 7], 1, lambda nh: nh[1], state_cap=256)


def test_simulates_reflexive():
    w = simulates(R90, R90, max_m=1, max_t=1, max_z=0)
    assert w is not None
    assert (w.inner.m, w.inner.t, w.inner.z) == (1, 1, 0)
    assert (w.outer.m, w.outer.t, w.outer.z) == (1, 1, 0)


def test_simulates_shift_into_packed_shift():
    big = rescale(R170, RescaleParams(2, 2, 0))
    w = simulates(R170, big, max_m=2, max_t=2, max_z=1)
    assert w is not None


def test_simulates_no_witness_within_bounds():
    assert simulates(R90, R0, max_m=3, max_t=3, max_z=2) is None
