"""Rescaling, products, and the sub-automaton / simulation relations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .rules import GuardError, Rule, canonicalize, decode_word, encode_word, pad_radius
from .words import CyclicWord, Word

DEFAULT_TABLE_CAP = 1 << 21
DEFAULT_STATE_CAP = 256


@dataclass(frozen=True)
class RescaleParams:
    """Packing m, iterations t, shift z for the block transform of a rule."""

    m: int = 1
    t: int = 1
    z: int = 0

    def __post_init__(self):
        if self.m < 1 or self.t < 1:
            raise ValueError("m and t must be >= 1")


@dataclass(frozen=True)
class Embedding:
    """An injective state map that commutes with the two global rules."""

    map: tuple[int, ...]  # state s of F maps to map[s] in G

    def __post_init__(self):
        if len(set(self.map)) != len(self.map):
            raise ValueError("embedding map must be injective")

    def apply_word(self, w: Word, target_states: int) -> Word:
        return Word(target_states, tuple(self.map[c] for c in w.cells))

    def apply_cyclic(self, c: CyclicWord, target_states: int) -> CyclicWord:
        return CyclicWord(target_states, tuple(self.map[v] for v in c.period))


def pack_word(w: Word, m: int) -> Word:
    """Group cells into blocks of m; each block becomes one q^m state."""
    if len(w) % m != 0:
        raise ValueError(f"length {len(w)} not a multiple of m = {m}")
    q = w.states
    packed = tuple(
        encode_word(w.cells[i : i + m], q) for i in range(0, len(w), m)
    )
    return Word(q**m, packed)


def unpack_word(w: Word, m: int, q: int) -> Word:
    if w.states != q**m:
        raise ValueError(f"expected {q}^{m} states, got {w.states}")
    cells = []
    for b in w.cells:
        cells.extend(decode_word(b, q, m))
    return Word(q, tuple(cells))


def pack_cyclic(c: CyclicWord, m: int) -> CyclicWord:
    w = pack_word(Word(c.states, c.period), m)
    return CyclicWord(w.states, w.cells)


def unpack_cyclic(c: CyclicWord, m: int, q: int) -> CyclicWord:
    w = unpack_word(Word(c.states, c.period), m, q)
    return CyclicWord(q, w.cells)


def rescale(rule: Rule, params: RescaleParams, table_cap: int = DEFAULT_TABLE_CAP) -> Rule:
    """The rescaled rule: pack m cells per block, run t steps, shift by z.

    Positive z shifts content to the right.  The result acts on q^m states
    with the least radius that makes the packed map local,
    r' = ceil((r t + |z|) / m).
    """
    m, t, z = params.m, params.t, params.z
    q, r = rule.states, rule.radius
    r2 = -(-(r * t + abs(z)) // m)
    width = 2 * r2 + 1
    in_len = m * width
    if q**in_len > table_cap:
        raise GuardError(
            f"rescale table needs {q}^{in_len} neighborhoods, cap {table_cap}"
        )
    new_q = q**m
    # block 0 of the output covers original cells -z .. -z+m-1 of F^t;
    # the input blocks cover original cells -r2*m .. r2*m + m - 1.
    total = new_q**width
    idx = np.arange(total)
    cells = np.empty((total, in_len), dtype=np.int64)
    for pos in range(in_len - 1, -1, -1):
        cells[:, pos] = idx % q
        idx //= q
    table_np = np.asarray(rule.table, dtype=np.int64)
    w = cells
    for _ in range(t):
        if r == 0:
            w = table_np[w]
        else:
            out_len = w.shape[1] - 2 * r
            nh = np.zeros((total, out_len), dtype=np.int64)
            for d in range(2 * r + 1):
                nh = nh * q + w[:, d : d + out_len]
            w = table_np[nh]
    # w[:, j] is the value at original cell -r2*m + r*t + j after t steps
    start = (-z) + r2 * m - r * t
    out = np.zeros(total, dtype=np.int64)
    for j in range(m):
        out = out * q + w[:, start + j]
    name = f"<{rule.name or 'rule'}>^{{{m},{t},{z}}}"
    return Rule(states=new_q, radius=r2, table=tuple(int(v) for v in out), name=name)


ProductUpdate = Callable[[Sequence[tuple[int, ...]]], tuple[int, ...]]


@dataclass(frozen=True)
class LayerSpec:
    """State-count list of a layered rule plus the packing convention."""

    counts: tuple[int, ...]

    def encode(self, parts: Sequence[int]) -> int:
        s = 0
        for c, n in zip(parts, self.counts):
            s = s * n + c
        return s

    def decode(self, state: int) -> tuple[int, ...]:
        parts = [0] * len(self.counts)
        for i in range(len(self.counts) - 1, -1, -1):
            parts[i] = state % self.counts[i]
            state //= self.counts[i]
        return tuple(parts)

    @property
    def states(self) -> int:
        s = 1
        for n in self.counts:
            s *= n
        return s


def make_layered_rule(
    counts: Sequence[int],
    radius: int,
    update: ProductUpdate,
    name: str | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> tuple[Rule, LayerSpec]:
    """Build a rule over a product state set from a neighborhood update function.

    `update` receives the 2r+1 neighborhood as tuples of layer values and
    returns the new tuple for the center cell; layers may read each other
    freely, which is how controlled layers are wired.
    """
    spec = LayerSpec(tuple(counts))
    q = spec.states
    if q > state_cap:
        raise GuardError(f"product would have {q} states, cap {state_cap}")
    width = 2 * radius + 1
    table = []
    for idx in range(q**width):
        nh = [spec.decode(s) for s in decode_word(idx, q, width)]
        out = update(nh)
        table.append(spec.encode(out))
    return Rule(states=q, radius=radius, table=tuple(table), name=name), spec


def product(rules: Sequence[Rule], state_cap: int = DEFAULT_STATE_CAP) -> tuple[Rule, LayerSpec]:
    """Componentwise product of rules, radii padded to the largest."""
    if not rules:
        raise ValueError("need at least one rule")
    r = max(rl.radius for rl in rules)
    padded = [pad_radius(rl, r) for rl in rules]

    def update(nh):
        return tuple(
            rl(*(cell[i] for cell in nh)) for i, rl in enumerate(padded)
        )

    name = " x ".join(rl.name or "?" for rl in rules)
    return make_layered_rule(
        [rl.states for rl in rules], r, update, name=name, state_cap=state_cap
    )


def project_layer(rule: Rule, spec: LayerSpec, layer: int) -> Rule:
    """Extract one layer of an uncoupled product as a standalone rule.

    Other layers are pinned to 0, which is only faithful when the layer does
    not read them (true for plain products).
    """
    q = spec.counts[layer]
    width = rule.width
    table = []
    for idx in range(q**width):
        cells = decode_word(idx, q, width)
        full = [
            spec.encode(tuple(c if i == layer else 0 for i in range(len(spec.counts))))
            for c in cells
        ]
        table.append(spec.decode(rule(*full))[layer])
    return Rule(states=q, radius=rule.radius, table=tuple(table))


def is_subautomaton(
    f: Rule, g: Rule, max_states: int = 8, constraint_cap: int = 1 << 20
) -> Optional[Embedding]:
    """Search for an injective state map with iota(f(...)) = g(iota(...)).

    The commuting condition is checked over all neighborhoods of the common
    radius, evaluating each rule on its own central cells so nothing gets
    padded or materialized.  Injections are enumerated by backtracking and
    each constraint is checked as soon as the last state it mentions gets
    assigned, so dead branches die early.  Rules with more than `max_states`
    source states are rejected explicitly rather than silently skipped.
    """
    if f.states > max_states:
        raise GuardError(f"{f.states} source states exceeds cap {max_states}")
    if f.states > g.states:
        return None
    f, g = canonicalize(f), canonicalize(g)
    r = max(f.radius, g.radius)
    width = 2 * r + 1
    qf, qg = f.states, g.states
    total = qf**width
    if total > constraint_cap:
        raise GuardError(f"{qf}^{width} commuting constraints exceeds cap {constraint_cap}")

    idx = np.arange(total)
    grid = np.empty((total, width), dtype=np.int64)
    for pos in range(width - 1, -1, -1):
        grid[:, pos] = idx % qf
        idx //= qf
    ef, eg = r - f.radius, r - g.radius
    fidx = np.zeros(total, dtype=np.int64)
    for d in range(ef, width - ef):
        fidx = fidx * qf + grid[:, d]
    vals = np.asarray(f.table, dtype=np.int64)[fidx]
    gcells = grid[:, eg : width - eg]
    level = np.maximum(grid.max(axis=1), vals)

    by_last: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in range(qf)]
    for s in range(qf):
        sel = np.nonzero(level == s)[0]
        by_last[s] = [
            (tuple(int(c) for c in gcells[i]), int(vals[i])) for i in sel
        ]

    assign = [-1] * qf
    used = [False] * qg
    gtable = g.table

    def check(s: int) -> bool:
        for nh, v in by_last[s]:
            gi = 0
            for c in nh:
                gi = gi * qg + assign[c]
            if gtable[gi] != assign[v]:
                return False
        return True

    def extend(s: int) -> bool:
        if s == qf:
            return True
        for tgt in range(qg):
            if used[tgt]:
                continue
            assign[s] = tgt
            used[tgt] = True
            if check(s) and extend(s + 1):
                return True
            assign[s] = -1
            used[tgt] = False
        return False

    if extend(0):
        return Embedding(tuple(assign))
    return None


@dataclass(frozen=True)
class SimulationWitness:
    inner: RescaleParams  # applied to the simulated rule
    outer: RescaleParams  # applied to the simulating rule
    embedding: Embedding


def simulates(
    f: Rule,
    g: Rule,
    max_m: int = 3,
    max_t: int = 3,
    max_z: int = 2,
    max_states: int = 8,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> Optional[SimulationWitness]:
    """Bounded search for rescalings with <F>^{m1,t1,z1} embedded in <G>^{m2,t2,z2}.

    Returns the first witness in lexicographic parameter order, or None when
    no witness exists within the bounds -- which is not a disproof of the
    unbounded relation.  Guard overflows raise GuardError instead.
    """
    zs = sorted(range(-max_z, max_z + 1), key=lambda z: (abs(z), -z))
    params = [
        RescaleParams(m, t, z)
        for m in range(1, max_m + 1)
        for t in range(1, max_t + 1)
        for z in zs
    ]
    rescaled_f: dict[RescaleParams, Rule] = {}
    rescaled_g: dict[RescaleParams, Rule] = {}
    tried: set[tuple] = set()  # distinct (f-table, g-table) pairs already searched
    for p1 in params:
        if f.states**p1.m > max_states:
            continue
        for p2 in params:
            if f.states**p1.m > g.states**p2.m:
                continue  # no injection can exist
            if p1 not in rescaled_f:
                rescaled_f[p1] = canonicalize(rescale(f, p1, table_cap))
            if p2 not in rescaled_g:
                rescaled_g[p2] = canonicalize(rescale(g, p2, table_cap))
            fr, gr = rescaled_f[p1], rescaled_g[p2]
            pair_key = (fr.key(), gr.key())
            if pair_key in tried:
                continue  # identical search already failed at earlier parameters
            tried.add(pair_key)
            emb = is_subautomaton(fr, gr, max_states)
            if emb is not None:
                return SimulationWitness(p1, p2, emb)
    return None
