"""Structural tests on rules: dependency width, linearity, reversibility."""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .rules import GuardError, Rule, canonicalize, decode_word

DEFAULT_ENUM_CAP = 1 << 22


def _all_words_grid(q: int, length: int) -> np.ndarray:
    """(q^length, length) array of all words in base-q index order."""
    total = q**length
    idx = np.arange(total)
    grid = np.empty((total, length), dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        grid[:, pos] = idx % q
        idx //= q
    return grid


def _iterate_grid(rule: Rule, grid: np.ndarray, t: int) -> np.ndarray:
    """Apply the local map t times to every row of a word grid."""
    q, r = rule.states, rule.radius
    table = np.asarray(rule.table, dtype=np.int64)
    w = grid
    if r == 0:
        for _ in range(t):
            w = table[w]
        return w
    for _ in range(t):
        out_len = w.shape[1] - 2 * r
        nh = np.zeros((w.shape[0], out_len), dtype=np.int64)
        for d in range(2 * r + 1):
            nh = nh * q + w[:, d : d + out_len]
        w = table[nh]
    return w


def dependency_width(rule: Rule, n: int, enum_cap: int = DEFAULT_ENUM_CAP) -> int:
    """Number of input positions of f^n on which its value genuinely depends.

    Found by single-position perturbation over all words of length 2rn+1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rule = canonicalize(rule)
    q, r = rule.states, rule.radius
    length = 2 * r * n + 1
    if q**length > enum_cap:
        raise GuardError(f"{q}^{length} words exceeds enumeration cap {enum_cap}")
    values = _iterate_grid(rule, _all_words_grid(q, length), n)[:, 0]
    depends = 0
    for pos in range(length):
        v = values.reshape(q**pos, q, q ** (length - 1 - pos))
        if any(not np.array_equal(v[:, a, :], v[:, 0, :]) for a in range(1, q)):
            depends += 1
    return depends


def _check_semigroup(q: int, op, e: int) -> None:
    for a in range(q):
        if op[e][a] != a or op[a][e] != a:
            raise ValueError(f"{e} is not neutral for the given operation")
    for a in range(q):
        for b in range(q):
            for c in range(q):
                if op[op[a][b]][c] != op[a][op[b][c]]:
                    raise ValueError("operation is not associative")


XOR = ((0, 1), (1, 0))


def is_linear(rule: Rule, oplus, e: int) -> bool:
    """True iff f(u + v) = f(u) + f(v) for all neighborhood pairs u, v.

    `oplus` is a q x q table that must define a semigroup with neutral
    element e; both facts are verified before the scan.
    """
    q = rule.states
    op = [[int(oplus[a][b]) for b in range(q)] for a in range(q)]
    _check_semigroup(q, op, e)
    width = rule.width
    total = q**width
    words = [decode_word(i, q, width) for i in range(total)]
    values = [rule(*u) for u in words]
    for iu, u in enumerate(words):
        fu = values[iu]
        for iv, v in enumerate(words):
            s = tuple(op[a][b] for a, b in zip(u, v))
            if rule(*s) != op[fu][values[iv]]:
                return False
    return True


def is_reversible(rule: Rule, max_nodes: int = 4096) -> bool:
    """Exact injectivity test on all bi-infinite configurations.

    Pair construction over the de Bruijn graph: a node is an ordered pair of
    2r-windows; an edge extends both windows by one cell under equal rule
    outputs.  Bi-infinite label-equal path pairs correspond exactly to config
    pairs with equal images, so the rule is non-injective iff an off-diagonal
    node survives trimming to the subgraph of nodes that lie on bi-infinite
    paths.  The trimming runs as per-label boolean matrix products, which
    keeps 40-state rules tractable.
    """
    rule = canonicalize(rule)
    q, r = rule.states, rule.radius
    if r == 0:
        return sorted(rule.table) == list(range(q))
    n_nodes = q ** (2 * r)
    if n_nodes > max_nodes:
        raise GuardError(f"de Bruijn pair graph needs {n_nodes}^2 nodes, cap {max_nodes}^2")
    m = q ** (2 * r - 1)
    labels = np.asarray(rule.table, dtype=np.int64).reshape(n_nodes, q)

    # per-label adjacency of the de Bruijn graph: G[l][x, (x mod m)*q + w] = 1
    rows = np.repeat(np.arange(n_nodes), q)
    cols = (np.arange(n_nodes) % m).repeat(q) * q + np.tile(np.arange(q), n_nodes)
    labs = labels.reshape(-1)
    adj = []
    for l in range(q):
        mask = labs == l
        adj.append(
            sparse.csr_matrix(
                (np.ones(int(mask.sum()), dtype=np.float32), (rows[mask], cols[mask])),
                shape=(n_nodes, n_nodes),
            )
        )

    alive = np.ones((n_nodes, n_nodes), dtype=bool)
    offdiag = ~np.eye(n_nodes, dtype=bool)
    while True:
        if not (alive & offdiag).any():
            return True
        a = alive.astype(np.float32)
        has_out = np.zeros_like(alive)
        has_in = np.zeros_like(alive)
        for g in adj:
            if g.nnz == 0:
                continue
            ga = g @ a
            has_out |= (ga @ g.T) > 0.5
            gta = g.T @ a
            has_in |= (gta @ g) > 0.5
        new_alive = alive & has_out & has_in
        if new_alive.sum() == alive.sum():
            break
        alive = new_alive
    return not (alive & offdiag).any()
