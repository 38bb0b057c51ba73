"""Split matrices, one-round and exact communication cost, fooling sets."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .analysis import is_linear
from .rules import GuardError, Rule, canonicalize
from .words import CyclicWord, Word, collapse
from .problems import cycle_length, invasion, pred

DEFAULT_ENTRY_CAP = 1 << 22
EXACT_CLASS_CAP = 12


def _worker_count() -> int:
    """Thread cap for row-block tabulation, from CA_COMMLAB_THREADS."""
    try:
        return max(1, int(os.environ.get("CA_COMMLAB_THREADS", "1")))
    except ValueError:
        return 1


def _map_rows(fn, row_indices) -> list:
    """Apply fn to row indices, optionally on worker threads, order kept."""
    workers = _worker_count()
    if workers == 1:
        return [fn(r) for r in row_indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, row_indices))


@dataclass(frozen=True)
class Problem:
    """Which word problem a split matrix tabulates."""

    kind: str  # "PRED" | "CYCLE" | "INVA"
    k: int = 1
    background: Optional[CyclicWord] = None
    step_budget: int = 10_000
    width_budget: int = 1_000

    @staticmethod
    def prediction() -> "Problem":
        return Problem("PRED")

    @staticmethod
    def cycle(k: int) -> "Problem":
        return Problem("CYCLE", k=k)

    @staticmethod
    def invasion_over(u: CyclicWord, step_budget: int = 10_000, width_budget: int = 1_000) -> "Problem":
        return Problem("INVA", background=u, step_budget=step_budget, width_budget=width_budget)


@dataclass(frozen=True)
class PredMatrix:
    """The |Q|^i x |Q|^(n-i) value matrix of a split problem."""

    states: int
    n: int
    i: int
    problem: str
    entries: np.ndarray = field(compare=False)
    rule_name: str = ""

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


def _bulk_pred(rule: Rule, n: int) -> np.ndarray:
    """pred value for every length-n word, in base-q index order."""
    q, r = rule.states, rule.radius
    total = q**n
    idx = np.arange(total)
    w = np.empty((total, n), dtype=np.int64)
    for posn in range(n - 1, -1, -1):
        w[:, posn] = idx % q
        idx //= q
    table = np.asarray(rule.table, dtype=np.int64)
    if r == 0:
        return table[w[:, 0]].copy()
    while w.shape[1] >= 2 * r + 1:
        out_len = w.shape[1] - 2 * r
        nh = np.zeros((total, out_len), dtype=np.int64)
        for d in range(2 * r + 1):
            nh = nh * q + w[:, d : d + out_len]
        w = table[nh]
    return w[:, 0].copy()


def build_matrix(
    rule: Rule,
    n: int,
    i: int,
    problem: Problem = Problem.prediction(),
    entry_cap: int = DEFAULT_ENTRY_CAP,
) -> PredMatrix:
    """Tabulate the split problem over all (x, y) in Q^i x Q^(n-i).

    CYCLE entries evaluate the concatenation as a cyclic word; INVA entries
    must all be decided within the problem budgets or the build fails.
    """
    if not (1 <= i <= n - 1):
        raise ValueError(f"split i = {i} out of range 1..{n - 1}")
    rule = canonicalize(rule)
    q = rule.states
    if q**n > entry_cap:
        raise GuardError(f"{q}^{n} entries exceeds cap {entry_cap}")
    rows, cols = q**i, q ** (n - i)
    if problem.kind == "PRED":
        values = _bulk_pred(rule, n).reshape(rows, cols)
    elif problem.kind == "CYCLE":
        from .rules import decode_word

        cache: dict[tuple[int, ...], bool] = {}

        def cycle_row(row: int) -> list[int]:
            out = []
            for col in range(cols):
                cells = decode_word(row * cols + col, q, n)
                key = min(cells[s:] + cells[:s] for s in range(n))  # rotation class
                hit = cache.get(key)
                if hit is None:
                    hit = cycle_length(rule, CyclicWord(q, cells))[1] <= problem.k
                    cache[key] = hit
                out.append(1 if hit else 0)
            return out

        values = np.array(_map_rows(cycle_row, range(rows)), dtype=np.uint8)
    elif problem.kind == "INVA":
        if problem.background is None:
            raise ValueError("INVA matrices need a background word")
        from .rules import decode_word

        def inva_row(row: int) -> list[int]:
            out = []
            for col in range(cols):
                cells = decode_word(row * cols + col, q, n)
                verdict = invasion(
                    rule,
                    problem.background,
                    Word(q, cells),
                    step_budget=problem.step_budget,
                    width_budget=problem.width_budget,
                )
                if not verdict.decided:
                    raise GuardError(f"invasion undecided for x = {cells} within budgets")
                out.append(1 if verdict.outcome == "invasion" else 0)
            return out

        values = np.array(_map_rows(inva_row, range(rows)), dtype=np.uint8)
    else:
        raise ValueError(f"unknown problem kind {problem.kind!r}")
    arr = np.ascontiguousarray(values.astype(np.uint8))
    arr.setflags(write=False)
    return PredMatrix(
        states=q, n=n, i=i, problem=problem.kind, entries=arr, rule_name=rule.name or ""
    )


def one_round_cc(m: PredMatrix | np.ndarray) -> tuple[int, int, int]:
    """(#distinct rows, #distinct cols, bits); bits = ceil(log2 of the minimum).

    Counting distinct rows or columns gives the exact one-round cost, so the
    bit cost is the ceiling log of whichever party has fewer messages.
    """
    entries = m.entries if isinstance(m, PredMatrix) else np.asarray(m)
    row_msgs = np.unique(entries, axis=0).shape[0]
    col_msgs = np.unique(entries.T, axis=0).shape[0]
    bits = math.ceil(math.log2(min(row_msgs, col_msgs))) if min(row_msgs, col_msgs) > 1 else 0
    return row_msgs, col_msgs, bits


def exact_cc(
    m: PredMatrix | np.ndarray,
    depth_limit: Optional[int] = None,
    class_cap: int = EXACT_CLASS_CAP,
) -> Optional[int]:
    """Exact deterministic cost by recursion over row/column bipartitions.

    A rectangle costs 0 when one party can answer alone (all rows constant
    or all columns constant); otherwise 1 + the best max over bipartitions
    of row classes or column classes.  Identical rows (columns) are never
    separated, which is lossless.  Returns None when depth_limit is hit;
    raises GuardError when the deduplicated matrix exceeds class_cap.
    """
    entries = m.entries if isinstance(m, PredMatrix) else np.asarray(m)
    grid = tuple(tuple(int(v) for v in row) for row in entries)

    def dedup_rows(rows: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(set(rows)))

    def transpose(rows):
        return tuple(zip(*rows))

    limit = depth_limit if depth_limit is not None else 1 << 30

    @lru_cache(maxsize=None)
    def solve(rows: tuple[tuple[int, ...], ...]) -> int:
        # rows: deduplicated submatrix (row tuples over the current columns)
        cols = dedup_rows(transpose(rows))
        rows = dedup_rows(transpose(cols))
        if all(len(set(r)) == 1 for r in rows):
            return 0
        if all(len(set(c)) == 1 for c in cols):
            return 0
        if len(rows) > class_cap or len(cols) > class_cap:
            raise GuardError(
                f"{len(rows)}x{len(cols)} distinct classes exceed cap {class_cap}"
            )
        best = 1 << 30
        nr, nc = len(rows), len(cols)
        # bipartitions of row classes
        for mask in range(1, 1 << (nr - 1)):
            a = tuple(rows[j] for j in range(nr) if (mask >> j) & 1)
            b = tuple(rows[j] for j in range(nr) if not (mask >> j) & 1)
            cost = 1 + max(solve(a), solve(b))
            if cost < best:
                best = cost
        for mask in range(1, 1 << (nc - 1)):
            a = tuple(cols[j] for j in range(nc) if (mask >> j) & 1)
            b = tuple(cols[j] for j in range(nc) if not (mask >> j) & 1)
            cost = 1 + max(solve(transpose(a)), solve(transpose(b)))
            if cost < best:
                best = cost
        return best

    result = solve(dedup_rows(grid))
    solve.cache_clear()
    return None if result > limit else result


@dataclass(frozen=True)
class FoolingSet:
    """Input pairs witnessing a log-cardinality lower bound."""

    pairs: tuple[tuple[Word, Word], ...]
    target: int

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("empty fooling set")
        xs, ys = {len(x) for x, _ in self.pairs}, {len(y) for _, y in self.pairs}
        if len(xs) != 1 or len(ys) != 1:
            raise ValueError("all x parts (and all y parts) must have equal length")


def check_fooling_set(m: PredMatrix, s: FoolingSet) -> tuple[bool, Optional[int]]:
    """Validate the two fooling conditions against a matrix; bound if valid.

    Valid iff every diagonal value equals the target and every off-diagonal
    pair violates the target in at least one of its two cross positions.
    """
    from .rules import encode_word

    q = m.states
    idx = []
    for x, y in s.pairs:
        if len(x) != m.i or len(y) != m.n - m.i:
            raise ValueError("fooling pair does not match the matrix split")
        idx.append((encode_word(x.cells, q), encode_word(y.cells, q)))
    z = s.target
    for (rx, cy) in idx:
        if int(m.entries[rx, cy]) != z:
            return False, None
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            v1 = int(m.entries[idx[a][0], idx[b][1]])
            v2 = int(m.entries[idx[b][0], idx[a][1]])
            if v1 == z and v2 == z:
                return False, None
    return True, math.ceil(math.log2(len(idx))) if len(idx) > 1 else 0


@dataclass(frozen=True)
class SplitCost:
    i: int
    bits: int
    messages: int
    method: str


@dataclass(frozen=True)
class CcReport:
    """Per-split communication costs and their maximum (the cc value at n)."""

    rule_name: str
    problem: str
    n: int
    splits: tuple[SplitCost, ...]
    method: str

    @property
    def max_bits(self) -> int:
        return max(s.bits for s in self.splits)

    def as_dict(self) -> dict:
        return {
            "rule": self.rule_name,
            "problem": self.problem,
            "n": self.n,
            "method": self.method,
            "splits": [
                {"i": s.i, "bits": s.bits, "messages": s.messages, "method": s.method}
                for s in self.splits
            ],
            "max_bits": self.max_bits,
        }


def cc_profile(
    rule: Rule,
    n: int,
    problem: Problem = Problem.prediction(),
    method: str = "one-round",
    splits: Optional[Sequence[int]] = None,
    entry_cap: int = DEFAULT_ENTRY_CAP,
) -> CcReport:
    """Communication cost at every split 1..n-1 plus the maximum."""
    if method not in ("one-round", "exact"):
        raise ValueError(f"unknown method {method!r}")
    rule = canonicalize(rule)
    todo = list(splits) if splits is not None else list(range(1, n))
    costs = []
    for i in todo:
        m = build_matrix(rule, n, i, problem, entry_cap=entry_cap)
        rows, cols, bits1 = one_round_cc(m)
        if method == "one-round":
            costs.append(SplitCost(i=i, bits=bits1, messages=min(rows, cols), method=method))
        else:
            bits = exact_cc(m)
            assert bits is not None
            costs.append(SplitCost(i=i, bits=bits, messages=1 << bits, method=method))
    return CcReport(
        rule_name=rule.name or "", problem=problem.kind, n=n, splits=tuple(costs), method=method
    )


def reference_matrix(kind: str, n: int, entry_cap: int = DEFAULT_ENTRY_CAP) -> PredMatrix:
    """The classical hard 0/1 functions on n-bit pairs: EQ, IP, DISJ."""
    if 4**n > entry_cap:
        raise GuardError(f"4^{n} entries exceeds cap {entry_cap}")
    size = 1 << n
    x = np.arange(size)[:, None]
    y = np.arange(size)[None, :]
    if kind == "EQ":
        vals = (x == y).astype(np.uint8)
    elif kind == "IP":
        both = x & y
        pop = np.zeros_like(both)
        for b in range(n):
            pop += (both >> b) & 1
        vals = (pop % 2).astype(np.uint8)
    elif kind == "DISJ":
        vals = ((x & y) == 0).astype(np.uint8)
    else:
        raise ValueError(f"unknown reference function {kind!r}")
    vals.setflags(write=False)
    return PredMatrix(states=2, n=2 * n, i=n, problem=kind, entries=vals, rule_name=kind)


def linear_protocol_pred(
    rule: Rule, oplus, e: int, w: Word, i: int, verify: bool = True
) -> int:
    """One-round protocol value for a linear rule at split i.

    Each party collapses its own part padded with the neutral element and
    the two first letters are combined with the operation; by linearity this
    equals the direct prediction value.
    """
    if not (1 <= i <= len(w) - 1):
        raise ValueError(f"split {i} out of range for |w| = {len(w)}")
    if verify and not is_linear(rule, oplus, e):
        raise ValueError("rule is not linear under the given operation")
    rule = canonicalize(rule)
    q = rule.states
    x, y = w.cells[:i], w.cells[i:]
    alice = collapse(rule, Word(q, x + (e,) * len(y))).cells[0]
    bob = collapse(rule, Word(q, (e,) * len(x) + y)).cells[0]
    return int(oplus[alice][bob])
