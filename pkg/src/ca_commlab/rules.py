"""Finite local rules for 1D cellular automata.

States are integers 0..q-1. A neighborhood (u_1, ..., u_{2r+1}) is indexed
in base q with the leftmost cell most significant, so table lookup is O(1)
and the on-disk format is stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional


class GuardError(Exception):
    """An exhaustive search or table build would exceed its configured cap."""


@dataclass(frozen=True)
class Rule:
    """A local CA rule: q states, radius r, dense transition table."""

    states: int
    radius: int
    table: tuple[int, ...]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        q, r = self.states, self.radius
        if q < 2:
            raise ValueError(f"need at least 2 states, got {q}")
        if r < 0:
            raise ValueError(f"radius must be >= 0, got {r}")
        if len(self.table) != q ** (2 * r + 1):
            raise ValueError(
                f"table length {len(self.table)} != {q}^{2 * r + 1}"
            )
        if any(not (0 <= v < q) for v in self.table):
            raise ValueError("table entry out of state range")

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def __call__(self, *neighborhood: int) -> int:
        """Apply the local rule to one neighborhood of 2r+1 states."""
        idx = 0
        for v in neighborhood:
            idx = idx * self.states + v
        return self.table[idx]

    @property
    def is_canonical(self) -> bool:
        return self.radius == 0 or not _drops_both_ends(self)

    def key(self) -> tuple:
        """Identity of the rule up to naming; usable as a dict key."""
        return (self.states, self.radius, self.table)

    def with_name(self, name: str) -> "Rule":
        return replace(self, name=name)


def make_rule(q: int, r: int, table: Iterable[int], name: str | None = None) -> Rule:
    """Build a rule from an explicit table, validating dimensions and entries."""
    return Rule(states=q, radius=r, table=tuple(table), name=name)


def from_wolfram(code: int) -> Rule:
    """The elementary (q=2, r=1) rule with the given Wolfram number.

    Bit (4a+2b+c) of the code is the image of neighborhood (a, b, c).
    """
    if not (0 <= code <= 255):
        raise ValueError(f"Wolfram code must be in 0..255, got {code}")
    table = tuple((code >> i) & 1 for i in range(8))
    return Rule(states=2, radius=1, table=table, name=f"eca:{code}")


def _depends_on_first(rule: Rule) -> bool:
    q, r = rule.states, rule.radius
    tail = q ** (2 * r)
    for rest in range(tail):
        ref = rule.table[rest]
        for a in range(1, q):
            if rule.table[a * tail + rest] != ref:
                return True
    return False


def _depends_on_last(rule: Rule) -> bool:
    q = rule.states
    n = len(rule.table)
    for head in range(0, n, q):
        ref = rule.table[head]
        for c in range(1, q):
            if rule.table[head + c] != ref:
                return True
    return False


def _drops_both_ends(rule: Rule) -> bool:
    return not _depends_on_first(rule) and not _depends_on_last(rule)


def canonicalize(rule: Rule) -> Rule:
    """Reduce the radius while the table ignores both extremal positions.

    The returned rule has the same global map; iterating the reduction to a
    fixpoint yields the canonical local representation of smallest radius.
    """
    cur = rule
    while cur.radius >= 1 and _drops_both_ends(cur):
        q, r = cur.states, cur.radius
        # the inner table: fix both ends to 0 (they are ignored anyway)
        tail = q ** (2 * r)
        inner_len = q ** (2 * r - 1)
        table = tuple(cur.table[0 * tail + i * q + 0] for i in range(inner_len))
        cur = Rule(states=q, radius=r - 1, table=table, name=cur.name)
    return cur


def pad_radius(rule: Rule, r: int) -> Rule:
    """Lift a rule to a larger radius by ignoring the extra end cells."""
    if r < rule.radius:
        raise ValueError(f"cannot pad radius {rule.radius} down to {r}")
    if r == rule.radius:
        return rule
    q = rule.states
    extra = r - rule.radius
    width = 2 * r + 1
    table = []
    for idx in range(q ** width):
        cells = decode_word(idx, q, width)
        inner = cells[extra : width - extra]
        table.append(rule(*inner))
    return Rule(states=q, radius=r, table=tuple(table), name=rule.name)


def decode_word(idx: int, q: int, length: int) -> tuple[int, ...]:
    """Base-q digits of idx, leftmost most significant, padded to length."""
    cells = [0] * length
    for i in range(length - 1, -1, -1):
        cells[i] = idx % q
        idx //= q
    return tuple(cells)


def encode_word(cells: Iterable[int], q: int) -> int:
    idx = 0
    for v in cells:
        idx = idx * q + v
    return idx


def to_json(rule: Rule) -> str:
    doc = {
        "states": rule.states,
        "radius": rule.radius,
        "table": list(rule.table),
        "name": rule.name or "",
    }
    return json.dumps(doc, sort_keys=True)


def from_json(text: str) -> Rule:
    doc = json.loads(text)
    return Rule(
        states=int(doc["states"]),
        radius=int(doc["radius"]),
        table=tuple(int(v) for v in doc["table"]),
        name=doc.get("name") or None,
    )


def save_rule(rule: Rule, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(to_json(rule) + "\n")


def load_rule(path: str) -> Rule:
    with open(path) as fh:
        return from_json(fh.read())
