"""Words, cyclic words, perturbed configurations, and how rules act on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .rules import Rule


@dataclass(frozen=True)
class Word:
    """A finite sequence of states over 0..q-1."""

    states: int
    cells: tuple[int, ...]

    def __post_init__(self):
        if any(not (0 <= c < self.states) for c in self.cells):
            raise ValueError("cell out of state range")

    def __len__(self) -> int:
        return len(self.cells)

    def __str__(self) -> str:
        if self.states <= 10:
            return "".join(str(c) for c in self.cells)
        return ",".join(str(c) for c in self.cells)


@dataclass(frozen=True)
class CyclicWord:
    """One spatial period of a periodic configuration p_u, p_u[i] = u[i mod l]."""

    states: int
    period: tuple[int, ...]

    def __post_init__(self):
        if len(self.period) == 0:
            raise ValueError("cyclic word needs a nonempty period")
        if any(not (0 <= c < self.states) for c in self.period):
            raise ValueError("cell out of state range")

    def __len__(self) -> int:
        return len(self.period)

    def at(self, z: int) -> int:
        return self.period[z % len(self.period)]

    def rotate(self, k: int) -> "CyclicWord":
        l = len(self.period)
        k %= l
        return CyclicWord(self.states, self.period[k:] + self.period[:k])

    def __str__(self) -> str:
        if self.states <= 10:
            return "".join(str(c) for c in self.period)
        return ",".join(str(c) for c in self.period)


@dataclass(frozen=True)
class PerturbedConfig:
    """A periodic background plus a finite window of explicit cells.

    Outside [window_offset, window_offset + len(window) - 1] the configuration
    equals the background by definition.  In normalized form the first and
    last window cells differ from the background (or the window is empty and
    the configuration is exactly p_u).
    """

    background: CyclicWord
    window_offset: int
    window: tuple[int, ...]

    def __post_init__(self):
        q = self.background.states
        if any(not (0 <= c < q) for c in self.window):
            raise ValueError("window cell out of state range")

    @property
    def states(self) -> int:
        return self.background.states

    def at(self, z: int) -> int:
        off = self.window_offset
        if off <= z < off + len(self.window):
            return self.window[z - off]
        return self.background.at(z)

    def is_background(self) -> bool:
        return len(self.window) == 0

    def extent(self) -> Optional[tuple[int, int]]:
        """(leftmost, rightmost) difference positions, or None if none."""
        if not self.window:
            return None
        return (self.window_offset, self.window_offset + len(self.window) - 1)

    def normalized(self) -> "PerturbedConfig":
        bg, off, win = self.background, self.window_offset, list(self.window)
        lo, hi = 0, len(win)
        while lo < hi and win[lo] == bg.at(off + lo):
            lo += 1
        while hi > lo and win[hi - 1] == bg.at(off + hi - 1):
            hi -= 1
        if lo == hi:
            return PerturbedConfig(bg, 0, ())
        return PerturbedConfig(bg, off + lo, tuple(win[lo:hi]))


def word(q: int, cells) -> Word:
    """Convenience constructor; accepts '1101001', [1,1,0,...], or a Word."""
    if isinstance(cells, Word):
        return cells
    return Word(q, parse_cells(cells, q))


def cyclic(q: int, cells) -> CyclicWord:
    if isinstance(cells, CyclicWord):
        return cells
    return CyclicWord(q, parse_cells(cells, q))


def parse_cells(cells, q: int) -> tuple[int, ...]:
    if isinstance(cells, str):
        if "," in cells:
            return tuple(int(p) for p in cells.split(","))
        if q > 10:
            # single-token numeric string still allowed for one cell
            if cells.isdigit() and int(cells) < q and len(cells) > 1:
                return (int(cells),)
        return tuple(int(c) for c in cells)
    return tuple(int(c) for c in cells)


def _check_rule_word(rule: Rule, w: Word) -> None:
    if w.states != rule.states:
        raise ValueError(f"word over {w.states} states, rule over {rule.states}")


def apply_local(rule: Rule, w: Word) -> Word:
    """One application of the local map f: Q^n -> Q^(n-2r).

    For r = 0 the map is cellwise and the length is preserved.
    """
    _check_rule_word(rule, w)
    q, r = rule.states, rule.radius
    cells = w.cells
    if r == 0:
        return Word(q, tuple(rule.table[c] for c in cells))
    if len(cells) < 2 * r + 1:
        raise ValueError(f"word of length {len(cells)} shorter than 2r+1 = {2 * r + 1}")
    table = rule.table
    width = 2 * r + 1
    # rolling base-q neighborhood index
    mod = q ** (width - 1)
    idx = 0
    for c in cells[: width - 1]:
        idx = idx * q + c
    out = []
    for i in range(width - 1, len(cells)):
        idx = (idx % mod) * q + cells[i]
        out.append(table[idx])
    return Word(q, tuple(out))


def iterate_local(rule: Rule, w: Word, t: int) -> Word:
    """t-fold local iteration f^t; requires 1 <= t <= floor((|w|-1)/2r) for r >= 1."""
    r = rule.radius
    if r == 0:
        if t < 1:
            raise ValueError("t must be >= 1")
        out = w
        for _ in range(t):
            out = apply_local(rule, out)
        return out
    tmax = (len(w) - 1) // (2 * r)
    if not (1 <= t <= tmax):
        raise ValueError(f"t = {t} out of range 1..{tmax} for |w| = {len(w)}")
    out = w
    for _ in range(t):
        out = apply_local(rule, out)
    return out


def collapse(rule: Rule, w: Word) -> Word:
    """Iterate the local map as long as the word is long enough.

    For r >= 1 the result has length ((|w|-1) mod 2r) + 1.  For r = 0 the
    paper-style iteration count is undefined, so collapse is a single
    cellwise application.
    """
    r = rule.radius
    if len(w) == 0:
        raise ValueError("empty word")
    if r == 0:
        return apply_local(rule, w)
    out = w
    while len(out) >= 2 * r + 1:
        out = apply_local(rule, out)
    return out


def step_cyclic(rule: Rule, c: CyclicWord) -> CyclicWord:
    """One synchronous step on a spatially periodic configuration."""
    if c.states != rule.states:
        raise ValueError(f"cyclic word over {c.states} states, rule over {rule.states}")
    q, r = rule.states, rule.radius
    cells = c.period
    n = len(cells)
    if r == 0:
        return CyclicWord(q, tuple(rule.table[v] for v in cells))
    table = rule.table
    width = 2 * r + 1
    out = []
    for z in range(n):
        idx = 0
        for d in range(-r, r + 1):
            idx = idx * q + cells[(z + d) % n]
        out.append(table[idx])
    return CyclicWord(q, tuple(out))


def step_perturbed(
    rule: Rule, pc: PerturbedConfig, next_background: CyclicWord | None = None
) -> PerturbedConfig:
    """One synchronous step of background + window, renormalized.

    The window can grow by at most r per side per step.  Passing the
    precomputed image of the background avoids recomputing it when many
    instances share one background (see problems.BackgroundOrbit).
    """
    r = rule.radius
    bg_next = next_background if next_background is not None else step_cyclic(rule, pc.background)
    if pc.is_background():
        return PerturbedConfig(bg_next, 0, ())
    off, win = pc.window_offset, pc.window
    lo, hi = off - r, off + len(win) - 1 + r  # inclusive output span
    new = []
    for z in range(lo, hi + 1):
        if r == 0:
            new.append(rule.table[pc.at(z)])
        else:
            idx = 0
            for d in range(-r, r + 1):
                idx = idx * rule.states + pc.at(z + d)
            new.append(rule.table[idx])
    return PerturbedConfig(bg_next, lo, tuple(new)).normalized()
