"""The three canonical problems: prediction, cycle length, invasion."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .rules import GuardError, Rule, canonicalize
from .words import (
    CyclicWord,
    PerturbedConfig,
    Word,
    collapse,
    step_cyclic,
    step_perturbed,
)

DEFAULT_STEP_BUDGET = 10_000
DEFAULT_WIDTH_BUDGET = 1_000


def pred(rule: Rule, w: Word) -> int:
    """First letter of the fully collapsed word (the apex of the triangle)."""
    if len(w) == 0:
        raise ValueError("empty word")
    return collapse(canonicalize(rule), w).cells[0]


@dataclass(frozen=True)
class OrbitSignature:
    """Minimal preperiod and period of a spatially periodic orbit."""

    preperiod: int
    period: int
    period_words: tuple[CyclicWord, ...]


class BackgroundOrbit:
    """Memoized orbit of p_u under one rule; shared by many invasion calls."""

    def __init__(self, rule: Rule, u: CyclicWord, max_steps: Optional[int] = None):
        if u.states != rule.states:
            raise ValueError("background state count does not match the rule")
        self.rule = rule
        self._words: list[CyclicWord] = [u]
        self._index: dict[tuple[int, ...], int] = {u.period: 0}
        self._signature: Optional[OrbitSignature] = None
        self._max_steps = max_steps

    def word_at(self, t: int) -> CyclicWord:
        sig = self._signature
        if sig is not None and t >= sig.preperiod:
            return sig.period_words[(t - sig.preperiod) % sig.period]
        while t >= len(self._words):
            self._advance()
            if self._signature is not None:
                return self.word_at(t)
        return self._words[t]

    def _advance(self) -> None:
        nxt = step_cyclic(self.rule, self._words[-1])
        seen = self._index.get(nxt.period)
        if seen is not None:
            p = len(self._words) - seen
            self._signature = OrbitSignature(
                preperiod=seen,
                period=p,
                period_words=tuple(self._words[seen:]),
            )
            return
        if self._max_steps is not None and len(self._words) > self._max_steps:
            raise GuardError(f"orbit did not close within {self._max_steps} steps")
        self._index[nxt.period] = len(self._words)
        self._words.append(nxt)

    def signature(self) -> OrbitSignature:
        while self._signature is None:
            self._advance()
        return self._signature


def background_orbit(rule: Rule, u: CyclicWord, max_steps: Optional[int] = None) -> OrbitSignature:
    """Minimal (preperiod, period) of the orbit of p_u, by hashing iterates."""
    return BackgroundOrbit(rule, u, max_steps).signature()


def cycle_length(rule: Rule, u: CyclicWord) -> tuple[int, int]:
    """(preperiod t0, ultimate period lambda) of the orbit of p_u."""
    sig = background_orbit(rule, u)
    return sig.preperiod, sig.period


def cycle_pred(rule: Rule, k: int, u: CyclicWord) -> bool:
    """Whether the ultimate temporal period of p_u is at most k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return cycle_length(rule, u)[1] <= k


# ---------------------------------------------------------------------------
# invasion


@dataclass(frozen=True)
class InvasionVerdict:
    outcome: str  # "no_invasion" | "invasion" | "unknown"
    certificate: dict
    steps: int
    width: int

    @property
    def decided(self) -> bool:
        return self.outcome != "unknown"

    def as_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "certificate": self.certificate,
            "steps": self.steps,
            "width": self.width,
        }


# rule-specific structural deciders, keyed by Rule.key()
_DECIDERS: dict[tuple, Callable[[Rule, CyclicWord, Word], Optional[InvasionVerdict]]] = {}


def register_invasion_decider(rule: Rule, decider) -> None:
    _DECIDERS[rule.key()] = decider


def registered_decider(rule: Rule):
    return _DECIDERS.get(rule.key())


def make_instance(u: CyclicWord, x: Word, offset: int = 1) -> PerturbedConfig:
    """The configuration p_u(x_1...x_n): x written at cells offset..offset+n-1."""
    return PerturbedConfig(u, offset, tuple(x.cells)).normalized()


def _chi(pc: PerturbedConfig, t: int, l: int, p: int) -> tuple:
    return (pc.window, pc.window_offset % l, t % p)


def invasion(
    rule: Rule,
    u: CyclicWord,
    x: Word,
    step_budget: int = DEFAULT_STEP_BUDGET,
    width_budget: int = DEFAULT_WIDTH_BUDGET,
    allow_decider: bool = True,
) -> InvasionVerdict:
    """Certified semi-decision of the invasion problem for p_u(x).

    No-invasion is certified by a repeated difference-state triple
    (difference word, leftmost offset mod |u|, time mod background period):
    the triple determines its successor once the background orbit has
    entered its cycle, so a repeat proves the difference region is
    eternally bounded.  Invasion is certified either by a registered
    rule-specific decider or by a maximal-speed growth run in which the
    edge-local state repeats, which makes both edges provably periodic
    and the width unbounded.  Everything else is Unknown.
    """
    rule = canonicalize(rule)
    if allow_decider:
        decider = registered_decider(rule)
        if decider is not None:
            verdict = decider(rule, u, x)
            if verdict is not None:
                return verdict

    r = rule.radius
    l = len(u)
    orbit = BackgroundOrbit(rule, u)
    sig = orbit.signature()
    t0, p = sig.preperiod, sig.period

    pc = make_instance(u, x)

    seen: dict[tuple, int] = {}
    edge_seen: dict[tuple, int] = {}
    run_ok = False  # both edges moved at max speed on every step of the run
    max_width = len(pc.window)

    t = 0
    while t <= step_budget:
        if pc.is_background():
            return InvasionVerdict(
                "no_invasion",
                {"reason": "differences-vanished", "time": t},
                t,
                max_width,
            )
        if t >= t0:
            key = _chi(pc, t, l, p)
            prev = seen.get(key)
            if prev is not None:
                return InvasionVerdict(
                    "no_invasion",
                    {
                        "reason": "difference-state-repeats",
                        "window": "".join(map(str, key[0])) if rule.states <= 10 else list(key[0]),
                        "offset_mod": key[1],
                        "time_mod": key[2],
                        "first_time": prev,
                        "second_time": t,
                    },
                    t,
                    max_width,
                )
            seen[key] = t

        if r > 0 and t >= t0 and run_ok:
            lo, hi = pc.extent()
            ekey = (pc.window[0], pc.window[-1], lo % l, hi % l, t % p)
            eprev = edge_seen.get(ekey)
            if eprev is not None:
                return InvasionVerdict(
                    "invasion",
                    {
                        "reason": "periodic-maximal-growth",
                        "first_time": eprev,
                        "second_time": t,
                        "growth_per_period": r * (t - eprev),
                    },
                    t,
                    max_width,
                )
            edge_seen[ekey] = t

        old = pc.extent()
        pc = step_perturbed(rule, pc, orbit.word_at(t + 1))
        t += 1
        new = pc.extent()
        max_width = max(max_width, len(pc.window))
        step_max_speed = (
            r > 0
            and old is not None
            and new is not None
            and new[0] == old[0] - r
            and new[1] == old[1] + r
        )
        if step_max_speed:
            run_ok = True
        else:
            run_ok = False
            edge_seen.clear()
        if len(pc.window) > width_budget:
            return InvasionVerdict(
                "unknown",
                {"reason": "width-budget-exhausted", "width": len(pc.window)},
                t,
                max_width,
            )
    return InvasionVerdict(
        "unknown",
        {"reason": "step-budget-exhausted"},
        step_budget,
        max_width,
    )


def replay_no_invasion(rule: Rule, u: CyclicWord, x: Word, verdict: InvasionVerdict) -> bool:
    """Re-simulate a no-invasion certificate and confirm the repeated triple."""
    if verdict.outcome != "no_invasion":
        raise ValueError("not a no-invasion verdict")
    cert = verdict.certificate
    if cert.get("reason") == "differences-vanished":
        pc = make_instance(u, x)
        orbit = BackgroundOrbit(canonicalize(rule), u)
        for t in range(cert["time"]):
            pc = step_perturbed(canonicalize(rule), pc, orbit.word_at(t + 1))
        return pc.is_background()
    if cert.get("reason") != "difference-state-repeats":
        return True  # structural certificates are checked by their own audits
    rule = canonicalize(rule)
    orbit = BackgroundOrbit(rule, u)
    sig = orbit.signature()
    l, p = len(u), sig.period
    pc = make_instance(u, x)
    chis = {}
    for t in range(cert["second_time"] + 1):
        if t == cert["first_time"]:
            chis["first"] = _chi(pc, t, l, p)
        if t == cert["second_time"]:
            chis["second"] = _chi(pc, t, l, p)
        pc = step_perturbed(rule, pc, orbit.word_at(t + 1))
    return chis.get("first") == chis.get("second") and chis.get("first") is not None


def diff_extent(rule: Rule, u: CyclicWord, x: Word, t: int):
    """(lediff_t, ridiff_t) after t steps, or the string 'equal'."""
    rule = canonicalize(rule)
    orbit = BackgroundOrbit(rule, u)
    pc = make_instance(u, x)
    for s in range(t):
        pc = step_perturbed(rule, pc, orbit.word_at(s + 1))
    ext = pc.extent()
    return "equal" if ext is None else ext
