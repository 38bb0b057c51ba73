"""Mechanical re-verification of the elementary-rule lemmas and protocols.

Each audit runs exhaustive finite scans whose ranges are parameters, so CI
can run smaller ranges than release checks.  A refuted claim carries its
lexicographically minimal counterexample.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .analysis import XOR, is_linear, is_reversible
from .commcomp import FoolingSet, build_matrix, check_fooling_set, linear_protocol_pred
from .problems import (
    InvasionVerdict,
    cycle_length,
    invasion,
    pred,
    register_invasion_decider,
)
from .rules import Rule, canonicalize, from_wolfram
from .words import CyclicWord, Word, apply_local, step_cyclic


@dataclass(frozen=True)
class AuditClaim:
    claim_id: str
    statement: str
    status: str  # "verified" | "refuted" | "skipped"
    witness: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AuditReport:
    subject: str
    claims: tuple[AuditClaim, ...]

    @property
    def ok(self) -> bool:
        return all(c.status != "refuted" for c in self.claims)

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "claims": [
                {
                    "claim": c.claim_id,
                    "statement": c.statement,
                    "status": c.status,
                    "witness": c.witness,
                    "params": c.params,
                }
                for c in sorted(self.claims, key=lambda c: c.claim_id)
            ],
        }


def _claim(cid: str, statement: str, counterexample: Optional[dict], **params) -> AuditClaim:
    if counterexample is None:
        return AuditClaim(cid, statement, "verified", {}, params)
    return AuditClaim(cid, statement, "refuted", counterexample, params)


def _bits(length: int) -> Iterable[tuple[int, ...]]:
    return itertools.product((0, 1), repeat=length)


def _word(cells) -> Word:
    return Word(2, tuple(cells))


def _s(cells) -> str:
    return "".join(map(str, cells))


# ---------------------------------------------------------------------------
# rule 218: additive words are 1s separated by odd 0-gaps; 11 is a wall


def additive_218(cells: tuple[int, ...], cyclic: bool = False) -> bool:
    """1s isolated and separated by an odd number of 0s (gaps wrap if cyclic)."""
    n = len(cells)
    ones = [i for i, c in enumerate(cells) if c == 1]
    if not ones:
        return True
    gaps = [b - a - 1 for a, b in zip(ones, ones[1:])]
    if cyclic:
        gaps.append(ones[0] + n - ones[-1] - 1)
    return all(g >= 1 and g % 2 == 1 for g in gaps)


def decide_invasion_218(rule: Rule, u: CyclicWord, x: Word) -> InvasionVerdict:
    """One-bit decision: over an additive background, any surviving difference
    expands at full speed on both sides; otherwise walls trap everything."""
    from .problems import make_instance

    pc = make_instance(u, x)
    if not additive_218(u.period, cyclic=True):
        return InvasionVerdict(
            "no_invasion", {"reason": "structural:background-grows-walls"}, 0, len(pc.window)
        )
    if pc.is_background():
        return InvasionVerdict(
            "no_invasion", {"reason": "structural:equal-to-background"}, 0, 0
        )
    return InvasionVerdict(
        "invasion", {"reason": "structural:additive-background-full-speed"}, 0, len(pc.window)
    )


def audit_rule218(
    word_len: int = 9, fool_n: int = 8, inv_u: int = 3, inv_x: int = 6
) -> AuditReport:
    r218 = from_wolfram(218)
    claims = []

    # (a) the image of an additive word is additive; includes 01010 -> 000
    bad = None
    for n in range(3, word_len + 1):
        for cells in _bits(n):
            if not additive_218(cells):
                continue
            img = apply_local(r218, _word(cells)).cells
            if not additive_218(img):
                bad = {"word": _s(cells), "image": _s(img)}
                break
        if bad:
            break
    claims.append(
        _claim(
            "218-a-additive-closure",
            "images of additive words are additive",
            bad,
            max_len=word_len,
        )
    )

    # (b) on additive triples the rule is permutive in both end cells
    bad = None
    for abc in _bits(3):
        if not additive_218(abc):
            continue
        a, b, c = abc
        if r218(a, b, c) == r218(1 - a, b, c) or r218(a, b, c) == r218(a, b, 1 - c):
            bad = {"triple": _s(abc)}
            break
    claims.append(
        _claim(
            "218-b-flip-sensitivity",
            "flipping either end of an additive triple flips the image",
            bad,
        )
    )

    # (c) 11 is a wall
    bad = None
    for a in (0, 1):
        if r218(a, 1, 1) != 1 or r218(1, 1, a) != 1:
            bad = {"context": a}
            break
    claims.append(_claim("218-c-wall-persists", "both cells of 11 stay 1 forever", bad))

    # (d) the gap between two 1s shrinks by one per side: 1 0^n 1 -> 1 0^(n-2) 1
    bad = None
    for n in range(2, word_len + 1):
        w = (1,) + (0,) * n + (1,)
        img = apply_local(r218, _word(w)).cells
        want = (1,) + (0,) * (n - 2) + (1,)
        if img != want:
            bad = {"n": n, "image": _s(img)}
            break
    claims.append(
        _claim("218-d-gap-shrink", "1 0^n 1 maps to 1 0^(n-2) 1", bad, max_n=word_len)
    )

    # (e) the one-bit decider agrees with the generic invasion engine
    claims.append(
        _decider_agreement_claim(
            "218-e-decider-agreement", r218, decide_invasion_218, inv_u, inv_x
        )
    )

    # (f) the fooling family: matched blocks predict 0, mismatched predict 1
    bad = None
    for n in range(1, fool_n + 1):
        for k in range(n + 1):
            w = (1,) * (n - k) + (0,) * (2 * k + 1) + (1,) * (n - k)
            if pred(r218, _word(w)) != 0:
                bad = {"n": n, "k": k, "kind": "matched"}
                break
        for i in range(n + 1):
            for j in range(n + 1):
                if i != j:
                    w = (1,) * (n - i) + (0,) * (i + j + 1) + (1,) * (n - j)
                    if pred(r218, _word(w)) != 1:
                        bad = {"n": n, "i": i, "j": j, "kind": "mismatched"}
                        break
            if bad:
                break
        if bad:
            break
    claims.append(
        _claim(
            "218-f-pred-families",
            "prediction is 0 on matched block pairs and 1 on mismatched ones",
            bad,
            max_n=fool_n,
        )
    )

    # (f') the pairs form a valid fooling set with bound ceil(log2(n+1))
    bad = None
    for n in range(1, fool_n + 1):
        m = build_matrix(r218, 2 * n + 1, n)
        fs = FoolingSet(
            tuple(
                (
                    _word((1,) * (n - k) + (0,) * k),
                    _word((0,) * (k + 1) + (1,) * (n - k)),
                )
                for k in range(n + 1)
            ),
            target=0,
        )
        valid, bound = check_fooling_set(m, fs)
        import math

        if not valid or bound != math.ceil(math.log2(n + 1)):
            bad = {"n": n, "valid": valid, "bound": bound}
            break
    claims.append(
        _claim(
            "218-f-fooling-set",
            "the matched/mismatched pairs form a fooling set of size n+1",
            bad,
            max_n=fool_n,
        )
    )
    return AuditReport("eca:218", tuple(claims))


# ---------------------------------------------------------------------------
# rule 94: additive configurations have all blocks of even length


def additive_94(cells: tuple[int, ...], cyclic: bool = False) -> bool:
    """All maximal runs of equal cells have even length.

    For plain words only interior runs count (a factor may cut its border
    runs); for cyclic words every run of the periodic configuration counts.
    """
    n = len(cells)
    if n == 0:
        return True
    if cyclic:
        if all(c == cells[0] for c in cells):
            return True  # uniform configurations have no finite run
        # rotate so a run boundary sits at position 0
        start = next(i for i in range(n) if cells[i] != cells[i - 1])
        seq = cells[start:] + cells[:start]
        runs = [len(list(g)) for _, g in itertools.groupby(seq)]
        return all(r % 2 == 0 for r in runs)
    runs = [len(list(g)) for _, g in itertools.groupby(cells)]
    return all(r % 2 == 0 for r in runs[1:-1]) if len(runs) >= 3 else True


def _cyclic_has_factor(cells: tuple[int, ...], factor: tuple[int, ...]) -> bool:
    n, k = len(cells), len(factor)
    ext = cells + cells
    if k > 2 * n:
        return False
    return any(tuple(ext[i : i + k]) == factor for i in range(n))


def decide_invasion_94(rule: Rule, u: CyclicWord, x: Word) -> Optional[InvasionVerdict]:
    """Backgrounds whose orbit grows a wall trap every difference.  Wall-free
    backgrounds have an additive image; a difference surviving one step then
    invades, either because both images stay additive (the dynamics is
    permutive in both end cells there) or because the background collapses
    to a uniform configuration over which support can never shrink.  On the
    remaining corner (non-additive perturbation over a non-collapsing
    background) the decider declines and the generic engine runs."""
    from .problems import background_orbit, make_instance
    from .words import step_perturbed

    v = step_cyclic(rule, u)
    if not additive_94(v.period, cyclic=True):
        return InvasionVerdict(
            "no_invasion", {"reason": "structural:background-grows-walls"}, 0, 0
        )
    pc = make_instance(u, x)
    pc1 = step_perturbed(rule, pc, v)
    if pc1.is_background():
        return InvasionVerdict(
            "no_invasion", {"reason": "structural:differences-die-in-one-step"}, 1, 0
        )
    sig = background_orbit(rule, u)
    collapses = False
    w = u
    for _ in range(sig.preperiod + sig.period):
        if len(set(w.period)) == 1:
            collapses = True
            break
        w = step_cyclic(rule, w)
    if collapses:
        return InvasionVerdict(
            "invasion", {"reason": "structural:uniform-background-support-growth"},
            1, len(pc1.window),
        )
    # junction-extended window of the stepped instance; the padding exceeds
    # any background run bordering the window, so straddling runs are interior
    l = len(v)
    pad = 2 * l + 2
    left = tuple(v.at(pc1.window_offset - pad + i) for i in range(pad))
    right = tuple(
        v.at(pc1.window_offset + len(pc1.window) + i) for i in range(pad)
    )
    if additive_94(left + pc1.window + right):
        return InvasionVerdict(
            "invasion", {"reason": "structural:bipermutative-expansion"},
            1, len(pc1.window),
        )
    return None


def audit_rule94(word_len: int = 10, inv_u: int = 3, inv_x: int = 6) -> AuditReport:
    r94 = from_wolfram(94)
    claims = []

    # even-block closure: images of additive words stay additive
    bad = None
    for n in range(3, word_len + 1):
        for cells in _bits(n):
            if not additive_94(cells):
                continue
            img = apply_local(r94, _word(cells)).cells
            if not additive_94(img):
                bad = {"word": _s(cells), "image": _s(img)}
                break
        if bad:
            break
    claims.append(
        _claim(
            "94-a-additive-closure",
            "images of even-block words keep interior blocks even",
            bad,
            max_len=word_len,
        )
    )

    # on additive triples the rule acts like xor of the ends (bi-permutative)
    bad = None
    for abc in _bits(3):
        if abc in ((0, 1, 0), (1, 0, 1)):
            continue
        a, b, c = abc
        if r94(a, b, c) != a ^ c:
            bad = {"triple": _s(abc)}
            break
    claims.append(
        _claim(
            "94-b-bipermutative",
            "the rule equals xor of the end cells on every even-block triple",
            bad,
        )
    )

    # 101 is a wall
    bad = None
    for a in (0, 1):
        if r94(a, 1, 0) != 1 or r94(0, 1, a) != 1:
            bad = {"context": a}
            break
    if bad is None and r94(1, 0, 1) != 0:
        bad = {"center": "101"}
    claims.append(_claim("94-c-wall-persists", "all three cells of 101 persist", bad))

    # odd blocks shrink toward their middle: 1 0^n 1 and 0 1^n 0 -> 1 0^(n-2) 1
    bad = None
    for n in range(2, word_len + 1):
        w1 = (1,) + (0,) * n + (1,)
        w2 = (0,) + (1,) * n + (0,)
        want = (1,) + (0,) * (n - 2) + (1,)
        if apply_local(r94, _word(w1)).cells != want:
            bad = {"n": n, "word": _s(w1)}
            break
        if apply_local(r94, _word(w2)).cells != want:
            bad = {"n": n, "word": _s(w2)}
            break
    claims.append(
        _claim("94-d-block-shrink", "odd blocks contract one cell per side", bad, max_n=word_len)
    )

    # every 5-word whose image is 010 contains 101
    bad = None
    for cells in _bits(5):
        if apply_local(r94, _word(cells)).cells == (0, 1, 0):
            if not any(cells[i : i + 3] == (1, 0, 1) for i in range(3)):
                bad = {"word": _s(cells)}
                break
    claims.append(
        _claim(
            "94-e-isolated-one-preimage",
            "a 010 in the image forces a 101 wall in the preimage",
            bad,
        )
    )

    claims.append(
        _decider_agreement_claim(
            "94-f-decider-agreement", r94, decide_invasion_94, inv_u, inv_x
        )
    )
    return AuditReport("eca:94", tuple(claims))


# ---------------------------------------------------------------------------
# rule 33


def audit_rule33(period_len: int = 14, fool_n: int = 9, ident_n: int = 10) -> AuditReport:
    r33 = from_wolfram(33)
    claims = []

    # (a) words without isolated 0s or isolated 00s are fixed by two steps
    bad = None
    for cells in _bits(7):
        if any(cells[i : i + 3] == (1, 0, 1) for i in range(5)):
            continue
        if any(cells[i : i + 4] == (1, 0, 0, 1) for i in range(4)):
            continue
        img = apply_local(r33, apply_local(r33, _word(cells))).cells
        if img != cells[2:5]:
            bad = {"word": _s(cells), "image": _s(img)}
            break
    claims.append(
        _claim(
            "33-a-two-step-identity",
            "two steps fix the middle of 7-words with no isolated 0 or 00",
            bad,
        )
    )

    # (b) the only 5-word mapping onto 101 is 10101
    bad = None
    for cells in _bits(5):
        if apply_local(r33, _word(cells)).cells == (1, 0, 1) and cells != (1, 0, 1, 0, 1):
            bad = {"word": _s(cells)}
            break
    claims.append(
        _claim("33-b-isolated-zero-preimage", "only 10101 maps onto 101", bad)
    )

    # (c) every cyclic orbit is ultimately 2-periodic with short preperiod
    bad = None
    for n in range(1, period_len + 1):
        for cells in _bits(n):
            t0, lam = cycle_length(r33, CyclicWord(2, cells))
            if lam > 2 or t0 > n // 2 + 1:
                bad = {"u": _s(cells), "preperiod": t0, "period": lam}
                break
        if bad:
            break
    claims.append(
        _claim(
            "33-c-period-two",
            "orbits reach period <= 2 within n/2 + 1 steps",
            bad,
            max_len=period_len,
        )
    )

    # (d) prediction values of the staircase family: matched instances give
    # n mod 2 for every n; mismatched give the opposite for odd n (the family
    # is only separating at odd lengths, see the even-n counterexample below)
    bad = None
    for n in range(1, ident_n + 1):
        for k in range(0, n // 2 + 1):
            w = (1,) * (n - 2 * k) + (0, 1) * k + (0,) + (1, 0) * k + (1,) * (n - 2 * k)
            if pred(r33, _word(w)) != n % 2:
                bad = {"n": n, "k": k, "kind": "matched"}
                break
        if bad:
            break
        if n % 2 == 1:
            for i in range(0, n // 2 + 1):
                for j in range(0, n // 2 + 1):
                    if i == j:
                        continue
                    w = (1,) * (n - 2 * i) + (0, 1) * i + (0,) + (1, 0) * j + (1,) * (n - 2 * j)
                    if pred(r33, _word(w)) != (n + 1) % 2:
                        bad = {"n": n, "i": i, "j": j, "kind": "mismatched"}
                        break
                if bad:
                    break
        if bad:
            break
    claims.append(
        _claim(
            "33-d-staircase-values",
            "matched staircases predict n mod 2; mismatched flip it at odd n",
            bad,
            max_n=ident_n,
        )
    )

    # (e) the staircase pairs form a fooling set at odd n
    bad = None
    for n in range(1, fool_n + 1, 2):
        m = build_matrix(r33, 2 * n + 1, n + 1)
        fs = FoolingSet(
            tuple(
                (
                    _word((1,) * (n - 2 * k) + (0, 1) * k + (0,)),
                    _word((1, 0) * k + (1,) * (n - 2 * k)),
                )
                for k in range(0, n // 2 + 1)
            ),
            target=n % 2,
        )
        valid, _bound = check_fooling_set(m, fs)
        if not valid:
            bad = {"n": n}
            break
    claims.append(
        _claim(
            "33-e-fooling-set-odd",
            "staircase pairs are a fooling set at every odd length",
            bad,
            odd_max_n=fool_n,
        )
    )
    return AuditReport("eca:33", tuple(claims))


# ---------------------------------------------------------------------------
# protocol audits


def audit_linear_protocol(rule: Rule, oplus=XOR, e: int = 0, max_len: int = 9) -> AuditReport:
    rule = canonicalize(rule)
    name = rule.name or "rule"
    if not is_linear(rule, oplus, e):
        raise ValueError(f"{name} is not linear under the given operation")
    bad = None
    q = rule.states
    for n in range(2, max_len + 1):
        for cells in itertools.product(range(q), repeat=n):
            w = Word(q, cells)
            direct = pred(rule, w)
            for i in range(1, n):
                if linear_protocol_pred(rule, oplus, e, w, i, verify=False) != direct:
                    bad = {"word": _s(cells), "split": i}
                    break
            if bad:
                break
        if bad:
            break
    claim = _claim(
        "linear-protocol-matches-pred",
        "the two-sided neutral-padding protocol reproduces every prediction",
        bad,
        max_len=max_len,
    )
    return AuditReport(f"linear:{name}", (claim,))


def audit_reversible_cycle(rule: Rule, max_len: int = 10, kmax: int = 8) -> AuditReport:
    """For reversible rules, orbits of periodic configurations are purely
    periodic, so cycle length <= k iff some t <= k returns to the start."""
    rule = canonicalize(rule)
    name = rule.name or "rule"
    if not is_reversible(rule):
        raise ValueError(f"{name} is not reversible")
    q = rule.states
    bad = None
    for n in range(1, max_len + 1):
        if q**n > 1 << 16:
            break
        for cells in itertools.product(range(q), repeat=n):
            u = CyclicWord(q, cells)
            t0, lam = cycle_length(rule, u)
            if t0 != 0:
                bad = {"u": list(cells), "preperiod": t0}
                break
            # first-return equivalence for every k up to kmax
            c = u
            first_return = None
            for t in range(1, kmax + 1):
                c = step_cyclic(rule, c)
                if c == u:
                    first_return = t
                    break
            if (first_return is not None) != (lam <= kmax) or (
                first_return is not None and first_return != lam
            ):
                bad = {"u": list(cells), "lambda": lam, "first_return": first_return}
                break
        if bad:
            break
    claim = _claim(
        "reversible-cycle-equivalence",
        "cycle length <= k iff the configuration returns within k steps",
        bad,
        max_len=max_len,
        kmax=kmax,
    )
    return AuditReport(f"reversible:{name}", (claim,))


# ---------------------------------------------------------------------------
# decider-vs-engine agreement


def _decider_agreement_claim(cid, rule, decider, max_u, max_x) -> AuditClaim:
    bad = None
    for lu in range(1, max_u + 1):
        for up in _bits(lu):
            u = CyclicWord(2, up)
            for lx in range(1, max_x + 1):
                for xp in _bits(lx):
                    x = Word(2, xp)
                    structural = decider(rule, u, x)
                    if structural is None:
                        bad = {"u": _s(up), "x": _s(xp), "issue": "decider declined"}
                        break
                    generic = invasion(rule, u, x, allow_decider=False)
                    if not generic.decided:
                        bad = {"u": _s(up), "x": _s(xp), "issue": "generic undecided"}
                        break
                    if generic.outcome != structural.outcome:
                        bad = {
                            "u": _s(up),
                            "x": _s(xp),
                            "structural": structural.outcome,
                            "generic": generic.outcome,
                        }
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    return _claim(
        cid,
        "structural decider agrees with the growth-certificate engine",
        bad,
        max_u=max_u,
        max_x=max_x,
    )


def quick_agreement_218() -> tuple[bool, str]:
    c = _decider_agreement_claim(
        "q218", from_wolfram(218), decide_invasion_218, 2, 4
    )
    return c.status == "verified", c.statement


def quick_agreement_94() -> tuple[bool, str]:
    c = _decider_agreement_claim("q94", from_wolfram(94), decide_invasion_94, 2, 4)
    return c.status == "verified", c.statement


def quick_period2_33(max_len: int) -> tuple[bool, str]:
    r33 = from_wolfram(33)
    for n in range(1, max_len + 1):
        for cells in _bits(n):
            if cycle_length(r33, CyclicWord(2, cells))[1] > 2:
                return False, f"period > 2 at {_s(cells)}"
    return True, f"all orbits 2-periodic up to length {max_len}"


def register_elementary_deciders() -> None:
    register_invasion_decider(canonicalize(from_wolfram(218)), decide_invasion_218)
    register_invasion_decider(canonicalize(from_wolfram(94)), decide_invasion_94)


def run_audit(target: str, scale: Optional[int] = None) -> list[AuditReport]:
    """Audit by CLI name: eca:218, eca:94, eca:33, linear, reversible, or all.

    `scale` overrides the dominant exhaustive range of each audit, so CI can
    run smaller sweeps than the release defaults (and release runs larger).
    """
    from .gallery import build_ip_rule

    reports = []
    if target in ("eca:218", "all"):
        reports.append(
            audit_rule218(word_len=scale, fool_n=min(scale, 10))
            if scale
            else audit_rule218()
        )
    if target in ("eca:94", "all"):
        reports.append(audit_rule94(word_len=scale) if scale else audit_rule94())
    if target in ("eca:33", "all"):
        reports.append(
            audit_rule33(period_len=scale, fool_n=min(scale, 11), ident_n=min(scale, 12))
            if scale
            else audit_rule33()
        )
    if target in ("linear", "all"):
        for code in (90, 60):
            reports.append(audit_linear_protocol(from_wolfram(code), max_len=scale or 9))
    if target in ("reversible", "all"):
        reports.append(audit_reversible_cycle(from_wolfram(170), max_len=scale or 10))
        reports.append(audit_reversible_cycle(from_wolfram(204), max_len=scale or 10))
        reports.append(audit_reversible_cycle(build_ip_rule()[0], max_len=min(scale or 4, 5)))
    if not reports:
        raise ValueError(f"unknown audit target {target!r}")
    return reports
