"""Command-line interface: one binary, reproducible machine-readable output.

Exit codes: 0 success, 1 refuted audit or failed gallery claim, 2 usage
error, 3 budget or guard exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import audit as audit_mod
from . import gallery as gallery_mod
from . import netpbm
from .algebra import RescaleParams, is_subautomaton, rescale, simulates
from .commcomp import Problem, build_matrix, cc_profile
from .problems import cycle_length, invasion
from .rules import GuardError, Rule, canonicalize, from_wolfram, load_rule, to_json
from .words import apply_local, collapse, cyclic, step_cyclic, word

USAGE_ERROR, GUARD_ERROR = 2, 3


def resolve_rule(ref: str) -> Rule:
    """eca:NNN, gallery:<id>, or a path to a rule JSON file."""
    if ref.startswith("eca:"):
        return from_wolfram(int(ref.split(":", 1)[1]))
    if ref.startswith("gallery:"):
        entries = gallery_mod.all_entries()
        gid = ref.split(":", 1)[1]
        if gid not in entries:
            raise ValueError(f"unknown gallery id {gid!r}; try `gallery list`")
        return entries[gid].rule
    return load_rule(ref)


def _emit(text: str, path=None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_bytes(data: bytes, path) -> None:
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def cmd_simulate(args) -> int:
    rule = canonicalize(resolve_rule(args.rule))
    w = word(rule.states, args.input)
    if args.cyclic:
        c = cyclic(rule.states, args.input)
        steps = int(args.steps) if args.steps != "all" else len(c) * 2
        rows = [str(c)]
        for _ in range(steps):
            c = step_cyclic(rule, c)
            rows.append(str(c))
    else:
        rows = [str(w)]
        if args.steps == "all":
            while len(w) >= 2 * rule.radius + 1 and rule.radius > 0:
                w = apply_local(rule, w)
                rows.append(str(w))
            if rule.radius == 0:
                w = collapse(rule, w)
                rows.append(str(w))
        else:
            for _ in range(int(args.steps)):
                w = apply_local(rule, w)
                rows.append(str(w))
    if args.format == "json":
        _emit(_json({"rule": rule.name or "", "rows": rows}), path=args.output)
    else:
        _emit("\n".join(rows) + "\n", path=args.output)
    return 0


def _problem_from_args(args, rule) -> Problem:
    kind = getattr(args, "problem", "pred")
    if kind == "pred":
        return Problem.prediction()
    if kind == "cycle":
        return Problem.cycle(args.cycle_k)
    if kind == "inva":
        if not args.background:
            raise ValueError("--background is required for the invasion problem")
        return Problem.invasion_over(
            cyclic(rule.states, args.background),
            step_budget=args.budget_steps,
            width_budget=args.budget_width,
        )
    raise ValueError(f"unknown problem {kind!r}")


def cmd_matrix(args) -> int:
    rule = resolve_rule(args.rule)
    problem = _problem_from_args(args, rule)
    m = build_matrix(rule, args.n, args.i, problem)
    if args.format == "pbm":
        _emit_bytes(netpbm.pbm_bytes(m.entries), args.output)
    elif args.format == "pgm":
        _emit_bytes(netpbm.pgm_bytes(m.entries, m.states), args.output)
    elif args.format == "json":
        doc = {
            "rule": m.rule_name,
            "problem": m.problem,
            "n": m.n,
            "i": m.i,
            "entries": [[int(v) for v in row] for row in m.entries],
        }
        _emit(_json(doc), path=args.output)
    elif args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["row\\col"] + list(range(m.cols)))
        for ri, row in enumerate(m.entries):
            wr.writerow([ri] + [int(v) for v in row])
        _emit(buf.getvalue(), path=args.output)
    else:
        lines = ["".join(str(int(v)) for v in row) for row in m.entries]
        _emit("\n".join(lines) + "\n", path=args.output)
    return 0


def cmd_cc(args) -> int:
    rule = resolve_rule(args.rule)
    problem = _problem_from_args(args, rule)
    splits = None if args.i is None else [args.i]
    report = cc_profile(rule, args.n, problem, method=args.method, splits=splits)
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["i", "bits", "messages", "method"])
        for s in report.splits:
            wr.writerow([s.i, s.bits, s.messages, s.method])
        _emit(buf.getvalue(), path=args.output)
    elif args.format == "text":
        lines = [
            f"split {s.i}: {s.bits} bits ({s.messages} messages, {s.method})"
            for s in report.splits
        ]
        lines.append(f"max bits: {report.max_bits}")
        _emit("\n".join(lines) + "\n", path=args.output)
    else:
        _emit(_json(report.as_dict()), path=args.output)
    return 0


def cmd_cycle(args) -> int:
    rule = resolve_rule(args.rule)
    u = cyclic(rule.states, args.input)
    t0, lam = cycle_length(rule, u)
    doc = {"rule": rule.name or "", "u": str(u), "preperiod": t0, "period": lam}
    if args.format == "text":
        _emit(f"preperiod {t0}, period {lam}\n", path=args.output)
    else:
        _emit(_json(doc), path=args.output)
    return 0


def cmd_invade(args) -> int:
    rule = resolve_rule(args.rule)
    u = cyclic(rule.states, args.background)
    x = word(rule.states, args.input)
    verdict = invasion(
        rule, u, x, step_budget=args.budget_steps, width_budget=args.budget_width
    )
    doc = verdict.as_dict()
    doc["rule"] = rule.name or ""
    if args.format == "text":
        _emit(f"{verdict.outcome} (steps {verdict.steps}, width {verdict.width})\n", path=args.output)
    else:
        _emit(_json(doc), path=args.output)
    return 0 if verdict.decided else GUARD_ERROR


def cmd_audit(args) -> int:
    reports = audit_mod.run_audit(args.target, scale=args.range)
    docs = [r.as_dict() for r in reports]
    if args.format == "text":
        lines = []
        for r in docs:
            for c in r["claims"]:
                lines.append(f"[{c['status']:8s}] {r['subject']}: {c['claim']}")
        _emit("\n".join(lines) + "\n", path=args.output)
    else:
        _emit(_json(docs), path=args.output)
    return 0 if all(r["ok"] for r in docs) else 1


def cmd_gallery(args) -> int:
    entries = gallery_mod.all_entries()
    if args.action == "list":
        doc = [
            {"id": e.id, "states": e.rule.states, "radius": e.rule.radius,
             "claims": [c.name for c in e.claims]}
            for e in entries.values()
        ]
        if args.format == "text":
            lines = [
                f"{d['id']}: {d['states']} states, radius {d['radius']}, "
                f"claims: {', '.join(d['claims']) or '-'}"
                for d in doc
            ]
            _emit("\n".join(lines) + "\n", path=args.output)
        else:
            _emit(_json(doc), path=args.output)
        return 0
    if args.id not in entries:
        raise ValueError(f"unknown gallery id {args.id!r}")
    entry = entries[args.id]
    if args.action == "check":
        results = entry.run_claims()
        if args.format == "text":
            lines = [
                f"[{'pass' if r['ok'] else 'FAIL'}] {r['claim']}: {r['detail']}"
                for r in results
            ]
            _emit("\n".join(lines) + "\n", path=args.output)
        else:
            _emit(_json({"id": entry.id, "claims": results}), path=args.output)
        return 0 if all(r["ok"] for r in results) else 1
    if args.action == "export":
        _emit(to_json(entry.rule) + "\n", path=args.output)
        return 0
    raise ValueError(f"unknown gallery action {args.action!r}")


def cmd_rescale(args) -> int:
    rule = resolve_rule(args.rule)
    out = rescale(rule, RescaleParams(args.m, args.t, args.z))
    if args.canonical:
        out = canonicalize(out)
    _emit(to_json(out) + "\n", path=args.output)
    return 0


def cmd_embed(args) -> int:
    f = resolve_rule(args.rule_f)
    g = resolve_rule(args.rule_g)
    if args.simulate:
        witness = simulates(
            f, g, max_m=args.max_m, max_t=args.max_t, max_z=args.max_z
        )
        if witness is None:
            doc = {"found": False, "note": "no witness within bounds (not a disproof)"}
        else:
            doc = {
                "found": True,
                "inner": vars(witness.inner) | {},
                "outer": vars(witness.outer) | {},
                "embedding": list(witness.embedding.map),
            }
    else:
        emb = is_subautomaton(f, g)
        doc = {"found": emb is not None}
        if emb is not None:
            doc["embedding"] = list(emb.map)
    _emit(_json(doc), path=args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ca-commlab",
        description="simulate 1D cellular automata and measure the "
        "communication complexity of their canonical problems",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, rule=True):
        if rule:
            sp.add_argument("rule", help="eca:NNN | gallery:<id> | rule JSON file")
        sp.add_argument("--format", default="json",
                        choices=["json", "csv", "pbm", "pgm", "text"])
        sp.add_argument("-o", "--output", default=None)

    sp = sub.add_parser("simulate", help="evolve a word or cyclic word")
    add_common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--steps", default="all")
    sp.add_argument("--cyclic", action="store_true")
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("matrix", help="tabulate a split problem matrix")
    add_common(sp)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-i", type=int, required=True)
    sp.add_argument("--problem", default="pred", choices=["pred", "cycle", "inva"])
    sp.add_argument("--cycle-k", type=int, default=1)
    sp.add_argument("--background", default=None)
    sp.add_argument("--budget-steps", type=int, default=10_000)
    sp.add_argument("--budget-width", type=int, default=1_000)
    sp.set_defaults(fn=cmd_matrix)

    sp = sub.add_parser("cc", help="communication cost per split and maximum")
    add_common(sp)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-i", type=int, default=None)
    sp.add_argument("--split", default="all", choices=["all"])
    sp.add_argument("--method", default="one-round", choices=["one-round", "exact"])
    sp.add_argument("--problem", default="pred", choices=["pred", "cycle", "inva"])
    sp.add_argument("--cycle-k", type=int, default=1)
    sp.add_argument("--background", default=None)
    sp.add_argument("--budget-steps", type=int, default=10_000)
    sp.add_argument("--budget-width", type=int, default=1_000)
    sp.set_defaults(fn=cmd_cc)

    sp = sub.add_parser("cycle", help="preperiod and period of a cyclic word")
    add_common(sp)
    sp.add_argument("--input", required=True)
    sp.set_defaults(fn=cmd_cycle)

    sp = sub.add_parser("invade", help="decide invasion of a perturbed background")
    add_common(sp)
    sp.add_argument("--background", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--budget-steps", type=int, default=10_000)
    sp.add_argument("--budget-width", type=int, default=1_000)
    sp.set_defaults(fn=cmd_invade)

    sp = sub.add_parser("audit", help="re-verify the built-in rule analyses")
    sp.add_argument("target", help="eca:218 | eca:94 | eca:33 | linear | reversible | all")
    sp.add_argument("--range", type=int, default=None)
    sp.add_argument("--format", default="json", choices=["json", "text"])
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(fn=cmd_audit)

    sp = sub.add_parser("gallery", help="constructed automata with checkable claims")
    sp.add_argument("action", choices=["list", "check", "export"])
    sp.add_argument("id", nargs="?", default=None)
    sp.add_argument("--format", default="json", choices=["json", "text"])
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(fn=cmd_gallery)

    sp = sub.add_parser("rescale", help="pack/iterate/shift transform of a rule")
    add_common(sp)
    sp.add_argument("-m", type=int, default=1)
    sp.add_argument("-t", type=int, default=1)
    sp.add_argument("-z", type=int, default=0)
    sp.add_argument("--canonical", action="store_true")
    sp.set_defaults(fn=cmd_rescale)

    sp = sub.add_parser("embed", help="sub-automaton / bounded simulation search")
    sp.add_argument("rule_f")
    sp.add_argument("rule_g")
    sp.add_argument("--simulate", action="store_true")
    sp.add_argument("--max-m", type=int, default=3)
    sp.add_argument("--max-t", type=int, default=3)
    sp.add_argument("--max-z", type=int, default=2)
    sp.add_argument("--format", default="json", choices=["json", "text"])
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(fn=cmd_embed)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except GuardError as e:
        print(f"error: {e}", file=sys.stderr)
        return GUARD_ERROR
    except (ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
