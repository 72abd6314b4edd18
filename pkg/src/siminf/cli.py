"""Command-line entry point: ``siminf <command> ...``.

Exit codes: 0 success/true, 1 false or countermodel, 2 validation failure
(bad input file, rejected update, failed check), 3 resource bounds exceeded,
4 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import casebook
from .entailment import DEFAULT_BOUND, DEFAULT_BUDGET, BudgetExceeded, entails_bounded
from .metrics import Deduction, fraction_json, measure
from .model import Database, DatabaseFormatError, check_correctness, format_database, load_database
from .planner import ImpossibleTarget, PlanBounds, plan_coherent_update, rank_deductions
from .syntax import FormulaError, Signature, parse_formula, parse_signature
from .updates import ScriptError, StepError, build_update, format_script, parse_script

SCHEMA = "siminf.run-report/1"

OK, FALSE, INVALID, RESOURCES, USAGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _digest(path: str) -> dict:
    data = Path(path).read_bytes()
    return {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _frac(value: Fraction) -> dict:
    return fraction_json(value)


class Run:
    """Collects the pieces of one RunReport."""

    def __init__(self, args, argv):
        self.args = args
        self.argv = list(argv)
        self.inputs = []
        self.warnings = []
        self.result = {}

    def load_db(self, path: str, check: bool = True) -> Database:
        self.inputs.append(_digest(path))
        return load_database(path, check=check)

    def bounds(self) -> dict:
        return {"max_domain": self.args.max_domain, "budget": self.args.budget}

    def report(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.args.command,
            "argv": self.argv,
            "inputs": self.inputs,
            "bounds": self.bounds(),
            "result": self.result,
            "warnings": self.warnings,
        }


def _declared(args) -> Signature:
    try:
        return parse_signature(args.declare or "")
    except ValueError as e:
        raise UsageError(str(e)) from None


def _formula(text: str, sig: Signature):
    return parse_formula(text, sig)


def _premises(text: str | None, sig: Signature):
    if text is None:
        return None
    return tuple(_formula(p, sig) for p in text.split(";") if p.strip())


# --- commands ----------------------------------------------------------------

def cmd_check(run: Run) -> int:
    db = run.load_db(run.args.db, check=False)
    ok, failing = check_correctness(db)
    run.result = {"correct": ok, "failing": [str(f) for f in failing]}
    run.lines = ["correct" if ok else "theory violated:"] + [f"  {f}" for f in failing]
    return OK if ok else INVALID


def cmd_update(run: Run) -> int:
    a = run.args
    db = run.load_db(a.db)
    run.inputs.append(_digest(a.script))
    ops = parse_script(Path(a.script).read_text(encoding="utf-8"))
    u = build_update(db, ops, check_theory=not a.unchecked)
    Path(a.out).write_text(format_database(u.final), encoding="utf-8")
    written = [a.out]
    if a.trace:
        trace_dir = Path(a.trace)
        trace_dir.mkdir(parents=True, exist_ok=True)
        for i, d in enumerate(u.databases, start=1):
            path = trace_dir / f"D{i:02d}.db"
            path.write_text(format_database(d), encoding="utf-8")
            written.append(str(path))
    for step, phi in u.violations:
        run.warnings.append(f"step {step} falsifies theory sentence {phi}")
    run.result = {"steps": len(u.ops), "written": written,
                  "violations": [{"step": s, "sentence": str(p)} for s, p in u.violations]}
    run.lines = [f"{len(u.ops)} step(s) applied; wrote {a.out}"]
    return OK


def cmd_entails(run: Run) -> int:
    a = run.args
    db = run.load_db(a.db)
    f = _formula(a.formula, db.signature | _declared(a))
    verdict = entails_bounded(db.theory, f, a.max_domain, budget=a.budget)
    run.result = {"outcome": verdict.outcome, "bound_used": verdict.bound, "witness": None}
    if verdict.entailed:
        run.warnings.append(f"no countermodel with at most {a.max_domain} elements; entailment holds only up to that bound")
        run.lines = [f"entailed up to bound {a.max_domain}"]
        return OK
    witness = format_database(Database(verdict.witness, db.theory))
    run.result["witness"] = witness
    run.lines = [f"countermodel found (bound {a.max_domain}):", witness.rstrip()]
    return FALSE


def cmd_metrics(run: Run) -> int:
    a = run.args
    db = run.load_db(a.db)
    run.inputs.append(_digest(a.script))
    u = build_update(db, parse_script(Path(a.script).read_text(encoding="utf-8")), check_theory=not a.unchecked)
    sig = u.final.signature | _declared(a)
    conclusion = _formula(a.formula, sig)
    premises = _premises(a.premises, sig)
    if premises is None:
        deduction = Deduction((conclusion,), conclusion)
    else:
        deduction = Deduction(premises, conclusion)
        if premises:
            check = entails_bounded(premises, conclusion, a.max_domain, budget=a.budget)
            if not check.entailed:
                run.warnings.append(f"deduction is not valid: countermodel found at bound {a.max_domain}")
    for step, phi in u.violations:
        run.warnings.append(f"step {step} falsifies theory sentence {phi}")
    rep = measure(u, deduction, a.max_domain, budget=a.budget)
    headline = {"coherency": rep.coherency, "relevancy": rep.relevancy,
                "informativity": rep.informativity}[a.command]
    run.result = {
        "metric": a.command,
        "value_num": headline.numerator,
        "value_den": headline.denominator,
        "value_decimal": round(float(headline), 6),
        "m_index": rep.m_index,
        "coherent": rep.coherent,
        "relevant_premises": None if rep.relevant_premises is None else [str(p) for p in rep.relevant_premises],
        "bound_used": rep.bound,
        "coherency": _frac(rep.coherency),
        "relevancy": _frac(rep.relevancy),
        "informativity": _frac(rep.informativity),
        "deduction": str(deduction),
    }
    relevant = "undefined" if rep.relevant_premises is None else "{" + ", ".join(map(str, rep.relevant_premises)) + "}"
    run.lines = [
        f"{a.command} = {headline} (~{float(headline):.4f})",
        f"  H = {rep.coherency}  R = {rep.relevancy}  I = {rep.informativity}  m = {rep.m_index}",
        f"  relevant premises: {relevant}",
    ]
    return OK


def _plan_bounds(a) -> PlanBounds:
    return PlanBounds(max_steps=a.max_steps, max_fresh=a.max_fresh, k=a.max_domain, budget=a.budget)


def cmd_plan(run: Run) -> int:
    a = run.args
    db = run.load_db(a.db)
    f = _formula(a.formula, db.signature | _declared(a))
    bounds = _plan_bounds(a)
    try:
        plan = plan_coherent_update(db, f, bounds)
    except ImpossibleTarget as e:
        run.result = {"status": "impossible", "reason": str(e)}
        run.lines = [f"impossible: {e}"]
        return FALSE
    if plan is None:
        run.result = {"status": "bounds_exhausted", "max_steps": a.max_steps, "max_fresh": a.max_fresh}
        run.lines = [f"no coherent update within {a.max_steps} step(s) and {a.max_fresh} fresh element(s)"]
        return RESOURCES
    script = format_script(plan.ops)
    run.result = {"status": "found", "steps": plan.steps_used, "script": script,
                  "coherency": _frac(plan.coherency)}
    run.lines = [f"# {plan.steps_used} step(s), H = {plan.coherency}"] + script.splitlines()
    return OK


def _read_deductions(path: str, sig: Signature) -> list[Deduction]:
    out = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        left, sep, right = line.partition("|-")
        if not sep:
            raise ScriptError("expected 'premise; premise |- conclusion'", lineno)
        try:
            out.append(Deduction(_premises(left, sig), _formula(right.strip(), sig)))
        except FormulaError as e:
            raise ScriptError(str(e), lineno) from None
    return out


def cmd_rank(run: Run) -> int:
    a = run.args
    db = run.load_db(a.db)
    run.inputs.append(_digest(a.deductions))
    candidates = _read_deductions(a.deductions, db.signature | _declared(a))
    ranking = rank_deductions(db, candidates, _plan_bounds(a))
    entries = []
    run.lines = []
    for pos, e in enumerate(ranking.entries, start=1):
        entries.append({
            "rank": pos, "deduction": str(e.deduction), "informativity": _frac(e.informativity),
            "relevancy": _frac(e.relevancy), "coherency": _frac(e.plan.coherency),
            "steps": e.steps, "results": e.results, "script": format_script(e.plan.ops),
            "flags": list(e.flags),
        })
        flag = f"  [{', '.join(e.flags)}]" if e.flags else ""
        run.lines.append(f"{pos}. I = {e.informativity}  steps = {e.steps}  results = {e.results}  {e.deduction}{flag}")
    skipped = [{"deduction": str(e.deduction), "error": e.error} for e in ranking.skipped]
    for s in skipped:
        run.lines.append(f"skipped: {s['deduction']} ({s['error']})")
    run.result = {"ranking": entries, "skipped": skipped}
    return OK


def cmd_verify_paper(run: Run) -> int:
    rows = casebook.verify(run.args.max_domain)
    run.result = {"rows": [r.as_dict() for r in rows], "all_passed": casebook.all_passed(rows)}
    width = max(len(r.label) for r in rows)
    run.lines = []
    for r in rows:
        run.lines.append(f"{r.status:<9} {r.label:<{width}}  published {r.published:<12} computed {casebook.show_value(r.computed)}")
        if r.status != casebook.MATCH:
            if r.note:
                run.lines.append(f"{'':9}   note: {r.note}")
            for t in r.trace:
                run.lines.append(f"{'':9}   {t}")
    counts = {s: sum(r.status == s for r in rows) for s in (casebook.MATCH, casebook.DEVIATION, casebook.MISMATCH)}
    run.lines.append(", ".join(f"{n} {s}" for s, n in counts.items()))
    return OK if casebook.all_passed(rows) else INVALID


# --- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-domain", type=int, default=DEFAULT_BOUND, metavar="K",
                        help="largest domain size searched for countermodels (default %(default)s)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, metavar="N",
                        help="refuse entailment searches over more than N candidate structures")
    common.add_argument("--json", action="store_true", help="print a JSON run report")
    common.add_argument("--declare", metavar="SYMS", default="",
                        help="extra symbols for formulas, e.g. 'b/0 F/1'")

    parser = _Parser(prog="siminf", description="Semantic informativity of deductions over finite databases.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="check that a database's theory is true in it")
    p.add_argument("--db", required=True)

    p = sub.add_parser("update", parents=[common], help="apply an update script")
    p.add_argument("--db", required=True)
    p.add_argument("--script", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", metavar="DIR")
    p.add_argument("--unchecked", action="store_true", help="record theory violations instead of failing")

    p = sub.add_parser("entails", parents=[common], help="bounded entailment from the database theory")
    p.add_argument("--db", required=True)
    p.add_argument("--formula", required=True)

    for name in ("coherency", "relevancy", "informativity"):
        p = sub.add_parser(name, parents=[common], help=f"{name} of a formula or deduction along an update")
        p.add_argument("--db", required=True)
        p.add_argument("--script", required=True)
        p.add_argument("--formula", required=True, help="the conclusion")
        p.add_argument("--premises", help="';'-separated premises (omit for the formula on its own)")
        p.add_argument("--unchecked", action="store_true", help="record theory violations instead of failing")

    p = sub.add_parser("plan", parents=[common], help="fewest-step update making a formula true")
    p.add_argument("--db", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--max-steps", type=int, default=3)
    p.add_argument("--max-fresh", type=int, default=2)

    p = sub.add_parser("rank", parents=[common], help="rank deductions by informativity")
    p.add_argument("--db", required=True)
    p.add_argument("--deductions", required=True)
    p.add_argument("--max-steps", type=int, default=3)
    p.add_argument("--max-fresh", type=int, default=2)

    sub.add_parser("verify-paper", parents=[common], help="recompute the worked example's published values")
    return parser


COMMANDS = {
    "check": cmd_check,
    "update": cmd_update,
    "entails": cmd_entails,
    "coherency": cmd_metrics,
    "relevancy": cmd_metrics,
    "informativity": cmd_metrics,
    "plan": cmd_plan,
    "rank": cmd_rank,
    "verify-paper": cmd_verify_paper,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE
    run = Run(args, argv)
    run.lines = []
    try:
        if args.max_domain < 1:
            raise UsageError("--max-domain must be at least 1")
        code = COMMANDS[args.command](run)
    except UsageError as e:
        print(f"siminf: {e}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as e:
        code = RESOURCES
        run.result = {"error": "budget_exceeded", "message": str(e), "needed": e.size}
        run.lines = [f"resource bound: {e}"]
    except (DatabaseFormatError, ScriptError, StepError, FormulaError, OSError) as e:
        code = INVALID
        run.result = {"error": type(e).__name__, "message": str(e)}
        for attr in ("line", "column", "step"):
            if hasattr(e, attr):
                run.result[attr] = getattr(e, attr)
        run.lines = [f"error: {e}"]
    run.result.setdefault("exit_code", code)
    if args.json:
        json.dump(run.report(), out, indent=2)
        out.write("\n")
    else:
        for line in run.lines:
            print(line, file=out)
        for w in run.warnings:
            print(f"warning: {w}", file=out)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
