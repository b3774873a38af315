"""Command-line interface: ``wplab word|decide|verify-code|abelian|sweep``.

Exit status: 0 on success, 1 on usage or input errors, 2 when a checked
property is violated.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .abelian import (
    abelian_invariants,
    abelian_iso,
    diagonal_check,
    format_presentation,
    parse_presentation,
    strong_diagonal,
)
from .coener import CodedSet, Schedule, parse_schedule
from .perms import BoundViolation
from .pi01 import builtin, parse_table, verify_code_equation
from .sampling import random_bst_word, standard_coded_sets
from .ttwp import (
    MissingOracleAnswers,
    Oracle,
    brute_force_identity,
    decide_word,
    m_reduction_word,
    parse_oracle,
    query_set,
    sigma_exponent_check,
    to_normal_form,
)
from .words import WordSyntaxError, exponent_sum, format_word, free_reduce, invert, parse_word

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode()
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


class Run:
    """Collects the report of one command and renders it."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: dict = {}
        self.bounds: dict = {}
        self.lines: list = []
        self.status = EXIT_OK

    def input(self, name: str, data: str):
        self.inputs[name] = _digest(data)

    def say(self, line: str):
        self.lines.append(line)

    def emit(self, result: dict):
        if self.args.format == "json":
            report = {
                "schema": SCHEMA,
                "tool": "wplab",
                "version": __version__,
                "command": self.args.command,
                "seed": self.args.seed,
                "bounds": self.bounds,
                "inputs": self.inputs,
                "result": result,
            }
            text = json.dumps(report, indent=2, sort_keys=True) + "\n"
        else:
            text = "\n".join(self.lines) + "\n"
        if self.args.out:
            Path(self.args.out).write_text(text)
        else:
            sys.stdout.write(text)


# -- word --------------------------------------------------------------------

def cmd_word(run: Run) -> None:
    a = run.args
    run.input("word", a.text)
    w = parse_word(a.text)
    if a.op == "reduce":
        out = format_word(free_reduce(w))
    elif a.op == "invert":
        out = format_word(invert(free_reduce(w)))
    else:
        if not a.gen:
            raise UsageError("expsum needs --gen")
        base, index = a.gen, None
        if "[" in base:
            base, rest = base.split("[", 1)
            index = int(rest.rstrip("]"))
        out = str(exponent_sum(w, base, index))
    run.say(out)
    run.emit({"op": a.op, "output": out})


# -- decide ------------------------------------------------------------------

def _coded_set(run: Run) -> Optional[CodedSet]:
    a = run.args
    if a.schedule:
        text = _read(a.schedule)
        run.input("schedule", text)
        sched, dropped = parse_schedule(text)
        if dropped:
            run.say(f"dropped duplicate emissions: {dropped}")
        return CodedSet(sched)
    if a.set:
        run.input("set", a.set)
        return standard_coded_sets()[a.set]
    return None


def cmd_decide(run: Run) -> None:
    a = run.args
    run.input("word", a.text)
    w = parse_word(a.text)
    coded = _coded_set(run)
    if coded is None:
        if a.mode != "tt" or not a.oracle:
            coded = CodedSet(Schedule.finite({}))
            run.say("no schedule given: using the empty schedule")
    oracle = None
    if a.oracle:
        text = _read(a.oracle)
        run.input("oracle", text)
        oracle = parse_oracle(text)
    elif coded is not None:
        oracle = Oracle.from_coded_set(coded)
    result: dict = {"word": format_word(w), "mode": a.mode}
    if a.mode in ("tt", "both"):
        if sigma_exponent_check(w) == 0:
            result["queries"] = sorted(query_set(to_normal_form(w)))
        try:
            v = decide_word(w, oracle)
        except MissingOracleAnswers as exc:
            raise UsageError(f"oracle is missing answers for queries {exc.missing}") from None
        result["verdict"] = v.to_json()
        run.say(f"tt: {'identity' if v.equal_identity else 'not identity'} (rule: {v.rule})")
        if v.witness:
            run.say(f"witness: {json.dumps(dict(v.witness), sort_keys=True)}")
        run.say(f"queries: {list(v.queries)}")
    if a.mode in ("brute", "both"):
        b = brute_force_identity(w, coded)
        result["brute_force"] = b
        run.say(f"brute: {'identity' if b else 'not identity'}")
    if a.mode == "both":
        agree = result["verdict"]["identity"] == result["brute_force"]
        result["agree"] = agree
        run.say(f"agreement: {str(agree).lower()}")
        if not agree:
            run.status = EXIT_VIOLATION
    run.emit(result)


# -- verify-code -------------------------------------------------------------

def _column_function(run: Run, spec: str):
    if spec.startswith("table:"):
        path = spec[len("table:"):]
        text = _read(path)
        run.input("table", text)
        return parse_table(text, name=Path(path).stem)
    run.input("f", spec)
    try:
        return builtin(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify_code(run: Run) -> None:
    a = run.args
    if a.x < 0 or a.y < 0 or a.N < 0:
        raise UsageError("x, y and N must be nonnegative")
    f = _column_function(run, a.f)
    run.bounds = {"N": a.N}
    rep = verify_code_equation(f, a.x, a.y, a.N)
    run.bounds["region"] = rep.region.to_json()
    result = rep.to_json()
    result["f"] = f.name
    if rep.f_agree and rep.perm_agree:
        run.say(f"agree: f({a.x}, n) = f({a.y}, n) for n <= {a.N} and t_{a.x} = t_{a.y} on the region")
    else:
        if rep.f_witness is not None:
            run.say(f"f differs at n = {rep.f_witness}: {list(rep.f_values)}")
        else:
            run.say(f"f agrees for n <= {a.N}")
        if rep.perm_witness is not None:
            p = rep.perm_witness
            run.say(f"t_{a.x}, t_{a.y} differ at <{p.col}, {p.row}>: "
                    f"{[tuple(q) for q in rep.perm_images]}")
        else:
            run.say("t_x and t_y agree on the region")
    run.say(f"consistent: {str(rep.consistent).lower()}")
    if not rep.consistent:
        run.status = EXIT_VIOLATION
    run.emit(result)


# -- abelian -----------------------------------------------------------------

def _presentations(run: Run) -> list:
    out = []
    for i, path in enumerate(run.args.files):
        text = _read(path)
        run.input(f"presentation[{i}]", text)
        try:
            out.append(parse_presentation(text))
        except (ValueError, WordSyntaxError) as exc:
            raise UsageError(f"{path}: {exc}") from None
    return out


def cmd_abelian(run: Run) -> None:
    a = run.args
    ps = _presentations(run)
    if a.op == "invariants":
        result = {"presentations": [abelian_invariants(p).to_json() for p in ps]}
        for r in result["presentations"]:
            run.say(json.dumps(r, sort_keys=True))
        if len(ps) == 1:
            result = result["presentations"][0]
    elif a.op == "iso":
        if len(ps) != 2:
            raise UsageError("iso takes exactly two presentation files")
        iso = abelian_iso(ps[0], ps[1])
        result = {"abelian_iso": iso}
        run.say(str(iso).lower())
    else:
        delta = strong_diagonal(ps)
        rep = diagonal_check(delta, ps)
        result = {
            "presentation": format_presentation(delta),
            "invariants": rep.output_invariants.to_json(),
            "check": rep.to_json(),
        }
        run.say(format_presentation(delta).rstrip("\n"))
        run.say(f"invariants: {json.dumps(rep.output_invariants.to_json(), sort_keys=True)}")
        run.say(f"check: {'passed' if rep.passed else 'FAILED'}")
        if not rep.passed:
            run.status = EXIT_VIOLATION
    run.emit(result)


# -- sweep -------------------------------------------------------------------

def _dump_case(run: Run, case: dict):
    path = Path(run.args.case_file)
    path.write_text(json.dumps(case, indent=2, sort_keys=True) + "\n")
    run.say(f"counterexample written to {path}")


def sweep_differential(run: Run, rng: random.Random) -> dict:
    n = run.args.count
    sets = standard_coded_sets()
    names = sorted(sets)
    run.bounds = {"count": n, "max_length": run.args.max_length, "sets": names}
    agree = 0
    first = None
    for i in range(n):
        name = names[i % len(names)]
        coded = sets[name]
        w = random_bst_word(rng, max_length=run.args.max_length)
        v = decide_word(w, Oracle.from_coded_set(coded))
        b = brute_force_identity(w, coded)
        if v.equal_identity == b:
            agree += 1
        elif first is None:
            first = {"kind": "differential", "case": i, "set": name, "word": format_word(w),
                     "decide": v.to_json(), "brute_force": b,
                     "replay": ["decide", "--mode", "both", "--set", name, format_word(w)]}
    run.say(f"{agree}/{n} agree")
    return {"agree": agree, "total": n, "first_disagreement": first}


def sweep_mreduction(run: Run, rng: random.Random) -> dict:
    xmax = run.args.xmax
    name = run.args.set or "periodic"
    coded = standard_coded_sets()[name]
    run.bounds = {"x": [0, xmax], "set": name}
    oracle = Oracle.from_coded_set(coded)
    mismatches = []
    for x in range(xmax + 1):
        w = m_reduction_word(x)
        v = decide_word(w, oracle)
        member = coded.contains(x)
        if v.equal_identity != member or brute_force_identity(w, coded) != member:
            mismatches.append({"x": x, "member": member, "decide": v.to_json(),
                               "word": format_word(w)})
    run.say(f"{xmax + 1 - len(mismatches)}/{xmax + 1} match membership")
    first = None
    if mismatches:
        first = dict(mismatches[0], kind="mreduction", set=name)
    return {"checked": xmax + 1, "mismatches": len(mismatches), "first_disagreement": first}


def sweep_queryset(run: Run, rng: random.Random) -> dict:
    n = run.args.count
    run.bounds = {"count": n, "max_length": run.args.max_length}
    violations = 0
    first = None
    for i in range(n):
        w = random_bst_word(rng, max_length=run.args.max_length, balance=1.0)
        qs = query_set(to_normal_form(w))
        base = {m: rng.random() < 0.5 for m in qs}
        outside_a = random.Random(rng.getrandbits(64))
        outside_b = random.Random(rng.getrandbits(64))
        asked: list = []

        def fa(m, _r=outside_a):
            asked.append(m)
            return _r.random() < 0.5

        oa = Oracle(base, fallback=fa)
        ob = Oracle(base, fallback=lambda m, _r=outside_b: _r.random() < 0.5)
        va, vb = decide_word(w, oa), decide_word(w, ob)
        if va != vb or set(va.queries) != qs or any(m not in qs for m in asked):
            violations += 1
            if first is None:
                first = {"kind": "queryset", "case": i, "word": format_word(w),
                         "verdicts": [va.to_json(), vb.to_json()], "query_set": sorted(qs)}
    run.say(f"query sets static under {n} oracle swaps" if not violations
            else f"{violations}/{n} oracle swaps changed the verdict or queries")
    return {"total": n, "violations": violations, "first_disagreement": first}


SWEEPS = {"differential": sweep_differential, "mreduction": sweep_mreduction,
          "queryset": sweep_queryset}


def cmd_sweep(run: Run) -> None:
    rng = random.Random(run.args.seed)
    result = SWEEPS[run.args.kind](run, rng)
    if result["first_disagreement"] is not None:
        run.status = EXIT_VIOLATION
        _dump_case(run, dict(result["first_disagreement"], seed=run.args.seed))
    run.emit(result)


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)

    p = _Parser(prog="wplab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"wplab {__version__}")
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("word", parents=[common], help="reduce, invert or count a word")
    w.add_argument("op", choices=("reduce", "invert", "expsum"))
    w.add_argument("text")
    w.add_argument("--gen", help="generator for expsum, e.g. v or b[3]")
    w.set_defaults(func=cmd_word)

    d = sub.add_parser("decide", parents=[common], help="decide w = 1 over b, s, t")
    d.add_argument("text")
    d.add_argument("--mode", choices=("tt", "brute", "both"), default="both")
    d.add_argument("--schedule", help="file of 't v' emissions of the complement")
    d.add_argument("--set", choices=sorted(standard_coded_sets()), help="built-in schedule")
    d.add_argument("--oracle", help="file of 'm 0|1' oracle answers")
    d.set_defaults(func=cmd_decide)

    v = sub.add_parser("verify-code", parents=[common], help="check the coding equivalence")
    v.add_argument("--f", default="identity",
                   help="identity, trivial, mod:<k> or table:<path>")
    v.add_argument("x", type=int)
    v.add_argument("y", type=int)
    v.add_argument("--N", type=int, default=64)
    v.set_defaults(func=cmd_verify_code)

    a = sub.add_parser("abelian", parents=[common], help="abelian invariants of presentations")
    a.add_argument("op", choices=("invariants", "diagonal", "iso"))
    a.add_argument("files", nargs="*")
    a.set_defaults(func=cmd_abelian)

    s = sub.add_parser("sweep", parents=[common], help="randomized property sweeps")
    s.add_argument("kind", choices=sorted(SWEEPS))
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--max-length", type=int, default=40)
    s.add_argument("--xmax", type=int, default=200)
    s.add_argument("--set", choices=sorted(standard_coded_sets()))
    s.add_argument("--case-file", default="counterexample.json")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("format", "human"), ("seed", 0), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.seed < 0:
        parser.error("--seed must be nonnegative")
    run = Run(args)
    try:
        args.func(run)
    except (UsageError, WordSyntaxError, BoundViolation, ValueError) as exc:
        print(f"wplab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run.status


if __name__ == "__main__":
    sys.exit(main())
