"""Command line front end: one subcommand per library operation.

stdout carries only content that is a pure function of the arguments and
the input files, so a fixed invocation reproduces byte-identical output.
Wall-clock measurements and other diagnostics go to stderr.

Exit codes: 0 on success, 1 when a check fails (invalid solution, cross
check disagreement, susceptibility witness found), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from . import rules as rules_mod
from .model import (
    ADD,
    BRIBERY,
    DELETE,
    KINDS,
    MICROBRIBERY,
    AttackInstance,
    InvalidInstance,
    Rule,
    Society,
    SolutionMismatch,
    consent,
    dumps,
    instance_from_json,
    instance_to_json,
    load_json,
    random_instance,
    rule_from_json,
    rule_to_json,
    society_from_json,
    solution_from_json,
    solution_to_json,
    verify_solution,
)
from .oracle import OracleCapError, brute_force, immunity_check, immunity_search
from .polysolvers import PreconditionError, find_poly_solver
from .reductions import THEOREM_IDS, build_reduction, source_from_json

RULE_NAMES = ("consent", "lsr", "csr", "ic", "2ic", "2lic")
OBJECTIVES = ("constructive", "destructive", "exact", "general")


class CliError(Exception):
    """Fatal condition reported on stderr; carries the exit code."""

    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# argument plumbing


def _parse_rule(args) -> Rule:
    name = args.rule
    if name is None:
        raise CliError("--rule is required here")
    if name.startswith("consent(") and name.endswith(")"):
        body = name[len("consent("):-1]
        parts = body.split(",")
        if len(parts) != 2:
            raise CliError(f"cannot parse consent thresholds from {name!r}")
        try:
            s, t = int(parts[0]), int(parts[1])
        except ValueError:
            raise CliError(f"cannot parse consent thresholds from {name!r}")
        return consent(s, t)
    if name == "consent":
        if args.s is None or args.t is None:
            raise CliError("consent rule needs --s and --t")
        return consent(args.s, args.t)
    if name not in RULE_NAMES:
        raise CliError(f"unknown rule {name!r}; choose from {', '.join(RULE_NAMES)}")
    if args.s is not None or args.t is not None:
        raise CliError(f"rule {name} takes no thresholds")
    return Rule(name)


def _load_input(args):
    if args.infile is None:
        raise CliError("--in is required here")
    try:
        return load_json(args.infile)
    except FileNotFoundError:
        raise CliError(f"no such file: {args.infile}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.infile}: not valid JSON ({exc})")


def _rule_for_profile(args, data) -> Rule:
    # --rule wins; otherwise fall back to a rule embedded in the input file
    if args.rule is not None:
        return _parse_rule(args)
    if isinstance(data, dict) and "rule" in data:
        return rule_from_json(data["rule"])
    raise CliError("--rule is required (the input file embeds none)")


def _parse_members(spec: str, society: Society):
    out = set()
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.lstrip("-").isdigit():
            i = int(tok)
        elif society.labels is not None and tok in society.labels:
            i = society.labels.index(tok)
        else:
            raise CliError(f"unknown individual {tok!r}")
        if not 0 <= i < society.n:
            raise CliError(f"individual index {i} out of range")
        out.add(i)
    return frozenset(out)


def _members_for(args, data, society: Society):
    if args.members is not None:
        return _parse_members(args.members, society)
    if isinstance(data, dict) and "T" in data:
        return frozenset(data["T"])
    return None


def _emit(payload: str, args) -> None:
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _fmt_set(society: Society, items) -> str:
    return "{" + ",".join(society.label(i) for i in sorted(items)) + "}"


def _fmt_row(row) -> str:
    return "".join("+" if v == 1 else "-" for v in row)


def _fmt_solution(society: Society, sol) -> str:
    if sol.kind in ("add", "delete"):
        return f"{sol.kind} {_fmt_set(society, sol.U)}"
    if sol.kind == "bribe":
        if not sol.rows:
            return "bribe nobody"
        parts = [f"{society.label(i)}:{_fmt_row(row)}" for i, row in sorted(sol.rows)]
        return "bribe " + " ".join(parts)
    if not sol.flips:
        return "flip nothing"
    flips = ",".join(
        f"({society.label(i)},{society.label(j)})" for i, j in sorted(sol.flips))
    return "flip " + flips


# ---------------------------------------------------------------------------
# subcommands


def _cmd_eval(args) -> int:
    data = _load_input(args)
    society = society_from_json(data)
    rule = _rule_for_profile(args, data)
    members = _members_for(args, data, society)
    final = rules_mod.evaluate(rule, society, members)
    if args.format == "json":
        record = {
            "record": "eval",
            "rule": rule_to_json(rule),
            "qualified": sorted(final),
            "labels": [society.label(i) for i in sorted(final)],
        }
        _emit(dumps(record), args)
    else:
        _emit(_fmt_set(society, final) + "\n", args)
    return 0


def _stage_json(rule: Rule, stages):
    if rule.name == "ic":
        return [
            {"new": sorted(q), "cumulative": sorted(k)} for q, k in stages
        ]
    return [sorted(stage) for stage in stages]


def _stage_text(society: Society, rule: Rule, stages):
    lines = []
    if rule.name == "ic":
        for i, (q, k) in enumerate(stages):
            lines.append(
                f"  Q{i} {_fmt_set(society, q)} K{i} {_fmt_set(society, k)}")
    elif rule.name in ("lsr", "csr", "2ic", "2lic"):
        for i, stage in enumerate(stages):
            lines.append(f"  K{i} {_fmt_set(society, stage)}")
    else:
        for stage in stages:
            lines.append(f"  {_fmt_set(society, stage)}")
    return lines


def _cmd_trace(args) -> int:
    data = _load_input(args)
    society = society_from_json(data)
    rule = _rule_for_profile(args, data)
    members = _members_for(args, data, society)
    tr = rules_mod.trace(rule, society, members)
    if args.format == "json":
        record = {
            "record": "trace",
            "rule": rule_to_json(rule),
            "stages": _stage_json(rule, tr.stages),
            "final": sorted(tr.final),
            "labels": [society.label(i) for i in sorted(tr.final)],
        }
        _emit(dumps(record), args)
    else:
        lines = [str(rule)]
        lines.extend(_stage_text(society, rule, tr.stages))
        lines.append(f"  final {_fmt_set(society, tr.final)}")
        _emit("\n".join(lines) + "\n", args)
    return 0


def _solve_poly(instance: AttackInstance):
    hit = find_poly_solver(instance)
    if hit is None:
        raise CliError("no polynomial algorithm known")
    name, fn = hit
    try:
        report = fn(instance)
    except PreconditionError as exc:
        raise CliError(f"no polynomial algorithm known: {exc}")
    return name, report.verdict


def _solve_brute(instance: AttackInstance):
    try:
        return "oracle", brute_force(instance)
    except OracleCapError as exc:
        raise CliError(f"instance too large for the exhaustive oracle: {exc}")


def _cmd_solve(args) -> int:
    instance = instance_from_json(_load_input(args))
    if args.algo == "poly":
        solver, verdict = _solve_poly(instance)
        algo = "poly"
    elif args.algo == "brute":
        solver, verdict = _solve_brute(instance)
        algo = "brute"
    else:
        hit = find_poly_solver(instance)
        if hit is not None:
            solver, verdict = _solve_poly(instance)
            algo = "poly"
        else:
            solver, verdict = _solve_brute(instance)
            algo = "brute"
    if args.format == "json":
        record = {
            "record": "solve",
            "algo": algo,
            "solver": solver,
            "answer": verdict.answer,
            "cost": verdict.cost,
            "certifier": verdict.certifier,
            "reason": verdict.reason,
            "witness": solution_to_json(verdict.witness) if verdict.witness else None,
        }
        _emit(dumps(record), args)
    else:
        if verdict.answer:
            lines = [f"YES, cost {verdict.cost} ({solver})"]
            lines.append("  " + _fmt_solution(instance.society, verdict.witness))
        else:
            reason = verdict.reason or "no successful attack exists"
            lines = [f"NO ({solver}): {reason}"]
        _emit("\n".join(lines) + "\n", args)
    return 0


def _cmd_verify(args) -> int:
    instance = instance_from_json(_load_input(args))
    try:
        sol_data = load_json(args.solution)
    except FileNotFoundError:
        raise CliError(f"no such file: {args.solution}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.solution}: not valid JSON ({exc})")
    sol = solution_from_json(sol_data)
    res = verify_solution(instance, sol)
    if args.format == "json":
        record = {
            "record": "verify",
            "valid": res.valid,
            "cost": res.cost,
            "reason": res.reason,
        }
        _emit(dumps(record), args)
    else:
        if res.valid:
            _emit(f"Valid, cost {res.cost}\n", args)
        else:
            _emit(f"Invalid: {res.reason}\n", args)
    return 0 if res.valid else 1


def _cmd_reduce(args) -> int:
    source = source_from_json(_load_input(args))
    rule = None
    if args.rule is not None and args.rule != "consent":
        rule = args.rule
    out = build_reduction(args.theorem, source, rule=rule, s=args.s, t=args.t)
    _emit(dumps(instance_to_json(out.instance)), args)
    inst = out.instance
    meta = " ".join(f"{k}={v!r}" for k, v in sorted(out.metadata.items()))
    print(
        f"{out.theorem_id}: n={inst.n} kind={inst.kind} budget={inst.budget}"
        + (f" {meta}" if meta else ""),
        file=sys.stderr,
    )
    return 0


def _cmd_immunity(args) -> int:
    rule = _parse_rule(args)
    record = {
        "record": "immunity",
        "rule": rule_to_json(rule),
        "kind": args.kind,
        "objective": args.objective,
        "mode": args.mode,
    }
    witness = None
    if args.mode == "exhaustive":
        if args.kind in (BRIBERY, MICROBRIBERY):
            raise CliError("exhaustive sweeps cover the control attacks only; "
                           "use --mode sample for bribery")
        record["maxN"] = args.max_n
        for n in range(1, args.max_n + 1):
            try:
                found = immunity_search(rule, args.kind, args.objective, n)
            except OracleCapError as exc:
                raise CliError(str(exc))
            if found is not None:
                witness = found
                break
    else:
        record["trials"] = args.trials

        def sampler(i):
            try:
                return random_instance(
                    f"{args.seed}:{i}", args.n, rule, args.kind, args.objective)
            except InvalidInstance:
                return None

        res = immunity_check(rule, args.kind, args.objective, sampler,
                             trials=args.trials)
        if hasattr(res, "instance"):
            witness = (res.instance, res.solution)
        else:
            record["checked"] = res.trials
    if witness is not None:
        inst, sol = witness
        record["witness"] = {
            "instance": instance_to_json(inst),
            "solution": solution_to_json(sol),
        }
    else:
        record["witness"] = None
    if args.format == "json":
        _emit(dumps(record), args)
    elif witness is not None:
        inst, sol = witness
        lines = [
            f"susceptible: attack found at n={inst.n}",
            "  instance " + json.dumps(instance_to_json(inst), sort_keys=True),
            "  " + _fmt_solution(inst.society, sol),
        ]
        _emit("\n".join(lines) + "\n", args)
    elif args.mode == "exhaustive":
        _emit(f"immune: no attack exists for any society with n <= {args.max_n}\n",
              args)
    else:
        _emit(f"no witness in {record['checked']} sampled instances "
              "(corroboration, not proof)\n", args)
    return 1 if witness is not None else 0


def _cmd_crosscheck(args) -> int:
    report = harness.run_crosscheck(args.suite, seed=args.seed, trials=args.trials)
    if args.format == "json":
        _emit(report.to_ndjson(), args)
    else:
        lines = []
        for dis in report.disagreements:
            lines.append("disagreement: " + json.dumps(dis, sort_keys=True))
        verdict = "pass" if report.passed else "FAIL"
        lines.append(
            f"suite {report.suite}: seed {report.seed}, {report.trials} trials, "
            f"{report.agreements} agreements, {len(report.disagreements)} "
            f"disagreements, {verdict}")
        _emit("\n".join(lines) + "\n", args)
    for name, secs in sorted(report.timings.items()):
        print(f"{name}: {secs:.3f}s", file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_bench(args) -> int:
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    except ValueError:
        raise CliError(f"cannot parse sizes from {args.sizes!r}")
    try:
        table = harness.bench_scaling(args.solver, sizes, seed=args.seed,
                                      runs=args.runs)
    except ValueError as exc:
        raise CliError(str(exc))
    # medians are machine-dependent, so they go to stderr; stdout stays a
    # pure function of the arguments
    for n, median in table:
        print(f"n={n}: {median * 1000:.2f} ms median", file=sys.stderr)
    record = {
        "record": "bench",
        "solver": args.solver,
        "sizes": sizes,
        "runs": args.runs,
        "seed": args.seed,
    }
    if args.format == "json":
        _emit(dumps(record), args)
    else:
        _emit(f"benchmarked {args.solver} at sizes "
              f"{','.join(str(n) for n in sizes)}; timings on stderr\n", args)
    return 0


def _cmd_gen(args) -> int:
    rule = _parse_rule(args)
    try:
        instance = random_instance(args.seed, args.n, rule, args.kind,
                                   args.objective, density=args.density,
                                   priced=args.priced)
    except InvalidInstance as exc:
        raise CliError(f"cannot generate such an instance: {exc}")
    _emit(dumps(instance_to_json(instance)), args)
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="infile", metavar="FILE",
                        help="input JSON file")
    common.add_argument("--out", metavar="FILE",
                        help="write stdout payload to FILE instead")
    common.add_argument("--seed", type=int, default=0,
                        help="RNG seed (default 0)")
    common.add_argument("--format", choices=("json", "text"), default="text",
                        help="output format (default text)")

    rule_flags = argparse.ArgumentParser(add_help=False)
    rule_flags.add_argument("--rule",
                            help="social rule: consent, consent(s,t), lsr, "
                                 "csr, ic, 2ic or 2lic")
    rule_flags.add_argument("--s", type=int, help="consent threshold s")
    rule_flags.add_argument("--t", type=int, help="consent threshold t")

    parser = argparse.ArgumentParser(
        prog="groupident",
        description="evaluate social rules and attack instances over "
                    "JSON society files",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common, rule_flags],
                       help="socially qualified set of a profile")
    p.add_argument("--members", help="restrict to these individuals "
                                     "(comma separated indices or labels)")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("trace", parents=[common, rule_flags],
                       help="iteration stages of a rule evaluation")
    p.add_argument("--members", help="restrict to these individuals")
    p.set_defaults(fn=_cmd_trace)

    p = sub.add_parser("solve", parents=[common],
                       help="decide an attack instance")
    p.add_argument("--algo", choices=("auto", "poly", "brute"), default="auto",
                   help="solver choice (default auto)")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("verify", parents=[common],
                       help="check a solution against an instance")
    p.add_argument("--solution", required=True, metavar="FILE",
                   help="solution JSON file")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("reduce", parents=[common, rule_flags],
                       help="build the attack instance a hardness "
                            "construction derives from a source problem")
    p.add_argument("--theorem", required=True, choices=THEOREM_IDS,
                   metavar="ID", help="catalog entry id")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("immunity", parents=[common, rule_flags],
                       help="hunt for susceptibility witnesses in one "
                            "rule/attack/objective cell")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--objective", required=True, choices=OBJECTIVES)
    p.add_argument("--mode", choices=("exhaustive", "sample"),
                   default="exhaustive",
                   help="exhaustive sweep over tiny societies, or sampling")
    p.add_argument("--max-n", type=int, default=3,
                   help="largest society size for the exhaustive sweep")
    p.add_argument("--n", type=int, default=4,
                   help="society size for sampled instances")
    p.add_argument("--trials", type=int, default=1000,
                   help="sample count for --mode sample")
    p.set_defaults(fn=_cmd_immunity)

    p = sub.add_parser("crosscheck", parents=[common],
                       help="run one cross-checking suite")
    p.add_argument("--suite", required=True, choices=harness.SUITES)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(fn=_cmd_crosscheck)

    p = sub.add_parser("bench", parents=[common],
                       help="median wall-times of one efficient solver")
    p.add_argument("--solver", required=True,
                   help="dispatchable solver name, e.g. solve_lsr_rdgcdi")
    p.add_argument("--sizes", required=True,
                   help="comma separated society sizes, e.g. 50,100,200")
    p.add_argument("--runs", type=int, default=5,
                   help="timed runs per size (default 5)")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("gen", parents=[common, rule_flags],
                       help="generate a random attack instance")
    p.add_argument("--n", type=int, required=True, help="society size")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--objective", required=True, choices=OBJECTIVES)
    p.add_argument("--density", type=float, default=0.5,
                   help="probability of a +1 profile entry (default 0.5)")
    p.add_argument("--priced", action="store_true",
                   help="attach random prices (bribery kinds)")
    p.set_defaults(fn=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidInstance, SolutionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
