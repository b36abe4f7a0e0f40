"""Command-line interface.

Subcommands: solve (compute answer sets), analyze (dependency-graph and
convergence structure), check (validate a model file against a
program).  Exit codes: 0 success, 1 no answer set / failed check,
2 usage or parse error, 3 incomplete result.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .intervals import Interval
from .program import ParseError, ground, parse_program
from . import depgraph, nmi, semantics, solver
from .mi import mi_fixpoint
from .transform import transform_program, substitute

EXIT_OK = 0
EXIT_NO_ANSWER = 1
EXIT_USAGE = 2
EXIT_INCOMPLETE = 3


def _default_eps():
    env = os.environ.get("UNASP_EPS")
    if env:
        try:
            return float(env)
        except ValueError:
            pass
    return 0.009


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="unasp",
        description="Answer set solver for weighted rules over "
                    "sub-intervals of [0,1]")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="program file")
        p.add_argument("--eps", type=float, default=_default_eps(),
                       help="iteration termination threshold")
        p.add_argument("--nb", type=int, default=5,
                       help="branch-and-bound grid size")
        p.add_argument("--seeds", type=str, default=None,
                       help="explicit branch-and-bound seeds, e.g. 0,0.25,1")
        p.add_argument("--max-iter", type=int, default=10_000,
                       help="outer iteration cap")
        p.add_argument("--max-answer-sets", type=int, default=64)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--trace", type=str, default="",
                       help="comma list from mi,nmi,graph")
        p.add_argument("--dump-transformed", action="store_true")
        p.add_argument("--dot", metavar="FILE", default=None,
                       help="write dependency graph DOT text")

    common(sub.add_parser("solve", help="compute answer sets"))
    common(sub.add_parser("analyze", help="structural analysis"))
    chk = sub.add_parser("check", help="validate a model file")
    common(chk)
    chk.add_argument("--model", required=True, help="model JSON file")
    return parser


def _load_program(path):
    with open(path) as fh:
        return parse_program(fh.read())


def _solver_config(args):
    seeds = None
    if args.seeds:
        seeds = [float(s) for s in args.seeds.split(",") if s != ""]
        if any(x < 0 or x > 1 for x in seeds):
            raise ValueError("seeds must lie in [0,1]")
    cfg = solver.SolverConfig(
        nmi=nmi.NmiConfig(eps=args.eps, max_outer_iters=args.max_iter,
                          n_b=args.nb),
        seeds=seeds,
        max_answer_sets=args.max_answer_sets,
        trace={t for t in args.trace.split(",") if t},
        trace_sink=lambda line: print(line, file=sys.stderr),
    )
    return cfg


def _report_json(report):
    return {
        "status": report.status,
        "answer_sets": [semantics.model_to_json(i)
                        for i in report.answer_sets],
        "diagnostics": report.diagnostics,
    }


def _print_answer_set(i, index):
    print(f"answer set {index}:")
    for lit, v in sorted(i.items(), key=lambda kv: (kv[0].negated,
                                                    str(kv[0].atom))):
        if not lit.negated:
            print(f"  {lit.atom}: [{v.lower:.9g},{v.upper:.9g}]")


def _cmd_solve(args):
    program = _load_program(args.file)
    cfg = _solver_config(args)
    if args.dump_transformed:
        print(transform_program(ground(program)), file=sys.stderr)
    report = solver.solve(program, cfg)
    if args.dot:
        tp = transform_program(ground(program))
        with open(args.dot, "w") as fh:
            fh.write(depgraph.to_dot(depgraph.build_dep_graph(tp)))
    if args.format == "json":
        print(json.dumps(_report_json(report), sort_keys=True, indent=2))
    else:
        print(f"status: {report.status}")
        if report.status == "no_answer_set":
            print("no answer set")
        for k, i in enumerate(report.answer_sets, 1):
            _print_answer_set(i, k)
    if report.status == "incomplete":
        return EXIT_INCOMPLETE
    if not report.answer_sets:
        return EXIT_NO_ANSWER
    return EXIT_OK


def _cmd_analyze(args):
    program = _load_program(args.file)
    grounded = ground(program)
    tp = transform_program(grounded)
    if args.dump_transformed:
        print(tp, file=sys.stderr)
    state = mi_fixpoint(tp)
    entries = ({a: substitute(e, state.interp)
                for a, e in state.residual.items()}
               if state.residual else tp.entries)
    graph = depgraph.build_dep_graph(
        type(tp)(entries) if state.residual else tp)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(depgraph.to_dot(graph))
    info = {
        "mi_assigned": {str(a): [v.lower, v.upper]
                        for a, v in state.interp.items()
                        if not isinstance(v, str)},
        "halted_inconsistent": state.halted_inconsistent,
        "components": [],
    }
    if entries and not state.halted_inconsistent:
        components, topo = depgraph.scc_condense(entries)
        for idx in topo:
            comp = components[idx]
            record = {"atoms": [str(a) for a in comp]}
            cyclic = (len(comp) > 1
                      or comp[0] in depgraph.atom_digraph(entries).succ.get(
                          comp[0], ()))
            if cyclic:
                cycles = depgraph.enumerate_cycles(entries, comp)
                record["cycles"] = [[str(a) for a in c] for c in cycles]
                table = depgraph.intersection_table(cycles, comp)
                record["intersection_table"] = {
                    "-".join(str(a) for a in cyc):
                        {str(a): tick for a, tick in row.items()}
                    for cyc, row in table.items()}
                try:
                    aset = depgraph.select_assumption_set(entries, comp,
                                                          cycles)
                    record["assumption_set"] = [str(a) for a in aset]
                    report = nmi.check_contraction(entries, comp, aset,
                                                   cycles)
                    record["contraction"] = report.classification
                    record["gains"] = {str(a): [g.g1, g.g2, g.norm]
                                       for a, g in report.gains.items()}
                except depgraph.NoValidAssumptionSet as exc:
                    record["assumption_set_error"] = str(exc)
            info["components"].append(record)
    if args.format == "json":
        print(json.dumps(info, sort_keys=True, indent=2))
    else:
        print(f"monotonic stage assigned {len(state.interp)} atoms; "
              f"{len(state.residual)} rules residual")
        for record in info["components"]:
            line = ",".join(record["atoms"])
            if "cycles" in record:
                line += (f"  cycles={len(record['cycles'])}"
                         f"  assumption={record.get('assumption_set')}"
                         f"  {record.get('contraction', '')}")
            print(line)
    return EXIT_OK


def _cmd_check(args):
    program = _load_program(args.file)
    grounded = ground(program)
    model = semantics.load_model_file(args.model, grounded)
    ok = semantics.is_answer_set(model, grounded, eps=max(1e-6, args.eps))
    if args.format == "json":
        print(json.dumps({"valid": ok}))
    else:
        print("VALID" if ok else "INVALID")
    return EXIT_OK if ok else EXIT_NO_ANSWER


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        return _cmd_check(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
