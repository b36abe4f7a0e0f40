"""Full solving pipeline.

ground -> transform -> monotonic fixpoint -> dependency analysis of the
residual -> per-component dispatch in topological order (iteration,
trivial [0,1] fill, aggregation-cycle resolution, or branch-and-bound),
branching the downstream computation whenever a component admits
several stable valuations.  Every emitted answer set is re-checked by
the declarative verifier before it is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .intervals import EPS_CMP, INCONSISTENT, Interval
from .program import Program
from . import depgraph, nmi, semantics
from .mi import mi_fixpoint
from .program import ground
from .transform import Const, transform_program, substitute, referenced_atoms


@dataclass
class SolverConfig:
    nmi: nmi.NmiConfig = field(default_factory=nmi.NmiConfig)
    seeds: list = None             # explicit branch-and-bound seed list
    max_answer_sets: int = 64
    cycle_cap: int = 10_000
    trace: set = field(default_factory=set)   # subset of {mi, nmi, graph}
    trace_sink: object = None                 # callable(str)

    def _emit(self, kind, text):
        if kind in self.trace and self.trace_sink:
            self.trace_sink(text)


@dataclass
class SolveReport:
    answer_sets: list = field(default_factory=list)  # Literal -> Interval
    status: str = "ok"       # ok | no_answer_set | inconsistent | incomplete
    diagnostics: dict = field(default_factory=dict)


def _fmt_vals(values):
    return ", ".join(f"{a}:{v}" for a, v in sorted(values.items(),
                                                   key=lambda kv: str(kv[0])))


def _close_valuations(a, b, tol):
    return set(a) == set(b) and all(a[x].same_as(b[x], tol) for x in a)


def _dispatch_component(entries, comp, cfg: SolverConfig, diag_steps):
    """Evaluate one cyclic component; returns (list of atom valuations,
    method name, flags)."""
    flags = {"max_iters": False, "inconsistent": False}
    exprs = list(entries.values())
    kagg_present = any(nmi._has_kagg(e) for e in exprs)
    if kagg_present:
        try:
            resolved = nmi.solve_kagg_cycle(entries, comp, cfg.nmi)
            return [r for r, _ in resolved], "kagg_cycle", flags
        except nmi.StructuralMismatch:
            pass
    cycles = depgraph.enumerate_cycles(entries, comp, cfg.cycle_cap)
    if any(nmi._has_const(e) for e in exprs):
        aset = depgraph.select_assumption_set(entries, comp, cycles)
        report = nmi.check_contraction(entries, comp, aset, cycles)
        diag_steps.append({"component": [str(a) for a in comp],
                           "method": "nmi",
                           "assumption_set": [str(a) for a in aset],
                           "contraction": report.classification})
        outcome = nmi.nmi_iterate(entries, aset, cfg.nmi)
        results = [outcome.interp] if outcome.status == "converged" else []
        if kagg_present:
            # an aggregation the special-case resolver cannot handle may
            # hide several point fixpoints the iteration cannot reach;
            # also try self-reproducing exact seeds
            try:
                bset = depgraph.select_assumption_set(
                    entries, comp, cycles, mode="branch_bound")
            except depgraph.NoValidAssumptionSet:
                bset = aset
            exact = nmi.branch_and_bound(entries, bset, cfg.nmi, cfg.seeds)
            tol = max(1e-6, 3.0 * cfg.nmi.eps)
            results = exact + [
                r for r in results
                if not any(_close_valuations(r, e, tol) for e in exact)]
        if results:
            return results, "nmi", flags
        flags[("max_iters" if outcome.status == "max_iters"
               else "inconsistent")] = True
        return [], "nmi", flags
    if any(depgraph._contains_naf(e) for e in exprs):
        aset = depgraph.select_assumption_set(entries, comp, cycles,
                                              mode="branch_bound")
        diag_steps.append({"component": [str(a) for a in comp],
                           "method": "branch_and_bound",
                           "assumption_set": [str(a) for a in aset]})
        results = nmi.branch_and_bound(entries, aset, cfg.nmi, cfg.seeds)
        return results, "branch_and_bound", flags
    # no constants, no naf, no aggregation: nothing pins the cycle down
    return [{a: Interval(0.0, 1.0) for a in comp}], "ignorance", flags


def solve(p: Program, cfg: SolverConfig = None) -> SolveReport:
    cfg = cfg or SolverConfig()
    p = ground(p)
    tp = transform_program(p)
    mi_state = mi_fixpoint(tp)
    for step, assigned, left in mi_state.trace:
        cfg._emit("mi", f"mi step {step}: {_fmt_vals(assigned)} "
                        f"({left} rules residual)")
    diagnostics = {
        "mi_steps": mi_state.step,
        "mi_assigned": len(mi_state.interp),
        "residual_rules": len(mi_state.residual),
        "components": [],
        "notes": [],
    }
    truncated = False
    if mi_state.halted_inconsistent:
        diagnostics["notes"].append(
            "monotonic stage halted: inconsistent aggregation at "
            + ", ".join(str(a) for a in mi_state.inconsistent_atoms))
        return SolveReport([], "no_answer_set", diagnostics)

    branches = [dict(mi_state.interp)]
    if mi_state.residual:
        components, topo = depgraph.scc_condense(mi_state.residual)
        cfg._emit("graph", "components (topo order): "
                  + " | ".join(",".join(str(a) for a in components[k])
                               for k in topo))
        for comp_idx in topo:
            comp = components[comp_idx]
            next_branches = []
            for branch in branches:
                entries = {a: substitute(mi_state.residual[a], branch)
                           for a in comp}
                cyclic = len(comp) > 1 or comp[0] in referenced_atoms(
                    entries[comp[0]])
                if not cyclic:
                    expr = entries[comp[0]]
                    if not isinstance(expr, Const):
                        raise RuntimeError(
                            f"unresolved acyclic atom {comp[0]}")
                    if expr.value is INCONSISTENT:
                        diagnostics["notes"].append(
                            f"branch dropped: inconsistent value at {comp[0]}")
                        continue
                    new = dict(branch)
                    new[comp[0]] = expr.value
                    next_branches.append(new)
                    continue
                results, method, flags = _dispatch_component(
                    entries, comp, cfg, diagnostics["components"])
                if flags["max_iters"]:
                    truncated = True
                    diagnostics["notes"].append(
                        "iteration cap reached on component "
                        + ",".join(str(a) for a in comp))
                if flags["inconsistent"]:
                    diagnostics["notes"].append(
                        "branch dropped: inconsistent aggregation in "
                        + ",".join(str(a) for a in comp))
                for k, values in enumerate(results):
                    cfg._emit("nmi", f"component {','.join(str(a) for a in comp)} "
                              f"[{method}] result {k}: {_fmt_vals(values)}")
                    new = dict(branch)
                    new.update(values)
                    next_branches.append(new)
                if len(next_branches) > cfg.max_answer_sets:
                    next_branches = next_branches[:cfg.max_answer_sets]
                    truncated = True
            branches = next_branches
            if not branches:
                break

    verify_eps = max(1e-6, 3.0 * cfg.nmi.eps)
    totals = [semantics.total_from_positive(b) for b in branches]
    answer_sets = []
    rejected = 0
    for total in totals:
        if semantics.is_answer_set(total, p, candidates=totals,
                                   eps=verify_eps):
            answer_sets.append(total)
        else:
            rejected += 1
    if rejected:
        diagnostics["notes"].append(
            f"verifier rejected {rejected} candidate(s)")
    if truncated:
        status = "incomplete"
    elif not answer_sets:
        status = "no_answer_set"
    else:
        status = "ok"
    diagnostics["verify_eps"] = verify_eps
    return SolveReport(answer_sets, status, diagnostics)
