"""Nonmonotonic iteration over one strongly connected component.

The chosen (assumption-set) atoms act as the iteration state: each
outer step substitutes their current values into every body, runs the
monotonic engine to a fixpoint on the now-acyclic subprogram, and reads
the chosen atoms back.  Also here: the cycle-gain computation used for
contraction checks, the special-case resolver for a single cycle
through a certainty aggregation, and grid-seeded branch-and-bound for
components with no constants to anchor the iteration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .intervals import EPS_CMP, Interval
from .mi import mi_fixpoint
from .transform import Const, Kagg, TransformedProgram, simplify, substitute
from .depgraph import (NonConstantOperand, enumerate_cycles,
                       select_assumption_set, build_vpg)

BOTTOM = Interval(0.0, 1.0)


@dataclass
class NmiConfig:
    eps: float = 0.009
    max_outer_iters: int = 10_000
    n_b: int = 5

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.n_b < 2:
            raise ValueError("n_b must be at least 2")

    def grid_seeds(self):
        return [i / (self.n_b - 1) for i in range(self.n_b)]


@dataclass
class GainVector:
    g1: float
    g2: float

    @property
    def norm(self) -> float:
        return max(abs(self.g1), abs(self.g2))


@dataclass
class NmiOutcome:
    status: str                 # converged | max_iters | inconsistent
    interp: dict = field(default_factory=dict)   # Atom -> Interval
    iters: int = 0
    history: list = field(default_factory=list)  # chosen values per outer step
    deltas: list = field(default_factory=list)   # sup-norm change per step


class UnresolvedComponent(RuntimeError):
    """The inner pass could not value every atom; the assumption set
    does not break all cycles."""


def _inner_pass(entries: dict, values: dict):
    sub = {a: substitute(e, values) for a, e in entries.items()}
    return mi_fixpoint(TransformedProgram(sub))


def nmi_iterate(entries: dict, assumption_set, cfg: NmiConfig,
                init: dict = None) -> NmiOutcome:
    """Outer fixpoint iteration over the chosen atoms, started from
    total ignorance unless an explicit init is given."""
    current = {a: BOTTOM for a in assumption_set}
    if init:
        current.update(init)
    history, deltas = [], []
    for it in range(1, cfg.max_outer_iters + 1):
        state = _inner_pass(entries, current)
        if state.halted_inconsistent:
            return NmiOutcome("inconsistent", dict(state.interp), it,
                              history, deltas)
        if state.residual:
            raise UnresolvedComponent(
                f"atoms left unresolved: {sorted(state.residual, key=str)}")
        new = {a: state.interp[a] for a in assumption_set}
        delta = max(
            max(abs(new[a].lower - current[a].lower),
                abs(new[a].upper - current[a].upper))
            for a in assumption_set)
        history.append(dict(new))
        deltas.append(delta)
        current = new
        if delta < cfg.eps:
            final = _inner_pass(entries, current)
            if final.halted_inconsistent:
                return NmiOutcome("inconsistent", dict(final.interp), it,
                                  history, deltas)
            return NmiOutcome("converged", dict(final.interp), it,
                              history, deltas)
    return NmiOutcome("max_iters", dict(current), cfg.max_outer_iters,
                      history, deltas)


def cycle_gain(vpp: dict) -> GainVector:
    """Linearized update coefficients along one value-propagation path.

    Walks the path keeping a coefficient per interval bound: classical
    negation swaps the bounds, naf makes both depend on the lower one,
    a conjunction with constant operand scales by its bounds, a
    disjunction by one minus its bounds.
    """
    g1 = g2 = 1.0
    for steps in vpp["segments"]:
        for step in steps:
            kind = step[0]
            if kind == "neg":
                g1, g2 = g2, g1
            elif kind == "naf":
                g2 = g1
            elif kind in ("and", "or"):
                const, extra = step[1], step[2]
                if const is None or extra:
                    raise NonConstantOperand(
                        f"{kind} node has non-constant operands")
                if kind == "and":
                    g1 *= const.lower
                    g2 *= const.upper
                else:
                    g1 *= 1.0 - const.lower
                    g2 *= 1.0 - const.upper
            else:
                raise NonConstantOperand("aggregation node in path")
    return GainVector(g1, g2)


@dataclass
class ContractionReport:
    classification: str   # no_naf_no_kagg | simple_cycle_gain_lt1 |
                          # conj_path_bound | kagg_cycle |
                          # branch_bound_required | unclassified
    gains: dict = field(default_factory=dict)   # Atom -> GainVector | None
    k_counts: dict = field(default_factory=dict)


def _has_kagg(expr) -> bool:
    if isinstance(expr, Kagg):
        return True
    if hasattr(expr, "children"):
        return any(_has_kagg(c) for c in expr.children)
    if hasattr(expr, "child"):
        return _has_kagg(expr.child)
    if hasattr(expr, "left"):
        return _has_kagg(expr.left) or _has_kagg(expr.right)
    return False


def _has_naf(expr) -> bool:
    from .depgraph import _contains_naf
    return _contains_naf(expr)


def _has_const(expr) -> bool:
    if isinstance(expr, Const):
        return True
    if hasattr(expr, "children"):
        return any(_has_const(c) for c in expr.children)
    if hasattr(expr, "child"):
        return _has_const(expr.child)
    if hasattr(expr, "left"):
        return _has_const(expr.left) or _has_const(expr.right)
    return False


def _conj_path_stats(vpp):
    """Constant-only gain and varying-conjunct count for a path made of
    conjunction nodes; None when the path has disjunctions."""
    g1 = g2 = 1.0
    k = 0
    for steps in vpp["segments"]:
        for step in steps:
            kind = step[0]
            if kind == "neg":
                g1, g2 = g2, g1
            elif kind == "naf":
                g2 = g1
            elif kind == "and":
                const, extra = step[1], step[2]
                k += extra
                if const is not None:
                    g1 *= const.lower
                    g2 *= const.upper
            else:
                return None, None
    return max(abs(g1), abs(g2)), k


def check_contraction(entries: dict, component, assumption_set,
                      cycles) -> ContractionReport:
    """Advisory classification of a component against the sufficient
    convergence conditions; unclassified components still iterate."""
    exprs = [entries[a] for a in component]
    if any(_has_kagg(e) for e in exprs):
        return ContractionReport("kagg_cycle")
    if not any(_has_naf(e) for e in exprs):
        return ContractionReport("no_naf_no_kagg")
    if not any(_has_const(e) for e in exprs):
        # nothing damps the cycle; only exact seeds can stabilize it
        return ContractionReport("branch_bound_required")
    vpg = build_vpg(entries, component, assumption_set, cycles)
    if len(cycles) == 1 and len(assumption_set) == 1:
        atom = assumption_set[0]
        if vpg[atom]:
            try:
                gain = cycle_gain(vpg[atom][0])
                if gain.norm < 1.0:
                    return ContractionReport("simple_cycle_gain_lt1",
                                             {atom: gain})
                return ContractionReport("unclassified", {atom: gain})
            except NonConstantOperand:
                pass
    bounds, k_counts, gains = [], {}, {}
    for atom in assumption_set:
        for vpp in vpg.get(atom, []):
            gnorm, k = _conj_path_stats(vpp)
            if gnorm is None:
                bounds.append(False)
                continue
            k_counts[atom] = k
            gains[atom] = GainVector(gnorm, gnorm)
            bounds.append(gnorm < 1.0 / (k + 2))
    if bounds and all(bounds):
        return ContractionReport("conj_path_bound", gains, k_counts)
    return ContractionReport("unclassified", gains, k_counts)


class StructuralMismatch(RuntimeError):
    pass


def solve_kagg_cycle(entries: dict, component, cfg: NmiConfig,
                     eps_cmp: float = EPS_CMP):
    """Resolve a simple cycle containing exactly one aggregation rule
    a <- c (x)k B by comparing two candidate fixpoints: the cycle with
    the aggregation dropped, and a single pass anchored at a = c.

    Returns the surviving candidate interpretations (0, 1, or 2).
    """
    kagg_atoms = [a for a in component if isinstance(entries[a], Kagg)]
    if len(kagg_atoms) != 1:
        raise StructuralMismatch("expected exactly one aggregation rule")
    atom = kagg_atoms[0]
    node = entries[atom]
    if isinstance(node.left, Const):
        cbar, branch = node.left.value, node.right
    elif isinstance(node.right, Const):
        cbar, branch = node.right.value, node.left
    else:
        raise StructuralMismatch("no constant aggregation operand")
    cycles = enumerate_cycles(entries, component)
    if len(cycles) != 1:
        raise StructuralMismatch("component is not a simple cycle")

    # candidate 1: iterate with the aggregation dropped
    dropped = dict(entries)
    dropped[atom] = simplify(branch)
    aset = select_assumption_set(dropped, component,
                                 enumerate_cycles(dropped, component))
    outcome = nmi_iterate(dropped, aset, cfg)
    i_minus = outcome.interp if outcome.status == "converged" else None
    # stability: the branch value must be strictly more certain than c
    stable_minus = (i_minus is not None
                    and i_minus[atom].width < cbar.width - eps_cmp)

    # candidate 2: single anchored pass from a = c
    state = _inner_pass({x: e for x, e in entries.items() if x != atom},
                        {atom: cbar})
    i_s = None
    if not state.halted_inconsistent and not state.residual:
        i_s = dict(state.interp)
        i_s[atom] = cbar
    stable_s = False
    if i_s is not None:
        from .semantics import evaluate, total_from_positive
        v_branch = evaluate(branch, total_from_positive(i_s))
        # the incoming evidence must be strictly less certain than c
        stable_s = v_branch.width > cbar.width + eps_cmp

    if stable_minus and stable_s:
        below_minus = all(i_minus[x].width >= i_s[x].width - eps_cmp
                          for x in component)
        below_s = all(i_s[x].width >= i_minus[x].width - eps_cmp
                      for x in component)
        if below_minus and not below_s:
            return [(i_minus, "kagg_dropped")]
        if below_s and not below_minus:
            return [(i_s, "kagg_anchored")]
        if below_minus and below_s:
            return [(i_minus, "kagg_dropped")]
        return [(i_minus, "kagg_dropped"), (i_s, "kagg_anchored")]
    if stable_minus:
        return [(i_minus, "kagg_dropped")]
    if stable_s:
        return [(i_s, "kagg_anchored")]
    return []


def branch_and_bound(entries: dict, assumption_set, cfg: NmiConfig,
                     seeds=None):
    """Try every combination of exact seeds over the chosen atoms; keep
    those that reproduce themselves under one inner pass."""
    points = list(seeds) if seeds is not None else cfg.grid_seeds()
    results = []
    seen = set()
    for combo in itertools.product(points, repeat=len(assumption_set)):
        values = {a: Interval(x, x) for a, x in zip(assumption_set, combo)}
        state = _inner_pass(entries, values)
        if state.halted_inconsistent or state.residual:
            continue
        stable = all(state.interp[a].same_as(values[a], cfg.eps)
                     for a in assumption_set)
        if not stable:
            continue
        result = dict(state.interp)
        key = tuple(sorted((str(a), round(v.lower, 9), round(v.upper, 9))
                           for a, v in result.items()))
        if key in seen:
            continue
        seen.add(key)
        results.append(result)
    return results
