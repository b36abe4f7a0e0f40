"""Declarative semantics and the independent verifier.

Valuation of body expressions, interpretation consistency (three-way
classification), rule satisfaction, supportedness, reducts, and the
answer-set check (supported model of the reduct, minimally certain
among known candidates).
"""

from __future__ import annotations

import enum
import itertools
import json

from .intervals import (INCONSISTENT, EPS_CMP, Interval, Ordering,
                        OrderFamily, compare, kp_lt, naf, negate, tconorm,
                        tnorm)
from .program import Atom, ConstItem, LitItem, Literal, Program, Rule
from . import transform as tf

GRID_POINTS = (0.0, 0.25, 0.5, 0.75, 1.0)


class UnboundLiteral(LookupError):
    def __init__(self, literal):
        super().__init__(f"literal {literal} is not assigned")
        self.literal = literal


class ConsistencyClass(enum.Enum):
    STRICTLY_CONSISTENT = "strictly_consistent"
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"


def lookup(i: dict, lit: Literal):
    """Value of a literal, falling back on the mirror of its complement
    (strict-consistency reading) when only that side is assigned."""
    if lit in i:
        return i[lit]
    comp = lit.complement()
    if comp in i:
        return negate(i[comp])
    raise UnboundLiteral(lit)


def evaluate(e, i: dict):
    """Recursive valuation of a body expression; inconsistency absorbs."""
    if isinstance(e, tf.Const):
        return e.value
    if isinstance(e, tf.Ref):
        return lookup(i, e.literal)
    if isinstance(e, tf.Naf):
        return naf(evaluate(e.child, i))
    if isinstance(e, tf.Neg):
        return negate(evaluate(e.child, i))
    if isinstance(e, tf.And):
        value = evaluate(e.children[0], i)
        for c in e.children[1:]:
            value = tnorm(value, evaluate(c, i))
        return value
    if isinstance(e, tf.Or):
        value = evaluate(e.children[0], i)
        for c in e.children[1:]:
            value = tconorm(value, evaluate(c, i))
        return value
    if isinstance(e, tf.Kagg):
        from .intervals import kagg
        return kagg(evaluate(e.left, i), evaluate(e.right, i))
    raise TypeError(f"not a body expression: {e!r}")


def evaluate_body(r: Rule, i: dict):
    """Value of a rule body (conjunction of its items), without weight."""
    return evaluate(tf.body_expr(r), i)


def classify_consistency(i: dict) -> ConsistencyClass:
    if any(v is INCONSISTENT for v in i.values()):
        return ConsistencyClass.INCONSISTENT
    strict = True
    for lit, x in i.items():
        if lit.negated:
            continue
        comp = lit.complement()
        if comp not in i:
            continue
        y = i[comp]
        widths_equal = abs(x.width - y.width) <= EPS_CMP
        mirror = abs(x.lower + y.upper - 1.0) <= EPS_CMP
        if widths_equal and mirror:
            continue
        if not widths_equal:
            strict = False
            continue
        return ConsistencyClass.INCONSISTENT
    return (ConsistencyClass.STRICTLY_CONSISTENT if strict
            else ConsistencyClass.CONSISTENT)


def satisfies(i: dict, r: Rule, eps: float = EPS_CMP) -> bool:
    """Head value equals body∧weight, or strictly beats it in certainty
    or in truth degree."""
    head = lookup(i, r.head)
    body = tnorm(evaluate_body(r, i), r.weight)
    if head is INCONSISTENT or body is INCONSISTENT:
        return False
    if head.same_as(body, eps):
        return True
    if compare(head, body, OrderFamily.KNOWLEDGE_PREORDER, eps) is Ordering.GREATER:
        return True
    return compare(head, body, OrderFamily.TRUTH_PREORDER, eps) is Ordering.GREATER


def with_constraints(p: Program) -> Program:
    """Program extended with a <- [1,1] : [0,1] for every atom that
    heads no rule (the closed-world constraint)."""
    extra = [Rule(Literal(a, False), Interval(1.0, 1.0),
                  (ConstItem(Interval(0.0, 1.0)),), f"c#{a}")
             for a in sorted(p.headless_atoms(), key=str)]
    return Program(p.rules + extra) if extra else p


def required_value(atom: Atom, p: Program, i: dict):
    """The value the program's rules force on an atom, or None when the
    mixed-evidence aggregation is undefined (equal-width clash)."""
    pos = tf.r_join(Literal(atom, False), p)
    neg = tf.r_join(Literal(atom, True), p)
    has_pos = bool(p.rules_for(Literal(atom, False)))
    has_neg = bool(p.rules_for(Literal(atom, True)))
    if has_pos and has_neg:
        x = evaluate(pos, i)
        y = negate(evaluate(neg, i))
        if x is INCONSISTENT or y is INCONSISTENT:
            return INCONSISTENT
        if x.same_as(y, EPS_CMP):
            return x
        if abs(x.width - y.width) <= EPS_CMP:
            return None  # max_k undefined; reported as not supported
        return x if x.width < y.width else y
    if has_pos:
        return evaluate(pos, i)
    if has_neg:
        return negate(evaluate(neg, i))
    return Interval(0.0, 1.0)  # only via with_constraints; defensive


def is_supported_model(i: dict, p: Program, eps: float = EPS_CMP) -> bool:
    """Every atom carries exactly the value its rules produce and the
    complementary literal mirrors it."""
    p = with_constraints(p)
    try:
        for atom in p.atom_base:
            actual = lookup(i, Literal(atom, False))
            if actual is INCONSISTENT:
                return False
            req = required_value(atom, p, i)
            if req is None or req is INCONSISTENT:
                return False
            if not actual.same_as(req, eps):
                return False
            actual_neg = lookup(i, Literal(atom, True))
            if actual_neg is INCONSISTENT:
                return False
            if not actual_neg.same_as(negate(actual), eps):
                return False
    except UnboundLiteral:
        return False
    return True


def reduct(p: Program, i: dict) -> Program:
    """Replace every naf body item with the constant it evaluates to."""
    rules = []
    for r in p.rules:
        body = tuple(
            ConstItem(naf(lookup(i, b.literal)))
            if isinstance(b, LitItem) and b.naf else b
            for b in r.body)
        rules.append(Rule(r.head, r.weight, body, r.label))
    return Program(rules)


def total_from_positive(positive: dict) -> dict:
    """Strictly consistent total interpretation from atom values."""
    i = {}
    for atom, v in positive.items():
        i[Literal(atom, False)] = v
        i[Literal(atom, True)] = negate(v)
    return i


def grid_intervals(points=GRID_POINTS):
    return [Interval(lo, hi)
            for lo, hi in itertools.combinations_with_replacement(points, 2)]


def enumerate_grid_supported(p: Program, points=GRID_POINTS,
                             eps: float = EPS_CMP):
    """All supported models whose atom values have endpoints on the
    grid.  Exponential; meant for programs with very few atoms."""
    p = with_constraints(p)
    atoms = sorted(p.atom_base, key=str)
    joins = {a: (tf.r_join(Literal(a, False), p),
                 tf.r_join(Literal(a, True), p),
                 bool(p.rules_for(Literal(a, False))),
                 bool(p.rules_for(Literal(a, True))))
             for a in atoms}
    cells = grid_intervals(points)
    found = []
    for combo in itertools.product(cells, repeat=len(atoms)):
        i = total_from_positive(dict(zip(atoms, combo)))
        if _supported_with_joins(i, atoms, joins, eps):
            found.append(i)
    return found


def _supported_with_joins(i, atoms, joins, eps):
    for atom in atoms:
        pos, neg, has_pos, has_neg = joins[atom]
        actual = i[Literal(atom, False)]
        if has_pos and has_neg:
            x = evaluate(pos, i)
            y = negate(evaluate(neg, i))
            if x is INCONSISTENT or y is INCONSISTENT:
                return False
            if x.same_as(y, eps):
                req = x
            elif abs(x.width - y.width) <= eps:
                return False
            else:
                req = x if x.width < y.width else y
        elif has_pos:
            req = evaluate(pos, i)
        else:
            req = negate(evaluate(neg, i))
        if req is INCONSISTENT or not actual.same_as(req, eps):
            return False
    return True


def interp_kp_below(a: dict, b: dict, eps: float = EPS_CMP) -> bool:
    """a strictly below b in certainty: everywhere at least as wide,
    somewhere strictly wider."""
    strict = False
    keys = set(a) | set(b)
    for lit in keys:
        try:
            x, y = lookup(a, lit), lookup(b, lit)
        except UnboundLiteral:
            return False
        if x is INCONSISTENT or y is INCONSISTENT:
            return False
        if x.width < y.width - eps:
            return False
        if x.width > y.width + eps:
            strict = True
    return strict


def is_answer_set(i: dict, p: Program, candidates=(), eps: float = EPS_CMP,
                  grid_max_atoms: int = 3) -> bool:
    """Supported model of the reduct, with no known supported model of
    the same reduct strictly more uncertain-dominated below it.

    Minimality over the continuum is undecidable; it is checked against
    the supplied candidates plus, for small programs, a brute-force
    grid enumeration.
    """
    try:
        red = reduct(with_constraints(p), i)
    except UnboundLiteral:
        return False
    if not is_supported_model(i, red, eps):
        return False
    rivals = list(candidates)
    if len(p.atom_base) <= grid_max_atoms:
        rivals += enumerate_grid_supported(red, eps=eps)
    for c in rivals:
        if c is i:
            continue
        if not is_supported_model(c, red, eps):
            continue
        if interp_kp_below(c, i, eps):
            return False
    return True


def model_to_json(i: dict) -> dict:
    pos, neg = {}, {}
    for lit, v in sorted(i.items(), key=lambda kv: str(kv[0])):
        bucket = neg if lit.negated else pos
        bucket[str(lit.atom)] = [round(v.lower, 9), round(v.upper, 9)]
    out = {"positive": pos}
    if neg:
        out["negative"] = neg
    return out


def model_from_json(data: dict, p: Program) -> dict:
    atoms = {str(a): a for a in p.atom_base}
    i = {}
    for section, negated in (("positive", False), ("negative", True)):
        for name, (lo, hi) in data.get(section, {}).items():
            atom = atoms.get(name, Atom(name))
            i[Literal(atom, negated)] = Interval(lo, hi)
    # strictly consistent closure for missing negative literals
    for lit in list(i):
        comp = lit.complement()
        if comp not in i:
            i[comp] = negate(i[lit])
    return i


def load_model_file(path: str, p: Program) -> dict:
    with open(path) as fh:
        return model_from_json(json.load(fh), p)
