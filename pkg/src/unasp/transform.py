"""Program transformation: one body expression per atom.

All rules sharing a head literal are joined into a disjunction of
(body ∧ weight) conjunctions; positive and negative evidence for the
same atom are then combined with the certainty aggregator.  Atoms that
head no rule get the constraint body [0,1].  The resulting rules carry
no weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .intervals import (INCONSISTENT, EPS_CMP, Interval, kagg, naf, negate,
                        tconorm, tnorm)
from .program import ConstItem, LitItem, Literal, Program

_TRUE = Interval(1.0, 1.0)
_FALSE = Interval(0.0, 0.0)


@dataclass(frozen=True)
class Const:
    value: object  # Interval or INCONSISTENT

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Ref:
    literal: Literal

    def __str__(self):
        return str(self.literal)


@dataclass(frozen=True)
class Naf:
    child: object

    def __str__(self):
        return f"not {self.child}"


@dataclass(frozen=True)
class Neg:
    child: object

    def __str__(self):
        return f"-({self.child})"


@dataclass(frozen=True)
class And:
    children: tuple

    def __str__(self):
        return "(%s)" % " & ".join(str(c) for c in self.children)


@dataclass(frozen=True)
class Or:
    children: tuple

    def __str__(self):
        return "(%s)" % " | ".join(str(c) for c in self.children)


@dataclass(frozen=True)
class Kagg:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} (x)k {self.right})"


@dataclass
class TransformedProgram:
    entries: dict = field(default_factory=dict)  # Atom -> BodyExpr

    @property
    def atom_base(self) -> set:
        return set(self.entries)

    def __str__(self):
        lines = []
        for atom in sorted(self.entries, key=str):
            lines.append(f"{atom} <- {self.entries[atom]}.")
        return "\n".join(lines)


def _is_const(e, value=None, eps=EPS_CMP):
    if not isinstance(e, Const):
        return False
    if value is None:
        return True
    return e.value is not INCONSISTENT and e.value.same_as(value, eps)


def simplify(e):
    """Constant folding plus the unit/annihilator rewrites: drop [1,1]
    conjuncts and [0,0] disjuncts, collapse on [0,0] conjuncts and
    [1,1] disjuncts.  Inconsistency absorbs."""
    if isinstance(e, (Const, Ref)):
        return e
    if isinstance(e, Naf):
        child = simplify(e.child)
        if isinstance(child, Const):
            return Const(naf(child.value))
        return Naf(child)
    if isinstance(e, Neg):
        child = simplify(e.child)
        if isinstance(child, Const):
            return Const(negate(child.value))
        return Neg(child)
    if isinstance(e, Kagg):
        left, right = simplify(e.left), simplify(e.right)
        if isinstance(left, Const) and left.value is INCONSISTENT:
            return left
        if isinstance(right, Const) and right.value is INCONSISTENT:
            return right
        if isinstance(left, Const) and isinstance(right, Const):
            return Const(kagg(left.value, right.value))
        return Kagg(left, right)
    if isinstance(e, (And, Or)):
        is_and = isinstance(e, And)
        combine = tnorm if is_and else tconorm
        unit = _TRUE if is_and else _FALSE
        annihilator = _FALSE if is_and else _TRUE
        folded = None
        rest = []
        for child in map(simplify, e.children):
            if isinstance(child, Const):
                if child.value is INCONSISTENT:
                    return child
                folded = child.value if folded is None \
                    else combine(folded, child.value)
            else:
                rest.append(child)
        if folded is not None and folded.same_as(annihilator):
            return Const(annihilator)
        if folded is not None and not folded.same_as(unit):
            rest.insert(0, Const(folded))
        if not rest:
            return Const(folded if folded is not None else unit)
        if len(rest) == 1:
            return rest[0]
        return And(tuple(rest)) if is_and else Or(tuple(rest))
    raise TypeError(f"not a body expression: {e!r}")


def substitute(e, values: dict):
    """Replace literal references over the given atoms with constants.

    values maps Atom -> Interval (or INCONSISTENT).  A reference to
    -a resolves to the mirror of a's value.  Result is simplified.
    """
    def walk(node):
        if isinstance(node, Const):
            return node
        if isinstance(node, Ref):
            atom = node.literal.atom
            if atom in values:
                v = values[atom]
                return Const(negate(v) if node.literal.negated else v)
            return node
        if isinstance(node, Naf):
            return Naf(walk(node.child))
        if isinstance(node, Neg):
            return Neg(walk(node.child))
        if isinstance(node, And):
            return And(tuple(walk(c) for c in node.children))
        if isinstance(node, Or):
            return Or(tuple(walk(c) for c in node.children))
        if isinstance(node, Kagg):
            return Kagg(walk(node.left), walk(node.right))
        raise TypeError(f"not a body expression: {node!r}")

    return simplify(walk(e))


def referenced_atoms(e) -> set:
    if isinstance(e, Const):
        return set()
    if isinstance(e, Ref):
        return {e.literal.atom}
    if isinstance(e, (Naf, Neg)):
        return referenced_atoms(e.child)
    if isinstance(e, Kagg):
        return referenced_atoms(e.left) | referenced_atoms(e.right)
    return set().union(*(referenced_atoms(c) for c in e.children))


def _item_expr(item):
    if isinstance(item, ConstItem):
        return Const(item.value)
    ref = Ref(item.literal)
    return Naf(ref) if item.naf else ref


def body_expr(rule) -> object:
    """The rule body as an expression tree, weight not included."""
    parts = tuple(_item_expr(b) for b in rule.body)
    return parts[0] if len(parts) == 1 else And(parts)


def r_join(lit: Literal, p: Program):
    """Disjunction of (body ∧ weight) over every rule with this head;
    the empty join is the disjunction identity [0,0]."""
    disjuncts = []
    for r in p.rules_for(lit):
        parts = tuple(_item_expr(b) for b in r.body) + (Const(r.weight),)
        disjuncts.append(parts[0] if len(parts) == 1 else And(parts))
    if not disjuncts:
        return Const(_FALSE)
    if len(disjuncts) == 1:
        return simplify(disjuncts[0])
    return simplify(Or(tuple(disjuncts)))


def transform_program(p: Program) -> TransformedProgram:
    entries = {}
    for atom in p.atom_base:
        pos_rules = p.rules_for(Literal(atom, False))
        neg_rules = p.rules_for(Literal(atom, True))
        if pos_rules and neg_rules:
            expr = Kagg(r_join(Literal(atom, False), p),
                        Neg(r_join(Literal(atom, True), p)))
        elif pos_rules:
            expr = r_join(Literal(atom, False), p)
        elif neg_rules:
            expr = Neg(r_join(Literal(atom, True), p))
        else:
            # closed-world constraint on atoms heading no rule
            expr = Const(Interval(0.0, 1.0))
        entries[atom] = simplify(expr)
    return TransformedProgram(entries)
