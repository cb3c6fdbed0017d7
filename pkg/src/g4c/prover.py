"""Backward proof search in a G3-style sequent calculus for classical logic,
extended with ground sequents over the built-in predicates and with left/right
unfolding rules for defined concepts.

Sequents are multiset pairs; all logical rules are invertible, the principal
formula is consumed by its rule (contraction-free), and every rule application
strictly decreases the total formula weight, so exhaustive backtracking search
terminates and decides derivability. n-ary conjunctions and disjunctions are
curried to nested binary nodes up front so the binary rule set applies
unchanged.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .model import (
    And,
    Atom,
    Bottom,
    ConceptRef,
    ConceptRegistry,
    EMPTY_REGISTRY,
    Formula,
    Impl,
    Not,
    OpaqueAtom,
    Or,
    PredicateKind,
    Top,
    weight,
)


@dataclass(frozen=True, eq=False)
class Sequent:
    """Γ ⇒ Δ with multiset semantics: order-insensitive, duplicates count."""

    left: tuple[Formula, ...]
    right: tuple[Formula, ...]

    def key(self) -> tuple:
        return (
            tuple(sorted(f.key() for f in self.left)),
            tuple(sorted(f.key() for f in self.right)),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Sequent) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


class AxiomKind(Enum):
    IDENTITY = "identity"
    BOTTOM_LEFT = "bottomL"
    TOP_RIGHT = "topR"
    GROUND = "ground"


AXIOM_NAMES = {k.value for k in AxiomKind}

RULE_NAMES = ("andL", "andR", "orL", "orR", "negL", "negR",
              "implL", "implR", "defL", "defR")


@dataclass(frozen=True)
class Derivation:
    """Proof tree; `principal` is (side, formula) for rule nodes, None for axioms."""

    rule: str
    conclusion: Sequent
    principal: Optional[tuple[str, Formula]]
    premises: tuple["Derivation", ...] = ()

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def node_count(self) -> int:
        return 1 + sum(p.node_count() for p in self.premises)


def curry(f: Formula) -> Formula:
    """Fold n-ary And/Or into nested binary nodes (right-associated)."""
    match f:
        case And(conjuncts=cs, explanation=x):
            cs = [curry(c) for c in cs]
            out = cs[-1]
            for c in reversed(cs[:-1]):
                out = And((c, out))
            if x and len(cs) > 1:
                out = And(out.conjuncts, x)
            return out
        case Or(disjuncts=ds, explanation=x):
            ds = [curry(d) for d in ds]
            out = ds[-1]
            for d in reversed(ds[:-1]):
                out = Or((d, out))
            if x and len(ds) > 1:
                out = Or(out.disjuncts, x)
            return out
        case Not(operand=a, explanation=x):
            return Not(curry(a), x)
        case Impl(antecedent=a, consequent=b, explanation=x):
            return Impl(curry(a), curry(b), x)
        case _:
            return f


def curry_sequent(s: Sequent) -> Sequent:
    return Sequent(tuple(curry(f) for f in s.left), tuple(curry(f) for f in s.right))


def ground_check(lhs: Atom, rhs: Atom) -> bool:
    """Side condition of the ground sequents: lhs entails rhs outright.

    For the prefix-coded predicates: every code in the left list must have
    some right-list code as a string prefix. Legal form is plain subset.
    """
    if lhs.predicate is not rhs.predicate:
        return False
    l1 = [a.casefold() for a in lhs.args]
    l2 = [a.casefold() for a in rhs.args]
    if lhs.predicate is PredicateKind.RECHTSFORM_IN:
        return set(l1) <= set(l2)
    return all(any(x.startswith(y) for y in l2) for x in l1)


def axiom_check(s: Sequent) -> Optional[AxiomKind]:
    """First applicable axiom: identity, ⊥ left, ⊤ right, then ground sequents."""
    right_keys = {f.key() for f in s.right}
    if any(f.key() in right_keys for f in s.left):
        return AxiomKind.IDENTITY
    if any(isinstance(f, Bottom) for f in s.left):
        return AxiomKind.BOTTOM_LEFT
    if any(isinstance(f, Top) for f in s.right):
        return AxiomKind.TOP_RIGHT
    for lhs in s.left:
        if not isinstance(lhs, Atom):
            continue
        for rhs in s.right:
            if isinstance(rhs, Atom) and ground_check(lhs, rhs):
                return AxiomKind.GROUND
    return None


def merge_premises(premises: list[Sequent], context: Sequent) -> list[Sequent]:
    """Each local premise Γi ⇒ Δi becomes Γi,Σ ⇒ Π,Δi for context Σ ⇒ Π."""
    return [Sequent(p.left + context.left, context.right + p.right) for p in premises]


def rule_for(
    f: Formula, side: str, registry: ConceptRegistry
) -> Optional[tuple[str, list[Sequent]]]:
    """Rule schema for a principal formula: (name, local premises).

    Local premises contain only the principal's parts; merge_premises adds
    the surrounding context. Atoms, opaque atoms, ⊤ on the left and ⊥ on
    the right have no rule.
    """
    if side == "left":
        match f:
            case And(conjuncts=(a, b)):
                return "andL", [Sequent((a, b), ())]
            case Or(disjuncts=(a, b)):
                return "orL", [Sequent((a,), ()), Sequent((b,), ())]
            case Not(operand=a):
                return "negL", [Sequent((), (a,))]
            case Impl(antecedent=a, consequent=b):
                return "implL", [Sequent((b,), ()), Sequent((), (a,))]
            case ConceptRef(name):
                body = curry(registry.get(name).definition)
                return "defL", [Sequent((body,), ())]
    else:
        match f:
            case And(conjuncts=(a, b)):
                return "andR", [Sequent((), (a,)), Sequent((), (b,))]
            case Or(disjuncts=(a, b)):
                return "orR", [Sequent((), (a, b))]
            case Not(operand=a):
                return "negR", [Sequent((a,), ())]
            case Impl(antecedent=a, consequent=b):
                return "implR", [Sequent((a,), (b,))]
            case ConceptRef(name):
                body = curry(registry.get(name).definition)
                return "defR", [Sequent((), (body,))]
    return None


def _without(items: tuple[Formula, ...], index: int) -> tuple[Formula, ...]:
    return items[:index] + items[index + 1 :]


def _total_weight(s: Sequent, registry: ConceptRegistry) -> int:
    return sum(weight(f, registry) for f in s.left) + sum(
        weight(f, registry) for f in s.right
    )


def prove(s: Sequent, registry: ConceptRegistry = EMPTY_REGISTRY) -> Optional[Derivation]:
    """Decide derivability by exhaustive backward search; None means underivable.

    Axioms are tried first, then principal formulas left-to-right on the
    left side, then on the right, backtracking across choices. Sub-results
    are memoized per query (the search is a pure function of the sequent),
    which only avoids re-exploring identical subgoals.
    """
    memo: dict[tuple, Optional[Derivation]] = {}
    return _search(curry_sequent(s), registry, memo)


def _search(
    s: Sequent, registry: ConceptRegistry, memo: dict[tuple, Optional[Derivation]]
) -> Optional[Derivation]:
    k = s.key()
    if k in memo:
        return memo[k]

    ax = axiom_check(s)
    if ax is not None:
        d = Derivation(ax.value, s, None)
        memo[k] = d
        return d

    total = _total_weight(s, registry)
    result: Optional[Derivation] = None
    tried: set[tuple] = set()
    for side, formulas in (("left", s.left), ("right", s.right)):
        for i, f in enumerate(formulas):
            if (side, f.key()) in tried:
                continue  # duplicate principal yields the same premises
            tried.add((side, f.key()))
            schema = rule_for(f, side, registry)
            if schema is None:
                continue
            name, local = schema
            if side == "left":
                context = Sequent(_without(s.left, i), s.right)
            else:
                context = Sequent(s.left, _without(s.right, i))
            premises = merge_premises(local, context)
            assert all(
                _total_weight(p, registry) < total for p in premises
            ), "rule application must shrink the weight"
            subs: list[Derivation] = []
            for premise in premises:
                sub = _search(premise, registry, memo)
                if sub is None:
                    break
                subs.append(sub)
            else:
                result = Derivation(name, s, (side, f), tuple(subs))
                memo[k] = result
                return result

    memo[k] = None
    return None


def _axiom_applies(kind: str, s: Sequent) -> bool:
    right_keys = {f.key() for f in s.right}
    if kind == AxiomKind.IDENTITY.value:
        return any(f.key() in right_keys for f in s.left)
    if kind == AxiomKind.BOTTOM_LEFT.value:
        return any(isinstance(f, Bottom) for f in s.left)
    if kind == AxiomKind.TOP_RIGHT.value:
        return any(isinstance(f, Top) for f in s.right)
    if kind == AxiomKind.GROUND.value:
        return any(
            isinstance(lhs, Atom) and isinstance(rhs, Atom) and ground_check(lhs, rhs)
            for lhs in s.left
            for rhs in s.right
        )
    return False


def validate_derivation(d: Derivation, registry: ConceptRegistry = EMPTY_REGISTRY) -> bool:
    """Independent proof checker: True iff every node is a correct rule or
    axiom instance of the calculus. Never raises on malformed trees."""
    try:
        return _validate(d, registry)
    except Exception:
        return False


def _validate(d: Derivation, registry: ConceptRegistry) -> bool:
    if not d.premises and d.principal is None:
        return d.rule in AXIOM_NAMES and _axiom_applies(d.rule, d.conclusion)
    if d.principal is None:
        return False
    side, principal = d.principal
    if side not in ("left", "right"):
        return False
    formulas = d.conclusion.left if side == "left" else d.conclusion.right
    try:
        index = formulas.index(principal)
    except ValueError:
        return False
    schema = rule_for(principal, side, registry)
    if schema is None or schema[0] != d.rule:
        return False
    name, local = schema
    if side == "left":
        context = Sequent(_without(d.conclusion.left, index), d.conclusion.right)
    else:
        context = Sequent(d.conclusion.left, _without(d.conclusion.right, index))
    expected = merge_premises(local, context)
    if len(expected) != len(d.premises):
        return False
    for want, sub in zip(expected, d.premises):
        if want != sub.conclusion:  # multiset comparison
            return False
        if not _validate(sub, registry):
            return False
    return True


def _collect_opaque(f: Formula, acc: dict[tuple, Formula]) -> None:
    match f:
        case OpaqueAtom():
            acc[f.key()] = f
        case Top() | Bottom():
            pass
        case Not(operand=a):
            _collect_opaque(a, acc)
        case And(conjuncts=cs) | Or(disjuncts=cs):
            for c in cs:
                _collect_opaque(c, acc)
        case Impl(antecedent=a, consequent=b):
            _collect_opaque(a, acc)
            _collect_opaque(b, acc)
        case _:
            raise ValueError(f"not pure propositional: {f!r}")


def _eval2(f: Formula, assignment: dict[tuple, bool]) -> bool:
    match f:
        case Top():
            return True
        case Bottom():
            return False
        case OpaqueAtom():
            return assignment[f.key()]
        case Not(operand=a):
            return not _eval2(a, assignment)
        case And(conjuncts=cs):
            return all(_eval2(c, assignment) for c in cs)
        case Or(disjuncts=ds):
            return any(_eval2(d, assignment) for d in ds)
        case Impl(antecedent=a, consequent=b):
            return (not _eval2(a, assignment)) or _eval2(b, assignment)
        case _:  # pragma: no cover
            raise AssertionError(f)


def entails_bruteforce(s: Sequent) -> bool:
    """Truth-table oracle: every assignment satisfying all of Γ satisfies
    some member of Δ. Pure propositional sequents only, ≤ 20 distinct atoms."""
    atoms: dict[tuple, Formula] = {}
    for f in s.left + s.right:
        _collect_opaque(f, atoms)
    if len(atoms) > 20:
        raise ValueError(f"too many distinct atoms for brute force: {len(atoms)}")
    keys = list(atoms)
    for bits in itertools.product((False, True), repeat=len(keys)):
        assignment = dict(zip(keys, bits))
        if all(_eval2(f, assignment) for f in s.left) and not any(
            _eval2(f, assignment) for f in s.right
        ):
            return False
    return True
