"""Typed model of the knowledge base: condition formulas, defined concepts, grants.

Formula equality is logical identity: case-insensitive on names and codes,
blind to the attached natural-language explanations.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Optional, Union

from .sexpr import Integer, Keyword, SExpr, SList, StringLit, Symbol, write


class FormulaError(ValueError):
    """Malformed condition formula, concept, or grant form."""


class UnknownConceptError(LookupError):
    """A ConceptRef names a concept the registry does not define."""

    def __init__(self, name: "QualifiedName"):
        super().__init__(f"unregistered concept: {name}")
        self.name = name


@dataclass(frozen=True, eq=False)
class QualifiedName:
    """Package-qualified concept name; both parts compare case-insensitively."""

    package: Optional[str]
    name: str

    @classmethod
    def parse(cls, text: str) -> "QualifiedName":
        i = text.find(":")
        if i > 0:
            return cls(text[:i], text[i + 1 :])
        return cls(None, text)

    def key(self) -> tuple:
        # "" (not None) for the package so keys sort against each other
        return (self.package.casefold() if self.package else "", self.name.casefold())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QualifiedName) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return f"{self.package}:{self.name}" if self.package else self.name


class PredicateKind(Enum):
    """The four built-in atomic predicates over company registers."""

    BETRIEBSSTANDORT_IN = "betriebsstandort_in"
    UNTERNEHMENSSITZ_IN = "unternehmenssitz_in"
    OENACE_IN = "oenace_in"
    RECHTSFORM_IN = "rechtsform_in"


_PREDICATE_SYMBOLS = {
    "betriebsstandort-in": PredicateKind.BETRIEBSSTANDORT_IN,
    "unternehmenssitz-in": PredicateKind.UNTERNEHMENSSITZ_IN,
    "önace-in": PredicateKind.OENACE_IN,
    "oenace-in": PredicateKind.OENACE_IN,
    "rechtsform-in": PredicateKind.RECHTSFORM_IN,
}


class _FormulaBase:
    """Equality/hash on the logical structure, ignoring explanations."""

    __slots__ = ()

    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _FormulaBase) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


@dataclass(frozen=True, eq=False)
class Top(_FormulaBase):
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("top",)


@dataclass(frozen=True, eq=False)
class Bottom(_FormulaBase):
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("bottom",)


@dataclass(frozen=True, eq=False)
class Not(_FormulaBase):
    operand: "Formula"
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("not", self.operand.key())


@dataclass(frozen=True, eq=False)
class And(_FormulaBase):
    conjuncts: tuple["Formula", ...]
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("and", tuple(c.key() for c in self.conjuncts))


@dataclass(frozen=True, eq=False)
class Or(_FormulaBase):
    disjuncts: tuple["Formula", ...]
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("or", tuple(d.key() for d in self.disjuncts))


@dataclass(frozen=True, eq=False)
class Impl(_FormulaBase):
    antecedent: "Formula"
    consequent: "Formula"
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("impl", self.antecedent.key(), self.consequent.key())


@dataclass(frozen=True, eq=False)
class Atom(_FormulaBase):
    predicate: PredicateKind
    args: tuple[str, ...]
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("at", self.predicate.value, tuple(a.casefold() for a in self.args))


@dataclass(frozen=True, eq=False)
class ConceptRef(_FormulaBase):
    name: QualifiedName
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("df", self.name.key())


@dataclass(frozen=True, eq=False)
class OpaqueAtom(_FormulaBase):
    name: QualifiedName
    args: tuple[str, ...] = ()
    explanation: Optional[str] = None

    def key(self) -> tuple:
        return ("op", self.name.key(), tuple(a.casefold() for a in self.args))


Formula = Union[Top, Bottom, Not, And, Or, Impl, Atom, ConceptRef, OpaqueAtom]


@dataclass(frozen=True)
class DefinedConcept:
    name: QualifiedName
    definition: Formula
    explanation: Optional[str] = None


@dataclass(frozen=True)
class Grant:
    name: str
    conditions: Formula
    href: Optional[str] = None
    tp_ref_nr: Optional[int] = None
    categories: tuple[str, ...] = ()
    valid_from: Optional[datetime.date] = None
    valid_to: Optional[datetime.date] = None
    description: str = ""

    def __post_init__(self):
        if not self.name:
            raise FormulaError("grant name must be nonempty")
        if self.valid_from and self.valid_to and self.valid_from > self.valid_to:
            raise FormulaError(
                f"grant {self.name!r}: valid_from {self.valid_from} after valid_to {self.valid_to}"
            )


class ConceptRegistry:
    """Acyclic map from qualified names to defined concepts.

    Names can be declared ahead of their definitions so that mutually
    referencing files parse in one sweep; `get` only answers once the
    definition has been registered.
    """

    def __init__(self, concepts: tuple[DefinedConcept, ...] = ()):
        self._by_key: dict[tuple, Optional[DefinedConcept]] = {}
        self._names: dict[tuple, QualifiedName] = {}
        for c in concepts:
            self.register(c)

    def declare(self, name: QualifiedName) -> None:
        self._by_key.setdefault(name.key(), None)
        self._names.setdefault(name.key(), name)

    def register(self, concept: DefinedConcept) -> None:
        k = concept.name.key()
        if self._by_key.get(k) is not None:
            raise FormulaError(f"duplicate concept definition: {concept.name}")
        self._by_key[k] = concept
        self._names[k] = concept.name

    def __contains__(self, name: QualifiedName) -> bool:
        return name.key() in self._by_key

    def get(self, name: QualifiedName) -> DefinedConcept:
        concept = self._by_key.get(name.key())
        if concept is None:
            raise UnknownConceptError(name)
        return concept

    def __iter__(self) -> Iterator[DefinedConcept]:
        return iter(c for c in self._by_key.values() if c is not None)

    def __len__(self) -> int:
        return sum(1 for c in self._by_key.values() if c is not None)


EMPTY_REGISTRY = ConceptRegistry()


def _comment_text(e: SExpr) -> Optional[str]:
    return "\n".join(e.leading_comments) if e.leading_comments else None


def _code(arg: SExpr, context: str) -> str:
    if isinstance(arg, Symbol):
        return arg.text
    if isinstance(arg, Keyword):
        return arg.name
    if isinstance(arg, Integer):
        return str(arg.value)
    if isinstance(arg, StringLit):
        return arg.text
    raise FormulaError(f"{context}: argument must be a code literal, got {write(arg)}")


def formula_from_sexpr(e: SExpr, registry: ConceptRegistry = EMPTY_REGISTRY) -> Formula:
    """Turn a parsed form into a Formula; heads resolve case-insensitively."""
    explanation = _comment_text(e)

    if isinstance(e, Symbol):
        head = e.text.casefold()
        if head == "top":
            return Top(explanation)
        if head == "bottom":
            return Bottom(explanation)
        name = QualifiedName.parse(e.text)
        if name in registry:
            return ConceptRef(name, explanation)
        return OpaqueAtom(name, (), explanation)

    if not isinstance(e, SList):
        raise FormulaError(f"expected a formula, got {write(e)}")
    if not e.items:
        raise FormulaError("empty list is not a formula")

    head_node = e.items[0]
    if not isinstance(head_node, Symbol):
        raise FormulaError(f"formula head must be a symbol, got {write(head_node)}")
    head = head_node.text.casefold()
    args = e.items[1:]

    if head in ("and", "or"):
        if len(args) < 1:
            raise FormulaError(f"({head}) needs at least one subformula")
        children = tuple(formula_from_sexpr(a, registry) for a in args)
        if len(children) == 1:
            child = children[0]
            if explanation and not child.explanation:
                child = replace(child, explanation=explanation)
            return child
        if head == "and":
            return And(children, explanation)
        return Or(children, explanation)
    if head in ("neg", "not"):
        if len(args) != 1:
            raise FormulaError(f"({head} ...) takes exactly one subformula, got {len(args)}")
        return Not(formula_from_sexpr(args[0], registry), explanation)
    if head in ("impl", "->"):
        if len(args) != 2:
            raise FormulaError(f"({head} ...) takes exactly two subformulas, got {len(args)}")
        return Impl(
            formula_from_sexpr(args[0], registry),
            formula_from_sexpr(args[1], registry),
            explanation,
        )
    if head == "top" and not args:
        return Top(explanation)
    if head == "bottom" and not args:
        return Bottom(explanation)

    kind = _PREDICATE_SYMBOLS.get(head)
    if kind is not None:
        codes = tuple(_code(a, head_node.text) for a in args)
        return Atom(kind, codes, explanation)

    name = QualifiedName.parse(head_node.text)
    if name in registry and not args:
        return ConceptRef(name, explanation)
    codes = tuple(_code(a, head_node.text) for a in args)
    return OpaqueAtom(name, codes, explanation)


def parse_concept(e: SExpr, registry: ConceptRegistry = EMPTY_REGISTRY) -> DefinedConcept:
    """Parse a `(def-concept name definition)` form."""
    if not (isinstance(e, SList) and e.items and isinstance(e.items[0], Symbol)
            and e.items[0].text.casefold() == "def-concept"):
        raise FormulaError("not a def-concept form")
    if len(e.items) != 3:
        raise FormulaError(f"def-concept takes a name and one definition, got {len(e.items) - 1} parts")
    name_node = e.items[1]
    if not isinstance(name_node, Symbol):
        raise FormulaError(f"concept name must be a symbol, got {write(name_node)}")
    definition = formula_from_sexpr(e.items[2], registry)
    return DefinedConcept(QualifiedName.parse(name_node.text), definition, _comment_text(e))


_DATE_KEYS = {"gültig-von": "valid_from", "gueltig-von": "valid_from",
              "gültig-bis": "valid_to", "gueltig-bis": "valid_to"}


def _metadata_key(node: SExpr) -> Optional[str]:
    if isinstance(node, Keyword):
        return node.name.casefold()
    if isinstance(node, Symbol):
        return node.text.casefold()
    return None


def parse_grant(
    e: SExpr,
    registry: ConceptRegistry = EMPTY_REGISTRY,
    warnings: Optional[list[str]] = None,
) -> Grant:
    """Parse a `(define-grant (name meta...) description conditions...)` form.

    Unknown metadata keys are reported through `warnings`, never fatal.
    Multiple condition forms are conjoined; none at all means Top.
    """
    if warnings is None:
        warnings = []
    if not (isinstance(e, SList) and e.items and isinstance(e.items[0], Symbol)
            and e.items[0].text.casefold() == "define-grant"):
        raise FormulaError("not a define-grant form")
    if len(e.items) < 2 or not isinstance(e.items[1], SList):
        raise FormulaError("define-grant needs a metadata list")

    meta = e.items[1]
    if not meta.items or not isinstance(meta.items[0], StringLit):
        raise FormulaError("grant metadata must start with the grant name string")
    name = meta.items[0].text

    href = None
    tp_ref_nr = None
    categories: list[str] = []
    dates: dict[str, datetime.date] = {}
    for entry in meta.items[1:]:
        if not (isinstance(entry, SList) and entry.items):
            warnings.append(f"grant {name!r}: ignoring malformed metadata entry {write(entry)}")
            continue
        key = _metadata_key(entry.items[0])
        values = entry.items[1:]
        if key == "href" and len(values) == 1 and isinstance(values[0], StringLit):
            href = values[0].text
        elif key == "transparenzportal-ref-nr" and len(values) == 1 and isinstance(values[0], Integer):
            tp_ref_nr = values[0].value
        elif key == "fördergebiet" or key == "foerdergebiet":
            categories.extend(_code(v, "Fördergebiet") for v in values)
        elif key in _DATE_KEYS:
            if len(values) != 1 or not isinstance(values[0], StringLit):
                raise FormulaError(f"grant {name!r}: {key} needs one ISO date string")
            try:
                dates[_DATE_KEYS[key]] = datetime.date.fromisoformat(values[0].text)
            except ValueError as exc:
                raise FormulaError(f"grant {name!r}: bad date {values[0].text!r}") from exc
        elif key is None:
            warnings.append(f"grant {name!r}: ignoring malformed metadata entry {write(entry)}")
        else:
            warnings.append(f"grant {name!r}: unknown metadata key {key!r}")

    rest = e.items[2:]
    description = ""
    if rest and isinstance(rest[0], StringLit):
        description = rest[0].text
        rest = rest[1:]

    condition_forms = [formula_from_sexpr(f, registry) for f in rest]
    if not condition_forms:
        conditions: Formula = Top()
    elif len(condition_forms) == 1:
        conditions = condition_forms[0]
    else:
        conditions = And(tuple(condition_forms))

    return Grant(
        name=name,
        conditions=conditions,
        href=href,
        tp_ref_nr=tp_ref_nr,
        categories=tuple(categories),
        valid_from=dates.get("valid_from"),
        valid_to=dates.get("valid_to"),
        description=description,
    )


def concept_refs(f: Formula) -> Iterator[QualifiedName]:
    """All ConceptRef names occurring in a formula, in preorder."""
    match f:
        case ConceptRef(name):
            yield name
        case Not(operand=a):
            yield from concept_refs(a)
        case And(conjuncts=cs) | Or(disjuncts=cs):
            for c in cs:
                yield from concept_refs(c)
        case Impl(antecedent=a, consequent=b):
            yield from concept_refs(a)
            yield from concept_refs(b)
        case _:
            pass


@dataclass(frozen=True)
class AcyclicityReport:
    """Outcome of check_acyclic: a witness cycle and/or dangling references."""

    cycle: Optional[tuple[QualifiedName, ...]] = None
    unregistered: tuple[tuple[QualifiedName, QualifiedName], ...] = ()

    @property
    def ok(self) -> bool:
        return self.cycle is None and not self.unregistered


def check_acyclic(registry: ConceptRegistry) -> AcyclicityReport:
    """Check the concept-reference digraph for cycles and dangling names.

    Returns the first witness cycle found as a name sequence [a, ..., a];
    references to never-registered concepts are reported separately.
    """
    unregistered: list[tuple[QualifiedName, QualifiedName]] = []
    edges: dict[tuple, list[QualifiedName]] = {}
    for concept in registry:
        targets = []
        for ref in concept_refs(concept.definition):
            if ref in registry:
                targets.append(ref)
            else:
                unregistered.append((concept.name, ref))
        edges[concept.name.key()] = targets

    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[tuple, int] = {k: WHITE for k in edges}
    stack_names: list[QualifiedName] = []

    def visit(name: QualifiedName) -> Optional[tuple[QualifiedName, ...]]:
        k = name.key()
        color[k] = GREY
        stack_names.append(name)
        for target in edges.get(k, ()):
            tk = target.key()
            if color.get(tk, BLACK) == GREY:
                start = next(i for i, s in enumerate(stack_names) if s.key() == tk)
                return tuple(stack_names[start:]) + (target,)
            if color.get(tk) == WHITE:
                found = visit(target)
                if found:
                    return found
        stack_names.pop()
        color[k] = BLACK
        return None

    for concept in registry:
        if color[concept.name.key()] == WHITE:
            cycle = visit(concept.name)
            if cycle:
                return AcyclicityReport(cycle=cycle, unregistered=tuple(unregistered))

    return AcyclicityReport(unregistered=tuple(unregistered))


def unfold(f: Formula, registry: ConceptRegistry) -> Formula:
    """Replace every ConceptRef by its definition, recursively.

    Requires an acyclic registry; raises UnknownConceptError on dangling names.
    Idempotent: the result contains no ConceptRef.
    """
    match f:
        case ConceptRef(name, explanation):
            body = unfold(registry.get(name).definition, registry)
            if explanation and not body.explanation:
                body = replace(body, explanation=explanation)
            return body
        case Not(operand=a, explanation=x):
            return Not(unfold(a, registry), x)
        case And(conjuncts=cs, explanation=x):
            return And(tuple(unfold(c, registry) for c in cs), x)
        case Or(disjuncts=ds, explanation=x):
            return Or(tuple(unfold(d, registry) for d in ds), x)
        case Impl(antecedent=a, consequent=b, explanation=x):
            return Impl(unfold(a, registry), unfold(b, registry), x)
        case _:
            return f


def weight(f: Formula, registry: ConceptRegistry = EMPTY_REGISTRY) -> int:
    """Termination measure: atoms weigh 1, nodes 1 + children, refs 1 + definition."""
    match f:
        case ConceptRef(name):
            return 1 + weight(registry.get(name).definition, registry)
        case Not(operand=a):
            return 1 + weight(a, registry)
        case And(conjuncts=cs) | Or(disjuncts=cs):
            return 1 + sum(weight(c, registry) for c in cs)
        case Impl(antecedent=a, consequent=b):
            return 1 + weight(a, registry) + weight(b, registry)
        case _:
            return 1
