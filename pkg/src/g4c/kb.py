"""Loading a knowledge-base directory and whole-KB reasoning.

A KB directory holds UTF-8 S-expression files (`.lisp` / `.g4c`), each with
any number of `def-concept` and `define-grant` forms. Concepts register
before grants so cross-file references resolve regardless of file order.
"""

from __future__ import annotations

import datetime
import hashlib
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from .kleene import CompanyProfile, EvalTrace, TruthValue3, eval_trace
from .model import (
    AcyclicityReport,
    And,
    ConceptRegistry,
    FormulaError,
    Grant,
    Impl,
    Not,
    OpaqueAtom,
    Or,
    QualifiedName,
    check_acyclic,
    parse_concept,
    parse_grant,
)
from .prover import Derivation, Sequent, prove, validate_derivation
from .sexpr import SExpr, SExprError, SList, Symbol, read_all


class KBLoadError(Exception):
    """Load failure; `problems` lists (file, kind, message) triples with
    kind in {"parse", "model", "duplicate", "cycle"}."""

    def __init__(self, problems: list[tuple[str, str, str]]):
        lines = "\n".join(f"  {path}: {msg}" for path, _, msg in problems)
        super().__init__(f"knowledge base failed to load:\n{lines}")
        self.problems = problems

    @property
    def parse_failure(self) -> bool:
        return any(kind == "parse" for _, kind, _ in self.problems)


@dataclass(frozen=True)
class SourceFile:
    path: str
    sha256: str


@dataclass(frozen=True)
class KnowledgeBase:
    grants: tuple[Grant, ...]
    concepts: ConceptRegistry
    source_files: tuple[SourceFile, ...]
    warnings: tuple[str, ...] = ()

    def grant(self, name: str) -> Grant:
        for g in self.grants:
            if g.name == name:
                return g
        folded = name.casefold()
        for g in self.grants:
            if g.name.casefold() == folded or grant_id(g) == name:
                return g
        raise KeyError(name)


def grant_id(g: Grant) -> str:
    """Stable URL-safe identifier: the Transparenzportal number when present,
    otherwise a slug of the name."""
    if g.tp_ref_nr is not None:
        return str(g.tp_ref_nr)
    slug = "".join(c if c.isalnum() else "-" for c in g.name.casefold())
    while "--" in slug:
        slug = slug.replace("--", "-")
    return slug.strip("-")


def _form_head(form: SExpr) -> Optional[str]:
    if isinstance(form, SList) and form.items and isinstance(form.items[0], Symbol):
        return form.items[0].text.casefold()
    return None


def load_kb(directory: str | Path) -> KnowledgeBase:
    """Parse every KB file; concepts first, then grants; rejects cycles and
    duplicate names with a per-file error report."""
    root = Path(directory)
    paths = sorted(p for p in root.glob("**/*") if p.suffix in (".lisp", ".g4c"))

    problems: list[tuple[str, str, str]] = []
    warnings: list[str] = []
    sources: list[SourceFile] = []
    parsed: list[tuple[Path, list[SExpr]]] = []
    for path in paths:
        text = path.read_text(encoding="utf-8")
        sources.append(
            SourceFile(str(path), hashlib.sha256(text.encode("utf-8")).hexdigest())
        )
        try:
            parsed.append((path, read_all(text)))
        except SExprError as exc:
            problems.append((str(path), "parse", str(exc)))
    if problems:
        raise KBLoadError(problems)

    registry = ConceptRegistry()
    # declare names first so definitions may reference concepts in any order
    for path, forms in parsed:
        for form in forms:
            if _form_head(form) == "def-concept" and len(form.items) >= 2 \
                    and isinstance(form.items[1], Symbol):
                registry.declare(QualifiedName.parse(form.items[1].text))

    grants: list[Grant] = []
    for path, forms in parsed:
        for form in forms:
            head = _form_head(form)
            try:
                if head == "def-concept":
                    registry.register(parse_concept(form, registry))
                elif head == "define-grant":
                    grants.append(parse_grant(form, registry, warnings))
                else:
                    warnings.append(f"{path}: ignoring unknown top-level form at line {form.line}")
            except FormulaError as exc:
                problems.append((str(path), "model", str(exc)))
    if problems:
        raise KBLoadError(problems)

    names = [g.name for g in grants]
    for name in dict.fromkeys(n for n in names if names.count(n) > 1):
        problems.append(("<kb>", "duplicate", f"duplicate grant name: {name!r}"))

    report: AcyclicityReport = check_acyclic(registry)
    if report.cycle:
        cycle_text = " -> ".join(str(n) for n in report.cycle)
        problems.append(("<kb>", "cycle", f"concept definitions form a cycle: {cycle_text}"))
    if problems:
        raise KBLoadError(problems)
    for source, missing in report.unregistered:
        warnings.append(f"concept {source} references unregistered concept {missing}")
    for g in grants:
        for opaque in _opaque_concept_like(g.conditions):
            warnings.append(
                f"grant {g.name!r}: possible unregistered concept reference {opaque}"
            )

    return KnowledgeBase(
        grants=tuple(grants),
        concepts=registry,
        source_files=tuple(sources),
        warnings=tuple(warnings),
    )


def _opaque_concept_like(f) -> list[str]:
    """Package-qualified opaque atoms look like concept references gone astray."""
    out: list[str] = []
    match f:
        case OpaqueAtom(name) if name.package:
            out.append(str(name))
        case Not(operand=a):
            out.extend(_opaque_concept_like(a))
        case And(conjuncts=cs) | Or(disjuncts=cs):
            for c in cs:
                out.extend(_opaque_concept_like(c))
        case Impl(antecedent=a, consequent=b):
            out.extend(_opaque_concept_like(a))
            out.extend(_opaque_concept_like(b))
        case _:
            pass
    return out


class Verdict(Enum):
    SATISFIED = "satisfied"
    UNDECIDED = "undecided"
    NOT_SATISFIED = "not_satisfied"

    @classmethod
    def from_value(cls, v: TruthValue3) -> "Verdict":
        return {
            TruthValue3.TRUE: cls.SATISFIED,
            TruthValue3.UNKNOWN: cls.UNDECIDED,
            TruthValue3.FALSE: cls.NOT_SATISFIED,
        }[v]


_BUCKET_ORDER = {Verdict.SATISFIED: 0, Verdict.UNDECIDED: 1, Verdict.NOT_SATISFIED: 2}


@dataclass(frozen=True)
class GrantResult:
    grant: Grant
    verdict: Verdict
    trace: EvalTrace


def evaluate_all(
    kb: KnowledgeBase,
    profile: CompanyProfile,
    category: Optional[str] = None,
    at_date: Optional[datetime.date] = None,
) -> list[GrantResult]:
    """Evaluate every grant for the profile; three buckets, satisfied first,
    ties keep KB order. Category and application-date filters select grants
    before evaluation; grants without dates always pass the date filter."""
    selected = []
    for g in kb.grants:
        if category is not None and category.casefold() not in (
            c.casefold() for c in g.categories
        ):
            continue
        if at_date is not None:
            if g.valid_from and at_date < g.valid_from:
                continue
            if g.valid_to and at_date > g.valid_to:
                continue
        selected.append(g)

    results = []
    for g in selected:
        trace = eval_trace(g.conditions, profile, kb.concepts)
        results.append(GrantResult(g, Verdict.from_value(trace.value), trace))
    results.sort(key=lambda r: _BUCKET_ORDER[r.verdict])  # stable: ties keep KB order
    return results


@dataclass(frozen=True)
class ImplicationEdge:
    source: str
    target: str
    derivation: Derivation


def implication_matrix(kb: KnowledgeBase) -> list[ImplicationEdge]:
    """All ordered grant pairs whose conditions are non-identical and where
    the first grant's conditions prove the second's."""
    edges: list[ImplicationEdge] = []
    for g1 in kb.grants:
        for g2 in kb.grants:
            if g1.name == g2.name or g1.conditions == g2.conditions:
                continue
            derivation = prove(
                Sequent((g1.conditions,), (g2.conditions,)), kb.concepts
            )
            if derivation is not None:
                edges.append(ImplicationEdge(g1.name, g2.name, derivation))
    return edges


def duplicate_condition_pairs(kb: KnowledgeBase) -> list[tuple[str, str]]:
    """Distinct grants with structurally identical conditions (the pairs the
    implication matrix skips)."""
    pairs = []
    for i, g1 in enumerate(kb.grants):
        for g2 in kb.grants[i + 1 :]:
            if g1.name != g2.name and g1.conditions == g2.conditions:
                pairs.append((g1.name, g2.name))
    return pairs


@dataclass(frozen=True)
class ConsistencyResult:
    grant: str
    consistent: bool
    refutation: Optional[Derivation] = None


def consistency_report(kb: KnowledgeBase) -> list[ConsistencyResult]:
    """A grant is inconsistent iff its conditions prove the empty sequent."""
    out = []
    for g in kb.grants:
        refutation = prove(Sequent((g.conditions,), ()), kb.concepts)
        if refutation is not None:
            assert validate_derivation(refutation, kb.concepts)
            out.append(ConsistencyResult(g.name, False, refutation))
        else:
            out.append(ConsistencyResult(g.name, True))
    return out
