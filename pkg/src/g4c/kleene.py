"""Three-valued evaluation of condition formulas against company profiles.

Strong Kleene semantics: unknown propagates through the connectives unless
the known arguments already force the result. With the truth values ordered
FALSE < UNKNOWN < TRUE, conjunction is min, disjunction is max, negation
flips around the middle, and implication is max(not a, b).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
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
)


class TruthValue3(IntEnum):
    FALSE = 0
    UNKNOWN = 1
    TRUE = 2

    def symbol(self) -> str:
        return {0: "⊥", 1: "u", 2: "⊤"}[self.value]


def k3_not(a: TruthValue3) -> TruthValue3:
    return TruthValue3(2 - a)


def k3_and(a: TruthValue3, b: TruthValue3) -> TruthValue3:
    return min(a, b)


def k3_or(a: TruthValue3, b: TruthValue3) -> TruthValue3:
    return max(a, b)


def k3_impl(a: TruthValue3, b: TruthValue3) -> TruthValue3:
    return max(k3_not(a), b)


class ProfileError(ValueError):
    """Malformed company-profile JSON."""


@dataclass(frozen=True)
class CompanyProfile:
    """Company facts from the registers; None marks a field as Unknown.

    An empty (but present) site or ÖNACE set is Known-empty, distinct from
    Unknown: the register answered and listed nothing.
    """

    seat: Optional[str] = None
    sites: Optional[frozenset[str]] = None
    legal_form: Optional[str] = None
    oenace: Optional[frozenset[str]] = None

    @classmethod
    def from_json(cls, obj: object) -> "CompanyProfile":
        if not isinstance(obj, dict):
            raise ProfileError("profile must be a JSON object")
        known = {"seat", "sites", "legal_form", "oenace"}
        for k in obj:
            if k not in known:
                raise ProfileError(f"unknown profile field {k!r}")

        def text(k: str) -> Optional[str]:
            v = obj.get(k)
            if v is None:
                return None
            if not isinstance(v, str):
                raise ProfileError(f"profile field {k!r} must be a string or null")
            return v

        def codes(k: str) -> Optional[frozenset[str]]:
            v = obj.get(k)
            if v is None:
                return None
            if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
                raise ProfileError(f"profile field {k!r} must be a list of strings or null")
            return frozenset(v)

        return cls(seat=text("seat"), sites=codes("sites"),
                   legal_form=text("legal_form"), oenace=codes("oenace"))

    @classmethod
    def from_file(cls, path: str) -> "CompanyProfile":
        with open(path, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ProfileError(f"{path}: {exc}") from exc
        return cls.from_json(obj)

    def to_json(self) -> dict:
        return {
            "seat": self.seat,
            "sites": sorted(self.sites) if self.sites is not None else None,
            "legal_form": self.legal_form,
            "oenace": sorted(self.oenace) if self.oenace is not None else None,
        }


def _prefix_hit(code: str, patterns: tuple[str, ...]) -> bool:
    c = code.casefold()
    return any(c.startswith(p.casefold()) for p in patterns)


def eval_atom(atom: Atom, profile: CompanyProfile) -> TruthValue3:
    """Evaluate one built-in predicate; Unknown register field yields u.

    Location and ÖNACE codes match by string prefix (a listed code covers
    everything it prefixes); legal form is exact membership.
    """
    kind = atom.predicate
    if kind is PredicateKind.UNTERNEHMENSSITZ_IN:
        if profile.seat is None:
            return TruthValue3.UNKNOWN
        hit = _prefix_hit(profile.seat, atom.args)
    elif kind is PredicateKind.BETRIEBSSTANDORT_IN:
        if profile.sites is None:
            return TruthValue3.UNKNOWN
        hit = any(_prefix_hit(s, atom.args) for s in profile.sites)
    elif kind is PredicateKind.OENACE_IN:
        if profile.oenace is None:
            return TruthValue3.UNKNOWN
        hit = any(_prefix_hit(c, atom.args) for c in profile.oenace)
    elif kind is PredicateKind.RECHTSFORM_IN:
        if profile.legal_form is None:
            return TruthValue3.UNKNOWN
        lf = profile.legal_form.casefold()
        hit = any(lf == a.casefold() for a in atom.args)
    else:  # pragma: no cover
        raise AssertionError(kind)
    return TruthValue3.TRUE if hit else TruthValue3.FALSE


def _fold(op, values, unit: TruthValue3) -> TruthValue3:
    acc = unit
    for v in values:
        acc = op(acc, v)
    return acc


def eval_formula(
    f: Formula,
    profile: CompanyProfile,
    registry: ConceptRegistry = EMPTY_REGISTRY,
) -> TruthValue3:
    """Evaluate a condition formula in K3; concepts evaluate as their definition."""
    match f:
        case Top():
            return TruthValue3.TRUE
        case Bottom():
            return TruthValue3.FALSE
        case Not(operand=a):
            return k3_not(eval_formula(a, profile, registry))
        case And(conjuncts=cs):
            return _fold(k3_and, (eval_formula(c, profile, registry) for c in cs),
                         TruthValue3.TRUE)
        case Or(disjuncts=ds):
            return _fold(k3_or, (eval_formula(d, profile, registry) for d in ds),
                         TruthValue3.FALSE)
        case Impl(antecedent=a, consequent=b):
            return k3_impl(eval_formula(a, profile, registry),
                           eval_formula(b, profile, registry))
        case Atom():
            return eval_atom(f, profile)
        case ConceptRef(name):
            return eval_formula(registry.get(name).definition, profile, registry)
        case OpaqueAtom():
            return TruthValue3.UNKNOWN
        case _:  # pragma: no cover
            raise AssertionError(f)


@dataclass(frozen=True)
class EvalTrace:
    """Evaluation tree mirroring the formula, for explanation display."""

    formula: Formula
    value: TruthValue3
    explanation: Optional[str]
    children: tuple["EvalTrace", ...] = ()


def eval_trace(
    f: Formula,
    profile: CompanyProfile,
    registry: ConceptRegistry = EMPTY_REGISTRY,
) -> EvalTrace:
    """Like eval_formula, but keeping the per-node values and explanations.

    A ConceptRef node gets the trace of its definition as its only child.
    """
    match f:
        case Top():
            return EvalTrace(f, TruthValue3.TRUE, f.explanation)
        case Bottom():
            return EvalTrace(f, TruthValue3.FALSE, f.explanation)
        case Not(operand=a):
            sub = eval_trace(a, profile, registry)
            return EvalTrace(f, k3_not(sub.value), f.explanation, (sub,))
        case And(conjuncts=cs):
            subs = tuple(eval_trace(c, profile, registry) for c in cs)
            value = _fold(k3_and, (s.value for s in subs), TruthValue3.TRUE)
            return EvalTrace(f, value, f.explanation, subs)
        case Or(disjuncts=ds):
            subs = tuple(eval_trace(d, profile, registry) for d in ds)
            value = _fold(k3_or, (s.value for s in subs), TruthValue3.FALSE)
            return EvalTrace(f, value, f.explanation, subs)
        case Impl(antecedent=a, consequent=b):
            sa = eval_trace(a, profile, registry)
            sb = eval_trace(b, profile, registry)
            return EvalTrace(f, k3_impl(sa.value, sb.value), f.explanation, (sa, sb))
        case Atom():
            return EvalTrace(f, eval_atom(f, profile), f.explanation)
        case ConceptRef(name):
            sub = eval_trace(registry.get(name).definition, profile, registry)
            expl = f.explanation or registry.get(name).explanation
            return EvalTrace(f, sub.value, expl, (sub,))
        case OpaqueAtom():
            return EvalTrace(f, TruthValue3.UNKNOWN, f.explanation)
        case _:  # pragma: no cover
            raise AssertionError(f)
