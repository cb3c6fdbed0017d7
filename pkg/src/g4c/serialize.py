"""JSON wire shapes shared by the CLI and the HTTP service.

Keeping one serializer guarantees the two surfaces answer identically.
"""

from __future__ import annotations

from .kb import (
    ConsistencyResult,
    GrantResult,
    ImplicationEdge,
    grant_id,
)
from .kleene import EvalTrace
from .model import (
    And,
    Atom,
    ConceptRef,
    Formula,
    Grant,
    Impl,
    Not,
    OpaqueAtom,
    Or,
)
from .prover import Derivation
from .render import formula_text, sequent_text


def grant_meta_json(g: Grant) -> dict:
    return {
        "id": grant_id(g),
        "name": g.name,
        "href": g.href,
        "tp_ref_nr": g.tp_ref_nr,
        "categories": list(g.categories),
        "valid_from": g.valid_from.isoformat() if g.valid_from else None,
        "valid_to": g.valid_to.isoformat() if g.valid_to else None,
    }


def formula_json(f: Formula) -> dict:
    """Structured formula tree with per-node explanations, for browsing."""
    node: dict = {"text": formula_text(f), "explanation": f.explanation}
    match f:
        case Not(operand=a):
            node.update(kind="not", children=[formula_json(a)])
        case And(conjuncts=cs):
            node.update(kind="and", children=[formula_json(c) for c in cs])
        case Or(disjuncts=ds):
            node.update(kind="or", children=[formula_json(d) for d in ds])
        case Impl(antecedent=a, consequent=b):
            node.update(kind="impl", children=[formula_json(a), formula_json(b)])
        case Atom():
            node.update(kind="atom", children=[])
        case ConceptRef():
            node.update(kind="concept", children=[])
        case OpaqueAtom():
            node.update(kind="opaque", children=[])
        case _:
            node.update(kind="const", children=[])
    return node


def grant_full_json(g: Grant) -> dict:
    out = grant_meta_json(g)
    out["description"] = g.description
    out["conditions"] = formula_json(g.conditions)
    out["conditions_text"] = formula_text(g.conditions)
    return out


def trace_json(t: EvalTrace) -> dict:
    return {
        "formula": formula_text(t.formula),
        "value": t.value.name.lower(),
        "explanation": t.explanation,
        "children": [trace_json(c) for c in t.children],
    }


def result_json(r: GrantResult, include_trace: bool = True) -> dict:
    out = grant_meta_json(r.grant)
    out["verdict"] = r.verdict.value
    if include_trace:
        out["trace"] = trace_json(r.trace)
    return out


def derivation_json(d: Derivation) -> dict:
    return {
        "rule": d.rule,
        "conclusion": sequent_text(d.conclusion),
        "principal": (
            {"side": d.principal[0], "formula": formula_text(d.principal[1])}
            if d.principal
            else None
        ),
        "premises": [derivation_json(p) for p in d.premises],
    }


def implication_json(edge: ImplicationEdge) -> dict:
    return {
        "source": edge.source,
        "target": edge.target,
        "derivation": derivation_json(edge.derivation),
    }


def consistency_json(r: ConsistencyResult) -> dict:
    out: dict = {"grant": r.grant, "consistent": r.consistent}
    if r.refutation is not None:
        out["refutation"] = derivation_json(r.refutation)
    return out
