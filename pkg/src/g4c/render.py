"""Rendering derivations and evaluation traces as nested HTML and plain text.

HTML output is a fragment of nested divs (one per node) plus class names;
styling lives in the shipped static/g4c.css. All user-controlled text is
escaped. The plain form is one sentence per derivation node in a formalised
natural language.
"""

from __future__ import annotations

import html
from dataclasses import dataclass

from .kleene import EvalTrace, TruthValue3
from .model import (
    And,
    Atom,
    Bottom,
    ConceptRef,
    Formula,
    Impl,
    Not,
    OpaqueAtom,
    Or,
    Top,
)
from .prover import Derivation, Sequent


@dataclass(frozen=True)
class RenderedDoc:
    html: str
    plain: str


def formula_text(f: Formula) -> str:
    """Pretty-print in the reasoner surface style: at(...) atoms, df("...")
    concept references, infix connectives."""
    match f:
        case Top():
            return "top"
        case Bottom():
            return "bottom"
        case Atom(predicate, args):
            codes = ",".join(f'"{a}"' for a in args)
            return f"at({predicate.value}([{codes}]))"
        case ConceptRef(name):
            return f'df("{name}")'
        case OpaqueAtom(name, args):
            if not args:
                return str(name)
            codes = ",".join(f'"{a}"' for a in args)
            return f"{name}([{codes}])"
        case Not(operand=a):
            return f"neg({formula_text(a)})"
        case And(conjuncts=cs):
            return "(" + " and ".join(formula_text(c) for c in cs) + ")"
        case Or(disjuncts=ds):
            return "(" + " or ".join(formula_text(d) for d in ds) + ")"
        case Impl(antecedent=a, consequent=b):
            return f"({formula_text(a)} -> {formula_text(b)})"
        case _:  # pragma: no cover
            raise AssertionError(f)


def sequent_text(s: Sequent) -> str:
    left = ", ".join(formula_text(f) for f in s.left)
    right = ", ".join(formula_text(f) for f in s.right)
    return f"{left} => {right}".strip()


def render_derivation_html(d: Derivation) -> str:
    """One `<div class="g4c-node" data-rule="...">` per derivation node, with
    the pretty-printed conclusion and the premises nested inside."""
    parts: list[str] = []
    _derivation_div(d, parts)
    return "".join(parts)


def _derivation_div(d: Derivation, parts: list[str]) -> None:
    parts.append(f'<div class="g4c-node" data-rule="{html.escape(d.rule)}">')
    parts.append(f'<span class="g4c-sequent">{html.escape(sequent_text(d.conclusion))}</span>')
    for premise in d.premises:
        _derivation_div(premise, parts)
    parts.append("</div>")


_LEAF_SENTENCES = {
    "identity": "{seq}  holds immediately since the assumption and goal coincide.",
    "bottomL": "{seq}  holds immediately since the assumptions contain the contradiction bottom.",
    "topR": "{seq}  holds immediately since top is among the goals.",
    "ground": "{seq}  holds by the built-in relation between its atomic statements.",
}


def render_derivation_text(d: Derivation) -> str:
    """Formalised natural language, one line per node, indented by depth."""
    lines: list[str] = []
    _derivation_lines(d, 0, lines)
    return "\n".join(lines)


def _derivation_lines(d: Derivation, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    seq = sequent_text(d.conclusion)
    if not d.premises:
        template = _LEAF_SENTENCES.get(d.rule, "{seq}  is immediate.")
        lines.append(pad + template.format(seq=seq))
        return
    goals = " and ".join(sequent_text(p.conclusion) for p in d.premises)
    lines.append(pad + f"To show {seq}, it suffices to show {goals}  (rule {d.rule}).")
    for premise in d.premises:
        _derivation_lines(premise, depth + 1, lines)


def render_derivation(d: Derivation) -> RenderedDoc:
    return RenderedDoc(html=render_derivation_html(d), plain=render_derivation_text(d))


_VALUE_CLASS = {
    TruthValue3.TRUE: "true",
    TruthValue3.FALSE: "false",
    TruthValue3.UNKNOWN: "unknown",
}


def render_eval_trace_html(t: EvalTrace) -> str:
    """Nested divs carrying the three-valued outcome as a class name and the
    node's explanation when present."""
    parts: list[str] = []
    _trace_div(t, parts)
    return "".join(parts)


def _trace_div(t: EvalTrace, parts: list[str]) -> None:
    cls = _VALUE_CLASS[t.value]
    parts.append(f'<div class="g4c-eval {cls}">')
    parts.append(f'<span class="g4c-formula">{html.escape(formula_text(t.formula))}</span>')
    if t.explanation:
        parts.append(f'<span class="g4c-note">{html.escape(t.explanation)}</span>')
    for child in t.children:
        _trace_div(child, parts)
    parts.append("</div>")


def render_eval_trace_text(t: EvalTrace) -> str:
    lines: list[str] = []
    _trace_lines(t, 0, lines)
    return "\n".join(lines)


def _trace_lines(t: EvalTrace, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    note = f"   ;; {t.explanation.splitlines()[0]}" if t.explanation else ""
    lines.append(f"{pad}[{t.value.symbol()}] {formula_text(t.formula)}{note}")
    for child in t.children:
        _trace_lines(child, depth + 1, lines)
