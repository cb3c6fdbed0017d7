"""Engine for formalised business-grant conditions: an S-expression knowledge
base, three-valued evaluation against company profiles, and a sequent-calculus
prover for reasoning about the conditions themselves."""

from .kb import (
    ConsistencyResult,
    GrantResult,
    ImplicationEdge,
    KBLoadError,
    KnowledgeBase,
    Verdict,
    consistency_report,
    duplicate_condition_pairs,
    evaluate_all,
    implication_matrix,
    load_kb,
)
from .kleene import (
    CompanyProfile,
    EvalTrace,
    TruthValue3,
    eval_atom,
    eval_formula,
    eval_trace,
    k3_and,
    k3_impl,
    k3_not,
    k3_or,
)
from .model import (
    AcyclicityReport,
    And,
    Atom,
    Bottom,
    ConceptRef,
    ConceptRegistry,
    DefinedConcept,
    Formula,
    FormulaError,
    Grant,
    Impl,
    Not,
    OpaqueAtom,
    Or,
    PredicateKind,
    QualifiedName,
    Top,
    UnknownConceptError,
    check_acyclic,
    formula_from_sexpr,
    parse_concept,
    parse_grant,
    unfold,
    weight,
)
from .prover import (
    AxiomKind,
    Derivation,
    Sequent,
    axiom_check,
    curry,
    entails_bruteforce,
    ground_check,
    merge_premises,
    prove,
    validate_derivation,
)
from .render import (
    RenderedDoc,
    formula_text,
    render_derivation,
    render_derivation_html,
    render_derivation_text,
    render_eval_trace_html,
    render_eval_trace_text,
    sequent_text,
)
from .sexpr import SExprError, read, read_all, write, write_all

__all__ = [name for name in dir() if not name.startswith("_")]
