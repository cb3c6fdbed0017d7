import random

import pytest

from g4c.kb import (
    KBLoadError,
    Verdict,
    consistency_report,
    duplicate_condition_pairs,
    evaluate_all,
    grant_id,
    implication_matrix,
    load_kb,
)
from g4c.kleene import CompanyProfile, TruthValue3, eval_formula
from g4c.model import And, Bottom, Not, OpaqueAtom, Or, QualifiedName
from g4c.prover import validate_derivation

from conftest import BERATUNG_GRANT, KB_DIR, NACHHALTIGKEIT_GRANT, VILLACH_GRANT


def test_sample_kb_shape(sample_kb):
    assert len(sample_kb.grants) == 3
    assert len(sample_kb.concepts) >= 2
    assert len(sample_kb.source_files) == 3
    assert all(f.sha256 for f in sample_kb.source_files)
    assert sample_kb.warnings == ()


def test_grant_lookup_by_name_and_id(sample_kb):
    g = sample_kb.grant(VILLACH_GRANT)
    assert sample_kb.grant("1052703") == g
    assert grant_id(g) == "1052703"
    with pytest.raises(KeyError):
        sample_kb.grant("no such grant")


def test_empty_directory_is_a_valid_kb(tmp_path):
    kb = load_kb(tmp_path)
    assert kb.grants == ()
    assert len(kb.concepts) == 0


def test_cycle_rejected_at_load(tmp_path):
    (tmp_path / "bad.lisp").write_text(
        "(def-concept a (b))\n(def-concept b (a))\n", encoding="utf-8"
    )
    with pytest.raises(KBLoadError) as exc:
        load_kb(tmp_path)
    assert "cycle" in str(exc.value)
    assert not exc.value.parse_failure


def test_duplicate_grant_name_rejected(tmp_path):
    text = '(define-grant ("Same") "d" top)\n'
    (tmp_path / "a.lisp").write_text(text, encoding="utf-8")
    (tmp_path / "b.lisp").write_text(text, encoding="utf-8")
    with pytest.raises(KBLoadError) as exc:
        load_kb(tmp_path)
    assert "duplicate grant name" in str(exc.value)


def test_parse_error_reports_file(tmp_path):
    (tmp_path / "broken.lisp").write_text("(define-grant ", encoding="utf-8")
    with pytest.raises(KBLoadError) as exc:
        load_kb(tmp_path)
    assert exc.value.parse_failure
    assert "broken.lisp" in str(exc.value)


def test_concepts_register_across_files_in_any_order(tmp_path):
    # file sorted after the user, but the user's concept refers to it
    (tmp_path / "a-user.lisp").write_text(
        "(def-concept user (helper))\n", encoding="utf-8"
    )
    (tmp_path / "b-helper.lisp").write_text(
        "(def-concept helper top)\n", encoding="utf-8"
    )
    kb = load_kb(tmp_path)
    assert len(kb.concepts) == 2
    assert kb.warnings == ()


def test_unregistered_packagey_reference_warns(tmp_path):
    (tmp_path / "g.lisp").write_text(
        '(define-grant ("G") "d" (gv.at:niemals-definiert))\n', encoding="utf-8"
    )
    kb = load_kb(tmp_path)
    assert any("gv.at:niemals-definiert" in w for w in kb.warnings)


def test_three_buckets_ordered(sample_kb, villach_profile):
    results = evaluate_all(sample_kb, villach_profile)
    verdicts = [r.verdict for r in results]
    assert verdicts == sorted(
        verdicts,
        key=lambda v: [Verdict.SATISFIED, Verdict.UNDECIDED, Verdict.NOT_SATISFIED].index(v),
    )
    assert results[0].grant.name == VILLACH_GRANT
    assert results[0].verdict is Verdict.SATISFIED


def test_ties_keep_kb_order(sample_kb, all_unknown_profile):
    results = evaluate_all(sample_kb, all_unknown_profile)
    assert [r.verdict for r in results] == [Verdict.UNDECIDED] * 3
    assert [r.grant.name for r in results] == [g.name for g in sample_kb.grants]


def test_category_filter(sample_kb, villach_profile):
    results = evaluate_all(sample_kb, villach_profile, category="Umwelt")
    assert [r.grant.name for r in results] == [VILLACH_GRANT]
    results = evaluate_all(sample_kb, villach_profile, category="wirtschaft")
    assert {r.grant.name for r in results} == {BERATUNG_GRANT, NACHHALTIGKEIT_GRANT}


def test_date_filter(sample_kb, villach_profile):
    import datetime

    before = evaluate_all(sample_kb, villach_profile, at_date=datetime.date(2018, 6, 1))
    assert VILLACH_GRANT not in {r.grant.name for r in before}  # gültig-von 2019
    # grants without dates always pass
    assert {r.grant.name for r in before} == {BERATUNG_GRANT, NACHHALTIGKEIT_GRANT}
    after = evaluate_all(sample_kb, villach_profile, at_date=datetime.date(2020, 1, 1))
    assert VILLACH_GRANT in {r.grant.name for r in after}


def test_bucket_coherence(sample_kb, villach_profile, gmbh_elsewhere_profile, all_unknown_profile):
    for profile in (villach_profile, gmbh_elsewhere_profile, all_unknown_profile):
        for r in evaluate_all(sample_kb, profile):
            value = eval_formula(r.grant.conditions, profile, sample_kb.concepts)
            assert r.verdict is Verdict.from_value(value)
            assert r.trace.value is value


def test_implication_matrix_contains_steiermark_edge(sample_kb):
    edges = implication_matrix(sample_kb)
    pairs = {(e.source, e.target) for e in edges}
    assert (BERATUNG_GRANT, NACHHALTIGKEIT_GRANT) in pairs
    assert (NACHHALTIGKEIT_GRANT, BERATUNG_GRANT) not in pairs
    for e in edges:
        assert validate_derivation(e.derivation, sample_kb.concepts)


def test_single_grant_kb_has_empty_matrix(tmp_path):
    (tmp_path / "one.lisp").write_text(
        '(define-grant ("Solo") "d" (Rechtsform-in :AG))\n', encoding="utf-8"
    )
    assert implication_matrix(load_kb(tmp_path)) == []


def test_identical_conditions_are_reported_not_edged(tmp_path):
    (tmp_path / "kb.lisp").write_text(
        '(define-grant ("Eng") "d" (ÖNACE-in "55.10"))\n'
        '(define-grant ("Kopie") "d" (önace-in "55.10"))\n'
        '(define-grant ("Breit") "d" (ÖNACE-in "55"))\n',
        encoding="utf-8",
    )
    kb = load_kb(tmp_path)
    assert duplicate_condition_pairs(kb) == [("Eng", "Kopie")]
    pairs = {(e.source, e.target) for e in implication_matrix(kb)}
    # no edge between the structurally identical pair, in either direction
    assert ("Eng", "Kopie") not in pairs and ("Kopie", "Eng") not in pairs
    # edges to the genuinely weaker grant are unaffected
    assert ("Eng", "Breit") in pairs and ("Kopie", "Breit") in pairs
    assert ("Breit", "Eng") not in pairs


def test_implication_transitivity_where_edges_chain(tmp_path):
    (tmp_path / "kb.lisp").write_text(
        '(define-grant ("Fein") "d" (Betriebsstandort-in "55101"))\n'
        '(define-grant ("Mittel") "d" (Betriebsstandort-in "551"))\n'
        '(define-grant ("Grob") "d" (Betriebsstandort-in "5"))\n',
        encoding="utf-8",
    )
    pairs = {(e.source, e.target) for e in implication_matrix(load_kb(tmp_path))}
    assert ("Fein", "Mittel") in pairs and ("Mittel", "Grob") in pairs
    assert ("Fein", "Grob") in pairs  # cut-admissibility consequence, tested


_DOMAIN_SEATS = ["20201", "10101", "Land-Stmk", "60101", "617"]
_DOMAIN_FORMS = ["Einzelunternehmen", "GmbH", "Verein", "Offene-Gesellschaft", "KG"]
_DOMAIN_OENACE = ["55.10", "56.01", "47.11", "55"]


def _domain_profile(rng):
    return CompanyProfile(
        seat=rng.choice(_DOMAIN_SEATS),
        sites=frozenset(rng.sample(_DOMAIN_SEATS, rng.randint(0, 3))),
        legal_form=rng.choice(_DOMAIN_FORMS),
        oenace=frozenset(rng.sample(_DOMAIN_OENACE, rng.randint(0, 2))),
    )


def test_implication_edges_cohere_with_evaluation(sample_kb):
    rng = random.Random(0xE19E)
    edges = implication_matrix(sample_kb)
    assert edges
    hits = 0
    for _ in range(300):
        profile = _domain_profile(rng)
        values = {
            g.name: eval_formula(g.conditions, profile, sample_kb.concepts)
            for g in sample_kb.grants
        }
        for e in edges:
            if values[e.source] is TruthValue3.TRUE:
                assert values[e.target] is TruthValue3.TRUE, (e, profile)
                hits += 1
    assert hits > 20


def test_consistency_of_sample_kb(sample_kb, villach_profile):
    report = consistency_report(sample_kb)
    assert all(r.consistent for r in report)
    # a satisfying profile exists for the Villach grant, which by ground
    # soundness already rules out a refutation
    g = sample_kb.grant(VILLACH_GRANT)
    assert eval_formula(g.conditions, villach_profile, sample_kb.concepts) is TruthValue3.TRUE


def test_contradictory_grant_flagged(tmp_path):
    (tmp_path / "kb.lisp").write_text(
        '(define-grant ("Widerspruch") "d" (and x (neg x)))\n'
        '(define-grant ("Leer") "d" bottom)\n'
        '(define-grant ("Gut") "d" (Rechtsform-in :AG))\n',
        encoding="utf-8",
    )
    kb = load_kb(tmp_path)
    results = {r.grant: r for r in consistency_report(kb)}
    assert not results["Widerspruch"].consistent
    assert not results["Leer"].consistent
    assert results["Gut"].consistent
    assert results["Leer"].refutation.rule == "bottomL"
    assert validate_derivation(results["Widerspruch"].refutation, kb.concepts)
