import pytest
from fastapi.testclient import TestClient

from g4c.service import create_app

from conftest import BERATUNG_GRANT, KB_DIR, NACHHALTIGKEIT_GRANT, VILLACH_GRANT

VILLACH_PROFILE = {
    "seat": "20201",
    "sites": ["20201"],
    "legal_form": "Einzelunternehmen",
    "oenace": None,
}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(str(KB_DIR)))


def test_health(client):
    body = client.get("/api/health").json()
    assert body["status"] == "ok"
    assert body["grants"] == 3


def test_grants_listing(client):
    r = client.get("/api/grants")
    assert r.status_code == 200
    names = {g["name"] for g in r.json()}
    assert VILLACH_GRANT in names
    assert all("id" in g for g in r.json())


def test_grant_detail_by_id_and_name(client):
    r = client.get("/api/grants/1052703")
    assert r.status_code == 200
    body = r.json()
    assert body["name"] == VILLACH_GRANT
    assert body["conditions"]["kind"] == "and"
    assert "Voraussetzungen" in (body["conditions"]["explanation"] or "")
    assert body["conditions_text"].startswith("(df(")

    r = client.get(f"/api/grants/{NACHHALTIGKEIT_GRANT}")
    assert r.status_code == 200


def test_grant_detail_unknown(client):
    r = client.get("/api/grants/niemand")
    assert r.status_code == 404
    assert set(r.json()) == {"error", "detail"}


def test_concepts_listing(client):
    r = client.get("/api/concepts")
    assert r.status_code == 200
    assert len(r.json()) == 2


def test_evaluate_villach(client):
    r = client.post("/api/evaluate", json={"profile": VILLACH_PROFILE})
    assert r.status_code == 200
    results = r.json()
    by_name = {x["name"]: x["verdict"] for x in results}
    assert by_name[VILLACH_GRANT] == "satisfied"
    assert results[0]["name"] == VILLACH_GRANT  # satisfied bucket first
    assert results[0]["trace"]["value"] == "true"


def test_evaluate_null_fields_profile(client):
    r = client.post("/api/evaluate", json={"profile": {"seat": None}})
    assert r.status_code == 200
    assert {x["verdict"] for x in r.json()} == {"undecided"}


def test_evaluate_filters(client):
    r = client.post(
        "/api/evaluate",
        json={"profile": VILLACH_PROFILE, "filters": {"category": "Umwelt"}},
    )
    assert [x["name"] for x in r.json()] == [VILLACH_GRANT]


def test_evaluate_malformed(client):
    assert client.post("/api/evaluate", json={"nope": 1}).status_code == 400
    assert client.post("/api/evaluate", json={"profile": {"seat": 5}}).status_code == 400
    r = client.post(
        "/api/evaluate", content=b"not json", headers={"content-type": "application/json"}
    )
    assert r.status_code == 400
    assert set(r.json()) == {"error", "detail"}


def test_prove_endpoint(client):
    r = client.post(
        "/api/prove", json={"from": BERATUNG_GRANT, "to": NACHHALTIGKEIT_GRANT}
    )
    assert r.status_code == 200
    body = r.json()
    assert body["derivable"] is True
    assert body["derivation"]["rule"] == "andL"
    assert body["html"].startswith('<div class="g4c-node"')

    r = client.post(
        "/api/prove", json={"from": NACHHALTIGKEIT_GRANT, "to": BERATUNG_GRANT}
    )
    assert r.json() == {"derivable": False, "derivation": None, "html": None}


def test_prove_unknown_grant(client):
    r = client.post("/api/prove", json={"from": "Niemand", "to": NACHHALTIGKEIT_GRANT})
    assert r.status_code == 404


def test_prove_malformed(client):
    assert client.post("/api/prove", json={"from": BERATUNG_GRANT}).status_code == 400


def test_prove_raw_sequent(client):
    r = client.post(
        "/api/prove",
        json={"sequent": {"left": ["(and A B)"], "right": ["(or B C)"]}},
    )
    assert r.status_code == 200
    assert r.json()["derivable"] is True

    r = client.post("/api/prove", json={"sequent": {"left": ["A"], "right": ["B"]}})
    assert r.json()["derivable"] is False

    # concepts from the loaded KB resolve inside raw sequents
    r = client.post(
        "/api/prove",
        json={
            "sequent": {
                "left": ["(gv.at:Ist-Juristische-Person)"],
                "right": ["(Rechtsform-in :GmbH :AG :Verein :Genossenschaft :OG)"],
            }
        },
    )
    assert r.json()["derivable"] is True


def test_prove_raw_sequent_malformed(client):
    r = client.post("/api/prove", json={"sequent": {"left": ["(unbalanced"], "right": []}})
    assert r.status_code == 400
    r = client.post("/api/prove", json={"sequent": {"left": [1], "right": []}})
    assert r.status_code == 400


def test_implications(client):
    body = client.get("/api/implications").json()
    pairs = {(e["source"], e["target"]) for e in body["edges"]}
    assert (BERATUNG_GRANT, NACHHALTIGKEIT_GRANT) in pairs
    assert body["duplicates"] == []


def test_consistency(client):
    body = client.get("/api/consistency").json()
    assert all(entry["consistent"] for entry in body)
    assert len(body) == 3


def test_reload(client):
    r = client.post("/api/reload")
    assert r.status_code == 200
    assert r.json() == {"reloaded": True, "grants": 3}


def test_static_css_served(client):
    r = client.get("/static/g4c.css")
    assert r.status_code == 200
    assert ".g4c-node" in r.text


def test_repeated_requests_identical(client):
    a = client.post("/api/evaluate", json={"profile": VILLACH_PROFILE})
    b = client.post("/api/evaluate", json={"profile": VILLACH_PROFILE})
    assert a.content == b.content
