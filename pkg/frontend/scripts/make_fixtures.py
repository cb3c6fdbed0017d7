#!/usr/bin/env python3
"""Record real engine responses as JSON fixtures for the console tests.

Run from the frontend directory (or anywhere): spins the API in-process
against the repository's sample knowledge base and captures the payloads
the console tests replay. Also captures the CLI's verdicts for the
CLI/console parity golden test.
"""

import json
import pathlib
import sys

HERE = pathlib.Path(__file__).resolve().parent
REPO = HERE.parent.parent
KB = REPO / "kb"
OUT = HERE.parent / "test" / "fixtures"

sys.path.insert(0, str(REPO / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from g4c.kb import evaluate_all, load_kb  # noqa: E402
from g4c.kleene import CompanyProfile  # noqa: E402
from g4c.serialize import result_json  # noqa: E402
from g4c.service import create_app  # noqa: E402

VILLACH_PROFILE = {
    "seat": "20201",
    "sites": ["20201"],
    "legal_form": "Einzelunternehmen",
    "oenace": None,
}
LEGAL_UNKNOWN_PROFILE = dict(VILLACH_PROFILE, legal_form=None)

BERATUNG = "Beratungskostenzuschuss für Gastronomie-/Hotelleriebetriebe in der Steiermark"
NACHHALTIGKEIT = "Förderung zur Wirtschaftsinitiative Nachhaltigkeit Steiermark"


def dump(name: str, payload) -> None:
    path = OUT / name
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
    print(f"wrote {path.relative_to(REPO)}")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(str(KB)))

    dump("grants.json", client.get("/api/grants").json())
    dump("concepts.json", client.get("/api/concepts").json())
    dump(
        "evaluate-villach.json",
        client.post("/api/evaluate", json={"profile": VILLACH_PROFILE}).json(),
    )
    dump(
        "evaluate-villach-legal-unknown.json",
        client.post("/api/evaluate", json={"profile": LEGAL_UNKNOWN_PROFILE}).json(),
    )
    dump(
        "prove-steiermark.json",
        client.post("/api/prove", json={"from": BERATUNG, "to": NACHHALTIGKEIT}).json(),
    )
    dump("implications.json", client.get("/api/implications").json())
    dump("consistency.json", client.get("/api/consistency").json())
    grants = client.get("/api/grants").json()
    dump(
        "grant-details.json",
        [client.get(f"/api/grants/{g['id']}").json() for g in grants],
    )

    # the engine's own verdicts for the same profile JSON, as the CLI reports them
    kb = load_kb(KB)
    cli_results = [
        result_json(r, include_trace=False)
        for r in evaluate_all(kb, CompanyProfile.from_json(VILLACH_PROFILE))
    ]
    dump("cli-verdicts-villach.json", cli_results)


if __name__ == "__main__":
    main()
