import pathlib

import pytest

from g4c import CompanyProfile, load_kb

KB_DIR = pathlib.Path(__file__).resolve().parent.parent / "kb"

VILLACH_GRANT = (
    "Umweltschutz- und Energieeffizienzförderung - Förderung sonstiger "
    "Energieeffizienzmaßnahmen Villach"
)
BERATUNG_GRANT = "Beratungskostenzuschuss für Gastronomie-/Hotelleriebetriebe in der Steiermark"
NACHHALTIGKEIT_GRANT = "Förderung zur Wirtschaftsinitiative Nachhaltigkeit Steiermark"


@pytest.fixture(scope="session")
def sample_kb():
    return load_kb(KB_DIR)


@pytest.fixture(scope="session")
def villach_profile():
    """Sole trader in Villach; ÖNACE classification not yet assigned."""
    return CompanyProfile(
        seat="20201",
        sites=frozenset({"20201"}),
        legal_form="Einzelunternehmen",
        oenace=None,
    )


@pytest.fixture(scope="session")
def gmbh_elsewhere_profile():
    """Legal person (GmbH) with a seat outside Villach and no extra sites."""
    return CompanyProfile(
        seat="10101",
        sites=frozenset(),
        legal_form="GmbH",
        oenace=frozenset(),
    )


@pytest.fixture(scope="session")
def all_unknown_profile():
    return CompanyProfile()
