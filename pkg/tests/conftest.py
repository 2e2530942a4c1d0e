"""Shared fixture loading and polynomial helpers for the test suite."""

from pathlib import Path

import pytest

from treeideals import StagedTree
from treeideals.cli import parse_polynomial, parse_tree_document

FIXTURE_DIR = Path(__file__).parent / "fixtures"

FIXTURE_NAMES = sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))

def staged_classes_binary(t: "StagedTree") -> bool:
    """True when every stage class of size >= 2 has exactly two labels."""
    return all(cls.arity == 2 for cls in t.stage_classes() if cls.size >= 2)


def fixture_text(name: str) -> str:
    return (FIXTURE_DIR / f"{name}.json").read_text(encoding="utf-8")


def load_fixture(name: str) -> StagedTree:
    return parse_tree_document(fixture_text(name))


def poly(t: StagedTree, text: str):
    """Parse a polynomial over symbols that already exist in the tree."""
    return parse_polynomial(text, t.table)


def canonical(t: StagedTree, texts) -> frozenset:
    """Parse and sign-normalize a collection of polynomial strings."""
    return frozenset(poly(t, s).normalized_sign() for s in texts)


@pytest.fixture(params=FIXTURE_NAMES)
def any_tree(request) -> StagedTree:
    return load_fixture(request.param)


@pytest.fixture(scope="session")
def trees() -> dict[str, StagedTree]:
    return {name: load_fixture(name) for name in FIXTURE_NAMES}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One visible line per acceptance criterion, after capture ends."""
    import test_acceptance

    if not test_acceptance.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, test_acceptance.N_CRITERIA + 1):
        verdict = test_acceptance.VERDICTS.get(k, "not run")
        terminalreporter.write_line(f"criterion {k}: {verdict}")
