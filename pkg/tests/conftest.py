from __future__ import annotations

from pathlib import Path

import pytest

from qcosmic import Model, parse_model

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def factoring_text() -> str:
    return load_fixture("factoring.qcm")


@pytest.fixture(scope="session")
def factoring_model(factoring_text) -> Model:
    result = parse_model(factoring_text, file="factoring.qcm")
    assert result.model is not None, [d.render() for d in result.diagnostics]
    return result.model
