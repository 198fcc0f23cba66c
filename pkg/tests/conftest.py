from __future__ import annotations

import os
from pathlib import Path

import pytest

from casewise import (
    PIMA_SOLUTION,
    PIMA_ZERO_MISSING,
    PolynomialMeasure,
    load_csv,
    starter_model,
)

DATA_DIR = Path(__file__).parent / "data"

SYNTHETIC_DIABETES = DATA_DIR / "synthetic_diabetes.csv"

#: The real UCI Pima file is not redistributable with this repository; the
#: data-dependent acceptance criteria look for it here or under $PIMA_CSV.
PIMA_CSV_CANDIDATES = ("PIMA_CSV", DATA_DIR / "pima.csv")


def real_pima_path() -> Path | None:
    env = os.environ.get("PIMA_CSV")
    if env and Path(env).is_file():
        return Path(env)
    default = PIMA_CSV_CANDIDATES[1]
    if default.is_file():
        return default
    return None


@pytest.fixture(scope="session")
def diabetes_base():
    _schema, base = load_csv(
        SYNTHETIC_DIABETES,
        solution=PIMA_SOLUTION,
        zero_missing=PIMA_ZERO_MISSING,
        name="diabetes",
    )
    return base


@pytest.fixture(scope="session")
def diabetes_model(diabetes_base):
    """Starter model over the demo data (degree-2 measures, equal weights)."""
    return starter_model(diabetes_base)


@pytest.fixture(scope="session")
def diabetes_linear_model(diabetes_model):
    """Equal weights, linear (degree 1) measures on every numeric attribute."""
    model = diabetes_model
    for measure in diabetes_model.measures:
        if isinstance(measure, PolynomialMeasure):
            model = model.with_measure(PolynomialMeasure(measure.attribute, degree=1.0))
    return model
