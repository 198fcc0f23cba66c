"""Generate the synthetic diabetes-style demo dataset.

This is NOT the UCI Pima dataset. It is a deterministic stand-in with the
same column layout: 768 rows, the canonical 9-column header, zero-coded
missing values in the five physiological columns and a binary Outcome label
correlated with the risk-driving columns. Use it for demos and mechanical
tests; benchmark claims about the real dataset require the real file (see
README).

Usage: python3 tools/make_synthetic_diabetes.py [out.csv]
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

SEED = 20240901
ROWS = 768

HEADER = (
    "Pregnancies",
    "Glucose",
    "BloodPressure",
    "SkinThickness",
    "Insulin",
    "BMI",
    "DiabetesPedigreeFunction",
    "Age",
    "Outcome",
)

# Rough zero rates of the real distribution's not-measured encodings.
ZERO_RATES = {
    "Glucose": 0.007,
    "BloodPressure": 0.046,
    "SkinThickness": 0.30,
    "Insulin": 0.49,
    "BMI": 0.014,
}


def generate_rows(rows: int = ROWS, seed: int = SEED) -> list[list[str]]:
    rng = random.Random(seed)
    table: list[list[str]] = []
    for _ in range(rows):
        risk = rng.random()
        pregnancies = max(0, int(rng.gauss(2.5 + 4.0 * risk, 2.8)))
        glucose = int(min(199, max(56, rng.gauss(105 + 45 * risk, 24))))
        blood_pressure = int(min(122, max(24, rng.gauss(66 + 10 * risk, 12))))
        skin = int(min(99, max(7, rng.gauss(26 + 8 * risk, 10))))
        insulin = int(min(846, max(14, rng.gauss(100 + 140 * risk, 105))))
        bmi = min(67.1, max(18.2, rng.gauss(30.0 + 6.0 * risk, 6.5)))
        pedigree = min(2.42, max(0.078, rng.gauss(0.35 + 0.35 * risk, 0.28)))
        age = int(min(81, max(21, rng.gauss(27 + 22 * risk, 9))))
        outcome = 1 if rng.random() < 0.10 + 0.62 * risk else 0

        values = {
            "Pregnancies": str(pregnancies),
            "Glucose": str(glucose),
            "BloodPressure": str(blood_pressure),
            "SkinThickness": str(skin),
            "Insulin": str(insulin),
            "BMI": f"{bmi:.1f}",
            "DiabetesPedigreeFunction": f"{pedigree:.3f}",
            "Age": str(age),
            "Outcome": str(outcome),
        }
        for column, rate in ZERO_RATES.items():
            if rng.random() < rate:
                values[column] = "0"
        table.append([values[column] for column in HEADER])
    return table


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/data/synthetic_diabetes.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(HEADER)]
    lines.extend(",".join(row) for row in generate_rows())
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({ROWS} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
