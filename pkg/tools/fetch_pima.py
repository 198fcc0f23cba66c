"""Fetch the UCI Pima Indians diabetes dataset and assemble tests/data/pima.csv.

The dataset (768 records, National Institute of Diabetes and Digestive and
Kidney Diseases, distributed via the UCI Machine Learning Repository) is
commonly mirrored as a headerless CSV. This script downloads such a mirror,
verifies the bytes against the known checksum, prepends the canonical header
and writes the test fixture. Run it once in an environment with network
access if tests/data/pima.csv is missing.

Usage: python3 tools/fetch_pima.py [--url URL] [--out tests/data/pima.csv]
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import urllib.request
from pathlib import Path

DEFAULT_URL = (
    "https://raw.githubusercontent.com/jbrownlee/Datasets/master/pima-indians-diabetes.csv"
)

#: sha256 of the canonical headerless 768-row file.
RAW_SHA256 = "6bfe5d0f379d17a0e0819b996407e3c09bf80febd4287f2ed212190dfff154af"

HEADER = "Pregnancies,Glucose,BloodPressure,SkinThickness,Insulin,BMI,DiabetesPedigreeFunction,Age,Outcome"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--url", default=DEFAULT_URL)
    parser.add_argument("--out", default="tests/data/pima.csv")
    args = parser.parse_args()

    print(f"downloading {args.url}")
    raw = urllib.request.urlopen(args.url, timeout=60).read()

    digest = hashlib.sha256(raw).hexdigest()
    if digest != RAW_SHA256:
        print(f"checksum mismatch: got {digest}, expected {RAW_SHA256}", file=sys.stderr)
        print("refusing to write an unverified fixture", file=sys.stderr)
        return 1

    text = raw.decode("ascii").strip()
    rows = text.split("\n")
    if len(rows) != 768:
        print(f"expected 768 data rows, got {len(rows)}", file=sys.stderr)
        return 1
    if rows[0].split(",")[0].isalpha():
        print("source already has a header; expected the headerless mirror", file=sys.stderr)
        return 1

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(HEADER + "\n" + text + "\n", encoding="utf-8")
    print(f"wrote {out} (header + 768 rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
