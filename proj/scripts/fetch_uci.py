#!/usr/bin/env python3
"""Downloads the remaining benchmark datasets from the UCI repository.

Needs network access. Each file is converted to the loader's CSV format
(header line, numeric attributes, label last). Glass drops the UCI Id
column. Pima was withdrawn from UCI; if the download fails, place a copy
of pima-indians-diabetes.data (8 attributes + 0/1 outcome, no header)
next to this script and rerun.
"""

import argparse
import pathlib
import sys
import urllib.request

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"

SOURCES = {
    "glass": f"{BASE}/glass/glass.data",
    "sonar": f"{BASE}/undocumented/connectionist-bench/sonar/sonar.all-data",
    "ionosphere": f"{BASE}/ionosphere/ionosphere.data",
    "pima": f"{BASE}/pima-indians-diabetes/pima-indians-diabetes.data",
}

HEADERS = {
    "glass": ["ri", "na", "mg", "al", "si", "k", "ca", "ba", "fe", "type"],
    "sonar": [f"band_{i}" for i in range(60)] + ["class"],
    "ionosphere": [f"pulse_{i}" for i in range(34)] + ["class"],
    "pima": [
        "pregnancies", "glucose", "blood_pressure", "skin_thickness",
        "insulin", "bmi", "pedigree", "age", "outcome",
    ],
}


def fetch(name: str, url: str) -> list[str]:
    local = pathlib.Path(__file__).parent / url.rsplit("/", 1)[-1]
    if local.exists():
        text = local.read_text(encoding="utf-8")
    else:
        with urllib.request.urlopen(url, timeout=30) as response:
            text = response.read().decode("utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


def convert(name: str, lines: list[str]) -> list[str]:
    rows = [line.split(",") for line in lines]
    if name == "glass":
        rows = [row[1:] for row in rows]  # drop the Id column
    return [",".join(HEADERS[name])] + [",".join(row) for row in rows]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data", type=pathlib.Path)
    parser.add_argument("--only", nargs="*", choices=sorted(SOURCES), default=None)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    failures = []
    for name, url in SOURCES.items():
        if args.only and name not in args.only:
            continue
        try:
            lines = convert(name, fetch(name, url))
        except Exception as error:  # noqa: BLE001 - report and continue
            print(f"{name}: FAILED ({error})", file=sys.stderr)
            failures.append(name)
            continue
        path = args.out_dir / f"{name}.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(lines) - 1} rows)")

    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
