#!/usr/bin/env python3
"""Regenerates the bundled CSV copies of the Iris and Wine datasets.

Both come from scikit-learn's packaged copies of the UCI originals, so no
network access is needed. Output format matches what the loader expects:
one header line, numeric attribute columns, label in the last column.
"""

import argparse
import pathlib

from sklearn.datasets import load_iris, load_wine


def fmt(value: float) -> str:
    return f"{value:g}"


def write_csv(path: pathlib.Path, names, rows, labels) -> None:
    with path.open("w", encoding="utf-8") as out:
        out.write(",".join(names) + "\n")
        for row, label in zip(rows, labels):
            out.write(",".join(fmt(v) for v in row) + f",{label}\n")
    print(f"wrote {path} ({len(labels)} rows)")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data", type=pathlib.Path)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    iris = load_iris()
    iris_names = [n.replace(" (cm)", "").replace(" ", "_") for n in iris.feature_names]
    iris_labels = [iris.target_names[t] for t in iris.target]
    write_csv(args.out_dir / "iris.csv", iris_names + ["species"], iris.data, iris_labels)

    wine = load_wine()
    wine_names = [n.replace("/", "_") for n in wine.feature_names]
    wine_labels = [t + 1 for t in wine.target]  # UCI numbers the cultivars 1..3
    write_csv(args.out_dir / "wine.csv", wine_names + ["class"], wine.data, wine_labels)


if __name__ == "__main__":
    main()
