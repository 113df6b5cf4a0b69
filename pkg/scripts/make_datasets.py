#!/usr/bin/env python3
"""Materialize benchmark data files into data/.

iris.csv comes from scikit-learn's bundled copy. The Wisconsin breast cancer
(Original) file and the StatLog landsat files cannot be generated offline;
this script converts them into the expected layout when you point it at
downloaded copies (see data/MANIFEST.md for sources and checksums).
"""

import argparse
import hashlib
import sys
from pathlib import Path


def write_iris(out_dir: Path) -> Path:
    from sklearn.datasets import load_iris

    iris = load_iris()
    path = out_dir / "iris.csv"
    with open(path, "w") as fh:
        for row, target in zip(iris.data, iris.target):
            cells = [f"{v:g}" for v in row] + [iris.target_names[target]]
            fh.write(",".join(cells) + "\n")
    return path


def convert_wbc(raw: Path, out_dir: Path) -> Path:
    """UCI breast-cancer-wisconsin.data -> wbc.csv (drop the id column)."""
    path = out_dir / "wbc.csv"
    with open(raw) as src, open(path, "w") as fh:
        for line in src:
            cells = line.strip().split(",")
            if len(cells) != 11:
                continue
            fh.write(",".join(cells[1:]) + "\n")  # 9 measurements + class (2/4)
    return path


def sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data")
    parser.add_argument("--wbc-raw", help="path to UCI breast-cancer-wisconsin.data")
    args = parser.parse_args()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    p = write_iris(out_dir)
    print(f"{p}: sha256 {sha256(p)}")
    if args.wbc_raw:
        p = convert_wbc(Path(args.wbc_raw), out_dir)
        print(f"{p}: sha256 {sha256(p)}")
    else:
        print("wbc.csv skipped (pass --wbc-raw to convert the UCI file)")
    print("landsat: place sat.trn and sat.tst next to the CSVs (no conversion needed)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
