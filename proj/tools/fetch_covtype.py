#!/usr/bin/env python3
"""Fetch the UCI forest-cover dataset and write the canonical split.

Creates data/covtype_train.csv (first 11340 rows) and data/covtype_test.csv
(last 565892 rows), skipping the 3780 validation rows in between.  Each row
is the 54 cartographic features followed by the original 1-7 cover-type
label; no header.  The split follows the dataset's documented ordering, so
the files are reproducible byte-for-byte.

Requires scikit-learn (and network access on first use; the download is
cached under ~/scikit_learn_data).
"""

import argparse
import os
import sys


TRAIN_ROWS = 11340
VAL_ROWS = 3780
TEST_ROWS = 565892


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out-dir",
        default=os.path.join(os.path.dirname(__file__), "..", "data"),
        help="directory for covtype_train.csv / covtype_test.csv",
    )
    args = parser.parse_args()

    try:
        from sklearn.datasets import fetch_covtype
    except ImportError:
        print("scikit-learn is required: pip install scikit-learn",
              file=sys.stderr)
        return 1

    try:
        bundle = fetch_covtype(shuffle=False)
    except Exception as exc:  # network or cache failure
        print(f"download failed: {exc}", file=sys.stderr)
        return 1

    x, y = bundle.data, bundle.target
    total = TRAIN_ROWS + VAL_ROWS + TEST_ROWS
    if x.shape[0] != total:
        print(f"unexpected row count {x.shape[0]} (want {total})",
              file=sys.stderr)
        return 1

    out_dir = os.path.abspath(args.out_dir)
    os.makedirs(out_dir, exist_ok=True)

    def write_rows(path: str, lo: int, hi: int) -> None:
        with open(path, "w", encoding="ascii") as f:
            for i in range(lo, hi):
                feats = ",".join(f"{v:.10g}" for v in x[i])
                f.write(f"{feats},{int(y[i])}\n")

    train_path = os.path.join(out_dir, "covtype_train.csv")
    test_path = os.path.join(out_dir, "covtype_test.csv")
    write_rows(train_path, 0, TRAIN_ROWS)
    write_rows(test_path, TRAIN_ROWS + VAL_ROWS, total)
    print(f"wrote {train_path} ({TRAIN_ROWS} rows)")
    print(f"wrote {test_path} ({TEST_ROWS} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
