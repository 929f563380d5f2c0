#!/usr/bin/env python3
"""Prepare the census income extract for sweeps.

Normalizes the raw adult files (header, whitespace, "?" markers, trailing
periods), encodes them through the shipped schema with the 3-group marital
recode, balances train and test jointly over (marital-status, sex), and
writes the dataset/label CSVs the sweep command consumes.

Run scripts/fetch_data.sh first, or pass --synthetic to use the bundled
census-style generator instead of the real files.
"""

import argparse
import sys
from importlib import resources
from pathlib import Path

from privproj.dataio import (balance_indices, joint_labels, load_csv,
                             load_schema, normalize_adult_csv,
                             recode_census_marital, save_dataset_csv,
                             save_labels_csv)
from privproj.synthetic import write_adult_like_csv


def prepare_split(raw_csv: Path, out_prefix: Path, seed: int) -> None:
    schema = load_schema(resources.files("privproj.schemas") /
                         "census_adult.json")
    loaded = load_csv(raw_csv, schema,
                      recoders={"marital-status": recode_census_marital})
    dataset, labels = loaded
    idx = balance_indices(
        joint_labels([labels["marital-status"], labels["sex"]]), seed=seed)
    dataset = dataset.take(idx)
    labels = {name: l.take(idx) for name, l in labels.items()}
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    save_dataset_csv(dataset, out_prefix.with_suffix(".csv"))
    for name, label_set in labels.items():
        save_labels_csv(label_set,
                        out_prefix.parent / f"{out_prefix.name}.{name}.csv")
    print(f"{out_prefix.name}: kept {loaded.n_rows_kept}, dropped "
          f"{loaded.n_rows_dropped}, balanced to {dataset.n_samples} rows, "
          f"{dataset.n_features} features")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--raw-dir", default="data/census",
                        help="directory with adult.data / adult.test")
    parser.add_argument("--out-dir", default="data/census/prepared")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the balancing draws")
    parser.add_argument("--synthetic", action="store_true",
                        help="generate census-style data instead of "
                             "reading the real files")
    args = parser.parse_args()

    raw_dir, out_dir = Path(args.raw_dir), Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.synthetic:
        train_raw = out_dir / "synthetic_train_raw.csv"
        test_raw = out_dir / "synthetic_test_raw.csv"
        write_adult_like_csv(train_raw, seed=101, n_rows=8000)
        write_adult_like_csv(test_raw, seed=202, n_rows=4000)
        print("using the bundled census-style generator")
    else:
        train_src = raw_dir / "adult.data"
        test_src = raw_dir / "adult.test"
        if not train_src.exists() or not test_src.exists():
            print(f"missing {train_src} or {test_src}; run "
                  f"scripts/fetch_data.sh or pass --synthetic",
                  file=sys.stderr)
            return 2
        train_raw = out_dir / "adult_train_raw.csv"
        test_raw = out_dir / "adult_test_raw.csv"
        normalize_adult_csv(train_src, train_raw)
        normalize_adult_csv(test_src, test_raw)

    prepare_split(train_raw, out_dir / "train", seed=args.seed)
    prepare_split(test_raw, out_dir / "test", seed=args.seed + 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
