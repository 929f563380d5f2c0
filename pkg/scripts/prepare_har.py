#!/usr/bin/env python3
"""Prepare the human-activity-recognition training partition.

Converts the space-separated feature matrix plus integer label files into
the CSV form load_csv expects (561 numeric features, activity and subject
label columns), then splits it into fit/eval halves stratified jointly on
(subject, activity) so the subject-identification task is evaluable: the
published test partition contains different people and cannot score an
identity classifier.

Run scripts/fetch_data.sh first.
"""

import argparse
import csv
import sys
from importlib import resources
from pathlib import Path

from privproj.dataio import (joint_labels, load_csv, load_schema,
                             save_dataset_csv, save_labels_csv,
                             stratified_holdout)

ACTIVITY_NAMES = ("WALKING", "WALKING_UPSTAIRS", "WALKING_DOWNSTAIRS",
                  "SITTING", "STANDING", "LAYING")


def convert(har_dir: Path, out_csv: Path) -> int:
    x_path = har_dir / "train" / "X_train.txt"
    y_path = har_dir / "train" / "y_train.txt"
    s_path = har_dir / "train" / "subject_train.txt"
    for p in (x_path, y_path, s_path):
        if not p.exists():
            raise FileNotFoundError(p)
    n_rows = 0
    with open(x_path) as xf, open(y_path) as yf, open(s_path) as sf, \
            open(out_csv, "w", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([f"f{i}" for i in range(1, 562)]
                        + ["activity", "subject"])
        for x_line, y_line, s_line in zip(xf, yf, sf):
            features = x_line.split()
            if len(features) != 561:
                raise ValueError(f"expected 561 features, got "
                                 f"{len(features)}")
            activity = ACTIVITY_NAMES[int(y_line) - 1]
            writer.writerow(features + [activity, s_line.strip()])
            n_rows += 1
    return n_rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--har-dir", default="data/har/UCI HAR Dataset")
    parser.add_argument("--out-dir", default="data/har/prepared")
    parser.add_argument("--eval-fraction", type=float, default=0.3,
                        help="fraction held out for evaluation")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    har_dir, out_dir = Path(args.har_dir), Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    combined = out_dir / "har_all.csv"
    n_rows = convert(har_dir, combined)
    print(f"converted {n_rows} rows")

    schema = load_schema(resources.files("privproj.schemas") / "har.json")
    dataset, labels = load_csv(combined, schema)
    joint = joint_labels([labels["subject"], labels["activity"]])
    fit_idx, eval_idx = stratified_holdout(joint, args.eval_fraction,
                                           seed=args.seed)
    for tag, idx in (("train", fit_idx), ("test", eval_idx)):
        save_dataset_csv(dataset.take(idx), out_dir / f"{tag}.csv")
        for name, label_set in labels.items():
            save_labels_csv(label_set.take(idx),
                            out_dir / f"{tag}.{name}.csv")
        print(f"{tag}: {len(idx)} rows")
    return 0


if __name__ == "__main__":
    sys.exit(main())
