"""Acceptance gate: ten end-to-end criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; each test prints exactly one ``criterion NN: PASS/FAIL`` line.

Criteria 7 and 8 run against the public census income extract when the raw
files are present under ``data/census/`` (see scripts/fetch_data.sh);
otherwise they fall back to the bundled census-style generator, which
plants the same qualitative structure. The printed line names the source
used.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from privproj.classify import ClassifierSpec
from privproj.data import Dataset, LabelSet
from privproj.dataio import (balance_indices, joint_labels, load_csv,
                             load_schema, normalize_adult_csv,
                             recode_census_marital)
from privproj.experiment import (DataBundle, ExperimentConfig, MethodGrid,
                                 performance, run_sweep)
from privproj.linalg import generalized_eig, symmetrize
from privproj.projections import (ProjectionConfig, fit_dca, fit_mdr,
                                  fit_ruca, subspace_angle)
from privproj.scatter import compute_scatter
from privproj.seeds import rng_from
from privproj.synthetic import tradeoff_bundle, write_adult_like_csv

from conftest import class_assignment, separated_instance

REPO_ROOT = Path(__file__).resolve().parents[1]
CENSUS_DIR = REPO_ROOT / "data" / "census"
SCHEMA = load_schema(Path(__file__).resolve().parents[1] / "src" / "privproj"
                     / "schemas" / "census_adult.json")


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"criterion {criterion:02d}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def random_labeled_dataset(rng, n, m, c):
    labels = class_assignment(rng, n, c)
    centers = 3.0 * rng.standard_normal((m, c))
    x = rng.standard_normal((m, n)) + centers[:, labels]
    return Dataset(x), LabelSet(labels, class_count=c)


def test_criterion_01_scatter_additivity():
    """Total scatter equals between plus within on 500 fuzzed datasets."""
    t0 = time.perf_counter()
    worst = 0.0
    for trial in range(500):
        rng = rng_from(1001, "c1", trial)
        c = int(rng.integers(2, 6))
        n = int(rng.integers(c, 201))
        m = int(rng.integers(1, 31))
        d, l = random_labeled_dataset(rng, n, m, c)
        s = compute_scatter(d, l)
        gap = np.abs(s.s_bar - (s.s_b + s.s_w)).max()
        scale = np.abs(s.s_bar).max()
        worst = max(worst, gap / scale if scale else gap)
    elapsed = time.perf_counter() - t0
    report(1, worst <= 1e-9 and elapsed < 10.0,
           f"500 datasets, worst relative gap {worst:.2e} (limit 1e-9), "
           f"{elapsed:.1f}s (limit 10s)")


def test_criterion_02_generalized_eig_correctness():
    """Residuals and B-orthonormality on 200 fuzzed symmetric pencils."""
    t0 = time.perf_counter()
    worst_resid = worst_gram = 0.0
    for trial in range(200):
        rng = rng_from(1002, "c2", trial)
        m = int(rng.integers(1, 51))
        a = symmetrize(rng.standard_normal((m, m)))
        r = rng.standard_normal((m, m))
        b = symmetrize(r @ r.T + (0.5 + rng.random()) * np.eye(m))
        pairs = generalized_eig(a, b, m)
        v, lam = pairs.vectors, pairs.values
        resid = np.linalg.norm(a @ v - b @ v * lam, axis=0).max()
        worst_resid = max(worst_resid, resid / np.abs(a).max())
        gram_gap = np.abs(v.T @ b @ v - np.eye(m)).max()
        worst_gram = max(worst_gram, gram_gap)
    elapsed = time.perf_counter() - t0
    report(2, worst_resid <= 1e-8 and worst_gram <= 1e-8 and elapsed < 30.0,
           f"200 pencils, worst residual {worst_resid:.2e}, worst "
           f"orthonormality gap {worst_gram:.2e} (limits 1e-8), "
           f"{elapsed:.1f}s (limit 30s)")


def test_criterion_03_rank_bound():
    """With no numerator ridge, at most L-1 eigenvalues are non-zero."""
    failures = 0
    for trial in range(200):
        rng = rng_from(1003, "c3", trial)
        c = int(rng.integers(2, 7))
        m = int(rng.integers(2, 21))
        n = int(rng.integers(3 * c, 121))
        d, l = random_labeled_dataset(rng, n, m, c)
        cfg = ProjectionConfig(method="DCA", k=m, rho_prime=0.0)
        model = fit_dca(d, l, cfg)
        lam1 = model.eigenvalues[0]
        count = int((model.eigenvalues > 1e-8 * lam1).sum())
        if count > c - 1:
            failures += 1
    report(3, failures == 0,
           f"200 trials, {200 - failures}/200 satisfied count <= L-1 "
           f"(need 100%)")


def test_criterion_04_ruca_zero_is_dca():
    """Zero privacy weights reproduce the unweighted fit exactly."""
    worst = 0.0
    for trial in range(100):
        m = 4 + trial % 7
        c_p = 2 + trial % 3
        k = 1 + trial % 3
        d, utility, privacy = separated_instance(seed=4000 + trial, m=m,
                                                 c_p=c_p)
        dca = fit_dca(d, utility, ProjectionConfig(method="DCA", k=k))
        ruca = fit_ruca(d, utility, (privacy,),
                        ProjectionConfig(method="RUCA", k=k,
                                         privacy_weights=(0.0,)))
        worst = max(worst, subspace_angle(dca.w, ruca.w))
    report(4, worst < 1e-9,
           f"100 instances, worst principal angle {worst:.2e} rad "
           f"(limit 1e-9)")


def test_criterion_05_mdr_limit():
    """A dominating privacy weight drives the fit to the privacy-ratio
    solution. Fuzzed in the regime where the privacy between-class scatter
    has full rank (more privacy classes than dimensions), where the limit
    is unique."""
    worst = 0.0
    for trial in range(100):
        k = 1 + trial % 2
        d, utility, privacy = separated_instance(seed=5000 + trial, m=5,
                                                 n=160, c_u=2, c_p=7)
        s_all = compute_scatter(d, utility)
        s_priv = compute_scatter(d, privacy)
        rho_p = 1e6 * np.trace(s_all.s_bar) / np.trace(s_priv.s_b)
        ruca = fit_ruca(d, utility, (privacy,),
                        ProjectionConfig(method="RUCA", k=k,
                                         privacy_weights=(rho_p,)))
        mdr = fit_mdr(d, utility, privacy,
                      ProjectionConfig(method="MDR", k=k))
        worst = max(worst, subspace_angle(ruca.w, mdr.w))
    report(5, worst < 1e-3,
           f"100 instances, worst principal angle {worst:.2e} rad "
           f"(limit 1e-3)")


def test_criterion_06_synthetic_tradeoff_monotonicity():
    """Privacy accuracy falls (within noise) and utility survives as the
    privacy weight sweeps upward on the bundled generator."""
    t0 = time.perf_counter()
    grid = (0.0, 1.0, 4.0, 16.0, 64.0)
    bundle = tradeoff_bundle(seed=606, n_train=2000, n_test=2000, m=10)
    cfg = ExperimentConfig(
        methods=(MethodGrid("RUCA", (1,), tuple((w,) for w in grid)),),
        classifier=ClassifierSpec("KNN", 5), iterations=20, fraction=0.5,
        betas=(1.0,), seed=606)
    points = [p for p in run_sweep(cfg, bundle) if p.method == "RUCA"]
    assert [p.privacy_weights[0] for p in points] == list(grid)
    monotone = True
    for a, b in zip(points, points[1:]):
        slack = 2.0 * math.sqrt((a.acc_p_stds[0] ** 2 +
                                 b.acc_p_stds[0] ** 2) / cfg.iterations)
        if b.acc_p_means[0] > a.acc_p_means[0] + slack:
            monotone = False
    retention = points[-1].acc_u_mean / points[0].acc_u_mean
    elapsed = time.perf_counter() - t0
    acc_p = " ".join(f"{p.acc_p_means[0]:.3f}" for p in points)
    report(6, monotone and retention >= 0.9 and elapsed < 120.0,
           f"privacy accuracy [{acc_p}] over weights {grid}, "
           f"monotone={monotone}, utility retention {retention:.3f} "
           f"(limit 0.9), {elapsed:.0f}s (limit 120s)")


# --- census criteria ----------------------------------------------------------

def _census_raw_files(tmp_path):
    """(train_csv, test_csv, source_tag): real files if present, else the
    bundled census-style generator."""
    real_train = CENSUS_DIR / "adult.data"
    real_test = CENSUS_DIR / "adult.test"
    if real_train.exists() and real_test.exists():
        train_csv = tmp_path / "adult_train.csv"
        test_csv = tmp_path / "adult_test.csv"
        normalize_adult_csv(real_train, train_csv)
        normalize_adult_csv(real_test, test_csv)
        return train_csv, test_csv, "public adult files"
    train_csv = tmp_path / "synth_train.csv"
    test_csv = tmp_path / "synth_test.csv"
    write_adult_like_csv(train_csv, seed=101, n_rows=8000)
    write_adult_like_csv(test_csv, seed=202, n_rows=4000)
    return train_csv, test_csv, "bundled census-style generator"


def _load_balanced(path, seed):
    dataset, labels = load_csv(
        path, SCHEMA, recoders={"marital-status": recode_census_marital})
    marital, sex = labels["marital-status"], labels["sex"]
    idx = balance_indices(joint_labels([marital, sex]), seed=seed)
    return (dataset.take(idx), labels["income"].take(idx),
            (marital.take(idx), sex.take(idx)))


def test_criterion_07_census_pipeline_shape(tmp_path):
    """Schema encoding yields 29 features; joint balancing leaves every
    privacy class with exactly equal counts."""
    train_csv, test_csv, source = _census_raw_files(tmp_path)
    rows = {}
    balanced_ok = True
    features_ok = True
    for tag, path in (("train", train_csv), ("test", test_csv)):
        loaded = load_csv(path, SCHEMA,
                          recoders={"marital-status": recode_census_marital})
        features_ok &= loaded.dataset.n_features == 29
        data, income, (marital, sex) = _load_balanced(path, seed=7)
        balanced_ok &= len(set(marital.counts())) == 1
        balanced_ok &= len(set(sex.counts())) == 1
        rows[tag] = (loaded.n_rows_kept, loaded.n_rows_dropped,
                     data.n_samples)
    detail = "; ".join(
        f"{tag}: kept {k}, dropped {d}, balanced {b}"
        for tag, (k, d, b) in rows.items())
    report(7, features_ok and balanced_ok,
           f"{source}; M=29 features; privacy classes exactly equal after "
           f"joint balancing; rows {detail}")


def test_criterion_08_census_sweep_directions(tmp_path):
    """Direction checks on the census sweep across 5 master seeds."""
    t0 = time.perf_counter()
    train_csv, test_csv, source = _census_raw_files(tmp_path)
    successes = 0
    drops = []
    for master_seed in range(5):
        train, train_u, train_p = _load_balanced(train_csv,
                                                 seed=1000 + master_seed)
        test, test_u, test_p = _load_balanced(test_csv,
                                              seed=2000 + master_seed)
        bundle = DataBundle(train=train, train_utility=train_u,
                            train_privacy=train_p, test=test,
                            test_utility=test_u, test_privacy=test_p,
                            privacy_names=("marital-status", "sex"))
        cfg = ExperimentConfig(
            methods=(MethodGrid("PCA", (1,)), MethodGrid("DCA", (1,)),
                     MethodGrid("MDR", (1,)),
                     MethodGrid("RUCA", (1,),
                                tuple((float(r), 0.0)
                                      for r in (1, 2, 4, 8, 16)))),
            classifier=ClassifierSpec("KNN", 5), iterations=10,
            fraction=0.10, betas=(1.0,), seed=master_seed)
        by = {}
        for p in run_sweep(cfg, bundle):
            key = (p.method if p.method != "RUCA"
                   else f"RUCA{p.privacy_weights[0]:g}")
            by[key] = p
        utility_ok = by["DCA"].acc_u_mean >= by["MDR"].acc_u_mean
        privacy_ok = by["MDR"].acc_p_means[0] <= by["DCA"].acc_p_means[0]
        drop = by["RUCA1"].acc_p_means[0] - by["RUCA16"].acc_p_means[0]
        drops.append(drop)
        successes += utility_ok and privacy_ok and drop >= 0.03
    elapsed = time.perf_counter() - t0
    drop_text = " ".join(f"{d * 100:.1f}" for d in drops)
    report(8, successes >= 4 and elapsed < 600.0,
           f"{source}; {successes}/5 master seeds satisfied all three "
           f"directions (need >=4); marital drops [{drop_text}]pp "
           f"(need >=3); {elapsed:.0f}s (limit 600s)")


def test_criterion_09_performance_arithmetic():
    value = performance(0.8624, 0.5841, 1.0)
    gap = abs(value - 1.2783)
    report(9, gap <= 1e-12,
           f"performance(0.8624, 0.5841, 1.0) = {value!r}, "
           f"|gap| = {gap:.2e} (limit 1e-12)")


def test_criterion_10_sweep_rerun_byte_identical(tmp_path):
    """The whole sweep pipeline — CSV emission included — is a pure
    function of config and seed."""
    from privproj.cli import main

    bundle = tradeoff_bundle(seed=10, n_train=120, n_test=90, m=5)
    files = {}
    from privproj.dataio import save_dataset_csv, save_labels_csv
    for tag, data, util, priv in (
            ("train", bundle.train, bundle.train_utility,
             bundle.train_privacy[0]),
            ("test", bundle.test, bundle.test_utility,
             bundle.test_privacy[0])):
        files[f"{tag}_data"] = tmp_path / f"{tag}.csv"
        files[f"{tag}_u"] = tmp_path / f"{tag}.u.csv"
        files[f"{tag}_p"] = tmp_path / f"{tag}.p.csv"
        save_dataset_csv(data, files[f"{tag}_data"])
        save_labels_csv(util, files[f"{tag}_u"])
        save_labels_csv(priv, files[f"{tag}_p"])
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "methods": [{"method": "DCA", "k_values": [1, 2]},
                    {"method": "RUCA", "k_values": [1],
                     "weight_rows": [[1.0], [4.0]]}],
        "classifier": {"kind": "KNN", "k_neighbors": 3},
        "iterations": 3, "fraction": 0.5, "betas": [0.5, 1.0]}))
    outputs = []
    for run in ("a", "b"):
        out_dir = tmp_path / run
        code = main(["sweep", "--config", str(config),
                     "--train-data", str(files["train_data"]),
                     "--train-utility", str(files["train_u"]),
                     "--train-privacy", str(files["train_p"]),
                     "--test-data", str(files["test_data"]),
                     "--test-utility", str(files["test_u"]),
                     "--test-privacy", str(files["test_p"]),
                     "--seed", "77", "--out-dir", str(out_dir)])
        assert code == 0
        outputs.append((out_dir / "tradeoff.csv").read_bytes())
    report(10, outputs[0] == outputs[1],
           f"two sweep runs produced {'identical' if outputs[0] == outputs[1] else 'DIFFERENT'} "
           f"CSV bytes ({len(outputs[0])} bytes)")
