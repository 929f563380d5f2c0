"""Shared generators for labeled synthetic datasets used across test modules."""

import numpy as np

from privproj.data import Dataset, LabelSet


def class_assignment(rng, n, c):
    """Random labels over n samples guaranteed to hit every class in 0..c-1."""
    labels = np.concatenate([np.arange(c), rng.integers(0, c, n - c)])
    rng.shuffle(labels)
    return labels


def separated_instance(seed, m=8, n=120, c_u=2, c_p=3, sep_u=6.0, sep_p=4.0,
                       noise=1.0):
    """Dataset whose utility and privacy labelings both have strong
    between-class structure: sample = utility-class mean + privacy-class
    mean + isotropic noise."""
    rng = np.random.default_rng(seed)
    u_labels = class_assignment(rng, n, c_u)
    p_labels = class_assignment(rng, n, c_p)
    u_means = sep_u * rng.standard_normal((m, c_u))
    p_means = sep_p * rng.standard_normal((m, c_p))
    x = u_means[:, u_labels] + p_means[:, p_labels] + noise * rng.standard_normal((m, n))
    return Dataset(x), LabelSet(u_labels, c_u), LabelSet(p_labels, c_p)
