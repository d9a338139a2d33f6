"""Scalar performance metrics and the statistical analyses built on them.

Success probability is the percentage of shots that return the hidden
string exactly.  Hellinger distance is taken over the full 2^n outcome
space with missing keys treated as zero probability, so disjoint point
masses reach the maximum value of 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .circuits import SecretString, _coerce_secret
from .simulator import CountsDistribution


@dataclass(frozen=True)
class MetricReport:
    """Per-experiment metric bundle for one (pattern, scenario) run."""

    success_probability: float
    hellinger: float
    hamming_error_histogram: dict[int, float]

    def to_dict(self) -> dict:
        return {
            "success_probability": self.success_probability,
            "hellinger": self.hellinger,
            "hamming_error_histogram": {str(k): v for k, v in sorted(self.hamming_error_histogram.items())},
        }


def success_probability(counts: CountsDistribution, secret: "SecretString | str") -> float:
    """Percentage of shots returning exactly the hidden string."""
    secret = _coerce_secret(secret)
    if counts.n_bits != len(secret):
        raise ValueError(
            f"counts are over {counts.n_bits}-bit strings but secret has {len(secret)} bits"
        )
    total = counts.total
    if total == 0:
        raise ValueError("counts are empty")
    return 100.0 * counts.counts.get(secret.bits, 0) / total


def hellinger_distance(ideal: Mapping[str, float], experimental: Mapping[str, float]) -> float:
    """(1/sqrt(2)) * l2 distance between square-root probability vectors.

    Distributions are compared over the union of their keys with implicit
    zeros elsewhere; 0 means identical, 1 means disjoint support.
    """
    for dist in (ideal, experimental):
        for key, p in dist.items():
            if p < 0.0:
                raise ValueError(f"negative probability {p} for outcome {key!r}")
    keys = set(ideal) | set(experimental)
    acc = 0.0
    for key in keys:
        diff = math.sqrt(ideal.get(key, 0.0)) - math.sqrt(experimental.get(key, 0.0))
        acc += diff * diff
    return math.sqrt(0.5 * acc)


def hamming_distance(a: str, b: str) -> int:
    if len(a) != len(b):
        raise ValueError("strings must have equal length")
    return sum(x != y for x, y in zip(a, b))


def hamming_error_profile(counts: CountsDistribution, secret: "SecretString | str") -> dict[int, float]:
    """Probability mass by Hamming distance from the hidden string."""
    secret = _coerce_secret(secret)
    if counts.n_bits != len(secret):
        raise ValueError(
            f"counts are over {counts.n_bits}-bit strings but secret has {len(secret)} bits"
        )
    total = counts.total
    if total == 0:
        raise ValueError("counts are empty")
    histogram: dict[int, float] = {}
    for key, value in counts.counts.items():
        d = hamming_distance(key, secret.bits)
        histogram[d] = histogram.get(d, 0.0) + value / total
    return dict(sorted(histogram.items()))


def compute_metrics(counts: CountsDistribution, secret: "SecretString | str") -> MetricReport:
    """Metric bundle against the ideal point-mass distribution at the secret."""
    secret = _coerce_secret(secret)
    ideal = {secret.bits: 1.0}
    return MetricReport(
        success_probability=success_probability(counts, secret),
        hellinger=hellinger_distance(ideal, counts.probabilities()),
        hamming_error_histogram=hamming_error_profile(counts, secret),
    )


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient; raises on zero variance."""
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1 or xs.size < 2:
        raise ValueError("inputs must be equal-length 1-d sequences of length >= 2")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined for zero-variance input")
    return float(dx @ dy / math.sqrt(sxx * syy))


def rank_scores(scores: Sequence[float], descending: bool = True) -> list[float]:
    """Ranks 1..k with ties receiving the average of their positions."""
    arr = np.asarray(scores, dtype=np.float64)
    order = -arr if descending else arr
    sorted_idx = np.argsort(order, kind="stable")
    ranks = np.empty(arr.size, dtype=np.float64)
    i = 0
    while i < arr.size:
        j = i
        while j + 1 < arr.size and order[sorted_idx[j + 1]] == order[sorted_idx[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for idx in sorted_idx[i : j + 1]:
            ranks[idx] = avg
        i = j + 1
    return ranks.tolist()


def kendalls_w(rankings: Sequence[Sequence[float]]) -> float:
    """Kendall's coefficient of concordance across judges, tie corrected.

    Rows are judges (devices), columns are the ranked items.  Identical
    rankings give 1; the expected value for independent random rankings
    is 1/m for m judges.
    """
    mat = np.asarray(rankings, dtype=np.float64)
    if mat.ndim != 2:
        raise ValueError("rankings must be a rectangular matrix of ranks")
    m, k = mat.shape
    if m < 2 or k < 2:
        raise ValueError("need at least 2 rankings of at least 2 items")
    column_sums = mat.sum(axis=0)
    s = float(((column_sums - column_sums.mean()) ** 2).sum())
    tie_term = 0.0
    for row in mat:
        _, counts = np.unique(row, return_counts=True)
        tie_term += float((counts**3 - counts).sum())
    denom = m**2 * (k**3 - k) - m * tie_term
    if denom <= 0.0:
        raise ValueError("degenerate rankings: every item tied in every ranking")
    return 12.0 * s / denom


def kendalls_w_pvalue(
    rankings: Sequence[Sequence[float]],
    n_permutations: int = 10000,
    seed: int = 0,
) -> float:
    """Permutation-test p-value for Kendall's W (independently shuffled rows)."""
    mat = np.asarray(rankings, dtype=np.float64)
    observed = kendalls_w(mat)
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(n_permutations):
        permuted = np.stack([rng.permutation(row) for row in mat])
        if kendalls_w(permuted) >= observed - 1e-12:
            hits += 1
    return (1 + hits) / (1 + n_permutations)


def performance_gap(emulation_p: float, hardware_p: float) -> float:
    """Emulation minus hardware success, in percentage points."""
    for name, value in (("emulation_p", emulation_p), ("hardware_p", hardware_p)):
        if not 0.0 <= value <= 100.0:
            raise ValueError(f"{name} must be in [0, 100], got {value}")
    return emulation_p - hardware_p
