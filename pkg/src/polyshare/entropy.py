"""Joint distributions and their entropy vectors.

Entropies are in bits (log base 2) throughout.  The map from a distribution to
the vector of marginal entropies always lands inside the polymatroid cone, so
entropy_vector returns a validated Polymatroid.
"""

import json
from dataclasses import dataclass

import numpy as np

from .core import GroundSet, RankVector
from .polymatroid import Polymatroid, validate_polymatroid

SUM_TOL = 1e-9
MARGINAL_TOL = 1e-9


class MarginalMismatch(ValueError):
    """The two inputs disagree on their shared marginal."""


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Finite distribution given by outcome rows and their probabilities."""

    variables: GroundSet
    outcomes: np.ndarray
    probs: np.ndarray

    def __init__(self, variables: GroundSet, outcomes, probs):
        rows = np.asarray(outcomes, dtype=np.int64)
        p = np.asarray(probs, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != variables.n:
            raise ValueError(
                f"outcomes must be (rows, {variables.n}), got shape {rows.shape}"
            )
        if p.shape != (rows.shape[0],):
            raise ValueError("one probability per outcome row required")
        if np.any(p < 0):
            raise ValueError("probabilities must be non-negative")
        total = float(p.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if len({tuple(r) for r in rows.tolist()}) != rows.shape[0]:
            raise ValueError("duplicate outcome row")
        rows = rows.copy()
        rows.setflags(write=False)
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "outcomes", rows)
        object.__setattr__(self, "probs", p)

    @property
    def n_rows(self) -> int:
        return self.outcomes.shape[0]


def distribution_from_json(doc: dict) -> JointDistribution:
    for field in ("variables", "rows"):
        if field not in doc:
            raise ValueError(f"distribution file missing {field!r}")
    variables = GroundSet(doc["variables"])
    outcomes = [row["values"] for row in doc["rows"]]
    probs = [row["prob"] for row in doc["rows"]]
    return JointDistribution(variables, outcomes, probs)


def distribution_to_json(d: JointDistribution) -> dict:
    return {
        "variables": list(d.variables.labels),
        "rows": [
            {"values": [int(v) for v in row], "prob": float(p)}
            for row, p in zip(d.outcomes.tolist(), d.probs)
        ],
    }


def load_distribution(path) -> JointDistribution:
    with open(path) as fh:
        return distribution_from_json(json.load(fh))


def save_distribution(d: JointDistribution, path) -> None:
    with open(path, "w") as fh:
        json.dump(distribution_to_json(d), fh, indent=1)
        fh.write("\n")


def _columns(d: JointDistribution, mask: int) -> list[int]:
    return [i for i in range(d.variables.n) if mask >> i & 1]


def _aggregate(rows: np.ndarray, probs: np.ndarray):
    """Unique rows (lexicographic) with summed probabilities."""
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    summed = np.bincount(inverse, weights=probs, minlength=uniq.shape[0])
    return uniq, summed


def marginal(d: JointDistribution, A: int) -> JointDistribution:
    """Distribution of the variables in A, other coordinates summed out."""
    if A == 0:
        raise ValueError("marginal over the empty set is not defined")
    cols = _columns(d, A)
    uniq, summed = _aggregate(d.outcomes[:, cols], d.probs)
    return JointDistribution(GroundSet(d.variables.labels_of(A)), uniq, summed)


def _entropy_bits(probs: np.ndarray) -> float:
    p = probs[probs > 0]
    return float(-(p * np.log2(p)).sum())


def entropy_vector(d: JointDistribution) -> Polymatroid:
    """H of every marginal, as a float-mode polymatroid (always valid)."""
    n = d.variables.n
    values = np.zeros(1 << n, dtype=np.float64)
    for mask in range(1, 1 << n):
        _, summed = _aggregate(d.outcomes[:, _columns(d, mask)], d.probs)
        values[mask] = _entropy_bits(summed)
    return validate_polymatroid(RankVector(d.variables, values, "float"))


def conditional_product(d1: JointDistribution, d2: JointDistribution) -> JointDistribution:
    """Glue two distributions along their shared variables.

    The result is the maximum-entropy coupling with the given marginals: the
    two non-shared parts are conditionally independent given the overlap.
    Probability of a combined row is p1 * p2 / p_overlap, with 0/0 = 0.
    Raises MarginalMismatch when the inputs disagree on the overlap.
    """
    shared = [v for v in d1.variables if v in d2.variables]
    extra = [v for v in d2.variables if v not in d1.variables]
    out_vars = GroundSet(d1.variables.labels + tuple(extra))

    cols1 = [d1.variables.index(v) for v in shared]
    cols2 = [d2.variables.index(v) for v in shared]
    extra_cols = [d2.variables.index(v) for v in extra]

    overlap: dict[tuple, float] = {}
    for row, p in zip(d1.outcomes.tolist(), d1.probs):
        key = tuple(row[c] for c in cols1)
        overlap[key] = overlap.get(key, 0.0) + float(p)
    check: dict[tuple, float] = {}
    for row, p in zip(d2.outcomes.tolist(), d2.probs):
        key = tuple(row[c] for c in cols2)
        check[key] = check.get(key, 0.0) + float(p)
    for key in set(overlap) | set(check):
        gap = abs(overlap.get(key, 0.0) - check.get(key, 0.0))
        if gap > MARGINAL_TOL:
            raise MarginalMismatch(
                f"shared marginal differs at {dict(zip(shared, key))}: "
                f"{overlap.get(key, 0.0)} vs {check.get(key, 0.0)} (gap {gap:.3e})"
            )

    by_key: dict[tuple, list] = {}
    for row, p in zip(d2.outcomes.tolist(), d2.probs):
        key = tuple(row[c] for c in cols2)
        by_key.setdefault(key, []).append((row, float(p)))

    rows = []
    probs = []
    for row1, p1 in zip(d1.outcomes.tolist(), d1.probs):
        key = tuple(row1[c] for c in cols1)
        denom = overlap.get(key, 0.0)
        if denom == 0.0:
            continue
        for row2, p2 in by_key.get(key, []):
            rows.append(row1 + [row2[c] for c in extra_cols])
            probs.append(float(p1) * p2 / denom)
    return JointDistribution(out_vars, rows, probs)


def product_power(d: JointDistribution, n: int) -> Polymatroid:
    """Entropy vector of n independent copies: entropy scales by n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    base = entropy_vector(d)
    return validate_polymatroid(
        RankVector(base.ground, n * base.values, "float")
    )
