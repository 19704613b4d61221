"""Polymatroid algebra on dense rank vectors.

Validation runs the elemental inequalities (enough to imply monotonicity and
submodularity in full), so it costs O(n^2 * 2^n) instead of O(4^n).  Every
operation that returns a Polymatroid validates its result; a bug upstream
surfaces as a ValidationError here rather than as silent garbage downstream.
"""

from dataclasses import dataclass

import numpy as np

from .core import (
    GroundSet,
    GroundSetMismatch,
    ModeError,
    RankVector,
    mu,
    mu_vector,
    subset_format,
    subset_parse,
)

VALIDATION_TOL = 1e-9
DECISION_TOL = 1e-6


def default_validation_tol(mode: str):
    return 0 if mode == "int" else VALIDATION_TOL


def default_decision_tol(mode: str):
    return 0 if mode == "int" else DECISION_TOL


@dataclass(frozen=True)
class Violation:
    """One failed elemental inequality.

    kind "monotone": f(M) >= f(M - i), elements = (i,), subset = M - i,
    lhs = f(M), rhs = f(M - i).
    kind "submodular": f(iA) + f(jA) >= f(ijA) + f(A), elements = (i, j),
    subset = A, lhs and rhs the two sides.
    """

    kind: str
    elements: tuple[str, ...]
    subset: str
    lhs: float
    rhs: float

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "elements": list(self.elements),
            "subset": self.subset,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


class ValidationError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0]
        super().__init__(
            f"{len(self.violations)} elemental inequality violation(s), "
            f"first: {first.kind} at elements={first.elements} subset={first.subset!r} "
            f"({first.lhs} < {first.rhs})"
        )


class ResidualTooLarge(ValueError):
    def __init__(self, subset: str, value: float, residual: float, tol: float):
        self.subset = subset
        self.value = value
        self.residual = residual
        super().__init__(
            f"value {value} at subset {subset!r} is {residual:.3e} from an integer "
            f"(allowed {tol:.3e})"
        )


@dataclass(frozen=True)
class Polymatroid:
    """A rank vector that has passed validate_polymatroid."""

    rank: RankVector

    @property
    def ground(self) -> GroundSet:
        return self.rank.ground

    @property
    def mode(self) -> str:
        return self.rank.mode

    @property
    def values(self) -> np.ndarray:
        return self.rank.values

    def value(self, mask: int):
        return self.rank.value(mask)

    def rank_of(self, key):
        """Rank of a subset given as a key string, label iterable, or mask."""
        mask = key if isinstance(key, int) else subset_parse(self.ground, key)
        return self.rank.value(mask)


def check_polymatroid(rank: RankVector, tolerance=None) -> list[Violation]:
    """Every violated elemental inequality, empty list when rank is valid."""
    tol = default_validation_tol(rank.mode) if tolerance is None else tolerance
    ground = rank.ground
    n = ground.n
    full = ground.full_mask
    vals = rank.values
    violations = []
    for i in range(n):
        drop = full ^ (1 << i)
        if vals[full] - vals[drop] < -tol:
            violations.append(
                Violation(
                    "monotone",
                    (ground.labels[i],),
                    subset_format(ground, drop),
                    rank.value(full),
                    rank.value(drop),
                )
            )
    masks = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        bi = 1 << i
        for j in range(i + 1, n):
            bj = 1 << j
            sub = masks[(masks & (bi | bj)) == 0]
            gap = vals[sub | bi] + vals[sub | bj] - vals[sub | bi | bj] - vals[sub]
            for k in np.nonzero(gap < -tol)[0]:
                a = int(sub[k])
                violations.append(
                    Violation(
                        "submodular",
                        (ground.labels[i], ground.labels[j]),
                        subset_format(ground, a),
                        rank.value(a | bi) + rank.value(a | bj),
                        rank.value(a | bi | bj) + rank.value(a),
                    )
                )
    return violations


def validate_polymatroid(rank: RankVector, tolerance=None) -> Polymatroid:
    """Gate a rank vector into a Polymatroid, or raise ValidationError."""
    violations = check_polymatroid(rank, tolerance)
    if violations:
        raise ValidationError(violations)
    return Polymatroid(rank)


def dual(M: Polymatroid) -> Polymatroid:
    """Dual polymatroid: A maps to f(M-A) + mu(A) - f(M).  Always tight."""
    rank = M.rank
    full = rank.ground.full_mask
    masks = np.arange(full + 1)
    out = rank.values[full ^ masks] + mu_vector(rank) - rank.values[full]
    return validate_polymatroid(RankVector(rank.ground, out, rank.mode))


def tighten(M: Polymatroid) -> Polymatroid:
    """Drop each element's private information: f(A) - sum over i in A of
    (f(M) - f(M-i)).  Order-independent, hence computed in one pass."""
    rank = M.rank
    n = rank.ground.n
    full = rank.ground.full_mask
    vals = rank.values
    masks = np.arange(full + 1, dtype=np.int64)
    penalty = np.zeros(full + 1, dtype=vals.dtype)
    for i in range(n):
        delta = vals[full] - vals[full ^ (1 << i)]
        penalty += np.where(masks >> i & 1, delta, 0)
    return validate_polymatroid(RankVector(rank.ground, vals - penalty, rank.mode))


def is_tight(M: Polymatroid, tolerance=None) -> bool:
    tol = default_decision_tol(M.mode) if tolerance is None else tolerance
    full = M.ground.full_mask
    return all(
        abs(M.values[full] - M.values[full ^ (1 << i)]) <= tol
        for i in range(M.ground.n)
    )


def is_connected(M: Polymatroid, tolerance=None):
    """(True, None), or (False, (A, B)) for the first proper bipartition with
    f(A) + f(B) = f(M) within tolerance."""
    tol = default_decision_tol(M.mode) if tolerance is None else tolerance
    n = M.ground.n
    if n == 1:
        return True, None
    full = M.ground.full_mask
    vals = M.values
    halves = np.arange(1, full, 2)  # bit 0 fixed in A, so each split appears once
    gap = vals[halves] + vals[full ^ halves] - vals[full]
    hits = np.nonzero(gap <= tol)[0]
    if hits.size:
        a = int(halves[hits[0]])
        return False, (a, full ^ a)
    return True, None


def is_independent_set(M: Polymatroid, A: int, tolerance=None) -> bool:
    """True when f(A) equals the sum of its singleton ranks."""
    tol = default_decision_tol(M.mode) if tolerance is None else tolerance
    return abs(M.value(A) - mu(M.rank, A)) <= tol


@dataclass(frozen=True)
class FactorMap:
    """Surjective element map used to collapse blocks of a ground set."""

    source: GroundSet
    target: GroundSet
    block: dict

    def __post_init__(self):
        mapped = set(self.block)
        if mapped != set(self.source.labels):
            missing = set(self.source.labels) - mapped
            extra = mapped - set(self.source.labels)
            raise ValueError(f"map domain mismatch: missing {missing}, extra {extra}")
        hit = set()
        for src, tgt in self.block.items():
            self.target.index(tgt)
            hit.add(tgt)
        if hit != set(self.target.labels):
            raise ValueError(f"map not surjective: {set(self.target.labels) - hit} never hit")

    def preimage(self, target_mask: int) -> int:
        """Source mask holding every element mapped into target_mask."""
        out = 0
        for src, tgt in self.block.items():
            if target_mask >> self.target.index(tgt) & 1:
                out |= self.source.bit(src)
        return out


def factor(M: Polymatroid, fmap: FactorMap) -> Polymatroid:
    """Collapse M along fmap: rank of a target subset is the rank of the union
    of its preimage blocks."""
    if fmap.source.labels != M.ground.labels:
        raise GroundSetMismatch(
            f"map source {fmap.source.labels} != polymatroid ground {M.ground.labels}"
        )
    size = 1 << fmap.target.n
    out = np.empty(size, dtype=M.values.dtype)
    for t in range(size):
        out[t] = M.values[fmap.preimage(t)]
    return validate_polymatroid(RankVector(fmap.target, out, M.mode))


def _require_mode_value(mode: str, alpha, name: str):
    if alpha < 0:
        raise ValueError(f"{name} must be >= 0, got {alpha}")
    if mode == "int":
        if float(alpha) != int(alpha):
            raise ModeError(f"{name}={alpha} is not an integer; convert to float mode first")
        return int(alpha)
    return float(alpha)


def principal_extension(M: Polymatroid, a: str, alpha, new_label: str) -> Polymatroid:
    """Adjoin a new element below a: rank of (new + A) is min(f(A) + alpha, f(aA))."""
    alpha = _require_mode_value(M.mode, alpha, "alpha")
    ground = M.ground
    abit = ground.bit(a)
    new_ground = GroundSet(ground.labels + (new_label,))
    old = M.values
    size_old = old.shape[0]
    out = np.empty(2 * size_old, dtype=old.dtype)
    out[:size_old] = old
    masks = np.arange(size_old)
    out[size_old:] = np.minimum(old + alpha, old[masks | abit])
    return validate_polymatroid(RankVector(new_ground, out, M.mode))


def split_atom(M: Polymatroid, a: str, alpha1, alpha2, labels) -> Polymatroid:
    """Replace a by two fresh elements of ranks alpha1, alpha2 summing to f(a).

    For A not containing a the new ranks are h(A); h(A)+alpha_i capped by h(aA)
    for one new element; h(aA) for both together.  Collapsing the pair back via
    factor recovers M.
    """
    l1, l2 = labels
    ground = M.ground
    k = ground.index(a)
    abit = 1 << k
    ha = M.value(abit)
    a1 = _require_mode_value(M.mode, alpha1, "alpha1")
    a2 = _require_mode_value(M.mode, alpha2, "alpha2")
    tol = 0 if M.mode == "int" else VALIDATION_TOL
    if abs((a1 + a2) - ha) > tol:
        raise ValueError(f"alpha1 + alpha2 = {a1 + a2} but f({a}) = {ha}")
    new_ground = GroundSet(ground.labels[:k] + (l1, l2) + ground.labels[k + 1 :])
    n = ground.n
    vals = M.values
    masks = np.arange(1 << n, dtype=np.int64)
    rest = masks[(masks & abit) == 0]
    low = rest & (abit - 1)
    base = low | (rest >> (k + 1)) << (k + 2)  # old bits above a shift past both atoms
    b1 = 1 << k
    b2 = 1 << (k + 1)
    h_plain = vals[rest]
    h_with = vals[rest | abit]
    out = np.empty(1 << (n + 1), dtype=vals.dtype)
    out[base] = h_plain
    out[base | b1] = np.minimum(h_plain + a1, h_with)
    out[base | b2] = np.minimum(h_plain + a2, h_with)
    out[base | b1 | b2] = h_with
    return validate_polymatroid(RankVector(new_ground, out, M.mode))


def collapse_pair(M: Polymatroid, l1: str, l2: str, label: str) -> Polymatroid:
    """Factor map undoing split_atom: merge l1, l2 back into one element."""
    src = M.ground
    i = src.index(l1)
    j = src.index(l2)
    if j != i + 1:
        raise ValueError(f"{l1!r}, {l2!r} must be adjacent in the ground set")
    tgt = GroundSet(src.labels[:i] + (label,) + src.labels[j + 1 :])
    block = {l: l for l in src.labels if l not in (l1, l2)}
    block[l1] = label
    block[l2] = label
    return factor(M, FactorMap(src, tgt, block))


def basis_r(ground: GroundSet, A: int) -> Polymatroid:
    """Indicator polymatroid of hitting A: rank 1 on subsets meeting A, else 0."""
    if A == 0:
        raise ValueError("basis_r needs a non-empty subset")
    masks = np.arange(1 << ground.n)
    vals = ((masks & A) != 0).astype(np.int64)
    return validate_polymatroid(RankVector(ground, vals, "int"))


def linear_combine(terms) -> RankVector:
    """Pointwise sum of coefficient * polymatroid, in input order, float mode."""
    terms = list(terms)
    if not terms:
        raise ValueError("need at least one term")
    ground = terms[0][1].ground
    out = np.zeros(1 << ground.n, dtype=np.float64)
    for coeff, pm in terms:
        if coeff < 0:
            raise ValueError(f"coefficients must be >= 0, got {coeff}")
        if pm.ground.labels != ground.labels:
            raise GroundSetMismatch(
                f"term ground {pm.ground.labels} != first term's {ground.labels}"
            )
        out += float(coeff) * np.asarray(pm.values, dtype=np.float64)
    return RankVector(ground, out, "float")


def round_to_integer(rank: RankVector, residual_tol: float = 1e-3) -> RankVector:
    """Snap a float vector onto the integers and validate it exactly.

    Raises ResidualTooLarge when any value sits further than residual_tol from
    an integer, naming the worst subset.
    """
    vals = np.asarray(rank.values, dtype=np.float64)
    rounded = np.rint(vals)
    resid = np.abs(vals - rounded)
    worst = int(np.argmax(resid))
    if resid[worst] > residual_tol:
        raise ResidualTooLarge(
            subset_format(rank.ground, worst), float(vals[worst]), float(resid[worst]), residual_tol
        )
    out = RankVector(rank.ground, rounded.astype(np.int64), "int")
    validate_polymatroid(out)
    return out


def uniform_matroid(k: int, labels) -> Polymatroid:
    """Rank min(|A|, k) on the given labels, integer mode."""
    ground = GroundSet(labels)
    masks = np.arange(1 << ground.n)
    sizes = np.array([int(m).bit_count() for m in masks], dtype=np.int64)
    return validate_polymatroid(RankVector(ground, np.minimum(sizes, k), "int"))
