"""Ground sets, bitmask subsets, and rank vectors.

A ground set is an ordered tuple of distinct labels; subsets of it are plain
Python ints used as bitmasks, with bit ``i`` standing for the ``i``-th label.
A rank vector stores one value per subset, indexed directly by mask, in one of
two numeric modes: ``"int"`` (exact, int64) or ``"float"`` (binary64).  Dense
storage is capped at 20 elements; larger ground sets must go through the lazy
oracles in :mod:`polyshare.matroid`.
"""

import json
from dataclasses import dataclass, field

import numpy as np

MAX_DENSE_ELEMENTS = 20

MODES = ("int", "float")


class UnknownLabel(ValueError):
    """A label that does not occur in the ground set."""


class DuplicateLabel(ValueError):
    """A label repeated where distinct labels are required."""


class ModeError(ValueError):
    """Numeric modes mixed without an explicit conversion."""


class GroundSetMismatch(ValueError):
    """Operands defined over different ground sets."""


@dataclass(frozen=True)
class GroundSet:
    """Ordered labels with a fixed label-to-bit bijection."""

    labels: tuple[str, ...]

    def __init__(self, labels):
        object.__setattr__(self, "labels", tuple(labels))
        if not self.labels:
            raise ValueError("ground set must have at least one element")
        seen = set()
        for lbl in self.labels:
            if not isinstance(lbl, str) or not lbl:
                raise ValueError(f"labels must be non-empty strings, got {lbl!r}")
            if lbl in seen:
                raise DuplicateLabel(f"duplicate label {lbl!r}")
            seen.add(lbl)
        object.__setattr__(self, "_index", {l: i for i, l in enumerate(self.labels)})

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} not in ground set {self.labels}") from None

    def bit(self, label: str) -> int:
        return 1 << self.index(label)

    def mask_of(self, labels) -> int:
        """Mask with exactly the given labels set; duplicates are rejected."""
        mask = 0
        for lbl in labels:
            b = self.bit(lbl)
            if mask & b:
                raise DuplicateLabel(f"duplicate label {lbl!r}")
            mask |= b
        return mask

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(l for i, l in enumerate(self.labels) if mask >> i & 1)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


def subset_parse(ground: GroundSet, key) -> int:
    """Parse a subset key (comma-joined labels, or an iterable) into a mask."""
    if isinstance(key, str):
        key = [t for t in key.split(",") if t != ""] if key else []
    return ground.mask_of(key)


def subset_format(ground: GroundSet, mask: int) -> str:
    """Subset key for a mask: labels joined by "," in ground-set order."""
    if mask < 0 or mask > ground.full_mask:
        raise ValueError(f"mask {mask:#x} out of range for {ground.n} elements")
    return ",".join(ground.labels_of(mask))


def iter_masks_by_size(n: int):
    """All nonzero masks over n bits, smallest cardinality first."""
    by_size = [[] for _ in range(n + 1)]
    for m in range(1, 1 << n):
        by_size[m.bit_count()].append(m)
    for bucket in by_size[1:]:
        yield from bucket


@dataclass(frozen=True, eq=False)
class RankVector:
    """Dense set function on all subsets of a ground set.

    ``values[mask]`` holds the rank of the subset ``mask``; ``values[0]`` is
    the empty set and is always 0.  The array is read-only after construction.
    """

    ground: GroundSet
    values: np.ndarray = field(repr=False)
    mode: str = "float"

    def __init__(self, ground: GroundSet, values, mode: str = "float"):
        if mode not in MODES:
            raise ModeError(f"mode must be one of {MODES}, got {mode!r}")
        if ground.n > MAX_DENSE_ELEMENTS:
            raise ValueError(
                f"dense rank vectors are capped at {MAX_DENSE_ELEMENTS} elements "
                f"(got {ground.n}); use a lazy oracle instead"
            )
        arr = np.asarray(values)
        if arr.shape != (1 << ground.n,):
            raise ValueError(
                f"expected {1 << ground.n} values (one per subset), got shape {arr.shape}"
            )
        if mode == "int":
            cast = np.asarray(arr, dtype=np.int64)
            if not np.array_equal(cast, arr):
                raise ModeError("non-integer values in int mode")
            arr = cast
        else:
            arr = np.asarray(arr, dtype=np.float64)
        if arr[0] != 0:
            raise ValueError(f"rank of the empty set must be 0, got {arr[0]}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "mode", mode)

    @classmethod
    def from_ranks(cls, ground: GroundSet, ranks: dict, mode: str = "float") -> "RankVector":
        """Build from a {subset key: value} mapping covering every nonempty subset."""
        values = np.zeros(1 << ground.n, dtype=np.float64)
        seen = set()
        for key, val in ranks.items():
            mask = subset_parse(ground, key)
            if mask == 0:
                raise ValueError("rank of the empty set is implicit; drop the '' key")
            if mask in seen:
                raise ValueError(f"subset {key!r} given twice")
            seen.add(mask)
            values[mask] = val
        missing = [m for m in range(1, 1 << ground.n) if m not in seen]
        if missing:
            keys = ", ".join(subset_format(ground, m) for m in missing[:5])
            raise ValueError(f"{len(missing)} subset(s) missing, first: {keys}")
        return cls(ground, values, mode)

    def value(self, mask: int):
        """Rank of a subset as a Python number (int in int mode)."""
        v = self.values[mask]
        return int(v) if self.mode == "int" else float(v)

    def to_ranks(self) -> dict:
        """Ordered {subset key: value} dict, smallest subsets first."""
        out = {}
        for m in iter_masks_by_size(self.ground.n):
            out[subset_format(self.ground, m)] = self.value(m)
        return out

    def to_float(self) -> "RankVector":
        return RankVector(self.ground, np.asarray(self.values, dtype=np.float64), "float")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankVector):
            return NotImplemented
        return (
            self.ground.labels == other.ground.labels
            and self.mode == other.mode
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.ground.labels, self.mode, self.values.tobytes()))


def singleton_values(rank: RankVector) -> np.ndarray:
    return rank.values[[1 << i for i in range(rank.ground.n)]]


def mu(rank: RankVector, mask: int):
    """Additive measure: sum of singleton ranks over the subset."""
    total = sum(rank.value(1 << i) for i in range(rank.ground.n) if mask >> i & 1)
    return total if rank.mode == "int" else float(total)


def mu_vector(rank: RankVector) -> np.ndarray:
    """mu of every subset, indexed by mask."""
    n = rank.ground.n
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=rank.values.dtype)
    for i in range(n):
        out += np.where(masks >> i & 1, rank.values[1 << i], 0)
    return out


def rank_vector_to_json(rank: RankVector) -> dict:
    return {
        "ground": list(rank.ground.labels),
        "mode": rank.mode,
        "ranks": rank.to_ranks(),
    }


def rank_vector_from_json(doc: dict) -> RankVector:
    for field_name in ("ground", "mode", "ranks"):
        if field_name not in doc:
            raise ValueError(f"rank-vector file missing {field_name!r}")
    ground = GroundSet(doc["ground"])
    return RankVector.from_ranks(ground, doc["ranks"], doc["mode"])


def load_rank_vector(path) -> RankVector:
    with open(path) as fh:
        return rank_vector_from_json(json.load(fh))


def save_rank_vector(rank: RankVector, path) -> None:
    with open(path, "w") as fh:
        json.dump(rank_vector_to_json(rank), fh, indent=1)
        fh.write("\n")
