"""Access structures, their duals, and matroid ports.

An access structure is the upward-closed family of participant subsets that
can recover the secret.  Small structures are stored explicitly as a bitset
over all subsets; port structures over expanded matroids (174 participants
for the bundled construction) are membership oracles answering one subset at
a time.
"""

import json
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import GroundSet, GroundSetMismatch
from .matroid import ExpandedMatroid, helgason_expand
from .polymatroid import Polymatroid, default_decision_tol, validate_polymatroid

MAX_EXPLICIT = 20


class AccessStructure:
    """Qualified-subset family over a participant ground set."""

    def __init__(self, participants: GroundSet, qualified=None, oracle=None):
        if (qualified is None) == (oracle is None):
            raise ValueError("provide exactly one of qualified array or oracle")
        self.participants = participants
        full = participants.full_mask
        if qualified is not None:
            if participants.n > MAX_EXPLICIT:
                raise ValueError(
                    f"explicit structures capped at {MAX_EXPLICIT} participants"
                )
            q = np.asarray(qualified, dtype=bool)
            if q.shape != (full + 1,):
                raise ValueError(f"need one flag per subset, got shape {q.shape}")
            if q[0]:
                raise ValueError("the empty set must not be qualified")
            if not q[full]:
                raise ValueError("the full participant set must be qualified")
            masks = np.arange(full + 1, dtype=np.int64)
            for i in range(participants.n):
                bit = 1 << i
                lower = masks[(masks & bit) == 0]
                bad = q[lower] & ~q[lower | bit]
                if np.any(bad):
                    worst = int(lower[np.nonzero(bad)[0][0]])
                    raise ValueError(
                        f"not upward closed: {participants.labels_of(worst)} qualified "
                        f"but adding {participants.labels[i]!r} loses qualification"
                    )
            q = q.copy()
            q.setflags(write=False)
            self.qualified = q
            self.oracle = None
        else:
            if oracle(0):
                raise ValueError("the empty set must not be qualified")
            if not oracle(full):
                raise ValueError("the full participant set must be qualified")
            self.qualified = None
            self.oracle = oracle

    @property
    def is_explicit(self) -> bool:
        return self.qualified is not None

    def __eq__(self, other):
        if not isinstance(other, AccessStructure):
            return NotImplemented
        if not (self.is_explicit and other.is_explicit):
            return NotImplemented
        return self.participants.labels == other.participants.labels and np.array_equal(
            self.qualified, other.qualified
        )

    def __hash__(self):
        return hash(self.participants.labels)


def from_qualified_masks(participants: GroundSet, masks) -> AccessStructure:
    q = np.zeros(1 << participants.n, dtype=bool)
    for m in masks:
        q[m] = True
    return AccessStructure(participants, qualified=q)


def from_minimal(participants: GroundSet, minimal_masks) -> AccessStructure:
    """Explicit structure as the upward closure of the given sets."""
    n = participants.n
    q = np.zeros(1 << n, dtype=bool)
    for m in minimal_masks:
        q[m] = True
    all_masks = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        upper = all_masks[(all_masks & bit) != 0]
        q[upper] |= q[upper ^ bit]
    return AccessStructure(participants, qualified=q)


def from_oracle(participants: GroundSet, fn) -> AccessStructure:
    return AccessStructure(participants, oracle=fn)


def threshold_structure(k: int, labels) -> AccessStructure:
    """Qualified iff at least k participants are present."""
    participants = GroundSet(labels)
    n = participants.n
    if not 1 <= k <= n:
        raise ValueError(f"threshold must be in 1..{n}, got {k}")
    sizes = np.array([m.bit_count() for m in range(1 << n)])
    return AccessStructure(participants, qualified=sizes >= k)


def is_qualified(A: AccessStructure, S: int) -> bool:
    if S < 0 or S > A.participants.full_mask:
        raise ValueError(f"mask {S:#x} outside the participant set")
    if A.is_explicit:
        return bool(A.qualified[S])
    return bool(A.oracle(S))


def dual_structure(A: AccessStructure) -> AccessStructure:
    """Qualified in the dual iff the complement is unqualified."""
    full = A.participants.full_mask
    if A.is_explicit:
        masks = np.arange(full + 1, dtype=np.int64)
        return AccessStructure(A.participants, qualified=~A.qualified[full ^ masks])
    inner = A.oracle
    return AccessStructure(A.participants, oracle=lambda m: not inner(full ^ m))


def minimal_qualified(A: AccessStructure) -> list[int]:
    """Inclusion-minimal qualified sets, ordered by size then mask."""
    if not A.is_explicit:
        raise ValueError("oracle structures cannot be enumerated")
    n = A.participants.n
    masks = np.arange(1 << n, dtype=np.int64)
    minimal = A.qualified.copy()
    for i in range(n):
        bit = 1 << i
        has = (masks & bit) != 0
        minimal[has] &= ~A.qualified[masks[has] ^ bit]
    out = [int(m) for m in masks[minimal]]
    out.sort(key=lambda m: (m.bit_count(), m))
    return out


def important_participants(A: AccessStructure):
    """(important labels, connected flag); i is important when joining some
    unqualified set makes it qualified.  Connected means everyone matters."""
    if not A.is_explicit:
        raise ValueError("oracle structures are out of scope for global scans")
    n = A.participants.n
    masks = np.arange(1 << n, dtype=np.int64)
    q = A.qualified
    important = set()
    for i in range(n):
        bit = 1 << i
        lower = masks[(masks & bit) == 0]
        if np.any(~q[lower] & q[lower | bit]):
            important.add(A.participants.labels[i])
    return important, len(important) == n


def _drop_element(ground: GroundSet, label: str):
    """Participant ground set and a mask translator for ground minus label."""
    k = ground.index(label)
    participants = GroundSet(ground.labels[:k] + ground.labels[k + 1 :])
    low = (1 << k) - 1

    def translate(mask: int) -> int:
        return (mask & low) | (mask >> k) << (k + 1)

    return participants, translate


def matroid_port(M, secret: str, tolerance=None) -> AccessStructure:
    """Access structure {S : f(secret + S) = f(S)}.

    Dense polymatroids give an explicit structure; an ExpandedMatroid gives a
    membership oracle over its atom names.  The secret must not be a loop, and
    a secret with private information leaves the full set unqualified, which
    is rejected by the structure invariants.
    """
    if isinstance(M, ExpandedMatroid):
        if secret not in M._block_of:
            raise ValueError(f"{secret!r} is not an element of the expansion")
        if M.rank([secret]) == 0:
            raise ValueError(f"secret {secret!r} is a loop")
        sblock = M._block_of[secret]
        names = tuple(n for n in M.element_names if n != secret)
        participants = GroundSet(names)
        block_masks = [0] * M.base.ground.n
        for i, name in enumerate(names):
            block_masks[M._block_of[name]] |= 1 << i

        def member(mask: int) -> bool:
            counts = [(mask & bm).bit_count() for bm in block_masks]
            plain = M.rank_of_counts(counts)
            counts[sblock] += 1
            return M.rank_of_counts(counts) == plain

        return AccessStructure(participants, oracle=member)

    tol = default_decision_tol(M.mode) if tolerance is None else tolerance
    fs = M.rank_of(secret)
    if fs <= tol:
        raise ValueError(f"secret {secret!r} is a loop")
    participants, translate = _drop_element(M.ground, secret)
    sbit = M.ground.bit(secret)
    q = np.zeros(1 << participants.n, dtype=bool)
    for S in range(1 << participants.n):
        base = translate(S)
        q[S] = abs(M.value(base | sbit) - M.value(base)) <= tol
    return AccessStructure(participants, qualified=q)


def realizes(M: Polymatroid, A: AccessStructure, secret: str, tolerance=None, samples: int = 64):
    """Does M with this secret realize A?  (ok, counterexample mask or None).

    Qualified sets must satisfy f(sS) = f(S); unqualified sets must satisfy
    f(sS) = f(S) + f(s).  Explicit structures are scanned in full; oracle
    structures are spot-checked on structured and seeded random subsets.
    """
    tol = default_decision_tol(M.mode) if tolerance is None else tolerance
    fs = M.rank_of(secret)
    if fs <= tol:
        raise ValueError(f"secret {secret!r} has rank {fs}; the secret must be non-trivial")
    participants, translate = _drop_element(M.ground, secret)
    if participants.labels != A.participants.labels:
        raise GroundSetMismatch(
            f"structure participants {A.participants.labels} do not match "
            f"ground set minus secret {participants.labels}"
        )
    sbit = M.ground.bit(secret)

    def violates(S: int) -> bool:
        base = translate(S)
        gap = M.value(base | sbit) - M.value(base)
        if is_qualified(A, S):
            return abs(gap) > tol
        return abs(gap - fs) > tol

    full = participants.full_mask
    if A.is_explicit:
        candidates = range(full + 1)
    else:
        fixed = [0, full]
        fixed += [1 << i for i in range(participants.n)]
        fixed += [full ^ (1 << i) for i in range(participants.n)]
        rng = np.random.default_rng(20240817)
        sampled = [int(x) for x in rng.integers(0, full + 1, size=samples)]
        candidates = dict.fromkeys(fixed + sampled)
    for S in candidates:
        if violates(S):
            return False, S
    return True, None


def sigma(M, secret: str):
    """Largest share-to-secret rank ratio over the participants."""
    if isinstance(M, ExpandedMatroid):
        if secret not in M._block_of:
            raise ValueError(f"{secret!r} is not an element of the expansion")
        n = M.base.ground.n

        def atom_rank(block: int) -> int:
            counts = [0] * n
            counts[block] = 1
            return M.rank_of_counts(counts)

        sblock = M._block_of[secret]
        fs = atom_rank(sblock)
        if fs == 0:
            raise ValueError(f"secret {secret!r} has rank zero")
        tops = [
            atom_rank(i)
            for i, size in enumerate(M.block_sizes)
            if size > 0 and not (i == sblock and size == 1)
        ]
        if not tops:
            raise ValueError("no participants besides the secret")
        return Fraction(max(tops), fs)

    fs = M.rank_of(secret)
    if fs == 0:
        raise ValueError(f"secret {secret!r} has rank zero")
    others = [M.value(1 << i) for i in range(M.ground.n) if M.ground.labels[i] != secret]
    if not others:
        raise ValueError("no participants besides the secret")
    top = max(others)
    if M.mode == "int":
        return Fraction(int(top), int(fs))
    return float(top / fs)


@dataclass(frozen=True)
class ImportantBoundReport:
    ok: bool
    margins: dict

    def as_dict(self) -> dict:
        return {"ok": self.ok, "margins": dict(self.margins)}


def important_bound_check(M: Polymatroid, A: AccessStructure, secret: str, tolerance=None) -> ImportantBoundReport:
    """Margins f(i) - f(secret) for every important participant; all must be
    non-negative when M realizes A."""
    tol = default_decision_tol(M.mode) if tolerance is None else tolerance
    fs = M.rank_of(secret)
    important, _ = important_participants(A)
    margins = {}
    for label in sorted(important, key=A.participants.index):
        margins[label] = M.rank_of(label) - fs
    ok = all(m >= -tol for m in margins.values())
    return ImportantBoundReport(ok, margins)


def access_structure_to_json(A: AccessStructure) -> dict:
    return {
        "participants": list(A.participants.labels),
        "minimal_qualified": [
            list(A.participants.labels_of(m)) for m in minimal_qualified(A)
        ],
    }


def _port_from_doc(doc: dict, base_dir: str) -> AccessStructure:
    from .core import load_rank_vector

    spec = doc["port"]
    secret = spec["secret"]
    if "matroid_file" in spec:
        path = os.path.join(base_dir, spec["matroid_file"])
        pm = validate_polymatroid(load_rank_vector(path))
        return matroid_port(pm, secret)
    if "expanded" in spec:
        exp = spec["expanded"]
        path = os.path.join(base_dir, exp["base_file"])
        base = validate_polymatroid(load_rank_vector(path))
        E = helgason_expand(base, dualized=bool(exp.get("dualized", False)))
        return matroid_port(E, secret)
    raise ValueError("port spec needs either 'matroid_file' or 'expanded'")


def access_structure_from_json(doc: dict, base_dir: str = ".") -> AccessStructure:
    if "port" in doc:
        return _port_from_doc(doc, base_dir)
    for field in ("participants", "minimal_qualified"):
        if field not in doc:
            raise ValueError(f"access-structure file missing {field!r}")
    participants = GroundSet(doc["participants"])
    masks = [participants.mask_of(group) for group in doc["minimal_qualified"]]
    return from_minimal(participants, masks)


def load_access_structure(path) -> AccessStructure:
    with open(path) as fh:
        doc = json.load(fh)
    return access_structure_from_json(doc, os.path.dirname(os.path.abspath(path)))


def save_access_structure(A: AccessStructure, path) -> None:
    with open(path, "w") as fh:
        json.dump(access_structure_to_json(A), fh, indent=1)
        fh.write("\n")
