"""End-to-end reproduction of the bundled reference construction.

Ten steps walk from the fixture distribution to the dualized 175-atom
expansion, comparing every stage against the shipped expected values.  Steps
run independently: a failure is recorded and the remaining steps still
execute, so a broken fixture yields a full report rather than a stack trace.
"""

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .core import rank_vector_from_json, subset_format, subset_parse
from .entropy import distribution_from_json, entropy_vector
from .inequalities import mmrv
from .matroid import block_collapse, expanded_mmrv, helgason_expand
from .polymatroid import (
    basis_r,
    dual,
    linear_combine,
    round_to_integer,
    tighten,
    validate_polymatroid,
)

MMRV_ENTROPY_EXPECTED = 0.108494
MMRV_ENTROPY_TOL = 1e-4
MMRV_DUAL_EXPECTED = -0.0715364
MMRV_DUAL_TOL = 1e-5
ROUNDING_TOL = 1e-3
LEFT_COLUMN_TOL = 1e-4
EXPANSION_SIZE = 175


def fixture_doc(name: str) -> dict:
    return json.loads(resources.files("polyshare.data").joinpath(name).read_text())


@dataclass(frozen=True)
class StepRecord:
    index: int
    name: str
    expected: str
    computed: str
    tolerance: str
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "note": self.note,
        }


@dataclass(frozen=True)
class ReproductionReport:
    steps: tuple[StepRecord, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "steps": [s.as_dict() for s in self.steps]}

    def format_table(self) -> str:
        lines = []
        for s in self.steps:
            mark = "PASS" if s.passed else "FAIL"
            line = f"[{s.index:2d}] {mark}  {s.name}: computed {s.computed}, expected {s.expected}"
            if s.tolerance:
                line += f" (tolerance {s.tolerance})"
            if s.note:
                line += f"\n          {s.note}"
            lines.append(line)
        lines.append("reproduction " + ("PASSED" if self.passed else "FAILED"))
        return "\n".join(lines)


class _Context:
    """Lazily built shared artifacts; a failed prerequisite fails its dependents."""

    def __init__(self):
        self._cache = {}

    def get(self, key: str):
        if key not in self._cache:
            try:
                self._cache[key] = ("ok", _BUILDERS[key](self))
            except Exception as exc:  # step records the failure, pipeline continues
                self._cache[key] = ("err", exc)
        status, value = self._cache[key]
        if status == "err":
            raise RuntimeError(f"prerequisite {key!r} failed: {value}") from value
        return value


def _build_combination(ctx):
    m_xi = ctx.get("m_xi")
    doc = fixture_doc("coefficients.json")
    terms = [(doc["entropy_scale"], m_xi)]
    for key, coeff in doc["terms"].items():
        terms.append((coeff, basis_r(m_xi.ground, subset_parse(m_xi.ground, key))))
    return linear_combine(terms)


_BUILDERS = {
    "dist": lambda ctx: distribution_from_json(fixture_doc("table1.json")),
    "m_xi": lambda ctx: entropy_vector(ctx.get("dist")),
    "combo": _build_combination,
    "middle": lambda ctx: validate_polymatroid(
        rank_vector_from_json(fixture_doc("table2_middle.json"))
    ),
    "tight_expected": lambda ctx: rank_vector_from_json(fixture_doc("table2_tight.json")),
    "left": lambda ctx: rank_vector_from_json(fixture_doc("table2_left.json")),
    "N": lambda ctx: tighten(ctx.get("middle")),
    "E": lambda ctx: helgason_expand(ctx.get("N")),
}


def _vector_match(got, want, ground):
    """None when equal, else a short description of the first mismatch."""
    diff = np.nonzero(got.values != want.values)[0]
    if diff.size == 0:
        return None
    m = int(diff[0])
    return (
        f"{diff.size} subset(s) differ, first {subset_format(ground, m)!r}: "
        f"{got.values[m]} vs {want.values[m]}"
    )


def _step_entropy_valid(ctx):
    m_xi = ctx.get("m_xi")  # entropy_vector validates on construction
    return f"valid polymatroid on {m_xi.ground.n} elements", True, ""


def _step_mmrv_entropy(ctx):
    value = mmrv(ctx.get("m_xi"))
    return f"{value:.7f}", abs(value - MMRV_ENTROPY_EXPECTED) <= MMRV_ENTROPY_TOL, ""


def _step_mmrv_dual(ctx):
    value = mmrv(dual(ctx.get("m_xi")))
    return f"{value:.8f}", abs(value - MMRV_DUAL_EXPECTED) <= MMRV_DUAL_TOL, ""


def _step_combination(ctx):
    combo = ctx.get("combo")
    middle = ctx.get("middle")
    rounded = round_to_integer(combo, ROUNDING_TOL)
    residual = float(np.abs(combo.values - rounded.values).max())
    mismatch = _vector_match(rounded, middle.rank, middle.ground)
    if mismatch:
        return f"integer vector differs: {mismatch}", False, ""
    return (
        "all 31 integers match the fixture",
        True,
        f"worst rounding residual {residual:.2e}",
    )


def _step_tighten(ctx):
    tight = ctx.get("N")
    expected = ctx.get("tight_expected")
    mismatch = _vector_match(tight.rank, expected, tight.ground)
    if mismatch:
        return mismatch, False, ""
    spot = ctx.get("middle").rank_of("a") - (
        ctx.get("middle").rank_of("a,b,c,d,e") - ctx.get("middle").rank_of("b,c,d,e")
    )
    return "all 31 integers match the fixture", spot == tight.rank_of("a"), ""


def _step_dual_mmrv(ctx):
    value = mmrv(dual(ctx.get("middle")))
    return str(value), value == -1, ""


def _step_expansion_size(ctx):
    E = ctx.get("E")
    sizes = ",".join(str(s) for s in E.block_sizes)
    return f"{E.n_elements} atoms (blocks {sizes})", E.n_elements == EXPANSION_SIZE, ""


def _step_block_recovery(ctx):
    E = ctx.get("E")
    recovered = block_collapse(E)
    mismatch = _vector_match(recovered.rank, ctx.get("N").rank, recovered.ground)
    if mismatch:
        return mismatch, False, ""
    return "all 31 block unions match the tight polymatroid", True, ""


def _step_dual_expansion_mmrv(ctx):
    value = expanded_mmrv(ctx.get("E").dual())
    return str(value), value == -1, ""


def _step_scaled_entropy(ctx):
    doc = fixture_doc("coefficients.json")
    scaled = linear_combine([(doc["entropy_scale"], ctx.get("m_xi"))])
    left = ctx.get("left")
    gap = float(np.abs(scaled.values - left.values).max())
    gap51 = float(np.abs(51.0 * np.asarray(ctx.get("m_xi").values) - left.values).max())
    note = (
        f"left column matches scale {doc['entropy_scale']}; the source table's "
        f"caption scale 51 is off by up to {gap51:.2f}"
    )
    return f"max gap {gap:.2e}", gap <= LEFT_COLUMN_TOL, note


_STEPS = [
    ("entropy-vector-valid", "valid polymatroid", "", _step_entropy_valid),
    ("mmrv-of-entropy-vector", f"{MMRV_ENTROPY_EXPECTED}", f"{MMRV_ENTROPY_TOL:g}", _step_mmrv_entropy),
    ("mmrv-of-dual", f"{MMRV_DUAL_EXPECTED}", f"{MMRV_DUAL_TOL:g}", _step_mmrv_dual),
    ("combination-rounds-to-integer-fixture", "table2_middle.json", f"residual {ROUNDING_TOL:g}", _step_combination),
    ("tightening-matches-fixture", "table2_tight.json", "exact", _step_tighten),
    ("integer-dual-mmrv", "-1", "exact", _step_dual_mmrv),
    ("expansion-atom-count", str(EXPANSION_SIZE), "exact", _step_expansion_size),
    ("expansion-recovers-base-on-blocks", "table2_tight.json", "exact", _step_block_recovery),
    ("dualized-expansion-mmrv", "-1", "exact", _step_dual_expansion_mmrv),
    ("scaled-entropy-vs-left-column", "table2_left.json", f"{LEFT_COLUMN_TOL:g} per entry", _step_scaled_entropy),
]


def run_reproduction(step: int | None = None) -> ReproductionReport:
    """Run all ten steps (or just one, 1-based) and collect the records."""
    if step is not None and not 1 <= step <= len(_STEPS):
        raise ValueError(f"step must be in 1..{len(_STEPS)}, got {step}")
    ctx = _Context()
    records = []
    for index, (name, expected, tolerance, fn) in enumerate(_STEPS, start=1):
        if step is not None and index != step:
            continue
        try:
            computed, passed, note = fn(ctx)
        except Exception as exc:
            computed, passed, note = "error", False, f"{type(exc).__name__}: {exc}"
        records.append(StepRecord(index, name, expected, computed, tolerance, passed, note))
    return ReproductionReport(tuple(records))
