"""Access structures, matroid ports, realization, and the share-size ratio."""

import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from polyshare import (
    AccessStructure,
    GroundSet,
    GroundSetMismatch,
    Polymatroid,
    RankVector,
    ValidationError,
    dual,
    dual_structure,
    helgason_expand,
    important_bound_check,
    important_participants,
    is_connected,
    is_qualified,
    is_tight,
    linear_combine,
    matroid_port,
    minimal_qualified,
    realizes,
    sigma,
    threshold_structure,
    tighten,
    uniform_matroid,
    validate_polymatroid,
)
from polyshare.secret_sharing import (
    access_structure_from_json,
    access_structure_to_json,
    from_minimal,
    from_oracle,
    from_qualified_masks,
    load_access_structure,
    save_access_structure,
)
from polyshare.core import rank_vector_to_json

from generators import gf2_matroid, k4_matroid, pm, random_matroid, split_fully

U23 = uniform_matroid(2, ("a", "b", "c"))
BC = ("b", "c")


def all_masks(A):
    return range(A.participants.full_mask + 1)


class TestAccessStructure:
    def test_requires_exactly_one_representation(self):
        g = GroundSet(("p", "q"))
        with pytest.raises(ValueError, match="exactly one"):
            AccessStructure(g)
        with pytest.raises(ValueError, match="exactly one"):
            AccessStructure(g, qualified=np.ones(4, bool), oracle=lambda m: True)

    def test_empty_set_must_be_unqualified(self):
        g = GroundSet(("p", "q"))
        with pytest.raises(ValueError, match="empty set"):
            from_qualified_masks(g, [0b00, 0b01, 0b11])
        with pytest.raises(ValueError, match="empty set"):
            from_oracle(g, lambda m: True)

    def test_full_set_must_be_qualified(self):
        g = GroundSet(("p", "q"))
        with pytest.raises(ValueError, match="full participant set"):
            from_qualified_masks(g, [0b01])
        with pytest.raises(ValueError, match="full participant set"):
            from_oracle(g, lambda m: False)

    def test_upward_closure_enforced(self):
        g = GroundSet(("p", "q", "r"))
        # {p} qualified but {p,q} not
        q = np.zeros(8, bool)
        q[0b001] = True
        q[0b101] = True
        q[0b111] = True
        with pytest.raises(ValueError, match="not upward closed"):
            AccessStructure(g, qualified=q)

    def test_closure_message_names_the_culprit(self):
        g = GroundSet(("p", "q", "r"))
        q = np.zeros(8, bool)
        q[0b001] = True
        q[0b111] = True
        with pytest.raises(ValueError, match="adding 'q'|adding 'r'"):
            AccessStructure(g, qualified=q)

    def test_explicit_cap(self):
        labels = tuple(f"p{i}" for i in range(21))
        with pytest.raises(ValueError, match="capped at 20"):
            from_minimal(GroundSet(labels), [1])

    def test_oracle_side_skips_the_cap(self):
        labels = tuple(f"p{i}" for i in range(21))
        A = from_oracle(GroundSet(labels), lambda m: m.bit_count() >= 3)
        assert not A.is_explicit
        assert is_qualified(A, 0b111)
        assert not is_qualified(A, 0b011)

    def test_equality_is_explicit_only(self):
        t = threshold_structure(2, BC)
        assert t == threshold_structure(2, BC)
        assert t != threshold_structure(1, BC)
        assert t != threshold_structure(2, ("x", "y"))
        oracle = from_oracle(GroundSet(BC), lambda m: m.bit_count() >= 2)
        assert (t == oracle) is False  # NotImplemented on both sides

    def test_bad_qualified_shape(self):
        g = GroundSet(("p", "q"))
        with pytest.raises(ValueError, match="one flag per subset"):
            AccessStructure(g, qualified=np.ones(3, bool))


class TestThreshold:
    def test_two_of_two(self):
        A = threshold_structure(2, ("p1", "p2"))
        assert not is_qualified(A, 0b01)
        assert not is_qualified(A, 0b10)
        assert is_qualified(A, 0b11)

    def test_two_of_three_minimal_sets(self):
        A = threshold_structure(2, ("p", "q", "r"))
        assert minimal_qualified(A) == [0b011, 0b101, 0b110]

    def test_threshold_bounds(self):
        with pytest.raises(ValueError, match="1..3"):
            threshold_structure(0, ("p", "q", "r"))
        with pytest.raises(ValueError, match="1..3"):
            threshold_structure(4, ("p", "q", "r"))

    def test_mask_bounds_checked(self):
        A = threshold_structure(1, ("p", "q"))
        with pytest.raises(ValueError, match="outside"):
            is_qualified(A, 0b100)
        with pytest.raises(ValueError, match="outside"):
            is_qualified(A, -1)


class TestMinimalQualified:
    def test_closure_then_minimal_recovers_input(self):
        g = GroundSet(("p", "q", "r"))
        A = from_minimal(g, [0b001, 0b110])
        assert minimal_qualified(A) == [0b001, 0b110]
        # the closure really added the supersets
        assert is_qualified(A, 0b011)
        assert is_qualified(A, 0b111)
        assert not is_qualified(A, 0b010)

    def test_order_is_size_then_mask(self):
        g = GroundSet(("p", "q", "r"))
        A = from_minimal(g, [0b110, 0b101, 0b001])
        assert minimal_qualified(A) == [0b001, 0b110]  # 0b101 absorbed by 0b001

    def test_oracle_rejected(self):
        A = from_oracle(GroundSet(BC), lambda m: m.bit_count() >= 1)
        with pytest.raises(ValueError, match="cannot be enumerated"):
            minimal_qualified(A)


class TestDualStructure:
    def test_two_of_two_dualizes_to_one_of_two(self):
        assert dual_structure(threshold_structure(2, BC)) == threshold_structure(1, BC)

    def test_threshold_duality_brute_force(self):
        for n in range(1, 7):
            labels = tuple(f"p{i}" for i in range(n))
            for k in range(1, n + 1):
                got = dual_structure(threshold_structure(k, labels))
                assert got == threshold_structure(n - k + 1, labels), (n, k)

    def test_involution_on_explicit_structures(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            n = int(rng.integers(2, 6))
            g = GroundSet(tuple(f"p{i}" for i in range(n)))
            k = int(rng.integers(1, 4))
            mins = [int(m) for m in rng.integers(1, g.full_mask + 1, size=k)]
            A = from_minimal(g, mins)
            assert dual_structure(dual_structure(A)) == A

    def test_oracle_dual_matches_explicit_dual(self):
        g = GroundSet(("p", "q", "r"))
        explicit = threshold_structure(2, g.labels)
        oracle = from_oracle(g, lambda m: m.bit_count() >= 2)
        dual_oracle = dual_structure(oracle)
        dual_explicit = dual_structure(explicit)
        assert not dual_oracle.is_explicit
        for m in all_masks(explicit):
            assert is_qualified(dual_oracle, m) == is_qualified(dual_explicit, m)


class TestMatroidPort:
    def test_port_of_u23_is_two_of_two(self):
        assert matroid_port(U23, "a") == threshold_structure(2, BC)

    def test_port_is_secret_symmetric_for_uniform(self):
        assert matroid_port(U23, "b") == threshold_structure(2, ("a", "c"))

    def test_loop_secret_rejected(self):
        M = pm({"a": 0, "b": 1, "a,b": 1})
        with pytest.raises(ValueError, match="loop"):
            matroid_port(M, "a")

    def test_coloop_secret_leaves_full_set_unqualified(self):
        M = pm({"a": 1, "b": 1, "a,b": 2})
        with pytest.raises(ValueError, match="full participant set"):
            matroid_port(M, "a")

    def test_float_port_matches_integer_port(self):
        A = matroid_port(_float_u23(), "a")
        assert np.array_equal(A.qualified, matroid_port(U23, "a").qualified)

    def test_unknown_secret(self):
        with pytest.raises(Exception):
            matroid_port(U23, "zz")


def _float_u23():
    return validate_polymatroid(U23.rank.to_float())


@pytest.fixture(scope="module")
def port(tight_pm):
    E = helgason_expand(tight_pm)
    return E, matroid_port(E, "a_1")


class TestExpandedPort:
    """Port of the 175-atom expansion, checked against the direct
    minimisation over base subsets."""

    def min_formula(self, base, counts):
        g = base.ground
        best = None
        for A in range(g.full_mask + 1):
            outside = sum(c for i, c in enumerate(counts) if not A >> i & 1)
            v = base.value(A) + outside
            best = v if best is None else min(best, v)
        return best

    def mask_for(self, A, names):
        return A.participants.mask_of(names)

    def test_oracle_shape(self, port, tight_pm):
        E, A = port
        assert not A.is_explicit
        assert len(A.participants.labels) == 175 - 1
        assert "a_1" not in A.participants.labels
        assert A.participants.labels[0] == "a_2"

    def test_full_block_subsets_match_base_port(self, port, tight_pm):
        E, A = port
        base = tight_pm
        g = base.ground
        abit = g.bit("a")
        for mask in range(g.full_mask + 1):
            if mask & abit:
                continue
            names = []
            for label in g.labels_of(mask):
                size = base.rank_of(label)
                names.extend(f"{label}_{k}" for k in range(1, size + 1))
            want = base.value(mask | abit) == base.value(mask)
            assert is_qualified(A, self.mask_for(A, names)) == want, mask

    def test_partial_blocks_match_min_formula(self, port, tight_pm):
        E, A = port
        counts_cases = [
            {"a": 36, "b": 31},
            {"a": 36},
            {"b": 31},
            {"a": 10, "d": 38},
            {"b": 31, "c": 31, "d": 38, "e": 38},
            {"a": 1},
            {},
        ]
        g = tight_pm.ground
        for case in counts_cases:
            counts = [case.get(l, 0) for l in g.labels]
            with_secret = list(counts)
            with_secret[g.index("a")] += 1
            want = self.min_formula(tight_pm, with_secret) == self.min_formula(
                tight_pm, counts
            )
            names = []
            for label, c in case.items():
                start = 2 if label == "a" else 1
                names.extend(f"{label}_{k}" for k in range(start, start + c))
            assert is_qualified(A, self.mask_for(A, names)) == want, case

    def test_unknown_atom_rejected(self, tight_pm):
        E = helgason_expand(tight_pm)
        with pytest.raises(ValueError, match="not an element"):
            matroid_port(E, "zz_9")

    def test_dualized_expansion_has_a_port_too(self, tight_pm):
        E = helgason_expand(tight_pm, dualized=True)
        A = matroid_port(E, "a_1")
        assert is_qualified(A, A.participants.full_mask)
        assert not is_qualified(A, 0)


class TestRealizes:
    def test_u23_realizes_two_of_two(self):
        ok, witness = realizes(U23, threshold_structure(2, BC), "a")
        assert ok and witness is None

    def test_u23_fails_one_of_two_with_witness(self):
        ok, witness = realizes(U23, threshold_structure(1, BC), "a")
        assert not ok
        assert witness == 0b01  # {b} claimed qualified, but f(ab) > f(b)

    def test_half_information_realizes_nothing(self):
        M = pm({"p": 2, "s": 2, "p,s": 3})
        only_structure = threshold_structure(1, ("p",))
        ok, witness = realizes(M, only_structure, "s")
        assert not ok and witness == 0b1

    def test_degenerate_secret_rejected(self):
        M = pm({"p": 1, "s": 0, "p,s": 1})
        with pytest.raises(ValueError, match="non-trivial"):
            realizes(M, threshold_structure(1, ("p",)), "s")

    def test_participant_mismatch(self):
        with pytest.raises(GroundSetMismatch):
            realizes(U23, threshold_structure(2, ("x", "y")), "a")

    def test_scaled_float_copy_still_realizes(self):
        doubled = validate_polymatroid(linear_combine([(2.0, _float_u23())]))
        ok, witness = realizes(doubled, threshold_structure(2, BC), "a")
        assert ok and witness is None

    def test_tightening_preserves_realization(self):
        rng = np.random.default_rng(31)
        seen = 0
        while seen < 20:
            M, _ = random_matroid(rng, int(rng.integers(3, 7)))
            secret = M.ground.labels[0]
            try:
                A = matroid_port(M, secret)
            except ValueError:
                continue  # loop or coloop secret
            seen += 1
            assert realizes(M, A, secret)[0]
            assert realizes(tighten(M), A, secret)[0]

    def test_port_dual_commutes_on_matroids(self):
        # realization transfers to the dual: port(dual M) == dual(port M)
        rng = np.random.default_rng(47)
        seen = 0
        while seen < 20:
            M, _ = random_matroid(rng, int(rng.integers(3, 7)))
            secret = M.ground.labels[0]
            Md = dual(M)
            if M.rank_of(secret) == 0 or Md.rank_of(secret) == 0:
                continue
            try:
                A = matroid_port(M, secret)
                Ad = matroid_port(Md, secret)
            except ValueError:
                continue
            seen += 1
            assert Ad == dual_structure(A)
            assert realizes(Md, dual_structure(A), secret)[0]

    def test_oracle_structure_spot_checks(self):
        base = pm({"a": 2, "b": 2, "a,b": 3})
        E = helgason_expand(base)
        A = matroid_port(E, "a_1")
        dense = split_fully(base, ("a", "b"))
        ok, witness = realizes(dense, A, "a_1")
        assert ok and witness is None

    def test_oracle_structure_catches_wrong_polymatroid(self):
        base = pm({"a": 2, "b": 2, "a,b": 3})
        A = matroid_port(helgason_expand(base), "a_1")
        wrong = uniform_matroid(1, ("a_1", "a_2", "b_1", "b_2"))
        ok, witness = realizes(wrong, A, "a_1")
        assert not ok and witness is not None


class TestRealizationUniqueness:
    """With unit singleton ranks, only one integer polymatroid realizes the
    (2,2)-threshold structure on two participants."""

    def enumerate_unit_singleton(self):
        g = GroundSet(("a", "b", "c"))
        for ab, ac, bc in itertools.product((1, 2), repeat=3):
            for abc in (1, 2, 3):
                ranks = {
                    "a": 1, "b": 1, "c": 1,
                    "a,b": ab, "a,c": ac, "b,c": bc, "a,b,c": abc,
                }
                try:
                    yield validate_polymatroid(RankVector.from_ranks(g, ranks, "int"))
                except ValidationError:
                    continue

    def test_only_u23_realizes_the_pair_threshold(self):
        target = threshold_structure(2, BC)
        winners = [
            M for M in self.enumerate_unit_singleton()
            if realizes(M, target, "a")[0]
        ]
        assert len(winners) == 1
        assert np.array_equal(winners[0].values, U23.values)

    def test_gf2_change_of_basis_gives_the_same_matroid(self):
        vectors = [0b01, 0b10, 0b11]
        T = np.array([[1, 1], [0, 1]])

        def transform(v):
            coords = np.array([v >> i & 1 for i in range(2)])
            out = (T @ coords) % 2
            return int(sum(b << i for i, b in enumerate(out)))

        M1 = gf2_matroid(vectors, ("a", "b", "c"))
        M2 = gf2_matroid([transform(v) for v in vectors], ("a", "b", "c"))
        assert np.array_equal(M1.values, M2.values)
        assert realizes(M2, matroid_port(M1, "a"), "a")[0]


class TestImportantParticipants:
    def test_dictator_makes_partner_unimportant(self):
        g = GroundSet(("p1", "p2"))
        A = from_minimal(g, [0b01])
        important, connected = important_participants(A)
        assert important == {"p1"}
        assert not connected

    def test_threshold_is_connected(self):
        important, connected = important_participants(threshold_structure(2, ("p", "q", "r")))
        assert important == {"p", "q", "r"}
        assert connected

    def test_port_of_connected_matroid_is_connected(self):
        M = k4_matroid()
        assert is_connected(M)[0]
        secret = M.ground.labels[0]
        _, connected = important_participants(matroid_port(M, secret))
        assert connected

    def test_oracle_rejected(self):
        A = from_oracle(GroundSet(BC), lambda m: m.bit_count() >= 1)
        with pytest.raises(ValueError, match="out of scope"):
            important_participants(A)


class TestSigma:
    def test_ideal_threshold_ratio_is_one(self):
        value = sigma(U23, "a")
        assert isinstance(value, Fraction)
        assert value == 1

    def test_tight_fixture_ratio(self, tight_pm):
        assert sigma(tight_pm, "a") == Fraction(38, 37)
        assert sigma(tight_pm, "d") == 1
        assert sigma(tight_pm, "b") == Fraction(38, 31)

    def test_float_mode_gives_float_ratio(self, m_xi):
        value = sigma(m_xi, "a")
        assert isinstance(value, float)
        others = [m_xi.rank_of(l) for l in "bcde"]
        assert value == pytest.approx(max(others) / m_xi.rank_of("a"))

    def test_expansion_ratio_is_one_everywhere(self, tight_pm):
        E = helgason_expand(tight_pm)
        for atom in ("a_1", "b_5", "e_38"):
            assert sigma(E, atom) == 1
        Ed = helgason_expand(tight_pm, dualized=True)
        assert sigma(Ed, "c_7") == 1

    def test_rank_zero_secret_rejected(self):
        M = pm({"a": 0, "b": 1, "a,b": 1})
        with pytest.raises(ValueError, match="rank zero"):
            sigma(M, "a")

    def test_lonely_secret_rejected(self):
        M = validate_polymatroid(
            RankVector.from_ranks(GroundSet(("a",)), {"a": 1}, "int")
        )
        with pytest.raises(ValueError, match="no participants"):
            sigma(M, "a")

    def test_unknown_expansion_secret(self, tight_pm):
        E = helgason_expand(tight_pm)
        with pytest.raises(ValueError, match="not an element"):
            sigma(E, "zz_1")


class TestImportantBound:
    def test_ideal_port_margins_are_zero(self):
        A = matroid_port(U23, "a")
        report = important_bound_check(U23, A, "a")
        assert report.ok
        assert report.margins == {"b": 0, "c": 0}

    def test_report_serializes(self):
        report = important_bound_check(U23, matroid_port(U23, "a"), "a")
        doc = json.loads(json.dumps(report.as_dict()))
        assert doc == {"ok": True, "margins": {"b": 0, "c": 0}}

    def test_loop_participant_is_not_important(self):
        M = pm({"p": 1, "q": 0, "s": 1, "p,q": 1, "p,s": 1, "q,s": 1, "p,q,s": 1})
        A = matroid_port(M, "s")
        important, connected = important_participants(A)
        assert important == {"p"}
        assert not connected
        report = important_bound_check(M, A, "s")
        assert report.ok
        assert report.margins == {"p": 0}

    def test_under_provisioned_share_flagged(self):
        M = pm({"p": 1, "s": 2, "p,s": 3})
        report = important_bound_check(M, threshold_structure(1, ("p",)), "s")
        assert not report.ok
        assert report.margins == {"p": -1}

    def test_random_matroid_realizations_respect_the_bound(self):
        rng = np.random.default_rng(101)
        seen = 0
        while seen < 15:
            M, _ = random_matroid(rng, int(rng.integers(3, 7)))
            secret = M.ground.labels[0]
            try:
                A = matroid_port(M, secret)
            except ValueError:
                continue
            seen += 1
            assert important_bound_check(M, A, secret).ok


class TestJsonRoundTrips:
    def test_to_json_shape(self):
        doc = access_structure_to_json(threshold_structure(2, BC))
        assert doc == {"participants": ["b", "c"], "minimal_qualified": [["b", "c"]]}

    def test_save_load_round_trip(self, tmp_path):
        A = from_minimal(GroundSet(("p", "q", "r")), [0b001, 0b110])
        path = tmp_path / "structure.json"
        save_access_structure(A, path)
        assert load_access_structure(path) == A

    def test_missing_field_rejected(self):
        with pytest.raises(ValueError, match="minimal_qualified"):
            access_structure_from_json({"participants": ["p"]})

    def test_port_doc_with_matroid_file(self, tmp_path):
        with open(tmp_path / "u23.json", "w") as fh:
            json.dump(rank_vector_to_json(U23.rank), fh)
        doc = {"port": {"matroid_file": "u23.json", "secret": "a"}}
        A = access_structure_from_json(doc, base_dir=str(tmp_path))
        assert A == threshold_structure(2, BC)

    def test_port_doc_from_file_resolves_relative_paths(self, tmp_path):
        with open(tmp_path / "u23.json", "w") as fh:
            json.dump(rank_vector_to_json(U23.rank), fh)
        with open(tmp_path / "port.json", "w") as fh:
            json.dump({"port": {"matroid_file": "u23.json", "secret": "b"}}, fh)
        A = load_access_structure(tmp_path / "port.json")
        assert A == threshold_structure(2, ("a", "c"))

    def test_expanded_port_doc(self, tmp_path, tight_pm):
        with open(tmp_path / "tight.json", "w") as fh:
            json.dump(rank_vector_to_json(tight_pm.rank), fh)
        doc = {
            "port": {
                "expanded": {"base_file": "tight.json", "dualized": False},
                "secret": "a_1",
            }
        }
        A = access_structure_from_json(doc, base_dir=str(tmp_path))
        assert not A.is_explicit
        assert len(A.participants.labels) == 174
        direct = matroid_port(helgason_expand(tight_pm), "a_1")
        probe = A.participants.mask_of([f"b_{k}" for k in range(1, 32)])
        assert is_qualified(A, probe) == is_qualified(direct, probe)

    def test_dualized_expanded_port_doc(self, tmp_path, tight_pm):
        with open(tmp_path / "tight.json", "w") as fh:
            json.dump(rank_vector_to_json(tight_pm.rank), fh)
        doc = {
            "port": {
                "expanded": {"base_file": "tight.json", "dualized": True},
                "secret": "a_1",
            }
        }
        A = access_structure_from_json(doc, base_dir=str(tmp_path))
        direct = matroid_port(helgason_expand(tight_pm, dualized=True), "a_1")
        for probe in (0, A.participants.full_mask, 0b1011):
            assert is_qualified(A, probe) == is_qualified(direct, probe)
