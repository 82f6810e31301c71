import itertools
import random

import pytest

from cylab.structures import (
    ConsequenceReport,
    CoredStructure,
    SimSignature,
    Structure,
    StructureFamily,
    all_tuples,
    canonical_strong,
    consequence_over,
    core_bijection_isomorphism,
    core_preserving_maps,
    definable_set,
    enumerate_signatures,
    evaluate,
    find_automorphism,
    generated_substructure,
    is_automorphism,
    kernel,
    load_structure,
    save_structure,
    signature_members,
    sim_closure,
    sim_signature,
    structure_from_json,
    structure_to_json,
    validate_cored_structure,
)
from cylab.syntax import Vocabulary, parse_formula

PQ = Vocabulary((("P", 1), ("Q", 1)), 3)


@pytest.fixture(scope="module")
def canonical():
    return canonical_strong(3, 3, 3)


class TestKernel:
    def test_constant(self):
        assert kernel((4, 4, 4)) == ((0, 1, 2),)

    def test_mixed(self):
        assert kernel((0, 3, 0)) == ((0, 2), (1,))

    def test_injective(self):
        assert kernel((0, 1, 2)) == ((0,), (1,), (2,))


class TestSignatures:
    def test_basic(self):
        sig = sim_signature((0, 3), {0, 1, 2})
        assert sig.kernel == ((0,), (1,))
        assert sig.core_flags == (True, False)

    def test_equivalent_pair(self):
        core = {0, 1, 2}
        assert sim_signature((0, 3), core) == sim_signature((1, 4), core)

    def test_repeated_entry(self):
        sig = sim_signature((0, 0, 5), {0, 1, 2})
        assert sig.kernel == ((0, 1), (2,))
        assert sig.core_flags == (True, False)

    def test_counts(self):
        assert len(enumerate_signatures(1)) == 2
        assert len(enumerate_signatures(2)) == 6
        assert len(enumerate_signatures(3)) == 22

    def test_count_oracle(self):
        # brute force: group actual tuples of a large-enough instance
        core = frozenset(range(3))
        for k in (1, 2, 3):
            grouped = {sim_signature(t, core) for t in itertools.product(range(6), repeat=k)}
            assert set(enumerate_signatures(k)) == grouped

    def test_one_sided(self):
        assert len(enumerate_signatures(2, core_nonempty=False)) == 2
        assert len(enumerate_signatures(2, cocore_nonempty=False)) == 2

    def test_equivalence_relation_exhaustive(self):
        # reflexive, symmetric, transitive on all k-tuples up to |A| = 6:
        # the closure of a singleton must be exactly its signature class,
        # so closure classes partition the tuple space
        for size in (5, 6):
            core = frozenset({0, 1, 2})
            for k in (1, 2, 3):
                tuples = list(itertools.product(range(size), repeat=k))
                sig = {t: sim_signature(t, core) for t in tuples}
                for s in tuples:
                    cls = sim_closure({s}, core, size)
                    assert s in cls  # reflexive
                    assert cls == frozenset(
                        z for z in tuples if sig[z] == sig[s]
                    )
                    for z in cls:  # symmetric + transitive
                        assert sim_closure({z}, core, size) == cls


class TestSimClosure:
    def test_empty(self):
        assert sim_closure(set(), {0, 1, 2}, 6) == frozenset()

    def test_single_pair(self):
        got = sim_closure({(0, 3)}, {0, 1, 2}, 6)
        want = {(a, b) for a in (0, 1, 2) for b in (3, 4, 5)}
        assert got == frozenset(want)

    def test_idempotent_on_closed(self):
        closed = sim_closure({(0, 3)}, {0, 1, 2}, 6)
        assert sim_closure(closed, {0, 1, 2}, 6) == closed

    def test_closure_operator_laws(self):
        rng = random.Random(11)
        core = frozenset({0, 1, 2})
        tuples = list(itertools.product(range(6), repeat=2))
        for _ in range(200):
            a = frozenset(rng.sample(tuples, rng.randint(0, 8)))
            b = a | frozenset(rng.sample(tuples, rng.randint(0, 4)))
            ca, cb = sim_closure(a, core, 6), sim_closure(b, core, 6)
            assert a <= ca                       # extensive
            assert ca <= cb                      # monotone
            assert sim_closure(ca, core, 6) == ca  # idempotent


class TestValidation:
    def test_small_core(self):
        s = Structure(6, PQ)
        report = validate_cored_structure(s, {0, 1})
        assert not report.ok
        assert any(v.kind == "core-size" for v in report.violations)

    def test_closure_violation_witness(self):
        voc = Vocabulary((("R", 2),), 3)
        s = Structure(6, voc, {"R": {(0, 3)}})
        report = validate_cored_structure(s, {0, 1, 2})
        assert not report.ok
        v = next(v for v in report.violations if v.kind == "sim-closure")
        assert v.witness[0] == (0, 3)
        assert v.witness[1] not in s.relation("R")
        assert sim_signature(v.witness[0], {0, 1, 2}) == sim_signature(
            v.witness[1], {0, 1, 2}
        )

    def test_canonical_is_valid(self, canonical):
        assert validate_cored_structure(canonical.base, canonical.core).ok

    def test_small_universe_rejected(self):
        with pytest.raises(ValueError):
            CoredStructure(Structure(5, PQ), {0, 1, 2})


class TestCanonical:
    def test_shape(self, canonical):
        assert canonical.size == 6
        assert canonical.core == frozenset({0, 1, 2})
        assert canonical.relation("P") == {(0,), (1,), (2,)}
        assert canonical.relation("Q") == canonical.relation("P")

    def test_uneven(self):
        u = canonical_strong(3, 3, 4)
        assert u.size == 7
        assert u.core == frozenset({0, 1, 2})

    def test_precondition(self):
        with pytest.raises(ValueError):
            canonical_strong(3, 2, 3)


class TestEvaluate:
    def test_reflexivity(self, canonical):
        f = parse_formula("v0 = v0", PQ)
        for t in all_tuples(6, 3):
            assert evaluate(f, canonical.base, t)

    def test_core_membership(self, canonical):
        f = parse_formula("P(v0)", PQ)
        assert evaluate(f, canonical.base, (0, 0, 0))
        assert not evaluate(f, canonical.base, (3, 0, 0))

    def test_premise_on_split_pair(self, canonical):
        phi = parse_formula("P(v0) <-> !P(v1)", PQ)
        assert evaluate(phi, canonical.base, (0, 3, 0))
        assert not evaluate(phi, canonical.base, (0, 1, 0))

    def test_vocabulary_mismatch(self, canonical):
        f = parse_formula("P(v0)", PQ)
        eq_only = canonical.base.reduct(())
        with pytest.raises(ValueError, match="vocabulary mismatch"):
            evaluate(f, eq_only, (0, 0, 0))

    def test_agrees_with_definable_set(self, canonical):
        rng = random.Random(5)
        from cylab.verify import random_formula

        for _ in range(40):
            f = random_formula(rng, PQ, 3)
            sat = definable_set(f, canonical.base)
            for t in rng.sample(all_tuples(6, 3), 20):
                assert (t in sat) == evaluate(f, canonical.base, t)


class TestDefinableSet:
    def test_true_is_everything(self, canonical):
        f = parse_formula("true", PQ)
        assert len(definable_set(f, canonical.base)) == 216

    def test_core_column_count(self, canonical):
        f = parse_formula("P(v0)", PQ)
        assert len(definable_set(f, canonical.base)) == 108

    def test_equality_pattern_count(self, canonical):
        f = parse_formula("v0 = v1 & !v0 = v2", PQ)
        assert len(definable_set(f, canonical.base)) == 30


class TestConsequence:
    def test_premise_implies_conclusion(self, canonical):
        fam = StructureFamily((canonical,))
        phi = parse_formula("P(v0) <-> !P(v1)", PQ)
        psi = parse_formula("(Q(v0) <-> Q(v2)) | (Q(v1) <-> Q(v2))", PQ)
        assert consequence_over(fam, phi, psi, "implication-validity").holds

    def test_invalid_premise_entails_false(self, canonical):
        fam = StructureFamily((canonical,))
        phi = parse_formula("P(v0) <-> !P(v1)", PQ)
        false = parse_formula("false", PQ)
        # no member validates the premise (any diagonal assignment refutes it)
        assert consequence_over(fam, phi, false, "validity-consequence").holds

    def test_failure_carries_witness(self, canonical):
        fam = StructureFamily((canonical,))
        t = parse_formula("true", PQ)
        f = parse_formula("false", PQ)
        report = consequence_over(fam, t, f, "validity-consequence")
        assert not report.holds
        assert report.member_index == 0
        assert report.assignment is not None


class TestCorePreservingMaps:
    def test_count(self, canonical):
        assert sum(1 for _ in core_preserving_maps(canonical)) == 36

    def test_identity_first(self, canonical):
        first = next(iter(core_preserving_maps(canonical)))
        assert first == tuple(range(6))

    def test_all_are_automorphisms(self, canonical):
        for perm in core_preserving_maps(canonical):
            assert is_automorphism(canonical.base, perm)

    def test_preserves_random_closed_relations(self):
        rng = random.Random(3)
        voc = Vocabulary((("R", 2),), 3)
        for _ in range(20):
            size = rng.choice((6, 7))
            core = frozenset(range(rng.randint(3, size - 3)))
            rel = set()
            for sig in enumerate_signatures(2):
                if rng.random() < 0.5:
                    rel.update(signature_members(sig, core, size))
            u = CoredStructure(Structure(size, voc, {"R": rel}), core)
            for perm in core_preserving_maps(u):
                assert is_automorphism(u.base, perm)


class TestFindAutomorphism:
    def test_identity(self, canonical):
        assert find_automorphism(canonical, (0, 1), (0, 1)) == tuple(range(6))

    def test_same_signature_pair(self, canonical):
        f = find_automorphism(canonical, (0, 3), (1, 5))
        assert f is not None
        assert (f[0], f[3]) == (1, 5)
        assert is_automorphism(canonical.base, f)

    def test_core_vs_cocore(self, canonical):
        assert find_automorphism(canonical, (0,), (3,)) is None

    def test_length_mismatch(self, canonical):
        with pytest.raises(ValueError):
            find_automorphism(canonical, (0, 1), (0,))

    def test_out_of_range(self, canonical):
        with pytest.raises(ValueError):
            find_automorphism(canonical, (0, 9), (1, 5))


class TestGeneratedSubstructure:
    def test_whole_universe(self, canonical):
        assert generated_substructure(canonical, range(6)) == canonical

    def test_restriction_is_canonical(self):
        big = canonical_strong(3, 4, 4)
        sub = generated_substructure(big, [0, 1, 2, 5, 6, 7])
        assert core_bijection_isomorphism(sub, canonical_strong(3, 3, 3), range(6))

    def test_thin_core_side_rejected(self):
        big = canonical_strong(3, 4, 4)
        with pytest.raises(ValueError):
            generated_substructure(big, [0, 1, 4, 5, 6, 7])


class TestCoreBijectionIsomorphism:
    def test_identity(self, canonical):
        assert core_bijection_isomorphism(canonical, canonical, range(6))

    def test_any_core_respecting_bijection(self, canonical):
        other = canonical_strong(3, 3, 3)
        for perm in core_preserving_maps(canonical):
            assert core_bijection_isomorphism(canonical, other, perm)

    def test_core_to_cocore_fails(self, canonical):
        perm = (3, 1, 2, 0, 4, 5)  # swaps a core point with a non-core point
        assert not core_bijection_isomorphism(canonical, canonical, perm)

    def test_non_bijection_rejected(self, canonical):
        with pytest.raises(ValueError):
            core_bijection_isomorphism(canonical, canonical, (0, 0, 1, 2, 3, 4))


class TestTarskiVaught:
    def test_witnesses_inside_restriction(self):
        # one-coordinate witness test for a small closed formula family
        big = canonical_strong(3, 4, 4)
        inside = [0, 1, 2, 5, 6, 7]
        vset = set(inside)
        formulas = [
            parse_formula(text, PQ)
            for text in (
                "P(v0)",
                "P(v0) & !Q(v1)",
                "v0 = v1 | P(v2)",
                "E v2. (P(v2) & !v2 = v0)",
                "!P(v0) & !P(v1) & !v0 = v1",
            )
        ]
        from cylab.structures import cylinder

        for f in formulas:
            sat = definable_set(f, big.base)
            for i in range(3):
                cyl = cylinder(sat, i, big.size)
                for t in itertools.product(inside, repeat=3):
                    lhs = t in cyl
                    rhs = any(t[:i] + (x,) + t[i + 1 :] in sat for x in inside)
                    assert lhs == rhs


class TestJson:
    def test_roundtrip(self, canonical, tmp_path):
        path = tmp_path / "c.json"
        save_structure(canonical, path)
        assert load_structure(path) == canonical

    def test_canonical_output_sorted(self, canonical):
        data = structure_to_json(canonical)
        assert data["core"] == [0, 1, 2]
        assert data["relations"]["P"]["tuples"] == [[0], [1], [2]]

    def test_unknown_keys_rejected(self, canonical):
        data = structure_to_json(canonical)
        data["comment"] = "nope"
        with pytest.raises(ValueError, match="unknown keys"):
            structure_from_json(data)

    def test_unknown_relation_keys_rejected(self, canonical):
        data = structure_to_json(canonical)
        data["relations"]["P"]["color"] = "red"
        with pytest.raises(ValueError, match="unknown keys"):
            structure_from_json(data)

    def test_missing_keys_rejected(self):
        with pytest.raises(ValueError, match="missing"):
            structure_from_json({"n": 3})


class TestFamily:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            StructureFamily(())

    def test_mixed_vocabulary_rejected(self, canonical):
        voc = Vocabulary((("R", 2),), 3)
        other = CoredStructure(Structure(6, voc), {0, 1, 2})
        with pytest.raises(ValueError):
            StructureFamily((canonical, other))
