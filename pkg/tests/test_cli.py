import json

import pytest

from cylab.cli import main
from cylab.structures import (
    CoredStructure,
    Structure,
    canonical_strong,
    save_structure,
    structure_to_json,
)
from cylab.syntax import Vocabulary

PHI = "P(v0) <-> !P(v1)"
PSI = "(Q(v0) <-> Q(v2)) | (Q(v1) <-> Q(v2))"


@pytest.fixture()
def canonical_file(tmp_path):
    path = tmp_path / "canonical.json"
    save_structure(canonical_strong(3, 3, 3), path)
    return str(path)


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data) if isinstance(data, dict) else data)
    return str(path)


class TestCheck:
    def test_valid_file(self, canonical_file):
        assert main(["check", canonical_file]) == 0

    def test_small_core(self, tmp_path):
        data = structure_to_json(canonical_strong(3, 3, 3))
        data["core"] = [0, 1]
        data["relations"]["P"]["tuples"] = [[0], [1]]
        data["relations"]["Q"]["tuples"] = [[0], [1]]
        path = write(tmp_path, "small.json", data)
        assert main(["check", path]) == 1

    def test_truncated_json(self, tmp_path):
        path = write(tmp_path, "trunc.json", '{"n": 3, "uni')
        assert main(["check", path]) == 2

    def test_unknown_key(self, tmp_path):
        data = structure_to_json(canonical_strong(3, 3, 3))
        data["note"] = "x"
        path = write(tmp_path, "unk.json", data)
        assert main(["check", path]) == 2

    def test_missing_file(self):
        assert main(["check", "/nonexistent/structure.json"]) == 2

    def test_json_output_parses(self, canonical_file, capsys):
        assert main(["check", canonical_file, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["ok"] is True
        assert payload["violations"] == []


class TestStrong:
    def test_canonical(self, canonical_file):
        assert main(["strong", canonical_file]) == 0

    def test_failing_structure_gives_witness(self, tmp_path, capsys):
        core = range(3)
        rel = [
            [a, b]
            for a in range(6)
            for b in range(6)
            if (a in core) != (b in core)
        ]
        data = {
            "n": 3,
            "universe": 6,
            "core": [0, 1, 2],
            "relations": {"E": {"arity": 2, "tuples": rel}},
        }
        path = write(tmp_path, "cross.json", data)
        assert main(["strong", path, "--json"]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["ok"] is False
        assert payload["witness"]["V"] == ["E"]
        assert payload["witness"]["i"] == 0 and payload["witness"]["j"] == 1

    def test_invalid_structure(self, tmp_path):
        data = {
            "n": 3,
            "universe": 6,
            "core": [0, 1, 2],
            "relations": {"R": {"arity": 2, "tuples": [[0, 3]]}},
        }
        path = write(tmp_path, "broken.json", data)
        assert main(["strong", path]) == 2

    def test_n_mismatch(self, canonical_file):
        assert main(["strong", canonical_file, "--n", "4"]) == 2


class TestInterpolate:
    def test_weak_found(self, canonical_file):
        rc = main(
            ["interpolate", canonical_file, "--mode", "weak", "--phi", PHI, "--psi", PSI]
        )
        assert rc == 0

    def test_strong_refused_with_witness(self, canonical_file, capsys):
        rc = main(
            [
                "interpolate",
                canonical_file,
                "--mode",
                "strong",
                "--phi",
                PHI,
                "--psi",
                PSI,
                "--json",
            ]
        )
        assert rc == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["outcome"] == "none"
        assert set(payload["witness"]) == {"structure", "atom"}

    def test_unknown_symbol(self, canonical_file):
        rc = main(
            ["interpolate", canonical_file, "--mode", "weak", "--phi", "Z(v0)", "--psi", "P(v0)"]
        )
        assert rc == 2

    def test_verified_flag_in_json(self, canonical_file, capsys):
        rc = main(
            [
                "interpolate",
                canonical_file,
                "--mode",
                "strong",
                "--phi",
                "P(v0)",
                "--psi",
                "P(v0)",
                "--json",
            ]
        )
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verified"] is True
        assert payload["interpolant"]


class TestEval:
    def test_with_assignment(self, canonical_file):
        assert main(["eval", canonical_file, "-f", "P(v0)", "--assignment", "0,3,3"]) == 0
        assert main(["eval", canonical_file, "-f", "P(v0)", "--assignment", "3,0,0"]) == 1

    def test_count_mode(self, canonical_file, capsys):
        rc = main(["eval", canonical_file, "-f", "P(v0)", "--json"])
        assert rc == 1  # not valid
        payload = json.loads(capsys.readouterr().out)
        assert payload["satisfying"] == 108
        assert payload["total"] == 216

    def test_valid_formula(self, canonical_file):
        assert main(["eval", canonical_file, "-f", "v0 = v0"]) == 0

    def test_bad_formula(self, canonical_file):
        assert main(["eval", canonical_file, "-f", "P(v0"]) == 2


class TestCsn:
    def test_report_schema(self, canonical_file, capsys):
        assert main(["csn", canonical_file, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["atoms"] == 22
        assert payload["carrier_log2"] == 22
        assert len(payload["atom_sizes"]) == 22
        assert sum(payload["atom_sizes"]) == 216
        assert [0, 1, 2] in payload["unary_definables"]

    def test_reduct_flag(self, canonical_file, capsys):
        assert main(["csn", canonical_file, "--reduct", "", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["atoms"] == 5
        assert payload["carrier_log2"] == 5


class TestDefinable:
    def test_core_over_p(self, canonical_file):
        assert main(["definable", canonical_file, "--core", "--reduct", "P"]) == 0

    def test_core_over_equality(self, canonical_file):
        assert main(["definable", canonical_file, "--core", "--reduct", ""]) == 1

    def test_relation(self, canonical_file):
        assert main(["definable", canonical_file, "--relation", "P", "--reduct", "Q"]) == 0

    def test_missing_target(self, canonical_file):
        assert main(["definable", canonical_file]) == 2


class TestAutomorphism:
    def test_found(self, canonical_file, capsys):
        rc = main(
            ["automorphism", canonical_file, "--source", "0,3", "--target", "1,5", "--json"]
        )
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        perm = payload["map"]
        assert perm[0] == 1 and perm[3] == 5

    def test_refused(self, canonical_file):
        rc = main(["automorphism", canonical_file, "--source", "0", "--target", "3"])
        assert rc == 1

    def test_bad_tuple(self, canonical_file):
        rc = main(["automorphism", canonical_file, "--source", "0,9", "--target", "1,5"])
        assert rc == 2


class TestSvenonius:
    def test_named_relation(self, canonical_file):
        assert main(["svenonius", canonical_file, "--relation", "P", "--reduct", "Q"]) == 0

    def test_refused_over_equality(self, canonical_file, capsys):
        rc = main(
            ["svenonius", canonical_file, "--relation", "P", "--reduct", "", "--json"]
        )
        assert rc == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["violating_map"]


class TestSeparate:
    def test_separable(self, tmp_path):
        voc = Vocabulary((("P", 1),), 3)
        core = frozenset({0, 1, 2})
        a = CoredStructure(Structure(6, voc, {"P": {(x,) for x in core}}), core)
        b = CoredStructure(Structure(6, voc, {"P": set()}), core)
        pa = tmp_path / "a.json"
        pb = tmp_path / "b.json"
        save_structure(a, pa)
        save_structure(b, pb)
        assert main(["separate", "--k0", str(pa), "--k1", str(pb)]) == 0

    def test_not_separable(self, tmp_path):
        voc = Vocabulary((), 3)
        a = CoredStructure(Structure(6, voc), frozenset({0, 1, 2}))
        b = CoredStructure(Structure(6, voc), frozenset({1, 2, 3}))
        pa = tmp_path / "a.json"
        pb = tmp_path / "b.json"
        save_structure(a, pa)
        save_structure(b, pb)
        assert main(["separate", "--k0", str(pa), "--k1", str(pb)]) == 1


class TestVerify:
    def test_rejects_small_n(self):
        assert main(["verify", "--n", "2"]) == 2

    def test_rejects_bad_size(self):
        assert main(["verify", "--size", "4"]) == 2

    def test_runs_single_check_quickly(self, capsys):
        # drive the runner through its CLI wiring on a light subset
        from cylab.verify import run_suite

        results = run_suite(corpus_size=5, only=(1, 4, 5, 8))
        assert all(r.ok for r in results)
        assert [r.number for r in results] == [1, 4, 5, 8]

    def test_thread_pool_keeps_check_order(self):
        from cylab.verify import run_suite

        results = run_suite(corpus_size=5, only=(1, 3, 4, 5, 11), threads=3)
        assert [r.number for r in results] == [1, 3, 4, 5, 11]
        assert all(r.ok for r in results)

    def test_bad_thread_env(self, monkeypatch):
        monkeypatch.setenv("CYLAB_THREADS", "many")
        assert main(["verify"]) == 2

    def test_alias_exists(self):
        assert main(["verify-paper", "--n", "2"]) == 2


class TestUsage:
    def test_no_command(self):
        assert main([]) == 2

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2
