"""Command-line interface: subcommands, exit codes, artifact shapes and
byte-level determinism."""

import json
import subprocess
import sys

import pytest

from chainflow.cli import main

import golden_data as G


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def run_json(argv, capsys):
    rc, out, err = run(argv, capsys)
    assert rc == 0, err
    return json.loads(out), err


class TestLattice:
    def test_cycle3(self, capsys):
        art, err = run_json(["lattice", "--fixture", "cycle3"], capsys)
        assert art["variables"] == G.CYCLE3_VARIABLES
        assert art["generator_strings"] == G.CYCLE3_GENERATORS
        assert len(art["elements"]) == 9
        assert art["element_strings"][0] == "1"
        assert len(art["below"]) == 9
        assert art["below"][0] == []     # the bottom has nothing below it
        assert "9 elements" in err

    def test_cycle2(self, capsys):
        art, _ = run_json(["lattice", "--fixture", "cycle2"], capsys)
        assert len(art["generator_strings"]) == 5
        assert len(art["elements"]) == len(art["element_strings"])

    def test_stdin(self, capsys, monkeypatch):
        doc = json.dumps({"variables": ["x", "y"],
                          "generators": [[2, 0], [1, 1], [0, 2]]})
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(doc))
        art, _ = run_json(["lattice", "--in", "-"], capsys)
        assert art["generator_strings"] == ["x^2", "x*y", "y^2"]


class TestResolve:
    def test_cycle3_artifact(self, capsys):
        art, err = run_json(["resolve", "--fixture", "cycle3"], capsys)
        rep = art["report"]
        assert rep["ranks"] == G.RES_RANKS
        # JSON stringifies the homological-degree keys
        assert rep["betti"] == {str(k): v for k, v in G.RES_BETTI.items()}
        assert rep["field"] == "Q"
        assert rep["mode"] == "moore_penrose"
        assert rep["verification"]["minimal"] is True
        assert rep["verification"]["exact"] is True
        res = art["resolution"]
        assert [len(t) for t in res["basis"]] == G.RES_RANKS
        assert "ranks [4, 4, 1]" in err
        assert "verification: minimal=true exact=true" in err

    def test_with_field(self, capsys):
        art, _ = run_json(
            ["resolve", "--fixture", "cycle3", "--with-field"], capsys)
        assert "vector_field" in art and "start_resolution" in art
        start = art["start_resolution"]
        assert [len(t) for t in start["basis"]] == [
            len(G.F0_LABELS), len(G.F1_LABELS), len(G.F2_LABELS)]
        assert len(art["vector_field"]["maps"]) == 2

    def test_char5_taylor(self, capsys):
        art, _ = run_json(
            ["resolve", "--fixture", "cycle3", "--char", "5",
             "--start", "taylor"], capsys)
        rep = art["report"]
        assert rep["field"] == {"p": 5}
        assert rep["ranks"] == G.RES_RANKS
        assert rep["betti"] == {str(k): v for k, v in G.RES_BETTI.items()}

    def test_mp_rejected_in_char_p(self, capsys):
        rc, _, err = run(
            ["resolve", "--fixture", "cycle3", "--char", "2", "--mode", "mp"],
            capsys)
        assert rc == 2
        assert "input error" in err


class TestMatroidal:
    def test_char0(self, capsys):
        art, err = run_json(["matroidal", "--fixture", "cycle3"], capsys)
        assert art["counts"] == G.MATROIDAL_COUNTS
        assert art["critical_primes"] == G.CRITICAL_PRIMES
        assert set(art["per_prime"]) == {"2", "3"}
        # characteristic zero: no stratum is actually critical
        assert art["critical_strata"] == []
        assert art["transcendence_degree"] == 0
        assert "8 occupied strata" in err

    @pytest.mark.parametrize("p", [2, 3])
    def test_critical_characteristic(self, p, capsys):
        art, _ = run_json(
            ["matroidal", "--fixture", "cycle3", "--char", str(p)], capsys)
        assert art["critical_strata"] == G.CRITICAL_STRATA[p]
        assert art["transcendence_degree"] == G.TRANSCENDENCE_DEGREE[p]

    def test_char5_not_critical(self, capsys):
        art, _ = run_json(
            ["matroidal", "--fixture", "cycle3", "--char", "5"], capsys)
        assert art["critical_strata"] == []
        assert art["transcendence_degree"] == 0


class TestToricResolve:
    def test_char0(self, capsys):
        art, err = run_json(
            ["toric-resolve", "--fixture", "semigroup23"], capsys)
        rep = art["report"]
        assert rep["ranks"] == G.TORIC23_RANKS
        assert rep["betti"] == {str(k): v for k, v in G.TORIC23_BETTI.items()}
        assert rep["field"] == "Q"
        assert "ranks [1, 1]" in err

    def test_char2(self, capsys):
        art, _ = run_json(
            ["toric-resolve", "--fixture", "semigroup23", "--char", "2"],
            capsys)
        rep = art["report"]
        assert rep["field"]["p"] == 2
        assert rep["transcendence_degree"] == 1
        assert rep["ranks"] == G.TORIC23_RANKS

    def test_bad_document(self, tmp_path, capsys):
        f = tmp_path / "bad.json"
        f.write_text(json.dumps({"variables": ["x"]}))
        rc, _, err = run(["toric-resolve", "--in", str(f)], capsys)
        assert rc == 2
        assert "toric JSON needs" in err


class TestCounterexample:
    def test_obstruction_only(self, capsys):
        art, err = run_json(
            ["counterexample", "--prime", "3", "--check", "obstruction"],
            capsys)
        ob = art["obstruction"]
        assert ob["tuples_searched"] == 27
        assert ob["equivariant_tuples"] == []
        assert ob["obstructed"] is True
        assert ob["characteristic_zero_control"]["ok"] is True
        assert art["ok"] is True
        assert "all checks passed" in err

    def test_all_p2(self, capsys):
        art, _ = run_json(
            ["counterexample", "--prime", "2", "--check", "all"], capsys)
        assert art["n"] == 4
        assert art["obstruction"]["tuples_searched"] == 16
        assert art["explicit"]["Q"]["verified"] is True
        assert art["explicit"]["F2"]["equivariant"] is False
        assert art["intrinsic"]["F2"]["error"] is not None
        assert art["transcendental"]["verified"] is True
        assert art["transcendental"]["equivariant"] is True
        assert art["ok"] is True

    def test_nonprime_rejected(self, capsys):
        rc, _, err = run(["counterexample", "--prime", "4"], capsys)
        assert rc == 2
        assert "input error" in err


class TestInputHandling:
    def test_unknown_fixture(self, capsys):
        rc, _, err = run(["lattice", "--fixture", "nonesuch"], capsys)
        assert rc == 2
        assert "unknown fixture" in err and "cycle3" in err

    def test_invalid_json(self, tmp_path, capsys):
        f = tmp_path / "broken.json"
        f.write_text("this is { not json")
        rc, _, err = run(["lattice", "--in", str(f)], capsys)
        assert rc == 2
        assert "invalid JSON" in err

    def test_missing_input(self, capsys):
        rc, _, err = run(["resolve"], capsys)
        assert rc == 2
        assert "provide --in FILE or --fixture NAME" in err

    def test_missing_ideal_fields(self, tmp_path, capsys):
        f = tmp_path / "noideal.json"
        f.write_text(json.dumps({"variables": ["x"]}))
        rc, _, err = run(["lattice", "--in", str(f)], capsys)
        assert rc == 2
        assert 'ideal JSON needs' in err

    def test_unreadable_file(self, tmp_path, capsys):
        rc, _, err = run(
            ["lattice", "--in", str(tmp_path / "absent.json")], capsys)
        assert rc == 2
        assert "cannot read" in err


class TestDeterminism:
    def test_resolve_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            rc = main(["resolve", "--fixture", "cycle3", "--with-field",
                       "--out", str(path)])
            capsys.readouterr()
            assert rc == 0
        assert a.read_bytes() == b.read_bytes()

    def test_out_file_quiet_stdout(self, tmp_path, capsys):
        path = tmp_path / "lattice.json"
        rc = main(["lattice", "--fixture", "cycle3", "--out", str(path)])
        out = capsys.readouterr()
        assert rc == 0
        assert out.out == ""
        assert json.loads(path.read_text())["element_strings"][0] == "1"


class TestSubprocessEntryPoints:
    def test_module_invocation(self):
        p = subprocess.run(
            [sys.executable, "-m", "chainflow", "matroidal",
             "--fixture", "cycle3"],
            capture_output=True, text=True)
        assert p.returncode == 0
        assert json.loads(p.stdout)["critical_primes"] == G.CRITICAL_PRIMES

    def test_cli_module_invocation(self):
        p = subprocess.run(
            [sys.executable, "-m", "chainflow.cli", "counterexample",
             "--prime", "3", "--check", "obstruction"],
            capture_output=True, text=True)
        assert p.returncode == 0
        assert json.loads(p.stdout)["obstruction"]["obstructed"] is True

    def test_console_script_exit_code(self):
        p = subprocess.run(
            ["chainflow", "lattice", "--fixture", "nonesuch"],
            capture_output=True, text=True)
        assert p.returncode == 2
