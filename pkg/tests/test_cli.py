import json

import pytest

from app.cli import EXIT_INPUT, EXIT_OK, EXIT_UNDETERMINED, run
from app.services import graph_models


def _report(capsys):
    return json.loads(capsys.readouterr().out)


class TestWordCommands:
    """Presentation and reversing commands."""

    def test_lcm(self, capsys):
        """lcm on the braid fixture prints the join."""
        assert run(["lcm", "--fixture", "braid3", "a", "b"]) == EXIT_OK
        report = _report(capsys)
        assert report["command"] == "lcm"
        assert report["determined"] is True
        assert report["result"]["lcm"] == "aba"

    def test_presentation_file(self, tmp_path, capsys):
        """Presentations can be read from the text format."""
        path = tmp_path / "torus.txt"
        path.write_text("# torus knot\ngenerators: a b\nrelation: aa = bbb\n", encoding="utf-8")
        assert run(["word", "equal", "--presentation", str(path), "aab", "bbbb"]) == EXIT_OK
        assert _report(capsys)["result"]["status"] == "equal"

    def test_unknown_fixture(self, capsys):
        """An unknown fixture is an input error."""
        assert run(["cube", "--fixture", "no-such-thing"]) == EXIT_INPUT
        assert "Unknown fixture" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        """A missing presentation file is an input error."""
        assert run(["cube", "--presentation", str(tmp_path / "missing.txt")]) == EXIT_INPUT

    def test_usage_error(self):
        """argparse errors exit with code 1."""
        with pytest.raises(SystemExit) as exc:
            run(["lcm", "--fixture", "braid3", "a"])
        assert exc.value.code == EXIT_INPUT

    def test_pretty(self, capsys):
        """--pretty prints key: value lines."""
        assert run(["reverse", "--fixture", "braid3", "a^-1 b", "--pretty"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "command: reverse" in out
        assert "numerator: ba" in out


class TestGraphCommands:
    """graph-model and graph-k."""

    def test_dot(self, capsys):
        """DOT text is embedded in the report."""
        assert run(["graph-model", "--family", "dihedral", "--m", "3", "--format", "dot"]) == EXIT_OK
        assert _report(capsys)["result"]["dot"].startswith("digraph {")

    def test_out_then_k(self, tmp_path, capsys):
        """graph-k reads a report written by graph-model --out."""
        out = tmp_path / "graph.json"
        assert run(["graph-model", "--family", "dihedral", "--m", "5", "--out", str(out)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert run(["graph-k", "--graph", str(out)]) == EXIT_OK
        assert _report(capsys)["result"]["K0"] == "Z/3"

    def test_plain_graph_json(self, tmp_path, capsys):
        """graph-k also reads the bare graph export."""
        path = tmp_path / "torus.json"
        path.write_text(graph_models.export_json(graph_models.builtin_model("torus", p=3, q=3)),
                        encoding="utf-8")
        assert run(["graph-k", "--graph", str(path)]) == EXIT_OK
        report = _report(capsys)["result"]
        assert (report["K0"], report["K1"]) == ("Z/3", "0")


class TestKTheoryCommands:
    """Pipeline and boundary quotient."""

    def test_trivial_pipeline(self, capsys):
        """dihedral(3) with trivial coefficients is determined."""
        assert run(["ktheory", "pipeline", "--case", "dihedral", "--m", "3"]) == EXIT_OK
        result = _report(capsys)["result"]
        assert (result["K0"], result["K1"]) == ("Z", "Z")

    def test_undetermined_without_hint(self, capsys):
        """The Artin-representation coefficients need the unit-summand hint."""
        argv = ["ktheory", "pipeline", "--case", "dihedral", "--m", "3", "--coeff", "artin-rep-coeff"]
        assert run(argv) == EXIT_UNDETERMINED
        assert _report(capsys)["determined"] is False
        assert run(argv + ["--hint", "unit-summand"]) == EXIT_OK
        result = _report(capsys)["result"]
        assert (result["K0"], result["K1"]) == ("Z^3", "Z^3")

    def test_coefficient_file(self, tmp_path, capsys):
        """Coefficients can come from a JSON file."""
        path = tmp_path / "trivial.json"
        path.write_text(json.dumps({"rank0": 1, "rank1": 0, "alpha0": [[1]], "beta0": [[1]],
                                    "alpha1": [], "beta1": []}), encoding="utf-8")
        assert run(["ktheory", "pipeline", "--case", "torus", "--p", "2", "--q", "3",
                    "--coeff", str(path)]) == EXIT_OK
        assert _report(capsys)["result"]["coefficients"]["name"] == "trivial"

    def test_torus_two_two(self, capsys):
        """torus(2,2) fails its precondition."""
        assert run(["ktheory", "pipeline", "--case", "torus", "--p", "2", "--q", "2"]) == EXIT_INPUT

    @pytest.mark.parametrize("n,k0", [("3", "0"), ("4", "Z/2"), ("5", "Z/3")])
    def test_boundary(self, n, k0, capsys):
        """K0 of the boundary quotient is Z/(n-2)."""
        assert run(["ktheory", "boundary", "--generators", n]) == EXIT_OK
        assert _report(capsys)["result"]["K0"] == k0

    def test_boundary_needs_input(self, capsys):
        """Some source of the generator count is required."""
        assert run(["ktheory", "boundary"]) == EXIT_INPUT


class TestArtinCommands:
    """Artin-Tits commands."""

    def test_delta(self, capsys):
        """Δ of A3 has length 6."""
        assert run(["artin", "delta", "--type", "A3"]) == EXIT_OK
        assert _report(capsys)["result"]["length"] == 6

    def test_matrix_file(self, tmp_path, capsys):
        """A Coxeter matrix file with named generators."""
        path = tmp_path / "a2.txt"
        path.write_text("# A2\n1 3\n3 1\n", encoding="utf-8")
        assert run(["artin", "count-nf", "--matrix", str(path), "--generators", "x y", "--n", "1"]) == EXIT_OK
        result = _report(capsys)["result"]
        assert result["system"]["generators"] == ["x", "y"]
        assert result["count"] == 4

    def test_splice_check(self, capsys):
        """A short randomised run passes."""
        assert run(["splice-check", "--count", "20", "--seed", "1"]) == EXIT_OK
        assert _report(capsys)["result"]["passed"] == 20
