import io
import os
from pathlib import Path

import pytest

from cwcheeger.cli import run
from cwcheeger.complex import zoo
from cwcheeger.cwx import to_cwx

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_CASES = [("path", "2"), ("cycle", "3"), ("tetra_minus_face", None), ("rp2_6", None), ("simplex_boundary", "3")]


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def zoo_args(name, param):
    return ["--zoo", name] + ([] if param is None else ["--param", param])


class TestExamples:
    def test_cheeger_p3_text(self):
        code, out, _ = cli("cheeger", "--zoo", "path", "--param", "2")
        assert code == 0
        for needle in ("lambda_d = 1\n", "h_d = 1 (= 2/2)", "m = 2\n"):
            assert needle in out
        assert out.count("HOLDS") == 2

    def test_cheeger_p3_machine(self):
        code, out, _ = cli("cheeger", "--zoo", "path", "--param", "2", "--format", "machine")
        lines = out.splitlines()
        assert code == 0
        assert {"h_d 1/1", "lambda_d 1.00000000000", "m 2"} <= set(lines)

    def test_expansion_cycle3_machine(self):
        code, out, _ = cli("expansion", "--zoo", "cycle", "--param", "3", "--dim", "1", "--format", "machine")
        assert code == 0
        assert "h 0/3" in out.splitlines() and "witness 1 1 1" in out.splitlines()

    @pytest.mark.parametrize("field,expected", [("f2", "1"), ("q", "0")])
    def test_betti_rp2(self, field, expected):
        code, out, _ = cli("betti", "--zoo", "rp2_6", "--dim", "2", "--field", field)
        assert (code, out.strip()) == (0, expected)

    def test_coboundary_reduced(self):
        code, out, _ = cli("expansion", "--zoo", "cycle", "--param", "4", "--dim", "0", "--reduced",
                           "--variant", "coboundary", "--format", "machine")
        assert code == 0 and "h_reduced 1/1" in out.splitlines()

    def test_file_input(self, tmp_path):
        path = tmp_path / "tmf.cwx"
        path.write_text(to_cwx(zoo("tetra_minus_face")))
        code, out, _ = cli("cheeger", str(path), "--format", "machine")
        assert code == 0 and "h_d 1/1" in out.splitlines()
        facets = tmp_path / "tri.txt"
        facets.write_text("0 1 2\n")
        code, out, _ = cli("betti", str(facets), "--dim", "0")
        assert (code, out.strip()) == (0, "1")

    def test_text_matrix_suppressed_when_large(self):
        _, out, _ = cli("info", "--zoo", "torus_7")
        assert "suppressed" in out
        _, out, _ = cli("info", "--zoo", "torus_7", "--format", "machine")
        assert out.count("inc_1_row") == 7 and out.count("inc_2_row") == 21

    @pytest.mark.parametrize("command", ["info", "validate", "betti", "spectrum", "expansion", "sweep", "cheeger", "orient"])
    def test_every_command_runs(self, command):
        for fmt in ("text", "machine"):
            code, out, err = cli(command, "--zoo", "tetra_minus_face", "--format", fmt)
            assert code == 0, err
            assert out


class TestGolden:
    @pytest.mark.parametrize("command", ["cheeger", "expansion"])
    @pytest.mark.parametrize("case", GOLDEN_CASES, ids=lambda c: c[0] if c[1] is None else f"{c[0]}_{c[1]}")
    def test_byte_stable(self, case, command):
        argv = [command, *zoo_args(*case), "--format", "machine"]
        code, out, _ = cli(*argv)
        again = cli(*argv)[1]
        assert code == 0 and out == again
        name = case[0] if case[1] is None else f"{case[0]}_{case[1]}"
        path = GOLDEN / f"{command}_{name}.txt"
        if os.environ.get("CWCHEEGER_UPDATE_GOLDEN"):
            path.write_text(out)
        assert out == path.read_text()


BAD_SQUARE = """cwx 1
dim 2
cells 0 3
cells 1 3
cells 2 1
inc 1 0 0 -1
inc 1 1 0 1
inc 1 1 1 -1
inc 1 2 1 1
inc 1 0 2 -1
inc 1 2 2 1
inc 2 0 0 1
inc 2 1 0 1
inc 2 2 0 1
"""


class TestExitCodes:
    @pytest.mark.parametrize(
        "text",
        ["cwx 1\ndim x\n", "cwx 1\ndim 1\ncells 0 2\n", "# only a comment\n"],
    )
    def test_parse_errors(self, tmp_path, text):
        path = tmp_path / "bad.cwx"
        path.write_text(text)
        code, out, err = cli("info", str(path))
        assert code == 2 and out == "" and "parse error" in err

    def test_missing_file(self, tmp_path):
        assert cli("info", str(tmp_path / "missing.cwx"))[0] == 2

    def test_bad_zoo_and_flags(self):
        assert cli("info", "--zoo", "moebius")[0] == 2
        assert cli("info")[0] == 2
        assert cli("frobnicate", "--zoo", "torus_7")[0] == 2

    def test_boundary_squared(self, tmp_path):
        path = tmp_path / "bad.cwx"
        path.write_text(BAD_SQUARE)
        code, out, err = cli("validate", str(path))
        assert code == 3
        assert "boundary-squared" in out + err
        assert "n=1, row=0, col=0" in out + err
        # every other command validates first
        code, out, err = cli("cheeger", str(path))
        assert code == 3 and out == "" and "boundary-squared" in err

    def test_index_range(self, tmp_path):
        path = tmp_path / "bad.cwx"
        path.write_text("cwx 1\ndim 1\ncells 0 2\ncells 1 1\ninc 1 9 0 1\n")
        code, _, err = cli("info", str(path))
        assert code == 3 and "index-range" in err

    def test_budget(self):
        code, out, err = cli("expansion", "--zoo", "torus_7", "--budget", "2")
        assert code == 4 and out == "" and "budget" in err

    def test_empty_spectrum(self, tmp_path):
        path = tmp_path / "rp2_min.cwx"
        path.write_text("cwx 1\ndim 2\ncells 0 1\ncells 1 1\ncells 2 1\ninc 2 0 0 2\n")
        code, out, err = cli("spectrum", str(path), "--dim", "1", "--format", "machine")
        assert code == 5 and out == "" and err
