import pytest

from cwcheeger.cwx import load, loads, parse_cwx, to_cwx
from cwcheeger.complex import zoo
from cwcheeger.errors import ComplexValidationError, ParseError

from conftest import ZOO_CASES, case_id

P3_CWX = """\
cwx 1
# path on three vertices
dim 1
cells 0 3
cells 1 2
inc 1 0 0 -1
inc 1 1 0 1
inc 1 1 1 -1
inc 1 2 1 1
label 0 0 v0
"""


def test_parse_p3():
    cx = parse_cwx(P3_CWX)
    assert cx.cell_counts == (3, 2)
    assert cx.inc(1).tolist() == [[-1, 0], [1, -1], [0, 1]]
    assert cx.label(0, 0) == "v0"
    assert cx.label(0, 1) == "e0_1"
    assert not cx.regular_asserted


@pytest.mark.parametrize("case", ZOO_CASES, ids=case_id)
def test_roundtrip(case):
    cx = zoo(*case)
    again = loads(to_cwx(cx))
    assert again == cx
    assert to_cwx(again) == to_cwx(cx)


def test_sniffs_facets(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("# a triangle\n0 1 2\n")
    cx = load(path)
    assert cx.cell_counts == (3, 3, 1)
    path.write_text(P3_CWX)
    assert load(path).cell_counts == (3, 2)


@pytest.mark.parametrize(
    "text",
    [
        "dim 1\ncells 0 1\ncells 1 0\n",
        "cwx 1\ndim one\n",
        "cwx 1\ncells 0 1\n",
        "cwx 1\ndim 1\ncells 0 2\n",
        "cwx 1\ndim 1\ncells 0 2\ncells 1 1\ninc 1 0 0 1\ninc 1 0 0 1\n",
        "cwx 1\ndim 0\ncells 0 2\nfoo 1\n",
        "cwx 1\ndim 0\ncells 0 2\nregular yes\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_cwx(text)


def test_index_out_of_range():
    with pytest.raises(ComplexValidationError) as info:
        parse_cwx("cwx 1\ndim 1\ncells 0 2\ncells 1 1\ninc 1 5 0 1\n")
    v = info.value.violations[0]
    assert (v.n, v.row, v.col) == (1, 5, 0)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load(tmp_path / "nope.cwx")
