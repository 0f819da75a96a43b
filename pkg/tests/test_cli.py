import json

import pytest

from finspace import formats
from finspace.cli import main
from finspace.errors import ParseError
from finspace.poset import build_poset, is_order_isomorphic

CIRCLE = """\
# four point circle
element a
element b
element c
element d
rel c < a
rel d < a
rel c < b
rel d < b
"""

CHAIN = "element lo\nelement hi\nrel lo < hi\n"
POINT = "element p\n"
FOLD = "map a -> hi\nmap b -> hi\nmap c -> lo\nmap d -> lo\n"
CONST = "".join(f"map {x} -> p\n" for x in "abcd")


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in dict(circle=CIRCLE, chain=CHAIN, point=POINT, fold=FOLD, const=CONST).items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_poset():
    X = formats.parse_poset(CIRCLE)
    assert X.labels == ("a", "b", "c", "d")
    assert len(X.covers) == 4


@pytest.mark.parametrize(
    "text, line",
    [
        ("element a\nelement a\n", 2),
        ("element a\nrel a < z\n", 2),
        ("element a\n\nbogus line\n", 3),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        formats.parse_poset(text)
    assert str(info.value).startswith(f"line {line}:")


def test_parse_map_errors():
    X = formats.parse_poset(CIRCLE)
    Y = formats.parse_poset(CHAIN)
    with pytest.raises(ParseError):
        formats.parse_map("map a -> hi\n", X, Y)
    with pytest.raises(ParseError) as info:
        formats.parse_map(FOLD + "map a -> lo\n", X, Y)
    assert str(info.value).startswith("line 5:")


def test_text_and_json_roundtrip():
    X = build_poset("abcde", [("a", "b"), ("b", "c"), ("a", "d"), ("e", "d")])
    assert formats.parse_poset(formats.format_poset(X)) == X
    data = json.loads(json.dumps(formats.poset_to_json(X)))
    assert is_order_isomorphic(formats.poset_from_json(data), X)
    assert formats.poset_from_json(data) == X


def test_map_roundtrip():
    X = formats.parse_poset(CIRCLE)
    Y = formats.parse_poset(CHAIN)
    f = formats.parse_map(FOLD, X, Y)
    assert formats.parse_map(formats.format_map(f), X, Y) == f


def test_homology_json(capsys, files):
    code, out, _ = run(capsys, "homology", files["circle"], "--json")
    assert code == 0
    assert json.loads(out) == {"betti": [1, 1], "torsion": [[], []], "hdim": 1}


def test_info(capsys, files):
    code, out, _ = run(capsys, "info", files["circle"], "--json")
    data = json.loads(out)
    assert code == 0 and data["minimal"] and data["elements"] == 4


def test_contract(capsys, files):
    code, out, _ = run(capsys, "contract", files["circle"], "--edge", "a,c", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["merged"] == "a+c"
    assert data["cokernel"]["betti"] == [0, 0, 1]
    assert not data["quasi_iso"]


def test_bad_edge_is_input_error(capsys, files):
    code, _, err = run(capsys, "contract", files["circle"], "--edge", "a,b")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "contract", files["circle"], "--edge", "a")
    assert code == 2


def test_missing_file_is_input_error(capsys, tmp_path):
    code, _, _ = run(capsys, "homology", str(tmp_path / "nope.txt"))
    assert code == 2


def test_monotone_false_with_fiber_witness(capsys, files):
    code, out, _ = run(
        capsys, "monotone", "--domain", files["circle"], "--codomain", files["chain"],
        "--map", files["fold"], "--json",
    )
    data = json.loads(out)
    assert code == 1
    assert data["monotone"] is False
    assert data["witness"]["kind"] == "fiber"
    assert sorted(data["witness"]["fiber"]) == ["a", "b"]


def test_monotone_true(capsys, files):
    code, out, _ = run(
        capsys, "monotone", "--domain", files["circle"], "--codomain", files["point"],
        "--map", files["const"], "--json",
    )
    assert code == 0 and json.loads(out) == {"monotone": True, "witness": None}


def test_decompose(capsys, files):
    code, out, _ = run(
        capsys, "decompose", "--domain", files["circle"], "--codomain", files["point"],
        "--map", files["const"], "--json",
    )
    data = json.loads(out)
    assert code == 0
    assert len(data["steps"]) == 3
    assert data["residuals"] == [0, 0]


def test_verify_reports_failing_ledger(capsys, files):
    code, out, _ = run(
        capsys, "verify", "--domain", files["circle"], "--codomain", files["point"],
        "--map", files["const"], "--json",
    )
    data = json.loads(out)
    assert code == 1
    assert data["ledger"]["checks"]["betti_formula"]["passed"]
    assert not data["ledger"]["checks"]["kernel_acyclic"]["passed"]


def test_factorize(capsys, files):
    code, out, _ = run(
        capsys, "factorize", "--domain", files["circle"], "--codomain", files["chain"],
        "--map", files["fold"], "--json",
    )
    data = json.loads(out)
    assert code == 0
    assert data["ledger"]["observations"]["factorization"]["g_steps"] == []


def test_gminimal(capsys, files):
    code, out, _ = run(capsys, "gminimal", files["circle"], "--json")
    assert code == 0 and json.loads(out)["g_minimal"] is True
    code, _, _ = run(capsys, "gminimal", files["chain"])
    assert code == 1


def test_sweep_cli(capsys):
    code, out, _ = run(capsys, "sweep", "--max-n", "3", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["posets_by_n"] == {"1": 1, "2": 3, "3": 19}
