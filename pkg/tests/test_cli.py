import io
import json

import pytest

from latticekit.cli import main


def run(*argv: str) -> "tuple[int, str]":
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_lattice_check_reports_distributivity_witness() -> None:
    code, text = run("lattice", "check", "n5")
    assert code == 0
    assert text == "valid lattice; distributive: false; witness: (z,x,y)\n"


def test_lattice_check_distributive() -> None:
    code, text = run("lattice", "check", "chain3xchain2")
    assert code == 0
    assert text == "valid lattice; distributive: true\n"


def test_lattice_check_json() -> None:
    code, text = run("lattice", "check", "m3", "--json")
    payload = json.loads(text)
    assert code == 0
    assert payload["elements"] == ["0", "a", "b", "c", "1"]
    assert payload["valid"] == {"holds": True}
    assert payload["distributive"]["holds"] is False


def test_lattice_check_from_file(tmp_path) -> None:
    path = tmp_path / "diamond.lat"
    path.write_text("lattice diamond\nelements: 0 a b 1\ncovers: 0<a 0<b a<1 b<1\n")
    code, text = run("lattice", "check", str(path))
    assert code == 0
    assert text.startswith("valid lattice; distributive: true")


def test_lattice_list() -> None:
    code, text = run("lattice", "list", "--json")
    rows = {row["name"]: row for row in json.loads(text)}
    assert code == 0
    assert rows["n5"] == {"name": "n5", "elements": 5, "distributive": False}
    assert rows["bool3"]["elements"] == 8


def test_lattice_show_round_trips_through_check(tmp_path) -> None:
    code, text = run("lattice", "show", "n5")
    assert code == 0
    path = tmp_path / "n5.lat"
    path.write_text(text)
    assert run("lattice", "check", str(path))[1].startswith("valid lattice; distributive: false")


def test_expr_normalize() -> None:
    code, text = run("expr", "normalize", "--lattice", "chain4", "--vars", "x1,x2", "x1 & a | x1 & x2 | a & x2")
    assert code == 0
    assert text.splitlines() == ["a & x1 | a & x2 | x1 & x2", "{1} -> a", "{2} -> a", "{1,2} -> 1"]


def test_expr_normalize_cnf_json() -> None:
    argv = ["expr", "normalize", "--lattice", "chain4", "--vars", "x1,x2", "--form", "cnf", "--json"]
    code, text = run(*argv, "x1 & a | x1 & x2 | a & x2")
    payload = json.loads(text)
    assert code == 0
    assert payload["form"] == "cnf"
    assert payload["coefficients"] == [["{1}", "a"], ["{2}", "a"], ["{1,2}", "0"]]


def test_expr_eval() -> None:
    code, text = run("expr", "eval", "--lattice", "n5", "--at", "x1=x,x2=y", "x1 | x2")
    assert code == 0
    assert text == "1\n"


def test_expr_eval_defaults_to_the_three_element_chain() -> None:
    assert run("expr", "eval", "--at", "x1=a,x2=1", "x1 & x2") == (0, "a\n")


def test_expr_equiv() -> None:
    assert run("expr", "equiv", "--lattice", "chain3", "--vars", "x1,x2", "x1 & (x1 | x2)", "x1") == (0, "equivalent\n")
    code, text = run("expr", "equiv", "--lattice", "n5", "--vars", "x1,x2,x3", "x1 & (x2 | x3)", "x1 & x2 | x1 & x3")
    assert code == 1
    assert text == "not equivalent\n"


def test_map_check() -> None:
    assert run("map", "check", "--lattice", "chain3", "map: 0->0 a->1 1->1") == (0, "continuous\n")
    code, text = run("map", "check", "--lattice", "n5", "map: 0->0 x->y y->x z->z 1->1")
    assert code == 1
    assert text.startswith("not continuous: {")


def test_map_check_strict_continuity() -> None:
    code, text = run("map", "check", "--lattice", "chain3", "--strict-continuity", "map: 0->a a->a 1->1")
    assert code == 1
    assert text.startswith("not continuous")
    assert run("map", "check", "--lattice", "chain3", "map: 0->a a->a 1->1")[0] == 0


def test_duality_check_cd() -> None:
    code, text = run("duality", "check-cd", "--lattice", "n5")
    assert code == 1
    assert text.splitlines() == ["FAIL", "ground: {x,y,z}", "family: {x},{y,z}", "lower: x", "upper: z"]
    assert run("duality", "check-cd", "--lattice", "chain3") == (0, "PASS (no violation on ground sets of size <= 3)\n")


def test_duality_crosscut() -> None:
    code, text = run("duality", "crosscut", "--lattice", "bool2", "--hfamily", "{a,b}", "--kfamily", "{a},{b}")
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "cone: lower 0 upper 0"
    assert lines[1].endswith("equal: true")


def test_functional_example_then_classify(tmp_path) -> None:
    code, text = run("functional", "example", "median")
    assert code == 0
    path = tmp_path / "median.fn"
    path.write_text(text)
    code, text = run("functional", "classify", "--lattice", "chain3", "--table", str(path))
    assert code == 0
    assert text.splitlines()[0] == (
        "nondecreasing=true idempotent=true homogeneous=true range_homogeneous=true "
        "invariant=true polynomial=true sugeno=true term_functional=true"
    )


def test_functional_classify_reports_witnesses(tmp_path) -> None:
    path = tmp_path / "example.fn"
    path.write_text(run("functional", "example", "homogeneous-non-monotone")[1])
    code, text = run("functional", "classify", "--lattice", "chain3", "--table", str(path), "--json")
    payload = json.loads(text)
    assert code == 0
    assert payload["flags"]["homogeneous"] is True
    assert payload["flags"]["nondecreasing"] is False
    assert "nondecreasing" in payload["witnesses"]


def test_sugeno_eval(tmp_path) -> None:
    path = tmp_path / "v.cap"
    path.write_text("capacity k=2 lattice=chain3\n{} -> 0\n{1} -> a\n{2} -> 0\n{1,2} -> 1\n")
    assert run("sugeno", "eval", "--lattice", "chain3", "--capacity", str(path), "--at", "1,0") == (0, "a\n")
    assert run("sugeno", "eval", "--lattice", "chain3", "--capacity", str(path), "--at", "1,1") == (0, "1\n")


def test_verify_lattices_suite() -> None:
    code, text = run("verify", "--suite", "lattices", "--lattice", "chain2", "--lattice", "n5", "--deterministic")
    assert code == 0
    assert text.splitlines()[-1].startswith("verdict: pass")


def test_verify_json_is_byte_stable() -> None:
    argv = ("verify", "--suite", "lattices", "--lattice", "chain3", "--deterministic", "--json")
    first = run(*argv)
    assert first == run(*argv)
    assert json.loads(first[1])["elapsed"] == 0.0


SMALL_SAMPLE_FLAGS = ["--random-tables", "3", "--term-samples", "3", "--capacity-samples", "3"]
SMALL_SAMPLE_FLAGS += ["--cone-samples", "3", "--grid-samples", "3"]


@pytest.mark.parametrize("suite", ["thm32", "thm34", "thm43", "prop45", "thm47", "thm48", "cones", "examples"])
def test_verify_accepts_claim_selections(suite) -> None:
    argv = ["verify", "--suite", suite, "--lattice", "chain3", "--deterministic", "--json"]
    code, text = run(*argv, *SMALL_SAMPLE_FLAGS)
    payload = json.loads(text)
    assert code == 0
    assert payload["suite"] == suite
    assert payload["verdict"] == "pass"
    assert payload["checks"]


def test_input_error_exits_with_2(capsys) -> None:
    code, text = run("lattice", "check", "no-such-lattice")
    assert code == 2
    assert text == ""
    assert capsys.readouterr().err.startswith("error: ")


def test_parse_error_exits_with_2(capsys) -> None:
    code, _ = run("expr", "eval", "--lattice", "chain3", "--at", "x1=a", "x1 &")
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_guard_flag_is_applied(capsys) -> None:
    code, _ = run("lattice", "check", "bool3", "--max-size", "4")
    assert code == 2
    assert "max_elements" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [[], ["lattice"], ["expr", "normalize", "x1"], ["verify", "--suite", "nope"]])
def test_usage_errors_exit_with_2(argv) -> None:
    assert main(argv, out=io.StringIO()) == 2
