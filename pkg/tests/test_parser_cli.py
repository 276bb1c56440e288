import io
import subprocess
import sys
from pathlib import Path

import pytest

from skewcat.cli import main
from skewcat.coeff import GF, QQ, IntegersMod
from skewcat.fixtures import sqr_discrete_system
from skewcat.parser import ParseError, load_system, make_algebra, parse_coeff, parse_element, parse_system

ROOT = Path(__file__).resolve().parent.parent
SYSTEMS = ROOT / "systems"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def kv(text):
    out = {}
    for line in text.splitlines():
        k, _, v = line.partition("=")
        out.setdefault(k, v)
    return out


# -- parser ------------------------------------------------------------------------


def test_sqr_file_matches_fixture():
    sf = load_system(SYSTEMS / "sqr_discrete.sys")
    t = sqr_discrete_system()
    assert sf.sys.cat.objects == t.cat.objects
    assert set(sf.sys.cat.morphisms) == set(t.cat.morphisms)
    for m, n in t.cat.composable_pairs():
        assert sf.sys.cat.compose(m, n) == t.cat.compose(m, n)
    assert sf.sys.action == t.action
    assert sf.coeff == GF(2)
    assert sf.violations == []


def test_partial_file_matches_category_file():
    a = load_system(SYSTEMS / "sqr_discrete.sys").sys
    b = load_system(SYSTEMS / "sqr_partial.sys").sys
    assert set(a.cat.morphisms) == set(b.cat.morphisms)
    assert all(a.action[n] == b.action[n] for n in a.cat.morphisms)


def test_all_sample_files_parse():
    for path in sorted(SYSTEMS.glob("*.sys")):
        load_system(path)


@pytest.mark.parametrize(
    "text, line",
    [
        ("object X\nobject X\n", 2),
        ("object X\nmorphism f : X -> Z\n", 2),
        ("object X\n\n# comment\nfrobnicate\n", 4),
        ("object X\nspace X = {0, 1}\nmap id_X : 0 -> 0, 1 -> 1\nmap q : 0 -> 0\n", 4),
        ("object X\nspace X = {0}\ncoeff Q\ncoeff Q\n", 4),
        ("object X\nspace X = {0}\ncoeff Fp 4\n", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_system(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_missing_objects():
    with pytest.raises(ParseError):
        parse_system("# nothing here\n")


def test_coefficient_specs():
    assert parse_coeff("Q") is QQ
    assert parse_coeff("Fp 3") == GF(3) == parse_coeff("F3")
    assert parse_coeff("Zmod 4") == IntegersMod(4)
    assert parse_coeff("formal") == "formal"
    with pytest.raises(ValueError):
        parse_coeff("R")


def test_element_literals():
    sf = load_system(SYSTEMS / "sqr_discrete.sys")
    alg = make_algebra(sf)
    R = alg.coeffs
    x = parse_element("{-1:1, 1:1}@X u[sqr] + 1 u[id_Y]", alg)
    assert x == alg.u("sqr", R.element("X", [1, 0, 1])) + alg.u("id_Y")
    assert parse_element("u[abs] - u[abs]", alg).is_zero()
    assert parse_element("0", alg).is_zero()
    with pytest.raises(ValueError):
        parse_element("{0:1}@Y u[sqr]", alg)
    with pytest.raises(ValueError):
        parse_element("1 u[nope]", alg)


def test_formal_literals_roundtrip():
    sf = load_system(SYSTEMS / "sqr_discrete.sys")
    alg = make_algebra(sf, "formal")
    x = parse_element("(f_X g_X' + h_X) u[abs] + g_Y u[sqrt]", alg)
    assert parse_element(repr(x), alg) == x


def test_printed_elements_parse_back():
    alg = make_algebra(load_system(SYSTEMS / "z2_swap.sys"))
    import random

    rng = random.Random(4)
    for _ in range(20):
        x = alg.random_element(rng)
        assert parse_element(repr(x), alg) == x


# -- command line ---------------------------------------------------------------------


def test_validate_exit_codes():
    assert run("validate", SYSTEMS / "sqr_discrete.sys")[0] == 0
    code, out = run("validate", SYSTEMS / "broken.sys")
    assert code == 1
    assert "witness=functor-law" in out


def test_invalid_input_exits_two(tmp_path):
    bad = tmp_path / "bad.sys"
    bad.write_text("object X\nmorphism f : X -> Q\n")
    assert run("analyze", bad)[0] == 2
    assert run("analyze", tmp_path / "missing.sys")[0] == 2
    assert run("analyze", SYSTEMS / "broken.sys")[0] == 2
    assert run("ideal", SYSTEMS / "sqr_discrete.sys")[0] == 2
    assert run("reproduce", "example20")[0] == 2
    assert run("iip", SYSTEMS / "sqr_discrete.sys", "--cap", 8)[0] == 2
    assert run("iip", SYSTEMS / "z2_swap.sys")[0] == 2
    assert run("random", "--profile", "nope")[0] == 2
    assert run("frobnicate")[0] == 2


def test_analyze_report():
    code, out = run("analyze", SYSTEMS / "sqr_discrete.sys")
    assert code == 0
    r = kv(out)
    assert r["per[X,abs]"] == "{0,1}"
    assert r["sep[X,abs]"] == "{-1}"
    assert r["aperiodic[X]"] == "{-1}"
    assert r["orbit[X,-1]"] == "{-1,1}"
    assert r["top_free"] == "false"
    assert "periodic_point=X 0 abs" in out and "periodic_point=X 1 abs" in out


def test_commutant_and_ideal_reports():
    r = kv(run("commutant", SYSTEMS / "sqr_discrete.sys")[1])
    assert r["commutant_dim"] == "7" and r["max_comm"] == "false"
    code, out = run("ideal", SYSTEMS / "sqr_discrete.sys", "--gens", "uabs")
    r = kv(out)
    assert code == 0 and r["ideal_dim"] == "10" and r["ideal_meet_A_dim"] == "2"
    code, out = run("ideal", SYSTEMS / "sqr_discrete.sys", "--gens", "{-1:1}@X u[sqr]")
    r = kv(out)
    assert code == 0 and r["ideal_dim"] == "2" and r["ideal_meet_A_dim"] == "0"


def test_iip_reports():
    r = kv(run("iip", SYSTEMS / "sqr_discrete.sys")[1])
    assert r["iip"] == "false" and r["candidates"] == "8191"
    assert r["iip_witness"] == "{-1:1, 0:0, 1:0}@X u[sqr]"
    r = kv(run("iip", SYSTEMS / "z2_swap.sys", "--coeff", "F2")[1])
    assert r["iip"] == "true"
    r = kv(run("iip", SYSTEMS / "z2_swap.sys", "--search")[1])
    assert r["iip"] == "unknown"
    r = kv(run("iip", SYSTEMS / "sqr_discrete.sys", "--search", "--coeff", "Q")[1])
    assert r["iip"] == "false"


def test_theorems_report():
    code, out = run("theorems", SYSTEMS / "z4_mod2.sys")
    assert code == 0
    r = kv(out)
    assert (r["top_free"], r["max_comm"], r["iip"]) == ("false", "false", "false")
    code, out = run("theorems", SYSTEMS / "z4_mod2.sys", "--coeff", "Zmod 4")
    assert code == 0 and kv(out)["iip"].startswith("skipped:")


def test_reproduce_symbolic_product():
    code, out = run("reproduce", "example19")
    assert code == 0
    assert out.count("=pass") == 6 and "=fail" not in out
    assert kv(out)["coeff[sqr]"] == "(f_X h_X' + h_X (f_Y'∘sqr) + g_X (h_X'∘abs))"


def test_reproduce_discrete_reports_numbers_and_failing_claims():
    code, out = run("reproduce", "example19-discrete")
    r = kv(out)
    assert (r["top_free"], r["max_comm"], r["iip"]) == ("false", "false", "false")
    assert r["commutant_dim"] == "7"
    assert r["ideal(u_abs)_dim"] == "10" and r["ideal(u_abs)_meet_A_dim"] == "2"
    assert r["span(abs,sqr,sqrt)_dim"] == "8" and r["span(abs,sqr,sqrt)_is_ideal"] == "false"
    # the described ideal is not closed, so the corresponding checks fail with a witness
    assert code == 1
    assert r["witness"].startswith("u_sqrt*u_abs*u_sqr=")


def test_reproduce_truncated_counterexample():
    code, out = run("reproduce", "prop9b")
    assert code == 0
    assert "sigma(1)(X)=2X" in out and kv(out)["samples_with_zero_u0"] == "100"


def test_random_group_actions():
    code, out = run("random", "--profile", "group-action", "--count", 100, "--seed", 7)
    assert code == 0
    assert kv(out)["passed"] == "100/100"
    assert sum(1 for ln in out.splitlines() if ln.startswith("instance ")) == 100


def test_random_all_profiles_over_rationals():
    code, out = run("random", "--count", 2, "--seed", 3, "--coeff", "Q")
    assert code == 0 and kv(out)["passed"] == "8/8"


def test_random_failure_prints_replay_command(monkeypatch):
    from skewcat import analysis

    real = analysis.check_theorems

    def broken(alg, **kw):
        v = real(alg, **kw)
        v.implications.append(("forced", False))
        return v

    monkeypatch.setattr(analysis, "check_theorems", broken)
    code, out = run("random", "--profile", "transformation-monoid", "--count", 2, "--seed", 5)
    assert code == 1
    assert kv(out)["witness"] == "skewcat random --profile transformation-monoid --seed 5 --count 1 --coeff F2"


def test_large_cap_warns(capsys):
    main(["commutant", str(SYSTEMS / "z2_swap.sys"), "--cap", "64"], io.StringIO())
    assert "warning" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "systems/sqr_discrete.sys"],
        ["reproduce", "example19-discrete"],
        ["random", "--count", "5", "--seed", "11"],
    ],
)
def test_reports_are_byte_identical(argv):
    outs = [
        subprocess.run([sys.executable, "-m", "skewcat.cli", *argv], cwd=ROOT, capture_output=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1] and outs[0]
    assert b"\r\n" not in outs[0]
