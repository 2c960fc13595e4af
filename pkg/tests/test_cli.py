import json

import pytest
from click.testing import CliRunner

from adelic.cli import EXIT_CONTRACT, EXIT_INSTABILITY, EXIT_OK, main, run


def _json(capsys, argv):
    code = run(["--json", *argv])
    out = json.loads(capsys.readouterr().out)
    return code, out


def test_zeta_curve_three_routes(capsys):
    code, out = _json(capsys, ["zeta", "curve", "--q", "2", "--model", "p1", "--terms", "6", "--method", "all"])
    assert code == EXIT_OK and out["status"] == "ok"
    routes = out["payload"]["coefficients"]
    assert set(routes) == {"euler", "dirichlet", "hecke"}
    assert all(r == [1, 3, 7, 15, 31, 63] for r in routes.values())


def test_zeta_curve_elliptic(capsys):
    code, out = _json(capsys, ["zeta", "curve", "--q", "2", "--model", "plane", "--poly", "y^2*z+y*z^2+x^3"])
    p = out["payload"]
    assert code == 0 and p["genus"] == 1 and p["agree"]
    assert p["fit"] == {"numerator": [1, 0, 2], "denominator": [1, -3, 2]}
    assert p["functional_equation"]


def test_rr_verify_example(capsys):
    code, out = _json(capsys, ["rr", "verify", "--q", "2", "--divisor", "2*(inf)"])
    p = out["payload"]
    assert code == 0 and p["l_D"] == 3 and p["l_K_minus_D"] == 0
    assert p["identity"] == "3-0 = 2+1"


def test_lattice_enumerate_text():
    res = CliRunner().invoke(main, ["lattice", "enumerate"])
    assert res.exit_code == 0
    assert "size: 18" in res.output and "digraph" in res.output


def test_lattice_enumerate_json(capsys):
    code, out = _json(capsys, ["lattice", "enumerate"])
    assert code == 0 and out["payload"]["size"] == 18 and len(out["payload"]["elements"]) == 18


def test_lattice_model(capsys):
    code, out = _json(capsys, ["lattice", "model"])
    p = out["payload"]
    assert code == 0 and p["homomorphism"] and p["classes"] == 9 and not p["injective"]


@pytest.mark.parametrize(
    "argv,key",
    [
        (["zeta", "surface", "--q", "3", "--terms", "6"], "holds"),
        (["hecke", "fe", "--q", "3"], "equation_holds"),
        (["fourier", "demo", "--q", "2", "--divisor", "(t) + inf"], "cube_holds"),
        (["cohomology", "restricted", "--q", "3", "--divisor", "(t) - 3*inf"], "matches"),
        (["residue", "point", "--q", "3", "--form", "1/(u*t*(u+t)) du^dt"], "holds"),
        (["residue", "curve", "--q", "2", "--form", "u/((u^2+u+1)*t) du^dt"], "holds"),
        (["measure", "torsor", "--q", "3", "--base", "1,-1"], "torsor_laws"),
    ],
)
def test_subcommands_report_success(capsys, argv, key):
    code, out = _json(capsys, argv)
    assert code == 0 and out["status"] == "ok" and out["payload"][key] is True


def test_json_flag_on_command(capsys):
    code = run(["hecke", "fe", "--q", "2", "--json"])
    assert code == 0 and json.loads(capsys.readouterr().out)["status"] == "ok"


def test_output_is_deterministic(capsys):
    argv = ["fourier", "demo", "--q", "3", "--divisor", "0", "--seed", "5"]
    _, a = _json(capsys, argv)
    _, b = _json(capsys, argv)
    a.pop("seconds"), b.pop("seconds")
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["zeta", "curve", "--q", "6"],
        ["rr", "verify", "--q", "2", "--divisor", "2*(t"],
        ["rr", "verify", "--q", "2", "--divisor", "(t^2+1)"],
        ["hecke", "fe", "--q", "2", "--shift", "5"],
        ["residue", "point", "--q", "2", "--form", "1/(u*t)"],
        ["zeta", "curve", "--q", "2", "--model", "plane"],
    ],
)
def test_contract_violations(capsys, argv):
    code, out = _json(capsys, argv)
    assert code == EXIT_CONTRACT and out["status"] == "contract-violation" and out["payload"]["error"]


def test_parse_error_names_location(capsys):
    _, out = _json(capsys, ["rr", "verify", "--q", "2", "--divisor", "2*(t"])
    assert any(ch.isdigit() for ch in out["payload"]["error"])


def test_unknown_subcommand_is_a_usage_error():
    res = CliRunner().invoke(main, ["frobnicate"])
    assert res.exit_code != 0 and "Usage" in res.output
    assert run(["frobnicate"]) != 0


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_CONTRACT, EXIT_INSTABILITY) == (0, 2, 3)


def test_unstable_truncation_exits_with_three(capsys):
    argv = ["cohomology", "restricted", "--q", "2", "--divisor", "3*(t) - inf", "--bounds", "0,0"]
    code, out = _json(capsys, argv)
    assert code == EXIT_INSTABILITY and out["status"] == "instability"
    code, out = _json(capsys, argv[:-2])
    assert code == EXIT_OK and (out["payload"]["h0"], out["payload"]["h1"]) == (3, 0)
