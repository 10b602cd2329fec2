import json

import pytest

from ordspace.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def report(tmp_path, argv, capsys):
    out = tmp_path / "report.json"
    code, _, err = run(argv + ["--out", str(out)], capsys)
    return code, json.loads(out.read_text()) if out.exists() else None, err


def verify(path, capsys):
    code, out, _ = run(["verify", str(path)], capsys)
    return code, json.loads(out)


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "c2.space"],
        ["archimedean-check", "open_quadrant.space"],
        ["seminorm", "halfplane.space"],
        ["states", "wedge.space"],
        ["norm", "c2.space", "--kind", "m"],
        ["norm", "c2.space", "--kind", "M", "--tol", "1e-4"],
        ["norm", "c2.space", "--kind", "dec", "--tol", "1e-4"],
        ["norm", "c2.space", "--kind", "t", "--t", "1/2", "--tol", "1e-4"],
        ["norm", "m2.space", "--kind", "m"],
        ["norm", "m2.space", "--kind", "M"],
        ["norm", "wedge.space", "--kind", "dec"],
        ["archimedeanize", "halfplane.space"],
        ["quotient", "r3_orthant.space"],
        ["arch-quotient", "r3_orthant.space", "--ideal", "[[0,0,1]]"],
        ["embed", "wedge.space", "--samples", "10"],
        ["extend-functional", "r3_orthant.space"],
        ["first-iso", "r3_orthant.space"],
    ],
)
def test_commands_and_verify(argv, tmp_path, data_dir, capsys):
    argv = [argv[0], str(data_dir / argv[1])] + argv[2:]
    code, rep, err = report(tmp_path, argv, capsys)
    assert code == 0, err
    assert rep["operation"] == argv[0]
    assert len(rep["inputs_digest"]) == 64
    code, ver = verify(tmp_path / "report.json", capsys)
    assert code == 0 and ver["verified"], ver


def test_exact_values_in_reports(tmp_path, data_dir, capsys):
    _, rep, _ = report(tmp_path, ["norm", str(data_dir / "c2.space"), "--kind", "m"], capsys)
    assert rep["result"]["squared"] == "1"
    _, rep, _ = report(tmp_path, ["archimedean-check", str(data_dir / "open_quadrant.space")], capsys)
    assert rep["result"]["archimedean"] is False


def test_tampered_report_fails_verification(tmp_path, data_dir, capsys):
    _, rep, _ = report(tmp_path, ["norm", str(data_dir / "c2.space"), "--kind", "M", "--tol", "1e-4"], capsys)
    rep["result"]["lower"] = "3/2"
    path = tmp_path / "forged.json"
    path.write_text(json.dumps(rep))
    code, ver = verify(path, capsys)
    assert code == 3 and not ver["verified"]


def test_exit_codes(tmp_path, data_dir, capsys):
    bad = tmp_path / "bad.space"
    bad.write_text("{oops")
    assert run(["validate", str(bad)], capsys)[0] == 2
    nounit = tmp_path / "nounit.space"
    nounit.write_text(json.dumps({
        "schema_version": 1, "scalar_mode": "exact", "dimension": 2,
        "cone": {"type": "polyhedral_h", "rows": [["1", "0"], ["0", "1"]]}, "unit": ["1", "0"],
    }))
    assert run(["validate", str(nounit)], capsys)[0] == 3
    assert run(["norm", str(nounit), "--kind", "M", "--element", "(1,0)"], capsys)[0] == 3
    assert run(["quotient", str(data_dir / "m2.space"), "--ideal", "[[1,0,0,0]]"], capsys)[0] == 4
    assert run(["embed", str(data_dir / "open_quadrant.space")], capsys)[0] == 3
    code = run(["norm", str(data_dir / "c2.space"), "--kind", "M", "--tol", "1e-12", "--max-rounds", "1"], capsys)[0]
    assert code == 5


def test_stdout_report(data_dir, capsys):
    code, out, _ = run(["validate", str(data_dir / "c2.space")], capsys)
    assert code == 0 and json.loads(out)["result"]["valid"]
