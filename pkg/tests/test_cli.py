import json
from pathlib import Path

import pytest

from coverdual.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    return json.loads(out)


@pytest.mark.parametrize("family, golden", [("SL", "table1_SL.csv"), ("Spin-odd", "table2_Spin-odd.csv"),
                                            ("Sp", "table3_Sp.csv"), ("Spin-even", "table4_Spin-even.csv"),
                                            ("E", "table5_E.csv")])
def test_tables_match_golden(capsys, family, golden):
    code, out, _ = run(capsys, "tables", "--family", family)
    assert code == 0
    assert out.strip().splitlines() == (GOLDEN / golden).read_text().strip().splitlines()


def test_dual_group_text_and_json(capsys):
    code, out, _ = run(capsys, "dual-group", "--family", "Sp", "--rank", "3", "--degree", "2")
    assert code == 0 and "Sp_6" in out
    data = run_json(capsys, "dual-group", "--family", "Sp", "--rank", "3", "--degree", "2")
    assert data["label"] == "Sp_6" and data["center"] == {"factors": [2], "free_rank": 0}


@pytest.mark.parametrize("rank, label", [(1, "GSp_2"), (2, "PGSp_4 x GL_1"), (3, "GSp_6")])
def test_dual_group_gsp(capsys, rank, label):
    assert run_json(capsys, "dual-group", "--family", "GSp", "--rank", str(rank), "--degree", "2")["label"] == label


def test_symbols(capsys):
    assert run_json(capsys, "hilbert", "--place", "2", "-u", "2", "-v", "5")["value"] == -1
    assert run_json(capsys, "hilbert", "--place", "R", "-u", "-1", "-v", "-1")["value"] == -1
    rec = run_json(capsys, "reciprocity", "-u", "3", "-v", "5")
    assert rec["product"] == 1 and rec["values"]["Q_3"] == -1
    mg = run_json(capsys, "metagalois", "--place", "5")
    assert mg["cocycle_failures"] == 0 and mg["split"]


def test_torus_commands(capsys):
    center = run_json(capsys, "torus-center", "--C", "1", "--n", "3", "--p", "7")
    assert center == {"center_order": 3, "group_order": 27, "matches": True, "predicted_order": 3}
    twist = run_json(capsys, "basis-change", "--C", "1", "--g", "-1", "-u", "3", "--p", "5")
    assert twist["exponents"] == [1] and twist["involutive"]
    sharp = run_json(capsys, "theta-sharp", "--C", "1", "--n", "2", "--p", "5", "-u", "5", "-v", "5")
    assert sharp["equal"] and sharp["basis_invariant"]
    orbit = run_json(capsys, "orbit-transfer", "--case", "A2-swap", "--m", "2")
    assert orbit["bijective"]


def test_real_commands(capsys):
    assert run_json(capsys, "real-kappa", "--Q", "1")["kappa"] == ["1/2"]
    ds = run_json(capsys, "discrete-series", "--case", "mp2", "--R", "3")
    assert [o["rep"] for o in ds["orbits"]] == [["1/2"], ["3/2"], ["5/2"]]
    assert all(len(f["preimages"]) == 1 for f in ds["fibers"])
    idx = run_json(capsys, "discrete-series", "--case", "index2", "--R", "2")
    assert [len(f["preimages"]) for f in idx["fibers"]] == [0, 1, 0, 1]


def test_validate(capsys):
    assert run_json(capsys, "validate", "--family", "B", "--rank", "2")["datum"]["family"] == "B"


@pytest.mark.parametrize("argv", [["hilbert", "--place", "4", "-u", "2", "-v", "3"],
                                  ["torus-center", "--C", "1", "--n", "3", "--p", "5"],
                                  ["theta-sharp", "--C", "1", "--n", "3", "--p", "7", "-u", "7", "-v", "3"],
                                  ["basis-change", "--C", "1", "--g", "2", "-u", "3", "--p", "5"],
                                  ["real-kappa", "--Q", "1,1;0,1"],
                                  ["discrete-series", "--case", "mp2", "--R", "0"]])
def test_domain_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


@pytest.mark.parametrize("argv", [[], ["hilbert", "--place", "5"], ["dual-group", "--family", "Z", "--rank", "2",
                                                                     "--degree", "2"],
                                  ["torus-center", "--C", "1,2;3", "--n", "2", "--p", "5"]])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "coverdual", "hilbert", "--place", "5", "-u", "5", "-v", "5"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "1"
