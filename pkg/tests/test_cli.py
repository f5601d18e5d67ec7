import json

import pytest

from drwitt.cli import dumps, main, run
from golden_cases import CASES, path


def report(*argv):
    rep, code, _ = run(list(argv))
    return rep, code


def test_drw_mod_p_example():
    rep, code = report("drw", "--ring", "Zp-unramified", "--p", "3", "--n", "2", "--q", "1", "--mod-p")
    assert code == 0
    assert rep == {"dim": 2, "predicted": 2, "stabilized": True}


def test_witt_fp_iso_example():
    rep, code = report("witt", "fp-iso", "--p", "3", "--n", "2")
    assert code == 0 and rep["verified"] and rep["checked"] == 81


def test_tate_example():
    rep, code = report("tate", "--m", "3", "--M", "Z", "--i", "0")
    assert code == 0 and rep["group"] == ["3"]
    rep, _ = report("tate", "--m", "3", "--M", "Z/9", "--s", "2")
    assert rep["group"] == ["3"]


def test_kmilnor_f9():
    rep, code = report("kmilnor", "--field", "F9")
    assert code == 0
    assert rep["group"]["invariants"] == [] and rep["steinberg_pairs"] == 7


def test_witt_ops():
    rep, code = report("witt", "ops", "--p", "3", "--n", "2", "--x", "1,0", "--y", "1,0")
    assert code == 0
    # [1] + [1] = (2, (1 + 1 - 2^3)/3) = (2, -2)
    assert rep["sum"]["coords"] == ["2", "-2"]
    assert rep["product"]["coords"] == ["1", "0"]


@pytest.mark.parametrize("argv", [
    ["drw", "--ring", "Zp-unramified", "--p", "3", "--n", "9"],        # missing --q
    ["drw", "--ring", "Qp", "--p", "3", "--n", "1", "--q", "0"],         # unknown preset
    ["witt", "ops", "--p", "3", "--n", "2", "--x", "1,2"],              # missing --y
    ["witt", "ghost", "--p", "3", "--n", "2", "--x", "1"],              # wrong length
    ["tate", "--m", "3"],
    ["tate", "--m", "3", "--M", "Z"],
    ["kmilnor"],
    ["kmilnor", "--field", "F6"],
    ["fontaine", "cocycle-check", "--units", "3"],
    ["drw", "--ring", "Zp-unramified", "--p", "2", "--n", "1", "--q", "0"],
    ["drw", "--ring", "Zp-unramified", "--p", "1", "--n", "1", "--q", "0"],
    [],
])
def test_invalid_input_exit_one(argv):
    rep, code = report(*argv)
    assert code == 1 and "error" in rep


def test_not_stabilized_exit_two():
    rep, code = report("drw", "--ring", "Zp-unramified", "--p", "3", "--n", "2", "--q", "1", "--depth", "3")
    assert code == 2
    assert rep["group"]["saturation"]["stabilized"] is False


def test_config_file(tmp_path):
    cfg = tmp_path / "job.ini"
    cfg.write_text("[job]\ncommand = drw\nring = Zp-unramified\np = 3\nn = 2\nq = 1\nmod_p = true\n")
    rep, code = report("--config", str(cfg))
    assert code == 0 and rep == {"dim": 2, "predicted": 2, "stabilized": True}
    # explicit flags win over the file
    rep, _ = report("--config", str(cfg), "drw", "--n", "1")
    assert rep["dim"] == 1
    bad = tmp_path / "bad.ini"
    bad.write_text("[other]\n")
    assert report("--config", str(bad))[1] == 1
    assert report("--config", str(tmp_path / "missing.ini"))[1] == 1


def test_config_action(tmp_path):
    cfg = tmp_path / "job.ini"
    cfg.write_text("[job]\ncommand = witt\naction = fp-iso\np = 2\nn = 3\n")
    rep, code = report("--config", str(cfg))
    assert code == 0 and rep["checked"] == 64


def test_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["--output", str(out), "tate", "--m", "4", "--M", "Z/8", "--i", "1"])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["group"] == ["4"]


def test_main_prints_sorted_json(capsys):
    assert main(["tate", "--m", "2", "--M", "Z", "--s", "1"]) == 0
    text = capsys.readouterr().out
    assert text == dumps(json.loads(text))


def test_deterministic_in_process():
    argv = ["kmilnor", "--field", "F9"]
    assert dumps(report(*argv)[0]) == dumps(report(*argv)[0])


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_regenerates(name):
    rep, code = report(*CASES[name])
    assert code in (0, 2)
    with open(path(name), encoding="utf-8") as fh:
        assert dumps(rep) == fh.read()
