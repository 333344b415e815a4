import json
import shutil
import subprocess

import pytest

from symnet.cli import main
from symnet.extraction import one_row_matrix
from symnet.indices import IndexSet
from symnet.nets import full_net
from symnet.symplectic import T
from symnet.zmod import ModRing

BLOCK = [[1, 2, -1, -2], [3, 4, -3, -4]]


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def test_run_flags(capsys):
    assert main(["run", "--m", "4", "--n", "4", "--suite", "steinberg", "--trials", "50", "--seed", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out[0]["suite"] == "steinberg" and out[0]["status"] == "pass"


def test_run_empty_config(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"m": 4, "n": 2})
    assert main(["run", "--config", path]) == 0
    assert capsys.readouterr().out.strip() == "[]"


def test_run_mutation_exits_one(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"m": 4, "n": 4, "nu": BLOCK, "trials": 200, "seed": 4,
                                      "extra_levels": {"sigma": [[1, 3, 2]]}})
    assert main(["run", "--config", path, "--suite", "sandwich", "--mutate"]) == 1
    res = json.loads(capsys.readouterr().out)[0]
    trial = res["counterexample"]["trial"]
    assert main(["run", "--config", path, "--suite", "sandwich", "--mutate", "--trial", str(trial)]) == 1
    again = json.loads(capsys.readouterr().out)[0]
    assert again["counterexample"] == res["counterexample"]


def test_run_is_byte_deterministic(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"m": 8, "n": 4, "nu": BLOCK, "trials": 15,
                                      "suites": ["group-closure", "transporter", "crt", "extraction"]})
    main(["run", "--config", path, "--format", "text"])
    first = capsys.readouterr().out
    main(["run", "--config", path, "--format", "text"])
    assert capsys.readouterr().out == first


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["run"],
        ["run", "--m", "4", "--n", "2", "--suite", "nope"],
        ["run", "--m", "x", "--n", "2"],
        ["run", "--m", "1", "--n", "2"],
        ["decompose", "--p", "1"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse-level errors
        code = exc.code
    assert code == 2


def test_bad_json_exits_two(tmp_path, capsys):
    path = write(tmp_path, "c.json", '{"m": 4, "n":')
    assert main(["run", "--config", path]) == 2
    assert "c.json:1:" in capsys.readouterr().err


def test_decompose(tmp_path, capsys):
    a = one_row_matrix({2: 1, -2: 3, 1: 2}, 1, ModRing(4), IndexSet(2))
    path = write(tmp_path, "a.json", a.to_json())
    assert main(["decompose", "--matrix", path, "--p", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["round_trip"] is True and out["length_discrepancy"] == 0
    assert out["word"][-1] == {"kind": "long", "i": -1, "j": 1, "xi": 2}
    assert main(["decompose", "--matrix", path, "--p", "2"]) == 1
    assert main(["decompose", "--matrix", path, "--p", "7"]) == 2
    bad = a.to_json()
    bad["rows"][0][0] = 2
    assert main(["decompose", "--matrix", write(tmp_path, "b.json", bad), "--p", "1"]) == 2
    assert "not symplectic" in capsys.readouterr().err


def test_net_closure(tmp_path, capsys):
    nu = write(tmp_path, "nu.json", {"n": 4, "classes": BLOCK})
    seed = write(tmp_path, "s.json", {"m": 4, "sigma": [[1, 3, 2]]})
    assert main(["net-closure", "--nu", nu, "--seed-levels", seed]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["valid"] and out["net"]["m"] == 4
    assert main(["net-closure", "--nu", nu, "--m", "8"]) == 0
    capsys.readouterr()
    assert main(["net-closure", "--nu", nu]) == 2
    bad = write(tmp_path, "bad.json", {"n": 2, "classes": [[1, -2], [2], [-1]]})
    assert main(["net-closure", "--nu", bad, "--m", "4"]) == 2
    assert "not unitary" in capsys.readouterr().err


def test_crt_check(tmp_path, capsys):
    R, iset = ModRing(12), IndexSet(2)
    a = write(tmp_path, "a.json", T(1, 2, 7, R, iset).to_json())
    n = write(tmp_path, "n.json", full_net(R, iset).to_json())
    assert main(["crt-check", "--matrix", a, "--net", n]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"direct": True, "factors": {"4": True, "3": True}, "agree": True}
    assert main(["crt-check", "--m", "12", "--n", "3", "--trials", "40"]) == 0
    assert json.loads(capsys.readouterr().out)[0]["status"] == "pass"
    other = write(tmp_path, "o.json", full_net(ModRing(4), iset).to_json())
    assert main(["crt-check", "--matrix", a, "--net", other]) == 2


@pytest.mark.skipif(shutil.which("symnet") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["symnet", "run", "--m", "4", "--n", "2", "--suite", "crt", "--trials", "5",
                           "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0 and "crt" in proc.stdout
    proc = subprocess.run(["symnet", "run", "--m", "4"], capture_output=True, text=True)
    assert proc.returncode == 2
