import json
import subprocess
import sys

import pytest

from strangedual.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "x^3+x*y^6+z^2")
    assert code == 0 and "IIA(2,3,18)" in out and "(6,2,9;18)" in out


def test_json_flag_in_either_position(capsys):
    a = run(capsys, "--json", "classify", "x^3+x*y^6+z^2")[1]
    b = run(capsys, "classify", "x^3+x*y^6+z^2", "--json")[1]
    assert a == b
    assert json.loads(a)["family"] == {"type": "IIA", "params": [2, 3, 18]}


@pytest.mark.parametrize("argv", [
    ["classify", "x^2+y^3+z^5"],          # grading index 1
    ["classify", "x^2+y^2+z^2"],          # grading index 4
    ["classify", "x^2+"],                 # syntax
    ["dualize", "bogus"],
    ["dualize", "IIA(2,3,17)"],           # invalid parameters
    ["virtual", "I(2,2,4)"],              # not virtual
    ["enumerate", "0"],                   # empty result
    ["dynkin", "no-such-name"],
    ["dynkin", "--gamma", "2,3"],
    ["nonsense"],
])
def test_invalid_input_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_dualize_by_name(capsys):
    code, out, _ = run(capsys, "--json", "dualize", "J_{3,-1}")
    data = json.loads(out)
    assert code == 0
    assert data["family"] == {"type": "IIA", "params": [2, 3, 18]}


def test_zeta_and_poincare(capsys):
    code, out, _ = run(capsys, "zeta", "IIA(2,3,18)")
    assert code == 0 and "(degree 15)" in out and "theorem: pass" in out
    code, out, _ = run(capsys, "poincare", "IIA(2,3,18)")
    assert code == 0 and "P(t) = (1-t^16)(1-t^18)/((1-t^6)(1-t^8)(1-t^9)(1-t^10))" in out


def test_enumerate(capsys):
    code, out, _ = run(capsys, "--json", "enumerate", "1", "--grid-bound", "24")
    assert code == 0 and len(json.loads(out)["families"]) == 11


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "zeta")[0] == 0
    assert run(capsys, "verify", "duality", "--family", "J_{3,-1}")[0] == 0
    # all proof premises hold but the orbit computation disagrees with the closed forms
    assert run(capsys, "verify", "duality", "--family", "IV2#(3,6,30)")[0] == 3
    assert run(capsys, "verify", "tables", "--tables", "T9,T10,T11,T12")[0] == 0


def test_dynkin_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "dynkin", "J_{3,-1}")
    assert code == 0 and out.startswith("graph") and out.count("[label=") == 15
    target = tmp_path / "u.json"
    code, _, _ = run(capsys, "dynkin", "--gamma", "2,3;3,3", "--format", "json", "--output", str(target))
    assert code == 0 and len(json.loads(target.read_text())["labels"]) == 12


def test_output_is_deterministic(capsys):
    for argv in (["--json", "dualize", "IIB(6,2,4)"], ["dynkin", "U_{1,-1}"], ["--json", "verify", "zeta"]):
        first = run(capsys, *argv)
        assert first[0] == 0
        assert run(capsys, *argv) == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "strangedual", "weights", "IIA(2,3,18)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "c_f: 2" in proc.stdout
