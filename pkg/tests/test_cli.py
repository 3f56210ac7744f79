import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berkdyn.berkovich import CLASSICAL_INFINITY
from berkdyn.cli import SCHEMA, run
from berkdyn.errors import DegreeMismatch, ParseError
from berkdyn.familyio import format_family, parse_family, parse_point, parse_t_list
from strategies import random_family

GOLDEN = "num = [0, t^(-1), 1]; den = [1]"


def test_parse_family_examples():
    parsed = parse_family(GOLDEN + "; window = 6; tol = 1/100")
    assert parsed.degree == 2
    assert parsed.options == {"window": 6, "tol": Fraction(1, 100)}
    assert parsed.family().pretty() == "z^2 + t^(-1)*z"
    assert parse_family("num = [0, 0, 1]; den = [1]; degree = 3").degree == 3


def test_parse_family_errors():
    with pytest.raises(ParseError) as info:
        parse_family("num = [0, t^, 1]; den = [1]")
    assert info.value.position == 12
    with pytest.raises(ParseError):
        parse_family("num = [1]")
    with pytest.raises(ParseError):
        parse_family(GOLDEN + "; colour = red")
    with pytest.raises(ParseError):
        parse_family(GOLDEN + "; num = [1]")
    with pytest.raises(DegreeMismatch):
        parse_family("num = [0, 0, 1]; den = [1]; degree = 1")


def test_points_and_t_lists():
    assert parse_point("inf") is CLASSICAL_INFINITY and parse_point("∞") is CLASSICAL_INFINITY
    assert parse_point("2 + t").canonical().startswith("(2/1")
    assert parse_t_list("0.1, 0.01,1e-3") == [0.1, 0.01, 0.001]
    assert parse_t_list("0.1i") == [0.1j]
    with pytest.raises(ParseError):
        parse_t_list(" , ")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_family_round_trip(seed):
    import random
    f = random_family(random.Random(seed))
    assert parse_family(format_family(f)).family() == f


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_reduce_square(capsys):
    code, out, _ = _run(capsys, "reduce", "num = [0, 0, 1]; den = [1]")
    assert code == 0
    assert out.splitlines()[0] == "H = 1; phi = ζ^2"
    assert "good reduction" in out


def test_limit_json(capsys):
    code, out, _ = _run(capsys, "limit", GOLDEN, "--out", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == SCHEMA and payload["command"] == "limit"
    atoms = {a["display"]: a["mass"] for a in payload["limit"]["atoms"]}
    assert atoms == {"-1": "1/4", "0": "1/4", "∞": "1/2"}
    assert payload["limit"]["leftover"] == "0/1"


def test_limit_csv(capsys):
    code, out, _ = _run(capsys, "limit", GOLDEN, "--out", "csv")
    assert code == 0 and out.splitlines()[0] == "re,im,mass,is_infinity"


def test_orbit_and_degrees(capsys):
    code, out, _ = _run(capsys, "orbit", GOLDEN, "--n-max", "3", "--out", "json")
    rows = json.loads(out)["orbit"]
    assert [r["q"] for r in rows] == ["0/1", "-1/1", "-2/1", "-4/1"]
    code, out, _ = _run(capsys, "degrees", GOLDEN, "--n-max", "1")
    assert code == 0 and "∞: m = 1, s = 1" in out


def test_delta_command(capsys):
    code, out, _ = _run(capsys, "delta", GOLDEN, "--out", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["delta"]["case"] == "II" and payload["delta"]["nu_exceptional"] == "1/2"
    assert all(w["pullback_equal"] and w["projection_equal"] for w in payload["witnesses"])


def test_map_file_and_stdin(tmp_path, capsys, monkeypatch):
    path = tmp_path / "f.txt"
    path.write_text(GOLDEN + "\n", encoding="utf-8")
    code, out, _ = _run(capsys, "limit", "--map", str(path))
    assert code == 0 and "leftover: 0" in out
    monkeypatch.setattr(sys, "stdin", io.StringIO(GOLDEN))
    code, out, _ = _run(capsys, "reduce", "--map", "-")
    assert code == 0 and out.startswith("H = ζ0*ζ1")


@pytest.mark.parametrize("argv, code", [
    (["limit", "num = [0, 0, 1]; den = [1]"], 3),
    (["limit", "num = [0, t^, 1]; den = [1]"], 2),
    (["limit", "num = [0, 0, 1]; den = [1]; degree = 1"], 2),
    (["reduce", "num = [0, 1]; den = [0, 1]"], 1),
    (["delta", "num = [t, 0, 1]; den = [0, 1]", "--window", "1", "--horizon", "1"], 4),
    (["orbit", "num = [0, t^(-1), 1 + O(t^3)]; den = [1]"], 5),
    (["limit"], 2),
    (["reduce", GOLDEN, "--out", "csv"], 1),
])
def test_exit_codes(capsys, argv, code):
    assert _run(capsys, *argv)[0] == code


def test_verify_command(capsys):
    code, out, _ = _run(capsys, "verify", GOLDEN, "--t", "0.001", "--samples", "20000", "--out", "json")
    assert code == 0
    comp = json.loads(out)["comparison"]
    assert comp["max_deviation"] < 0.03


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "berkdyn", "reduce", GOLDEN],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("H = ζ0*ζ1; phi = ∞")
