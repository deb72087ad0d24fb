from __future__ import annotations

import json
from pathlib import Path

import pytest

from gpquant import cli
from gpquant.dsl import (ChartMismatch, DSLSyntaxError, DuplicateName, ReservedSymbol, TypeMismatch,
                         UnknownName, parse_session, print_session)
from gpquant.scalar import Scalar

ROOT = Path(__file__).resolve().parents[1]
SESSIONS = sorted((ROOT / "sessions").glob("*.gp"))
HEADER = "manifold M dim 2 coords q p\n"


@pytest.mark.parametrize("path", SESSIONS, ids=lambda p: p.stem)
def test_print_parse_roundtrip(path):
    model = parse_session(path.read_text())
    again = parse_session(print_session(model))
    assert again.same_as(model)
    assert print_session(again) == print_session(model)


def test_precedence_and_values():
    # ^ is the wedge product, which on scalars is plain multiplication
    model = parse_session(HEADER + "scalar s = -q**2 + 2*q*p/3\nscalar t2 = (q + p)^(q + p)\n")
    q, p = Scalar.var("q"), Scalar.var("p")
    assert model.objects["s"][1] == -(q * q) + q * p * 2 / 3
    assert model.objects["t2"][1] == (q + p) * (q + p)


@pytest.mark.parametrize("text, exc, line, col", [
    ("scalar c = 1\n", ReservedSymbol, 2, 8),
    ("scalar s = q + w\n", UnknownName, 2, 16),
    ("vfield X = D[z]\n", ChartMismatch, 2, 14),
    ("scalar s = (q + \n", DSLSyntaxError, 2, 17),
    ("scalar a = 1\nscalar a = 2\n", DuplicateName, 3, 8),
    ("form w = d[q] + D[p]\n", TypeMismatch, 2, 15),
])
def test_dsl_errors(text, exc, line, col):
    with pytest.raises(exc) as info:
        parse_session(HEADER + text)
    assert (info.value.line, info.value.col) == (line, col)


def _run(name, *extra, capsys):
    code = cli.main(["check", str(ROOT / "sessions" / name), *extra])
    return code, capsys.readouterr().out


def test_cli_exit_codes(capsys):
    assert _run("foliation.gp", capsys=capsys)[0] == 0
    code, out = _run("nonfoliation.gp", capsys=capsys)
    assert code == 1
    assert "integrable" in out and "(D[z], 0)" in out


def test_cli_json_is_deterministic(capsys):
    first = _run("polarized.gp", "--format", "json", capsys=capsys)[1]
    second = _run("polarized.gp", "--format", "json", capsys=capsys)[1]
    assert first == second
    rows = [json.loads(line) for line in first.splitlines()]
    assert [r["status"] for r in rows].count("fail") == 1
    assert all(r["millis"] is None for r in rows)


def test_cli_only_and_timing(capsys):
    code, out = _run("symplectic.gp", "--only", "lift", "--format", "json", "--timing", capsys=capsys)
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["check"] for r in rows] == ["lift"]
    assert isinstance(rows[0]["millis"], (int, float))


def test_cli_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.gp"
    bad.write_text(HEADER + "scalar c = 1\n")
    assert cli.main(["check", str(bad)]) == 2
    assert "ReservedSymbol" in capsys.readouterr().err


def test_cli_bad_request_is_error(tmp_path, capsys):
    f = tmp_path / "req.gp"
    f.write_text(HEADER + "check integrable q\n")
    assert cli.main(["check", str(f), "--format", "json"]) == 2
    row = json.loads(capsys.readouterr().out)
    assert row["status"] == "error"


def test_format_command(capsys):
    path = ROOT / "sessions" / "mechanics.gp"
    assert cli.main(["format", str(path)]) == 0
    out = capsys.readouterr().out
    assert parse_session(out).same_as(parse_session(path.read_text()))
