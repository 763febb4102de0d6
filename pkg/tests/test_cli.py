"""Command-line surface: flags, exit codes, JSON, and caching."""

import json

import pytest

from orbit_hodge import cli
from orbit_hodge import gb as gbmod
from orbit_hodge.cli import main, render_diamond
from orbit_hodge.hodge import HodgeDiamond
from orbit_hodge.orbit import OrbitSpec, orbit_compactification
from orbit_hodge.hodge import hodge_diamond


@pytest.fixture(autouse=True)
def clear_cache_hook():
    yield
    gbmod.set_cache(None)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_critical_command(capsys):
    code, out, _ = run(capsys, "critical", "--h0", "2,-1,-1", "--h", "1,-1,0")
    assert code == 0
    assert out.strip() == "-3 0 3"


def test_critical_json(capsys):
    code, out, _ = run(capsys, "critical", "--h0", "1,-1", "--h", "1,-1", "--json")
    assert code == 0
    assert json.loads(out) == {"critical_values": [-2, 2]}


def test_critical_rejects_irregular(capsys):
    code, _, err = run(capsys, "critical", "--h0", "1,-1", "--h", "0,0")
    assert code == 2
    assert "regular" in err


def test_orbit_requires_traceless(capsys):
    code, _, err = run(capsys, "orbit", "--h0", "1,1")
    assert code == 2
    assert "trace" in err


def test_orbit_sl2_report(capsys):
    code, out, _ = run(capsys, "orbit", "--h0", "1,-1", "--json")
    assert code == 0
    doc = json.loads(out)
    inv = doc["invariants"]
    assert inv["proj_dim"] == 2 and inv["smooth"] is True
    assert doc["prime"] == 32749
    assert doc["diamond"] is None
    assert all(v >= 0 for v in doc["timings_ms"].values())


def test_orbit_zero_spec_single_point(capsys):
    code, out, _ = run(capsys, "orbit", "--h0", "0,0", "--json")
    assert code == 0
    assert json.loads(out)["invariants"]["proj_dim"] == 0


def test_orbit_sl2_diamond(capsys):
    code, out, _ = run(capsys, "orbit", "--h0", "1,-1", "--diamond", "--json")
    assert code == 0
    doc = json.loads(out)
    dia = HodgeDiamond.from_json(doc["diamond"])
    assert [dia.entries[p][p] for p in range(3)] == [1, 2, 1]


def test_fibre_sl2_diamond_text(capsys):
    code, out, _ = run(capsys, "fibre", "--h0", "1,-1", "--h", "1,-1",
                       "--lambda", "0", "--diamond")
    assert code == 0
    assert "proj_dim: 1" in out
    assert " 1\n0  0\n 1" in out


def test_custom_prime_reported(capsys):
    code, out, _ = run(capsys, "orbit", "--h0", "1,-1", "--json",
                       "--prime", "31013")
    assert code == 0
    assert json.loads(out)["prime"] == 31013


def test_saturate_by_t_flag(capsys):
    code, out, _ = run(capsys, "orbit", "--h0", "1,-1", "--json",
                       "--saturate-by", "t")
    assert code == 0
    assert json.loads(out)["invariants"]["proj_dim"] == 2


def test_render_diamond_roundtrip():
    rc_dia = hodge_diamond(orbit_compactification(OrbitSpec((1, -1))))
    doc = render_diamond(rc_dia, "json")
    back = HodgeDiamond.from_json(json.loads(doc))
    assert back.entries == rc_dia.entries
    txt = render_diamond(rc_dia, "text")
    assert txt.splitlines()[0].strip() == "1"


def test_warm_cache_identical_reports(tmp_path, capsys):
    argv = ["orbit", "--h0", "1,-1", "--json", "--cache-dir", str(tmp_path)]
    code1, out1, _ = run(capsys, *argv)
    gbmod.set_cache(None)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    d1, d2 = json.loads(out1), json.loads(out2)
    d1.pop("timings_ms"), d2.pop("timings_ms")
    assert d1 == d2
    assert list(tmp_path.glob("*.json"))


def test_cache_env_variable(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    code, _, _ = run(capsys, "orbit", "--h0", "1,-1", "--json")
    assert code == 0
    assert list(tmp_path.glob("*.json"))


def test_unknown_subcommand_exits_2(capsys):
    assert main(["defrobulate"]) == 2
