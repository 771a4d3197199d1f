import json

import pytest

from sphererk.cli import main, parse_h_spec
from sphererk.harness import AppendixBReport


def test_parse_h_spec_geometric():
    hs = parse_h_spec("0.1/2^0..5")
    assert len(hs) == 6
    assert hs[0] == 0.1
    assert hs[-1] == pytest.approx(0.1 / 32)


def test_parse_h_spec_comma_list():
    assert parse_h_spec("0.2, 0.1,0.05") == [0.2, 0.1, 0.05]


def test_parse_h_spec_rejects_garbage():
    with pytest.raises(ValueError):
        parse_h_spec("nope")
    with pytest.raises(ValueError):
        parse_h_spec("0.1/2^5..2")


def test_converge_writes_csv_and_sidecar(tmp_path, capsys):
    out = tmp_path / "conv.csv"
    code = main([
        "converge", "--problem", "vortex4", "--scheme", "stvdrk2",
        "--h", "0.1/2^0..3", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "scheme,h,e2,enorm"
    assert len(lines) == 5
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert "stvdrk2" in sidecar
    assert "order_e2" in sidecar["stvdrk2"]


def test_converge_json_output(tmp_path):
    out = tmp_path / "conv.json"
    code = main([
        "converge", "--problem", "rotation", "--scheme", "rk4",
        "--h", "0.1/2^0..3", "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert set(payload) == {"rows", "orders"}
    assert len(payload["rows"]) == 4


def test_converge_all_schemes(tmp_path):
    out = tmp_path / "all.csv"
    code = main([
        "converge", "--problem", "vortex4", "--scheme", "all",
        "--h", "0.1/2^0..3", "--out", str(out),
    ])
    assert code == 0
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert {"sfe", "stvdrk3", "rk4", "ptvdrk3p", "sssprk104-frechet"} <= set(sidecar)


def test_stability_writes_series(tmp_path):
    out = tmp_path / "stab.csv"
    code = main(["stability", "--scheme", "stvdrk3", "--h", "2.51",
                 "--steps", "50", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "scheme,h,step,distance"
    assert len(lines) == 52


def test_eikonal_writes_snapshots(tmp_path):
    out = tmp_path / "front.csv"
    code = main([
        "eikonal", "--velocity", "const", "--order", "2", "--rays", "8",
        "--dt", "0.1", "--t-final", "0.5", "--snapshots", "0.2,0.5",
        "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 1 + 16


def test_eikonal_scheme_override(tmp_path):
    out = tmp_path / "front.csv"
    code = main([
        "eikonal", "--velocity", "expz2", "--scheme", "tvdrk3", "--rays", "4",
        "--dt", "0.1", "--t-final", "0.2", "--out", str(out),
    ])
    assert code == 0


def test_pharmonic_writes_snapshots(tmp_path):
    out = tmp_path / "flow.csv"
    code = main([
        "pharmonic", "--p", "2", "--nodes", "16", "--dt", "1e-4",
        "--t-final", "1e-3", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t,s,mx,my,mz"
    assert len(lines) == 1 + 16


def test_usage_error_exit_code():
    assert main(["converge", "--problem", "bogus", "--scheme", "all",
                 "--h", "0.1", "--out", "x.csv"]) == 1
    assert main(["nonsense"]) == 1
    assert main(["converge", "--problem", "vortex4", "--scheme", "sfe",
                 "--h", "garbage", "--out", "x.csv"]) == 1


def test_verify_appendix_b_passes(capsys):
    assert main(["verify", "--target", "appendix-b"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_failure_exit_code(monkeypatch, capsys):
    import sphererk.cli as cli

    failed = AppendixBReport(orders={"pfe": 9.0}, ptvdrk3p_h3_coefficient=0.0, passed=False)
    monkeypatch.setattr(cli.harness, "verify_appendix_b", lambda: failed)
    assert main(["verify", "--target", "appendix-b"]) == 2
    assert "FAIL" in capsys.readouterr().out
