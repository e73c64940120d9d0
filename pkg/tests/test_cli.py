import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from qinterf import __version__
from qinterf.cli import KINDS, main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return str(p)


def run(tmp_path, kind, cfg, *extra, out="out"):
    path = write(tmp_path, f"{kind}.json", cfg)
    code = main([kind, "--config", path, "--out-dir", str(tmp_path / out), *extra])
    return code, tmp_path / out


def summary(out, prefix):
    return json.loads((out / f"{prefix}_summary.json").read_text())


def rows(out, prefix):
    with open(out / f"{prefix}.csv", newline="") as fh:
        return list(csv.reader(fh))


def test_stirap_defaults(tmp_path):
    code, out = run(tmp_path, "stirap", {"kind": "stirap"})
    assert code == 0
    s = summary(out, "stirap")
    assert s["results"]["final_P_s"] > 0.999
    assert s["version"] == __version__
    assert s["tolerances"]["rtol"] == 1e-9
    header = rows(out, "stirap")[0]
    assert header == [c["name"] for c in s["schema"]["columns"]]


def test_eit_transparency_row(tmp_path):
    code, out = run(tmp_path, "eit-scan", {"parameters": {"gamma_g": 0.0, "gamma_s": 0.0}})
    assert code == 0
    table = rows(out, "eit_scan")
    head, body = table[0], np.array(table[1:], dtype=float)
    zero = body[body[:, head.index("delta")] == 0.0]
    assert zero.shape[0] == 1
    assert abs(zero[0, head.index("alpha")]) < 1e-10


def test_grover_summary(tmp_path):
    code, out = run(tmp_path, "grover", {"parameters": {"N": 16, "iters": 3}})
    assert code == 0
    assert summary(out, "grover")["results"]["success_probability"] == pytest.approx(0.9613, abs=1e-4)


@pytest.mark.parametrize("kind", sorted(KINDS))
def test_every_kind_runs_with_defaults(tmp_path, kind):
    cfg = {"parameters": {"n_pulses": 1000}} if kind == "bb84" else {}
    code, out = run(tmp_path, kind, cfg)
    assert code == 0
    prefix = kind.replace("-", "_")
    s = summary(out, prefix)
    table = rows(out, prefix)
    assert len(table[0]) == len(s["schema"]["columns"])
    assert all(len(r) == len(table[0]) for r in table)
    assert all("e" in v for v in table[1])


def test_csv_format(tmp_path):
    _, out = run(tmp_path, "deutsch", {})
    raw = (out / "deutsch.csv").read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    assert raw.splitlines()[1].split(b",")[0] == b"0.00000000000000000e+00"


def test_unknown_keys_rejected(tmp_path, capsys):
    assert run(tmp_path, "grover", {"parameters": {"bogus": 1}})[0] == 2
    assert run(tmp_path, "grover", {"extra": 1})[0] == 2
    assert run(tmp_path, "grover", {"grid": {"n": 3}})[0] == 2
    assert run(tmp_path, "grover", {"kind": "squid"})[0] == 2
    assert run(tmp_path, "grover", {"parameters": {"N": "16"}})[0] == 2


def test_parse_error_reports_position(tmp_path, capsys):
    code, _ = run(tmp_path, "grover", '{\n  "parameters": {,}\n}')
    assert code == 2
    assert ":2:" in capsys.readouterr().err


def test_invalid_value_is_input_error(tmp_path):
    assert run(tmp_path, "grover", {"parameters": {"target": 99}})[0] == 2


def test_numeric_failure_exit_code(tmp_path):
    cfg = {"parameters": {"method": "numeric", "gamma_e": 0.0, "omega_c": 0.0, "omega_p": 0.0}}
    assert run(tmp_path, "eit-scan", cfg)[0] == 3


def test_io_errors(tmp_path):
    assert main(["grover", "--config", str(tmp_path / "missing.json")]) == 4
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    path = write(tmp_path, "g.json", {})
    assert main(["grover", "--config", path, "--out-dir", str(blocker)]) == 4


def test_determinism_byte_identical(tmp_path):
    cfg = {"parameters": {"n_pulses": 5000}}
    run(tmp_path, "bb84", cfg, "--seed", "7", out="a")
    run(tmp_path, "bb84", cfg, "--seed", "7", out="b")
    for name in ("bb84.csv", "bb84_summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    run(tmp_path, "bb84", cfg, "--seed", "8", out="c")
    assert (tmp_path / "a" / "bb84.csv").read_bytes() != (tmp_path / "c" / "bb84.csv").read_bytes()


def sweep(tmp_path, cfg, param, values, threads, out):
    path = write(tmp_path, "sweep.json", cfg)
    return main(["sweep", "--config", path, "--param", param, "--values", values,
                 "--out-dir", str(tmp_path / out), "--threads", str(threads)])


def test_sweep_coupling_widens_dip(tmp_path):
    assert sweep(tmp_path, {"kind": "eit-scan"}, "omega_c", "1,2,4", 3, "sw") == 0
    m = json.loads((tmp_path / "sw" / "eit_scan_sweep_manifest.json").read_text())
    widths = [r["results"]["dip_width"] for r in m["runs"]]
    assert [r["status"] for r in m["runs"]] == ["ok"] * 3
    assert widths[0] < widths[1] < widths[2]
    assert (tmp_path / "sw" / "eit_scan_omega_c_002.csv").exists()


def test_sweep_parallel_equals_serial(tmp_path):
    cfg = {"kind": "stirap"}
    assert sweep(tmp_path, cfg, "delta", "0,20", 1, "serial") == 0
    assert sweep(tmp_path, cfg, "delta", "0,20", 2, "parallel") == 0
    files = sorted(p.name for p in (tmp_path / "serial").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "parallel").iterdir())
    for name in files:
        assert (tmp_path / "serial" / name).read_bytes() == (tmp_path / "parallel" / name).read_bytes()
    m = json.loads((tmp_path / "serial" / "stirap_sweep_manifest.json").read_text())
    assert all(r["results"]["final_P_s"] > 0.99 for r in m["runs"])


def test_sweep_records_failures(tmp_path):
    code = sweep(tmp_path, {"kind": "grover"}, "target", "1,99", 1, "f")
    assert code == 2
    m = json.loads((tmp_path / "f" / "grover_sweep_manifest.json").read_text())
    assert [r["status"] for r in m["runs"]] == ["ok", "failed"]


def test_sweep_validation(tmp_path):
    assert sweep(tmp_path, {"kind": "eit-scan"}, "omega_c", "", 1, "e") == 2
    assert sweep(tmp_path, {"kind": "eit-scan"}, "scheme", "1", 1, "e") == 2
    assert sweep(tmp_path, {"kind": "eit-scan"}, "omega_c", "a,b", 1, "e") == 2


def test_threads_env_default(tmp_path, monkeypatch):
    from qinterf.cli import build_parser
    monkeypatch.setenv("QINTERF_THREADS", "3")
    args = build_parser().parse_args(["grover", "--config", "x.json"])
    assert args.threads == 3


def test_console_entry_point(tmp_path):
    path = write(tmp_path, "g.json", {"parameters": {"N": 4, "iters": 1}})
    res = subprocess.run([sys.executable, "-m", "qinterf", "grover", "--config", path,
                          "--out-dir", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["success_probability"] == pytest.approx(1.0)


def test_schema_command(capsys):
    assert main(["schema", "stirap"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["stirap"]["parameters"]["omega0"]["default"] == 20.0
