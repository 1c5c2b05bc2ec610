import hashlib
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from depthlab import format_fst, format_pdc, identity_fst, identity_pdc
from depthlab.cli import main

ROOT = Path(__file__).resolve().parent.parent


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(ROOT / "src")
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "depthlab", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=ROOT,
    )


def test_usage_errors_exit_1(capsys):
    assert main([]) == 1
    with pytest.raises(SystemExit) as info:
        main(["profile", "--weak", "lz78"])  # missing required flags
    assert info.value.code == 1
    capsys.readouterr()


def test_generate_is_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.bits", tmp_path / "b.bits"
    for out in (out1, out2):
        code = main(
            [
                "generate", "--recipe", "b", "--k", "9", "--stages", "6",
                "--seed", "5", "--out", str(out),
            ]
        )
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    m1 = json.loads((tmp_path / "a.bits.manifest.json").read_text())
    m2 = json.loads((tmp_path / "b.bits.manifest.json").read_text())
    assert m1 == m2
    assert m1["sha256"] == hashlib.sha256(
        out1.read_text().strip().encode()
    ).hexdigest()


def test_generate_truncation_notice(tmp_path):
    r = run_cli(
        "generate", "--recipe", "a", "--growth", "exponential",
        "--bits-budget", "1000000", "--out", str(tmp_path / "a.bits"),
    )
    assert r.returncode == 0
    assert "truncated" in r.stderr


def test_profile_deterministic_bytes(tmp_path):
    args = [
        "profile", "--recipe", "b", "--k", "9", "--seed", "3",
        "--stages", "8", "--weak", "identity-pdc",
        "--strong", "half-compressor(9,9,0)", "--grid", "200:1500:200",
    ]
    outs = []
    for name in ("p1.csv", "p2.csv"):
        path = tmp_path / name
        r = run_cli(*args, "--out", str(path))
        assert r.returncode == 0, r.stderr
        assert "tail gap/n" in r.stderr
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    header = outs[0].decode().splitlines()[0]
    assert header == "n,weak_bits,strong_bits,gap,gap_over_n"


def test_seed_from_environment(tmp_path):
    a = tmp_path / "a.bits"
    b = tmp_path / "b.bits"
    r = run_cli(
        "generate", "--recipe", "b", "--k", "9", "--stages", "4",
        "--out", str(a), env_extra={"DEPTHLAB_SEED": "77"},
    )
    assert r.returncode == 0
    r = run_cli(
        "generate", "--recipe", "b", "--k", "9", "--stages", "4",
        "--seed", "77", "--out", str(b),
    )
    assert r.returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_ratio_csv(tmp_path, capsys):
    seq = tmp_path / "seq.bits"
    seq.write_text("0" * 600)
    out = tmp_path / "r.csv"
    code = main(
        [
            "ratio", "--input", str(seq), "--compressor", "lz78",
            "--grid", "100:600:100", "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,bits,ratio"
    assert len(lines) == 7
    capsys.readouterr()


def test_lz_table(capsys):
    assert main(["lz", "--bits", "010110"]) == 0
    got = capsys.readouterr().out.splitlines()
    assert got[0] == "index,pointer,bit,cumulative_bits"
    assert got[1] == "1,0,0,1"
    assert got[-1] == "4,2,0,9"


def test_fst_run_and_codec_pipeline(tmp_path, capsys):
    machine = tmp_path / "ident.fst"
    machine.write_text(format_fst(identity_fst()))
    assert main(["fst-run", "--machine", str(machine), "--bits", "0110"]) == 0
    out = capsys.readouterr().out
    assert "output 0110" in out and "final_state 1" in out

    assert main(["encode-fst", "--machine", str(machine)]) == 0
    desc = capsys.readouterr().out.strip()
    assert main(["decode-fst", "--bits", desc]) == 0
    assert capsys.readouterr().out == format_fst(identity_fst())


def test_decode_fst_rejects_garbage(capsys):
    assert main(["decode-fst", "--bits", "10"]) == 2
    capsys.readouterr()


def test_pdc_run_and_stuck_exit(tmp_path, capsys):
    machine = tmp_path / "m.pdc"
    machine.write_text(
        "pdc 1 1 unary 0\n1 0 z -> 1 z 0\n"
    )
    assert main(["pdc-run", "--machine", str(machine), "--bits", "00"]) == 0
    out = capsys.readouterr().out
    assert "final_stack z" in out
    assert main(["pdc-run", "--machine", str(machine), "--bits", "01"]) == 3
    capsys.readouterr()


def test_validation_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.fst"
    bad.write_text("fst 1 1\n1 0 -> 1 -\n")  # missing the (1,1) entry
    assert main(["fst-run", "--machine", str(bad), "--bits", "0"]) == 2
    capsys.readouterr()


def test_kfs_record(capsys):
    from depthlab import decode_fst, fst_run

    assert main(["kfs", "--bits", "0110", "--k", "12"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["value"] == 4
    witness = decode_fst(record["witness_description"])
    assert fst_run(witness, record["witness_input"]).output == "0110"
    assert main(["kfs", "--bits", "0110", "--k", "8"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["value"] == "inf" and record["witness_input"] is None


def test_compose_command(tmp_path, capsys):
    inner = tmp_path / "inner.fst"
    inner.write_text(format_fst(identity_fst()))
    outer_fst = tmp_path / "outer.fst"
    outer_fst.write_text(format_fst(identity_fst()))
    assert main(["compose", "--outer", str(outer_fst), "--inner", str(inner)]) == 0
    assert capsys.readouterr().out.startswith("fst 1 1")
    outer_pdc = tmp_path / "outer.pdc"
    outer_pdc.write_text(format_pdc(identity_pdc()))
    assert main(["compose", "--outer", str(outer_pdc), "--inner", str(inner)]) == 0
    assert capsys.readouterr().out.startswith("pdc 1 1 unary")


def test_missing_file_exit_2(capsys):
    assert main(["fst-run", "--machine", "/nonexistent.fst", "--bits", "0"]) == 2
    capsys.readouterr()
