"""Exit codes, file round-trips, determinism, and one real subprocess
pipeline."""

import subprocess
import sys

import pytest

from rmid.capacity import capacity_sequence
from rmid.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_keygen_report_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "a.rmid"
    out2 = tmp_path / "b.rmid"
    code, stdout, _ = run_cli(capsys, "keygen", "--q", "512", "--k", "64", "--m", "2",
                              "--seed", "7", "--out", str(out1))
    assert code == 0
    assert "1/8" in stdout          # false-accept bound for k/q = 64/512
    code, stdout2, _ = run_cli(capsys, "keygen", "--q", "512", "--k", "64", "--m", "2",
                               "--seed", "7", "--out", str(out2))
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert stdout == stdout2


def test_keygen_rejects_bad_degree(tmp_path, capsys):
    code, _, err = run_cli(capsys, "keygen", "--q", "512", "--k", "600", "--m", "2",
                           "--seed", "1", "--out", str(tmp_path / "x.rmid"))
    assert code == 2
    assert "k < q" in err or "k" in err


def test_field_flag_validation(tmp_path, capsys):
    code, _, err = run_cli(capsys, "keygen", "--k", "2", "--m", "1",
                           "--out", str(tmp_path / "x.rmid"))
    assert code == 2
    code, _, err = run_cli(capsys, "keygen", "--q", "12", "--k", "2", "--m", "1",
                           "--out", str(tmp_path / "x.rmid"))
    assert code == 2
    code, _, err = run_cli(capsys, "keygen", "--q", "8", "--p", "2", "--d", "3",
                           "--k", "2", "--m", "1", "--out", str(tmp_path / "x.rmid"))
    assert code == 2


def test_pipeline_accept_and_reject(tmp_path, capsys):
    ida = tmp_path / "a.rmid"
    idb = tmp_path / "b.rmid"
    ch = tmp_path / "ch.rmid"
    assert run_cli(capsys, "keygen", "--q", "257", "--k", "16", "--m", "2",
                   "--seed", "1", "--out", str(ida))[0] == 0
    assert run_cli(capsys, "keygen", "--q", "257", "--k", "16", "--m", "2",
                   "--seed", "2", "--out", str(idb))[0] == 0
    assert run_cli(capsys, "challenge", "--identity", str(ida), "--n", "4",
                   "--seed", "3", "--out", str(ch))[0] == 0
    code, stdout, _ = run_cli(capsys, "verify", "--identity", str(ida),
                              "--challenges", str(ch))
    assert code == 0
    assert "accepted: true" in stdout
    assert stdout.count("true") >= 4
    code, stdout, _ = run_cli(capsys, "verify", "--identity", str(idb),
                              "--challenges", str(ch))
    assert code == 1
    assert "accepted: false" in stdout


def test_mismatch_rejection_rate(tmp_path, capsys):
    # wrong identity at error bound (1/8)^4: essentially always rejected
    rejected = 0
    trials = 50
    ch = tmp_path / "ch.rmid"
    for trial in range(trials):
        ida = tmp_path / f"a{trial}.rmid"
        idb = tmp_path / f"b{trial}.rmid"
        run_cli(capsys, "keygen", "--q", "512", "--k", "64", "--m", "2",
                "--seed", str(2 * trial), "--out", str(ida))
        run_cli(capsys, "keygen", "--q", "512", "--k", "64", "--m", "2",
                "--seed", str(2 * trial + 1), "--out", str(idb))
        run_cli(capsys, "challenge", "--identity", str(ida), "--n", "4",
                "--seed", str(trial), "--out", str(ch))
        code, _, _ = run_cli(capsys, "verify", "--identity", str(idb),
                             "--challenges", str(ch))
        if code == 1:
            rejected += 1
    assert rejected >= trials - 1


def test_verify_error_codes(tmp_path, capsys):
    ida = tmp_path / "a.rmid"
    ch = tmp_path / "ch.rmid"
    run_cli(capsys, "keygen", "--q", "257", "--k", "8", "--m", "2",
            "--seed", "1", "--out", str(ida))
    run_cli(capsys, "challenge", "--identity", str(ida), "--n", "2",
            "--seed", "2", "--out", str(ch))

    bad_magic = tmp_path / "bad.rmid"
    bad_magic.write_bytes(b"XXXX" + ida.read_bytes()[4:])
    assert run_cli(capsys, "verify", "--identity", str(bad_magic),
                   "--challenges", str(ch))[0] == 2

    truncated = tmp_path / "trunc.rmid"
    truncated.write_bytes(ch.read_bytes()[:-3])
    assert run_cli(capsys, "verify", "--identity", str(ida),
                   "--challenges", str(truncated))[0] == 2

    other = tmp_path / "other.rmid"
    run_cli(capsys, "keygen", "--q", "257", "--k", "9", "--m", "2",
            "--seed", "1", "--out", str(other))
    assert run_cli(capsys, "verify", "--identity", str(other),
                   "--challenges", str(ch))[0] == 4

    assert run_cli(capsys, "verify", "--identity", str(tmp_path / "missing.rmid"),
                   "--challenges", str(ch))[0] == 3


def test_challenge_determinism(tmp_path, capsys):
    ida = tmp_path / "a.rmid"
    run_cli(capsys, "keygen", "--q", "64", "--k", "5", "--m", "3",
            "--seed", "5", "--out", str(ida))
    c1, c2 = tmp_path / "c1.rmid", tmp_path / "c2.rmid"
    run_cli(capsys, "challenge", "--identity", str(ida), "--n", "3", "--seed", "9",
            "--out", str(c1))
    run_cli(capsys, "challenge", "--identity", str(ida), "--n", "3", "--seed", "9",
            "--out", str(c2))
    assert c1.read_bytes() == c2.read_bytes()


def test_report_values(capsys):
    code, stdout, _ = run_cli(capsys, "report", "--q", "16", "--k", "4", "--m", "4")
    assert code == 0
    assert "280 bits" in stdout
    code, stdout, _ = run_cli(capsys, "report", "--q", "16", "--k", "4", "--m", "4",
                              "--format", "csv")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert lines[0].startswith("q,k,m,n,log_I_bits")
    assert lines[1].startswith("16,4,4,1,280,")


def test_capacity_csv(capsys):
    code, stdout, _ = run_cli(capsys, "capacity", "--t-max", "6", "--format", "csv")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert len(lines) == 6
    ratios = [float(ln.split(",")[5]) for ln in lines[1:]]
    assert ratios == sorted(ratios)
    expected = [pt.rate_ratio for pt in capacity_sequence(6)]
    for got, want in zip(ratios, expected):
        assert got == pytest.approx(want, rel=1e-9)


def test_costmodel_cli(capsys):
    code, stdout, _ = run_cli(capsys, "costmodel", "--m", "2", "--k", "2")
    assert code == 0
    assert "C=13" in stdout
    code, stdout, _ = run_cli(capsys, "costmodel", "--m", "2", "--k", "2",
                              "--k-max", "4", "--format", "csv")
    assert code == 0
    lines = stdout.strip().splitlines()
    assert lines[0] == "m,k,C_exact,leading_term,ratio"
    assert len(lines) == 4


def test_costmodel_prediction_flow(tmp_path, capsys):
    fieldops = tmp_path / "fieldops.csv"
    identcsv = tmp_path / "ident.csv"
    assert run_cli(capsys, "bench", "--kind", "fieldops", "--sizes", "257",
                   "--reps", "30", "--ops", "1000", "--out", str(fieldops))[0] == 0
    assert run_cli(capsys, "bench", "--kind", "ident",
                   "--grid", "257:16:2:1,257:32:2:1",
                   "--reps", "30", "--out", str(identcsv))[0] == 0
    code, stdout, _ = run_cli(capsys, "costmodel", "--fieldops-csv", str(fieldops),
                              "--ident-csv", str(identcsv))
    assert code == 0
    lines = stdout.strip().splitlines()
    assert lines[0] == "q,k,m,predicted_s,measured_s"
    assert len(lines) == 3
    code, _, _ = run_cli(capsys, "costmodel", "--fieldops-csv", str(fieldops))
    assert code == 2


def test_stdio_pipes_subprocess(tmp_path):
    # the real console pipeline, stdout of challenge piped into verify
    ida = tmp_path / "a.rmid"
    subprocess.run(
        [sys.executable, "-m", "rmid.cli", "keygen", "--q", "257", "--k", "8",
         "--m", "2", "--seed", "1", "--out", str(ida)],
        check=True, capture_output=True,
    )
    challenge = subprocess.run(
        [sys.executable, "-m", "rmid.cli", "challenge", "--identity", str(ida),
         "--n", "3", "--seed", "4", "--out", "-"],
        check=True, capture_output=True,
    )
    verify = subprocess.run(
        [sys.executable, "-m", "rmid.cli", "verify", "--identity", str(ida),
         "--challenges", "-"],
        input=challenge.stdout, capture_output=True,
    )
    assert verify.returncode == 0
    assert b"accepted: true" in verify.stdout
