import json
import subprocess
import sys

import pytest

from fragcodec.cli import run
from molfixtures import SAFE_ERROR_1, SAFE_ERROR_2, SAFE_ERROR_3, TARGET_SMILES, moses_sample


@pytest.fixture
def smi(tmp_path):
    path = tmp_path / "mols.smi"
    path.write_text("Cc1ccccc1\nCCO\tethanol\nc1ccccc1CC(=O)N\n")
    return path


def lines_of(path) -> list[str]:
    return path.read_text().splitlines()


def test_encode_three_lines(smi, tmp_path):
    out = tmp_path / "mols.tsis"
    assert run(["encode", "--dialect", "tsis", "--in", str(smi), "--out", str(out)]) == 0
    assert lines_of(out) == ["[1*]C^[1*]c1ccccc1", "CCO", "[1*]c1ccccc1^[1*]CC(N)=O"]


@pytest.mark.parametrize("dialect", ["smiles", "tsis", "tsid", "safe"])
def test_encode_decode_round_trip(smi, tmp_path, dialect):
    enc, dec = tmp_path / "enc.txt", tmp_path / "dec.txt"
    assert run(["encode", "--dialect", dialect, "--in", str(smi), "--out", str(enc)]) == 0
    assert run(["decode", "--dialect", dialect, "--in", str(enc), "--out", str(dec)]) == 0
    canon = tmp_path / "canon.txt"
    run(["decode", "--dialect", "smiles", "--in", str(smi), "--out", str(canon)])
    assert lines_of(dec) == lines_of(canon)


def test_explicit_cuts(tmp_path):
    src = tmp_path / "t.smi"
    src.write_text(TARGET_SMILES + "\n")
    out = tmp_path / "t.tsis"
    code = run(["encode", "--dialect", "tsis", "--fragmenter", "explicit",
                "--cuts", "3-4,7-8,8-9,8-15,30-32", "--in", str(src), "--out", str(out)])
    assert code == 0
    assert lines_of(out)[0].count("^") == 5


def test_validate_known_errors(tmp_path, capsys):
    src = tmp_path / "errors.txt"
    src.write_text("\n".join([SAFE_ERROR_1, SAFE_ERROR_2, SAFE_ERROR_3]) + "\n")
    assert run(["validate", "--dialect", "safe", "--in", str(src)]) == 0
    reports = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert len(reports) == 3
    assert "3" in reports[0]["unpaired_symbols"]
    assert set(reports[1]["unpaired_symbols"]) == {")", "2", "3"}
    assert set(reports[2]["unpaired_symbols"]) == {"%18", "%10", "7", "8"}
    assert not any(r["balanced"] for r in reports)


def test_profile_json_lines(tmp_path, capsys):
    src = tmp_path / "p.txt"
    src.write_text(TARGET_SMILES + "\nC1CC1\n")
    assert run(["profile", "--dialect", "smiles", "--in", str(src)]) == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["string_length"] for r in rows] == [67, 5]
    assert rows[1]["ring_closure"]["max_span"] == 3


def test_hard_error_exit_code(tmp_path, capsys):
    src = tmp_path / "bad.smi"
    src.write_text("CCO\nC1CC\nCCN\n")
    assert run(["decode", "--dialect", "smiles", "--in", str(src)]) == 1
    captured = capsys.readouterr()
    assert captured.out.splitlines() == ["CCO"]
    assert "line 2" in captured.err


def test_keep_going_preserves_alignment(tmp_path, capsys):
    src = tmp_path / "bad.smi"
    src.write_text("CCO\nC1CC\nCCN\n")
    for cmd in ("encode", "decode", "validate", "profile"):
        assert run([cmd, "--dialect", "smiles", "--in", str(src), "--keep-going"]) == 0
        captured = capsys.readouterr()
        assert len(captured.out.splitlines()) == 3
    assert run(["decode", "--dialect", "smiles", "--in", str(src), "--keep-going"]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines() == ["CCO", "", "CCN"]
    assert "UnmatchedRingClosure" in captured.err


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["encode"], "--dialect"),
        (["encode", "--dialect", "selfies"], "--dialect"),
        (["encode", "--dialect", "tsis", "--fragmenter", "explicit"], "--cuts"),
        (["encode", "--dialect", "tsis", "--fragmenter", "explicit", "--cuts", "1:2"], "--cuts"),
        (["sample", "--dialect", "tsis", "--train", "x", "--order", "0"], "--order"),
        (["bench", "--dialect", "tsis", "--train", "x", "--format", "xml"], "--format"),
    ],
)
def test_usage_errors(argv, flag, capsys):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2
    assert flag in capsys.readouterr().err


def test_missing_input_reports_path(tmp_path, capsys):
    missing = tmp_path / "nope.smi"
    assert run(["decode", "--dialect", "smiles", "--in", str(missing)]) == 1
    assert str(missing) in capsys.readouterr().err


def test_sample_is_reproducible(tmp_path):
    train = tmp_path / "train.tsis"
    train.write_text("\n".join(["[1*]C^[1*]c1ccccc1", "CCO", "[1*]N^[1*]c1ccccc1"]) + "\n")
    outs = []
    for name in ("a.txt", "b.txt"):
        out = tmp_path / name
        assert run(["sample", "--dialect", "tsis", "--train", str(train), "--order", "3",
                    "--n", "25", "--seed", "4", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0].splitlines()) == 25


def test_bench_json_chain(tmp_path, capsys):
    pool = moses_sample(200)
    train, gen = tmp_path / "train.smi", tmp_path / "gen.txt"
    train.write_text("\n".join(pool[:100]) + "\n")
    gen.write_text("\n".join(pool[50:150] + ["C1CC"]) + "\n")
    assert run(["bench", "--dialect", "smiles", "--train", str(train), "--gen", str(gen),
                "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert 0 <= report["novelty"] <= report["unique"] <= report["valid"] <= 1
    assert report["sample_count"] == 101


def test_bench_tsv(tmp_path, capsys):
    train = tmp_path / "train.smi"
    train.write_text("\n".join(moses_sample(100)) + "\n")
    argv = ["bench", "--dialect", "smiles", "--train", str(train), "--n", "50", "--seed", "2",
            "--format", "tsv"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    header, row = first.splitlines()
    assert header.split("\t") == ["Model", "Valid", "Unique", "Novelty", "KLD", "FCD", "Nov./Uni."]
    assert row.split("\t")[5] == "n/a"
    run(argv)
    assert capsys.readouterr().out == first


def test_module_entry_point(smi):
    proc = subprocess.run(
        [sys.executable, "-m", "fragcodec", "encode", "--dialect", "safe", "--in", str(smi)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "c12ccccc1.C2"
    proc = subprocess.run([sys.executable, "-m", "fragcodec"], capture_output=True, text=True)
    assert proc.returncode == 2
