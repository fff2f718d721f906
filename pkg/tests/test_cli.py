import csv
import io
import json
import subprocess
import sys

import pytest

from ptlab.cli import CSV_COLUMNS, UsageError, main, parse_m_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines()]


def test_parse_m_range():
    assert parse_m_range("5") == [5]
    assert parse_m_range("1..4,7") == [1, 2, 3, 4, 7]
    assert parse_m_range("3,1,3") == [1, 3]
    for bad in ("0", "4..2", "x", "1..y"):
        with pytest.raises(UsageError):
            parse_m_range(bad)


def test_verify_all_theorems_agree(capsys):
    code, out, _ = run(capsys, "verify", "--theorems", "t1,t2,t3", "--m", "1..7", "--workers", "3")
    recs = records(out)
    assert code == 0 and len(recs) == 21
    assert all(r["agree"] for r in recs)
    assert set(recs[0]) == {"theorem", "m", "predicted", "observed", "agree", "elapsed_ms"}


def test_verify_t1_m5(capsys):
    code, out, _ = run(capsys, "verify", "--theorems", "t1", "--m", "5")
    (rec,) = records(out)
    assert code == 0
    assert (rec["predicted"], rec["observed"], rec["agree"]) == (False, False, True)


def test_verify_nonexist(capsys):
    code, out, _ = run(capsys, "verify", "--theorems", "nonexist", "--m", "1..7", "--no-timing")
    recs = {r["m"]: r for r in records(out)}
    assert code == 0
    assert all(recs[m]["observed"] is False for m in (5, 7))
    assert recs[3]["predicted"] is None and recs[3]["agree"] is None


def test_verify_limit_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--m", "13")
    assert code == 1 and "m <= 12" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--theorems", "t9", "--m", "1"],
    ["verify"],
    ["bogus", "--m", "1"],
    ["search", "--m", "9"],
    ["search", "--m", "2", "--r-max", "40"],
    ["qm", "--m", "3", "--pairs", "F1-F2"],
    ["qm", "--m", "3", "--pairs", "F1:g7"],
    ["curve", "--m", "21"],
    ["verify", "--m", "2", "--workers", "0"],
    ["verify", "--m", "2", "--format", "xml"],
])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 1


def test_search_finds_known_classes(capsys):
    code, out, _ = run(capsys, "search", "--m", "3", "--r-max", "9", "--alpha-max", "8")
    hits = {(r["r"], r["alpha"], r["beta"]): r for r in records(out)}
    assert code == 0
    assert hits[(3, 3, 1)]["catalog"] == "f1"
    assert hits[(9, 8, 6)]["catalog"] == "f17"
    assert hits[(3, 3, 1)]["catalog_condition_holds"]


def test_search_m2_finds_t3(capsys):
    code, out, _ = run(capsys, "search", "--m", "2", "--r-max", "8", "--alpha-max", "8")
    assert any((r["r"], r["alpha"], r["beta"]) == (7, 7, 5) for r in records(out))


def test_search_output_independent_of_workers(capsys):
    args = ["search", "--m", "1..4", "--r-max", "8", "--alpha-max", "7", "--seed", "17"]
    _, one, _ = run(capsys, *args, "--workers", "1")
    _, four, _ = run(capsys, *args, "--workers", "4")
    assert one == four
    _, other_seed, _ = run(capsys, *args[:-1], "18")
    spot = lambda text: [r["spot_checked"] for r in records(text)]
    assert spot(other_seed) != spot(one) or len(spot(one)) < 4


def test_verify_byte_identical_without_timing(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run(capsys, "verify", "--m", "1..6", "--no-timing", "--workers", "1", "--output", str(a))
    run(capsys, "verify", "--m", "1..6", "--no-timing", "--workers", "5", "--output", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert b"elapsed_ms" not in a.read_bytes()


def test_qm_default_and_named_pairs(capsys):
    code, out, _ = run(capsys, "qm", "--m", "3", "--pairs", "F1:F2,f5:f6,F2:F2")
    recs = records(out)
    assert code == 0
    assert recs[0]["equivalent"] is False
    assert (recs[1]["equivalent"], recs[1]["d"], recs[1]["A1"], recs[1]["A2"]) == (True, 53, "0x1", "0x1")
    assert (recs[2]["equivalent"], recs[2]["d"]) == (True, 1)


def test_qm_records_non_permutations(capsys):
    code, out, _ = run(capsys, "qm", "--m", "3", "--pairs", "F1:F3")
    (rec,) = records(out)
    assert code == 0 and rec["equivalent"] is None and rec["note"]


def test_curve_m5(capsys):
    code, out, _ = run(capsys, "curve", "--m", "5")
    (rec,) = records(out)
    assert code == 0 and rec["verdict"] == "not-a-permutation"
    assert rec["projective"] == 64


def test_curve_audit_only(capsys):
    code, out, _ = run(capsys, "curve", "--m", "16,18", "--audit-only")
    recs = records(out)
    assert code == 0
    assert [r["value"] for r in recs] == [-1, 131071]


def test_csv_output(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "curve", "--m", "3,5", "--format", "csv", "--output", str(path))
    assert code == 0 and out == ""
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert rows[0] == CSV_COLUMNS["curve"]
    assert len(rows) == 3 and rows[2][-1] == "not-a-permutation"


def test_csv_drops_timing_column(capsys):
    _, out, _ = run(capsys, "verify", "--m", "1", "--theorems", "t2", "--format", "csv", "--no-timing")
    assert out.splitlines()[0] == "theorem,m,predicted,observed,agree"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ptlab", "curve", "--m", "18", "--audit-only"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == 131071


def test_disagreement_exits_2(capsys, monkeypatch):
    import ptlab.family as family
    monkeypatch.setattr(family, "predicted", lambda tid, m: True)
    code, out, err = run(capsys, "verify", "--theorems", "t1", "--m", "4,5")
    assert code == 2
    assert "DISAGREEMENT: T1 at m=5" in err
    assert [r["agree"] for r in records(out)] == [True, False]
