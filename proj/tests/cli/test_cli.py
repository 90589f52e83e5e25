"""Behavioral tests of the command-line binary (exit codes, formats,
determinism).  The binary path arrives via the DIRWALK_BIN env var."""

import json
import math
import os
import subprocess

BIN = os.environ.get("DIRWALK_BIN", "dirwalk")

# angle numerators over n = 1..6 for each character mod 7 (None at n = 7)
TABLE_MOD7 = {
    (0, (0, 0, 0, 0, 0, 0)),
    (1, (0, 2, 1, 4, 5, 3)),
    (2, (0, 4, 2, 2, 4, 0)),
    (3, (0, 0, 3, 0, 3, 3)),
    (4, (0, 2, 4, 4, 2, 0)),
    (5, (0, 4, 5, 2, 1, 3)),
}


def run(*args, check=False):
    proc = subprocess.run(
        [BIN, *map(str, args)], capture_output=True, timeout=300
    )
    if check and proc.returncode != 0:
        raise AssertionError(
            f"dirwalk {' '.join(map(str, args))} exited "
            f"{proc.returncode}\nstderr: {proc.stderr.decode()}"
        )
    return proc


def stdout_doc(proc):
    """The meta/result JSON document is the last stdout line."""
    lines = proc.stdout.decode().strip().splitlines()
    return json.loads(lines[-1])


def read_csv(path):
    text = path.read_bytes().decode()
    assert "\r\n" in text, "csv must use CRLF line endings"
    rows = [line.split(",") for line in text.split("\r\n") if line]
    return rows[0], rows[1:]


# ------------------------------------------------------------ exit codes ---


def test_no_subcommand_is_a_flag_error():
    assert run().returncode == 2


def test_unknown_flag_is_a_flag_error():
    proc = run("chars", "--q", 7, "--frobnicate")
    assert proc.returncode == 2
    assert b"Usage" in proc.stderr or b"usage" in proc.stderr


def test_help_exits_zero():
    assert run("--help").returncode == 0
    assert run("chars", "--help").returncode == 0


def test_missing_required_flag_is_a_flag_error():
    assert run("pairs", "--q", 3).returncode == 2


def test_runtime_error_exits_one():
    proc = run("chars", "--q", 8)  # not prime
    assert proc.returncode == 1
    assert proc.stderr.decode().startswith("error:")


def test_bad_spacing_is_a_flag_error():
    proc = run("ensemble", "--q", 7, "--char", 1, "--N", 10, "--M", 5,
               "--spacing", "sometimes")
    assert proc.returncode == 2


def test_bad_s_point_is_a_flag_error():
    proc = run("lfunc", "--q", 7, "--char", 1, "--s", "one,two")
    assert proc.returncode == 2


# ----------------------------------------------------------------- chars ---


def test_chars_json_matches_the_frozen_table():
    proc = run("chars", "--q", 7, "--json", check=True)
    doc = stdout_doc(proc)
    assert doc["meta"]["tool"] == "dirwalk"
    result = doc["result"]
    assert result["q"] == 7 and result["phi"] == 6 and result["generator"] == 3
    records = result["characters"]
    assert len(records) == 6
    got = set()
    for rec in records:
        values = rec["values"]
        assert values[6] is None  # chi vanishes at n = 7
        got.add((rec["j"], tuple(values[:6])))
    assert got == TABLE_MOD7
    assert result["orthogonality_max_residual"] < 1e-12


def test_chars_csv_has_one_row_per_character(tmp_path):
    out = tmp_path / "chars.csv"
    run("chars", "--q", 11, "--csv", out, check=True)
    header, rows = read_csv(out)
    assert header == ["j", "order", "parity", "kind", "values"]
    assert len(rows) == 10
    assert rows[0][3] == "principal"


# ---------------------------------------------------------------- primes ---


def test_primes_nth():
    doc = stdout_doc(run("primes", "--nth", 6, check=True))
    assert doc["result"]["prime"] == 13


def test_primes_count_is_strict():
    doc = stdout_doc(run("primes", "--upto", 100, "--count-only", check=True))
    assert doc["result"]["count"] == 25
    doc = stdout_doc(run("primes", "--upto", 13, "--count-only", check=True))
    assert doc["result"]["count"] == 5  # 13 itself excluded


def test_primes_list(tmp_path):
    out = tmp_path / "p.csv"
    run("primes", "--upto", 20, "--csv", out, check=True)
    header, rows = read_csv(out)
    assert header == ["n", "p"]
    assert [int(r[1]) for r in rows] == [2, 3, 5, 7, 11, 13, 17, 19]


# ----------------------------------------------------------------- pairs ---


def test_pairs_hand_counts(tmp_path):
    out = tmp_path / "pairs.csv"
    proc = run("pairs", "--q", 3, "--k", 1, "--upto", 20, "--csv", out,
               check=True)
    doc = stdout_doc(proc)
    assert doc["result"]["n_pi"] == 8
    assert doc["result"]["dropped_pairs"] == 2
    header, rows = read_csv(out)
    assert header == ["a", "b", "count", "f_emp", "f_los", "residual"]
    counts = {(int(r[0]), int(r[1])): int(r[2]) for r in rows}
    assert counts == {(1, 1): 0, (1, 2): 3, (2, 1): 3, (2, 2): 0}


def test_pairs_los_fills_prediction_columns(tmp_path):
    out = tmp_path / "pairs.csv"
    run("pairs", "--q", 7, "--k", 1, "--upto", 100000, "--los", "--csv", out,
        check=True)
    header, rows = read_csv(out)
    assert len(rows) == 36
    for r in rows:
        f_emp, f_los, residual = map(float, r[3:])
        assert abs(f_emp - f_los - residual) < 1e-15
    diag = {float(r[3]) for r in rows if r[0] == r[1]}
    assert all(v < 1.0 / 36.0 for v in diag)  # diagonal deficit


# ------------------------------------------------------------------ freq ---


def test_freq_principal_concentrates(tmp_path):
    out = tmp_path / "freq.csv"
    proc = run("freq", "--q", 7, "--char", 0, "--upto", 100, "--csv", out,
               check=True)
    doc = stdout_doc(proc)
    assert doc["result"]["n_pi"] == 25
    assert doc["result"]["zero_count"] == 1
    header, rows = read_csv(out)
    assert header == ["class_index", "count", "freq", "deviation"]
    assert len(rows) == 1
    assert int(rows[0][1]) == 24
    assert math.isclose(float(rows[0][2]), 0.96)


# ------------------------------------------------------------------ walk ---


def test_walk_zero_steps_is_an_empty_series():
    proc = run("walk", "--q", 7, "--char", 1, "--n", 0, check=True)
    assert proc.returncode == 0
    doc = stdout_doc(proc)
    assert doc["result"]["rows"] == 0
    assert doc["result"]["final"] == {"re": 0.0, "im": 0.0}


def test_walk_hand_values(tmp_path):
    out = tmp_path / "walk.csv"
    run("walk", "--q", 7, "--char", 3, "--n", 5, "--csv", out, check=True)
    header, rows = read_csv(out)
    assert header == ["n", "c"]
    # chi_4-type character at p = 2,3,5,7,11: +1,-1,-1,0,+1
    assert [float(r[1]) for r in rows] == [1.0, 0.0, -1.0, -1.0, 0.0]


def test_walk_checkpoints_subset(tmp_path):
    out = tmp_path / "walk.csv"
    run("walk", "--q", 7, "--char", 3, "--n", 5, "--checkpoints", "2,5",
        "--csv", out, check=True)
    _, rows = read_csv(out)
    assert [int(r[0]) for r in rows] == [2, 5]
    assert [float(r[1]) for r in rows] == [0.0, 0.0]


def test_walk_complex_mode_has_two_columns(tmp_path):
    out = tmp_path / "walk.csv"
    run("walk", "--q", 7, "--char", 1, "--n", 10, "--mode", "complex",
        "--csv", out, check=True)
    header, rows = read_csv(out)
    assert header == ["n", "c_re", "c_im"]
    assert len(rows) == 10


def test_long_walk_requires_checkpoints():
    proc = run("walk", "--q", 7, "--char", 1, "--n", 2**25)
    assert proc.returncode == 2


# -------------------------------------------------------------- ensemble ---

ENSEMBLE_ARGS = ("ensemble", "--q", 7, "--char", 1, "--n1", 1000, "--N", 100,
                 "--M", 50, "--spacing", "rand:5:25", "--seed", 42)


def test_ensemble_determinism_and_threads(tmp_path):
    a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
    run(*ENSEMBLE_ARGS, "--csv", a, check=True)
    run(*ENSEMBLE_ARGS, "--csv", b, check=True)
    run(*ENSEMBLE_ARGS, "--csv", c, "--threads", 2, check=True)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() == c.read_bytes()


def test_ensemble_seed_changes_the_blocks(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(*ENSEMBLE_ARGS, "--csv", a, check=True)
    run(*ENSEMBLE_ARGS[:-1], 43, "--csv", b, check=True)
    assert a.read_bytes() != b.read_bytes()


def test_ensemble_csv_schema(tmp_path):
    out = tmp_path / "ens.csv"
    proc = run(*ENSEMBLE_ARGS, "--csv", out, check=True)
    header, rows = read_csv(out)
    assert header == ["block_index", "start", "C_N", "normalized"]
    assert len(rows) == 50
    doc = stdout_doc(proc)
    assert doc["result"]["blocks"] == 50
    assert "ks_p_value" in doc["result"]["normalized"]


def test_ensemble_char_file_round_trip(tmp_path):
    chars = tmp_path / "chars.json"
    proc = run("chars", "--q", 7, "--json", check=True)
    chars.write_text(proc.stdout.decode().strip().splitlines()[-1])
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(*ENSEMBLE_ARGS, "--csv", a, check=True)
    run(*ENSEMBLE_ARGS, "--csv", b, "--char-file", chars, check=True)
    assert a.read_bytes() == b.read_bytes()


def test_ensemble_char_file_mismatch_fails(tmp_path):
    chars = tmp_path / "chars.json"
    proc = run("chars", "--q", 7, "--json", check=True)
    doc = json.loads(proc.stdout.decode().strip().splitlines()[-1])
    doc["result"]["characters"][1]["values"][1] = 5  # corrupt one angle
    chars.write_text(json.dumps(doc))
    proc = run(*ENSEMBLE_ARGS, "--char-file", chars)
    assert proc.returncode == 1
    assert b"disagrees" in proc.stderr


def test_ensemble_histogram(tmp_path):
    out = tmp_path / "ens.csv"
    run(*ENSEMBLE_ARGS, "--csv", out, "--hist-bins", 10, check=True)
    header, rows = read_csv(tmp_path / "ens.csv.hist.csv")
    assert header == ["bin_center", "count", "normal_pdf_reference"]
    assert len(rows) == 10
    assert sum(int(r[1]) for r in rows) == 50


# ----------------------------------------------------------------- lfunc ---


def test_lfunc_value():
    doc = stdout_doc(run("lfunc", "--q", 3, "--char", 1, "--s", "1,0",
                         check=True))
    want = math.pi / (3 * math.sqrt(3))
    assert math.isclose(doc["result"]["value"]["re"], want, abs_tol=1e-12)
    assert abs(doc["result"]["value"]["im"]) < 1e-12


def test_lfunc_fe_residual_on_the_critical_line():
    doc = stdout_doc(run("lfunc", "--q", 7, "--char", 1, "--s", "0.5,0",
                         "--fe-check", check=True))
    assert doc["result"]["fe_residual"] < 1e-10


def test_lfunc_euler_split():
    doc = stdout_doc(run("lfunc", "--q", 7, "--char", 1, "--s", "2,0",
                         "--euler-n", 1000, check=True))
    # truncation tail over primes beyond the 1000th, of order 1e-5
    assert doc["result"]["euler"]["residual"] < 1e-3


def test_lfunc_residue_at_the_pole():
    doc = stdout_doc(run("lfunc", "--q", 7, "--char", 0, "--s", "1,0",
                         "--residue", check=True))
    assert doc["result"]["value"] is None
    assert doc["result"]["pole_at_1"] is True
    assert math.isclose(doc["result"]["residue_at_1"]["re"], 6 / 7,
                        abs_tol=1e-6)


def test_lfunc_principal_pole_without_residue_fails():
    proc = run("lfunc", "--q", 7, "--char", 0, "--s", "1,0")
    assert proc.returncode == 1


# ------------------------------------------------------------------ meta ---


def test_meta_record_carries_the_config():
    doc = stdout_doc(run("freq", "--q", 7, "--char", 2, "--upto", 1000,
                         "--no-cache", check=True))
    meta = doc["meta"]
    assert meta["subcommand"] == "freq"
    assert meta["config"]["q"] == 7
    assert meta["config"]["char"] == 2
    assert meta["config"]["no_cache"] is True
    assert meta["wall_seconds"] >= 0.0
    assert "version" in meta


def test_csv_quoting_is_rfc4180(tmp_path):
    # no field in our outputs needs quoting, so a clean parse plus CRLF
    # endings is the observable contract
    out = tmp_path / "w.csv"
    run("walk", "--q", 7, "--char", 1, "--n", 3, "--csv", out, check=True)
    raw = out.read_bytes()
    assert raw.endswith(b"\r\n")
    assert b'"' not in raw
