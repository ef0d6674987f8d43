"""Command line interface: worked-example pins, exit codes, byte determinism."""

import json
import subprocess
import sys
from importlib import resources

import pytest

from groupident.model import instance_from_json

EX1 = str(resources.files("groupident") / "fixtures" / "ex1.json")
EX2 = str(resources.files("groupident") / "fixtures" / "ex2.json")


def run_cli(*args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "groupident.cli", *args],
        capture_output=True,
        text=True,
        **kwargs,
    )


def test_eval_pins_on_the_shipped_profile():
    assert run_cli("eval", "--rule", "csr", "--in", EX1).stdout == "{a1,a2,a3,a4,a5}\n"
    assert (
        run_cli("eval", "--rule", "consent(1,1)", "--in", EX1).stdout
        == "{a1,a2,a4,a5,a6}\n"
    )
    assert run_cli("eval", "--rule", "2ic", "--in", EX1).stdout == "{a1,a2,a4}\n"


def test_eval_json_format():
    r = run_cli("eval", "--rule", "csr", "--in", EX1, "--format", "json")
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    assert payload["record"] == "eval"
    assert payload["qualified"] == [0, 1, 2, 3, 4]


def test_trace_renders_every_stage():
    r = run_cli("trace", "--rule", "csr", "--in", EX1)
    assert r.stdout == (
        "csr\n"
        "  K0 {a1,a2}\n"
        "  K1 {a1,a2,a3,a4}\n"
        "  K2 {a1,a2,a3,a4,a5}\n"
        "  final {a1,a2,a3,a4,a5}\n"
    )
    r = run_cli("trace", "--rule", "ic", "--in", EX1)
    assert r.stdout == (
        "ic\n"
        "  Q0 {a1,a2} K0 {a1,a2}\n"
        "  Q1 {a4} K1 {a1,a2,a4}\n"
        "  Q2 {a5} K2 {a1,a2,a4,a5}\n"
        "  Q3 {} K3 {a1,a2,a4,a5}\n"
        "  final {a1,a2,a4,a5}\n"
    )


def test_solve_agrees_across_algorithms_on_the_shipped_instance():
    poly = run_cli("solve", "--in", EX2, "--algo", "poly")
    assert poly.returncode == 0
    assert poly.stdout == "YES, cost 2 (solve_csr_dgcdi_corrected)\n  delete {a4,a5}\n"
    brute = run_cli("solve", "--in", EX2, "--algo", "brute")
    assert brute.returncode == 0
    assert brute.stdout.startswith("YES, cost 2")


def test_solve_poly_refuses_cells_without_an_algorithm(tmp_path):
    hard = {
        "n": 3,
        "profile": [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
        "rule": "ic",
        "kind": "delete",
        "priced": False,
        "aplus": [0],
        "aminus": [],
        "budget": 1,
    }
    path = tmp_path / "hard.json"
    path.write_text(json.dumps(hard))
    r = run_cli("solve", "--in", str(path), "--algo", "poly")
    assert r.returncode == 2
    assert "no polynomial algorithm known" in r.stderr
    assert run_cli("solve", "--in", str(path), "--algo", "brute").returncode == 0


def test_verify_exit_codes(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"kind": "delete", "U": [3, 4]}))
    r = run_cli("verify", "--in", EX2, "--solution", str(good))
    assert (r.returncode, r.stdout) == (0, "Valid, cost 2\n")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "delete", "U": [0]}))
    r = run_cli("verify", "--in", EX2, "--solution", str(bad))
    assert r.returncode == 1
    assert r.stdout.startswith("Invalid:")


def test_reduce_emits_a_loadable_instance(tmp_path):
    src = tmp_path / "cover.json"
    src.write_text(
        json.dumps(
            {
                "problem": "setcover",
                "universe": ["x1", "x2"],
                "family": [["x1"], ["x2"]],
                "k": 2,
            }
        )
    )
    r = run_cli("reduce", "--theorem", "T-IC-DGCAI", "--in", str(src))
    assert r.returncode == 0
    inst = instance_from_json(json.loads(r.stdout))
    assert inst.society.n == 4
    assert "T-IC-DGCAI" in r.stderr  # metadata goes to stderr, not stdout


def test_reduce_rejects_unknown_theorems(tmp_path):
    src = tmp_path / "cover.json"
    src.write_text(
        json.dumps({"problem": "setcover", "universe": ["a"], "family": [["a"]], "k": 1})
    )
    r = run_cli("reduce", "--theorem", "T-NOPE", "--in", str(src))
    assert r.returncode == 2


def test_immunity_exhaustive_immune_cell_exits_zero():
    r = run_cli(
        "immunity",
        "--rule", "consent(1,1)",
        "--kind", "delete",
        "--objective", "constructive",
        "--mode", "exhaustive",
        "--max-n", "2",
    )
    assert r.returncode == 0
    assert r.stdout.startswith("immune: no attack exists")


def test_immunity_finds_a_witness_and_exits_one():
    r = run_cli(
        "immunity",
        "--rule", "csr",
        "--kind", "relaxed-delete",
        "--objective", "general",
        "--mode", "exhaustive",
        "--max-n", "3",
    )
    assert r.returncode == 1
    assert r.stdout.startswith("susceptible: attack found at n=3")
    assert "delete {a0,a1}" in r.stdout


def test_crosscheck_fixtures_stream():
    r = run_cli("crosscheck", "--suite", "fixtures", "--format", "json")
    assert r.returncode == 0
    rows = [json.loads(line) for line in r.stdout.splitlines()]
    assert rows[-1]["record"] == "summary"
    assert rows[-1]["passed"] is True


def test_gen_is_deterministic_and_loadable():
    argv = (
        "gen", "--rule", "lsr", "--n", "5", "--kind", "bribery",
        "--objective", "destructive", "--seed", "9",
    )
    a = run_cli(*argv)
    b = run_cli(*argv)
    assert a.stdout == b.stdout
    instance_from_json(json.loads(a.stdout))


def test_out_flag_writes_the_payload_to_a_file(tmp_path):
    out = tmp_path / "result.txt"
    r = run_cli("eval", "--rule", "csr", "--in", EX1, "--out", str(out))
    assert r.returncode == 0
    assert r.stdout == ""
    assert out.read_text() == "{a1,a2,a3,a4,a5}\n"


def test_usage_errors_exit_two(tmp_path):
    assert run_cli("eval", "--rule", "csr", "--in", "/nonexistent.json").returncode == 2
    assert run_cli("eval", "--rule", "nope", "--in", EX1).returncode == 2
    assert run_cli("frobnicate").returncode == 2
    empty = tmp_path / "empty.json"
    empty.write_text("not json")
    assert run_cli("eval", "--rule", "csr", "--in", str(empty)).returncode == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "--rule", "csr", "--in", EX1, "--format", "json"),
        ("trace", "--rule", "2lic", "--in", EX1),
        ("solve", "--in", EX2),
        ("crosscheck", "--suite", "fixtures", "--format", "json"),
        ("bench", "--solver", "solve_lsr_rdgcdi", "--sizes", "6", "--runs", "2"),
    ],
)
def test_stdout_is_byte_identical_across_runs(argv):
    first = run_cli(*argv)
    second = run_cli(*argv)
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0


def test_bench_timings_stay_on_stderr():
    r = run_cli("bench", "--solver", "solve_lsr_rdgcdi", "--sizes", "6,8", "--runs", "2")
    assert r.returncode == 0
    assert "median" in r.stderr
    assert "median" not in r.stdout
