import io
import json
import subprocess
import sys

import pytest

from frobtest.cli import main, parse_number
from conftest import FIXTURES
from oracles import isprime, qft_core_ref

GOLDEN = FIXTURES / "cli"

CASES = {
    "test_1009.jsonl": ["test", "1009", "--seed", "42"],
    "test_1000003.jsonl": ["test", "1000003", "--seed", "42", "-B", "100", "-k", "3"],
    "test_341.jsonl": ["test", "341", "--seed", "1"],
    "test_m61.jsonl": ["test", "0x1fffffffffffffff", "--seed", "7", "-B", "2"],
    "audit_15.jsonl": ["audit", "15"],
    "audit_91.jsonl": ["audit", "91", "--skip-steps12", "--B", "2"],
    "audit_prop22_7.jsonl": ["audit", "--prop22", "7"],
    "bench_256.jsonl": ["bench", "--bits", "256", "--samples", "20", "--seed", "7"],
    "bench_64.jsonl": ["bench", "--bits", "64", "--samples", "5", "--seed", "3"],
}


def run(argv):
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    _, text = run(CASES[name])
    assert text == (GOLDEN / name).read_text()


def test_repeat_runs_are_byte_identical():
    for argv in (CASES["bench_64.jsonl"], CASES["test_1000003.jsonl"],
                 ["search", "3", "3000", "--samples", "3", "--seed", "5"]):
        assert run(argv) == run(argv)


@pytest.mark.parametrize("argv, code", [
    (["test", "1009", "--seed", "42"], 0),
    (["test", "341"], 1),
    (["test", "4"], 1),
    (["test", "2"], 0),
    (["test", "1"], 1),
    (["test", "abc"], 2),
    (["test", "15", "-B", "0"], 2),
    (["test", "15", "-k", "0"], 2),
    (["frob"], 2),
    (["audit"], 2),
    (["audit", "10"], 2),
    (["audit", "1003"], 2),
    (["audit", "--prop22", "9"], 2),
    (["audit", "15"], 0),
    (["bench", "--samples", "0"], 0),
])
def test_exit_codes(argv, code, capsys):
    assert run(argv)[0] == code


def test_test_examples():
    (rec,) = records(run(["test", "1009", "--seed", "42"])[1])
    assert rec["verdict"] == "probable_prime" and rec["selfridges"] <= 3
    (rec,) = records(run(["test", "341"])[1])
    assert (rec["verdict"], rec["reason"], rec["witness"]) == ("composite", "trial_division", 11)
    (rec,) = records(run(["test", "4"])[1])
    assert (rec["verdict"], rec["reason"]) == ("composite", "even")


def test_test_schema():
    (rec,) = records(run(CASES["test_1000003.jsonl"])[1])
    assert list(rec) == ["command", "n", "verdict", "reason", "witness", "mults",
                         "aux_ops", "selfridges", "seed", "B", "k"]
    assert isprime(rec["n"]) and rec["mults"] > 0


def test_seed_drawn_when_missing():
    (a,) = records(run(["test", "1000003", "-B", "5"])[1])
    assert 0 <= a["seed"] < 2**64
    (b,) = records(run(["test", "1000003", "-B", "5", "--seed", str(a["seed"])])[1])
    assert a == b


def test_text_output():
    code, text = run(["test", "1009", "--seed", "42", "--output", "text"])
    assert code == 0 and text.startswith("command=test  n=1009  verdict=probable_prime")
    assert run(["bench", "--bits", "32", "--samples", "1", "--output", "text"])[1].startswith(
        "command=bench")


def test_audit_91_records():
    recs = records(run(CASES["audit_91.jsonl"])[1])
    pc = next(r for r in recs if r["record"] == "pass_census")
    assert (pc["m_n"], pc["passes"], pc["alpha_exact"]) == (4248, 9, "1/472")
    assert all(r["holds"] for r in recs)


def test_audit_prop22_values():
    recs = records(run(CASES["audit_prop22_7.jsonl"])[1])
    got = {(r["epsilon1"], r["epsilon2"]): r["count"] for r in recs}
    assert got[(-1, 1)] == got[(1, -1)] == 9 and got[(1, 1)] == 6


def test_bench_schema():
    rows = records((GOLDEN / "bench_64.jsonl").read_text())
    assert len(rows) == 5
    for row in rows:
        assert row["bits"] == 64 and row["n"].bit_length() == 64 and row["n"] & 1
        assert row["qft_fast_reason"] == row["qft_naive_reason"]


def test_search_fixture_and_oracle():
    code, text = run(["search", "3", "100000", "--samples", "10", "--seed", "0",
                      "--skip-steps12"])
    assert code == 0 and text == (GOLDEN / "search_3_100000.jsonl").read_text()
    for rec in records(text):
        assert not isprime(rec["n"])
        for b, c in rec["passing"]:
            assert qft_core_ref(rec["n"], b, c) == "passed_all_steps"


def test_search_edge_ranges():
    assert run(["search", "10", "5"]) == (0, "")
    assert run(["search", "100003", "100003"]) == (0, "")
    # only primes in range
    assert run(["search", "1000037", "1000039", "--samples", "5"]) == (0, "")


def test_parse_number():
    assert parse_number("0x10") == 16 and parse_number("1_000") == 1000
    assert parse_number(str(2**300)) == 2**300


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "frobtest", "test", "341"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and json.loads(proc.stdout)["witness"] == 11
