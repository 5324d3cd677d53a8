import json
import subprocess
import sys

import pytest

from detfactor import bench, giantstep, poly
from detfactor.cli import main, parse_n, parse_report
from detfactor.factorize import Factorization, verify_factorization


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_factor_text(capsys):
    code, out, _ = run(capsys, "factor", "91")
    assert code == 0
    assert out.strip() == "91 = 7 * 13"


def test_factor_json(capsys):
    code, out, _ = run(capsys, "factor", "91", "--json")
    assert code == 0
    rep = parse_report(out)
    assert rep["n"] == "91"
    assert rep["algo"] == "sieved"
    assert rep["B"] == 3
    assert rep["factors"] == [{"p": "7", "e": 1}, {"p": "13", "e": 1}]
    assert isinstance(rep["ms"], (int, float))
    assert "stats" not in rep
    assert parse_report(json.dumps(rep)) == rep


def test_factor_json_stats(capsys):
    code, out, _ = run(capsys, "factor", "1000036000099", "--json", "--stats")
    assert code == 0
    rep = parse_report(out)
    assert set(rep["stats"]) == {"ring_mults", "poly_mults", "max_poly_degree", "gcd_calls",
                                 "shift_eval_calls", "levels_r", "b_final"}
    assert isinstance(rep["stats"]["b_final"], str)
    factors = tuple((int(f["p"]), f["e"]) for f in rep["factors"])
    assert verify_factorization(Factorization(int(rep["n"]), factors))


@pytest.mark.parametrize("algo", ["sieved", "bgs", "strassen", "trial"])
def test_factor_each_algorithm(capsys, algo):
    code, out, _ = run(capsys, "factor", "9991", "--algo", algo, "--json")
    assert code == 0
    rep = parse_report(out)
    assert rep["factors"] == [{"p": "97", "e": 1}, {"p": "103", "e": 1}]
    assert (rep["B"] > 0) == (algo == "sieved")


def test_factor_hex_and_stats_text(capsys):
    code, out, _ = run(capsys, "factor", "0x5b", "--stats")
    assert code == 0
    assert out.splitlines()[0] == "91 = 7 * 13"
    assert "ring_mults" in out


@pytest.mark.parametrize("bad", ["0", "-5", "abc", "0xZZ", ""])
def test_factor_bad_input_exit_2(capsys, bad):
    code, out, err = run(capsys, "factor", bad)
    assert code == 2
    assert out == ""
    assert "error" in err


def test_factor_bad_B_exit_2(capsys):
    assert run(capsys, "factor", "91", "--B", "2")[0] == 2
    assert run(capsys, "factor", "91", "--B", "65")[0] == 2


def test_parse_n():
    assert parse_n("91") == 91
    assert parse_n("0X5B") == 91
    assert parse_n("1_000") == 1000
    with pytest.raises(ValueError):
        parse_n("0")


def test_bench_table_structure(capsys):
    code, out, _ = run(capsys, "bench", "--bits", "40", "--count", "3", "--B-list", "3,5,7", "--json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 12
    for i in range(0, 12, 4):
        group = rows[i:i + 4]
        assert [r["variant"] for r in group] == ["bgs", "sieved B=3", "sieved B=5", "sieved B=7"]
        assert len({r["n"] for r in group}) == 1
        assert all(r["verified"] for r in group)
        assert int(group[0]["n"]).bit_length() == 40


def test_bench_text(capsys):
    code, out, _ = run(capsys, "bench", "--bits", "32", "--B-list", "5")
    assert code == 0
    assert len(out.strip().splitlines()) == 3


def test_bench_deterministic(capsys):
    def counters(seed):
        code, out, _ = run(capsys, "bench", "--bits", "36", "--seed", str(seed), "--B-list", "3,5", "--json")
        assert code == 0
        return [(r["n"], r["variant"], r["ring_mults"], r["max_poly_degree"]) for r in json.loads(out)]

    assert counters(1) == counters(1)
    assert counters(1) != counters(2)
    assert bench.semiprime(60, 1) == bench.semiprime(60, 1)


def test_bench_refuses_large_sizes(capsys):
    assert run(capsys, "bench", "--bits", "97")[0] == 2
    assert run(capsys, "bench", "--bits", "4")[0] == 2
    assert run(capsys, "bench", "--B-list", "3,99")[0] == 2


def test_semiprime_shape():
    n, p, q = bench.semiprime(60, 3)
    assert n == p * q and p < q and n.bit_length() == 60


def test_selftest_quick_passes(capsys):
    code, out, _ = run(capsys, "selftest", "--quick")
    assert code == 0
    assert [line.split()[:2] for line in out.strip().splitlines()] == [
        ["PASS", "eq_product"], ["PASS", "shift_eval_oracle"], ["PASS", "oracle_sweep"]]


def test_selftest_catches_corrupted_shift(capsys, monkeypatch):
    real = poly.shift_eval

    def corrupted(vals, hp):
        out = real(vals, hp)
        # flip the sign of one output
        out[0] = (-out[0]) % hp.ctx.N
        return out

    monkeypatch.setattr(giantstep, "shift_eval", corrupted)
    code, out, _ = run(capsys, "selftest", "--quick")
    assert code == 1
    assert out.startswith("FAIL eq_product")


def test_usage_errors_exit_2(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "nope")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "detfactor", "factor", "91"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.strip() == "91 = 7 * 13"
