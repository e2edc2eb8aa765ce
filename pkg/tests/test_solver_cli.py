from __future__ import annotations

import json

import pytest

from tripack.cli import _tau_grid, main
from tripack.core import gen_euclidean, packing_weight, save_instance, uniform_instance
from tripack.solver import solve


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_uniform_nine_gives_nine():
    sol = solve(uniform_instance(9))
    assert sol.report.w_best == 9.0
    assert sol.packing.is_perfect(9)


@pytest.mark.parametrize("seed", range(4))
def test_best_of_three_and_ratio(seed):
    inst = gen_euclidean(12, seed)
    sol = solve(inst, exact=True)
    r = sol.report
    assert r.w_best == max(r.w_T1, r.w_T2, r.w_T3)
    assert packing_weight(sol.packing, inst) == pytest.approx(r.w_best)
    assert r.w_C >= 0.8 * r.w_Cstar - 1e-9
    assert r.w_Cstar >= r.w_Bstar - 1e-9
    assert 2 / 3 * 0.8 - 1e-9 <= r.ratio <= 1 + 1e-12


def test_solve_rejects_bad_sizes():
    with pytest.raises(ValueError):
        solve(gen_euclidean(7, 0))
    with pytest.raises(ValueError):
        solve(gen_euclidean(18, 0), exact=True)


def test_cli_determinism(capsys):
    args = ("solve", "--gen", "graph", "--n", "15", "--seed", "4", "--json")
    c1, o1, _ = run(capsys, *args)
    c2, o2, _ = run(capsys, *args)
    assert c1 == c2 == 0 and o1 == o2
    data = json.loads(o1)
    assert data["n"] == 15 and data["seed"] == 4


def test_cli_solve_file(tmp_path, capsys):
    p = tmp_path / "u.txt"
    save_instance(uniform_instance(6), p)
    code, out, _ = run(capsys, "solve", "--input", str(p))
    assert code == 0 and "w_best" in out


@pytest.mark.parametrize("argv", [
    ("solve",),
    ("solve", "--gen", "euclidean", "--n", "7"),
    ("verify", "--suite", "nope"),
    ("lp", "--tau", "0.5"),
    ("lp", "--tau-grid", "0:1/3:0"),
    ("bench", "--sizes", "10"),
])
def test_cli_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and "error" in err


def test_cli_parse_errors_exit_one(capsys):
    for argv in (["solve", "--bogus"], ["frobnicate"]):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 1


def test_cli_metric_violation(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("n 3\n0 1 10\n0 2 1\n1 2 1\n")
    code, _, err = run(capsys, "solve", "--input", str(p))
    assert code == 1 and "(0, 1, 2)" in err


def test_cli_lp(capsys):
    code, out, _ = run(capsys, "lp", "--tau", "1/4", "--json")
    assert code == 0
    assert 0.668357 <= json.loads(out)["value"] <= 0.6684
    code, out, _ = run(capsys, "lp", "--tau-grid", "0:1/3:1/12")
    assert code == 0 and len(out.strip().splitlines()) == 6


def test_tau_grid():
    assert _tau_grid("0,1/4") == [0.0, 0.25]
    assert _tau_grid("0:1/3:1/6") == [0.0, 1 / 6, 1 / 3]


def test_cli_verify_and_bench(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "matching", "--json")
    assert code == 0 and json.loads(out)[0]["passed"]
    code, out, _ = run(capsys, "bench", "--sizes", "9", "--reps", "2", "--workers", "1",
                       "--exact", "--json")
    rows = json.loads(out)
    assert code == 0 and rows[0]["reps"] == 2 and rows[0]["ok"]


def test_cli_lp_near_one_third(capsys):
    code, out, _ = run(capsys, "lp", "--tau", "0.3333", "--json")
    assert code == 0 and json.loads(out)["value"] == pytest.approx(2 / 3, abs=1e-4)


@pytest.mark.slow
def test_bench_thirty_respects_cycle_ratio(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "30", "--reps", "10", "--eps", "0.2", "--json")
    rows = json.loads(out)
    assert code == 0 and rows[0]["reps"] == 10
    assert rows[0]["min_vs_Cstar"] >= 2 / 3 * 0.8
