import json
import subprocess
import sys

import pytest

from gr1w import benchmark_path
from gr1w.cli import main


def bench(name):
    return str(benchmark_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def test_weakness_response_with_fairness(capsys):
    report = run_json(capsys, "weakness", bench("ex5_phi1"))
    row = report["results"][0]
    assert row["d1"] == pytest.approx(0.792481, abs=1e-6)
    assert row["d2"] == 0.5
    assert (row["states"], row["edges"], row["sccs"], row["m"]) == (4, 12, 1, 1)
    assert report["tool"] == "gr1w" and report["command"]["name"] == "weakness"


def test_weakness_with_refinement(capsys):
    report = run_json(capsys, "weakness", bench("ext_lift_amended"),
                      "--refine", bench("ext_phi6"), "--side", "all")
    row = report["results"][0]
    assert row["d1"] == pytest.approx(0.3746, abs=1e-3)
    assert row["d2"] == pytest.approx(0.3346, abs=1e-3)


def test_table_and_json_agree(capsys):
    report = run_json(capsys, "weakness", bench("lift"), "--refine", bench("lift_phi3"))
    code, out, _ = run(capsys, "weakness", bench("lift"), "--refine", bench("lift_phi3"))
    row = report["results"][0]
    assert code == 0
    assert f"{row['d1']:.4f}" in out and f"{row['d2']:.4f}" in out


def test_json_is_deterministic_and_exact(capsys):
    argv = ("weakness", bench("ex5_phi1"), "--format", "json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    d1 = json.loads(first)["results"][0]["d1"]
    assert d1 == float(f"{d1:.12g}")


def test_timing_is_opt_in(capsys):
    plain = run_json(capsys, "weakness", bench("ex5_phi1"))
    timed = run_json(capsys, "weakness", bench("ex5_phi1"), "--timing")
    assert "seconds" not in plain["results"][0]
    assert timed["results"][0]["seconds"] >= 0


def test_parse_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.gr1"
    bad.write_text("var a;\nenv inv G (a &);\n")
    code, out, err = run(capsys, "weakness", str(bad))
    assert code == 2 and out == ""
    assert "line 2" in err and str(bad) in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "weakness", str(tmp_path / "nope.gr1"))
    assert code == 2 and "cannot read" in err


def test_cap_exit_3(capsys):
    code, _, err = run(capsys, "weakness", bench("ext_lift"), "--max-vars", "4")
    assert code == 3 and "cap" in err


def test_mismatch_exit_4(capsys):
    code, _, err = run(capsys, "compare", bench("ex1_true"), bench("ex2_phi1"))
    assert code == 4 and err


def test_compare_lift(capsys):
    report = run_json(capsys, "compare", bench("lift_phi3"), bench("lift_phi4"),
                      "--base", bench("lift"))
    assert report["comparison"]["a_is"] == "strictly stronger"
    code, out, _ = run(capsys, "compare", bench("lift_phi3"), bench("lift_phi4"),
                       "--base", bench("lift"))
    assert "strictly stronger than B" in out


def test_compare_identical(capsys):
    report = run_json(capsys, "compare", bench("ex4_phi1"), bench("ex4_phi1"))
    assert report["comparison"]["a_is"] == "equal"


def test_implies_with_witness(capsys):
    code, out, _ = run(capsys, "implies", bench("ex4_phi1"), bench("ex4_phi2"),
                       "--side", "all", "--witness")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].endswith(": yes")
    assert lines[1].endswith(": no")
    assert "({b})^w" in lines[2]


def test_implies_incomparable(capsys):
    report = run_json(capsys, "implies", bench("count_phi1"), bench("count_phi2"))
    assert [e["holds"] for e in report["implication"]] == [False, False]


def test_rank_lift(capsys):
    refs = [bench(f"lift_phi{i}") for i in (1, 2, 3, 4)]
    report = run_json(capsys, "rank", bench("lift"), *refs)
    order = [e["name"] for e in report["ranking"]]
    assert order == [refs[1], refs[3], refs[2], refs[0]]
    assert [e["rank"] for e in report["ranking"]] == [1, 2, 3, 4]


def test_rank_ties_keep_input_order(capsys):
    refs = [bench("lift_phi3"), bench("lift_phi1"), bench("lift_phi3")]
    report = run_json(capsys, "rank", bench("lift"), *refs)
    ranking = report["ranking"]
    assert [e["rank"] for e in ranking] == [1, 1, 3]
    assert ranking[0]["tie"] and ranking[1]["tie"] and not ranking[2]["tie"]
    code, out, _ = run(capsys, "rank", bench("lift"), *refs)
    assert out.count("[tie: equal]") == 2


def test_rank_single(capsys):
    report = run_json(capsys, "rank", bench("lift"), bench("lift_phi2"))
    assert report["ranking"] == [{"name": bench("lift_phi2"), "rank": 1, "tie": False}]


def test_rank_puts_empty_last(capsys, tmp_path):
    empty = tmp_path / "empty.gr1"
    empty.write_text("".join(f"var {v};\n" for v in ("b1", "b2", "b3", "f1", "f2", "f3"))
                     + "env inv G false;\n")
    report = run_json(capsys, "rank", bench("lift"), str(empty), bench("lift_phi1"))
    assert report["ranking"][-1]["name"] == str(empty)


def test_stats(capsys):
    files = [bench(f"count_phi{i}") for i in (1, 2)]
    report = run_json(capsys, "stats", *files)
    assert report["stats"] == {"n_specs": 2, "n_pairs": 1, "pct_impl": 0.0, "pct_weak": 100.0}


def test_stats_needs_two_files(capsys):
    with pytest.raises(SystemExit) as info:
        main(["stats", bench("count_phi1")])
    assert info.value.code == 2


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "gr1w.cli", "weakness", bench("ex1_true")],
                          capture_output=True, text=True, check=True)
    assert "1.0000" in proc.stdout
