import json
import shutil
from pathlib import Path

import pytest

from hetsim.cli import main

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
STEP = str(SCENARIOS / "table2_step.json")
DISTURBANCE = str(SCENARIOS / "table2_disturbance.json")
LINEAR = str(SCENARIOS / "linear_delta_e.json")


def mutated_scenario(tmp_path, name, mutate):
    doc = json.loads(Path(STEP).read_text())
    mutate(doc)
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_run_happy_path(tmp_path, capsys):
    out = tmp_path / "step.csv"
    code = main(["run", STEP, "--num-cycles", "30", "-s", "7", "-o", str(out)])
    assert code == 0
    assert out.exists()
    lines = out.read_text().splitlines()
    assert len(lines) == 31
    printed = capsys.readouterr().out
    assert "pingpong index" in printed
    assert "converged" in printed


def test_run_seed_changes_output(tmp_path):
    out_a, out_b, out_c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
    main(["run", STEP, "--num-cycles", "25", "-s", "1", "-o", str(out_a)])
    main(["run", STEP, "--num-cycles", "25", "-s", "2", "-o", str(out_b)])
    main(["run", STEP, "--num-cycles", "25", "-s", "1", "-o", str(out_c)])
    assert out_a.read_bytes() != out_b.read_bytes()
    assert out_a.read_bytes() == out_c.read_bytes()


def test_run_missing_file_exits_2(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    code = main(["run", str(missing)])
    assert code == 2
    assert str(missing) in capsys.readouterr().err


def test_run_invalid_config_lists_violation(tmp_path, capsys):
    path = mutated_scenario(tmp_path, "bad_rho.json",
                            lambda d: d["strategy"].update(rho=1.0))
    code = main(["run", path, "-o", str(tmp_path / "x.csv")])
    assert code == 1
    assert "rho must be < 1" in capsys.readouterr().err


def test_run_malformed_json_exits_1(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["run", str(path)]) == 1


def test_run_unknown_key_exits_1(tmp_path, capsys):
    path = mutated_scenario(tmp_path, "unknown.json",
                            lambda d: d.update(extra_knob=1))
    assert main(["run", path]) == 1
    assert "extra_knob" in capsys.readouterr().err


def test_run_unwritable_output_exits_2(tmp_path, capsys):
    out = tmp_path / "no_dir" / "x.csv"
    code = main(["run", STEP, "--num-cycles", "5", "-o", str(out)])
    assert code == 2
    assert "x.csv" in capsys.readouterr().err


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["run", STEP, "--bogus"])
    assert exc.value.code != 0


def test_unknown_subcommand_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", STEP])
    assert exc.value.code != 0


def test_compare_writes_both_and_reports(tmp_path, capsys):
    out = tmp_path / "cmp.csv"
    code = main(["compare", STEP, "--num-cycles", "60", "--mode", "direct",
                 "-s", "5", "-o", str(out)])
    assert code == 0
    game = tmp_path / "cmp_game.csv"
    baseline = tmp_path / "cmp_baseline_mcdm.csv"
    assert game.exists() and baseline.exists()
    printed = capsys.readouterr().out
    assert "handoff rate ratio" in printed

    def total_handoffs(path):
        lines = path.read_text().splitlines()
        idx = lines[0].split(",").index("handoffs")
        return sum(int(l.split(",")[idx]) for l in lines[1:])

    assert total_handoffs(game) < total_handoffs(baseline)


def test_compare_seed_override_applies_to_both(tmp_path):
    out1, out2 = tmp_path / "one.csv", tmp_path / "two.csv"
    main(["compare", STEP, "--num-cycles", "25", "-s", "9", "-o", str(out1)])
    main(["compare", STEP, "--num-cycles", "25", "-s", "9", "-o", str(out2)])
    assert (tmp_path / "one_game.csv").read_bytes() == \
        (tmp_path / "two_game.csv").read_bytes()
    assert (tmp_path / "one_baseline_mcdm.csv").read_bytes() == \
        (tmp_path / "two_baseline_mcdm.csv").read_bytes()


def test_compare_missing_output_dir_exits_2(tmp_path):
    out = tmp_path / "ghost" / "cmp.csv"
    assert main(["compare", STEP, "--num-cycles", "5", "-o", str(out)]) == 2


def test_oracle_prints_prediction(capsys):
    code = main(["oracle", LINEAR])
    assert code == 0
    printed = capsys.readouterr().out
    assert "predicted shift:         7" in printed
    assert "simulated steady shift:" in printed


def test_oracle_without_disturbance_exits_1(capsys):
    code = main(["oracle", STEP])
    assert code == 1
    assert "disturbance" in capsys.readouterr().err


def test_calibrate_shipped_profiles_pass(capsys):
    assert main(["calibrate", STEP]) == 0
    printed = capsys.readouterr().out
    assert "FAIL" not in printed
    assert printed.count("PASS") == 5


def test_calibrate_detects_lte_best_at_base_load(tmp_path, capsys):
    # Make LTE the best network at load 1: condition (b) must fail.
    path = mutated_scenario(
        tmp_path, "lte_best.json",
        lambda d: d["profiles"]["lte"].update(d0=0.001, p0=0.001, g0=0.001))
    assert main(["calibrate", path]) == 1
    assert "FAIL  lte-worst-at-base-load" in capsys.readouterr().out


def test_calibrate_detects_flat_curves(tmp_path, capsys):
    def flatten(doc):
        for prof in doc["profiles"].values():
            prof.update(a=0.0, b=0.0, h=0.0)
    path = mutated_scenario(tmp_path, "flat.json", flatten)
    assert main(["calibrate", path]) == 1
    assert "FAIL  decreasing-evaluation" in capsys.readouterr().out


def test_validate_ok(capsys):
    assert main(["validate", STEP]) == 0
    assert main(["validate", DISTURBANCE]) == 0
    assert main(["validate", LINEAR]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_reports_each_violation(tmp_path, capsys):
    def corrupt(doc):
        doc["strategy"]["rho"] = 1.0
        doc["initial_assignment"]["wifi"] = 25
    path = mutated_scenario(tmp_path, "bad.json", corrupt)
    assert main(["validate", path]) == 1
    printed = capsys.readouterr().out
    assert "rho must be < 1" in printed
    assert "assignment sum 55 != 50" in printed
