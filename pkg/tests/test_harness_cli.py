from __future__ import annotations

import csv
import io
import json

import pytest

from insdelq import cli, harness
from insdelq.editgraph import BOT_ORDER, TOP_ORDER
from insdelq.harness import ClassicalConfig, ExperimentConfig, cmd_experiment, cmd_verify_classical, derived_seed

SMALL = {"messages": 1, "insert_indices": [1, 3], "delete_indices": [2, 6],
         "sigma_catalogue": ["random_pure", "maximally_mixed"], "random_pure_count": 1}


def test_derived_seed_is_stable_and_distinct():
    assert derived_seed(0, 1, 2) == derived_seed(0, 1, 2)
    assert len({derived_seed(0, s, i) for s in range(3) for i in range(5)}) == 15


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(insert_indices=[7])
    with pytest.raises(ValueError):
        ExperimentConfig(messages=0)
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"bogus": 1})
    with pytest.raises(ValueError):
        ExperimentConfig(sigma_catalogue=["coherent"])


def test_small_experiment_report():
    rep = cmd_experiment(ExperimentConfig.from_dict(SMALL))
    assert rep.ok and rep.passed == len(rep.runs) and rep.failed == 0
    summary = rep.summary()
    assert summary["runs"] == len(rep.runs)
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == harness.CSV_COLUMNS
    assert len(rows) == len(rep.runs) + 1
    assert "wall_clock" not in json.loads(rep.to_json())


def test_impossible_threshold_fails_everything():
    rep = cmd_experiment(ExperimentConfig.from_dict({**SMALL, "threshold": 1.1}))
    assert rep.passed == 0 and not rep.ok


def test_threads_do_not_change_report():
    a = cmd_experiment(ExperimentConfig.from_dict(SMALL)).to_json()
    b = cmd_experiment(ExperimentConfig.from_dict({**SMALL, "threads": 3})).to_json()
    assert json.loads(a)["runs"] == json.loads(b)["runs"]


def test_sample_mode():
    rep = cmd_experiment(ExperimentConfig.from_dict({**SMALL, "mode": "sample"}))
    assert rep.ok and all(r["seed"] is not None for r in rep.runs)


def test_verify_classical_small_and_fault_injection():
    cfg = dict(t_values=[2], n_min=5, n_max=6, enumerate_n_max=5, random_pairs=20)
    assert cmd_verify_classical(ClassicalConfig.from_dict(cfg)).ok
    bad = cmd_verify_classical(ClassicalConfig.from_dict({**cfg, "orders": [TOP_ORDER, BOT_ORDER]}))
    assert not bad.ok and bad.counterexamples
    assert {"check", "x", "y"} <= set(bad.counterexamples[0])


def test_verify_classical_refuses_t1():
    with pytest.raises(ValueError):
        cmd_verify_classical(ClassicalConfig(t_values=[1]))


# CLI


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_cli_candidates_json(tmp_path, capsys):
    x, y = write(tmp_path, "x.txt", "0 1 2\n"), write(tmp_path, "y.txt", "1 1 2\n")
    assert cli.main(["candidates", x, y, "--q", "3", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["S1"] == [1] and data["S2"] == [2] and data["J"] == [1, 2]
    assert data["matrix"] == [[0, 1, 2, 3], [1, 2, 3, 4], [2, 1, 2, 3], [3, 2, 3, 2]]


def test_cli_equal_words(tmp_path, capsys):
    x = write(tmp_path, "x.txt", "0 1 2 0\n")
    assert cli.main(["candidates", x, x, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["S1"] == [] and data["S2"] == []


def test_cli_parse_error(tmp_path, capsys):
    x, y = write(tmp_path, "x.txt", "0 q 2\n"), write(tmp_path, "y.txt", "1 1 2\n")
    assert cli.main(["matrix", x, y]) == 2
    assert "line 1, column 3" in capsys.readouterr().err
    assert cli.main(["matrix", str(tmp_path / "missing"), y]) == 2


def test_cli_bad_config(tmp_path):
    cfg = write(tmp_path, "c.json", '{"n": 5,')
    assert cli.main(["experiment", "--config", cfg]) == 2
    cfg = write(tmp_path, "c2.json", '{"bogus": 1}')
    assert cli.main(["experiment", "--config", cfg]) == 2


def test_cli_experiment_outputs_and_determinism(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", json.dumps(SMALL))
    assert cli.main(["experiment", "--config", cfg, "--seed", "7", "--out", str(tmp_path / "a")]) == 0
    assert cli.main(["experiment", "--config", cfg, "--seed", "7", "--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert cli.main(["experiment", "--config", cfg, "--threshold", "1.1"]) == 1


def test_cli_encode_channel_decode(tmp_path, capsys):
    cw = str(tmp_path / "cw.json")
    rx = str(tmp_path / "rx.json")
    assert cli.main(["encode", "--seed", "3", "--out", cw]) == 0
    ch = write(tmp_path, "ch.json", json.dumps({"insert_at": 2, "delete_at": 5, "sigma": {"kind": "basis", "index": 5}}))
    assert cli.main(["channel", "--state", cw, "--channel", ch, "--out", rx]) == 0
    assert json.loads(open(rx).read())["dims"] == [6] * 5
    out = str(tmp_path / "dec.json")
    assert cli.main(["decode", "--seed", "3", "--channel", ch, "--out", out]) == 0
    rep = json.loads(open(out).read())["report"]
    assert rep["branch"] == "deletion-path" and rep["fidelity"] >= 1 - 1e-9
    assert cli.main(["decode", "--state", rx, "--seed", "1"]) == 0
    assert cli.main(["decode"]) == 2


def test_cli_verify_quantum(capsys):
    assert cli.main(["verify", "quantum"]) == 0
    data = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert data["failed"] == 0 and "knill_laflamme" in data["checks"]


def test_cli_verify_classical_budget(capsys):
    assert cli.main(["verify", "classical", "--budget", "10"]) == 2
