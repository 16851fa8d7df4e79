import csv
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from cberlab import harness
from cberlab.harness import (Check, ConfigError, Outcome, UnknownExperimentError, list_experiments,
                             load_config, parse_config, replay_config, run_experiment, split_seed,
                             strip_timing, validate_report)


@pytest.fixture(scope="module")
def smoke_report():
    return run_experiment(load_config("smoke"), write=False)


# -- catalogue -------------------------------------------------------------

def test_catalogue_ids_unique_and_anchored():
    cat = list_experiments()
    ids = [e["id"] for e in cat]
    assert ids and len(ids) == len(set(ids))
    assert all(e["anchor"] and e["description"] for e in cat)


def test_acceptance_ids_in_catalogue():
    ids = {e["id"] for e in list_experiments()}
    cfg = load_config("acceptance")
    assert {j.experiment for j in cfg.jobs} <= ids
    assert len(cfg.jobs) == 11 and cfg.replay


# -- configs ---------------------------------------------------------------

def test_unknown_experiment_message():
    with pytest.raises(UnknownExperimentError) as err:
        parse_config({"experiment": "no-such-thing"})
    assert "no-such-thing" in str(err.value) and "dyadic" in str(err.value)


@pytest.mark.parametrize("data,fragment", [
    ([], "JSON object"),
    ({"jobs": [], "seed": 1}, "nonempty list"),
    ({"experiment": "dyadic", "jobs": ["dyadic"]}, "exactly one"),
    ({"experiment": "dyadic", "seed": -3}, "seed"),
    ({"experiment": "dyadic", "params": {"order_length": "8"}}, "order_length: expected int"),
    ({"experiment": "dyadic", "params": {"lenght": 8}}, "unknown parameter 'lenght'"),
    ({"experiment": "dyadic", "output": {"pdf": "x"}}, "output"),
    ({"experiment": "dyadic", "colour": "blue"}, "unknown top-level keys: colour"),
    ({"jobs": [{"experiment": "dyadic", "extra": 1}]}, "jobs[0]"),
    ({"experiment": "dyadic", "replay": "yes"}, "replay"),
])
def test_malformed_configs(data, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(data)
    assert fragment in str(err.value)


def test_unreadable_and_invalid_files(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(bad)


def test_seed_splitting():
    cfg = parse_config({"seed": 5, "jobs": ["dyadic", "dyadic", {"experiment": "dyadic",
                                                                   "params": {"seed": 99}}]})
    assert [j.seed for j in cfg.jobs] == [split_seed(5, 0), split_seed(5, 1), 99]
    assert split_seed(5, 0) != split_seed(5, 1) != split_seed(6, 1)
    assert split_seed(5, 0) == split_seed(5, 0)


def test_defaults_filled_in():
    cfg = parse_config({"experiment": "dyadic", "params": {"order_length": 5}})
    assert cfg.jobs[0].params == {"successor_length": 16, "order_length": 5, "conjugation_length": 12}
    assert cfg.id == "dyadic"


# -- running ---------------------------------------------------------------

def test_smoke_all_pass(smoke_report):
    assert smoke_report.passed and smoke_report.exit_code == 0
    names = [j["experiment"] for j in smoke_report.jobs]
    assert names[-1] == "determinism"
    assert smoke_report.jobs[-1]["checks"][0]["status"] == "PASS"


def test_report_validates_against_schema(smoke_report):
    data = json.loads(smoke_report.dumps())
    validate_report(data)
    fail = json.loads(json.dumps(data))
    fail["jobs"][0]["checks"][0]["status"] = "FAIL"  # a FAIL without a replay blob
    with pytest.raises(jsonschema.ValidationError):
        validate_report(fail)


def test_timing_isolated(smoke_report):
    data = smoke_report.to_json()
    assert set(data["timing"]) >= {"started", "total_seconds", "job_seconds"}
    text = json.dumps(strip_timing(data))
    assert "seconds" not in text and "started" not in text


def test_replay_is_byte_identical():
    cfg = load_config("smoke")
    cfg.replay = False
    a = run_experiment(cfg, write=False).dumps(timing=False)
    b = run_experiment(cfg, write=False).dumps(timing=False)
    assert a == b


def test_identical_across_processes_and_hash_seeds(tmp_path):
    """String hashing is salted per process; reports must not depend on it."""
    cfg = {"seed": 3, "jobs": [{"experiment": "colouring", "params": {"samples": 9, "radius": 3}},
                               {"experiment": "adversaries", "params": {"radii": [1]}},
                               {"experiment": "bijection-equivariance", "params": {"samples": 6}}]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    outs = []
    out = tmp_path / "report.json"
    for hs in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hs)
        subprocess.run([sys.executable, "-m", "cberlab.cli", "run", str(path), "--report", str(out)],
                       check=True, env=env, capture_output=True)
        outs.append(json.dumps(strip_timing(json.loads(out.read_text())), sort_keys=True))
    assert outs[0] == outs[1]


def test_broken_tolerance_fails_with_replay_blob():
    cfg = parse_config({"experiment": "frequencies", "seed": 4,
                        "params": {"steps": 5000, "walks": 4, "tolerance": 1e-12}})
    rep = run_experiment(cfg, write=False)
    assert rep.exit_code == 1 and not rep.passed
    failing = [c for _, c in rep.checks if c["status"] == "FAIL"]
    assert failing and all("replay" in c for c in failing)
    blob = failing[0]["replay"]
    assert blob["params"]["tolerance"] == 1e-12 and blob["instance"]["steps"] == 5000
    again = run_experiment(replay_config(blob), write=False)
    redo = [c for _, c in again.checks if c["name"] == failing[0]["name"]][0]
    assert redo["status"] == "FAIL" and redo["measured"] == failing[0]["measured"]


def test_crashing_experiment_is_a_fail(monkeypatch):
    def boom(params, seed):
        raise RuntimeError("kaput")

    exp = harness.Experiment("boom", "test only", "raises", boom, {})
    monkeypatch.setitem(harness.REGISTRY, "boom", exp)
    rep = run_experiment(parse_config({"experiment": "boom"}), write=False)
    (name, check), = rep.checks
    assert check["status"] == "FAIL" and "kaput" in check["measured"] and "replay" in check


def test_empty_check_list_is_not_a_pass(monkeypatch):
    exp = harness.Experiment("empty", "test only", "no checks", lambda p, s: Outcome([]), {})
    monkeypatch.setitem(harness.REGISTRY, "empty", exp)
    assert run_experiment(parse_config({"experiment": "empty"}), write=False).exit_code == 1


def test_outputs_written(tmp_path):
    cfg = parse_config({"experiment": "ramsey", "seed": 2,
                        "params": {"colourings": 4, "max_brute_n": 6, "clique_n": 12,
                                   "clique_samples": 4, "band": [2.0, 12.0], "windows": 3},
                        "output": {"report": str(tmp_path / "r" / "report.json"),
                                   "csv_dir": str(tmp_path / "csv")}})
    run_experiment(cfg)
    validate_report(json.loads((tmp_path / "r" / "report.json").read_text()))
    with open(tmp_path / "csv" / "ramsey-delta-curve.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "delta_star", "delta_float"]
    assert [r[1] for r in rows[1:]] == ["1", "1", "3/4"]


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("CBERLAB_THREADS", "zero")
    with pytest.raises(ConfigError):
        harness.thread_cap()
    monkeypatch.setenv("CBERLAB_THREADS", "0")
    with pytest.raises(ConfigError):
        harness.thread_cap()
    monkeypatch.setenv("CBERLAB_THREADS", "3")
    assert harness.thread_cap() == 3


def test_parallel_matches_serial(monkeypatch):
    data = {"seed": 8, "jobs": [{"experiment": "dyadic", "params": {"successor_length": 8,
                                                                   "order_length": 5,
                                                                   "conjugation_length": 6}},
                                {"experiment": "bijection-recursion",
                                 "params": {"trials": 5, "radius": 8}}]}
    monkeypatch.setenv("CBERLAB_THREADS", "1")
    serial = run_experiment(parse_config(data), write=False)
    monkeypatch.setenv("CBERLAB_THREADS", "2")
    parallel = run_experiment(parse_config(data), write=False)
    assert parallel.timing["workers"] == 2
    assert serial.dumps(timing=False) == parallel.dumps(timing=False)


def test_check_status():
    assert Check("x", True, 1, 1).status == "PASS"
    assert Check("x", False, 1, 1).status == "FAIL"
