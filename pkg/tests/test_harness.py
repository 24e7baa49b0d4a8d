import dataclasses
import json

import numpy as np
import pytest

from matroid_bandits.cli import main
from matroid_bandits.errors import ConfigError, ValidationError
from matroid_bandits.harness import (
    RunConfig,
    binomial_lcb,
    profile_by_name,
    run_trials,
    success_flags,
    write_report,
)
from matroid_bandits.instances import (
    builtin,
    geometric_ladder_instance,
    instance_from_config,
    load_instance,
    make_instance,
    resolve_instance,
    save_instance,
    uniform_gap_instance,
)
from matroid_bandits.matroids import UniformMatroid
from matroid_bandits.oracle import gap_profile
from matroid_bandits.pac import DESK, PAPER
from matroid_bandits.sampling import bernoulli


def test_builtin_prop1_values():
    inst = builtin("prop1")
    assert inst.true_means == (0.91, 0.9, 0.89, 0.875)
    assert inst.matroid.full_rank == 2
    with pytest.raises(ValidationError):
        builtin("nope")


def test_instance_file_round_trip(tmp_path):
    inst = builtin("graphic_k4")
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    loaded = load_instance(path)
    assert loaded.to_config() == inst.to_config()
    assert loaded.true_means == inst.true_means
    assert loaded.matroid.full_rank == inst.matroid.full_rank
    assert resolve_instance(str(path)).name == inst.name


def test_instance_validation_errors():
    with pytest.raises(ValidationError):
        make_instance("bad", {"family": "uniform", "n": 2, "k": 1},
                      [bernoulli(0.5), bernoulli(0.5)])  # tie
    make_instance("ok", {"family": "uniform", "n": 2, "k": 1},
                  [bernoulli(0.5), bernoulli(0.5)], allow_ties=True)
    with pytest.raises(ValidationError):
        make_instance("bad", {"family": "uniform", "n": 2, "k": 1},
                      [bernoulli(1.0), bernoulli(0.5)])  # mean at the boundary
    with pytest.raises(ValidationError):
        make_instance("bad", {"family": "uniform", "n": 3, "k": 1},
                      [bernoulli(0.5), bernoulli(0.6)])  # arm count mismatch
    with pytest.raises(ValidationError):
        make_instance(
            "loopy",
            {"family": "graphic", "num_vertices": 2, "edges": [[0, 0], [0, 1]]},
            [bernoulli(0.4), bernoulli(0.6)],
        )
    with pytest.raises(ValidationError):
        instance_from_config({"schema_version": 99, "matroid": {}, "arms": []})


def test_uniform_gap_generator_hits_target_band():
    inst = uniform_gap_instance(20, 4, 0.1, seed=1)
    profile = gap_profile(inst.matroid, inst.true_means)
    assert all(0.09 <= g <= 0.11 for g in profile.gaps.values())


def test_generators_are_reproducible():
    a = uniform_gap_instance(20, 4, 0.1, seed=7).to_config()
    b = uniform_gap_instance(20, 4, 0.1, seed=7).to_config()
    assert a == b
    c = geometric_ladder_instance(12, 3, 0.05, seed=7)
    d = geometric_ladder_instance(12, 3, 0.05, seed=7)
    assert c.to_config() == d.to_config()
    prof = gap_profile(c.matroid, c.true_means)
    assert prof.min_gap() >= 0.05 - 1e-9


def test_run_config_validation():
    inst = builtin("prop1")
    with pytest.raises(ConfigError):
        RunConfig(inst, "bogus", 0.1, 0.1, 1, 0, PAPER)
    with pytest.raises(ConfigError):
        RunConfig(inst, "pac", -0.1, 0.1, 1, 0, PAPER)
    with pytest.raises(ConfigError):
        RunConfig(inst, "pac", 0.1, 1.1, 1, 0, PAPER)
    with pytest.raises(ConfigError):
        profile_by_name("unknown")


def test_zero_trials_is_a_valid_batch():
    config = RunConfig(builtin("prop1"), "naive1", 0.1, 0.1, 0, 0, PAPER)
    result = run_trials(config)
    assert result["summary"]["trials"] == 0
    assert result["summary"]["success"]["exact"]["rate"] is None
    assert result["reports"] == []


def test_point_mass_runs_succeed_everywhere():
    inst = builtin("partition6").with_point_mass_arms()
    config = RunConfig(inst, "naive1", 0.1, 0.1, 5, 3, PAPER)
    result = run_trials(config)
    assert result["summary"]["success"]["exact"]["rate"] == 1.0
    assert result["summary"]["failures"] == 0


def test_success_flags_reject_non_basis():
    m = UniformMatroid(4, 2)
    flags = success_flags(m, (0.9, 0.8, 0.7, 0.6), frozenset({0}), 0.1)
    assert flags == {"exact": False, "eps_optimal": False, "elementwise": False, "avg": False}


def _scrub(node):
    if isinstance(node, dict):
        return {k: _scrub(v) for k, v in node.items() if not k.startswith("wall_time")}
    if isinstance(node, list):
        return [_scrub(x) for x in node]
    return node


def test_reports_are_deterministic_and_jobs_invariant(tmp_path):
    inst = builtin("prop1")

    def produce(path, jobs):
        config = RunConfig(inst, "pac", 0.1, 0.1, 8, 99, DESK, jobs=jobs)
        write_report(run_trials(config), path)
        data = json.loads(path.read_text())
        return json.dumps(_scrub(data), sort_keys=True)

    first = produce(tmp_path / "a.json", jobs=1)
    second = produce(tmp_path / "b.json", jobs=1)
    parallel = produce(tmp_path / "c.json", jobs=2)
    assert first == second == parallel
    # CSV summaries carry no timing and are byte-identical
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "c.csv").read_bytes()


def test_budget_failures_count_as_non_successes():
    inst = builtin("prop1")
    starved = dataclasses.replace(PAPER, pull_budget=10)
    config = RunConfig(inst, "exact", 0.1, 0.1, 4, 0, starved)
    result = run_trials(config)
    assert result["summary"]["failures"] == 4
    assert result["summary"]["success"]["exact"]["count"] == 0
    assert all(r.error is not None for r in result["reports"])


def test_binomial_lcb_behaviour():
    assert binomial_lcb(0, 100) == 0.0
    assert binomial_lcb(0, 0) == 0.0
    assert 0.95 < binomial_lcb(200, 200) < 1.0
    assert binomial_lcb(95, 100) < binomial_lcb(99, 100)
    assert binomial_lcb(95, 100) == pytest.approx(0.8968, abs=2e-3)


def test_cli_run_and_gaps_and_verify(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main([
        "run", "--instance", "builtin:prop1", "--algo", "naive1",
        "--eps", "0.2", "--delta", "0.1", "--trials", "3",
        "--seed", "5", "--constants", "paper", "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["summary"]["trials"] == 3
    assert len(payload["trials"]) == 3
    assert out.with_suffix(".csv").exists()

    assert main(["verify", "--instance", "builtin:prop1"]) == 0
    captured = capsys.readouterr()
    assert "PASS" in captured.out

    assert main(["gaps", "--instance", "builtin:prop1"]) == 0
    captured = capsys.readouterr()
    assert "gap 0.02" in captured.out


def test_cli_trace_writes_round_records(tmp_path):
    out = tmp_path / "tr.json"
    code = main([
        "run", "--instance", "builtin:prop1", "--algo", "exact",
        "--eps", "0.1", "--delta", "0.1", "--trials", "2",
        "--seed", "5", "--out", str(out), "--trace",
    ])
    assert code == 0
    lines = out.with_suffix(".trace.jsonl").read_text().strip().splitlines()
    assert lines
    records = [json.loads(line) for line in lines]
    assert {"trial", "kind", "r", "size", "n_opt", "n_bad"} <= set(records[0])


def test_cli_error_codes(tmp_path):
    # config errors exit 1
    assert main(["run", "--instance", "builtin:prop1", "--algo", "bogus",
                 "--eps", "0.1", "--delta", "0.1", "--trials", "1",
                 "--out", str(tmp_path / "x.json")]) == 1
    assert main(["verify", "--instance", "builtin:doesnotexist"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["verify", "--instance", str(bad)]) == 1
    # missing files are I/O errors and exit 2
    assert main(["verify", "--instance", str(tmp_path / "missing.json")]) == 2


def test_cli_run_on_instance_file(tmp_path):
    inst = uniform_gap_instance(12, 3, 0.1, seed=2)
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    out = tmp_path / "out.json"
    code = main([
        "run", "--instance", str(path), "--algo", "pac",
        "--eps", "0.2", "--delta", "0.1", "--trials", "2",
        "--constants", "desk", "--out", str(out),
    ])
    assert code == 0
    assert json.loads(out.read_text())["summary"]["instance"] == inst.name
