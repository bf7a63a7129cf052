import json

import numpy as np
import pytest

from koutlab import ParameterError
from koutlab.component_analysis import connected_components
from koutlab.experiments import (ExperimentConfig, collect_cmax,
                                 coupling_experiment, plausibility_floor,
                                 render_csv, resolve_workers, run_point,
                                 run_sweep, trial_stream)
from koutlab.graph_model import GraphParams, construct_two_type, two_type_params


def test_trial_streams_are_reproducible_and_independent():
    a = trial_stream(99, 0, 0).integers(0, 1 << 30, size=8)
    b = trial_stream(99, 0, 0).integers(0, 1 << 30, size=8)
    c = trial_stream(99, 0, 1).integers(0, 1 << 30, size=8)
    d = trial_stream(99, 1, 0).integers(0, 1 << 30, size=8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_resolve_workers_precedence(monkeypatch):
    monkeypatch.delenv("KOUTLAB_THREADS", raising=False)
    assert resolve_workers() == 1
    monkeypatch.setenv("KOUTLAB_THREADS", "3")
    assert resolve_workers() == 3
    assert resolve_workers(2) == 2  # explicit argument wins
    monkeypatch.setenv("KOUTLAB_THREADS", "oops")
    with pytest.raises(ParameterError):
        resolve_workers()
    monkeypatch.setenv("KOUTLAB_THREADS", "")
    assert resolve_workers() == 1


def test_collect_cmax_is_schedule_independent():
    params = two_type_params(60, 0.6, 2)
    serial = collect_cmax(params, 5, 600, seed=7, workers=1)
    parallel = collect_cmax(params, 5, 600, seed=7, workers=3)
    assert np.array_equal(serial, parallel)
    assert serial.size == 600
    assert serial.min() >= 1 and serial.max() <= 55


def test_collect_cmax_validates_inputs():
    params = two_type_params(10, 0.5, 2)
    with pytest.raises(ParameterError):
        collect_cmax(params, 0, 0, seed=1)
    with pytest.raises(ParameterError):
        collect_cmax(params, 10, 5, seed=1)


def test_run_point_aggregates_match_trial_data():
    params = two_type_params(50, 0.8, 2)
    cm = collect_cmax(params, 4, 300, seed=11)
    s = run_point(params, 4, 300, seed=11)
    assert s.min_cmax == int(cm.min())
    assert s.max_cmax == int(cm.max())
    assert s.avg_cmax == pytest.approx(cm.mean())
    assert s.n_effective == 46
    assert s.max_outside == 46 - s.min_cmax
    assert s.min_cmax <= s.avg_cmax <= s.n_effective
    assert s.trials == 300
    assert s.wall_time >= 0.0


def test_run_point_single_trial_equals_direct_report():
    params = two_type_params(30, 0.5, 2)
    s = run_point(params, 0, 1, seed=42)
    g = construct_two_type(params, trial_stream(42, 0, 0))
    rep = connected_components(g)
    assert s.min_cmax == s.max_cmax == rep.cmax
    assert s.avg_cmax == float(rep.cmax)


def test_experiment_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig(sweep_param="rho", sweep_values=(1,), n=10)
    with pytest.raises(ParameterError):
        ExperimentConfig(sweep_param="mu", sweep_values=(), n=10, k=2)
    with pytest.raises(ParameterError):
        ExperimentConfig(sweep_param="mu", sweep_values=(0.5,), n=10, k=2,
                         trials=0)
    with pytest.raises(ParameterError):  # sweep values must validate eagerly
        ExperimentConfig(sweep_param="K", sweep_values=(2, 11), n=10, mu=0.5)
    with pytest.raises(ParameterError):
        ExperimentConfig(sweep_param="d", sweep_values=(0, 10), n=10, mu=0.5,
                         k=2)
    with pytest.raises(ParameterError):
        ExperimentConfig(sweep_param="mu", sweep_values=(0.5,), n=10, k=2,
                         overlays=("nonsense",))
    with pytest.raises(ParameterError):
        ExperimentConfig(sweep_param="mu", sweep_values=(0.5,), n=10, k=2,
                         overlays=("tail",))  # overlay_m missing
    conf = ExperimentConfig(sweep_param="mu", sweep_values=[0.3, 0.6], n=10,
                            k=2, overlays=["t1"], overlay_m=2)
    assert conf.overlays == ("tail",)
    assert conf.sweep_values == (0.3, 0.6)


def test_run_sweep_writes_byte_stable_files(tmp_path, monkeypatch):
    conf = ExperimentConfig(sweep_param="mu", sweep_values=(0.3, 0.7), n=40,
                            k=2, trials=50, seed=21,
                            out=str(tmp_path / "a"))
    monkeypatch.setenv("KOUTLAB_THREADS", "1")
    run_sweep(conf)
    first_csv = (tmp_path / "a.csv").read_bytes()
    first_json = (tmp_path / "a.json").read_bytes()

    conf2 = ExperimentConfig(sweep_param="mu", sweep_values=(0.3, 0.7), n=40,
                             k=2, trials=50, seed=21,
                             out=str(tmp_path / "b"))
    monkeypatch.setenv("KOUTLAB_THREADS", "4")
    run_sweep(conf2)
    assert (tmp_path / "b.csv").read_bytes() == first_csv
    assert (tmp_path / "b.json").read_bytes() == first_json

    header, row1, row2 = first_csv.decode().strip().split("\n")
    assert header == ("sweep_param,value,n,mu,K,d,trials,"
                      "avg_cmax,min_cmax,max_outside,seed")
    assert row1.startswith("mu,0.3,40,0.3,2,0,50,")
    assert row1.endswith(",21")
    assert row2.startswith("mu,0.7,40,0.7,2,0,50,")


def test_run_sweep_dataset_and_csv_rendering(tmp_path):
    conf = ExperimentConfig(sweep_param="d", sweep_values=(0, 3), n=30,
                            mu=0.5, k=2, trials=40, seed=5,
                            overlays=("heuristic",))
    summaries, dataset = run_sweep(conf)
    assert len(summaries) == 2
    assert dataset["sweep_param"] == "d"
    assert dataset["seed"] == 5
    p0, p3 = dataset["points"]
    assert p0["d"] == 0 and p3["d"] == 3
    assert p0["overlays"]["heuristic_lower_bound"] == 30
    assert p3["max_outside"] == 27 - p3["min_cmax"]
    text = render_csv(dataset)
    assert text.count("\n") == 3
    assert json.loads(json.dumps(dataset)) == dataset  # JSON-serializable


def test_run_sweep_fails_fast_on_unwritable_path(tmp_path):
    conf = ExperimentConfig(sweep_param="mu", sweep_values=(0.5,), n=2000,
                            k=2, trials=10 ** 6, seed=1,
                            out="/nonexistent-dir/x")
    with pytest.raises(ParameterError):
        run_sweep(conf)  # must error before the heavy computation starts


def test_mu_sweep_average_is_decreasing():
    conf = ExperimentConfig(sweep_param="mu",
                            sweep_values=(0.1, 0.3, 0.5, 0.7, 0.9), n=200,
                            k=2, trials=150, seed=17)
    summaries, _ = run_sweep(conf)
    avgs = [s.avg_cmax for s in summaries]
    assert all(a >= b for a, b in zip(avgs, avgs[1:]))


def test_plausibility_floor_behaviour():
    m = plausibility_floor(1000, 0.9, 2, 10_000)
    assert isinstance(m, int) and 1 <= m <= 500
    # more trials demand a rarer excursion, so the floor can only move out
    assert plausibility_floor(1000, 0.9, 2, 100_000) >= m
    assert plausibility_floor(40, 0.5, 2, 10_000) is not None


def test_coupling_experiment_reports_no_violations():
    target = GraphParams(n=150, type_probs=(0.5, 0.3, 0.2),
                         type_selections=(1, 2, 4))
    rep = coupling_experiment(target, 200, seed=13)
    assert rep.trials == 200
    assert rep.edge_superset_violations == 0
    assert rep.cmax_violations == 0
    assert rep.avg_cmax_extended >= rep.avg_cmax_base


def test_coupling_experiment_two_class_target_is_trivial():
    target = two_type_params(80, 0.6, 3)
    rep = coupling_experiment(target, 50, seed=3)
    assert rep.edge_superset_violations == 0
    assert rep.cmax_violations == 0
    assert rep.avg_cmax_extended == rep.avg_cmax_base
