"""Monte-Carlo sweeps over ensemble parameters with reproducible seeding.

Every trial draws its randomness from an independent counter-based
stream keyed by (master seed, sweep point index, trial index), so
results are bitwise identical no matter how trials are scheduled or
how many workers run them.  Aggregates are integer sums, minima and
maxima, which are order-independent; emitted CSV and JSON are therefore
byte-stable for a given config and seed.  Wall-clock timings stay in
memory only and are never written to the emitted files.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .component_analysis import connected_components
from .errors import ParameterError
from .graph_model import (GraphParams, construct_r_type, construct_two_type,
                          couple_extend, delete_random_nodes, two_type_params)
from . import bounds
from .oracle import union_bound_sum

THREADS_ENV = "KOUTLAB_THREADS"

_SWEEP_AXES = ("mu", "K", "d", "n")
_OVERLAY_NAMES = {
    "heuristic": "heuristic",
    "tail": "tail",
    "t1": "tail",
    "deleted-tail": "deleted-tail",
    "t2": "deleted-tail",
}


def resolve_workers(workers=None) -> int:
    """Explicit argument wins, then the KOUTLAB_THREADS env var, then 1."""
    if workers is not None:
        return max(1, int(workers))
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def trial_stream(master_seed, point_index, trial_index) -> np.random.Generator:
    """The independent random stream of one trial.

    Counter-based (Philox) and keyed by the full coordinate tuple, so
    any single trial can be reproduced in isolation.
    """
    ss = np.random.SeedSequence(
        entropy=(int(master_seed), int(point_index), int(trial_index))
    )
    return np.random.Generator(np.random.Philox(ss))


def _trial_cmax(params, d, master_seed, point_index, trial_index) -> int:
    rng = trial_stream(master_seed, point_index, trial_index)
    g = construct_r_type(params, rng)
    if d:
        _, view = delete_random_nodes(g, d, rng)
        return connected_components(view).cmax
    return connected_components(g).cmax


def _run_block(args):
    params, d, master_seed, point_index, lo, hi = args
    out = np.empty(hi - lo, dtype=np.int64)
    for t in range(lo, hi):
        out[t - lo] = _trial_cmax(params, d, master_seed, point_index, t)
    return out


def collect_cmax(params, d, trials, seed, point_index=0, workers=None) -> np.ndarray:
    """Largest-component size of every trial, in trial order."""
    trials = int(trials)
    if trials < 1:
        raise ParameterError("need at least one trial")
    if not 0 <= int(d) < params.n:
        raise ParameterError("deletion count must satisfy 0 <= d < n")
    workers = resolve_workers(workers)
    if workers == 1:
        return _run_block((params, int(d), seed, point_index, 0, trials))
    size = max(256, -(-trials // (workers * 4)))
    tasks = [
        (params, int(d), seed, point_index, lo, min(lo + size, trials))
        for lo in range(0, trials, size)
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(_run_block, tasks))
    return np.concatenate(blocks)


@dataclass(frozen=True)
class TrialSummary:
    """Aggregate largest-component statistics of one sweep point."""

    sweep_value: object
    avg_cmax: float
    min_cmax: int
    max_cmax: int
    max_outside: int
    trials: int
    n_effective: int
    wall_time: float


def run_point(params, d, trials, seed, point_index=0, workers=None,
              sweep_value=None) -> TrialSummary:
    """Run `trials` independent draws at one parameter point and aggregate."""
    t0 = time.perf_counter()
    cm = collect_cmax(params, d, trials, seed, point_index=point_index, workers=workers)
    n_eff = params.n - int(d)
    mn = int(cm.min())
    return TrialSummary(
        sweep_value=sweep_value,
        avg_cmax=int(cm.sum()) / trials,
        min_cmax=mn,
        max_cmax=int(cm.max()),
        max_outside=n_eff - mn,
        trials=int(trials),
        n_effective=n_eff,
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: an axis, its values, fixed parameters, and outputs.

    sweep_param is one of "mu", "K", "d", "n"; the matching field below
    is ignored and the others stay fixed across points.  Overlays add
    bound curves to the emitted JSON: "heuristic" (giant-size floor),
    "tail" (needs overlay_m), "deleted-tail" (needs overlay_x; uses
    overlay_eps).
    """

    sweep_param: str
    sweep_values: tuple
    n: int = 0
    mu: float = 0.0
    k: int = 0
    d: int = 0
    trials: int = 10_000
    seed: int = 0
    out: str | None = None
    overlays: tuple = ()
    overlay_m: int | None = None
    overlay_x: int | None = None
    overlay_eps: float = 1.0

    def __post_init__(self):
        if self.sweep_param not in _SWEEP_AXES:
            raise ParameterError(f"sweep_param must be one of {_SWEEP_AXES}")
        values = tuple(self.sweep_values)
        if not values:
            raise ParameterError("sweep needs at least one value")
        object.__setattr__(self, "sweep_values", values)
        if int(self.trials) < 1:
            raise ParameterError("need at least one trial per point")
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "seed", int(self.seed))
        names = []
        for name in self.overlays:
            if name not in _OVERLAY_NAMES:
                raise ParameterError(f"unknown overlay {name!r}")
            names.append(_OVERLAY_NAMES[name])
        object.__setattr__(self, "overlays", tuple(names))
        if "tail" in names and self.overlay_m is None:
            raise ParameterError("the tail overlay needs overlay_m")
        if "deleted-tail" in names and self.overlay_x is None:
            raise ParameterError("the deleted-tail overlay needs overlay_x")
        self.resolve_points()  # every sweep value must validate

    def resolve_points(self):
        """(value, GraphParams, d) for every sweep value, validated."""
        points = []
        for v in self.sweep_values:
            if self.sweep_param == "mu":
                points.append((float(v), two_type_params(self.n, float(v), self.k), int(self.d)))
            elif self.sweep_param == "K":
                points.append((int(v), two_type_params(self.n, self.mu, int(v)), int(self.d)))
            elif self.sweep_param == "d":
                params = two_type_params(self.n, self.mu, self.k)
                if not 0 <= int(v) < self.n:
                    raise ParameterError("swept deletion counts must satisfy 0 <= d < n")
                points.append((int(v), params, int(v)))
            else:
                points.append((int(v), two_type_params(int(v), self.mu, self.k), int(self.d)))
        return points


def plausibility_floor(n, mu, k, trials):
    """Smallest M whose union-bound tail drops below 1/(10*trials), or None.

    At that threshold the expected number of trials with more than M
    nodes outside the largest component is under 0.1, so seeing
    min_cmax < n - M is genuinely surprising; sweeps flag (never fail)
    such points.
    """
    ev = union_bound_sum(n, mu, k, 1)
    suffix = np.cumsum(ev.terms[::-1])[::-1]
    hits = np.flatnonzero(suffix < 0.1 / trials)
    if hits.size == 0:
        return None
    return int(hits[0]) + ev.r_start


def _csv_num(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


CSV_HEADER = "sweep_param,value,n,mu,K,d,trials,avg_cmax,min_cmax,max_outside,seed"


def render_csv(dataset) -> str:
    """The canonical CSV rendering of a sweep dataset (byte-stable)."""
    rows = [CSV_HEADER]
    for p in dataset["points"]:
        rows.append(",".join([
            dataset["sweep_param"], _csv_num(p["value"]), str(p["n"]),
            _csv_num(p["mu"]), str(p["K"]), str(p["d"]), str(p["trials"]),
            _csv_num(p["avg_cmax"]), str(p["min_cmax"]), str(p["max_outside"]),
            str(dataset["seed"]),
        ]))
    return "".join(row + "\n" for row in rows)


def render_json(dataset) -> str:
    """The canonical JSON rendering of a sweep dataset (byte-stable)."""
    return json.dumps(dataset, indent=2, sort_keys=True) + "\n"


def _overlay_values(config, params, d):
    mu = params.type_probs[0]
    k = params.type_selections[-1]
    out = {}
    for name in config.overlays:
        if name == "heuristic":
            out["heuristic_lower_bound"] = bounds.heuristic_giant_lower_bound(params.n, mu, k, d)
        elif name == "tail":
            b = bounds.tail_bound(mu, k, config.overlay_m)
            out["tail_bound"] = {"M": config.overlay_m, "value": b.value}
        else:
            try:
                b = bounds.deleted_tail_bound(mu, k, d, config.overlay_x, config.overlay_eps)
                out["deleted_tail_bound"] = {
                    "x": config.overlay_x, "eps": config.overlay_eps, "value": b.value,
                }
            except ParameterError as err:
                out["deleted_tail_bound"] = {
                    "x": config.overlay_x, "eps": config.overlay_eps,
                    "value": None, "note": str(err),
                }
    return out


def run_sweep(config: ExperimentConfig, workers=None):
    """Run every sweep point; emit CSV (and a JSON mirror) when out is set.

    Returns (summaries, dataset) where dataset is the JSON-ready dict.
    Output files are opened before any computation so an unwritable
    path fails fast.
    """
    points = config.resolve_points()
    csv_handle = json_handle = None
    if config.out is not None:
        base = Path(config.out)
        if base.suffix in (".csv", ".json"):
            base = base.with_suffix("")
        try:
            csv_handle = open(base.with_suffix(".csv"), "w", encoding="utf-8")
            json_handle = open(base.with_suffix(".json"), "w", encoding="utf-8")
        except OSError as err:
            if csv_handle is not None:
                csv_handle.close()
            raise ParameterError(f"cannot write output: {err}") from None

    summaries = []
    json_points = []
    for idx, (value, params, d) in enumerate(points):
        summary = run_point(params, d, config.trials, config.seed,
                            point_index=idx, workers=workers, sweep_value=value)
        summaries.append(summary)
        mu = params.type_probs[0]
        k = params.type_selections[-1]
        flags = []
        if d == 0:
            floor = plausibility_floor(params.n, mu, k, config.trials)
            if floor is not None and summary.min_cmax < params.n - floor:
                flags.append(
                    f"min_cmax {summary.min_cmax} fell below the plausibility "
                    f"floor {params.n - floor}"
                )
        point = {
            "value": value, "n": params.n, "mu": mu, "K": k, "d": d,
            "trials": config.trials, "avg_cmax": summary.avg_cmax,
            "min_cmax": summary.min_cmax, "max_cmax": summary.max_cmax,
            "max_outside": summary.max_outside,
        }
        overlays = _overlay_values(config, params, d)
        if overlays:
            point["overlays"] = overlays
        if flags:
            point["flags"] = flags
        json_points.append(point)

    dataset = {
        "sweep_param": config.sweep_param,
        "seed": config.seed,
        "trials": config.trials,
        "points": json_points,
    }
    if csv_handle is not None:
        with csv_handle:
            csv_handle.write(render_csv(dataset))
        with json_handle:
            json_handle.write(render_json(dataset))
    return summaries, dataset


# ---------------------------------------------------------------------------
# coupling


@dataclass(frozen=True)
class CouplingReport:
    """Outcome of paired two-type / r-type draws via the edge coupling."""

    trials: int
    edge_superset_violations: int
    cmax_violations: int
    avg_cmax_base: float
    avg_cmax_extended: float


def coupling_experiment(target: GraphParams, trials, seed) -> CouplingReport:
    """Draw matched pairs (two-type base, coupled r-type extension) and
    count violations of edge containment and of cmax monotonicity.
    Both counts must come out 0: the extension never removes an edge.
    """
    if target.r < 2:
        raise ParameterError("coupling target needs at least two classes")
    trials = int(trials)
    if trials < 1:
        raise ParameterError("need at least one trial")
    mu_tilde = sum(target.type_probs[:-1])
    base_params = GraphParams(
        n=target.n,
        type_probs=(mu_tilde, target.type_probs[-1]),
        type_selections=(1, target.type_selections[-1]),
    )
    edge_bad = cmax_bad = 0
    base_total = ext_total = 0
    for t in range(trials):
        rng = trial_stream(seed, 0, t)
        g2 = construct_two_type(base_params, rng)
        ext = couple_extend(g2, target, rng)
        bu, bv = g2.edge_arrays()
        eu, ev = ext.edge_arrays()
        bkey = bu * np.int64(target.n) + bv
        ekey = eu * np.int64(target.n) + ev
        pos = np.searchsorted(ekey, bkey)
        ok = (pos < ekey.size) & (ekey[np.minimum(pos, ekey.size - 1)] == bkey)
        if not bool(ok.all()):
            edge_bad += 1
        c_base = connected_components(g2).cmax
        c_ext = connected_components(ext).cmax
        if c_ext < c_base:
            cmax_bad += 1
        base_total += c_base
        ext_total += c_ext
    return CouplingReport(
        trials=trials,
        edge_superset_violations=edge_bad,
        cmax_violations=cmax_bad,
        avg_cmax_base=base_total / trials,
        avg_cmax_extended=ext_total / trials,
    )
