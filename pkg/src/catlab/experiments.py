"""Declarative experiment sweeps writing CSV and JSON result files."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np
import yaml

from . import __version__
from .channels import choi, make_channel
from .convexsplit import (
    InfeasibleError,
    candidate_zetas,
    consumption_bound_cs,
    consumption_direct,
    descent_ratio,
    descent_sweep,
    lemma1_direct,
    n_min_for_zeta,
)
from .distinguish import uhlmann_fidelity
from .embezzle import (
    MU_BUDGET,
    consumption_bound,
    consumption_closed_form,
    consumption_exact,
    mu_fidelity_direct,
    protocol_fidelity,
    required_schmidt_rank,
    required_schmidt_rank_log2,
    unitary_transport_check,
)
from .qmat import max_entangled, maximally_mixed, random_density, random_full_rank_state
from .tasks import (
    DistributionScenario,
    catalytic_sdc_state,
    distribution_entanglement_profile,
    distribution_threshold_bare,
    ppt_boundary_length,
    sdc_capacity,
)

EXPERIMENTS = ("fig3", "fig4", "table3", "fig6", "fig7", "fig9", "lemma1-check", "thm3-check")
CHANNELS = ("dephasing", "amplitude_damping", "depolarizing")
SEED_ENV = "CATLAB_SEED"
# Embezzling consumption is summed exactly up to this Schmidt rank, bounded beyond.
CLOSED_FORM_MAX_RANK = 1 << 22

CSV_COLUMNS = ("experiment", "params", "metric", "value", "provenance")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending field."""


class InvariantFailure(RuntimeError):
    """A numerical check inside an experiment did not hold."""


@dataclass
class ExperimentConfig:
    experiment: str
    channel: str = "dephasing"
    noise_grid: list = field(default_factory=lambda: [0.4])
    epsilon_grid: list = field(default_factory=lambda: [0.05, 0.1, 0.2, 0.3, 0.4, 0.5])
    sample_count: int = 200
    seed: int = 0
    output_path: str = "results/out"
    budget: int = MU_BUDGET
    # experiment-specific knobs
    sample_grid: list = field(default_factory=lambda: [1, 10, 50, 100, 200])
    d_grid: list = field(default_factory=lambda: [2, 3, 4, 5, 6])
    M_grid: list = field(default_factory=lambda: [2 ** i for i in range(1, 11)])
    m_grid: list = field(default_factory=lambda: [2, 3])
    n_grid: list = field(default_factory=lambda: [1, 2, 3, 4])
    cases: int = 200
    alpha: float = 0.01
    length: float = 250.0
    s_grid: list = field(default_factory=lambda: [0.0, 25.0, 50.0, 75.0, 100.0])
    target_fidelity: float = 0.9

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment: must be one of {', '.join(EXPERIMENTS)}, got {self.experiment!r}")
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel: must be one of {', '.join(CHANNELS)}, got {self.channel!r}")
        for name in ("noise_grid", "epsilon_grid", "sample_grid", "d_grid", "M_grid", "m_grid", "n_grid", "s_grid"):
            val = getattr(self, name)
            if not isinstance(val, list) or not val:
                raise ConfigError(f"{name}: must be a nonempty list")
            if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val):
                raise ConfigError(f"{name}: entries must be numbers")
        if not all(0.0 < e < 1.0 for e in self.epsilon_grid):
            raise ConfigError("epsilon_grid: values must lie in (0, 1)")
        if self.channel == "depolarizing":
            if not all(x >= 0 for x in self.noise_grid):
                raise ConfigError("noise_grid: depolarizing lengths must be >= 0")
        elif not all(0.0 <= x <= 1.0 for x in self.noise_grid):
            raise ConfigError("noise_grid: values must lie in [0, 1]")
        for name in ("sample_count", "cases", "budget"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name}: must be a positive integer")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed: must be an integer in [0, 2**64)")
        if not all(isinstance(x, int) and x >= 1 for x in self.sample_grid):
            raise ConfigError("sample_grid: entries must be positive integers")
        if not all(isinstance(x, int) and x >= 2 for x in self.d_grid + self.m_grid):
            raise ConfigError("d_grid/m_grid: entries must be integers >= 2")
        if not all(isinstance(x, int) and x >= 1 for x in self.M_grid + self.n_grid):
            raise ConfigError("M_grid/n_grid: entries must be positive integers")
        if not self.alpha > 0:
            raise ConfigError("alpha: must be positive")
        if not self.length >= 0 or not all(0 <= s <= self.length for s in self.s_grid):
            raise ConfigError("s_grid: node positions must lie in [0, length]")
        if not 0.0 < self.target_fidelity < 1.0:
            raise ConfigError("target_fidelity: must lie in (0, 1)")
        if not isinstance(self.output_path, str) or not self.output_path:
            raise ConfigError("output_path: must be a nonempty string")
        return self

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config: top level must be a mapping")
        known = {f.name for f in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"{key}: unknown config field")
        if "experiment" not in data:
            raise ConfigError("experiment: missing required field")
        return cls(**data)

    @classmethod
    def load(cls, path, overrides: dict | None = None, env=os.environ) -> "ExperimentConfig":
        """Read a YAML config; ``CATLAB_SEED`` overrides the file seed, explicit overrides win over both."""
        try:
            data = yaml.safe_load(Path(path).read_text()) or {}
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"config: invalid YAML: {exc}") from exc
        if isinstance(data, dict):
            data = dict(data)
            if env.get(SEED_ENV):
                try:
                    data["seed"] = int(env[SEED_ENV])
                except ValueError as exc:
                    raise ConfigError(f"seed: {SEED_ENV} is not an integer") from exc
            for k, v in (overrides or {}).items():
                if v is not None:
                    data[k] = v
        return cls.from_mapping(data).validate()


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    params: tuple
    metric: str
    value: float | int | bool | None
    provenance: str

    def params_text(self) -> str:
        return ";".join(f"{k}={_fmt(v)}" for k, v in self.params)

    def value_text(self) -> str:
        return "infeasible" if self.value is None else _fmt(self.value)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


# --- experiments ----------------------------------------------------------

def _rows(cfg: ExperimentConfig) -> Iterator[ResultRow]:
    yield from RUNNERS[cfg.experiment](cfg)


def _row(cfg, params, metric, value, provenance):
    return ResultRow(cfg.experiment, tuple(params), metric, value, provenance)


def _channel_choi(cfg, noise):
    return choi(make_channel(cfg.channel, noise, alpha=cfg.alpha))


def _fidelity_phi(rho):
    return uhlmann_fidelity(rho, max_entangled(rho.dims[0]))


def run_fig3(cfg):
    """Benchmark zeta = I/d^2 against ``sample_count`` individual random zetas."""
    for noise in cfg.noise_grid:
        rho = _channel_choi(cfg, noise)
        d = rho.dims[0]
        zetas = candidate_zetas(d, cfg.sample_count, cfg.seed)
        f0 = _fidelity_phi(rho)
        for eps in cfg.epsilon_grid:
            base = (("noise", noise), ("eps", eps))
            bench = n_min_for_zeta(rho, maximally_mixed(d * d, (d, d)), eps)
            yield _row(cfg, base, "n_min_mm", bench.n_min, "grid-search")
            yield _row(cfg, base, "delta_p_err_min", (1 - eps) - f0, "closed-form")
            for i, z in enumerate(zetas, start=1):
                res = n_min_for_zeta(rho, z, eps)
                p = base + (("zeta", i),)
                yield _row(cfg, p, "n_min_zeta", res.n_min, f"grid-search;seed={cfg.seed}")
                if bench.feasible and res.feasible:
                    yield _row(cfg, p, "theta", descent_ratio(bench.n_min, res.n_min), f"grid-search;seed={cfg.seed}")


def _descent_rows(cfg, rho, base, N):
    f0 = _fidelity_phi(rho)
    try:
        reports = descent_sweep(rho, N, cfg.epsilon_grid, cfg.seed)
    except InfeasibleError:
        for eps in cfg.epsilon_grid:
            yield _row(cfg, base + (("eps", eps),), "theta", None, "infeasible")
        return
    src = f"grid-search;seed={cfg.seed}"
    for r in reports:
        p = base + (("eps", r.epsilon),)
        yield _row(cfg, p, "n_min_mm", r.n_mm, "grid-search")
        yield _row(cfg, p, "n_min_best", r.n_best, src)
        yield _row(cfg, p, "theta", r.theta, src)
        yield _row(cfg, p, "best_zeta_id", r.best_zeta_id, src)
        yield _row(cfg, p, "delta_p_err_min", (1 - r.epsilon) - f0, "closed-form")


def run_fig4(cfg):
    for noise in cfg.noise_grid:
        yield from _descent_rows(cfg, _channel_choi(cfg, noise), (("noise", noise), ("N", cfg.sample_count)), cfg.sample_count)


def run_table3(cfg):
    for noise in cfg.noise_grid:
        rho = _channel_choi(cfg, noise)
        for N in cfg.sample_grid:
            yield from _descent_rows(cfg, rho, (("noise", noise), ("N", N)), N)


def run_fig6(cfg):
    """Catalyst sizes (log2 dimension) and consumption for both protocols."""
    for noise in cfg.noise_grid:
        rho = _channel_choi(cfg, noise)
        d = rho.dims[0]
        reports = {}
        try:
            reports["random"] = descent_sweep(rho, cfg.sample_count, cfg.epsilon_grid, cfg.seed)
        except InfeasibleError:
            reports["random"] = None
        for j, eps in enumerate(cfg.epsilon_grid):
            p = (("noise", noise), ("eps", eps))
            log2_rank = required_schmidt_rank_log2(d, eps)
            yield _row(cfg, p, "embezzle_log2_dim", 2 * log2_rank, "closed-form")
            if log2_rank <= math.log2(CLOSED_FORM_MAX_RANK):
                M = required_schmidt_rank(d, eps)
                yield _row(cfg, p, "embezzle_consumption", consumption_closed_form(d, M), "closed-form")
            else:
                yield _row(cfg, p, "embezzle_consumption", math.sqrt(2.0 / log2_rank * math.log2(d)), "bound")
            bench = n_min_for_zeta(rho, maximally_mixed(d * d, (d, d)), eps)
            if bench.feasible:
                yield _row(cfg, p, "cs_mm_log2_dim", 2 * math.log2(d) * (bench.n_min - 1), "grid-search")
                yield _row(cfg, p, "cs_mm_consumption", consumption_bound_cs(bench.k, bench.n_min), "bound")
            else:
                yield _row(cfg, p, "cs_mm_log2_dim", None, "infeasible")
            rep = reports["random"][j] if reports["random"] else None
            if rep is not None:
                src = f"grid-search;seed={cfg.seed}"
                yield _row(cfg, p, "cs_random_log2_dim", 2 * math.log2(d) * (rep.n_best - 1), src)
                yield _row(cfg, p, "cs_random_consumption", consumption_bound_cs(rep.k_best, rep.n_best), "bound")
            else:
                yield _row(cfg, p, "cs_random_log2_dim", None, "infeasible")


def run_fig7(cfg):
    a = cfg.alpha
    yield _row(cfg, (("alpha", a),), "bare_threshold", distribution_threshold_bare(a), "closed-form")
    yield _row(cfg, (("alpha", a),), "bare_threshold_ppt", ppt_boundary_length(a), "dense-oracle")
    yield _row(cfg, (("alpha", a),), "correlated_threshold", 2 * distribution_threshold_bare(a), "closed-form")
    for s in cfg.s_grid:
        prof = distribution_entanglement_profile(
            DistributionScenario(a, cfg.length, s), cfg.target_fidelity, cfg.sample_count, cfg.seed
        )
        p = (("alpha", a), ("l", cfg.length), ("s", s), ("target", cfg.target_fidelity))
        yield _row(cfg, p, "ppt_witness", prof.ppt_witness, "dense-oracle")
        yield _row(cfg, p, "fidelity_bare", prof.fidelity_bare, "dense-oracle")
        yield _row(cfg, p, "embezzle_log2_dim", 2 * prof.embezzle_log2_rank, "closed-form")
        yield _row(cfg, p, "cs_copies", prof.cs_copies, f"grid-search;seed={cfg.seed}")
        yield _row(cfg, p, "cs_log2_dim", prof.cs_log2_dim, f"grid-search;seed={cfg.seed}")
        yield _row(cfg, p, "capacity_lower_bound", prof.capacity_lower_bound, "closed-form")


def run_fig9(cfg):
    for d in cfg.d_grid:
        for M in cfg.M_grid:
            if M < d:
                continue
            cap = sdc_capacity(catalytic_sdc_state(d, M))
            p = (("d", d), ("M", M))
            yield _row(cfg, p, "sdc_capacity", cap.value, "closed-form")
            yield _row(cfg, p, "upper_bound", 2 * math.log2(d), "closed-form")


def run_lemma1(cfg):
    failures = 0
    ss = np.random.SeedSequence(cfg.seed).spawn(cfg.cases)
    for case, child in enumerate(ss):
        rng = np.random.default_rng(child)
        rank = int(rng.integers(1, 5))
        rho = random_density(4, rng, rank=rank, dims=(2, 2))
        tau = random_full_rank_state(4, rng, dims=(2, 2))
        for n in cfg.n_grid:
            if 4 ** n > cfg.budget:
                continue
            dist, bound = lemma1_direct(rho, tau, n, cfg.budget)
            ok = dist <= bound + 1e-9
            failures += not ok
            p = (("case", case), ("rank", rank), ("n", n))
            yield _row(cfg, p, "distance", dist, "dense-oracle")
            yield _row(cfg, p, "bound", bound, "closed-form")
            yield _row(cfg, p, "bound_satisfied", ok, "dense-oracle")
            if n >= 2:
                cons = consumption_direct(rho, tau, n, cfg.budget)
                ok_c = cons <= bound + 1e-9
                failures += not ok_c
                yield _row(cfg, p, "consumption", cons, "dense-oracle")
                yield _row(cfg, p, "consumption_bound_satisfied", ok_c, "dense-oracle")
    if failures:
        raise InvariantFailure(f"{failures} convex-split bound violations")


def run_thm3(cfg):
    failures = 0
    for m in cfg.m_grid:
        for M in cfg.M_grid:
            if M < m:
                continue
            p = (("m", m), ("M", M))
            fr = protocol_fidelity(m, M)
            yield _row(cfg, p, "fidelity", fr.fidelity, "closed-form")
            yield _row(cfg, p, "inner_product_bound", fr.inner_product_bound, "closed-form")
            ok_b = fr.inner_product >= fr.inner_product_bound - 1e-12
            failures += not ok_b
            yield _row(cfg, p, "inner_product_bound_satisfied", ok_b, "closed-form")
            if m * M <= cfg.budget:
                ok_t = unitary_transport_check(m, M)
                failures += not ok_t
                yield _row(cfg, p, "transport_ok", ok_t, "dense-oracle")
                direct_f = mu_fidelity_direct(m, M, cfg.budget)
                yield _row(cfg, p, "fidelity_direct", direct_f, "dense-oracle")
                rec = consumption_exact(m, M, cfg.budget)
                yield _row(cfg, p, "consumption_closed_form", rec.exact, "closed-form")
                yield _row(cfg, p, "consumption_direct", rec.direct, "dense-oracle")
                yield _row(cfg, p, "consumption_bound", rec.bound, "closed-form")
                ok_c = rec.direct <= rec.bound + 1e-9
                failures += not ok_c
                yield _row(cfg, p, "consumption_bound_satisfied", ok_c, "dense-oracle")
            else:
                yield _row(cfg, p, "consumption_closed_form", consumption_closed_form(m, M), "closed-form")
                yield _row(cfg, p, "consumption_bound", consumption_bound(m, M), "closed-form")
    for m in cfg.m_grid:
        for eps in cfg.epsilon_grid:
            p = (("m", m), ("eps", eps))
            if required_schmidt_rank_log2(m, eps) > 40:
                yield _row(cfg, p, "required_rank_log2", required_schmidt_rank_log2(m, eps), "closed-form")
                continue
            M = required_schmidt_rank(m, eps)
            yield _row(cfg, p, "required_rank", M, "closed-form")
            if M <= CLOSED_FORM_MAX_RANK:
                perr = 1.0 - protocol_fidelity(m, M).fidelity
                ok = perr <= eps + 1e-12
                failures += not ok
                yield _row(cfg, p, "p_err_c", perr, "closed-form")
                yield _row(cfg, p, "p_err_c_within_eps", ok, "closed-form")
    if failures:
        raise InvariantFailure(f"{failures} embezzling-protocol check failures")


RUNNERS = {
    "fig3": run_fig3,
    "fig4": run_fig4,
    "table3": run_table3,
    "fig6": run_fig6,
    "fig7": run_fig7,
    "fig9": run_fig9,
    "lemma1-check": run_lemma1,
    "thm3-check": run_thm3,
}


# --- output ---------------------------------------------------------------


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow((r.experiment, r.params_text(), r.metric, r.value_text(), r.provenance))
    return buf.getvalue()


def _stem(path: str) -> Path:
    p = Path(path)
    return p.with_suffix("") if p.suffix in (".csv", ".json") else p


@dataclass
class RunResult:
    rows: list
    csv_path: Path
    json_path: Path
    failure: str | None = None


def run(cfg: ExperimentConfig) -> RunResult:
    """Run one experiment and write ``<output_path>.csv`` and ``<output_path>.json``.

    Rows are written even when an invariant check fails; the failure message is
    returned in ``RunResult.failure``.
    """
    cfg.validate()
    start = time.perf_counter()
    rows, failure = [], None
    try:
        for r in _rows(cfg):
            rows.append(r)
    except InvariantFailure as exc:
        failure = str(exc)
    wall = time.perf_counter() - start
    stem = _stem(cfg.output_path)
    stem.parent.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = stem.with_suffix(".csv"), stem.with_suffix(".json")
    csv_path.write_text(rows_to_csv(rows))
    meta = {
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "version": __version__,
        "wall_time_s": wall,
        "config": dataclasses.asdict(cfg),
        "failure": failure,
    }
    payload = {
        "metadata": meta,
        "rows": [
            {
                "experiment": r.experiment,
                "params": {k: v for k, v in r.params},
                "metric": r.metric,
                "value": r.value,
                "provenance": r.provenance,
            }
            for r in rows
        ],
    }
    json_path.write_text(json.dumps(payload, indent=1, default=_json_default))
    return RunResult(rows, csv_path, json_path, failure)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    raise TypeError(f"not JSON serialisable: {type(o)}")
