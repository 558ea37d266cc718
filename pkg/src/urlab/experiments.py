"""Experiment runners behind the ``ur-lab`` subcommands.

Each runner takes a validated :class:`~urlab.config.RunConfig` and returns an
:class:`ExperimentResult`: column names, rows, a summary dict and a list of
failed checks. Runners never touch the filesystem.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import bw, mt, uncertainty, zeno
from .config import RunConfig
from .errors import InvariantViolation, UrLabError
from .extrapolate import geometric_grid
from .fixtures import lookup
from .hilbert import (
    Operator,
    phase_state,
    random_hermitian,
    random_state,
)


@dataclass
class ExperimentResult:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    failures: list[dict[str, Any]] = field(default_factory=list)

    def fail(self, check: str, detail: str, row: int | None = None):
        self.failures.append({"check": check, "row": row, "detail": detail})


def trial_rngs(seed: int, trials: int) -> list[np.random.Generator]:
    """One independent PCG64 stream per trial, spawned from the run seed."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def _random_triple(cfg: RunConfig, i: int, rng):
    dim = cfg.dims[i % len(cfg.dims)]
    return dim, random_hermitian(dim, rng), random_hermitian(dim, rng), random_state(dim, rng)


def _fixture_pair(name: str) -> tuple[Operator, Operator]:
    return lookup(name, "pair")


# ---------------------------------------------------------------- verify

VERIFY_COLUMNS = [
    "trial", "dim", "delta_A", "delta_B", "product", "schwarz_rhs", "robertson_bound",
    "schrodinger_bound", "schrodinger_bound_squared", "covariance_term", "scale",
    "zero_bound", "eigenvector_of_A", "eigenvector_of_B",
]


def _verify_row(i, dim, rep):
    return [
        i, dim, rep.delta_A, rep.delta_B, rep.product, rep.schwarz_rhs, rep.robertson_bound,
        rep.schrodinger_bound, rep.schrodinger_bound_squared, rep.covariance_term, rep.scale,
        rep.zero_bound, rep.eigenvector_of_A, rep.eigenvector_of_B,
    ]


def run_verify(cfg: RunConfig) -> ExperimentResult:
    res = ExperimentResult(list(VERIFY_COLUMNS))
    ops = cfg.params.get("operators", "random")
    if ops == "random":
        triples = (_random_triple(cfg, i, rng) for i, rng in enumerate(trial_rngs(cfg.seed, cfg.trials)))
    else:
        A, B = _fixture_pair(ops)
        phi = lookup(cfg.params["state"], "state")
        triples = iter([(A.dim, A, B, phi)])
    violations = 0
    for i, (dim, A, B, phi) in enumerate(triples):
        try:
            rep = uncertainty.verify(A, B, phi)
        except InvariantViolation as exc:
            res.fail("verify", str(exc), i)
            continue
        if not rep.chain_holds():
            violations += 1
            res.fail("inequality_chain", f"margins {rep.chain_margins()}", i)
        res.rows.append(_verify_row(i, dim, rep))
    res.summary = {"triples": len(res.rows), "chain_violations": violations}
    return res


# ---------------------------------------------------------------- zero-scan

def run_zero_scan(cfg: RunConfig) -> ExperimentResult:
    res = ExperimentResult(
        ["pair", "dim", "source", "index", "delta_A", "delta_B", "robertson_bound",
         "schrodinger_bound", "scale", "zero_bound"]
    )
    ops = cfg.params.get("operators", "random")
    if ops == "random":
        pairs = []
        for i, rng in enumerate(trial_rngs(cfg.seed, cfg.trials)):
            dim = cfg.dims[i % len(cfg.dims)]
            pairs.append((random_hermitian(dim, rng), random_hermitian(dim, rng)))
    else:
        pairs = [_fixture_pair(ops)]
    spanning = 0
    for p, (A, B) in enumerate(pairs):
        try:
            scan = uncertainty.zero_bound_scan(A, B)
        except UrLabError as exc:
            res.fail("zero_bound", str(exc), p)
            continue
        spanning += scan.spans
        if not scan.spans:
            res.fail("span", f"rank {scan.rank} < dim {scan.dim}", p)
        for source, k, _state, rep in scan.entries:
            res.rows.append([
                p, A.dim, source, k, rep.delta_A, rep.delta_B, rep.robertson_bound,
                rep.schrodinger_bound, rep.scale, rep.zero_bound,
            ])
    res.summary = {"pairs": len(pairs), "spanning_pairs": spanning}
    return res


# ---------------------------------------------------------------- mt

MT_COLUMNS = [
    "trial", "dim", "state_kind", "delta_A", "delta_E", "comm_abs", "ehrenfest_lhs",
    "ehrenfest_rhs", "ehrenfest_residual", "status", "tau", "mt_product",
]


def run_mt(cfg: RunConfig) -> ExperimentResult:
    res = ExperimentResult(list(MT_COLUMNS))
    hbar = cfg.hbar
    include_eig = bool(cfg.params.get("include_eigenvectors", True))
    ops = cfg.params.get("operators", "random")
    cases = []
    if ops == "random":
        for i, rng in enumerate(trial_rngs(cfg.seed, cfg.trials)):
            dim, A, H, phi = _random_triple(cfg, i, rng)
            cases.append((i, A, H, [("random", phi)]))
    else:
        A, H = _fixture_pair(ops)
        cases.append((0, A, H, [("fixture", lookup(cfg.params.get("state", "phase-pi4"), "state"))]))
    counts = {s.value: 0 for s in mt.TauStatus}
    for i, A, H, states in cases:
        if include_eig:
            states = states + [("eig_H", v) for v in H.spectrum.eigenvectors]
            states += [("eig_A", v) for v in A.spectrum.eigenvectors]
        for kind, phi in states:
            try:
                ehr = mt.ehrenfest_check(A, H, phi, hbar)
            except InvariantViolation as exc:
                res.fail("ehrenfest", str(exc), i)
                continue
            rep = mt.tau_characteristic(A, H, phi, hbar)
            counts[rep.status.value] += 1
            if kind != "random" and kind != "fixture" and rep.status is not mt.TauStatus.UNDEFINED_ZERO_OVER_ZERO:
                res.fail("zero_over_zero_guard", f"{kind} state gave {rep.status.value}", i)
            if rep.status is mt.TauStatus.BOUND_VIOLATED:
                res.fail("mt_bound", f"tau*dE = {rep.mt_product!r} < hbar/2", i)
            if rep.m3_margin < -uncertainty.SLACK * A.fro_norm * H.fro_norm:
                res.fail("dA_dE_bound", f"margin {rep.m3_margin!r}", i)
            res.rows.append([
                i, A.dim, kind, rep.delta_A, rep.delta_E, abs(rep.commutator_expectation),
                ehr.lhs, ehr.rhs, ehr.residual, rep.status.value, rep.tau_A, rep.mt_product,
            ])
    res.summary = {"status_counts": counts}
    return res


# ---------------------------------------------------------------- mt-limits

LIMIT_COLUMNS = [
    "row_type", "kind", "theta", "param", "distance", "delta_A", "delta_H", "comm_abs",
    "tau", "full_fraction", "slope", "c_psi", "c_psi_error", "tau_limit", "tau_limit_error",
]


def _grid(spec) -> list[float]:
    if isinstance(spec, dict):
        return geometric_grid(spec.get("start", 1e-1), spec.get("stop", 1e-5), spec.get("ratio", 10.0))
    return [float(g) for g in spec]


def run_mt_limits(cfg: RunConfig) -> ExperimentResult:
    res = ExperimentResult(list(LIMIT_COLUMNS))
    kind = cfg.params.get("kind", "eta")
    fam = lookup(cfg.params.get("family", f"{kind}-family"), "family")
    thetas = cfg.params.get("thetas", fam["thetas"])
    grid = _grid(cfg.params.get("grid", fam["grid"]))
    limits = []
    for theta in thetas:
        direction = phase_state(theta)
        family = mt.build_family(kind, fam["A"], fam["H"], direction, grid, fam["anchor"], cfg.hbar)
        for s in family.samples:
            res.rows.append([
                "sample", kind, theta, s.param, s.distance, s.delta_A, s.delta_H, s.comm_abs,
                s.tau, s.full_fraction, None, None, None, None, None,
            ])
        if not family.distances_monotone:
            res.fail("distance_monotone", f"theta={theta!r}")
        summary = [None] * 5
        if kind == "eta":
            slope = mt.tau_limit_scan(family)
            cpsi = mt.c_psi_scan(family)
            summary[:3] = [slope.slope, cpsi.c_psi, cpsi.error]
            if not slope.diverges:
                res.fail("tau_eta_divergence", f"slope {slope.slope!r} at theta={theta!r}")
            if cpsi.tail_variation() >= 0.05:
                res.fail("full_fraction_stability", f"variation {cpsi.tail_variation()!r}")
            limits.append(cpsi.c_psi)
        else:
            lim = mt.tau_lambda_limit_scan(family)
            summary[3:] = [lim.value, lim.error]
            limits.append(lim)
        res.rows.append(["summary", kind, theta, None, None, None, None, None, None, None, *summary])

    if kind == "lambda" and len(limits) >= 2:
        gap = abs(limits[0].value - limits[1].value)
        resolution = limits[0].error + limits[1].error
        res.summary = {"limit_gap": gap, "resolution": resolution}
        if not gap > 10 * resolution:
            res.fail("lambda_non_uniqueness", f"gap {gap!r} vs resolution {resolution!r}")
    elif kind == "eta" and len(limits) >= 2:
        res.summary = {"c_psi": limits, "c_psi_spread": max(limits) - min(limits)}
    return res


# ---------------------------------------------------------------- zeno

def run_zeno(cfg: RunConfig) -> ExperimentResult:
    res = ExperimentResult(["n", "P", "one_minus_P", "condition_parameter", "heisenberg_conflict"])
    base = lookup(cfg.params.get("fixture", "zeno-sigmax"), "zeno")
    H = lookup(cfg.params["operator"], "operator") if "operator" in cfg.params else base["H"]
    psi = lookup(cfg.params["state"], "state") if "state" in cfg.params else base["psi"]
    total_t = float(cfg.params.get("total_t", base["total_t"]))
    n_list = [int(n) for n in cfg.params.get("n_list", base["n_list"])]
    cutoff = float(cfg.params.get("cutoff", zeno.ZENO_CUTOFF))
    try:
        scan = zeno.convergence_scan(H, psi, total_t, n_list, cfg.hbar, cutoff)
    except InvariantViolation as exc:
        res.fail("zeno_convergence", str(exc))
        return res
    for r in scan.rows:
        res.rows.append([r.n, r.probability, r.loss, r.condition_parameter, r.heisenberg_conflict])
    res.summary = {"fitted_C": scan.fitted_constant}
    return res


# ---------------------------------------------------------------- bw

def run_bw(cfg: RunConfig) -> ExperimentResult:
    res = ExperimentResult(["Lambda", "m0", "m1", "m2", "inc0", "inc1", "inc2"])
    p = cfg.params
    if "fixture" in p or not {"E0", "Gamma0", "Emin"} & set(p):
        params = lookup(p.get("fixture", "bw-default"), "bw")
    else:
        params = bw.BWParams(float(p["E0"]), float(p["Gamma0"]), float(p["Emin"]))
    cutoffs = bw.doubling_schedule(float(p.get("lambda_start", 1e3)), float(p.get("lambda_stop", 1e6)))
    rep = bw.divergence_scan(params, cutoffs)
    for j, L in enumerate(rep.cutoffs):
        incs = [None] * 3 if j == 0 else [rep.increments[k][j - 1] for k in (0, 1, 2)]
        res.rows.append([L, rep.moments[0][j], rep.moments[1][j], rep.moments[2][j], *incs])
    expected = params.tail_coefficient
    res.summary = {
        "N": params.N,
        "tail_coefficient": expected,
        "k1_coefficient": rep.k1_coefficient,
        "k1_ratio": rep.k1_ratio,
        "k2_slope": rep.k2_slope,
        "k2_ratio": rep.k2_ratio,
        "total_mass": rep.total_mass,
        "conclusion": rep.conclusion,
    }
    if abs(rep.total_mass - 1.0) > 1e-8:
        res.fail("normalization", f"total mass {rep.total_mass!r}")
    if not (rep.first_moment_diverges and rep.second_moment_diverges):
        res.fail("moment_divergence", f"k1 ratio {rep.k1_ratio!r}, k2 ratio {rep.k2_ratio!r}")
    return res


RUNNERS: dict[str, Callable[[RunConfig], ExperimentResult]] = {
    "verify": run_verify,
    "zero-scan": run_zero_scan,
    "mt": run_mt,
    "mt-limits": run_mt_limits,
    "zeno": run_zeno,
    "bw": run_bw,
}

