"""Mandelstam-Tamm characteristic time and its behaviour at and near eigenvectors.

tau_A = Delta_A / |d<A>/dt| is only formed when the denominator is
numerically non-zero. At eigenvectors of A or H both sides of
Delta_A * Delta_E >= (hbar/2)|d<A>/dt| vanish and the report carries an
explicit undefined status instead of infinity. Divergence near eigenvectors
is only ever reported as a fitted slope over a grid of perturbed states.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DirectionIsEigenvector,
    EmptyGrid,
    InvalidGrid,
    InvariantViolation,
    TooFewDefinedSamples,
)
from .extrapolate import LimitEstimate, loglog_slope, richardson_limit
from .hilbert import (
    Operator,
    State,
    _check_dims,
    commutator,
    evolve,
    expectation,
    matrix_element,
)
from .uncertainty import std_dev

GUARD = 1e-12
EIGEN_TOL = 1e-10
MT_SLACK = 1e-9
EHRENFEST_TOL = 1e-6
FD_STEP = 1e-4
DIRECTION_TOL = 1e-6
MIN_DEFINED = 4
DIVERGENCE_SLOPE = -0.9


class TauStatus(enum.Enum):
    DEFINED = "defined"
    UNDEFINED_ZERO_OVER_ZERO = "undefined_zero_over_zero"
    # <[A,H]> vanishes while Delta_A and Delta_E do not: x/0 rather than 0/0
    UNDEFINED_ZERO_DENOMINATOR = "undefined_zero_denominator"
    BOUND_VIOLATED = "bound_violated"


@dataclass(frozen=True)
class MTReport:
    delta_A: float
    delta_E: float
    commutator_expectation: complex
    ehrenfest_derivative: float  # |<[A,H]>| / hbar
    status: TauStatus
    tau_A: float | None
    mt_product: float | None
    hbar: float

    @property
    def m3_margin(self) -> float:
        """Delta_A Delta_E - (hbar/2)|d<A>/dt|; non-negative for every state."""
        return self.delta_A * self.delta_E - 0.5 * self.hbar * self.ehrenfest_derivative

    @property
    def defined(self) -> bool:
        return self.status is TauStatus.DEFINED


@dataclass(frozen=True)
class EhrenfestCheck:
    lhs: float
    rhs: float
    residual: float
    signed_derivative: float


def _mean_after(A: Operator, H: Operator, phi: State, t: float, hbar: float) -> float:
    return expectation(A, evolve(H, phi, t, hbar))


def ehrenfest_check(A: Operator, H: Operator, phi: State, hbar: float = 1.0) -> EhrenfestCheck:
    """Compare |d<A>/dt| at t=0 from finite differences with |<[A,H]>|/hbar."""
    _check_dims(A, H, phi)
    rhs = abs(matrix_element(commutator(A, H), phi, phi)) / hbar
    h = FD_STEP * hbar / H.fro_norm if H.fro_norm > 0 else FD_STEP * hbar

    def central(step):
        return (_mean_after(A, H, phi, step, hbar) - _mean_after(A, H, phi, -step, hbar)) / (2 * step)

    deriv = (4.0 * central(h / 2) - central(h)) / 3.0
    lhs = abs(deriv)
    residual = abs(lhs - rhs)
    if residual > EHRENFEST_TOL * A.fro_norm * H.fro_norm / hbar:
        raise InvariantViolation(f"Ehrenfest residual {residual:.3e} too large")
    return EhrenfestCheck(lhs, rhs, residual, deriv)


def tau_characteristic(A: Operator, H: Operator, phi: State, hbar: float = 1.0) -> MTReport:
    """Characteristic time of A in state phi, with the zero-denominator guard."""
    _check_dims(A, H, phi)
    delta_a = std_dev(A, phi)
    delta_e = std_dev(H, phi)
    comm = matrix_element(commutator(A, H), phi, phi)
    comm_abs = abs(comm)
    deriv = comm_abs / hbar

    if comm_abs <= GUARD * A.fro_norm * H.fro_norm:
        if delta_a <= EIGEN_TOL * A.fro_norm or delta_e <= EIGEN_TOL * H.fro_norm:
            status = TauStatus.UNDEFINED_ZERO_OVER_ZERO
        else:
            status = TauStatus.UNDEFINED_ZERO_DENOMINATOR
        return MTReport(delta_a, delta_e, comm, deriv, status, None, None, hbar)

    tau = hbar * delta_a / comm_abs
    product = tau * delta_e
    status = TauStatus.DEFINED if product >= 0.5 * hbar - MT_SLACK * hbar else TauStatus.BOUND_VIOLATED
    return MTReport(delta_a, delta_e, comm, deriv, status, tau, product, hbar)


@dataclass(frozen=True)
class FamilySample:
    param: float
    state: State
    distance: float
    delta_A: float
    delta_H: float
    comm_abs: float
    tau: float | None
    full_fraction: float | None  # Delta_A Delta_H / (|<[A,H]>|/hbar)


@dataclass(frozen=True)
class PerturbationFamily:
    kind: str  # "eta" (anchor is an eigenvector of H) or "lambda" (of A)
    anchor: State
    direction: State
    grid: tuple[float, ...]
    samples: tuple[FamilySample, ...]
    hbar: float

    def defined_samples(self) -> list[FamilySample]:
        return [s for s in self.samples if s.tau is not None]

    @property
    def distances_monotone(self) -> bool:
        d = [s.distance for s in self.samples]
        return all(b < a for a, b in zip(d, d[1:]))


def _resolve_anchor(op: Operator, anchor) -> State:
    if isinstance(anchor, State):
        _check_dims(op, anchor)
        dev = op.matrix @ anchor.amplitudes - expectation(op, anchor) * anchor.amplitudes
        if np.linalg.norm(dev) > EIGEN_TOL * max(op.fro_norm, 1.0):
            raise ValueError("anchor is not an eigenvector of the required operator")
        return anchor
    return op.spectrum.eigenvectors[int(anchor)]


def member_state(anchor: State, direction: State, param: float) -> State:
    """N (anchor + param * direction), N = (1 + 2 param Re<anchor|direction> + param^2)^(-1/2)."""
    overlap = anchor.overlap(direction).real
    norm = (1.0 + 2.0 * param * overlap + param * param) ** -0.5
    return State(norm * (anchor.amplitudes + param * direction.amplitudes))


def build_family(
    kind: str,
    A: Operator,
    H: Operator,
    direction: State,
    grid: Sequence[float],
    anchor=-1,
    hbar: float = 1.0,
) -> PerturbationFamily:
    """States approaching an eigenvector of H (``eta``) or of A (``lambda``).

    ``anchor`` is either a State (validated as an eigenvector) or an index into
    the ascending spectrum; the default picks the top eigenvector.
    """
    if kind not in ("eta", "lambda"):
        raise ValueError(f"unknown family kind {kind!r}")
    _check_dims(A, H, direction)
    grid = tuple(float(g) for g in grid)
    if not grid:
        raise EmptyGrid("perturbation grid is empty")
    if any(not g > 0 or not math.isfinite(g) for g in grid):
        raise InvalidGrid("grid values must be positive and finite")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise InvalidGrid("grid must be strictly descending")

    for name, op in (("A", A), ("H", H)):
        if std_dev(op, direction) <= DIRECTION_TOL * max(op.fro_norm, 1.0):
            raise DirectionIsEigenvector(f"direction is an eigenvector of {name}")
    anchor_state = _resolve_anchor(H if kind == "eta" else A, anchor)
    if abs(abs(anchor_state.overlap(direction)) - 1.0) < DIRECTION_TOL:
        raise DirectionIsEigenvector("direction coincides with the anchor")

    comm = commutator(A, H)
    samples = []
    for g in grid:
        psi = member_state(anchor_state, direction, g)
        d_a = std_dev(A, psi)
        d_h = std_dev(H, psi)
        c = abs(matrix_element(comm, psi, psi))
        if c <= GUARD * A.fro_norm * H.fro_norm:
            tau = frac = None
        else:
            tau = hbar * d_a / c
            frac = d_a * d_h * hbar / c
        dist = float(np.linalg.norm(anchor_state.amplitudes - psi.amplitudes))
        samples.append(FamilySample(g, psi, dist, d_a, d_h, c, tau, frac))
    return PerturbationFamily(kind, anchor_state, direction, grid, tuple(samples), hbar)


def _defined(family: PerturbationFamily) -> list[FamilySample]:
    defined = family.defined_samples()
    if len(defined) < MIN_DEFINED:
        raise TooFewDefinedSamples(
            f"need {MIN_DEFINED} samples with defined tau, have {len(defined)}"
        )
    return defined


@dataclass(frozen=True)
class TauLimitScan:
    slope: float
    diverges: bool
    params: tuple[float, ...]
    taus: tuple[float, ...]


def tau_limit_scan(family: PerturbationFamily) -> TauLimitScan:
    """Fit log tau against log eta; a slope near -1 means tau grows like 1/eta."""
    defined = _defined(family)
    params = tuple(s.param for s in defined)
    taus = tuple(s.tau for s in defined)
    slope = loglog_slope(params, taus)
    return TauLimitScan(slope, slope <= DIVERGENCE_SLOPE, params, taus)


@dataclass(frozen=True)
class CPsiScan:
    c_psi: float
    error: float
    params: tuple[float, ...]
    fractions: tuple[float, ...]

    def tail_variation(self, decades: float = 2.0) -> float:
        """Relative spread of the full fraction over the last ``decades`` of the grid."""
        cutoff = min(self.params) * 10**decades
        tail = [f for p, f in zip(self.params, self.fractions) if p <= cutoff * (1 + 1e-12)]
        return (max(tail) - min(tail)) / abs(np.mean(tail))


def c_psi_scan(family: PerturbationFamily) -> CPsiScan:
    """Extrapolate the full fraction Delta_A Delta_H hbar / |<[A,H]>| to eta -> 0."""
    defined = _defined(family)
    params = tuple(s.param for s in defined)
    fracs = tuple(s.full_fraction for s in defined)
    est = richardson_limit(params, fracs)
    return CPsiScan(est.value, est.error, params, fracs)


def tau_lambda_limit_scan(family: PerturbationFamily) -> LimitEstimate:
    """Extrapolate tau along a family approaching an eigenvector of A."""
    defined = _defined(family)
    return richardson_limit([s.param for s in defined], [s.tau for s in defined])


@dataclass(frozen=True)
class PairedLimits:
    first: LimitEstimate
    second: LimitEstimate

    @property
    def gap(self) -> float:
        return abs(self.first.value - self.second.value)

    @property
    def resolution(self) -> float:
        return self.first.error + self.second.error


def paired_lambda_limits(
    A: Operator,
    H: Operator,
    directions: tuple[State, State],
    grid: Sequence[float],
    anchor=-1,
    hbar: float = 1.0,
    factor: float = 10.0,
) -> PairedLimits:
    """Lambda-limits of tau for two directions; raises unless they are resolvably different."""
    limits = [
        tau_lambda_limit_scan(build_family("lambda", A, H, d, grid, anchor, hbar))
        for d in directions
    ]
    pair = PairedLimits(*limits)
    if not pair.gap > factor * pair.resolution:
        raise InvariantViolation(
            f"lambda limits {limits[0].value!r} and {limits[1].value!r} are not distinguishable"
        )
    return pair
