"""Breit-Wigner energy density with a threshold, and the divergence of its moments.

The density is normalizable but its first and second moments are not: with an
upper cutoff Lambda the first moment grows like ln(Lambda) and the second like
Lambda. Divergence is reported as a fitted growth law, never as infinity.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import InvalidParams, QuadratureNoConvergence, ScheduleTooShort

QUAD_RTOL = 1e-9
NORM_SPAN = 1e6  # quadrature range in units of Gamma0 before the analytic tail
K1_RATIO = 0.9
K2_RATIO = 1.9
MIN_SCHEDULE = 6


def normalization(E0: float, Gamma0: float, Emin: float) -> float:
    """N such that the density integrates to one over [Emin, inf)."""
    if not Gamma0 > 0 or not all(map(math.isfinite, (E0, Gamma0, Emin))):
        raise InvalidParams("Gamma0 must be positive and all parameters finite")
    return math.pi / (0.5 * math.pi + math.atan(2.0 * (E0 - Emin) / Gamma0))


@dataclass(frozen=True)
class BWParams:
    E0: float
    Gamma0: float
    Emin: float
    N: float | None = None

    def __post_init__(self):
        n = normalization(self.E0, self.Gamma0, self.Emin)
        if self.N is None:
            object.__setattr__(self, "N", n)
        elif abs(self.N - n) > 1e-12 * n:
            raise InvalidParams(f"N={self.N!r} does not normalize the density (expected {n!r})")

    @property
    def half_width(self) -> float:
        return 0.5 * self.Gamma0

    @property
    def tail_coefficient(self) -> float:
        """N Gamma0 / 2pi: the large-E limit of E^2 times the density."""
        return self.N * self.Gamma0 / (2 * math.pi)

    def to_u(self, E):
        return (np.asarray(E, dtype=float) - self.E0) / self.half_width


def bw_density(params: BWParams, E):
    """(N/2pi) Gamma0 / ((E - E0)^2 + (Gamma0/2)^2) for E >= Emin, else 0."""
    E_arr = np.asarray(E, dtype=float)
    dens = params.tail_coefficient / ((E_arr - params.E0) ** 2 + params.half_width**2)
    out = np.where(E_arr >= params.Emin, dens, 0.0)
    return float(out) if out.ndim == 0 else out


def _breakpoints(u_lo: float, u_hi: float) -> list[float]:
    # decade-spaced cuts in |u| keep each quad call on a well-scaled piece
    cuts = {u_lo, u_hi}
    mag = 1.0
    while mag < max(abs(u_lo), abs(u_hi)):
        for c in (mag, -mag):
            if u_lo < c < u_hi:
                cuts.add(c)
        mag *= 10.0
    if u_lo < 0.0 < u_hi:
        cuts.add(0.0)
    return sorted(cuts)


def _integrate_u(params: BWParams, k: int, u_lo: float, u_hi: float) -> float:
    """Integral of E^k * density over E in the u-window, done in u = (E - E0)/(Gamma0/2)."""
    E0, hw = params.E0, params.half_width
    pref = params.N / math.pi

    def integrand(u):
        return (E0 + hw * u) ** k / (1.0 + u * u)

    total = 0.0
    cuts = _breakpoints(u_lo, u_hi)
    for a, b in zip(cuts, cuts[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _err = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=QUAD_RTOL, limit=200)
            except integrate.IntegrationWarning as exc:
                raise QuadratureNoConvergence(str(exc)) from exc
        total += val
    return pref * total


def truncated_moment(params: BWParams, k: int, Lambda: float, lower: float | None = None) -> float:
    """Integral of E^k w(E) over [max(Emin, lower), Lambda]."""
    if k not in (0, 1, 2):
        raise InvalidParams("moment order must be 0, 1 or 2")
    lo = params.Emin if lower is None else max(params.Emin, lower)
    if not Lambda > lo:
        raise InvalidParams("Lambda must exceed the lower integration limit")
    return _integrate_u(params, k, float(params.to_u(lo)), float(params.to_u(Lambda)))


def quadrature_mass(params: BWParams, span: float = NORM_SPAN) -> float:
    """Total probability: quadrature up to Emin + span*Gamma0 plus the arctan tail."""
    upper = params.Emin + span * params.Gamma0
    body = truncated_moment(params, 0, upper)
    tail = params.N / math.pi * (0.5 * math.pi - math.atan(float(params.to_u(upper))))
    return body + tail


@dataclass(frozen=True)
class DivergenceReport:
    cutoffs: tuple[float, ...]
    moments: dict[int, tuple[float, ...]]  # k -> truncated moment at each cutoff
    increments: dict[int, tuple[float, ...]]  # k -> moment(L_{j+1}) - moment(L_j)
    k1_coefficient: float  # last k=1 increment / ln 2, compare to N Gamma0 / 2pi
    k1_ratio: float
    k2_slope: float  # last k=2 increment / cutoff step, compare to N Gamma0 / 2pi
    k2_ratio: float
    total_mass: float
    first_moment_diverges: bool
    second_moment_diverges: bool

    @property
    def conclusion(self) -> str:
        if self.first_moment_diverges or self.second_moment_diverges:
            return "Delta_H undefined"
        return "moments converge"


def divergence_scan(params: BWParams, cutoffs: Sequence[float]) -> DivergenceReport:
    """Moments of order 0, 1, 2 on a doubling cutoff schedule.

    Each moment is accumulated piece by piece over [L_j, L_{j+1}], so the
    increments come straight from quadrature rather than from differences of
    large numbers.
    """
    cut = [float(c) for c in cutoffs]
    if len(cut) < MIN_SCHEDULE:
        raise ScheduleTooShort(f"need at least {MIN_SCHEDULE} cutoffs, got {len(cut)}")
    if cut[0] <= params.Emin:
        raise InvalidParams("cutoffs must lie above Emin")
    for a, b in zip(cut, cut[1:]):
        if abs(b - 2 * a) > 1e-9 * b:
            raise InvalidParams("cutoff schedule must double at every step")

    moments: dict[int, tuple[float, ...]] = {}
    increments: dict[int, tuple[float, ...]] = {}
    for k in (0, 1, 2):
        incs = [truncated_moment(params, k, b, lower=a) for a, b in zip(cut, cut[1:])]
        start = truncated_moment(params, k, cut[0])
        moments[k] = tuple(start + s for s in np.concatenate(([0.0], np.cumsum(incs))))
        increments[k] = tuple(incs)

    inc1, inc2 = increments[1], increments[2]
    k1_ratio = inc1[-1] / inc1[-2]
    k2_ratio = inc2[-1] / inc2[-2]
    tail = params.N / math.pi * (0.5 * math.pi - math.atan(float(params.to_u(cut[-1]))))
    return DivergenceReport(
        cutoffs=tuple(cut),
        moments=moments,
        increments=increments,
        k1_coefficient=inc1[-1] / math.log(2.0),
        k1_ratio=k1_ratio,
        k2_slope=inc2[-1] / (cut[-1] - cut[-2]),
        k2_ratio=k2_ratio,
        total_mass=moments[0][-1] + tail,
        first_moment_diverges=k1_ratio >= K1_RATIO,
        second_moment_diverges=k2_ratio >= K2_RATIO,
    )


def doubling_schedule(start: float, stop: float) -> list[float]:
    out = [float(start)]
    while out[-1] * 2 <= stop * (1 + 1e-12):
        out.append(out[-1] * 2)
    return out
