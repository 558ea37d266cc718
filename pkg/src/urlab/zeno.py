"""Survival under repeated ideal projective measurements (quantum Zeno effect)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParam, InvalidSchedule, InvariantViolation
from .hilbert import Operator, State, _check_dims
from .uncertainty import std_dev

ZENO_CUTOFF = 0.01
AMPLITUDE_SLACK = 1e-12
QUARTIC_WINDOW = (12.0, 20.0)
ROUNDOFF_FLOOR = 1e-13


def survival_amplitude(H: Operator, psi: State, t: float, hbar: float = 1.0) -> complex:
    """<psi| exp(-i t H / hbar) |psi>."""
    _check_dims(H, psi)
    spec = H.spectrum
    weights = np.abs(spec.vectors.conj().T @ psi.amplitudes) ** 2
    amp = complex(np.sum(weights * np.exp(-1j * t * spec.eigenvalues / hbar)))
    if abs(amp) > 1.0 + AMPLITUDE_SLACK:
        raise InvariantViolation(f"survival amplitude modulus {abs(amp)!r} exceeds 1")
    return amp


@dataclass(frozen=True)
class ZenoSchedule:
    instants: tuple[float, ...]
    t0: float = 0.0

    def __post_init__(self):
        inst = tuple(float(t) for t in self.instants)
        if not inst:
            raise InvalidSchedule("schedule has no measurement instants")
        if inst[0] <= self.t0 or any(b <= a for a, b in zip(inst, inst[1:])):
            raise InvalidSchedule("instants must be strictly increasing and after t0")
        object.__setattr__(self, "instants", inst)

    @classmethod
    def equal(cls, total_t: float, n: int, t0: float = 0.0) -> ZenoSchedule:
        return cls(tuple(t0 + total_t * k / n for k in range(1, n + 1)), t0)

    @property
    def intervals(self) -> np.ndarray:
        return np.diff((self.t0,) + self.instants)


@dataclass(frozen=True)
class ZenoRunResult:
    probability: float
    per_step_amplitudes: tuple[complex, ...]
    delta_H: float
    condition_parameter: float  # (dt/hbar)^2 (Delta H)^2 for the largest interval
    heisenberg_product: float  # dt * Delta H


def _result(H, psi, amps, dt, hbar):
    delta_h = std_dev(H, psi)
    prob = float(np.prod(np.abs(np.asarray(amps)) ** 2))
    return ZenoRunResult(
        prob, tuple(amps), delta_h, (dt / hbar) ** 2 * delta_h**2, dt * delta_h
    )


def survival_probability(
    H: Operator, psi: State, schedule: ZenoSchedule, hbar: float = 1.0
) -> ZenoRunResult:
    """Product over intervals of |a(t_k - t_{k-1})|^2."""
    if not isinstance(schedule, ZenoSchedule):
        schedule = ZenoSchedule(tuple(schedule))
    dts = schedule.intervals
    amps = [survival_amplitude(H, psi, dt, hbar) for dt in dts]
    return _result(H, psi, amps, float(dts.max()), hbar)


def equal_interval_probability(
    H: Operator, psi: State, total_t: float, n: int, hbar: float = 1.0
) -> ZenoRunResult:
    """|a(t/n)|^(2n)."""
    if n < 1 or int(n) != n:
        raise InvalidParam("n must be a positive integer")
    if not total_t > 0:
        raise InvalidParam("total_t must be positive")
    dt = total_t / n
    amp = survival_amplitude(H, psi, dt, hbar)
    prob = float(abs(amp) ** (2 * n))
    delta_h = std_dev(H, psi)
    return ZenoRunResult(
        prob, (amp,) * int(n), delta_h, (dt / hbar) ** 2 * delta_h**2, dt * delta_h
    )


@dataclass(frozen=True)
class ShortTimeCheck:
    exact: float
    expansion: float
    residual: float


def short_time_check(H: Operator, psi: State, dt: float, hbar: float = 1.0) -> ShortTimeCheck:
    """|a(dt)|^2 against its quadratic expansion 1 - (dt/hbar)^2 (Delta H)^2."""
    if not dt > 0:
        raise InvalidParam("dt must be positive")
    exact = abs(survival_amplitude(H, psi, dt, hbar)) ** 2
    expansion = 1.0 - (dt / hbar) ** 2 * std_dev(H, psi) ** 2
    return ShortTimeCheck(exact, expansion, abs(exact - expansion))


def quartic_law(
    H: Operator, psi: State, dt0: float, halvings: int = 4, hbar: float = 1.0
) -> list[tuple[float, float, float | None]]:
    """Rows (dt, residual, ratio to previous residual) over successive halvings.

    Ratio is None for the first row and for rows at or below the roundoff floor.
    Raises if any ratio above the floor leaves the quartic window.
    """
    rows = []
    prev = None
    dt = dt0
    for _ in range(halvings + 1):
        res = short_time_check(H, psi, dt, hbar).residual
        ratio = None
        if prev is not None and res > ROUNDOFF_FLOOR and prev > ROUNDOFF_FLOOR:
            ratio = prev / res
            lo, hi = QUARTIC_WINDOW
            if not lo <= ratio <= hi:
                raise InvariantViolation(f"residual ratio {ratio:.3f} at dt={dt} outside [{lo}, {hi}]")
        rows.append((dt, res, ratio))
        prev = res
        dt /= 2
    return rows


@dataclass(frozen=True)
class ZenoCondition:
    parameter: float
    satisfied: bool
    heisenberg_conflict: bool
    heisenberg_product: float


def zeno_condition(
    H: Operator, psi: State, dt: float, hbar: float = 1.0, cutoff: float = ZENO_CUTOFF
) -> ZenoCondition:
    """Is (dt/hbar)^2 (Delta H)^2 << 1, and does that coexist with dt * Delta H < hbar/2?"""
    if not dt > 0:
        raise InvalidParam("dt must be positive")
    delta_h = std_dev(H, psi)
    param = (dt / hbar) ** 2 * delta_h**2
    satisfied = param <= cutoff
    product = dt * delta_h
    return ZenoCondition(param, satisfied, satisfied and product < 0.5 * hbar, product)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    probability: float
    loss: float  # 1 - P
    condition_parameter: float
    heisenberg_conflict: bool


@dataclass(frozen=True)
class ConvergenceScan:
    rows: tuple[ConvergenceRow, ...]
    fitted_constant: float  # C in 1 - P_n ~ C / n, fitted over the largest decade


def convergence_scan(
    H: Operator,
    psi: State,
    total_t: float,
    n_list: Sequence[int],
    hbar: float = 1.0,
    cutoff: float = ZENO_CUTOFF,
    bound_slack: float = 0.1,
) -> ConvergenceScan:
    """Survival probability for equal intervals t/n over increasing n.

    Checks that 1 - P_n <= (1 + bound_slack) C / n on the largest decade of n,
    with C fitted there by least squares through the origin, and that P_n is
    non-decreasing from the first n at which the Zeno condition holds.
    """
    n_list = [int(n) for n in n_list]
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])) or n_list[0] < 1:
        raise InvalidParam("n_list must be positive and strictly increasing")
    rows = []
    for n in n_list:
        run = equal_interval_probability(H, psi, total_t, n, hbar)
        cond = zeno_condition(H, psi, total_t / n, hbar, cutoff)
        rows.append(
            ConvergenceRow(n, run.probability, 1.0 - run.probability, cond.parameter, cond.heisenberg_conflict)
        )

    top = [r for r in rows if r.n * 10 >= n_list[-1]]
    inv = np.array([1.0 / r.n for r in top])
    loss = np.array([r.loss for r in top])
    c_fit = float(inv @ loss / (inv @ inv))
    for r in top:
        if r.loss > (1 + bound_slack) * c_fit / r.n + AMPLITUDE_SLACK:
            raise InvariantViolation(f"1 - P_n at n={r.n} exceeds C/n")

    satisfied = [r for r in rows if r.condition_parameter <= cutoff]
    for a, b in zip(satisfied, satisfied[1:]):
        if b.probability < a.probability - AMPLITUDE_SLACK:
            raise InvariantViolation(f"P_n decreased from n={a.n} to n={b.n}")
    return ConvergenceScan(tuple(rows), c_fit)
