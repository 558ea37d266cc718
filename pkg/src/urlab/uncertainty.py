"""Robertson and Schrödinger uncertainty relations for pure states.

Every inequality carries a relative slack. Squared quantities are compared
against ``SLACK * scale`` with ``scale = (|A|_F |B|_F)^2``. Quantities in the
units of ``A B`` (bounds, commutator expectations) are compared against
``SLACK * sqrt(scale)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvariantViolation
from .hilbert import (
    Operator,
    State,
    _check_dims,
    anticommutator,
    commutator,
    deviation,
    expectation,
    matrix_element,
)

SLACK = 1e-10
VARIANCE_CROSSCHECK = 1e-10
COMMUTATOR_ENTRY_TOL = 1e-12
REAL_MOMENT_TOL = 1e-12


def _norm_scale(A: Operator, B: Operator) -> float:
    return A.fro_norm * B.fro_norm


def std_dev(F: Operator, phi: State) -> float:
    """|| (F - <F>) phi ||, cross-checked against <F^2> - <F>^2.

    The cross-check is done on the variance: the square root of a cancelled
    difference loses half the digits near eigenvectors.
    """
    dev = deviation(F, phi)
    var_direct = float(np.vdot(dev, dev).real)
    mean = expectation(F, phi)
    f_phi = F.matrix @ phi.amplitudes
    var_moments = float(np.vdot(f_phi, f_phi).real) - mean * mean
    if abs(var_direct - var_moments) > VARIANCE_CROSSCHECK * max(F.fro_norm**2, 1e-300):
        raise InvariantViolation(
            f"variance formulas disagree: {var_direct!r} vs {var_moments!r}"
        )
    return float(np.sqrt(var_direct))


def robertson_bound(A: Operator, B: Operator, phi: State) -> float:
    return 0.5 * abs(matrix_element(commutator(A, B), phi, phi))


class SchrodingerTerms(NamedTuple):
    bound_squared: float
    covariance_term: float  # (<{A,B}>/2 - <A><B>)^2
    commutator_term: float  # |<[A,B]>/2|^2
    covariance: float  # <{A,B}>/2 - <A><B>, signed


def schrodinger_bound(A: Operator, B: Operator, phi: State) -> SchrodingerTerms:
    cov = 0.5 * matrix_element(anticommutator(A, B), phi, phi).real - expectation(
        A, phi
    ) * expectation(B, phi)
    half_comm = 0.5 * abs(matrix_element(commutator(A, B), phi, phi))
    cov_term = cov * cov
    comm_term = half_comm * half_comm
    return SchrodingerTerms(cov_term + comm_term, cov_term, comm_term, cov)


@dataclass(frozen=True)
class CrossTerm:
    direct: float
    anticommutator_part: float
    commutator_part: float
    residual: float


def cross_term_identity(A: Operator, B: Operator, phi: State) -> CrossTerm:
    """|<dA dB>|^2 directly and as 1/4 <{dA,dB}>^2 + 1/4 |<[A,B]>|^2."""
    _check_dims(A, B, phi)
    n = A.dim
    eye = np.eye(n)
    dA = A.matrix - expectation(A, phi) * eye
    dB = B.matrix - expectation(B, phi) * eye
    comm = commutator(A, B)
    comm_d = dA @ dB - dB @ dA
    entry_tol = COMMUTATOR_ENTRY_TOL * max(1.0, _norm_scale(A, B))
    if np.max(np.abs(comm_d - comm)) > entry_tol:
        raise InvariantViolation("[dA, dB] differs from [A, B]")

    v = phi.amplitudes
    direct = abs(np.vdot(v, dA @ (dB @ v))) ** 2
    anti = np.vdot(v, (dA @ dB + dB @ dA) @ v).real
    anti_part = 0.25 * anti * anti
    comm_part = 0.25 * abs(np.vdot(v, comm @ v)) ** 2
    return CrossTerm(
        float(direct), float(anti_part), float(comm_part), float(abs(direct - anti_part - comm_part))
    )


@dataclass(frozen=True)
class UncertaintyReport:
    delta_A: float
    delta_B: float
    product: float
    schwarz_rhs: float  # |<dA dB>|^2
    robertson_bound: float
    schrodinger_bound: float
    schrodinger_bound_squared: float
    covariance_term: float  # signed covariance <{A,B}>/2 - <A><B>
    commutator_expectation: complex
    zero_bound: bool
    eigenvector_of_A: bool
    eigenvector_of_B: bool
    real_cross_moment: bool
    scale: float  # (|A|_F |B|_F)^2

    def chain_margins(self) -> tuple[float, float, float]:
        """Margins of product^2 >= schwarz >= schrodinger^2 >= robertson^2 (each >= -slack)."""
        return (
            self.product**2 - self.schwarz_rhs,
            self.schwarz_rhs - self.schrodinger_bound_squared,
            self.schrodinger_bound_squared - self.robertson_bound**2,
        )

    def chain_holds(self, slack: float = SLACK) -> bool:
        tol = slack * self.scale
        return all(m >= -tol for m in self.chain_margins())


def verify(A: Operator, B: Operator, phi: State) -> UncertaintyReport:
    """Evaluate every quantity of the Robertson/Schrödinger chain for one triple."""
    _check_dims(A, B, phi)
    norm_scale = _norm_scale(A, B)
    scale = norm_scale**2
    dev_a = deviation(A, phi)
    dev_b = deviation(B, phi)
    delta_a = std_dev(A, phi)
    delta_b = std_dev(B, phi)
    comm_exp = matrix_element(commutator(A, B), phi, phi)
    rob = 0.5 * abs(comm_exp)
    terms = schrodinger_bound(A, B, phi)
    schwarz = abs(np.vdot(dev_a, dev_b)) ** 2

    zero_bound = rob <= SLACK * norm_scale and np.sqrt(terms.bound_squared) <= SLACK * norm_scale
    real_moment = abs(comm_exp) <= REAL_MOMENT_TOL * norm_scale
    if real_moment:
        ab = matrix_element(A.matrix @ B.matrix, phi, phi)
        if abs(ab.imag) > SLACK * norm_scale:
            raise InvariantViolation(
                f"<[A,B]> vanishes but Im<AB> = {ab.imag!r} is not zero"
            )
    return UncertaintyReport(
        delta_A=delta_a,
        delta_B=delta_b,
        product=delta_a * delta_b,
        schwarz_rhs=float(schwarz),
        robertson_bound=float(rob),
        schrodinger_bound=float(np.sqrt(terms.bound_squared)),
        schrodinger_bound_squared=float(terms.bound_squared),
        covariance_term=float(terms.covariance),
        commutator_expectation=comm_exp,
        zero_bound=bool(zero_bound),
        eigenvector_of_A=bool(np.linalg.norm(dev_a) <= SLACK * A.fro_norm),
        eigenvector_of_B=bool(np.linalg.norm(dev_b) <= SLACK * B.fro_norm),
        real_cross_moment=bool(real_moment),
        scale=float(scale),
    )


@dataclass(frozen=True)
class ZeroBoundScan:
    entries: list[tuple[str, int, State, UncertaintyReport]]
    dim: int
    rank: int

    @property
    def spans(self) -> bool:
        return self.rank == self.dim

    @property
    def all_zero_bound(self) -> bool:
        return all(rep.zero_bound for *_, rep in self.entries)


def zero_bound_scan(A: Operator, B: Operator) -> ZeroBoundScan:
    """Evaluate ``verify`` on every eigenvector of A and of B.

    Entries are ``(source, index, state, report)`` with source ``"A"`` or ``"B"``.
    """
    _check_dims(A, B)
    entries = []
    for source, op in (("A", A), ("B", B)):
        for k, vec in enumerate(op.spectrum.eigenvectors):
            rep = verify(A, B, vec)
            if not rep.zero_bound:
                raise InvariantViolation(
                    f"eigenvector {k} of {source} does not give a zero bound"
                )
            entries.append((source, k, vec, rep))
    stacked = np.column_stack([e[2].amplitudes for e in entries])
    rank = int(np.linalg.matrix_rank(stacked))
    return ZeroBoundScan(entries, A.dim, rank)
