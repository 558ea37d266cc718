"""Dense complex linear algebra on a finite-dimensional Hilbert space.

Operators and states are thin immutable wrappers around numpy arrays. The
spectral decomposition is a cyclic Jacobi solver (compiled kernel when
available, see :mod:`urlab._kernels`); time evolution goes through it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (
    DimMismatch,
    DimTooSmall,
    IndexOutOfRange,
    NoConvergence,
    NonFiniteEntry,
    NonHermitianExpectation,
    NonSquare,
    NotNearlyHermitian,
    NotNormalized,
)

TOL_HERM = 1e-12
TOL_NORM = 1e-12
SYMMETRIZE_TOL = 1e-8
EXPECTATION_IMAG_TOL = 1e-12
JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
DEGENERACY_GAP = 1e-10
PRNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence(seed).spawn(trials)"

KERNEL_BACKEND = _kernels.BACKEND


def _as_square(raw) -> np.ndarray:
    m = np.array(raw, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise NonSquare(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntry("matrix contains NaN or Inf")
    return m


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Operator:
    """Hermitian operator given by its matrix in a fixed orthonormal basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_square(self.matrix)
        if np.max(np.abs(m - m.conj().T)) > TOL_HERM:
            raise NotNearlyHermitian("operator matrix is not Hermitian to 1e-12")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def fro_norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    @cached_property
    def spectrum(self) -> Spectrum:
        return eigendecompose(self)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return self.matrix @ other.matrix
        if isinstance(other, State):
            return self.matrix @ other.amplitudes
        return self.matrix @ other

    def __repr__(self):
        return f"Operator(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class State:
    """Normalized vector in C^n."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if v.size == 0:
            raise DimTooSmall("state must have at least one amplitude")
        if not np.all(np.isfinite(v)):
            raise NonFiniteEntry("state contains NaN or Inf")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > TOL_NORM:
            raise NotNormalized(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(v))

    @classmethod
    def normalized(cls, amplitudes) -> State:
        v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0.0 or not np.isfinite(norm):
            raise NotNormalized("cannot normalize a zero or non-finite vector")
        return cls(v / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def overlap(self, other: State) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return f"State(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvectors as matrix columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0
    residual: float = 0.0

    @property
    def eigenvectors(self) -> list[State]:
        return [State(self.vectors[:, k]) for k in range(self.vectors.shape[1])]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T


def _check_dims(*objs):
    dims = {o.dim if hasattr(o, "dim") else o.shape[0] for o in objs}
    if len(dims) != 1:
        raise DimMismatch(f"dimension mismatch: {sorted(dims)}")


def make_hermitian(raw) -> Operator:
    """Symmetrize ``raw`` into an Operator, refusing visibly non-Hermitian input."""
    m = _as_square(raw)
    h = 0.5 * (m + m.conj().T)
    if np.max(np.abs(h - m)) > SYMMETRIZE_TOL:
        raise NotNearlyHermitian("symmetrization changed entries by more than 1e-8")
    return Operator(h)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim, dtype=np.complex128))


def pauli_x() -> Operator:
    return Operator(np.array([[0, 1], [1, 0]], dtype=np.complex128))


def pauli_y() -> Operator:
    return Operator(np.array([[0, -1j], [1j, 0]], dtype=np.complex128))


def pauli_z() -> Operator:
    return Operator(np.array([[1, 0], [0, -1]], dtype=np.complex128))


def basis_state(dim: int, k: int) -> State:
    if dim < 1:
        raise DimTooSmall("dim must be >= 1")
    if not 0 <= k < dim:
        raise IndexOutOfRange(f"basis index {k} outside [0, {dim})")
    v = np.zeros(dim, dtype=np.complex128)
    v[k] = 1.0
    return State(v)


def phase_state(theta: float) -> State:
    """(|0> + e^{i theta}|1>)/sqrt(2)."""
    return State(np.array([1.0, np.exp(1j * theta)]) / math.sqrt(2.0))


@dataclass(frozen=True)
class OscillatorPair:
    X: Operator
    P: Operator
    corner_deviation: float

    def __iter__(self):
        # unpacks as (X, P)
        return iter((self.X, self.P))


def truncated_oscillator(dim: int) -> OscillatorPair:
    """Position and momentum truncated to the lowest ``dim`` number states.

    Units hbar = m = omega = 1. ``[X, P] = i`` except for the last diagonal
    entry, which is ``i(1 - dim)``; ``corner_deviation`` is ``|[X,P] - i I|``
    maximised over entries, i.e. ``dim``.
    """
    if dim < 2:
        raise DimTooSmall("truncated oscillator needs dim >= 2")
    lower = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(np.complex128)
    raise_ = lower.conj().T
    x = (lower + raise_) / math.sqrt(2.0)
    p = 1j * (raise_ - lower) / math.sqrt(2.0)
    X, P = Operator(x), Operator(p)
    dev = commutator(X, P) - 1j * np.eye(dim)
    return OscillatorPair(X, P, float(np.max(np.abs(dev))))


def commutator(A: Operator, B: Operator) -> np.ndarray:
    """AB - BA, checked to be anti-Hermitian."""
    _check_dims(A, B)
    a, b = A.matrix, B.matrix
    c = a @ b - b @ a
    scale = max(1.0, np.linalg.norm(a) * np.linalg.norm(b))
    if np.linalg.norm(c + c.conj().T) > 1e-12 * scale:
        raise NotNearlyHermitian("commutator of Hermitian operators is not anti-Hermitian")
    return c


def anticommutator(A: Operator, B: Operator) -> np.ndarray:
    _check_dims(A, B)
    a, b = A.matrix, B.matrix
    return a @ b + b @ a


def matrix_element(M, phi: State, psi: State) -> complex:
    m = M.matrix if isinstance(M, Operator) else np.asarray(M)
    _check_dims(m, phi, psi)
    return complex(np.vdot(phi.amplitudes, m @ psi.amplitudes))


def expectation(F: Operator, phi: State) -> float:
    _check_dims(F, phi)
    val = complex(np.vdot(phi.amplitudes, F.matrix @ phi.amplitudes))
    if abs(val.imag) > EXPECTATION_IMAG_TOL * max(1.0, F.fro_norm):
        raise NonHermitianExpectation(f"expectation has imaginary part {val.imag!r}")
    return val.real


def eigendecompose(A: Operator, *, max_sweeps: int = JACOBI_MAX_SWEEPS) -> Spectrum:
    """Full spectrum of a Hermitian operator by cyclic Jacobi rotations.

    Eigenvalues are ascending. Within a degenerate cluster (gap below 1e-10)
    eigenvectors are orthonormal but otherwise arbitrary.
    """
    if not isinstance(A, Operator):
        A = Operator(A)
    n = A.dim
    work = np.array(A.matrix, dtype=np.complex128, order="C")
    vecs = np.eye(n, dtype=np.complex128)
    tol = JACOBI_REL_TOL * A.fro_norm
    sweeps, off = _kernels.jacobi_sweeps(work, vecs, tol, max_sweeps)
    if off > tol:
        raise NoConvergence(f"Jacobi did not converge in {sweeps} sweeps", residual=off)
    vals = work.diagonal().real.copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    vecs = _orthonormalize_clusters(vals, vecs)
    return Spectrum(_frozen(vals), _frozen(np.ascontiguousarray(vecs)), sweeps, off)


def _orthonormalize_clusters(vals, vecs):
    n = len(vals)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and vals[stop] - vals[stop - 1] < DEGENERACY_GAP:
            stop += 1
        if stop - start > 1:
            q, r = np.linalg.qr(vecs[:, start:stop])
            # keep column phases close to the Jacobi output
            q = q * np.where(np.diag(r).real < 0, -1.0, 1.0)
            vecs[:, start:stop] = q
        start = stop
    return vecs


def evolve(H: Operator, phi: State, t: float, hbar: float = 1.0) -> State:
    """exp(-i t H / hbar)|phi> through the spectrum of H."""
    _check_dims(H, phi)
    if not hbar > 0:
        raise ValueError("hbar must be positive")
    spec = H.spectrum
    coeffs = spec.vectors.conj().T @ phi.amplitudes
    out = spec.vectors @ (np.exp(-1j * t * spec.eigenvalues / hbar) * coeffs)
    drift = abs(np.linalg.norm(out) - 1.0)
    if drift >= 1e-10:
        raise ArithmeticError(f"evolution lost unitarity: norm drift {drift:.3e}")
    if drift > 1e-13:
        out = out / np.linalg.norm(out)
    return State(out)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def random_hermitian(dim: int, seed) -> Operator:
    """Symmetrized i.i.d. standard complex Gaussian matrix; deterministic in ``seed``."""
    rng = _rng(seed)
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2.0)
    return Operator(0.5 * (g + g.conj().T))


def random_state(dim: int, seed) -> State:
    rng = _rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return State.normalized(v)


def deviation(F: Operator, phi: State) -> np.ndarray:
    """(F - <F> I)|phi>, the vector whose norm is the standard deviation."""
    return F.matrix @ phi.amplitudes - expectation(F, phi) * phi.amplitudes
