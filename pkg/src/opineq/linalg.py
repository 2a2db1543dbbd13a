"""Dense Hermitian linear algebra: Jacobi eigensolver, Loewner order, functional calculus.

Everything here is a pure function of immutable values; matrices are frozen
after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

DEFAULT_RTOL = 1e-9
DEFAULT_QUADRATURE_NODES = 128

_SWEEP_CAP = 100
_OFFDIAG_FACTOR = 1e-14


class JacobiConvergenceError(RuntimeError):
    """The eigensolver did not reach its off-diagonal threshold within the sweep cap."""


class SpectrumDomainError(ValueError):
    """An eigenvalue fell outside the domain of the scalar function being applied."""


@dataclass(frozen=True)
class Tolerance:
    """Numerical slack knobs: relative tolerance for order checks, node count for quadrature."""

    rtol: float = DEFAULT_RTOL
    quadrature_nodes: int = DEFAULT_QUADRATURE_NODES

    def __post_init__(self) -> None:
        if not (0.0 <= self.rtol < 1e-2):
            raise ValueError(f"rtol must lie in [0, 1e-2), got {self.rtol}")
        if self.quadrature_nodes < 1:
            raise ValueError("quadrature_nodes must be a positive integer")


DEFAULT_TOL = Tolerance()


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HermitianMatrix:
    """Square complex matrix with Hermitian symmetry enforced at construction.

    The constructor symmetrizes its input, ``(a + a*)/2``, so
    ``entries[i, j] == conj(entries[j, i])`` holds exactly.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("dimension must be at least 1")
        sym = (arr + arr.conj().T) / 2.0
        object.__setattr__(self, "entries", _freeze(sym))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.entries))

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def diagonal(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.entries + other.entries)

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.entries - other.entries)

    def __rmul__(self, scalar: float) -> "HermitianMatrix":
        return HermitianMatrix(float(scalar) * self.entries)


def identity(dim: int) -> HermitianMatrix:
    return HermitianMatrix(np.eye(dim, dtype=complex))


def zero(dim: int) -> HermitianMatrix:
    return HermitianMatrix(np.zeros((dim, dim), dtype=complex))


def diagonal(values: Sequence[float]) -> HermitianMatrix:
    return HermitianMatrix(np.diag(np.asarray(values, dtype=float)).astype(complex))


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition ``a = basis @ diag(eigenvalues) @ basis*``.

    Eigenvalues are real and sorted in non-increasing order; the columns of
    ``basis`` are the matching orthonormal eigenvectors.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "eigenvalues", _freeze(np.asarray(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "basis", _freeze(np.asarray(self.basis, dtype=complex)))

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def op_norm(self) -> float:
        return max(abs(self.lambda_max), abs(self.lambda_min))

    def reconstruct(self, values: np.ndarray | None = None) -> HermitianMatrix:
        d = self.eigenvalues if values is None else np.asarray(values, dtype=float)
        return HermitianMatrix((self.basis * d) @ self.basis.conj().T)


def _offdiag_sq(w: np.ndarray) -> float:
    off = w - np.diag(np.diag(w))
    return float(np.sum(np.abs(off) ** 2))


def eig_hermitian(a: HermitianMatrix) -> EigenSystem:
    """Eigendecomposition by cyclic Jacobi rotations with complex phase handling.

    Deterministic for a fixed input.  Sweeps stop once the off-diagonal
    Frobenius mass drops below ``1e-14 * ||a||_F``; more than 100 sweeps
    raises :class:`JacobiConvergenceError` (never returns silently wrong
    output).
    """
    m = a.dim
    w = np.array(a.entries, dtype=complex)
    u = np.eye(m, dtype=complex)
    if m > 1:
        threshold = _OFFDIAG_FACTOR * float(np.linalg.norm(w))
        skip_level = threshold / m
        for _ in range(_SWEEP_CAP):
            if math.sqrt(_offdiag_sq(w)) <= threshold:
                break
            for p in range(m - 1):
                for q in range(p + 1, m):
                    apq = w[p, q]
                    r = abs(apq)
                    if r <= skip_level:
                        continue
                    phase = apq / r
                    tau = (w[q, q].real - w[p, p].real) / (2.0 * r)
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c
                    # unitary rotation J: restricted (p,q) block [[c, s], [-s*conj(phase), c*conj(phase)]]
                    sp = s * phase
                    rot = np.array([[c, s], [-np.conj(sp), c * np.conj(phase)]])
                    pq = (p, q)
                    w[:, pq] = w[:, pq] @ rot
                    w[pq, :] = rot.conj().T @ w[pq, :]
                    w[p, q] = 0.0
                    w[q, p] = 0.0
                    u[:, pq] = u[:, pq] @ rot
        else:
            raise JacobiConvergenceError(
                f"no convergence after {_SWEEP_CAP} sweeps on a {m}x{m} matrix"
            )
    lam = np.diag(w).real.copy()
    order = np.argsort(-lam, kind="stable")
    return EigenSystem(lam[order], u[:, order])


def is_psd(a: HermitianMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the smallest eigenvalue clears ``-rtol * (1 + ||a||_op)``."""
    es = eig_hermitian(a)
    return es.lambda_min >= -tol.rtol * (1.0 + es.op_norm)


def loewner_leq(a: HermitianMatrix, b: HermitianMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Loewner order ``a <= b``, i.e. ``b - a`` is positive semidefinite at tolerance."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return is_psd(b - a, tol)


def hermitian_function(a: HermitianMatrix, g: Callable[[float], float]) -> HermitianMatrix:
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    Raises :class:`SpectrumDomainError` when ``g`` is undefined (raises or
    returns a non-finite value) at some eigenvalue.
    """
    es = eig_hermitian(a)
    values = np.empty(es.dim, dtype=float)
    for i, lam in enumerate(es.eigenvalues):
        try:
            v = float(g(float(lam)))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise SpectrumDomainError(f"function undefined at eigenvalue {lam}: {exc}") from exc
        if not math.isfinite(v):
            raise SpectrumDomainError(f"function not finite at eigenvalue {lam} (got {v})")
        values[i] = v
    return es.reconstruct(values)


def matrix_power(a: HermitianMatrix, p: float, tol: Tolerance = DEFAULT_TOL) -> HermitianMatrix:
    """Power ``a**p`` for PSD ``a`` and ``p >= 0`` via the spectral calculus.

    Within-tolerance negative eigenvalues are clamped to 0 before powering
    (the continuous extension of ``t -> t**p`` on the PSD cone); ``0**0``
    maps to 1, so ``matrix_power(a, 0)`` is the identity even for singular
    inputs.
    """
    if p < 0:
        raise ValueError(f"exponent must be nonnegative, got {p}")
    es = eig_hermitian(a)
    floor = -tol.rtol * (1.0 + es.op_norm)
    if es.lambda_min < floor:
        raise SpectrumDomainError(
            f"matrix_power requires a PSD input: eigenvalue {es.lambda_min} below {floor}"
        )
    clamped = np.maximum(es.eigenvalues, 0.0)
    return es.reconstruct(np.power(clamped, p))
