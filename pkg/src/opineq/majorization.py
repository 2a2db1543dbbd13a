"""Weak majorization: eigenvalue partial sums, the top-k frame bound, and the convexity checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import verdict
from .abelian import (
    AbelianTuple,
    CubeFunction,
    apply_cube_function,
    check_compatible,
    spectrum_in_cube,
)
from .linalg import DEFAULT_TOL, HermitianMatrix, Tolerance, eig_hermitian, loewner_leq
from .pinching import ColumnField, TupleField, compress, _integrated_image
from .verdict import Verdict


@dataclass(frozen=True)
class PartialSums:
    """Prefix sums of the descending eigenvalue sequence; sums[-1] is the trace."""

    sums: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.sums, dtype=float).reshape(-1)
        s.setflags(write=False)
        object.__setattr__(self, "sums", s)

    @staticmethod
    def of(a: HermitianMatrix) -> "PartialSums":
        return PartialSums(np.cumsum(eig_hermitian(a).eigenvalues))

    @property
    def dim(self) -> int:
        return self.sums.shape[0]


def partial_sums(a: HermitianMatrix) -> np.ndarray:
    return PartialSums.of(a).sums


def _majorization_gap(a: HermitianMatrix, b: HermitianMatrix, tol: Tolerance):
    """Worst margin over k of sums_b[k] - sums_a[k], with its slack."""
    sa = partial_sums(a)
    sb = partial_sums(b)
    gap = math.inf
    worst_slack = 0.0
    for k in range(sa.shape[0]):
        slack = tol.rtol * (1.0 + abs(sa[k]) + abs(sb[k]))
        g = sb[k] - sa[k]
        if g + slack < gap + worst_slack:
            gap, worst_slack = g, slack
    return gap, worst_slack


def weak_majorize(a: HermitianMatrix, b: HermitianMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every top-k eigenvalue partial sum of ``a`` is at most that of ``b``."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    gap, slack = _majorization_gap(a, b, tol)
    return gap >= -slack


def kyfan_check(a: HermitianMatrix, u: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Top-k maximum principle: ``sum_i <a u_i, u_i> <= sum of the k largest eigenvalues``.

    ``u`` is an m-by-k orthonormal frame; a non-orthonormal frame gives an
    invalid verdict.  Equality is attained when the frame spans the top-k
    eigenspace.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim == 1:
        u = u.reshape(-1, 1)
    if u.shape[0] != a.dim or not 1 <= u.shape[1] <= a.dim:
        return verdict.invalid(f"frame shape {u.shape} does not fit dimension {a.dim}")
    k = u.shape[1]
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(k)))
    if defect > tol.rtol * k:
        return verdict.invalid(f"frame is not orthonormal: defect {defect}")
    lhs = float(np.real(np.trace(u.conj().T @ a.entries @ u)))
    rhs = float(partial_sums(a)[k - 1])
    gap = rhs - lhs
    slack = tol.rtol * (1.0 + abs(lhs) + abs(rhs))
    return verdict.from_gap(gap, slack, k=k, lhs=lhs, rhs=rhs)


def check_thm5(
    f: CubeFunction,
    field_: ColumnField,
    tf: TupleField,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Compression-majorization check for convex f.

    ``f(sum_t w_t a_t* x_t a_t)`` is weakly majorized by
    ``sum_t w_t a_t* f(x_t) a_t``, provided the compressed tuple is abelian
    (automatic for one variable).  A non-abelian compression is an invalid
    instance, not a counterexample.
    """
    if not f.convex:
        return verdict.invalid(f"{f.name!r} is not flagged convex")
    if not tf.in_domain(f.domain, tol):
        return verdict.invalid("an atom leaves the domain cube")
    comp = compress(field_, tf, tol)
    if tf.n > 1 and not comp.abelian:
        return verdict.invalid("compression is not abelian")
    y = AbelianTuple(comp.members, tol)
    if not spectrum_in_cube(y, f.domain, tol):
        return verdict.invalid("compressed tuple leaves the domain cube")
    lhs = apply_cube_function(f, y, tol)
    rhs = _integrated_image(f, field_, tf, tol)
    gap, slack = _majorization_gap(lhs, rhs, tol)
    return verdict.from_gap(gap, slack)


def check_corollary(
    f: CubeFunction,
    x: AbelianTuple,
    y: AbelianTuple,
    lam: float,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Convex-combination majorization for compatible tuples.

    ``f(lam x + (1-lam) y)`` is weakly majorized by
    ``lam f(x) + (1-lam) f(y)``; compatibility makes every point of the
    segment an abelian tuple.  The one-variable case needs no compatibility
    beyond each tuple being a single matrix.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if not f.convex:
        return verdict.invalid(f"{f.name!r} is not flagged convex")
    if not check_compatible(x, y, tol):
        return verdict.invalid("tuples are not compatible")
    if not (spectrum_in_cube(x, f.domain, tol) and spectrum_in_cube(y, f.domain, tol)):
        return verdict.invalid("a tuple leaves the domain cube")
    try:
        mix = AbelianTuple(
            tuple(
                HermitianMatrix(lam * a.entries + (1 - lam) * b.entries)
                for a, b in zip(x.members, y.members)
            ),
            tol,
        )
    except ValueError:
        return verdict.invalid("convex combination fails the commutation check")
    lhs = apply_cube_function(f, mix, tol)
    fx = apply_cube_function(f, x, tol)
    fy = apply_cube_function(f, y, tol)
    rhs = HermitianMatrix(lam * fx.entries + (1 - lam) * fy.entries)
    gap, slack = _majorization_gap(lhs, rhs, tol)
    return verdict.from_gap(gap, slack, lam=lam)


def check_thm6(
    f: CubeFunction,
    x: AbelianTuple,
    y: AbelianTuple,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Order-to-majorization check for convex, separately increasing f.

    ``x <= y`` memberwise implies ``f(x)`` weakly majorized by ``f(y)``;
    the two tuples need not commute with each other.
    """
    if not (f.convex and f.separately_increasing):
        return verdict.invalid(f"{f.name!r} must be convex and separately increasing")
    if x.n != y.n or x.dim != y.dim:
        return verdict.invalid("shape mismatch")
    if not all(loewner_leq(a, b, tol) for a, b in zip(x.members, y.members)):
        return verdict.invalid("x <= y fails memberwise")
    if not (spectrum_in_cube(x, f.domain, tol) and spectrum_in_cube(y, f.domain, tol)):
        return verdict.invalid("a tuple leaves the domain cube")
    lhs = apply_cube_function(f, x, tol)
    rhs = apply_cube_function(f, y, tol)
    gap, slack = _majorization_gap(lhs, rhs, tol)
    return verdict.from_gap(gap, slack)
