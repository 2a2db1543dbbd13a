"""Operator geometric mean, its quadrature oracle, root-product chains, and trace monotonicity checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import verdict
from .abelian import AbelianTuple, check_commuting, _members_of
from .linalg import (
    DEFAULT_TOL,
    HermitianMatrix,
    SpectrumDomainError,
    Tolerance,
    eig_hermitian,
    matrix_power,
)
from .state import DiagonalState, state_trace
from .verdict import Verdict

_REGULARIZATION_FACTOR = 1e-10


class SingularInputError(ValueError):
    """The quadrature oracle needs strictly positive definite inputs."""


@dataclass(frozen=True)
class ExponentVector:
    """Nonnegative exponents, one per tuple member."""

    p: tuple[float, ...]

    def __post_init__(self) -> None:
        p = tuple(float(v) for v in self.p)
        if any(v < 0 for v in p):
            raise ValueError(f"exponents must be nonnegative, got {p}")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.p)


def _psd_eigensystem(x: HermitianMatrix, tol: Tolerance, what: str):
    es = eig_hermitian(x)
    if es.lambda_min < -tol.rtol * (1.0 + es.op_norm):
        raise SpectrumDomainError(
            f"{what} must be positive semidefinite (min eigenvalue {es.lambda_min})"
        )
    return es


def geometric_mean(
    x: HermitianMatrix, y: HermitianMatrix, tol: Tolerance = DEFAULT_TOL
) -> HermitianMatrix:
    """Operator geometric mean ``x^(1/2) (x^(-1/2) y x^(-1/2))^(1/2) x^(1/2)``.

    Near-singular inputs are lifted by ``eps = 1e-10 (1 + ||x|| + ||y||)``
    on both arguments before the closed form; the mean extends continuously
    to the PSD cone, so this realizes the extension within tolerance while
    leaving well-conditioned inputs untouched.
    """
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    ex = _psd_eigensystem(x, tol, "first argument")
    ey = _psd_eigensystem(y, tol, "second argument")
    eps = _REGULARIZATION_FACTOR * (1.0 + ex.op_norm + ey.op_norm)
    if ex.lambda_min <= eps or ey.lambda_min <= eps:
        ex = eig_hermitian(ex.reconstruct(np.maximum(ex.eigenvalues, 0.0) + eps))
        ey = eig_hermitian(ey.reconstruct(np.maximum(ey.eigenvalues, 0.0) + eps))
    rx = ex.reconstruct(np.sqrt(ex.eigenvalues)).entries
    rx_inv = ex.reconstruct(1.0 / np.sqrt(ex.eigenvalues)).entries
    inner = HermitianMatrix(rx_inv @ ey.reconstruct().entries @ rx_inv)
    ei = eig_hermitian(inner)
    core = ei.reconstruct(np.sqrt(np.maximum(ei.eigenvalues, 0.0))).entries
    return HermitianMatrix(rx @ core @ rx)


def geometric_mean_quadrature(
    x: HermitianMatrix, y: HermitianMatrix, tol: Tolerance = DEFAULT_TOL
) -> HermitianMatrix:
    """Independent oracle for the geometric mean through its integral representation.

    The mean equals ``(1/2pi) int_0^inf 2 (x^-1 + t y^-1)^-1 t^(-1/2) dt``;
    substituting ``t = tan(theta)^2`` turns this into a smooth integral over
    ``[0, pi/2]``, evaluated with Gauss-Legendre nodes.  Requires strictly
    positive definite inputs; node-by-node matrix inversion keeps this path
    independent of the closed form.
    """
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    for name, a in (("x", x), ("y", y)):
        es = eig_hermitian(a)
        if es.lambda_min <= tol.rtol * (1.0 + es.op_norm):
            raise SingularInputError(f"{name} is singular at tolerance; regularize first")
    x_inv = np.linalg.inv(x.entries)
    y_inv = np.linalg.inv(y.entries)
    nodes, weights = np.polynomial.legendre.leggauss(tol.quadrature_nodes)
    theta = (np.pi / 4.0) * (nodes + 1.0)
    scaled = weights * (np.pi / 4.0)
    acc = np.zeros_like(x.entries)
    for th, wt in zip(theta, scaled):
        tan2 = math.tan(th) ** 2
        sec2 = 1.0 / math.cos(th) ** 2
        acc += wt * sec2 * np.linalg.inv(x_inv + tan2 * y_inv)
    return HermitianMatrix((2.0 / np.pi) * acc)


def root_product_chain(t, tol: Tolerance = DEFAULT_TOL) -> HermitianMatrix:
    """Ordered product of the ``2^(n-1)``-th roots of the members.

    The members commute, so the product is Hermitian; it agrees with the
    joint functional calculus for ``prod_i s_i^(1/2^(n-1))``.
    """
    members = _members_of(t)
    if not isinstance(t, AbelianTuple) and not check_commuting(members, tol):
        raise ValueError("root_product_chain requires a commuting tuple")
    n = len(members)
    expo = 1.0 / 2.0 ** (n - 1)
    prod = np.eye(members[0].dim, dtype=complex)
    for x in members:
        prod = prod @ matrix_power(x, expo, tol).entries
    return HermitianMatrix(prod)


def check_lowner_heinz(
    x: HermitianMatrix, y: HermitianMatrix, alpha: float, tol: Tolerance = DEFAULT_TOL
) -> Verdict:
    """Check ``x^alpha <= y^alpha`` given ``0 <= x <= y`` and ``alpha`` in [0, 1].

    Precondition violations yield an invalid verdict, reported distinctly
    from a false comparison (which would indicate an implementation bug,
    not a counterexample).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    ex = eig_hermitian(x)
    if ex.lambda_min < -tol.rtol * (1.0 + ex.op_norm):
        return verdict.invalid("x is not positive semidefinite", lambda_min=ex.lambda_min)
    ed = eig_hermitian(y - x)
    if ed.lambda_min < -tol.rtol * (1.0 + ed.op_norm):
        return verdict.invalid("x <= y fails", lambda_min=ed.lambda_min)
    xa = matrix_power(x, alpha, tol)
    ya = matrix_power(y, alpha, tol)
    diff = eig_hermitian(ya - xa)
    gap = diff.lambda_min
    slack = tol.rtol * (1.0 + diff.op_norm)
    return verdict.from_gap(gap, slack, alpha=alpha)


def _centralizer_ok(rho: DiagonalState, members, tol: Tolerance) -> bool:
    rho_m = rho.matrix()
    for x in members:
        comm = rho_m.entries @ x.entries - x.entries @ rho_m.entries
        if np.linalg.norm(comm) > tol.rtol * (1.0 + rho_m.norm() * x.norm()):
            return False
    return True


def _power_product(members, p: ExponentVector, tol: Tolerance) -> HermitianMatrix:
    prod = np.eye(members[0].dim, dtype=complex)
    for x, expo in zip(members, p.p):
        prod = prod @ matrix_power(x, expo, tol).entries
    return HermitianMatrix(prod)


def check_trace_power_monotone(
    x,
    y,
    p: ExponentVector | Sequence[float],
    rho: DiagonalState,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Check ``phi(x1^p1 ... xn^pn) <= phi(y1^p1 ... yn^pn)``.

    Hypotheses: both tuples abelian and PSD, memberwise Loewner order, all
    members in the centralizer of the state, nonnegative exponents.  Any
    violated hypothesis produces an invalid verdict so campaign statistics
    never count a malformed instance as confirmation.
    """
    if not isinstance(p, ExponentVector):
        p = ExponentVector(tuple(p))
    xs = _members_of(x)
    ys = _members_of(y)
    if len(xs) != len(ys) or len(xs) != p.n:
        return verdict.invalid(f"arity mismatch: x {len(xs)}, y {len(ys)}, p {p.n}")
    if any(a.dim != rho.dim or b.dim != rho.dim for a, b in zip(xs, ys)):
        return verdict.invalid("dimension mismatch against the state")
    if not (check_commuting(xs, tol) and check_commuting(ys, tol)):
        return verdict.invalid("a tuple is not abelian")
    for i, (a, b) in enumerate(zip(xs, ys)):
        ea = eig_hermitian(a)
        if ea.lambda_min < -tol.rtol * (1.0 + ea.op_norm):
            return verdict.invalid(f"x[{i}] is not PSD")
        ed = eig_hermitian(b - a)
        if ed.lambda_min < -tol.rtol * (1.0 + ed.op_norm):
            return verdict.invalid(f"x[{i}] <= y[{i}] fails")
    if not (_centralizer_ok(rho, xs, tol) and _centralizer_ok(rho, ys, tol)):
        return verdict.invalid("members leave the centralizer of the state")
    lhs = state_trace(rho, _power_product(xs, p, tol))
    rhs = state_trace(rho, _power_product(ys, p, tol))
    gap = rhs - lhs
    slack = tol.rtol * (1.0 + abs(lhs) + abs(rhs))
    return verdict.from_gap(gap, slack, lhs=lhs, rhs=rhs, exponents=p.p)


def check_trace_monotone_single(
    x: HermitianMatrix,
    y: HermitianMatrix,
    g: Callable[[float], float],
    rho: DiagonalState,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """One-variable lemma: ``phi(g(x)) <= phi(g(y))`` for increasing g and x <= y in the centralizer."""
    from .linalg import hermitian_function

    ed = eig_hermitian(y - x)
    if ed.lambda_min < -tol.rtol * (1.0 + ed.op_norm):
        return verdict.invalid("x <= y fails", lambda_min=ed.lambda_min)
    if not _centralizer_ok(rho, (x, y), tol):
        return verdict.invalid("x or y leaves the centralizer of the state")
    lhs = state_trace(rho, hermitian_function(x, g))
    rhs = state_trace(rho, hermitian_function(y, g))
    gap = rhs - lhs
    slack = tol.rtol * (1.0 + abs(lhs) + abs(rhs))
    return verdict.from_gap(gap, slack, lhs=lhs, rhs=rhs)
