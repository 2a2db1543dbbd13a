"""Commuting Hermitian tuples: joint diagonalization and multivariate functional calculus.

A commuting n-tuple admits a common eigenbasis; a function of n variables is
applied by evaluating it on the joint eigenvalue vectors and reassembling in
that basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .linalg import DEFAULT_TOL, HermitianMatrix, Tolerance, eig_hermitian

_CLUSTER_GAP_FACTOR = 1e-8
_COMBINATION_RETRIES = 3


class JointDiagonalizationError(RuntimeError):
    """Off-diagonal residual stayed above tolerance after all retries and the deterministic fallback."""


class CubeDomainError(ValueError):
    """A tuple's joint spectrum escapes the declared domain cube."""


def _members_of(t) -> tuple[HermitianMatrix, ...]:
    if isinstance(t, AbelianTuple):
        return t.members
    return tuple(t)


def commutator_norm(a: HermitianMatrix, b: HermitianMatrix) -> float:
    prod = a.entries @ b.entries
    return float(np.linalg.norm(prod - prod.conj().T))


def check_commuting(members: Sequence[HermitianMatrix], tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff all pairwise commutators vanish at the bilinear tolerance scale."""
    members = _members_of(members)
    dims = {m.dim for m in members}
    if len(dims) > 1:
        raise ValueError(f"members have mixed dimensions: {sorted(dims)}")
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            bound = tol.rtol * (1.0 + members[i].norm() * members[j].norm())
            if commutator_norm(members[i], members[j]) > bound:
                return False
    return True


@dataclass(frozen=True)
class AbelianTuple:
    """Ordered family of pairwise-commuting Hermitian matrices of one dimension."""

    members: tuple[HermitianMatrix, ...]
    tol: Tolerance = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if not members:
            raise ValueError("an abelian tuple needs at least one member")
        object.__setattr__(self, "members", members)
        if not check_commuting(members, self.tol):
            raise ValueError("members do not commute within tolerance")

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members[0].dim


@dataclass(frozen=True)
class Cube:
    """Product of closed real intervals, the domain of a function of n variables."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        for lo, hi in ivs:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "intervals", ivs)

    @property
    def arity(self) -> int:
        return len(self.intervals)

    def inflated(self, rtol: float) -> "Cube":
        return Cube(
            tuple(
                (lo - rtol * (1 + abs(lo) + abs(hi)), hi + rtol * (1 + abs(lo) + abs(hi)))
                for lo, hi in self.intervals
            )
        )

    def clip(self, point: Sequence[float]) -> tuple[float, ...]:
        return tuple(
            min(max(float(s), lo), hi) for s, (lo, hi) in zip(point, self.intervals)
        )


def uniform_cube(n: int, lo: float, hi: float) -> Cube:
    return Cube(tuple((lo, hi) for _ in range(n)))


@dataclass(frozen=True)
class CubeFunction:
    """Real function of n variables on a cube, with declared shape flags.

    Flags are declarations, not inferences; ``opineq.harness.verify_flags``
    audits them by randomized probing.
    """

    name: str
    arity: int
    domain: Cube
    evaluator: Callable[[Sequence[float]], float]
    convex: bool = False
    concave: bool = False
    separately_increasing: bool = False

    def __post_init__(self) -> None:
        if self.domain.arity != self.arity:
            raise ValueError("domain arity does not match declared arity")

    def __call__(self, point: Sequence[float]) -> float:
        return float(self.evaluator(self.domain.clip(point)))


@dataclass(frozen=True)
class JointSpectrum:
    """Common eigenbasis and the m joint eigenvalue n-vectors of a commuting tuple."""

    basis: np.ndarray
    points: np.ndarray  # shape (m, n); row j = joint eigenvalues of eigenvector j

    def __post_init__(self) -> None:
        b = np.asarray(self.basis, dtype=complex)
        p = np.asarray(self.points, dtype=float)
        b.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "points", p)


def _offdiag_residual(u: np.ndarray, x: HermitianMatrix) -> float:
    conj = u.conj().T @ x.entries @ u
    return float(np.linalg.norm(conj - np.diag(np.diag(conj))))


def _residuals_ok(u: np.ndarray, members, tol: Tolerance) -> bool:
    return all(
        _offdiag_residual(u, x) <= tol.rtol * (1.0 + x.norm()) for x in members
    )


def _refine_blocks(arrays, u, cols, k):
    # diagonalize member k inside the invariant subspace spanned by u[:, cols],
    # then split cols into eigenvalue clusters and recurse on member k+1
    if k >= len(arrays) or len(cols) <= 1:
        return
    sub = u[:, cols]
    block = HermitianMatrix(sub.conj().T @ arrays[k].entries @ sub)
    es = eig_hermitian(block)
    u[:, cols] = sub @ es.basis
    gap_cap = _CLUSTER_GAP_FACTOR * arrays[k].norm()
    start = 0
    lam = es.eigenvalues
    for i in range(1, len(cols) + 1):
        if i == len(cols) or lam[i - 1] - lam[i] > gap_cap:
            _refine_blocks(arrays, u, cols[start:i], k + 1)
            start = i


def joint_diagonalize(
    t: AbelianTuple, tol: Tolerance = DEFAULT_TOL, seed: int = 0
) -> JointSpectrum:
    """Simultaneous diagonalization of a commuting tuple.

    Strategy: eigendecompose a random real-coefficient combination of the
    members (a generic combination separates the joint eigenspaces almost
    surely), verify every member's off-diagonal residual, retry with fresh
    coefficients up to 3 times, then fall back to deterministic recursive
    block refinement.  The caller fixes ``seed`` for reproducibility.
    """
    members = t.members
    m = t.dim
    if t.n == 1:
        es = eig_hermitian(members[0])
        return JointSpectrum(es.basis, es.eigenvalues.reshape(m, 1))

    basis = None
    rng = np.random.default_rng(seed)
    for _ in range(1 + _COMBINATION_RETRIES):
        coeffs = rng.standard_normal(t.n)
        combo = HermitianMatrix(
            sum(c * x.entries for c, x in zip(coeffs, members))
        )
        candidate = eig_hermitian(combo).basis
        if _residuals_ok(candidate, members, tol):
            basis = candidate
            break
    if basis is None:
        u = np.eye(m, dtype=complex)
        _refine_blocks(members, u, np.arange(m), 0)
        if not _residuals_ok(u, members, tol):
            raise JointDiagonalizationError(
                "off-diagonal residual above tolerance after retries and block refinement"
            )
        basis = u

    points = np.column_stack(
        [np.real(np.diag(basis.conj().T @ x.entries @ basis)) for x in members]
    )
    return JointSpectrum(basis, points)


def spectrum_in_cube(t: AbelianTuple, cube: Cube, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every member's spectrum sits in its interval, inflated by the relative slack."""
    if cube.arity != t.n:
        raise ValueError(f"cube arity {cube.arity} does not match tuple arity {t.n}")
    for x, (lo, hi) in zip(t.members, cube.intervals):
        pad = tol.rtol * (1.0 + abs(lo) + abs(hi))
        es = eig_hermitian(x)
        if es.lambda_min < lo - pad or es.lambda_max > hi + pad:
            return False
    return True


def apply_cube_function(
    f: CubeFunction,
    t: AbelianTuple,
    tol: Tolerance = DEFAULT_TOL,
    seed: int = 0,
) -> HermitianMatrix:
    """Evaluate ``f`` on the tuple through its joint spectrum.

    The joint eigenvalue vectors are clipped onto the cube before evaluation;
    clipping only ever moves a coordinate by the containment slack since
    ``spectrum_in_cube`` is a precondition.
    """
    if f.arity != t.n:
        raise ValueError(f"function arity {f.arity} does not match tuple arity {t.n}")
    if not spectrum_in_cube(t, f.domain, tol):
        raise CubeDomainError(f"tuple spectrum escapes the domain of {f.name!r}")
    js = joint_diagonalize(t, tol, seed)
    values = np.array([f(row) for row in js.points])
    return HermitianMatrix((js.basis * values) @ js.basis.conj().T)


def compatibility_table_ok(
    xs: Sequence[HermitianMatrix],
    ys: Sequence[HermitianMatrix],
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    """Check [x_i, y_j] == [x_j, y_i] for all pairs, at the bilinear scale."""
    n = len(xs)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = xs[i].entries @ ys[j].entries - ys[j].entries @ xs[i].entries
            rhs = xs[j].entries @ ys[i].entries - ys[i].entries @ xs[j].entries
            scale = 1.0 + xs[i].norm() * ys[j].norm() + xs[j].norm() * ys[i].norm()
            if np.linalg.norm(lhs - rhs) > tol.rtol * scale:
                return False
    return True


def check_compatible(x, y, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff x and y form a compatible pair of abelian tuples.

    Accepts :class:`AbelianTuple` values or raw member sequences; raw
    sequences that fail to commute internally are rejected (a compatible
    pair is a pair of abelian tuples).  On a positive verdict the midpoint
    tuple is asserted to commute — compatibility is equivalent to the
    segment between the tuples consisting of abelian tuples, and a midpoint
    failure indicates tolerance miscalibration, not a legitimate outcome.
    """
    xs = _members_of(x)
    ys = _members_of(y)
    if len(xs) != len(ys):
        raise ValueError(f"arity mismatch: {len(xs)} vs {len(ys)}")
    if any(a.dim != b.dim for a, b in zip(xs, ys)):
        raise ValueError("dimension mismatch between tuples")
    if not (check_commuting(xs, tol) and check_commuting(ys, tol)):
        return False
    if not compatibility_table_ok(xs, ys, tol):
        return False
    midpoint = [0.5 * (a + b) for a, b in zip(xs, ys)]
    relaxed = Tolerance(rtol=4 * tol.rtol, quadrature_nodes=tol.quadrature_nodes)
    if not check_commuting(midpoint, relaxed):
        raise RuntimeError(
            "compatible pair whose midpoint fails the commutation check; "
            "tolerances are inconsistent"
        )
    return True
