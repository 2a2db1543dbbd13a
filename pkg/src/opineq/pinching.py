"""Jensen-type inequality checks under pinching, column fields, and the spectral measure.

Finite-dimensional setting throughout: the abelian subalgebra is the diagonal
algebra, states are diagonal weight vectors, and integration over the index
space of a field is a finite weighted sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import verdict
from .abelian import (
    AbelianTuple,
    Cube,
    CubeFunction,
    apply_cube_function,
    check_commuting,
    joint_diagonalize,
    spectrum_in_cube,
)
from .linalg import DEFAULT_TOL, HermitianMatrix, Tolerance, diagonal, eig_hermitian
from .state import DiagonalFunction, DiagonalState, pinch, state_trace
from .verdict import Verdict


@dataclass(frozen=True)
class ColumnField:
    """Finite weighted family ``{(w_t, a_t)}`` with ``sum_t w_t a_t* a_t = 1``."""

    weights: tuple[float, ...]
    matrices: tuple[np.ndarray, ...]
    tol: Tolerance = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self) -> None:
        ws = tuple(float(w) for w in self.weights)
        if not ws or len(ws) != len(self.matrices):
            raise ValueError("weights and matrices must be aligned and non-empty")
        if any(w <= 0 for w in ws):
            raise ValueError("weights must be strictly positive")
        mats = []
        for a in self.matrices:
            arr = np.array(a, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or (mats and arr.shape != mats[0].shape):
                raise ValueError("field matrices must share one square shape")
            arr.setflags(write=False)
            mats.append(arr)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "matrices", tuple(mats))
        gram = sum(w * a.conj().T @ a for w, a in zip(ws, mats))
        defect = np.linalg.norm(gram - np.eye(self.dim))
        if defect > self.tol.rtol * len(ws):
            raise ValueError(f"field is not unital: defect {defect}")

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def count(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class TupleField:
    """Abelian n-tuples aligned index-for-index with a column field."""

    atoms: tuple[AbelianTuple, ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        if not atoms:
            raise ValueError("a tuple field needs at least one atom")
        if len({t.n for t in atoms}) > 1 or len({t.dim for t in atoms}) > 1:
            raise ValueError("atoms must share arity and dimension")
        object.__setattr__(self, "atoms", atoms)

    @property
    def n(self) -> int:
        return self.atoms[0].n

    @property
    def dim(self) -> int:
        return self.atoms[0].dim

    @property
    def count(self) -> int:
        return len(self.atoms)

    def in_domain(self, cube: Cube, tol: Tolerance = DEFAULT_TOL) -> bool:
        return all(spectrum_in_cube(t, cube, tol) for t in self.atoms)


@dataclass(frozen=True)
class SpectralMeasure:
    """Finitely supported probability measure on the joint-spectrum cube."""

    support: np.ndarray  # (k, n) rows of joint eigenvalue vectors
    masses: np.ndarray  # (k,) nonnegative weights summing to 1
    tol: Tolerance = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self) -> None:
        sup = np.asarray(self.support, dtype=float)
        mas = np.asarray(self.masses, dtype=float).reshape(-1)
        if sup.shape[0] != mas.shape[0]:
            raise ValueError("support and masses must be aligned")
        if np.any(mas < -self.tol.rtol):
            raise ValueError("masses must be nonnegative")
        if abs(mas.sum() - 1.0) > self.tol.rtol:
            raise ValueError(f"total mass {mas.sum()} is not 1 within tolerance")
        sup.setflags(write=False)
        mas.setflags(write=False)
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "masses", mas)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def integrate(self, g: Callable[[Sequence[float]], float]) -> float:
        return float(sum(m * g(row) for m, row in zip(self.masses, self.support)))


@dataclass(frozen=True)
class Compression:
    """Result of compressing a tuple field through a column field.

    The compressed members are Hermitian but need not commute; ``abelian``
    records the verdict of the commutation check.
    """

    members: tuple[HermitianMatrix, ...]
    abelian: bool

    def as_abelian_tuple(self, tol: Tolerance = DEFAULT_TOL) -> AbelianTuple:
        if not self.abelian:
            raise ValueError("compression is not abelian")
        return AbelianTuple(self.members, tol)


def compress(field_: ColumnField, tf: TupleField, tol: Tolerance = DEFAULT_TOL) -> Compression:
    """``y_i = sum_t w_t a_t* x_it a_t``, with the commutation flag computed."""
    if field_.count != tf.count:
        raise ValueError(f"field has {field_.count} atoms, tuple field {tf.count}")
    if field_.dim != tf.dim:
        raise ValueError("field and tuple field dimensions differ")
    members = []
    for i in range(tf.n):
        acc = np.zeros((field_.dim, field_.dim), dtype=complex)
        for w, a, t in zip(field_.weights, field_.matrices, tf.atoms):
            acc += w * a.conj().T @ t.members[i].entries @ a
        members.append(HermitianMatrix(acc))
    return Compression(tuple(members), check_commuting(members, tol))


def build_mu_xi(
    field_: ColumnField,
    tf: TupleField,
    xi: np.ndarray,
    tol: Tolerance = DEFAULT_TOL,
    seed: int = 0,
) -> SpectralMeasure:
    """Spectral measure of a unit vector through a column field of abelian tuples.

    Each atom contributes its joint eigenvalue vectors with mass
    ``w_t |<u_j, a_t xi>|^2``; unitality of the field forces total mass 1.
    """
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.shape[0] != field_.dim:
        raise ValueError("vector dimension does not match the field")
    if abs(np.linalg.norm(xi) - 1.0) > tol.rtol:
        raise ValueError("xi must be a unit vector")
    if field_.count != tf.count:
        raise ValueError("field and tuple field are misaligned")
    rows = []
    masses = []
    for k, (w, a, t) in enumerate(zip(field_.weights, field_.matrices, tf.atoms)):
        js = joint_diagonalize(t, tol, seed=seed + k)
        amp = js.basis.conj().T @ (a @ xi)
        rows.append(js.points)
        masses.append(w * np.abs(amp) ** 2)
    return SpectralMeasure(np.vstack(rows), np.concatenate(masses), tol)


def _expectation(a: HermitianMatrix, xi: np.ndarray) -> float:
    return float(np.real(np.vdot(xi, a.entries @ xi)))


def _integrated_image(
    f: CubeFunction, field_: ColumnField, tf: TupleField, tol: Tolerance, seed: int = 0
) -> HermitianMatrix:
    acc = np.zeros((field_.dim, field_.dim), dtype=complex)
    for k, (w, a, t) in enumerate(zip(field_.weights, field_.matrices, tf.atoms)):
        fx = apply_cube_function(f, t, tol, seed=seed + k)
        acc += w * a.conj().T @ fx.entries @ a
    return HermitianMatrix(acc)


def check_jensen_expectation(
    f: CubeFunction,
    field_: ColumnField,
    tf: TupleField,
    xi: np.ndarray,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Vector-state Jensen inequality for a convex f over a unital column field.

    ``f(<y_1 xi, xi>, ..., <y_n xi, xi>) <= <(sum_t w_t a_t* f(x_t) a_t) xi, xi>``
    where ``y`` is the compressed tuple.  The verdict records both sides and
    the middle quantity ``int f d(mu_xi)`` for audit.
    """
    if not f.convex:
        return verdict.invalid(f"{f.name!r} is not flagged convex")
    if not tf.in_domain(f.domain, tol):
        return verdict.invalid("an atom leaves the domain cube")
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(xi) - 1.0) > tol.rtol:
        return verdict.invalid("xi is not a unit vector")
    comp = compress(field_, tf, tol)
    args = [_expectation(y, xi) for y in comp.members]
    lhs = f(args)
    rhs = _expectation(_integrated_image(f, field_, tf, tol), xi)
    mu = build_mu_xi(field_, tf, xi, tol)
    middle = mu.integrate(f)
    gap = rhs - lhs
    slack = tol.rtol * (1.0 + abs(lhs) + abs(rhs))
    return verdict.from_gap(
        gap, slack, lhs=lhs, rhs=rhs, middle=middle, mu_mass=mu.total_mass
    )


def check_mond_pecaric(
    f: CubeFunction,
    t: AbelianTuple,
    xi: np.ndarray,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Single-operator Jensen inequality for expectation values.

    ``f(<x_1 xi, xi>, ..., <x_n xi, xi>) <= <f(x) xi, xi>`` for convex f;
    the degenerate case of :func:`check_jensen_expectation` with the trivial
    one-atom identity field.
    """
    if not f.convex:
        return verdict.invalid(f"{f.name!r} is not flagged convex")
    if not spectrum_in_cube(t, f.domain, tol):
        return verdict.invalid("tuple leaves the domain cube")
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(xi) - 1.0) > tol.rtol:
        return verdict.invalid("xi is not a unit vector")
    args = [_expectation(x, xi) for x in t.members]
    lhs = f(args)
    rhs = _expectation(apply_cube_function(f, t, tol), xi)
    gap = rhs - lhs
    slack = tol.rtol * (1.0 + abs(lhs) + abs(rhs))
    return verdict.from_gap(gap, slack, lhs=lhs, rhs=rhs)


def check_phi_jensen_field(
    f: CubeFunction,
    field_: ColumnField,
    tf: TupleField,
    rho: DiagonalState,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Pinched Jensen inequality over a unital column field, pointwise per diagonal index.

    ``f(pinch(y_1)(s), ..., pinch(y_n)(s)) <= pinch(sum_t w_t a_t* f(x_t) a_t)(s)``
    at every index of the diagonal algebra.
    """
    if not f.convex:
        return verdict.invalid(f"{f.name!r} is not flagged convex")
    if not tf.in_domain(f.domain, tol):
        return verdict.invalid("an atom leaves the domain cube")
    if rho.dim != field_.dim:
        return verdict.invalid("state dimension mismatch")
    if np.any(rho.weights <= 0):
        return verdict.invalid("state weights must be strictly positive")
    comp = compress(field_, tf, tol)
    pinched = [pinch(rho, y).values for y in comp.members]
    rhs_vals = pinch(rho, _integrated_image(f, field_, tf, tol)).values
    gap = math.inf
    worst_slack = 0.0
    for s in range(rho.dim):
        lhs_s = f([p[s] for p in pinched])
        slack_s = tol.rtol * (1.0 + abs(lhs_s) + abs(rhs_vals[s]))
        g = rhs_vals[s] - lhs_s
        if g - (-slack_s) < gap - (-worst_slack):
            gap, worst_slack = g, slack_s
    return verdict.from_gap(gap, worst_slack, indices=rho.dim)


def check_phi_concave_jensen(
    f: CubeFunction,
    t: AbelianTuple,
    rho: DiagonalState,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Pinching-Jensen for concave f: ``pinch(f(x))(s) <= f(pinch(x_1)(s), ...)`` pointwise.

    Only indices carrying positive state weight participate.
    """
    if not f.concave:
        return verdict.invalid(f"{f.name!r} is not flagged concave")
    if rho.dim != t.dim:
        return verdict.invalid("state dimension mismatch")
    if not spectrum_in_cube(t, f.domain, tol):
        return verdict.invalid("tuple leaves the domain cube")
    fx = apply_cube_function(f, t, tol)
    lhs_vals = pinch(rho, fx).values
    pinched = [pinch(rho, x).values for x in t.members]
    gap = math.inf
    worst_slack = 0.0
    live = np.flatnonzero(rho.weights > 0)
    for s in live:
        rhs_s = f([p[s] for p in pinched])
        slack_s = tol.rtol * (1.0 + abs(lhs_vals[s]) + abs(rhs_s))
        g = rhs_s - lhs_vals[s]
        if g - (-slack_s) < gap - (-worst_slack):
            gap, worst_slack = g, slack_s
    return verdict.from_gap(gap, worst_slack, indices=len(live))


def _is_diagonal(x: HermitianMatrix, tol: Tolerance) -> bool:
    off = x.entries - np.diag(np.diag(x.entries))
    return float(np.linalg.norm(off)) <= tol.rtol * (1.0 + x.norm())


def check_phi_monotone_chain(
    f: CubeFunction,
    x: AbelianTuple,
    y: AbelianTuple,
    rho: DiagonalState,
    tol: Tolerance = DEFAULT_TOL,
) -> Verdict:
    """Monotonicity chain for concave, separately increasing f and diagonal dominating y.

    Checks all links pointwise at positive-weight indices:
      1. ``pinch(f(x))(s) <= f(pinch(x_1)(s), ...)``  (concavity),
      2. ``f(pinch(x_1)(s), ...) <= f(pinch(y_1)(s), ...)``  (monotonicity),
      3. ``f(pinch(y_1)(s), ...) == f(y)(s, s)``  (y lives in the diagonal algebra),
    and finally ``phi(f(x)) <= phi(f(y))``.
    """
    from .linalg import loewner_leq

    if not (f.concave and f.separately_increasing):
        return verdict.invalid(f"{f.name!r} must be concave and separately increasing")
    if x.n != y.n or x.dim != y.dim or rho.dim != x.dim:
        return verdict.invalid("shape mismatch")
    if not all(_is_diagonal(m, tol) for m in y.members):
        return verdict.invalid("y members must be diagonal")
    if not all(loewner_leq(a, b, tol) for a, b in zip(x.members, y.members)):
        return verdict.invalid("x <= y fails memberwise")
    if not (spectrum_in_cube(x, f.domain, tol) and spectrum_in_cube(y, f.domain, tol)):
        return verdict.invalid("a tuple leaves the domain cube")

    fx = apply_cube_function(f, x, tol)
    fy = apply_cube_function(f, y, tol)
    lhs_vals = pinch(rho, fx).values
    px = [pinch(rho, m).values for m in x.members]
    py = [pinch(rho, m).values for m in y.members]
    live = np.flatnonzero(rho.weights > 0)

    gap = math.inf
    worst_slack = 0.0
    equality_dev = 0.0
    for s in live:
        mid_x = f([p[s] for p in px])
        mid_y = f([p[s] for p in py])
        for lo, hi in ((lhs_vals[s], mid_x), (mid_x, mid_y)):
            slack_s = tol.rtol * (1.0 + abs(lo) + abs(hi))
            g = hi - lo
            if g - (-slack_s) < gap - (-worst_slack):
                gap, worst_slack = g, slack_s
        dev = abs(mid_y - fy.entries[s, s].real)
        equality_dev = max(equality_dev, dev / (1.0 + abs(mid_y)))
    if equality_dev > tol.rtol:
        return verdict.failed(-equality_dev, reason="diagonal equality link broke")

    phi_x = state_trace(rho, fx)
    phi_y = state_trace(rho, fy)
    slack_phi = tol.rtol * (1.0 + abs(phi_x) + abs(phi_y))
    g = phi_y - phi_x
    if g - (-slack_phi) < gap - (-worst_slack):
        gap, worst_slack = g, slack_phi
    return verdict.from_gap(gap, worst_slack, phi_x=phi_x, phi_y=phi_y)


@dataclass(frozen=True)
class ExampleReport:
    """Reproduction record for the 2x2 counterexample to pointwise pinching-monotonicity.

    For ``x`` the all-ones matrix scaled by c and ``y = diag(t, lam*t)``:
      * ``order_strict``: x < y strictly in the Loewner order,
      * ``pinch_square_not_dominated``: pinch(x^2) escapes below y^2
        (only asserted when t < c*sqrt(2), else None),
      * ``trace_square_identity``: tr x^2 equals 4c^2,
      * ``trace_monotone``: tr x^2 < tr y^2.

    Intermediate matrices are kept so a failed claim can be pinpointed.
    """

    c: float
    t: float
    lam: float
    x: HermitianMatrix
    y: HermitianMatrix
    x_squared: HermitianMatrix
    y_squared: HermitianMatrix
    pinched_square: DiagonalFunction
    order_strict: bool
    pinch_square_not_dominated: bool | None
    trace_square_identity: bool
    trace_monotone: bool

    @property
    def verdicts(self) -> dict[str, bool | None]:
        return {
            "order_strict": self.order_strict,
            "pinch_square_not_dominated": self.pinch_square_not_dominated,
            "trace_square_identity": self.trace_square_identity,
            "trace_monotone": self.trace_monotone,
        }

    @property
    def all_hold(self) -> bool:
        return all(v for v in self.verdicts.values() if v is not None)


def reproduce_example1(
    c: float, t: float, lam: float, tol: Tolerance = DEFAULT_TOL
) -> ExampleReport:
    """Reproduce the 2x2 instance where pinching-monotonicity fails pointwise but holds in trace.

    Parameters must satisfy ``0 < c < t`` and ``lam > c / (t - c)`` (which
    makes x < y strict).  The pointwise violation is asserted only in the
    regime ``t < c*sqrt(2)``.
    """
    if not (0 < c < t):
        raise ValueError(f"need 0 < c < t, got c={c}, t={t}")
    if lam <= c / (t - c):
        raise ValueError(f"need lam > c/(t-c) = {c / (t - c)}, got {lam}")
    x = HermitianMatrix(np.full((2, 2), float(c), dtype=complex))
    y = diagonal([t, lam * t])
    x2 = HermitianMatrix(x.entries @ x.entries)
    y2 = HermitianMatrix(y.entries @ y.entries)
    rho = DiagonalState.uniform(2)
    pinched = pinch(rho, x2)

    es = eig_hermitian(y - x)
    order_strict = es.lambda_min > tol.rtol * (1.0 + es.op_norm)

    not_dominated: bool | None = None
    if t < c * math.sqrt(2.0):
        ed = eig_hermitian(y2 - pinched.as_matrix())
        not_dominated = ed.lambda_min < -tol.rtol * (1.0 + ed.op_norm)

    tr_x2 = state_trace(rho, x2)
    tr_y2 = state_trace(rho, y2)
    identity_holds = abs(tr_x2 - 4.0 * c * c) <= 1e-12 * (1.0 + 4.0 * c * c)
    monotone = tr_x2 < tr_y2

    return ExampleReport(
        c=float(c),
        t=float(t),
        lam=float(lam),
        x=x,
        y=y,
        x_squared=x2,
        y_squared=y2,
        pinched_square=pinched,
        order_strict=order_strict,
        pinch_square_not_dominated=not_dominated,
        trace_square_identity=identity_holds,
        trace_monotone=monotone,
    )
