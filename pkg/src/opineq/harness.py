"""Instance generators, the audited function library, and seeded verification campaigns.

Every campaign is deterministic given its config: per-instance RNG streams
are split from the seed by index, so execution order (or parallel fan-out)
cannot change a report.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, asdict
from typing import Callable, Sequence

import numpy as np

from . import verdict
from .abelian import AbelianTuple, Cube, CubeFunction, uniform_cube
from .linalg import DEFAULT_TOL, HermitianMatrix, Tolerance, diagonal, eig_hermitian
from .majorization import check_corollary, check_thm5, check_thm6, kyfan_check
from .means import (
    ExponentVector,
    check_lowner_heinz,
    check_trace_power_monotone,
    root_product_chain,
)
from .pinching import (
    ColumnField,
    TupleField,
    check_jensen_expectation,
    check_mond_pecaric,
    check_phi_concave_jensen,
    check_phi_jensen_field,
    check_phi_monotone_chain,
    reproduce_example1,
)
from .state import DiagonalState
from .verdict import Verdict

THEOREM_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "COR", "LH", "KF", "EX1", "CHAIN")

SCHEMA_VERSION = 1

LH_ALPHAS = (0.0, 0.25, 0.5, 0.75, 1.0)


class ConfigError(ValueError):
    """Campaign configuration rejected before any instance ran."""


class GenerationError(RuntimeError):
    """An instance generator could not certify its construction after retries."""


@dataclass(frozen=True)
class CampaignConfig:
    theorem: str
    count: int
    dim_range: tuple[int, int] = (2, 6)
    arity_range: tuple[int, int] = (1, 3)
    seed: int = 0
    tol: Tolerance = field(default=DEFAULT_TOL, compare=False)
    functions: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.theorem not in THEOREM_IDS:
            raise ConfigError(f"unknown theorem {self.theorem!r}; expected one of {THEOREM_IDS}")
        if self.count < 1:
            raise ConfigError(f"instance count must be >= 1, got {self.count}")
        for name, (lo, hi) in (("dim", self.dim_range), ("arity", self.arity_range)):
            if lo < 1 or hi < lo:
                raise ConfigError(f"empty {name} range {lo}..{hi}")

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "count": self.count,
            "dim_range": list(self.dim_range),
            "arity_range": list(self.arity_range),
            "seed": self.seed,
            "rtol": self.tol.rtol,
            "quadrature_nodes": self.tol.quadrature_nodes,
            "functions": list(self.functions) if self.functions is not None else None,
        }


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Per-index RNG stream split from the campaign seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_frame(dim: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal m-by-k frame from a Gaussian draw, rejecting near-singular draws."""
    while True:
        z = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
        if np.linalg.cond(z) <= 1e8:
            q, _ = np.linalg.qr(z)
            return q[:, :k]


# ---------------------------------------------------------------------------
# instance generators
# ---------------------------------------------------------------------------

def gen_abelian_tuple(dim: int, n: int, cube: Cube, seed) -> AbelianTuple:
    """Commuting tuple sharing one random eigenbasis, eigenvalues uniform per interval."""
    rng = np.random.default_rng(seed)
    if cube.arity != n:
        raise ValueError("cube arity must match n")
    q = random_unitary(dim, rng)
    members = tuple(
        HermitianMatrix((q * rng.uniform(lo, hi, dim)) @ q.conj().T)
        for lo, hi in cube.intervals
    )
    return AbelianTuple(members)


def _banded_abelian(rng, dim, n, lo, hi) -> AbelianTuple:
    q = random_unitary(dim, rng)
    return AbelianTuple(
        tuple(HermitianMatrix((q * rng.uniform(lo, hi, dim)) @ q.conj().T) for _ in range(n))
    )


def gen_dominated_pair(dim: int, n: int, cube: Cube, seed) -> tuple[AbelianTuple, AbelianTuple]:
    """Memberwise-ordered pair of abelian tuples with independent eigenbases.

    x eigenvalues live in the lower 30% of each interval and y eigenvalues in
    the upper 60%, so ``x_i <= y_i`` holds by range separation while the two
    tuples generically fail to commute with each other.  The order is audited
    after construction; 3 retries, then :class:`GenerationError`.
    """
    from .linalg import loewner_leq

    rng = np.random.default_rng(seed)
    lo, hi = cube.intervals[0]
    for lo_i, hi_i in cube.intervals:
        if hi_i <= lo_i:
            raise ValueError("cube needs headroom in every interval")
    for _ in range(4):
        x = _banded_abelian(rng, dim, n, lo, lo + 0.3 * (hi - lo))
        y = _banded_abelian(rng, dim, n, lo + 0.4 * (hi - lo), hi)
        if all(loewner_leq(a, b) for a, b in zip(x.members, y.members)):
            return x, y
    raise GenerationError("dominated pair failed its order audit after retries")


def gen_centralizer_pair(
    dim: int,
    n: int,
    rho_blocks: Sequence[int],
    seed,
    cube: Cube | None = None,
) -> tuple[AbelianTuple, AbelianTuple, DiagonalState]:
    """Ordered pair of abelian tuples commuting exactly with a block-constant state.

    The state is diagonal and constant on each block of the partition; both
    tuples are block-diagonal for that partition (so the commutators with the
    state vanish identically), and within each block they are generated as a
    dominated pair.
    """
    rng = np.random.default_rng(seed)
    blocks = tuple(int(b) for b in rho_blocks)
    if sum(blocks) != dim or any(b < 1 for b in blocks):
        raise ValueError(f"blocks {blocks} do not partition dimension {dim}")
    if cube is None:
        cube = uniform_cube(n, 0.0, 2.0)
    xs = [np.zeros((dim, dim), dtype=complex) for _ in range(n)]
    ys = [np.zeros((dim, dim), dtype=complex) for _ in range(n)]
    weights = np.empty(dim)
    offset = 0
    for b in blocks:
        bx, by = gen_dominated_pair(b, n, Cube(cube.intervals), rng)
        for i in range(n):
            xs[i][offset : offset + b, offset : offset + b] = bx.members[i].entries
            ys[i][offset : offset + b, offset : offset + b] = by.members[i].entries
        weights[offset : offset + b] = rng.uniform(0.2, 2.0)
        offset += b
    x = AbelianTuple(tuple(HermitianMatrix(m) for m in xs))
    y = AbelianTuple(tuple(HermitianMatrix(m) for m in ys))
    return x, y, DiagonalState(weights)


def gen_unital_field(dim: int, count: int, seed, kind: str = "generic") -> ColumnField:
    """Random unital column field; unitality is exact by construction.

    ``generic`` draws arbitrary matrices b_t and normalizes by the inverse
    square root of ``sum w_t b_t* b_t``; ``diagonal`` keeps everything in the
    diagonal algebra; ``unitary`` is a single-atom unitary field;
    ``probability`` uses identity atoms with probability weights.
    """
    rng = np.random.default_rng(seed)
    if kind == "unitary":
        return ColumnField((1.0,), (random_unitary(dim, rng),))
    if kind == "probability":
        p = rng.uniform(0.2, 1.0, count)
        p /= p.sum()
        return ColumnField(tuple(p), (np.eye(dim, dtype=complex),) * count)
    weights = rng.uniform(0.5, 2.0, count)
    if kind == "diagonal":
        mats = [np.diag(rng.uniform(0.3, 1.5, dim)).astype(complex) for _ in range(count)]
    elif kind == "generic":
        mats = [
            rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            for _ in range(count)
        ]
    else:
        raise ValueError(f"unknown field kind {kind!r}")
    gram = sum(w * b.conj().T @ b for w, b in zip(weights, mats))
    es = eig_hermitian(HermitianMatrix(gram))
    if es.lambda_min <= 1e-8 * es.op_norm:
        return gen_unital_field(dim, count, rng, kind)
    root_inv = (es.basis / np.sqrt(es.eigenvalues)) @ es.basis.conj().T
    return ColumnField(tuple(weights), tuple(b @ root_inv for b in mats))


def gen_tuple_field(
    dim: int, n: int, count: int, cube: Cube, seed, kind: str = "generic"
) -> TupleField:
    """Aligned atoms for a column field; ``diagonal``/``common`` restrict the bases."""
    rng = np.random.default_rng(seed)
    if kind == "diagonal":
        atoms = tuple(
            AbelianTuple(
                tuple(diagonal(rng.uniform(lo, hi, dim)) for lo, hi in cube.intervals)
            )
            for _ in range(count)
        )
    elif kind == "common":
        q = random_unitary(dim, rng)
        atoms = tuple(
            AbelianTuple(
                tuple(
                    HermitianMatrix((q * rng.uniform(lo, hi, dim)) @ q.conj().T)
                    for lo, hi in cube.intervals
                )
            )
            for _ in range(count)
        )
    else:
        atoms = tuple(gen_abelian_tuple(dim, n, cube, rng) for _ in range(count))
    return TupleField(atoms)


def gen_compatible_pair(dim: int, n: int, cube: Cube, seed) -> tuple[AbelianTuple, AbelianTuple]:
    """Compatible pair by construction: both tuples diagonal in one common basis."""
    rng = np.random.default_rng(seed)
    q = random_unitary(dim, rng)
    mk = lambda: AbelianTuple(
        tuple(
            HermitianMatrix((q * rng.uniform(lo, hi, dim)) @ q.conj().T)
            for lo, hi in cube.intervals
        )
    )
    return mk(), mk()


def gen_compatible_rejection(
    dim: int, n: int, cube: Cube, seed, max_attempts: int = 10_000
) -> tuple[AbelianTuple, AbelianTuple]:
    """Rejection sampling for compatible pairs with independent bases.

    Compatibility is measure-zero for generic draws when n >= 2 and dim >= 2,
    so this is expected to exhaust its attempt budget except in the trivial
    regimes (n = 1, or dim = 1); it exists to document exactly that.
    """
    from .abelian import check_compatible

    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        x = gen_abelian_tuple(dim, n, cube, rng)
        y = gen_abelian_tuple(dim, n, cube, rng)
        if check_compatible(x, y):
            return x, y
    raise GenerationError(f"no compatible pair found in {max_attempts} attempts")


# ---------------------------------------------------------------------------
# function library and flag audit
# ---------------------------------------------------------------------------

def function_library(n: int, cube: Cube) -> list[CubeFunction]:
    """Named test functions admissible on the cube, with audited shape flags.

    The geometric-mean entry uses the n-th root of the product (the scalar
    geometric mean), which is concave and separately increasing on
    nonnegative cubes at every arity.
    """
    if cube.arity != n:
        raise ValueError("cube arity must match n")
    lows = [lo for lo, _ in cube.intervals]
    out = [
        CubeFunction(
            "affine", n, cube,
            lambda s: 0.1 + sum((0.25 + 0.5 * (i + 1) / len(s)) * v for i, v in enumerate(s)),
            convex=True, concave=True, separately_increasing=True,
        ),
        CubeFunction(
            "sum-of-squares", n, cube, lambda s: sum(v * v for v in s), convex=True
        ),
        CubeFunction(
            "max", n, cube, max, convex=True, separately_increasing=True
        ),
        CubeFunction(
            "sum-of-exponentials", n, cube, lambda s: sum(math.exp(v) for v in s),
            convex=True, separately_increasing=True,
        ),
    ]
    if min(lows) >= 0:
        out.append(
            CubeFunction(
                "square-of-sum", n, cube, lambda s: sum(s) ** 2,
                convex=True, separately_increasing=True,
            )
        )
        out.append(
            CubeFunction(
                "geometric-mean", n, cube,
                lambda s: float(np.prod(s)) ** (1.0 / len(s)),
                concave=True, separately_increasing=True,
            )
        )
        out.append(
            CubeFunction(
                "monomial", n, cube,
                lambda s: float(np.prod([v ** (0.5 + 0.25 * i) for i, v in enumerate(s)])),
                separately_increasing=True,
            )
        )
    if min(lows) > 0:
        out.append(
            CubeFunction(
                "neg-log-product", n, cube,
                lambda s: -sum(math.log(v) for v in s), convex=True,
            )
        )
    return out


def mislabeled_controls(n: int, cube: Cube) -> list[CubeFunction]:
    """Deliberately wrong flag declarations; the audit must reject every one."""
    controls = [
        CubeFunction(
            "control-sumsq-as-concave", n, cube,
            lambda s: sum(v * v for v in s), concave=True,
        ),
        CubeFunction(
            "control-negsum-as-increasing", n, cube,
            lambda s: -sum(s), separately_increasing=True,
        ),
    ]
    if n >= 2:
        controls.append(
            CubeFunction("control-max-as-concave", n, cube, max, concave=True)
        )
    return controls


def verify_flags(f: CubeFunction, samples: int = 200, seed: int = 0) -> bool:
    """Randomized audit of declared flags: midpoint probes for convexity and
    concavity, coordinate probes for separate monotonicity.

    A declared flag failing any probe fails the audit; undeclared flags are
    not inferred.
    """
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    rng = np.random.default_rng(seed)
    draw = lambda: [rng.uniform(lo, hi) for lo, hi in f.domain.intervals]
    if f.convex or f.concave:
        for _ in range(samples):
            a, b = draw(), draw()
            m = [(u + v) / 2 for u, v in zip(a, b)]
            avg = (f(a) + f(b)) / 2
            if f.convex and f(m) > avg + 1e-9:
                return False
            if f.concave and f(m) < avg - 1e-9:
                return False
    if f.separately_increasing:
        for _ in range(samples):
            a = draw()
            j = int(rng.integers(f.arity))
            b = list(a)
            b[j] = rng.uniform(a[j], f.domain.intervals[j][1])
            if f(b) < f(a) - 1e-9:
                return False
    return True


# ---------------------------------------------------------------------------
# serialization (replayable failure records)
# ---------------------------------------------------------------------------

def _ser_c(arr: np.ndarray) -> dict:
    return {"re": np.real(arr).tolist(), "im": np.imag(arr).tolist()}


def _deser_c(d: dict) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)


def _ser_tuple(t: AbelianTuple) -> list:
    return [_ser_c(m.entries) for m in t.members]


def _deser_tuple(data: list, tol: Tolerance) -> AbelianTuple:
    return AbelianTuple(tuple(HermitianMatrix(_deser_c(d)) for d in data), tol)


def _ser_func(f: CubeFunction) -> dict:
    return {"name": f.name, "arity": f.arity, "cube": [list(iv) for iv in f.domain.intervals]}


def _deser_func(d: dict) -> CubeFunction:
    cube = Cube(tuple(tuple(iv) for iv in d["cube"]))
    for f in function_library(d["arity"], cube):
        if f.name == d["name"]:
            return f
    raise KeyError(f"function {d['name']!r} not in the library for this cube")


def _ser_field(field_: ColumnField) -> dict:
    return {
        "weights": list(field_.weights),
        "matrices": [_ser_c(a) for a in field_.matrices],
    }


def _deser_field(d: dict, tol: Tolerance) -> ColumnField:
    return ColumnField(
        tuple(d["weights"]), tuple(_deser_c(m) for m in d["matrices"]), tol
    )


def _ser_tf(tf: TupleField) -> list:
    return [_ser_tuple(t) for t in tf.atoms]


def _deser_tf(data: list, tol: Tolerance) -> TupleField:
    return TupleField(tuple(_deser_tuple(t, tol) for t in data))


# ---------------------------------------------------------------------------
# theorem checkers shared by the campaign runners and instance replay
# ---------------------------------------------------------------------------

def _check_t1(f, x, y, rho, tol) -> Verdict:
    return verdict.combine(
        check_phi_concave_jensen(f, x, rho, tol),
        check_phi_monotone_chain(f, x, y, rho, tol),
    )


def _check_t3(f, field_, tf, xi, tol) -> Verdict:
    return verdict.combine(
        check_jensen_expectation(f, field_, tf, xi, tol),
        check_mond_pecaric(f, tf.atoms[0], xi, tol),
    )


def _check_lh(x, y, tol) -> Verdict:
    return verdict.combine(*(check_lowner_heinz(x, y, a, tol) for a in LH_ALPHAS))


def _check_chain(x, y, tol) -> Verdict:
    from .linalg import loewner_leq

    for a, b in zip(x.members, y.members):
        if not loewner_leq(a, b, tol):
            return verdict.invalid("x <= y fails memberwise")
    es = eig_hermitian(root_product_chain(y, tol) - root_product_chain(x, tol))
    slack = tol.rtol * (1.0 + es.op_norm)
    return verdict.from_gap(es.lambda_min, slack)


def _ex1_verdict(report) -> Verdict:
    order_gap = eig_hermitian(report.y - report.x).lambda_min
    v = Verdict(
        verdict.PASS if report.all_hold else verdict.FAIL,
        order_gap,
        {"params": [report.c, report.t, report.lam], "verdicts": report.verdicts},
    )
    return v


# ---------------------------------------------------------------------------
# campaign runners: one (verdict, payload) per instance
# ---------------------------------------------------------------------------

def _draw(rng, lohi) -> int:
    return int(rng.integers(lohi[0], lohi[1] + 1))


def _pick_function(cfg, rng, n, cube, need: tuple[str, ...]) -> CubeFunction:
    pool = [
        f
        for f in function_library(n, cube)
        if all(getattr(f, flag) for flag in need)
        and (cfg.functions is None or f.name in cfg.functions)
    ]
    if not pool:
        raise ConfigError(
            f"no library function with flags {need} matches the sweep list {cfg.functions}"
        )
    return pool[int(rng.integers(len(pool)))]


def _run_t1(cfg, rng):
    dim, n = _draw(rng, cfg.dim_range), _draw(rng, cfg.arity_range)
    cube = uniform_cube(n, 0.0, 2.0)
    f = _pick_function(cfg, rng, n, cube, ("concave", "separately_increasing"))
    x = _banded_abelian(rng, dim, n, 0.0, 0.6)
    y = AbelianTuple(tuple(diagonal(rng.uniform(0.8, 2.0, dim)) for _ in range(n)))
    rho = DiagonalState(rng.uniform(0.1, 2.0, dim))
    v = _check_t1(f, x, y, rho, cfg.tol)
    payload = {
        "theorem": "T1",
        "function": _ser_func(f),
        "x": _ser_tuple(x),
        "y": _ser_tuple(y),
        "rho": rho.weights.tolist(),
    }
    return v, payload, f.name


def _random_partition(rng, dim) -> tuple[int, ...]:
    blocks = []
    remaining = dim
    while remaining > 0:
        b = int(rng.integers(1, remaining + 1))
        blocks.append(b)
        remaining -= b
    return tuple(blocks)


def _run_t2(cfg, rng):
    dim, n = _draw(rng, cfg.dim_range), _draw(rng, cfg.arity_range)
    blocks = _random_partition(rng, dim)
    x, y, rho = gen_centralizer_pair(dim, n, blocks, rng)
    p = rng.uniform(0.0, 3.0, n)
    if rng.integers(5) == 0:
        p[int(rng.integers(n))] = float(rng.integers(0, 2))
    v = check_trace_power_monotone(x, y, ExponentVector(tuple(p)), rho, cfg.tol)
    payload = {
        "theorem": "T2",
        "x": _ser_tuple(x),
        "y": _ser_tuple(y),
        "p": p.tolist(),
        "rho": rho.weights.tolist(),
    }
    return v, payload, None


def _field_instance(cfg, rng, kinds=("generic",)):
    dim, n = _draw(rng, cfg.dim_range), _draw(rng, cfg.arity_range)
    count = int(rng.integers(1, 5))
    cube = uniform_cube(n, 0.05, 2.0)
    kind = kinds[int(rng.integers(len(kinds)))]
    field_ = gen_unital_field(dim, count if kind != "unitary" else 1, rng, kind)
    tf_kind = {"generic": "generic", "diagonal": "diagonal", "unitary": "generic",
               "probability": "common"}[kind]
    tf = gen_tuple_field(dim, n, field_.count, cube, rng, tf_kind)
    return dim, n, cube, field_, tf


def _run_t3(cfg, rng):
    dim, n, cube, field_, tf = _field_instance(cfg, rng)
    f = _pick_function(cfg, rng, n, cube, ("convex",))
    xi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    xi /= np.linalg.norm(xi)
    v = _check_t3(f, field_, tf, xi, cfg.tol)
    payload = {
        "theorem": "T3",
        "function": _ser_func(f),
        "field": _ser_field(field_),
        "atoms": _ser_tf(tf),
        "xi": _ser_c(xi),
    }
    return v, payload, f.name


def _run_t4(cfg, rng):
    dim, n, cube, field_, tf = _field_instance(cfg, rng)
    f = _pick_function(cfg, rng, n, cube, ("convex",))
    rho = DiagonalState(rng.uniform(0.1, 2.0, dim))
    v = check_phi_jensen_field(f, field_, tf, rho, cfg.tol)
    payload = {
        "theorem": "T4",
        "function": _ser_func(f),
        "field": _ser_field(field_),
        "atoms": _ser_tf(tf),
        "rho": rho.weights.tolist(),
    }
    return v, payload, f.name


def _run_t5(cfg, rng):
    kind = ("one-variable", "unitary", "diagonal", "probability")[int(rng.integers(4))]
    dim = _draw(rng, cfg.dim_range)
    n = 1 if kind == "one-variable" else _draw(rng, cfg.arity_range)
    cube = uniform_cube(n, 0.05, 2.0)
    count = int(rng.integers(1, 5))
    if kind == "one-variable":
        field_ = gen_unital_field(dim, count, rng, "generic")
        tf = gen_tuple_field(dim, n, count, cube, rng, "generic")
    elif kind == "unitary":
        field_ = gen_unital_field(dim, 1, rng, "unitary")
        tf = gen_tuple_field(dim, n, 1, cube, rng, "generic")
    elif kind == "diagonal":
        field_ = gen_unital_field(dim, count, rng, "diagonal")
        tf = gen_tuple_field(dim, n, count, cube, rng, "diagonal")
    else:
        field_ = gen_unital_field(dim, count, rng, "probability")
        tf = gen_tuple_field(dim, n, count, cube, rng, "common")
    f = _pick_function(cfg, rng, n, cube, ("convex",))
    v = check_thm5(f, field_, tf, cfg.tol)
    payload = {
        "theorem": "T5",
        "function": _ser_func(f),
        "field": _ser_field(field_),
        "atoms": _ser_tf(tf),
    }
    return v, payload, f.name


def _run_t6(cfg, rng):
    dim, n = _draw(rng, cfg.dim_range), _draw(rng, cfg.arity_range)
    cube = uniform_cube(n, 0.0, 2.0)
    x, y = gen_dominated_pair(dim, n, cube, rng)
    f = _pick_function(cfg, rng, n, cube, ("convex", "separately_increasing"))
    v = check_thm6(f, x, y, cfg.tol)
    payload = {
        "theorem": "T6",
        "function": _ser_func(f),
        "x": _ser_tuple(x),
        "y": _ser_tuple(y),
    }
    return v, payload, f.name


def _run_cor(cfg, rng):
    dim = _draw(rng, cfg.dim_range)
    general = rng.integers(2) == 0
    n = 1 if general else _draw(rng, cfg.arity_range)
    cube = uniform_cube(n, 0.0, 2.0)
    if general:
        x = _banded_abelian(rng, dim, 1, 0.0, 2.0)
        y = _banded_abelian(rng, dim, 1, 0.0, 2.0)
    else:
        x, y = gen_compatible_pair(dim, n, cube, rng)
    lam = float(rng.uniform(0.0, 1.0))
    if rng.integers(10) == 0:
        lam = float(rng.integers(0, 2))
    f = _pick_function(cfg, rng, n, cube, ("convex",))
    v = check_corollary(f, x, y, lam, cfg.tol)
    payload = {
        "theorem": "COR",
        "function": _ser_func(f),
        "x": _ser_tuple(x),
        "y": _ser_tuple(y),
        "lam": lam,
    }
    return v, payload, f.name


def _run_lh(cfg, rng):
    dim = _draw(rng, cfg.dim_range)
    q = random_unitary(dim, rng)
    x = HermitianMatrix((q * rng.uniform(0.0, 1.2, dim)) @ q.conj().T)
    u = random_unitary(dim, rng)
    bump = HermitianMatrix((u * rng.uniform(0.0, 1.5, dim)) @ u.conj().T)
    y = x + bump
    v = _check_lh(x, y, cfg.tol)
    payload = {"theorem": "LH", "x": _ser_c(x.entries), "y": _ser_c(y.entries)}
    return v, payload, None


def _run_kf(cfg, rng):
    dim = _draw(rng, cfg.dim_range)
    scale = float(rng.uniform(0.2, 4.0))
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    a = HermitianMatrix(scale * z)
    k = int(rng.integers(1, dim + 1))
    frame = random_frame(dim, k, rng)
    v = kyfan_check(a, frame, cfg.tol)
    payload = {"theorem": "KF", "a": _ser_c(a.entries), "frame": _ser_c(frame)}
    return v, payload, None


def _run_ex1(cfg, rng, index=0):
    if index == 0:
        c, t, lam = 1.0, 1.3, 3.4
    else:
        c = 1.0
        t = float(rng.uniform(1.02, 1.40))
        lam = float((c / (t - c)) * (1.0 + rng.uniform(0.01, 0.5)))
    report = reproduce_example1(c, t, lam, cfg.tol)
    v = _ex1_verdict(report)
    payload = {"theorem": "EX1", "c": c, "t": t, "lam": lam}
    return v, payload, None


def _run_chain(cfg, rng):
    dim, n = _draw(rng, cfg.dim_range), _draw(rng, cfg.arity_range)
    x, y = gen_dominated_pair(dim, n, uniform_cube(n, 0.0, 2.0), rng)
    v = _check_chain(x, y, cfg.tol)
    payload = {"theorem": "CHAIN", "x": _ser_tuple(x), "y": _ser_tuple(y)}
    return v, payload, None


_RUNNERS: dict[str, Callable] = {
    "T1": _run_t1,
    "T2": _run_t2,
    "T3": _run_t3,
    "T4": _run_t4,
    "T5": _run_t5,
    "T6": _run_t6,
    "COR": _run_cor,
    "LH": _run_lh,
    "KF": _run_kf,
    "CHAIN": _run_chain,
}


def replay_instance(instance: dict, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Re-run the check for a serialized instance; deterministic, so the verdict must match."""
    theorem = instance["theorem"]
    if theorem == "T1":
        return _check_t1(
            _deser_func(instance["function"]),
            _deser_tuple(instance["x"], tol),
            _deser_tuple(instance["y"], tol),
            DiagonalState(np.asarray(instance["rho"])),
            tol,
        )
    if theorem == "T2":
        return check_trace_power_monotone(
            _deser_tuple(instance["x"], tol),
            _deser_tuple(instance["y"], tol),
            ExponentVector(tuple(instance["p"])),
            DiagonalState(np.asarray(instance["rho"])),
            tol,
        )
    if theorem == "T3":
        return _check_t3(
            _deser_func(instance["function"]),
            _deser_field(instance["field"], tol),
            _deser_tf(instance["atoms"], tol),
            _deser_c(instance["xi"]),
            tol,
        )
    if theorem == "T4":
        return check_phi_jensen_field(
            _deser_func(instance["function"]),
            _deser_field(instance["field"], tol),
            _deser_tf(instance["atoms"], tol),
            DiagonalState(np.asarray(instance["rho"])),
            tol,
        )
    if theorem == "T5":
        return check_thm5(
            _deser_func(instance["function"]),
            _deser_field(instance["field"], tol),
            _deser_tf(instance["atoms"], tol),
            tol,
        )
    if theorem == "T6":
        return check_thm6(
            _deser_func(instance["function"]),
            _deser_tuple(instance["x"], tol),
            _deser_tuple(instance["y"], tol),
            tol,
        )
    if theorem == "COR":
        return check_corollary(
            _deser_func(instance["function"]),
            _deser_tuple(instance["x"], tol),
            _deser_tuple(instance["y"], tol),
            instance["lam"],
            tol,
        )
    if theorem == "LH":
        return _check_lh(
            HermitianMatrix(_deser_c(instance["x"])),
            HermitianMatrix(_deser_c(instance["y"])),
            tol,
        )
    if theorem == "KF":
        return kyfan_check(
            HermitianMatrix(_deser_c(instance["a"])), _deser_c(instance["frame"]), tol
        )
    if theorem == "EX1":
        return _ex1_verdict(
            reproduce_example1(instance["c"], instance["t"], instance["lam"], tol)
        )
    if theorem == "CHAIN":
        return _check_chain(
            _deser_tuple(instance["x"], tol), _deser_tuple(instance["y"], tol), tol
        )
    raise ConfigError(f"unknown theorem {theorem!r}")


# ---------------------------------------------------------------------------
# campaign orchestration
# ---------------------------------------------------------------------------

@dataclass
class CampaignReport:
    """Config echo, per-instance verdicts, and summary counts for one campaign."""

    config: dict
    verdicts: list[dict]
    summary: dict
    wall_time_s: float
    schema_version: int = SCHEMA_VERSION

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(
            {
                "schema_version": self.schema_version,
                "config": self.config,
                "verdicts": self.verdicts,
                "summary": self.summary,
                "wall_time_s": self.wall_time_s,
            },
            sort_keys=True,
            indent=indent,
        )

    @staticmethod
    def from_json(text: str) -> "CampaignReport":
        d = json.loads(text)
        return CampaignReport(
            config=d["config"],
            verdicts=d["verdicts"],
            summary=d["summary"],
            wall_time_s=d["wall_time_s"],
            schema_version=d["schema_version"],
        )

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.verdicts if r["status"] == verdict.FAIL]


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Run a seeded campaign; deterministic given the config (wall time aside).

    Invalid instances are counted but excluded from pass statistics; every
    failing record carries the full serialized instance for replay; gaps
    within 10x their slack are flagged near-equality for tolerance audit.
    """
    start = time.perf_counter()
    records = []
    npass = nfail = ninvalid = nnear = 0
    min_gap = None
    for i in range(cfg.count):
        rng = instance_rng(cfg.seed, i)
        if cfg.theorem == "EX1":
            v, payload, fname = _run_ex1(cfg, rng, index=i)
        else:
            v, payload, fname = _RUNNERS[cfg.theorem](cfg, rng)
        rec: dict = {"index": i, "status": v.status, "gap": v.gap}
        if fname is not None:
            rec["function"] = fname
        for part in [v.detail] + list(v.detail.get("parts", [])):
            if "mu_mass" in part:
                rec["mu_mass"] = float(part["mu_mass"])
        slack = v.detail.get("slack")
        near = v.gap is not None and slack is not None and abs(v.gap) <= 10.0 * slack
        rec["near_equality"] = bool(near)
        if cfg.theorem == "EX1":
            rec["params"] = {"c": payload["c"], "t": payload["t"], "lam": payload["lam"]}
            rec["claims"] = {k: val for k, val in v.detail["verdicts"].items()}
        if v.status == verdict.FAIL:
            rec["instance"] = payload
            nfail += 1
        elif v.status == verdict.INVALID:
            rec["reason"] = v.detail.get("reason", "")
            ninvalid += 1
        else:
            npass += 1
        if near:
            nnear += 1
        if v.gap is not None:
            min_gap = v.gap if min_gap is None else min(min_gap, v.gap)
        records.append(rec)
    summary = {
        "pass": npass,
        "fail": nfail,
        "invalid": ninvalid,
        "near_equality": nnear,
        "min_gap": min_gap,
    }
    return CampaignReport(
        config=cfg.as_dict(),
        verdicts=records,
        summary=summary,
        wall_time_s=time.perf_counter() - start,
    )
