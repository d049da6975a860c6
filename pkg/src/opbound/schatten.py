"""Schatten-p norms, trace duality and a checker for strip interpolation of
Schatten norms.

Exponents are plain floats in ``[1, inf]``; ``math.inf`` (or the strings
``"inf"``/``"∞"``) selects the operator norm.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BadExponent, BadStripPoint, BoundaryViolation, InvalidInput
from .linalg import adjoint, as_matrix, singular_values, svd
from .report import DEFAULT_REL_TOL, InequalityReport

# z -> A(z); analyticity on the open strip and the growth condition are the
# caller's obligation, they cannot be checked from samples.
StripFamily = Callable[[complex], np.ndarray]


def exponent(p) -> float:
    """Normalise a Schatten exponent, raising :class:`BadExponent` below 1."""
    if isinstance(p, str):
        key = p.strip().lower()
        if key in ("inf", "infinity", "∞", "oo"):
            return math.inf
        try:
            p = float(key)
        except ValueError as exc:
            raise BadExponent(f"not a Schatten exponent: {p!r}") from exc
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise BadExponent(f"Schatten exponent must be >= 1, got {p}")
    return p


def norm_from_singular_values(s, p) -> np.ndarray:
    """l^p norm along the last axis of (batched) singular values."""
    p = exponent(p)
    s = np.asarray(s, dtype=float)
    if s.shape[-1] == 0:
        return np.zeros(s.shape[:-1])
    if math.isinf(p):
        return s.max(axis=-1)
    if p == 1.0:
        return s.sum(axis=-1)
    if p == 2.0:
        return np.sqrt(np.sum(s * s, axis=-1))
    # scale by the top singular value so large p cannot overflow
    top = s.max(axis=-1, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    return (safe[..., 0]) * np.sum((s / safe) ** p, axis=-1) ** (1.0 / p)


def schatten_norm(A, p) -> float:
    """l^p norm of the singular values of ``A``; ``p = inf`` is the operator norm."""
    p = exponent(p)
    return float(norm_from_singular_values(singular_values(as_matrix(A)), p))


def conjugate_exponent(p) -> float:
    p = exponent(p)
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _dual_weights(s: np.ndarray, p: float) -> np.ndarray:
    """Unit-``p'``-norm weights g maximising ``sum(s * g)``."""
    g = np.zeros_like(s)
    if s.size == 0 or s[0] == 0.0:
        g[:1] = 1.0
        return g
    if p == 1.0:
        return np.ones_like(s)
    if math.isinf(p):
        g[0] = 1.0
        return g
    g = (s / s[0]) ** (p - 1.0)
    return g / norm_from_singular_values(g, conjugate_exponent(p))


def optimal_witness(B, p) -> np.ndarray:
    """Finite-rank ``F`` with ``||F||_{p'} = 1`` and ``tr(B F) = ||B||_p``."""
    p = exponent(p)
    dec = svd(as_matrix(B, name="B"))
    g = _dual_weights(dec.singular_values, p)
    return (dec.V * g) @ adjoint(dec.U)


def random_witness_values(B, p, trials: int, seed: int, batch: int = 2048) -> np.ndarray:
    """``|tr(B F)|`` for ``trials`` random complex Gaussian ``F`` scaled to ``||F||_{p'} = 1``."""
    p = exponent(p)
    B = as_matrix(B, name="B")
    rng = np.random.default_rng(seed)
    q = conjugate_exponent(p)
    rows, cols = B.shape[1], B.shape[0]
    out = []
    remaining = int(trials)
    while remaining > 0:
        m = min(batch, remaining)
        F = rng.standard_normal((m, rows, cols)) + 1j * rng.standard_normal((m, rows, cols))
        scale = norm_from_singular_values(np.linalg.svd(F, compute_uv=False), q)
        traces = np.einsum("ij,mji->m", B, F)
        out.append(np.abs(traces) / scale)
        remaining -= m
    return np.concatenate(out) if out else np.zeros(0)


def trace_duality_estimate(B, p, trials: int = 100, seed: int = 0):
    """Lower bound for ``||B||_p`` from ``sup |tr(B F)|`` over unit-``p'`` witnesses.

    The SVD-built optimal witness attains the norm; ``trials`` seeded random
    witnesses serve as falsification probes and can never beat it. Returns
    ``(lower_bound, witness)``.
    """
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    p = exponent(p)
    B = as_matrix(B, name="B")
    F = optimal_witness(B, p)
    best = abs(np.trace(B @ F))
    probes = random_witness_values(B, p, trials, seed)
    if probes.size and probes.max() > best:
        # only reachable through round-off when B is (numerically) zero
        i = int(np.argmax(probes))
        best = float(probes[i])
    return float(best), F


def interpolation_exponent(p0, p1, z) -> float:
    """``p_z`` with ``1/p_z = (1 - Re z)/p0 + Re z/p1``."""
    x = complex(z).real
    if not 0.0 <= x <= 1.0:
        raise BadStripPoint(f"Re z must lie in [0, 1], got {x}")
    p0, p1 = exponent(p0), exponent(p1)
    inv = (1.0 - x) / p0 + x / p1
    return math.inf if inv == 0.0 else 1.0 / inv


def verify_gk_interpolation(
    family: StripFamily,
    p0,
    p1,
    C0: float,
    C1: float,
    grid: Iterable[complex],
    boundary_ys: Sequence[float] | None = None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> list[InequalityReport]:
    """Check ``||A(z)||_{p_z} <= C0**(1-Re z) C1**(Re z)`` on ``grid``.

    The boundary hypotheses ``||A(iy)||_{p0} <= C0`` and
    ``||A(1+iy)||_{p1} <= C1`` are re-checked on ``boundary_ys`` first; a
    failure raises :class:`BoundaryViolation`, meaning the supplied constants
    are wrong rather than the interpolation bound.
    """
    p0, p1 = exponent(p0), exponent(p1)
    if C0 <= 0 or C1 <= 0:
        raise InvalidInput("boundary constants must be positive")
    if boundary_ys is None:
        boundary_ys = np.linspace(-5.0, 5.0, 41)
    for y in boundary_ys:
        for x, p, C in ((0.0, p0, C0), (1.0, p1, C1)):
            val = schatten_norm(family(complex(x, y)), p)
            if val > C * (1.0 + rel_tol):
                raise BoundaryViolation(f"||A({x}+{y}i)||_{p} = {val:.6e} exceeds C = {C:.6e}")
    reports = []
    for z in grid:
        z = complex(z)
        pz = interpolation_exponent(p0, p1, z)
        rhs = C0 ** (1.0 - z.real) * C1 ** z.real
        reports.append(
            InequalityReport(
                theorem_id="gk-interpolation",
                lhs=schatten_norm(family(z), pz),
                rhs=rhs,
                z=z,
                p=pz,
                rel_tol=rel_tol,
            )
        )
    return reports
