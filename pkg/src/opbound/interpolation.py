"""Three-lines bounds and verifiers for the strip-interpolated operator inequalities.

All strip bounds share the shape

    ||T2**(-z) S T1**(-1+z)||_p <= C(z) ||S T1^-1||_p**(1-x) ||S* T2^-1||_p**x,

``x = Re z``, with ``C(z)`` one of a small menu of constants. The menu is the
table in :data:`CASES`; :func:`exponent_assembler` evaluates it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadStripPoint,
    BothZero,
    DimensionMismatch,
    InvalidInput,
    KernelSingular,
    ModeMismatch,
    NonpositiveBound,
    NotHermitian,
    NotPositiveDefinite,
    UnknownCase,
)
from .linalg import (
    adjoint,
    as_matrix,
    as_square,
    condition_number,
    hermitian_eig,
    inverse,
    is_hermitian,
    operator_norm,
)
from .polar import generalized_polar
from .report import DEFAULT_REL_TOL, InequalityReport
from .schatten import exponent, norm_from_singular_values, schatten_norm
from .sectorial import BipEstimate, bip_fit, check_off_negative_axis
from .spectral import branched_powers, check_invertible, power_selfadjoint

PD_TOL = 1e-10
POLAR_CROSS_TOL = 1e-8
MODES = ("selfadjoint", "sectorial")
SELFADJOINT_CASES = ("both-indefinite", "one-positive", "both-positive")


def strip_point(z) -> complex:
    z = complex(z)
    if not (0.0 <= z.real <= 1.0) or math.isnan(z.imag):
        raise BadStripPoint(f"Re z must lie in [0, 1], got {z}")
    return z


# --- three lines ---------------------------------------------------------------


def three_lines_bound(C0: float, C1: float, z) -> float:
    """``C0**(1 - Re z) * C1**(Re z)``."""
    if not (C0 > 0 and C1 > 0):
        raise NonpositiveBound(f"boundary bounds must be positive, got {C0}, {C1}")
    x = strip_point(z).real
    return math.exp((1.0 - x) * math.log(C0) + x * math.log(C1))


def _sampler(boundary) -> Callable[[np.ndarray], np.ndarray]:
    if callable(boundary):

        def f(y):
            try:
                out = np.asarray(boundary(y), dtype=float)
                if out.shape == y.shape:
                    return out
            except (TypeError, ValueError):
                pass
            return np.array([float(boundary(v)) for v in y])

        return f
    c = float(boundary)
    return lambda y: np.full(y.shape, c)


def _kernel_log_integral(f0, f1, x, v, truncation, h):
    y = np.arange(v - truncation, v + truncation + 0.5 * h, h)
    b0, b1 = f0(y), f1(y)
    if np.any(b0 <= 0) or np.any(b1 <= 0) or not (np.all(np.isfinite(b0)) and np.all(np.isfinite(b1))):
        raise NonpositiveBound("boundary samples must be positive and finite")
    ch = np.cosh(math.pi * (y - v))
    c, s = math.cos(math.pi * x), math.sin(math.pi * x)
    integrand = 0.5 * s * (np.log(b0) / (ch - c) + np.log(b1) / (ch + c))
    return float(np.sum(integrand[1:] + integrand[:-1]) * 0.5 * h)


def three_lines_kernel_bound(
    boundary0,
    boundary1,
    z,
    truncation: float = 8.0,
    step: float = 1e-2,
    tol: float = 1e-10,
    max_halvings: int = 8,
) -> float:
    """Poisson-kernel bound for ``|phi(z)|`` from its boundary moduli.

    ``boundary0(y)`` bounds ``|phi(iy)|`` and ``boundary1(y)`` bounds
    ``|phi(1 + iy)|``; either may be a positive constant. Returns

        exp( sin(pi x)/2 * int [ log b0(y) / (cosh(pi(y-v)) - cos(pi x))
                               + log b1(y) / (cosh(pi(y-v)) + cos(pi x)) ] dy )

    for ``z = x + iv``, integrated over ``|y - v| <= truncation`` with the
    trapezoid rule, halving ``step`` until two results agree to ``tol``. The
    kernels decay like ``exp(-pi |y - v|)`` and carry masses ``1 - x`` and
    ``x``. The growth condition on ``phi`` that makes this a bound is the
    caller's responsibility.
    """
    z = strip_point(z)
    x, v = z.real, z.imag
    if x in (0.0, 1.0):
        raise KernelSingular("kernel is singular on the boundary lines")
    f0, f1 = _sampler(boundary0), _sampler(boundary1)
    h = float(step)
    prev = _kernel_log_integral(f0, f1, x, v, truncation, h)
    for _ in range(max_halvings):
        h *= 0.5
        cur = _kernel_log_integral(f0, f1, x, v, truncation, h)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return math.exp(cur)
        prev = cur
    return math.exp(prev)


# --- constants ---------------------------------------------------------------


def optimize_k(quadratic_coeff: float, inverse_coeff: float):
    """Minimise ``a k + b / k`` over ``k > 0``; returns ``(k_star, min_value)``.

    ``a = 0`` gives ``(inf, 0)`` (infimum approached as ``k -> inf``) and
    ``b = 0`` gives ``(0, 0)``.
    """
    a, b = float(quadratic_coeff), float(inverse_coeff)
    if a < 0 or b < 0 or math.isnan(a) or math.isnan(b):
        raise InvalidInput("coefficients must be nonnegative")
    if a == 0 and b == 0:
        raise BothZero("a k + b/k is identically zero")
    if a == 0:
        return math.inf, 0.0
    if b == 0:
        return 0.0, 0.0
    return math.sqrt(b / a), 2.0 * math.sqrt(a * b)


def _exp(v: float) -> float:
    try:
        return math.exp(v)
    except OverflowError:
        return math.inf


def _strip_quadratic(z: complex) -> float:
    return z.imag**2 + z.real * (1.0 - z.real)


def _sqrt_x(z: complex) -> float:
    return math.sqrt(z.real * (1.0 - z.real))


def _need_k(k):
    if k is None or not k > 0:
        raise InvalidInput(f"case needs k > 0, got {k}")
    return float(k)


# exponent of the constant: (z, k, theta_total) -> float
CASES: dict[str, Callable[[complex, float | None, float], float]] = {
    "strip-both-indefinite": lambda z, k, th: _need_k(k) * _strip_quadratic(z) + math.pi**2 / _need_k(k),
    "strip-one-positive": lambda z, k, th: _need_k(k) * _strip_quadratic(z) + math.pi**2 / (4.0 * _need_k(k)),
    "strip-both-positive": lambda z, k, th: 0.0,
    "real-both-indefinite": lambda z, k, th: 2.0 * math.pi * _sqrt_x(z),
    "real-one-positive": lambda z, k, th: math.pi * _sqrt_x(z),
    "real-both-positive": lambda z, k, th: 0.0,
    "sectorial-strip": lambda z, k, th: _need_k(k) * _strip_quadratic(z) + th**2 / (4.0 * _need_k(k)),
    "sectorial-real": lambda z, k, th: th * _sqrt_x(z),
    "similarity-indefinite": lambda z, k, th: 2.0 * math.pi,
    "similarity-positive": lambda z, k, th: 0.0,
}

# coefficient b in a k + b/k for the strip cases
_INVERSE_COEFF = {
    "both-indefinite": lambda th: math.pi**2,
    "one-positive": lambda th: math.pi**2 / 4.0,
    "sectorial": lambda th: th**2 / 4.0,
}


def exponent_assembler(case_id: str, z=0.5, k: float | None = None, theta_total: float = 0.0) -> float:
    """Constant factor ``exp(...)`` of the inequality family ``case_id``.

    ``theta_total`` is ``theta1 + theta2`` (``2 theta`` for a single space)
    and only enters the sectorial cases; sectorial ``N1 N2`` prefactors are
    not included.
    """
    try:
        rule = CASES[case_id]
    except KeyError:
        raise UnknownCase(f"unknown case {case_id!r}; expected one of {sorted(CASES)}") from None
    return _exp(rule(strip_point(z), k, float(theta_total)))


# --- conjugated operator ---------------------------------------------------------


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ModeMismatch(f"mode must be one of {MODES}, got {mode!r}")


def _shapes(S, T1, T2):
    S = as_matrix(S, name="S")
    T1 = as_square(T1, name="T1")
    T2 = as_square(T2, name="T2")
    if S.shape != (T2.shape[0], T1.shape[0]):
        raise DimensionMismatch(f"S must be {T2.shape[0]}x{T1.shape[0]}, got {S.shape[0]}x{S.shape[1]}")
    return S, T1, T2


class _EigPowers:
    """Cached ``T**w`` for a diagonalisable ``T``; Hermitian input uses the real-axis branch."""

    def __init__(self, T: np.ndarray, mode: str):
        self.mode = mode
        if mode == "selfadjoint":
            if not is_hermitian(T):
                raise ModeMismatch("self-adjoint mode needs Hermitian matrices")
            self.spec = hermitian_eig(T)
            check_invertible(self.spec)
            self.V = self.spec.eigenvectors
            self.Vinv = adjoint(self.V)
            self.lam = self.spec.eigenvalues
        else:
            lam, V = np.linalg.eig(T)
            check_off_negative_axis(lam)
            self.lam, self.V = lam, V
            self.Vinv = np.linalg.solve(V, np.eye(T.shape[0]))

    def values(self, ws) -> np.ndarray:
        ws = np.asarray(ws, dtype=complex)
        if self.mode == "selfadjoint":
            return branched_powers(self.lam, ws)
        return np.exp(ws[..., None] * np.log(self.lam))

    def batch(self, ws) -> np.ndarray:
        vals = self.values(np.atleast_1d(ws))
        return (self.V[None, :, :] * vals[:, None, :]) @ self.Vinv[None, :, :]

    def positive_definite(self, tol: float = PD_TOL) -> bool:
        if self.mode != "selfadjoint":
            return False
        return bool(self.lam[0] > tol * np.max(np.abs(self.lam)))


def conjugated_operator(S, T1, T2, z, mode: str = "selfadjoint") -> np.ndarray:
    """``T2**(-z) S T1**(-1+z)``.

    ``mode='selfadjoint'`` uses the real-axis branch for Hermitian ``T_j``;
    ``mode='sectorial'`` the principal branch through an eigendecomposition.
    """
    _check_mode(mode)
    S, T1, T2 = _shapes(S, T1, T2)
    z = strip_point(z)
    P1 = _EigPowers(T1, mode).batch([-1.0 + z])[0]
    P2 = _EigPowers(T2, mode).batch([-z])[0]
    return P2 @ S @ P1


def conjugated_operator_polar(S, T1, T2, z, mode: str = "selfadjoint") -> np.ndarray:
    """Second route to :func:`conjugated_operator` through ``S = |S*|**x U |S|**(1-x)``.

    For positive definite ``T2`` (or principal-branch powers) the left end is
    rearranged as ``T2**(-iy) [ |S*|**x (T2*)**(-x) ]*``, which uses the
    adjoint relation ``((T*)**(-x))* = T**(-x)``. That relation fails for the
    real-axis branch on indefinite ``T2``, where the factors are multiplied
    in place instead.
    """
    _check_mode(mode)
    S, T1, T2 = _shapes(S, T1, T2)
    z = strip_point(z)
    x, y = z.real, z.imag
    fac = generalized_polar(S, x)
    E1, E2 = _EigPowers(T1, mode), _EigPowers(T2, mode)
    right = fac.right @ E1.batch([-1.0 + z])[0]
    if mode == "sectorial" or E2.positive_definite():
        E2h = _EigPowers(adjoint(T2), mode)
        inner = adjoint(fac.left @ E2h.batch([-x])[0])
        left = E2.batch([-1j * y])[0] @ inner
    else:
        left = E2.batch([-z])[0] @ fac.left
    return left @ fac.isometry @ right


# --- similarity and sandwich ---------------------------------------------------------


def _hermitian_invertible(T, name="T"):
    T = as_square(T, name=name)
    if not is_hermitian(T):
        raise NotHermitian(f"{name} must be Hermitian")
    spec = hermitian_eig(T)
    check_invertible(spec)
    return T, spec


def verify_bounded_similarity(S, T, rel_tol: float = DEFAULT_REL_TOL) -> InequalityReport:
    """``||S|| <= ||T S T^-1||**(1/2) ||T S* T^-1||**(1/2) * C``.

    ``C = exp(2 pi)`` for indefinite ``T`` and ``C = 1`` for positive definite
    ``T``. Positive definite ``T`` also gets the side checks
    ``||S||**2 <= ||T S* T^-1|| ||T S T^-1||`` and ``||S* S|| <= ||T S* S T^-1||``.
    """
    T, spec = _hermitian_invertible(T)
    S = as_square(S, name="S")
    if S.shape != T.shape:
        raise DimensionMismatch("S and T must have the same dimension")
    Tinv = inverse(T)
    a = operator_norm(T @ S @ Tinv)
    b = operator_norm(T @ adjoint(S) @ Tinv)
    positive = bool(spec.eigenvalues[0] > PD_TOL * np.max(np.abs(spec.eigenvalues)))
    case = "similarity-positive" if positive else "similarity-indefinite"
    const = exponent_assembler(case)
    lhs = operator_norm(S)
    aux = {}
    if positive:
        sq = lhs * lhs
        aux["squared"] = (max(0.0, sq - a * b) / max(a * b, 1e-300), rel_tol)
        SS = adjoint(S) @ S
        tss = operator_norm(T @ SS @ Tinv)
        aux["s_star_s"] = (max(0.0, operator_norm(SS) - tss) / max(tss, 1e-300), rel_tol)
    return InequalityReport(
        theorem_id="bounded-similarity",
        lhs=lhs,
        rhs=const * math.sqrt(a * b),
        constant_factor=const,
        case=case,
        rel_tol=rel_tol,
        aux=aux,
    )


def verify_sandwich(S, T, p=math.inf, rel_tol: float = DEFAULT_REL_TOL) -> InequalityReport:
    """``||T^(-1/2) S T^(-1/2)||_p <= ||S T^-1||_p**(1/2) ||S* T^-1||_p**(1/2)``, ``T > 0``.

    The adjoint identity ``(T^(-1/2) S T^(-1/2))* = T^(-1/2) S* T^(-1/2)`` is
    recorded under ``aux['adjoint']`` with tolerance 1e-12 (relative).
    """
    p = exponent(p)
    T, spec = _hermitian_invertible(T)
    if not spec.eigenvalues[0] > PD_TOL * np.max(np.abs(spec.eigenvalues)):
        raise NotPositiveDefinite("T must be positive definite")
    S = as_square(S, name="S")
    if S.shape != T.shape:
        raise DimensionMismatch("S and T must have the same dimension")
    R = power_selfadjoint(spec, -0.5)
    M = R @ S @ R
    Madj = R @ adjoint(S) @ R
    defect = operator_norm(adjoint(M) - Madj) / max(operator_norm(M), 1e-300)
    Tinv = inverse(T)
    a = schatten_norm(S @ Tinv, p)
    b = schatten_norm(adjoint(S) @ Tinv, p)
    return InequalityReport(
        theorem_id="sandwich",
        lhs=schatten_norm(M, p),
        rhs=math.sqrt(a * b),
        z=0.5,
        p=p,
        case="real-both-positive",
        rel_tol=rel_tol,
        aux={"adjoint": (defect, 1e-12)},
    )


# --- strip verifier -----------------------------------------------------------------


def strip_rel_tol(T1, T2) -> float:
    """``1e-9 * sqrt(max(1, cond T1, cond T2))``."""
    return DEFAULT_REL_TOL * math.sqrt(max(1.0, condition_number(T1), condition_number(T2)))


@dataclass
class StripInstance:
    """One ``(S, T1, T2)`` triple, factored once and evaluated on many ``(z, p)``.

    ``case`` selects the constant menu in self-adjoint mode: one of
    ``'both-indefinite'``, ``'one-positive'``, ``'both-positive'``. ``None``
    takes the sharpest menu the instance qualifies for. Requesting a menu the
    instance does not qualify for raises :class:`NotPositiveDefinite`;
    requesting a weaker one is allowed (the weaker bound still holds).
    In sectorial mode ``bip`` may carry precomputed ``(BipEstimate, BipEstimate)``.
    """

    S: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    mode: str = "selfadjoint"
    case: str | None = None
    bip: tuple | None = None
    rel_tol: float | None = None

    def __post_init__(self):
        _check_mode(self.mode)
        self.S, self.T1, self.T2 = _shapes(self.S, self.T1, self.T2)
        self.E1 = _EigPowers(self.T1, self.mode)
        self.E2 = _EigPowers(self.T2, self.mode)
        if self.mode == "selfadjoint":
            pd = self.E1.positive_definite() + self.E2.positive_definite()
            qualified = SELFADJOINT_CASES[pd]
            if self.case is None:
                self.case = qualified
            elif self.case not in SELFADJOINT_CASES:
                raise ModeMismatch(f"case {self.case!r} is not a self-adjoint case")
            elif SELFADJOINT_CASES.index(self.case) > pd:
                raise NotPositiveDefinite(
                    f"case {self.case!r} needs {SELFADJOINT_CASES.index(self.case)} positive definite T_j, instance has {pd}"
                )
            self.N = 1.0
            self.theta = 0.0
            T2_for_dual = self.T2
        else:
            if self.case not in (None, "sectorial"):
                raise ModeMismatch(f"case {self.case!r} is not available in sectorial mode")
            self.case = "sectorial"
            if self.bip is None:
                b1 = bip_fit(self.T1)
                b2 = b1 if np.array_equal(self.T1, self.T2) else bip_fit(self.T2)
                self.bip = (b1, b2)
            b1, b2 = self.bip
            self.N = b1.N * b2.N
            self.theta = b1.theta + b2.theta
            T2_for_dual = adjoint(self.T2)
        if self.rel_tol is None:
            self.rel_tol = strip_rel_tol(self.T1, self.T2)
        self._sv_left = np.linalg.svd(self.S @ inverse(self.T1), compute_uv=False)
        self._sv_right = np.linalg.svd(adjoint(self.S) @ inverse(T2_for_dual), compute_uv=False)

    def endpoint_norms(self, p) -> tuple[float, float]:
        """``(||S T1^-1||_p, ||S* T2^-1||_p)``; ``T2*`` replaces ``T2`` in sectorial mode."""
        return (
            float(norm_from_singular_values(self._sv_left, p)),
            float(norm_from_singular_values(self._sv_right, p)),
        )

    def constant(self, z: complex, k: float | None):
        """``(factor, k_used, case_id)``."""
        if self.case == "both-positive":
            return 1.0, k, ("strip" if k is not None else "real") + "-both-positive"
        prefix = "sectorial-" if self.case == "sectorial" else ""
        if k is not None:
            cid = prefix + "strip" if prefix else "strip-" + self.case
            return self.N * exponent_assembler(cid, z, k, self.theta), float(k), cid
        a = _strip_quadratic(z)
        b = _INVERSE_COEFF[self.case](self.theta)
        if a == 0.0 and b == 0.0:
            k_star, value = math.inf, 0.0
        else:
            k_star, value = optimize_k(a, b)
        if z.imag == 0.0:
            cid = prefix + "real" if prefix else "real-" + self.case
            value = CASES[cid](z, None, self.theta)
        else:
            cid = prefix + "strip" if prefix else "strip-" + self.case
        return self.N * _exp(value), k_star, cid

    def conjugated(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        return self.E2.batch(-zs) @ self.S[None, :, :] @ self.E1.batch(-1.0 + zs)

    def evaluate(self, zs, ps=(math.inf,), k: float | None = None) -> list[InequalityReport]:
        """Reports ordered by ``z`` then ``p``."""
        if k is not None and not k > 0:
            raise InvalidInput(f"k must be positive, got {k}")
        zs = [strip_point(z) for z in zs]
        ps = [exponent(p) for p in ps]
        sv = np.linalg.svd(self.conjugated(zs), compute_uv=False)
        ends = {p: self.endpoint_norms(p) for p in ps}
        out = []
        for i, z in enumerate(zs):
            const, k_used, cid = self.constant(z, k)
            for p in ps:
                a, b = ends[p]
                rhs = const * a ** (1.0 - z.real) * b ** z.real
                out.append(
                    InequalityReport(
                        theorem_id="strip-sectorial" if self.mode == "sectorial" else "strip",
                        lhs=float(norm_from_singular_values(sv[i], p)),
                        rhs=rhs,
                        z=z,
                        constant_factor=const,
                        k_used=k_used,
                        p=p,
                        case=cid,
                        rel_tol=self.rel_tol,
                    )
                )
        return out


def verify_strip_bound(
    S,
    T1,
    T2,
    z,
    k: float | None = None,
    p=math.inf,
    mode: str = "selfadjoint",
    case: str | None = None,
    bip: Sequence[BipEstimate] | None = None,
    rel_tol: float | None = None,
    cross_check: bool = True,
) -> InequalityReport:
    """Check ``||T2**(-z) S T1**(-1+z)||_p <= C ||S T1^-1||_p**(1-x) ||S* T2^-1||_p**x``.

    Without ``k`` the constant is optimised over ``k``; on the real axis this
    gives the closed forms ``exp(c sqrt(x(1-x)))``. With ``cross_check`` the
    report carries ``aux['polar']``, the relative gap between the direct
    product and :func:`conjugated_operator_polar`.
    """
    inst = StripInstance(S, T1, T2, mode=mode, case=case, bip=None if bip is None else tuple(bip), rel_tol=rel_tol)
    z = strip_point(z)
    rep = inst.evaluate([z], [p], k)[0]
    if not cross_check:
        return rep
    direct = inst.conjugated([z])[0]
    other = conjugated_operator_polar(inst.S, inst.T1, inst.T2, z, mode)
    gap = operator_norm(direct - other) / max(operator_norm(direct), 1e-300)
    aux = dict(rep.aux)
    aux["polar"] = (gap, POLAR_CROSS_TOL)
    return InequalityReport(**{**rep.__dict__, "aux": aux})


# --- block embedding ----------------------------------------------------------------


def block_embed(S, T1, T2):
    """``(bold S, bold T)`` with ``bold S = [[0, 0], [S, 0]]`` and ``bold T = diag(T1, T2)``."""
    S, T1, T2 = _shapes(S, T1, T2)
    n1, n2 = T1.shape[0], T2.shape[0]
    n = n1 + n2
    bS = np.zeros((n, n), dtype=complex)
    bS[n1:, :n1] = S
    bT = np.zeros((n, n), dtype=complex)
    bT[:n1, :n1] = T1
    bT[n1:, n1:] = T2
    return bS, bT
