"""Sectorial matrices: sector checks, fractional and imaginary powers, BIP constants.

Three independent routes to powers of a matrix with spectrum off ``(-inf, 0]``:

* :func:`principal_power` diagonalises ``T`` and applies the principal branch
  ``lam**w = exp(w Log lam)`` eigenvalue by eigenvalue;
* :func:`dunford_power` evaluates the resolvent integral
  ``T**(-z) = (2 pi i)^-1 \\oint zeta**(-z) (zeta - T)^-1 dzeta`` with the
  trapezoid rule on a circle in the right half-plane;
* :func:`imaginary_power` evaluates
  ``T**(is) = sinh(pi s)/(pi s) \\int_0^inf t**(is) (T + t)^-2 T dt``
  with the trapezoid rule in ``u = log t``.

The quadratures never look at eigenvectors, so they can be checked against
the eigen route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    BranchCutCrossed,
    ContourTouchesSpectrum,
    InvalidInput,
    NegativeRealSpectrum,
    NotNormal,
    QuadratureNotConverged,
    Singular,
    SpectrumOutsideSector,
)
from .linalg import adjoint, as_square, inverse, is_normal, operator_norm
from .report import InequalityReport

ARG_TOL = 1e-10
NEGATIVE_AXIS_MARGIN = 1e-9
LOG_AXIS_PADDING = 40.0
DEFAULT_DUNFORD_NODES = 128
DEFAULT_IMAGINARY_NODES = 400
MAX_NODES = 4096
CONVERGENCE_TOL = 1e-7


class SectorialityAdvisory(UserWarning):
    """The returned sector angle is a sampled estimate, not an exact value."""


@dataclass(frozen=True)
class Sector:
    """Open sector ``{zeta != 0 : |arg zeta| < omega}``; ``omega = 0`` is ``(0, inf)``."""

    omega: float

    def __post_init__(self):
        if not 0.0 <= self.omega < math.pi:
            raise InvalidInput(f"sector angle must lie in [0, pi), got {self.omega}")

    def contains(self, zeta: complex) -> bool:
        zeta = complex(zeta)
        if zeta == 0:
            return False
        if self.omega == 0.0:
            return zeta.imag == 0.0 and zeta.real > 0.0
        return abs(np.angle(zeta)) < self.omega

    def closure_contains(self, zeta: complex, tol: float = ARG_TOL) -> bool:
        zeta = complex(zeta)
        return zeta == 0 or abs(np.angle(zeta)) <= self.omega + tol


@dataclass(frozen=True)
class SectorialProfile:
    spectrum: np.ndarray
    omega_min_spectral: float
    resolvent_samples: list = field(default_factory=list)  # (zeta, ||zeta (T - zeta)^-1||)
    resolvent_sup_per_angle: dict = field(default_factory=dict)
    omega_estimate: float = 0.0


@dataclass(frozen=True)
class BipEstimate:
    """Constants with ``||T**(is)|| <= N exp(theta |s|)`` on the sampled ``s``."""

    N: float
    theta: float
    sample_points: list
    max_residual: float

    def bound(self, s) -> np.ndarray:
        return self.N * np.exp(self.theta * np.abs(s))


@dataclass(frozen=True)
class ContourSpec:
    center: float
    radius: float
    nodes: int = DEFAULT_DUNFORD_NODES

    def validate(self, spectrum) -> None:
        if self.radius <= 0 or self.nodes < 1:
            raise InvalidInput("contour radius and node count must be positive")
        if self.center - self.radius <= 0:
            raise BranchCutCrossed(
                f"circle (center {self.center}, radius {self.radius}) reaches the branch cut (-inf, 0]"
            )
        dist = np.abs(np.asarray(spectrum) - self.center)
        if np.any(dist >= self.radius):
            raise ContourTouchesSpectrum("contour does not enclose the spectrum")
        if np.min(self.radius - dist) < 1e-8 * self.radius:
            raise ContourTouchesSpectrum("contour passes too close to the spectrum")


def eigenvalues(T) -> np.ndarray:
    return np.linalg.eigvals(as_square(T, name="T"))


def spectral_angle(spectrum) -> float:
    """``max |arg lam|`` over the spectrum."""
    return float(np.max(np.abs(np.angle(np.asarray(spectrum)))))


def check_off_negative_axis(spectrum, scale: float | None = None) -> None:
    spectrum = np.asarray(spectrum)
    mags = np.abs(spectrum)
    if scale is None:
        scale = mags.max()
    if mags.min() <= 1e-14 * max(scale, np.finfo(float).tiny):
        raise Singular("matrix is numerically singular")
    if spectral_angle(spectrum) >= math.pi - NEGATIVE_AXIS_MARGIN:
        raise NegativeRealSpectrum("spectrum meets the negative real axis")


def _resolvent_norms(T: np.ndarray, zetas: np.ndarray) -> np.ndarray:
    """``||zeta (T - zeta)^-1||`` for each ``zeta``."""
    n = T.shape[0]
    eye = np.eye(n)
    shifted = T[None, :, :] - zetas[:, None, None] * eye
    R = np.linalg.solve(shifted, np.broadcast_to(eye, shifted.shape))
    return np.abs(zetas) * np.linalg.svd(R, compute_uv=False)[:, 0]


def _ray_points(angle: float, radii: np.ndarray) -> np.ndarray:
    return np.concatenate([radii * np.exp(1j * angle), radii * np.exp(-1j * angle)])


def sector_membership(
    T,
    omega: float | Sector,
    sample_count: int = 64,
    seed: int = 0,
    deltas=(0.05, 0.1, 0.2, 0.4, 0.8),
) -> SectorialProfile:
    """Check spectrum inclusion in the closed sector and sample resolvent bounds.

    For each ``omega' = omega + delta < pi`` the function
    ``zeta -> ||zeta (T - zeta)^-1||`` is sampled on the two boundary rays of
    the sector of angle ``omega'`` (its supremum over the exterior is attained
    there by the maximum principle). Radii are log-spaced over
    ``[1e-3, 1e3] * ||T||`` and jittered with ``seed``.
    """
    sector = omega if isinstance(omega, Sector) else Sector(float(omega))
    T = as_square(T, name="T")
    spec = eigenvalues(T)
    norm_T = operator_norm(T)
    if np.min(np.abs(spec)) <= 1e-14 * norm_T:
        raise Singular("matrix is numerically singular")
    angle = spectral_angle(spec)
    if angle > sector.omega + ARG_TOL:
        raise SpectrumOutsideSector(f"spectral angle {angle:.6f} exceeds sector angle {sector.omega:.6f}")
    rng = np.random.default_rng(seed)
    edges = np.linspace(math.log(1e-3 * norm_T), math.log(1e3 * norm_T), sample_count + 1)
    radii = np.exp(edges[:-1] + rng.uniform(0.0, 1.0, sample_count) * np.diff(edges))
    samples, sups = [], {}
    for delta in deltas:
        w = sector.omega + delta
        if w >= math.pi:
            continue
        zetas = _ray_points(w, radii)
        vals = _resolvent_norms(T, zetas)
        samples.extend(zip(zetas.tolist(), vals.tolist()))
        sups[w] = float(vals.max())
    return SectorialProfile(
        spectrum=spec,
        omega_min_spectral=angle,
        resolvent_samples=samples,
        resolvent_sup_per_angle=sups,
        omega_estimate=max(sector.omega, angle),
    )


def _sampled_resolvent_sup(T, angle, radii) -> float:
    return float(_resolvent_norms(T, _ray_points(angle, radii)).max())


def sectoriality_angle(T, resolvent_cap: float = 1e4, sample_count: int = 200, tol: float = 1e-6) -> float:
    """Angle of sectoriality.

    Normal matrices get the exact value ``max |arg lam|``. For non-normal
    input the smallest angle whose sampled boundary resolvent bound stays
    below ``resolvent_cap`` is located by bisection and a
    :class:`SectorialityAdvisory` warning is issued; that number is advisory
    only.
    """
    T = as_square(T, name="T")
    spec = eigenvalues(T)
    check_off_negative_axis(spec)
    angle = spectral_angle(spec)
    if is_normal(T):
        return angle
    norm_T = operator_norm(T)
    radii = np.exp(np.linspace(math.log(1e-3 * norm_T), math.log(1e3 * norm_T), sample_count))
    lo, hi = angle, math.pi - 1e-9
    if _sampled_resolvent_sup(T, hi, radii) > resolvent_cap:
        estimate = hi
    else:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _sampled_resolvent_sup(T, mid, radii) <= resolvent_cap:
                hi = mid
            else:
                lo = mid
        estimate = hi
    warnings.warn(
        f"non-normal matrix: sector angle {estimate:.6f} is a sampled estimate "
        f"(resolvent cap {resolvent_cap:g}, {sample_count} radii per ray)",
        SectorialityAdvisory,
        stacklevel=2,
    )
    return estimate


# --- powers ------------------------------------------------------------------


def principal_power(T, w) -> np.ndarray:
    """``T**w`` through an eigendecomposition, principal branch.

    Assumes ``T`` is diagonalisable; accuracy degrades with the condition
    number of the eigenvector matrix.
    """
    return principal_power_batch(T, [w])[0]


def principal_power_batch(T, ws) -> np.ndarray:
    T = as_square(T, name="T")
    lam, V = np.linalg.eig(T)
    check_off_negative_axis(lam)
    Vinv = np.linalg.solve(V, np.eye(T.shape[0]))
    vals = np.exp(np.asarray(ws, dtype=complex)[:, None] * np.log(lam)[None, :])
    return (V[None, :, :] * vals[:, None, :]) @ Vinv[None, :, :]


def default_contour(spectrum, nodes: int = DEFAULT_DUNFORD_NODES) -> ContourSpec:
    """Circle in the right half-plane around ``spectrum`` with fast trapezoid convergence.

    The trapezoid error decays like ``q**nodes`` with
    ``q = max(R_in / r, r / c)`` for center ``c``, radius ``r`` and
    ``R_in = max |lam - c|``; ``r = sqrt(R_in c)`` balances the two and the
    center is chosen to minimise ``R_in / c``.
    """
    lam = np.asarray(spectrum, dtype=complex)
    if np.any(lam.real <= 0):
        raise BranchCutCrossed("no circle around the spectrum avoids (-inf, 0]: spectrum leaves Re > 0")
    scale = float(np.max(np.abs(lam)))

    def ratio(c):
        return np.max(np.abs(lam - c)) / c

    lo = float(np.min(lam.real)) * 0.5
    hi = scale * 1e6
    res = minimize_scalar(lambda lc: ratio(math.exp(lc)), bounds=(math.log(lo), math.log(hi)), method="bounded")
    c = math.exp(res.x)
    r_in = float(np.max(np.abs(lam - c)))
    if r_in == 0.0:
        r = 0.5 * c
    else:
        r = math.sqrt(r_in * c)
    return ContourSpec(center=c, radius=r, nodes=nodes)


def _dunford_partial_sums(T, zs, contour: ContourSpec, total_nodes, k_start, step, count):
    """Sum over nodes ``k_start, k_start + step, ...`` of an equispaced ``total_nodes`` grid, for every ``z``."""
    n = T.shape[0]
    eye = np.eye(n)
    phi = 2.0 * math.pi * (k_start + step * np.arange(count)) / total_nodes
    unit = np.exp(1j * phi)
    zeta = contour.center + contour.radius * unit
    R = np.linalg.solve(zeta[:, None, None] * eye - T[None, :, :], np.broadcast_to(eye, (count, n, n)))
    weights = np.exp(-np.outer(zs, np.log(zeta))) * (contour.radius * unit)[None, :]
    return np.einsum("zk,kij->zij", weights, R)


def dunford_powers(
    T,
    zs,
    contour: ContourSpec | None = None,
    *,
    adaptive: bool = True,
    tol: float = CONVERGENCE_TOL,
    max_nodes: int = MAX_NODES,
) -> np.ndarray:
    """Stack of ``T**(-z)`` for every ``z`` in ``zs`` from the resolvent integral on a circle.

    The resolvents on the contour are shared by all ``z``. With ``adaptive``
    the node count is doubled from ``contour.nodes`` until two successive
    results agree to ``tol`` (relative, worst ``z``) and the finer one is
    returned; :class:`QuadratureNotConverged` is raised past ``max_nodes``.
    """
    T = as_square(T, name="T")
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    if np.any(zs.real <= 0):
        raise InvalidInput("resolvent integral needs Re z > 0")
    spec = eigenvalues(T)
    check_off_negative_axis(spec)
    if contour is None:
        contour = default_contour(spec)
    contour.validate(spec)
    N = int(contour.nodes)
    total = _dunford_partial_sums(T, zs, contour, N, 0, 1, N)
    current = total / N
    if not adaptive:
        return current
    while 2 * N <= max_nodes:
        # the odd nodes of the doubled grid are the only new resolvents
        total = total + _dunford_partial_sums(T, zs, contour, 2 * N, 1, 2, N)
        N *= 2
        finer = total / N
        diff = np.max(np.abs(finer - current), axis=(1, 2))
        scale = np.maximum(np.max(np.abs(finer), axis=(1, 2)), np.finfo(float).tiny)
        if np.all(diff <= tol * scale):
            return finer
        current = finer
    raise QuadratureNotConverged(f"resolvent integral did not settle to {tol:g} within {max_nodes} nodes")


def dunford_power(T, z: complex, contour: ContourSpec | None = None, **kwargs) -> np.ndarray:
    """``T**(-z)`` for ``Re z > 0``; see :func:`dunford_powers`."""
    return dunford_powers(T, [complex(z)], contour, **kwargs)[0]


def _log_axis(T: np.ndarray):
    """Truncation window in ``u = log t`` covering the spectral radii with padding."""
    r_max = operator_norm(T)
    r_min = 1.0 / operator_norm(inverse(T))
    return math.log(r_min) - LOG_AXIS_PADDING, math.log(r_max) + LOG_AXIS_PADDING


def _amann_sums(T, s, nodes, lo, hi):
    """Trapezoid sums with ``2 nodes - 1`` points and with every other point."""
    n = T.shape[0]
    m = 2 * nodes - 1
    u = np.linspace(lo, hi, m)
    h = u[1] - u[0]
    t = np.exp(u)
    shifted = T[None, :, :] + t[:, None, None] * np.eye(n)
    X = np.linalg.solve(shifted, np.broadcast_to(T, shifted.shape))
    Y = np.linalg.solve(shifted, X)
    phase = np.exp(1j * np.outer(s, u)) * t[None, :]
    fine_w = np.full(m, h)
    fine_w[[0, -1]] *= 0.5
    coarse_w = np.zeros(m)
    coarse_w[::2] = 2.0 * h
    coarse_w[[0, -1]] *= 0.5
    fine = np.einsum("sk,kij->sij", phase * fine_w, Y)
    coarse = np.einsum("sk,kij->sij", phase * coarse_w, Y)
    return fine, coarse


def imaginary_powers(
    T,
    s_values,
    quadrature_nodes: int = DEFAULT_IMAGINARY_NODES,
    tol: float = CONVERGENCE_TOL,
    max_nodes: int = MAX_NODES,
) -> np.ndarray:
    """Stack of ``T**(is)`` for every ``s`` in ``s_values`` (integral route).

    Each call solves ``(T + t)^-2 T`` once per quadrature node and reuses it
    for all ``s``. ``s = 0`` gives the identity exactly.
    """
    T = as_square(T, name="T")
    check_off_negative_axis(eigenvalues(T))
    s = np.atleast_1d(np.asarray(s_values, dtype=float))
    n = T.shape[0]
    out = np.empty((s.size, n, n), dtype=complex)
    zero = s == 0.0
    out[zero] = np.eye(n)
    s_nz = s[~zero]
    if s_nz.size == 0:
        return out
    prefactor = np.sinh(math.pi * s_nz) / (math.pi * s_nz)
    lo, hi = _log_axis(T)
    nodes = int(quadrature_nodes)
    while True:
        fine, coarse = _amann_sums(T, s_nz, nodes, lo, hi)
        fine *= prefactor[:, None, None]
        coarse *= prefactor[:, None, None]
        scale = np.maximum(np.max(np.abs(fine), axis=(1, 2)), 1e-300)
        err = np.max(np.max(np.abs(fine - coarse), axis=(1, 2)) / scale)
        if err <= tol:
            out[~zero] = fine
            return out
        if 2 * nodes > max_nodes:
            raise QuadratureNotConverged(
                f"imaginary power integral did not settle to {tol:g} within {max_nodes} nodes (last change {err:.2e})"
            )
        nodes *= 2


def imaginary_power(T, s: float, quadrature_nodes: int = DEFAULT_IMAGINARY_NODES) -> np.ndarray:
    """``T**(is)`` from the half-line integral; see :func:`imaginary_powers`."""
    return imaginary_powers(T, [float(s)], quadrature_nodes)[0]


def bip_fit(T, s_max: float = 4.0, sample_count: int = 41, quadrature_nodes: int = DEFAULT_IMAGINARY_NODES) -> BipEstimate:
    """Fit ``N``, ``theta`` in ``||T**(is)|| <= N exp(theta |s|)`` on ``[-s_max, s_max]``.

    ``theta`` is the steepest slope of ``log ||T**(is)||`` between two samples
    on the same side of 0 (a one-sided envelope, not a regression); ``N`` is
    then the smallest constant, at least 1, that makes the bound hold at
    every sample.
    """
    if sample_count < 3 or s_max <= 0:
        raise InvalidInput("need s_max > 0 and at least three samples")
    s = np.linspace(-s_max, s_max, sample_count)
    if not np.any(s == 0.0):
        s = np.sort(np.append(s, 0.0))
    P = imaginary_powers(T, s, quadrature_nodes)
    norms = np.linalg.svd(P, compute_uv=False)[:, 0]
    logs = np.log(norms)
    theta = 0.0
    for side in (s >= 0, s <= 0):
        a = np.abs(s[side])
        l = logs[side]
        order = np.argsort(a)
        a, l = a[order], l[order]
        da = a[None, :] - a[:, None]
        dl = l[None, :] - l[:, None]
        mask = da > 0
        if np.any(mask):
            theta = max(theta, float(np.max(dl[mask] / da[mask])))
    N = max(1.0, float(np.max(norms * np.exp(-theta * np.abs(s)))))
    bound = N * np.exp(theta * np.abs(s))
    residual = float(np.max(norms / bound - 1.0))
    return BipEstimate(N=N, theta=theta, sample_points=list(zip(s.tolist(), norms.tolist())), max_residual=residual)


def mcintosh_check(T, bip: BipEstimate | None = None) -> InequalityReport:
    """Compare the fitted group type ``theta`` with the sector angle ``omega``.

    Only normal matrices are accepted, where both are computable sharply. The
    report has ``lhs = |theta - omega|`` and ``rhs = 1e-5 + 1e-3 omega``.
    """
    T = as_square(T, name="T")
    if not is_normal(T):
        raise NotNormal("McIntosh comparison is only sharp for normal matrices")
    omega = sectoriality_angle(T)
    if bip is None:
        bip = bip_fit(T)
    return InequalityReport(
        theorem_id="mcintosh",
        lhs=abs(bip.theta - omega),
        rhs=1e-5 + 1e-3 * omega,
        constant_factor=bip.N,
        rel_tol=0.0,
        aux={},
        case=f"theta={bip.theta:.12g} omega={omega:.12g}",
    )
