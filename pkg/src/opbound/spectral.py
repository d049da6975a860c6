"""Complex powers of invertible self-adjoint matrices.

For a real eigenvalue ``lam != 0`` the power is ``exp(z * log(lam))`` with the
logarithm ``log(lam) = ln|lam| + i*pi`` on the negative axis. This keeps
``z -> T**z`` entire, gives the group law ``T**a T**b = T**(a+b)`` and makes
``|lam**(i*y)| = exp(-pi*y)`` for ``lam < 0``, which is what drives the bound
``||T**(iy)|| <= max(1, exp(-pi*y))``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import NearSingular, ZeroBase
from .linalg import HermitianSpectrum, adjoint, hermitian_eig, operator_norm
from .report import InequalityReport

EIGEN_FLOOR = 1e-10


def scalar_power(lam: float, z: complex) -> complex:
    """``lam**z`` for real nonzero ``lam`` with argument ``+pi`` when ``lam < 0``."""
    lam = float(lam)
    if lam == 0.0:
        raise ZeroBase("power of zero is undefined")
    log_lam = math.log(abs(lam)) + (1j * math.pi if lam < 0 else 0.0)
    return cmath.exp(complex(z) * log_lam)


def branched_powers(lams, z) -> np.ndarray:
    """Vectorised :func:`scalar_power` over eigenvalues (and optionally over ``z``).

    With array ``z`` the result has shape ``z.shape + lams.shape``.
    """
    lams = np.asarray(lams, dtype=float)
    if np.any(lams == 0.0):
        raise ZeroBase("power of zero is undefined")
    log_lam = np.log(np.abs(lams)) + 1j * np.pi * (lams < 0)
    z = np.asarray(z, dtype=complex)
    return np.exp(z[..., None] * log_lam)


def _spectrum(T) -> HermitianSpectrum:
    return T if isinstance(T, HermitianSpectrum) else hermitian_eig(T)


def check_invertible(spec: HermitianSpectrum, floor: float = EIGEN_FLOOR) -> None:
    mags = np.abs(spec.eigenvalues)
    if mags.min() < floor * mags.max() or mags.max() == 0.0:
        raise NearSingular(
            f"smallest |eigenvalue| {mags.min():.3e} is below {floor:g} x largest {mags.max():.3e}"
        )


def power_selfadjoint(spec, z: complex, floor: float = EIGEN_FLOOR) -> np.ndarray:
    """``T**z = V diag(lam_j**z) V*`` for a self-adjoint invertible ``T``.

    ``spec`` may be a :class:`HermitianSpectrum` or the Hermitian matrix itself.
    """
    spec = _spectrum(spec)
    check_invertible(spec, floor)
    return spec.apply(branched_powers(spec.eigenvalues, z))


def power_selfadjoint_batch(spec, zs, floor: float = EIGEN_FLOOR) -> np.ndarray:
    """Stack of ``T**z`` for every ``z`` in ``zs``; shape ``(len(zs), n, n)``."""
    spec = _spectrum(spec)
    check_invertible(spec, floor)
    V = spec.eigenvectors
    vals = branched_powers(spec.eigenvalues, np.atleast_1d(zs))
    return (V[None, :, :] * vals[:, None, :]) @ adjoint(V)[None, :, :]


def imaginary_power_bound_check(spec, y: float, rel_tol: float = 1e-10) -> InequalityReport:
    """Check ``||T**(iy)|| <= max(1, exp(-pi*y))``.

    When ``T`` is positive definite the report also carries the unitarity
    defect ``||T**(iy) (T**(iy))* - I||`` under ``aux['unitarity']``.
    """
    spec = _spectrum(spec)
    y = float(y)
    P = power_selfadjoint(spec, 1j * y)
    lhs = operator_norm(P)
    rhs = max(1.0, math.exp(-math.pi * y))
    aux = {}
    if spec.eigenvalues[0] > 0:
        defect = operator_norm(P @ adjoint(P) - np.eye(spec.dim))
        aux["unitarity"] = (defect, 1e-11)
    return InequalityReport(
        theorem_id="imaginary-power",
        lhs=lhs,
        rhs=rhs,
        z=complex(0.0, y),
        constant_factor=rhs,
        rel_tol=rel_tol,
        case="positive" if spec.eigenvalues[0] > 0 else "indefinite",
        aux=aux,
    )
