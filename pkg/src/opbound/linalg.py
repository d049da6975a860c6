"""Dense complex matrix helpers shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. The
factorizations are thin wrappers over LAPACK (through numpy/scipy) that add
input validation, the package's exception types and the ordering conventions
used downstream.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, InvalidInput, NoConvergence, NotHermitian, Singular

HERMITIAN_TOL = 1e-10
PIVOT_TOL = 1e-14


def as_matrix(A, *, name: str = "matrix") -> np.ndarray:
    """Return ``A`` as a finite two-dimensional complex array (copied)."""
    M = np.array(A, dtype=complex, copy=True)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise InvalidInput(f"{name} must be a non-empty 2-d array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInput(f"{name} has non-finite entries")
    return M


def as_square(A, *, name: str = "matrix") -> np.ndarray:
    M = as_matrix(A, name=name)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {M.shape}")
    return M


def adjoint(A) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(A)).T


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigen-data ``A = V diag(eigenvalues) V*`` of a self-adjoint matrix.

    ``eigenvalues`` are sorted ascending and ``eigenvectors`` holds the
    orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def apply(self, values) -> np.ndarray:
        """Return ``V diag(values) V*`` for per-eigenvalue ``values``."""
        V = self.eigenvectors
        return (V * np.asarray(values)) @ adjoint(V)

    def reconstruct(self) -> np.ndarray:
        return self.apply(self.eigenvalues)

    def is_positive_definite(self, rel_tol: float = 1e-10) -> bool:
        scale = np.max(np.abs(self.eigenvalues))
        return bool(self.eigenvalues[0] > rel_tol * scale)


@dataclass(frozen=True)
class SingularDecomposition:
    """Thin SVD ``A = U diag(singular_values) V*``; values sorted descending."""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.singular_values) @ adjoint(self.V)

    def rank(self, rel_tol: float = 1e-12) -> int:
        s = self.singular_values
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.count_nonzero(s > rel_tol * s[0]))


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    scale = np.linalg.norm(A, 2)
    return bool(np.linalg.norm(A - adjoint(A), 2) <= tol * scale)


def is_normal(A, tol: float = 1e-10) -> bool:
    A = np.asarray(A)
    AhA = adjoint(A) @ A
    scale = np.linalg.norm(AhA, 2)
    return bool(np.linalg.norm(A @ adjoint(A) - AhA, 2) <= tol * max(scale, np.finfo(float).tiny))


def hermitian_eig(A) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix.

    Raises :class:`NotHermitian` when ``||A - A*|| > 1e-10 ||A||`` and
    :class:`NoConvergence` if LAPACK's divide-and-conquer solver fails.
    """
    A = as_square(A)
    scale = np.linalg.norm(A, 2)
    defect = np.linalg.norm(A - adjoint(A), 2)
    if defect > HERMITIAN_TOL * scale:
        raise NotHermitian(f"matrix is not Hermitian (||A - A*|| = {defect:.3e}, ||A|| = {scale:.3e})")
    try:
        w, V = np.linalg.eigh(0.5 * (A + adjoint(A)))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return HermitianSpectrum(w, V)


def svd(A) -> SingularDecomposition:
    A = as_matrix(A)
    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return SingularDecomposition(U, s, adjoint(Vh))


def singular_values(A) -> np.ndarray:
    try:
        return np.linalg.svd(np.asarray(A), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def operator_norm(A) -> float:
    """Largest singular value (spectral norm)."""
    return float(singular_values(A)[0])


def solve(A, B) -> np.ndarray:
    """Solve ``A X = B`` by LU with partial pivoting.

    Raises :class:`Singular` when a pivot falls below ``1e-14 ||A||``.
    """
    A = as_square(A, name="A")
    B = np.asarray(B, dtype=complex)
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    if B.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"B has {B.shape[0]} rows, A has dimension {A.shape[0]}")
    scale = operator_norm(A)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as Singular
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or pivots.min() < PIVOT_TOL * scale:
        raise Singular(f"matrix is numerically singular (min pivot {pivots.min():.3e}, ||A|| = {scale:.3e})")
    X = scipy.linalg.lu_solve((lu, piv), B, check_finite=False)
    return X[:, 0] if vector else X


def inverse(A) -> np.ndarray:
    A = as_square(A)
    return solve(A, np.eye(A.shape[0]))


def condition_number(A) -> float:
    s = singular_values(A)
    return float(np.inf) if s[-1] == 0.0 else float(s[0] / s[-1])


def psd_power(A, alpha: float, rel_cutoff: float = 1e-12) -> np.ndarray:
    """``A**alpha`` for a positive semidefinite Hermitian ``A``.

    Eigenvalues below ``rel_cutoff * max eigenvalue`` (including negative
    round-off) are treated as exact zeros, and ``0**0`` is taken to be 1 so
    that ``alpha = 0`` yields the identity.
    """
    spec = hermitian_eig(A)
    lam = spec.eigenvalues
    top = max(float(np.max(lam)), 0.0)
    lam = np.where(lam > rel_cutoff * top, lam, 0.0)
    if alpha == 0:
        vals = np.ones_like(lam)
    else:
        with np.errstate(divide="ignore"):
            vals = np.where(lam > 0, np.abs(lam) ** alpha, 0.0)
    return spec.apply(vals)
