"""Polar and generalized polar decompositions, Heinz-type domination checks.

``S = |S*|**alpha U |S|**(1 - alpha)`` with ``U`` the partial isometry of the
ordinary polar decomposition ``S = U |S|``. Singular values below
``1e-12 * sigma_max`` are treated as zero so that ``U`` is a genuine partial
isometry (``U U* U = U``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadAlpha, DimensionMismatch, InvalidInput
from .linalg import (
    adjoint,
    as_matrix,
    as_square,
    hermitian_eig,
    inverse,
    operator_norm,
    psd_power,
    svd,
)
from .report import InequalityReport

RANK_CUTOFF = 1e-12


@dataclass(frozen=True)
class GeneralizedPolarFactors:
    alpha: float
    left: np.ndarray  # |S*|**alpha
    isometry: np.ndarray  # U_S
    right: np.ndarray  # |S|**(1 - alpha)

    def reconstruct(self) -> np.ndarray:
        return self.left @ self.isometry @ self.right


def _isometry_and_moduli(S: np.ndarray):
    dec = svd(S)
    r = dec.rank(RANK_CUTOFF)
    W, s, V = dec.U[:, :r], dec.singular_values[:r], dec.V[:, :r]
    U = W @ adjoint(V)
    abs_S = (V * s) @ adjoint(V)
    abs_S_adj = (W * s) @ adjoint(W)
    return U, abs_S, abs_S_adj


def polar(S):
    """Return ``(U_S, |S|)`` with ``S = U_S |S|`` and ``|S| = (S*S)**(1/2)``."""
    S = as_matrix(S, name="S")
    U, abs_S, _ = _isometry_and_moduli(S)
    return U, abs_S


def generalized_polar(S, alpha: float) -> GeneralizedPolarFactors:
    """Factor ``S = |S*|**alpha U_S |S|**(1 - alpha)`` for ``alpha`` in [0, 1].

    Zero exponents give the identity, so ``alpha = 0`` is ``(I, U_S, |S|)`` and
    ``alpha = 1`` is ``(|S*|, U_S, I)``. Rectangular ``S`` is accepted.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise BadAlpha(f"alpha must lie in [0, 1], got {alpha}")
    S = as_matrix(S, name="S")
    U, abs_S, abs_S_adj = _isometry_and_moduli(S)
    left = psd_power(abs_S_adj, alpha, RANK_CUTOFF)
    right = psd_power(abs_S, 1.0 - alpha, RANK_CUTOFF)
    return GeneralizedPolarFactors(alpha, left, U, right)


def relative_bound_constants(S, T, a: float | None = None, b: float | None = None):
    """Constants ``(a, b)`` with ``||S f||**2 <= a**2 ||T f||**2 + b**2 ||f||**2``.

    By default ``a = ||S T^-1||`` and ``b = 0``. User-supplied values are
    checked: the smallest eigenvalue of ``a**2 T*T + b**2 - S*S`` must not be
    below ``-1e-10 ||S||**2``.
    """
    S = as_matrix(S, name="S")
    T = as_square(T, name="T")
    if S.shape[1] != T.shape[0]:
        raise DimensionMismatch(f"S has {S.shape[1]} columns but T has dimension {T.shape[0]}")
    if a is None:
        a = operator_norm(S @ inverse(T))
    b = 0.0 if b is None else float(b)
    gap = a * a * (adjoint(T) @ T) + b * b * np.eye(T.shape[0]) - adjoint(S) @ S
    lowest = hermitian_eig(gap).eigenvalues[0]
    s_norm = operator_norm(S)
    if lowest < -1e-10 * max(s_norm * s_norm, 1e-300):
        raise InvalidInput(f"(a, b) = ({a}, {b}) do not dominate S: lowest eigenvalue {lowest:.3e}")
    return float(a), b


def _heinz_factor_norm(S, T, alpha, a, b):
    """``|| |S|**alpha (a**2 T*T + b**2)**(-alpha/2) ||``."""
    if alpha == 0.0:
        return 1.0
    if a == 0.0 and b == 0.0:
        # domination by zero forces S = 0
        return 0.0
    _, abs_S, _ = _isometry_and_moduli(S)
    dom = a * a * (adjoint(T) @ T) + b * b * np.eye(T.shape[0])
    return operator_norm(psd_power(abs_S, alpha) @ psd_power(dom, -alpha / 2.0))


def heinz_domination_check(S, T, alpha: float, rel_tol: float = 1e-9) -> InequalityReport:
    """Heinz inequality for ``S`` dominated by an invertible ``T``.

    LHS is the larger of ``|| |S|**alpha (a**2 T*T)**(-alpha/2) ||`` and the
    analogue for ``S*`` relative to ``T*``; RHS is 1.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise BadAlpha(f"alpha must lie in [0, 1], got {alpha}")
    S = as_matrix(S, name="S")
    T = as_square(T, name="T")
    a, b = relative_bound_constants(S, T)
    Sh, Th = adjoint(S), adjoint(T)
    a_adj, b_adj = relative_bound_constants(Sh, Th)
    direct = _heinz_factor_norm(S, T, alpha, a, b)
    dual = _heinz_factor_norm(Sh, Th, alpha, a_adj, b_adj)
    return InequalityReport(
        theorem_id="heinz",
        lhs=max(direct, dual),
        rhs=1.0,
        z=alpha,
        rel_tol=rel_tol,
        aux={},
    )
