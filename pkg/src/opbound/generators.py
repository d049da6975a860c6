"""Seeded random test matrices.

Classes: ``hermitian``, ``posdef``, ``indefinite``, ``sectorial-normal``,
``random``; plus ``banded-posdef`` (Hermitian, spectrum in a fixed band),
used where quadrature convergence must not depend on the conditioning of
the draw.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import unitary_group

from .errors import InvalidInput
from .linalg import adjoint

CLASSES = ("hermitian", "posdef", "indefinite", "sectorial-normal", "random", "banded-posdef")
MAX_DIM = 512
POSDEF_SHIFT = 0.1
INDEFINITE_GAP = 0.1


def ginibre(n: int, rng: np.random.Generator, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / math.sqrt(2.0)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.exp(2j * math.pi * rng.uniform(size=(1, 1)))
    return unitary_group.rvs(n, random_state=rng)


def hermitian(n, rng):
    G = ginibre(n, rng)
    return 0.5 * (G + adjoint(G))


def posdef(n, rng, eps: float = POSDEF_SHIFT):
    G = ginibre(n, rng)
    return adjoint(G) @ G + eps * np.eye(n)


def indefinite(n, rng, gap: float = INDEFINITE_GAP):
    """Hermitian with no eigenvalue in ``(-gap, gap)`` and both signs present when ``n >= 2``."""
    lam, V = np.linalg.eigh(hermitian(n, rng))
    lam = lam - np.median(lam)
    if n == 1:
        lam = np.array([rng.choice([-1.0, 1.0]) * max(abs(lam[0]), 1.0)])
    sign = np.where(lam < 0, -1.0, 1.0)
    if n >= 2 and (np.all(sign > 0) or np.all(sign < 0)):
        sign[0] = -sign[0]
    lam = sign * np.maximum(np.abs(lam), gap)
    M = (V * lam) @ adjoint(V)
    return 0.5 * (M + adjoint(M))


def sectorial_normal(n, rng, omega: float = math.pi / 3, r_range=(0.5, 2.0)):
    """``U diag(r e^{i phi}) U*`` with ``r`` in ``r_range`` and ``|phi| <= omega``."""
    r = rng.uniform(*r_range, size=n)
    phi = rng.uniform(-omega, omega, size=n)
    U = haar_unitary(n, rng)
    return (U * (r * np.exp(1j * phi))) @ adjoint(U)


def banded_posdef(n, rng, band=(1.0, 5.0)):
    lam = rng.uniform(*band, size=n)
    U = haar_unitary(n, rng)
    M = (U * lam) @ adjoint(U)
    return 0.5 * (M + adjoint(M))


_MAKERS = {
    "hermitian": hermitian,
    "posdef": posdef,
    "indefinite": indefinite,
    "sectorial-normal": sectorial_normal,
    "random": lambda n, rng: ginibre(n, rng),
    "banded-posdef": banded_posdef,
}


def generate(cls: str, dim: int, rng: np.random.Generator, **kwargs) -> np.ndarray:
    if cls not in _MAKERS:
        raise InvalidInput(f"unknown generator class {cls!r}; expected one of {CLASSES}")
    dim = int(dim)
    if not 1 <= dim <= MAX_DIM:
        raise InvalidInput(f"generator dimension must lie in [1, {MAX_DIM}], got {dim}")
    return _MAKERS[cls](dim, rng, **kwargs)


def parse_gen_spec(spec: str) -> list[tuple[str, int]]:
    """``'posdef:8,indefinite:4'`` -> ``[('posdef', 8), ('indefinite', 4)]``."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        cls, sep, dim = part.rpartition(":")
        if not sep or not cls:
            raise InvalidInput(f"generator spec must be class:dim, got {part!r}")
        try:
            d = int(dim)
        except ValueError:
            raise InvalidInput(f"generator dimension must be an integer, got {dim!r}") from None
        if cls not in _MAKERS:
            raise InvalidInput(f"unknown generator class {cls!r}")
        if not 1 <= d <= MAX_DIM:
            raise InvalidInput(f"generator dimension must lie in [1, {MAX_DIM}], got {d}")
        out.append((cls, d))
    return out
