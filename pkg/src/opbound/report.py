from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_REL_TOL = 1e-9


@dataclass(frozen=True)
class InequalityReport:
    """One evaluated instance of an inequality ``lhs <= rhs``.

    ``passed`` is decided by ``lhs <= rhs * (1 + rel_tol)`` alone. Side
    conditions a verifier checks along the way (identities, unitarity defects)
    go into ``aux`` as ``name -> (observed error, tolerance)`` and are folded
    into :attr:`ok`.
    """

    theorem_id: str
    lhs: float
    rhs: float
    z: complex | float | None = None
    constant_factor: float = 1.0
    k_used: float | None = None
    p: float | None = None
    case: str | None = None
    rel_tol: float = DEFAULT_REL_TOL
    aux: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if math.isnan(self.lhs) or math.isnan(self.rhs):
            return False
        return self.lhs <= self.rhs * (1.0 + self.rel_tol)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def aux_ok(self) -> bool:
        return all(err <= tol for err, tol in self.aux.values())

    @property
    def ok(self) -> bool:
        return self.passed and self.aux_ok

    @property
    def ratio(self) -> float:
        """``lhs / rhs``; how close the instance comes to the bound."""
        if self.rhs == 0.0:
            return 0.0 if self.lhs == 0.0 else math.inf
        return self.lhs / self.rhs
