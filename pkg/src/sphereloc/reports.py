"""Result records shared by the checking and searching routines."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class InequalityReport:
    """Evaluated two-sided comparison.

    For ``kind == "inequality"`` the margin is ``lhs - rhs`` and the
    inequality holds when ``margin >= -tolerance``.  For ``kind ==
    "agreement"`` the margin is a nonnegative discrepancy (absolute or
    relative, see ``params``) and the check holds when ``margin <= tolerance``.
    """

    lhs: float
    rhs: float
    margin: float
    tolerance: float
    params: dict = field(default_factory=dict)
    kind: str = "inequality"

    @property
    def holds(self) -> bool:
        if self.kind == "agreement":
            return self.margin <= self.tolerance
        return self.margin >= -self.tolerance

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs != 0 else math.inf

    def as_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "margin": self.margin,
                "tolerance": self.tolerance, "holds": self.holds,
                "kind": self.kind, "params": self.params}


@dataclass(frozen=True)
class Witness:
    """Parameters at which an inequality fails, with ``ratio = lhs / rhs < 1``."""

    params: dict
    ratio: float
    margin: float

    def as_dict(self):
        return {"params": self.params, "ratio": self.ratio, "margin": self.margin}


@dataclass(frozen=True)
class NotFound:
    """An inconclusive search: nothing met the acceptance threshold.

    ``best`` is the best objective value seen (minimum ratio for
    counterexample hunts, maximum margin for existence scans).
    """

    best: float
    evaluations: int
    best_params: dict = field(default_factory=dict)

    def as_dict(self):
        return {"found": False, "best": self.best, "evaluations": self.evaluations,
                "best_params": self.best_params}
