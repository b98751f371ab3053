from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Solution:
    """Answer to a query.

    ``objective`` is a radius for the center problems and the diversity value
    for diversity queries. ``meta`` carries query diagnostics (coreset size
    and level, radius guess, outlier weight, bounds).
    """

    centers: list
    objective: float
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"centers": list(self.centers), "objective": self.objective, "meta": dict(self.meta)}
