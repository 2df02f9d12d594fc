"""
A weighted set of nodes in H^n
"""

import math
from typing import Optional, Sequence, Tuple

import numpy as np

from heisenlab import group
from heisenlab.utilities import errors
from heisenlab.utilities.constants import GroupPoint


class QuadratureRule:
    """Nodes (x, t) with weights approximating Haar measure on some region

    Deterministic rules have strata=None.  Monte Carlo rules label every node
    with its stratum; all nodes of a stratum share the same weight, which is
    what the standard error in `estimate` relies on.
    """

    def __init__(
        self,
        x: np.ndarray,
        t: np.ndarray,
        weights: np.ndarray,
        strata: Optional[np.ndarray] = None,
    ):
        self.x = np.asarray(x, dtype=float).reshape(-1, np.shape(x)[-1])
        self.t = np.asarray(t, dtype=float).reshape(-1)
        self.weights = np.asarray(weights, dtype=float).reshape(-1)
        if not (len(self.x) == len(self.t) == len(self.weights)):
            raise errors.ArgumentError(
                "Quadrature nodes and weights have different lengths"
            )
        self.strata = None if strata is None else np.asarray(strata).reshape(-1)

    @classmethod
    def empty(cls, n: int) -> "QuadratureRule":
        return cls(np.zeros((0, 2 * n)), np.zeros(0), np.zeros(0))

    @classmethod
    def concatenate(cls, rules: Sequence["QuadratureRule"]) -> "QuadratureRule":
        rules = list(rules)
        if len(rules) == 1:
            return rules[0]
        isStochastic = [rule.strata is not None for rule in rules]
        if any(isStochastic) and not all(isStochastic):
            raise errors.ArgumentError(
                "Cannot mix deterministic and Monte Carlo quadrature rules"
            )

        strata = None
        if all(isStochastic):
            # Relabel so strata of different rules stay distinct
            offset = 0
            relabelled = []
            for rule in rules:
                relabelled.append(rule.strata + offset)
                if len(rule.strata):
                    offset += int(rule.strata.max()) + 1
            strata = np.concatenate(relabelled)

        return cls(
            np.concatenate([rule.x for rule in rules]),
            np.concatenate([rule.t for rule in rules]),
            np.concatenate([rule.weights for rule in rules]),
            strata,
        )

    @property
    def n(self) -> int:
        return self.x.shape[-1] // 2

    @property
    def isStochastic(self) -> bool:
        return self.strata is not None

    def __len__(self):
        return len(self.weights)

    def points(self):
        return [GroupPoint.fromArrays(x, t) for x, t in zip(self.x, self.t)]

    def translated(self, center: GroupPoint) -> "QuadratureRule":
        """The rule pushed forward by left translation z -> center . z"""
        centerX, centerT = center.asArrays()
        x, t = group.mulArrays(centerX, centerT, self.x, self.t)
        return QuadratureRule(x, t, self.weights, self.strata)

    def reweighted(self, factors: np.ndarray) -> "QuadratureRule":
        return QuadratureRule(self.x, self.t, self.weights * factors, self.strata)

    def restricted(self, mask: np.ndarray) -> "QuadratureRule":
        mask = np.asarray(mask, dtype=bool)
        strata = None if self.strata is None else self.strata[mask]
        return QuadratureRule(self.x[mask], self.t[mask], self.weights[mask], strata)

    def estimate(self, values: np.ndarray) -> Tuple[float, float]:
        """Returns (integral, standard error); the error is zero for deterministic rules"""
        values = np.asarray(values, dtype=float).reshape(-1)
        contributions = self.weights * values
        total = float(np.sum(contributions))
        if self.strata is None or len(values) == 0:
            return total, 0.0

        variance = 0.0
        for stratum in np.unique(self.strata):
            inStratum = contributions[self.strata == stratum]
            if len(inStratum) > 1:
                # stratum estimate is n * mean(w g); its variance n * var(w g)
                variance += len(inStratum) * float(np.var(inStratum, ddof=1))
        return total, math.sqrt(variance)
