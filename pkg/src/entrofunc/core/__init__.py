"""Normed semigroups, trajectories and the entropy estimator."""

from entrofunc.core.estimate import (EXACT, EXACT_HEURISTIC, FEKETE, NUMERIC, EntropyEstimate,
                                     Upgrade, declared_cofinal, estimate_entropy, fekete_bounds,
                                     left_entropy, scaling_upgrade, semigroup_entropy)
from entrofunc.core.laws import LawVerdict, check_law, quasi_periodic_zero
from entrofunc.core.semigroup import (Carrier, CarrierFlags, Flow, Limits, quasi_period, trajectory,
                                      trajectory_norms)

__all__ = [
    "EXACT", "EXACT_HEURISTIC", "FEKETE", "NUMERIC", "EntropyEstimate", "Upgrade",
    "declared_cofinal", "estimate_entropy", "fekete_bounds", "left_entropy", "scaling_upgrade",
    "semigroup_entropy", "LawVerdict", "check_law", "quasi_periodic_zero", "Carrier",
    "CarrierFlags", "Flow", "Limits", "quasi_period", "trajectory", "trajectory_norms",
]
