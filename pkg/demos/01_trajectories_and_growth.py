"""
Trajectory norms and what the estimator makes of them
=====================================================

A flow is a normed semigroup with an endomorphism.  Its entropy at a
witness ``x`` is the growth rate of ``v(x * phi(x) * ... * phi^{n-1}(x))``.
This walk-through prints a few of those sequences and the rule the
estimator used to classify each one.
"""

from entrofunc.core import carriers
from entrofunc.core.estimate import left_entropy, semigroup_entropy
from entrofunc.core.semigroup import trajectory

# Multiplication by 3 on (N, +) with the norm log(1 + x).
# The products are 1 + 3 + 9 + ..., so c_n = log((3^n + 1) / 2).
rho3 = carriers.multiply_flow(carriers.naturals("log"), 3)
est, _ = semigroup_entropy(rho3, [1], n_max=24)
print("rho_3:", est.value, est.classification, est.certificates["rule"])
for n, v in enumerate(est.c[:5], start=1):
    print(f"  c_{n} = {v}")

# The same map with the linear norm grows without bound.
lin = carriers.multiply_flow(carriers.naturals("linear"), 3)
est, _ = semigroup_entropy(lin, [1], n_max=24)
print("rho_3, linear norm:", est.value, est.certificates["rule"])

# Words under the letter shift: right and left trajectories differ.
shift = carriers.index_shift_flow(carriers.free_words("runs"))
print("right trajectory of (0,):", trajectory(shift, (0,), 4)[-1])
print("left trajectory of (0,): ", trajectory(shift, (0,), 4, side="left")[-1])
right, _ = semigroup_entropy(shift, [(0,)], 24)
left, _ = left_entropy(shift, [(0,)], 24)
print("h =", right.value, " left h =", left.value)

# Bernoulli shifts over small normed monoids.  The letter witnesses
# dominate everything once the upgrade is supplied, so the value is no
# longer witness-restricted.
for m in carriers.sample_monoids():
    est, _ = semigroup_entropy(carriers.right_bernoulli_flow(m), carriers.letter_witnesses(m),
                               n_max=16, upgrade=carriers.bernoulli_upgrade(m))
    print(f"beta over {m.name}: {est.value}  (restricted: {est.witness_restricted})")
