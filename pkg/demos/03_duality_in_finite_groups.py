"""
Cotrajectories and their annihilators
=====================================

For an endomorphism ``phi`` of a finite abelian group and a subgroup
``N``, the index of ``N n phi^-1 N n ... n phi^-(n-1) N`` equals the
order of the sum ``N^perp + phi^(N^perp) + ...`` built from the dual map.
Both sides are computed here in the subgroup lattice.
"""

import math
import random

from entrofunc import abelian

g = abelian.FiniteAbelianGroup.parse("Z4xZ2")
phi = abelian.Endomorphism(g, ((1, 0), (1, 1)))
n = abelian.Subgroup.generated(g, [(1, 0)])
v = abelian.bridge_check_weiss(phi, n, 6)
print("Z4xZ2, N = <(1,0)>")
print("  indices of cotrajectory:", v.lhs)
print("  orders of dual trajectory:", v.rhs)
print("  N^perp generated by", n.annihilator().generators())

# a bigger sweep over random groups, maps and subgroups
rng = random.Random(0)
failures = 0
for _ in range(200):
    moduli = tuple(rng.choice([2, 3, 4, 6, 8, 9]) for _ in range(rng.randint(1, 3)))
    g = abelian.FiniteAbelianGroup(moduli)
    # entry (i, j) maps Z_{d_j} to Z_{d_i}, so it must be a multiple of d_i / gcd
    m = tuple(tuple(rng.randrange(moduli[i]) * (moduli[i] // math.gcd(moduli[i], moduli[j]))
                    for j in range(len(moduli))) for i in range(len(moduli)))
    psi = abelian.Endomorphism(g, m)
    sub = abelian.Subgroup.generated(g, [tuple(rng.randrange(d) for d in moduli)])
    failures += not abelian.bridge_check_weiss(psi, sub, 8).ok
print("random sweep failures:", failures)

# every finite flow has zero entropy, certified by phi^k = phi^m
k, m = abelian.power_repeat(phi)
print(f"phi^{k} == phi^{m}; ent =", abelian.ent_finite(phi).value)
