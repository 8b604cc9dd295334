"""
From selfmaps to generalized shifts
===================================

A finite-to-one selfmap is drawn as a finite core plus forward rays and
anti-rays.  Its set-theoretic entropies count those rays, and the shifts
it induces on ``K^X`` and ``K^(X)`` scale the counts by ``log |K|``.
"""

from entrofunc import abelian, selfmaps, shifts

pakex = selfmaps.pakex()
print("pakex: 0,1 -> 0 and n+2 -> n")
print("  |T*_n| from {0}:", selfmaps.trajectory_sizes(pakex, [("c", "0")], 6, contravariant=True))
print("  covariant  :", selfmaps.covariant_entropy(pakex).value)
print("  star       :", selfmaps.contravariant_entropy(pakex).value)
print("  star_p     :", selfmaps.contravariant_entropy(pakex, variant="star_p").value)

# two forward rays, then the shifts they induce over Z3
two = selfmaps.SelfmapGraph(rays=(0, 1))
z3 = abelian.FiniteAbelianGroup.parse("Z3")
tau = shifts.h_alg_tau(shifts.ShiftFlow(z3, two, "tau"))
sigma = shifts.h_top_sigma(shifts.ShiftFlow(z3, two, "sigma"))
print("two rays over Z3: h_alg(tau) =", tau.value, " h_top(sigma) =", sigma.value)

# sigma restricted to finitely supported functions needs explicit
# subgroup generation; the orders grow by a factor |K|^2 per step here
z2 = abelian.FiniteAbelianGroup.parse("Z2")
oplus = shifts.ShiftFlow(z2, pakex, "sigma_oplus")
print("sigma_oplus orders:", shifts.sigma_oplus_orders(oplus, [("c", "0")], 6))
print("h_alg(sigma_oplus) =", shifts.h_alg_sigma_oplus(oplus).value)

# On a finite set the dual of sigma is tau under the standard pairing.
lam = selfmaps.from_finite_map({"a": "b", "b": "b", "c": "a"})
print("sigma^ == tau on a 3-point map over Z4xZ2:",
      shifts.sigma_hat_equals_tau(lam, abelian.FiniteAbelianGroup.parse("Z4xZ2")).equal)
