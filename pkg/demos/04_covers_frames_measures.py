"""
Covers on finite spaces, frames and measures
============================================

Finite spaces and frames always have zero entropy, so the interesting
output is the table of subcover numbers ``N(U v phi^-1 U v ...)``.
The same table appears when the opens are read as an abstract frame.
Shift-invariant measures on words give genuinely positive values.
"""

from entrofunc import measure, topology

sp = topology.FiniteSpace(("a", "b", "c", "d"), (("a", "b"),))
phi = topology.ContinuousMap.from_mapping(sp, {"a": "a", "b": "a", "c": "a", "d": "c"})
cover = topology.cover_from_json(sp, [["a", "b"], ["b", "c"], ["b", "c", "d"]])
est, tables = topology.h_fin_top(phi, [cover], 6)
print("space: N table", tables[0], "value", est.value, "pair", est.certificates["pair"])
print("frame bridge:", topology.o_functor_check(phi, cover, 6).to_json())

h, fcover = topology.four_element_frame()
est, tables = topology.h_fr(h, [fcover], 6)
print("square frame with a <-> b:", tables[0], est.value)

for p in (("1/2", "1/2"), ("1/4", "3/4"), ("1/6", "1/3", "1/2")):
    s = measure.SymbolicSystem.bernoulli(p)
    print(f"Bernoulli{p}: h = {measure.h_mes(s, n_max=8).value}")

golden = measure.SymbolicSystem.markov(("2/3", "1/3"), (("1/2", "1/2"), ("1", "0")))
print("golden-mean Markov chain: h =", measure.h_mes(golden, n_max=8).value)
