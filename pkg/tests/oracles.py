"""Brute-force oracles and random instance generators.

Nothing here calls the library's lattice, cover or trajectory code: groups
are enumerated element by element, covers by subsets, measures by words.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import mpmath

from entrofunc import abelian, selfmaps, topology


# finite abelian groups --------------------------------------------------------

def random_group(rng: random.Random, max_order: int, max_rank: int = 4) -> abelian.FiniteAbelianGroup:
    while True:
        rank = rng.randint(1, max_rank)
        moduli = [rng.randint(2, 16) for _ in range(rank)]
        if math.prod(moduli) <= max_order:
            return abelian.FiniteAbelianGroup(tuple(moduli))


def random_endomorphism(rng: random.Random, g: abelian.FiniteAbelianGroup) -> abelian.Endomorphism:
    d = g.moduli
    m = [[rng.randrange(d[i]) * (d[i] // math.gcd(d[i], d[j])) for j in range(g.rank)]
         for i in range(g.rank)]
    return abelian.Endomorphism(g, tuple(map(tuple, m)))


def random_elements(rng: random.Random, g: abelian.FiniteAbelianGroup, k: int) -> list[tuple]:
    return [tuple(rng.randrange(d) for d in g.moduli) for _ in range(k)]


def random_subgroup(rng: random.Random, g: abelian.FiniteAbelianGroup) -> abelian.Subgroup:
    return abelian.Subgroup.generated(g, random_elements(rng, g, rng.randint(0, 3)))


def bf_add(g, x, y):
    return tuple((a + b) % d for a, b, d in zip(x, y, g.moduli))


def bf_span(g, gens) -> frozenset:
    zero = tuple(0 for _ in g.moduli)
    seen = {zero}
    frontier = [zero]
    gens = [tuple(a % d for a, d in zip(v, g.moduli)) for v in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for v in gens:
                y = bf_add(g, x, v)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def bf_subgroup(n: abelian.Subgroup) -> frozenset:
    return frozenset(x for x in n.group.elements() if n.contains(x))


def bf_pairing_zero(g, x, y) -> bool:
    return sum(Fraction(a * b, d) for a, b, d in zip(x, y, g.moduli)).denominator == 1


def bf_annihilator(g, elems) -> frozenset:
    return frozenset(y for y in g.elements() if all(bf_pairing_zero(g, x, y) for x in elems))


def bf_apply(phi, x):
    g = phi.group
    return tuple(sum(a * b for a, b in zip(row, x)) % d for row, d in zip(phi.matrix, g.moduli))


def bf_cotrajectory_indices(phi, elems, n_max: int) -> list[int]:
    g = phi.group
    members = set(elems)
    out = []
    alive = set(members)
    cur = {x: x for x in alive}
    for _ in range(n_max):
        out.append(g.order // len(alive))
        cur = {x: bf_apply(phi, y) for x, y in cur.items() if x in alive}
        alive = {x for x, y in cur.items() if y in members}
    return out


def bf_trajectory_orders(psi, elems, n_max: int) -> list[int]:
    g = psi.group
    gens = list(elems)
    layer = list(elems)
    out = []
    for _ in range(n_max):
        out.append(len(bf_span(g, gens)))
        layer = [bf_apply(psi, x) for x in layer]
        gens += layer
    return out


# selfmap graphs ----------------------------------------------------------------

def random_tame_graph(rng: random.Random, max_components: int = 8) -> selfmaps.SelfmapGraph:
    """A finite-to-one graph with at most ``max_components`` core vertices, rays and anti-rays."""
    while True:
        n_core = rng.randint(0, 4)
        n_rays = rng.randint(0, 2)
        n_arays = rng.randint(0, 2)
        if 0 < n_core + n_rays + n_arays <= max_components and (n_core or n_rays):
            break
    names = [f"v{i}" for i in range(n_core)]
    targets = [("c", n) for n in names] + [("r", i, 0) for i in range(n_rays)]
    core = tuple((n, rng.choice(targets)) for n in names)
    antirays = tuple((i, rng.choice(targets)) for i in range(n_arays))
    return selfmaps.SelfmapGraph(core, tuple(range(n_rays)), antirays)


def bf_sigma_oplus_orders(g: selfmaps.SelfmapGraph, k: abelian.FiniteAbelianGroup, d, n_max: int
                          ) -> list[int]:
    """Orders of ``sum_{j<n} sigma^j(K^(D))`` by closing explicit functions under addition.

    ``sigma^j`` of the indicator of ``x`` times ``a`` is the indicator of the
    ``j``-fold preimage fiber of ``x`` times ``a``; fibers are found by
    checking ``step`` on candidate points.
    """
    d = list(d)
    # candidate points: walk back n_max steps from D by brute inversion of step
    universe = set(d)
    frontier = set(d)
    for _ in range(n_max):
        nxt = set()
        cands = _candidates(g, frontier)
        for y in cands:
            if g.step(y) in frontier:
                nxt.add(y)
        universe |= nxt
        frontier = nxt
    pts = sorted(universe, key=repr)
    pos = {x: i for i, x in enumerate(pts)}
    amb = abelian.FiniteAbelianGroup(tuple(m for _ in pts for m in k.moduli))
    r = k.rank
    out = []
    gens = []
    fibers = {x: {x} for x in d}
    for _ in range(n_max):
        for x, fib in fibers.items():
            for t in range(r):
                v = [0] * amb.rank
                for y in fib:
                    v[pos[y] * r + t] = 1
                gens.append(tuple(v))
        out.append(len(bf_span(amb, gens)))
        fibers = {x: {y for y in _candidates(g, fib) if g.step(y) in fib} for x, fib in fibers.items()}
    return out


def _candidates(g: selfmaps.SelfmapGraph, pts) -> set:
    """Every vertex that could map into ``pts``: core, anti-ray bases and neighbours by depth."""
    out = {("c", n) for n, _ in g.core}
    out |= {("a", i, 0) for i, _ in g.antirays}
    for h in pts:
        if h[0] in ("r", "a"):
            for dd in (h[2] - 1, h[2] + 1):
                if dd >= 0:
                    out.add((h[0], h[1], dd))
    return {h for h in out if g.contains(h)}


# topology -----------------------------------------------------------------------

def random_space(rng: random.Random, max_points: int = 5) -> topology.FiniteSpace:
    n = rng.randint(1, max_points)
    pts = [chr(ord("a") + i) for i in range(n)]
    pairs = [(a, b) for a in pts for b in pts if a != b and rng.random() < 0.25]
    return topology.FiniteSpace(tuple(pts), tuple(pairs))


def random_map(rng: random.Random, space: topology.FiniteSpace, tries: int = 200
               ) -> topology.ContinuousMap:
    n = len(space.points)
    for _ in range(tries):
        t = tuple(rng.randrange(n) for _ in range(n))
        try:
            return topology.ContinuousMap(space, t)
        except Exception:
            continue
    # constant maps are always continuous
    return topology.ContinuousMap(space, tuple([rng.randrange(n)] * n))


def random_open_cover(rng: random.Random, space: topology.FiniteSpace, size: int) -> tuple:
    opens = [m for m in space.opens() if m]
    members = [rng.choice(opens) for _ in range(size)]
    union = 0
    for m in members:
        union |= m
    if union != space.full:
        members.append(space.full & ~union | space.up_closure(space.full & ~union))
    return tuple(members)


def bf_min_cover(members, full: int) -> int:
    members = list(members)
    if full == 0:
        return 0
    for r in range(1, len(members) + 1):
        for combo in itertools.combinations(members, r):
            acc = 0
            for m in combo:
                acc |= m
            if acc & full == full:
                return r
    raise ValueError("not a cover")


def bf_cover_norms(phi: topology.ContinuousMap, cover, n_max: int) -> list[int]:
    """``N(U v phi^-1 U v ...)`` from the unreduced join, pulled back pointwise."""
    n = len(phi.space.points)
    full = (1 << n) - 1

    def pre(m):
        return sum(1 << i for i in range(n) if m >> phi.table[i] & 1)

    join = list(cover)
    layer = list(cover)
    out = [bf_min_cover(set(join), full)]
    for _ in range(n_max - 1):
        layer = [pre(m) for m in layer]
        join = list({a & b for a in join for b in layer})
        out.append(bf_min_cover([m for m in join if m], full))
    return out


# measures -----------------------------------------------------------------------

def bf_block_entropy(system, n: int, dps: int = 40):
    """``-sum mu(w) log mu(w)`` over all words of length ``n``, in high precision."""
    weights: dict[Fraction, int] = {}
    for w in itertools.product(range(system.alphabet), repeat=n):
        m = system.pi[w[0]]
        for a, b in zip(w, w[1:]):
            m *= system.P[a][b] if system.P is not None else system.pi[b]
        if m:
            weights[m] = weights.get(m, 0) + 1
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for m, k in weights.items():
            mm = mpmath.mpf(m.numerator) / m.denominator
            total -= k * mm * mpmath.log(mm)
        return total
