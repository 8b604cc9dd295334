"""Finite abelian groups, their subgroup lattices and duality.

A group is ``Z_{d_1} x ... x Z_{d_k}``.  A subgroup ``N`` is stored through
the lattice ``L = {x in Z^k : x mod d in N}``, which contains ``d_i e_i``
for every ``i`` and so has full rank.  Its row-style Hermite normal form
(upper triangular, positive pivots, entries above each pivot reduced) is
the canonical key, and ``[G : N]`` is the product of the pivots.

Characters are identified with group elements through the symmetric
pairing ``<x, y> = sum x_i y_i / d_i mod 1``.  Under it the annihilator
lattice of ``L`` is spanned by the columns of ``D H^{-1}`` where ``H`` is
the HNF of ``L`` and ``D = diag(d)``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from entrofunc.core.estimate import EXACT, EntropyEstimate
from entrofunc.core.semigroup import Carrier, CarrierFlags, Flow
from entrofunc.errors import SpecError
from entrofunc.logvalue import LogValue

Vector = tuple[int, ...]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf_rows(rows: Iterable[Sequence[int]], moduli: Sequence[int]) -> tuple[Vector, ...]:
    """HNF of the lattice spanned by ``rows`` together with ``d_i e_i``.

    Each column starts from ``d_col e_col`` as its pivot.  Coordinates right
    of the current column are kept reduced mod ``d_j``, which is legal
    because ``d_j e_j`` is still unused at that point.
    """
    k = len(moduli)
    pool = [list(r) for r in rows]
    basis: list[list[int]] = []
    for col in range(k):
        piv = [0] * k
        piv[col] = moduli[col]
        rest = []
        for r in pool:
            for j in range(col + 1, k):
                r[j] %= moduli[j]
            if r[col] == 0:
                if any(r):
                    rest.append(r)
                continue
            a, b = piv[col], r[col]
            g, s, t = _ext_gcd(a, b)
            new = [s * x + t * y for x, y in zip(piv, r)]
            other = [(b // g) * x - (a // g) * y for x, y in zip(piv, r)]
            for j in range(col + 1, k):
                new[j] %= moduli[j]
                other[j] %= moduli[j]
            piv = new
            if any(other):
                rest.append(other)
        if piv[col] < 0:
            piv = [-x for x in piv]
            for j in range(col + 1, k):
                piv[j] %= moduli[j]
        basis.append(piv)
        pool = rest
    for i in range(k):
        p = basis[i][i]
        for j in range(i):
            q = basis[j][i] // p
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return tuple(tuple(r) for r in basis)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z_{d_1} x ... x Z_{d_k}``; the moduli need not form a divisibility chain."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(d) for d in self.moduli))
        if any(d < 2 for d in self.moduli):
            raise SpecError("cyclic factors must have order at least 2")

    @classmethod
    def parse(cls, spec: str) -> "FiniteAbelianGroup":
        spec = spec.strip()
        if spec in ("", "1", "0", "Z1"):
            return cls(())
        parts = spec.split("x")
        if not all(re.fullmatch(r"Z\d+", p) for p in parts):
            raise SpecError(f"bad group spec {spec!r}, expected e.g. 'Z4xZ2'")
        return cls(tuple(int(p[1:]) for p in parts))

    def __str__(self) -> str:
        return "x".join(f"Z{d}" for d in self.moduli) or "1"

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors ``d_1 | d_2 | ...`` of the isomorphism type."""
        primes: dict[int, list[int]] = {}
        for d in self.moduli:
            n, p = d, 2
            while p * p <= n:
                if n % p == 0:
                    e = 1
                    while n % p == 0:
                        n //= p
                        e *= p
                    primes.setdefault(p, []).append(e)
                p += 1
            if n > 1:
                primes.setdefault(n, []).append(n)
        width = max((len(v) for v in primes.values()), default=0)
        out = [1] * width
        for powers in primes.values():
            powers.sort(reverse=True)
            for i, q in enumerate(powers):
                out[width - 1 - i] *= q
        return tuple(out)

    def reduce(self, x: Sequence[int]) -> Vector:
        if len(x) != self.rank:
            raise SpecError(f"element {tuple(x)} has the wrong length for {self}")
        return tuple(int(a) % d for a, d in zip(x, self.moduli))

    def elements(self) -> Iterator[Vector]:
        return itertools.product(*(range(d) for d in self.moduli))

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        """``<x, y>`` as a fraction in ``[0, 1)``."""
        s = sum(Fraction(a * b, d) for a, b, d in zip(x, y, self.moduli))
        return s - math.floor(s)

    def zero(self) -> "Subgroup":
        return Subgroup.generated(self, [])

    def whole(self) -> "Subgroup":
        return Subgroup.generated(self, [tuple(1 if j == i else 0 for j in range(self.rank))
                                         for i in range(self.rank)])

    def is_elementary(self) -> int | None:
        """The prime ``p`` when every factor equals ``p``."""
        if not self.moduli or len(set(self.moduli)) != 1:
            return None
        p = self.moduli[0]
        if any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
            return None
        return p


@dataclass(frozen=True)
class Subgroup:
    group: FiniteAbelianGroup
    hnf: tuple[Vector, ...]

    @classmethod
    def generated(cls, group: FiniteAbelianGroup, gens: Iterable[Sequence[int]]) -> "Subgroup":
        gens = [group.reduce(g) for g in gens]
        return cls(group, hnf_rows(gens, group.moduli))

    @property
    def index(self) -> int:
        return math.prod(self.hnf[i][i] for i in range(self.group.rank))

    @property
    def order(self) -> int:
        return self.group.order // self.index

    def generators(self) -> list[Vector]:
        out = []
        for r in self.hnf:
            g = self.group.reduce(r)
            if any(g) and g not in out:
                out.append(g)
        return out

    def contains(self, x: Sequence[int]) -> bool:
        x = list(x)
        for i, row in enumerate(self.hnf):
            q, r = divmod(x[i], row[i])
            if r:
                return False
            if q:
                x = [a - q * b for a, b in zip(x, row)]
        return True

    def _same(self, other: "Subgroup") -> None:
        if other.group != self.group:
            raise SpecError(f"ambient mismatch: {self.group} vs {other.group}")

    def __add__(self, other: "Subgroup") -> "Subgroup":
        self._same(other)
        return Subgroup(self.group, hnf_rows(list(self.hnf) + list(other.hnf), self.group.moduli))

    def __and__(self, other: "Subgroup") -> "Subgroup":
        self._same(other)
        return (self.annihilator() + other.annihilator()).annihilator()

    def __le__(self, other: "Subgroup") -> bool:
        self._same(other)
        return all(other.contains(r) for r in self.hnf)

    def annihilator(self) -> "Subgroup":
        """``{y : <x, y> = 0 for all x in N}``, again a subgroup of ``G``."""
        g = self.group
        k = g.rank
        h = self.hnf
        # the annihilator lattice is spanned by the columns of D H^{-1}
        rows = []
        for j in range(k):
            sol = [Fraction(0)] * k
            for i in range(k - 1, -1, -1):
                s = Fraction(int(i == j)) - sum(h[i][t] * sol[t] for t in range(i + 1, k))
                sol[i] = s / h[i][i]
            col = [g.moduli[i] * sol[i] for i in range(k)]
            if any(v.denominator != 1 for v in col):
                raise AssertionError("annihilator lattice is not integral")
            rows.append([int(v) for v in col])
        return Subgroup(g, hnf_rows(rows, g.moduli))

    co_annihilator = annihilator

    def dim(self) -> int:
        """``log_p |N|`` in an elementary abelian ``p``-group."""
        p = self.group.is_elementary()
        if p is None:
            raise SpecError(f"{self.group} is not elementary abelian")
        n, e = self.order, 0
        while n > 1:
            n //= p
            e += 1
        return e

    def to_json(self) -> list:
        return [list(v) for v in self.generators()]


@dataclass(frozen=True)
class Endomorphism:
    group: FiniteAbelianGroup
    matrix: tuple[Vector, ...]

    def __post_init__(self):
        g = self.group
        k = g.rank
        m = tuple(tuple(int(a) for a in row) for row in self.matrix)
        if len(m) != k or any(len(r) != k for r in m):
            raise SpecError(f"endomorphism of {g} needs a {k}x{k} matrix")
        for i, di in enumerate(g.moduli):
            for j, dj in enumerate(g.moduli):
                if m[i][j] % (di // math.gcd(di, dj)):
                    raise SpecError(f"entry ({i},{j}) = {m[i][j]} does not define a map "
                                    f"Z{dj} -> Z{di}")
        m = tuple(tuple(a % di for a in row) for row, di in zip(m, g.moduli))
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, g: FiniteAbelianGroup) -> "Endomorphism":
        return cls(g, tuple(tuple(int(i == j) for j in range(g.rank)) for i in range(g.rank)))

    @classmethod
    def scalar(cls, g: FiniteAbelianGroup, m: int) -> "Endomorphism":
        return cls(g, tuple(tuple(m * int(i == j) for j in range(g.rank)) for i in range(g.rank)))

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.group.reduce([sum(a * b for a, b in zip(row, x)) for row in self.matrix])

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """``self o other``."""
        if other.group != self.group:
            raise SpecError("ambient mismatch")
        k = self.group.rank
        a, b = self.matrix, other.matrix
        return Endomorphism(self.group, tuple(
            tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(k)) for i in range(k)))

    def power(self, n: int) -> "Endomorphism":
        out = Endomorphism.identity(self.group)
        for _ in range(n):
            out = self.compose(out)
        return out

    def dual(self) -> "Endomorphism":
        """``B`` with ``<A x, y> = <x, B y>``: ``B_ji = A_ij d_j / d_i``."""
        d = self.group.moduli
        k = self.group.rank
        a = self.matrix
        return Endomorphism(self.group, tuple(
            tuple(a[i][j] * d[j] // d[i] for i in range(k)) for j in range(k)))

    def image(self, n: Subgroup) -> Subgroup:
        return Subgroup.generated(self.group, [self(r) for r in n.hnf])

    def preimage(self, n: Subgroup) -> Subgroup:
        """``phi^{-1}(N) = (phi^(N^perp))^perp``."""
        return self.dual().image(n.annihilator()).annihilator()

    def to_json(self) -> list:
        return [list(r) for r in self.matrix]


# trajectories of subgroups ----------------------------------------------------

def cotrajectory(phi: Endomorphism, n: Subgroup, n_max: int) -> list[Subgroup]:
    """``C_m = N ∩ phi^{-1}(N) ∩ ... ∩ phi^{-m+1}(N)`` for ``m = 1..n_max``."""
    out = [n]
    for _ in range(n_max - 1):
        out.append(n & phi.preimage(out[-1]))
    return out


def sum_trajectory(phi: Endomorphism, f: Subgroup, n_max: int) -> list[Subgroup]:
    """``T_m = F + phi(F) + ... + phi^{m-1}(F)`` for ``m = 1..n_max``."""
    out = [f]
    for _ in range(n_max - 1):
        out.append(f + phi.image(out[-1]))
    return out


@dataclass(frozen=True)
class BridgeVerdict:
    ok: bool
    lhs: list[int]
    rhs: list[int]
    first_failure: int | None = None
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"ok": self.ok, "lhs": self.lhs, "rhs": self.rhs, "first_failure": self.first_failure}


def bridge_check_weiss(phi: Endomorphism, n: Subgroup, n_max: int = 8) -> BridgeVerdict:
    """``[G : C_m(phi, N)] = |T_m(phi^, N^perp)|`` for ``m <= n_max``."""
    lhs = [c.index for c in cotrajectory(phi, n, n_max)]
    rhs = [t.order for t in sum_trajectory(phi.dual(), n.annihilator(), n_max)]
    bad = next((m for m, (a, b) in enumerate(zip(lhs, rhs), start=1) if a != b), None)
    return BridgeVerdict(bad is None, lhs, rhs, bad)


def subgroup_carrier(g: FiniteAbelianGroup) -> Carrier:
    """Subgroups under sum with norm ``log |F|``."""
    return Carrier(f"F({g})", lambda a, b: a + b, lambda a: LogValue.log(a.order),
                   CarrierFlags(subadditive=True, arithmetic=True, monotone_norm=True,
                                d_monotone=True, commutative=True, has_identity=True,
                                structured=True),
                   leq=lambda a, b: a <= b, identity=g.zero())


def cofinite_carrier(g: FiniteAbelianGroup) -> Carrier:
    """Subgroups under intersection with norm ``log [G : N]``."""
    return Carrier(f"C({g})", lambda a, b: a & b, lambda a: LogValue.log(a.index),
                   CarrierFlags(subadditive=True, arithmetic=True, monotone_norm=True,
                                d_monotone=True, commutative=True, has_identity=True,
                                structured=True),
                   leq=lambda a, b: b <= a, identity=g.whole())


def sub_flow(phi: Endomorphism) -> Flow:
    return Flow(subgroup_carrier(phi.group), phi.image, contractive=True, name="sub")


def cov_flow(phi: Endomorphism) -> Flow:
    return Flow(cofinite_carrier(phi.group), phi.preimage, contractive=True, name="cov")


def power_repeat(phi: Endomorphism, max_steps: int = 1 << 16) -> tuple[int, int]:
    """The first ``(k, m)`` with ``k > m >= 1`` and ``phi^k = phi^m``."""
    seen = {phi.matrix: 1}
    cur = phi
    for k in range(2, max_steps + 2):
        cur = phi.compose(cur)
        if cur.matrix in seen:
            return k, seen[cur.matrix]
        seen[cur.matrix] = k
    raise SpecError("power sequence did not repeat within the step budget")


def _zero_estimate(phi: Endomorphism, what: str) -> EntropyEstimate:
    k, m = power_repeat(phi)
    return EntropyEstimate((), EXACT, LogValue.zero(),
                           certificates={"rule": "quasi_periodic", "pair": [k, m], "entropy": what},
                           witness_restricted=False)


def ent_finite(phi: Endomorphism) -> EntropyEstimate:
    return _zero_estimate(phi, "ent")


def ent_star_finite(phi: Endomorphism) -> EntropyEstimate:
    return _zero_estimate(phi, "ent_star")


def ent_dim(phi: Endomorphism) -> EntropyEstimate:
    """Dimension entropy ``ent / log p`` on an elementary abelian ``p``-group."""
    p = phi.group.is_elementary()
    if p is None:
        raise SpecError(f"{phi.group} is not elementary abelian")
    est = _zero_estimate(phi, "ent_dim")
    certs = dict(est.certificates)
    certs["prime"] = p
    return EntropyEstimate((), EXACT, LogValue.count(0), certificates=certs,
                           witness_restricted=False)


def endomorphism_from_json(g: FiniteAbelianGroup, data) -> Endomorphism:
    if isinstance(data, int):
        return Endomorphism.scalar(g, data)
    try:
        return Endomorphism(g, tuple(tuple(int(a) for a in row) for row in data))
    except TypeError as exc:
        raise SpecError(f"bad endomorphism matrix: {exc}") from exc


def subgroup_from_json(g: FiniteAbelianGroup, data) -> Subgroup:
    try:
        return Subgroup.generated(g, [tuple(int(a) for a in v) for v in data])
    except TypeError as exc:
        raise SpecError(f"bad subgroup generators: {exc}") from exc


def all_subgroups(g: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup, found by closing ``{0}`` under sums with cyclic subgroups."""
    cyclic = {Subgroup.generated(g, [x]) for x in g.elements()}
    seen = {g.zero()}
    frontier = [g.zero()]
    while frontier:
        nxt = []
        for n in frontier:
            for c in cyclic:
                s = n + c
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return sorted(seen, key=lambda s: (s.order, s.hnf))
