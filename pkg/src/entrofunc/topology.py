"""Finite Alexandrov spaces, open covers and finite frames.

Subsets of a finite space are bitmasks over the point indices.  The opens
are the up-sets of the specialization preorder.  A cover is a tuple of
opens and keeps duplicates and the empty set; :func:`cover_join` follows
that convention.  Trajectory computations, however, only need the
minimum-subcover number ``N``, which is unchanged when a cover is replaced
by its distinct maximal members, so trajectories work with that reduced
form to keep joins from growing as ``|U|^n``.

A finite frame is stored as the lattice of down-sets of its poset of
join-irreducibles (Birkhoff), again as bitmasks, so frame covers reuse
the same subcover routine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from entrofunc.core.estimate import DEFAULT_WINDOW, EXACT, EntropyEstimate, estimate_entropy
from entrofunc.core.semigroup import CarrierFlags
from entrofunc.errors import ContractivityError, ResourceLimitError, SpecError
from entrofunc.logvalue import LogValue

MAX_COVER = 24

Mask = int


def _bits(mask: Mask) -> Iterable[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


# minimum subcover ------------------------------------------------------------

def reduce_cover(cover: Iterable[Mask]) -> tuple[Mask, ...]:
    """Distinct members not strictly inside another member, sorted."""
    members = sorted(set(cover), key=lambda m: (-bin(m).count("1"), m))
    out: list[Mask] = []
    for m in members:
        if m and not any(m | o == o for o in out):
            out.append(m)
    return tuple(sorted(out))


def min_cover_size(members: Sequence[Mask], full: Mask, cap: int = MAX_COVER) -> int:
    """Least number of ``members`` whose union is ``full``.

    Greedy gives the first bound; a depth-first search that always branches
    on the lowest uncovered element then closes the gap.  Exponential in
    the worst case, hence the cap on the reduced family.
    """
    union = 0
    for m in members:
        union |= m
    if union & full != full:
        raise SpecError("family does not cover the space")
    if full == 0:
        return 0
    ms = reduce_cover(m & full for m in members)
    if len(ms) > cap:
        raise ResourceLimitError(f"cover has {len(ms)} essential members, cap is {cap}")

    best = 0
    covered = 0
    while covered != full:
        pick = max(ms, key=lambda m: bin(m & ~covered).count("1"))
        covered |= pick
        best += 1
    biggest = max(bin(m).count("1") for m in ms)
    containing = {}
    for i in _bits(full):
        containing[i] = sorted((m for m in ms if m >> i & 1),
                               key=lambda m: -bin(m).count("1"))

    def search(covered: Mask, depth: int) -> None:
        nonlocal best
        if covered == full:
            best = min(best, depth)
            return
        missing = bin(full & ~covered).count("1")
        if depth + -(-missing // biggest) >= best:
            return
        low = (full & ~covered) & -(full & ~covered)
        i = low.bit_length() - 1
        for m in containing[i]:
            search(covered | m, depth + 1)

    search(0, 0)
    return best


# spaces ------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteSpace:
    points: tuple[str, ...]
    order_pairs: tuple[tuple[str, str], ...] = ()
    up: tuple[Mask, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        pts = tuple(str(p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise SpecError("duplicate points")
        object.__setattr__(self, "points", pts)
        pos = {p: i for i, p in enumerate(pts)}
        n = len(pts)
        leq = [[i == j for j in range(n)] for i in range(n)]
        for a, b in self.order_pairs:
            if a not in pos or b not in pos:
                raise SpecError(f"order pair ({a!r}, {b!r}) names an unknown point")
            leq[pos[a]][pos[b]] = True
        for k in range(n):
            for i in range(n):
                if leq[i][k]:
                    for j in range(n):
                        if leq[k][j]:
                            leq[i][j] = True
        up = tuple(sum(1 << j for j in range(n) if leq[i][j]) for i in range(n))
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "order_pairs",
                           tuple((str(a), str(b)) for a, b in self.order_pairs))

    @property
    def full(self) -> Mask:
        return (1 << len(self.points)) - 1

    def index(self, p: str) -> int:
        try:
            return self.points.index(str(p))
        except ValueError:
            raise SpecError(f"unknown point {p!r}") from None

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def mask(self, pts: Iterable[str]) -> Mask:
        m = 0
        for p in pts:
            m |= 1 << self.index(p)
        return m

    def names(self, mask: Mask) -> list[str]:
        return [self.points[i] for i in _bits(mask)]

    def is_open(self, mask: Mask) -> bool:
        return all(self.up[i] | mask == mask for i in _bits(mask))

    def up_closure(self, mask: Mask) -> Mask:
        out = 0
        for i in _bits(mask):
            out |= self.up[i]
        return out

    def opens(self) -> list[Mask]:
        return [m for m in range(self.full + 1) if self.is_open(m)]

    def to_json(self) -> dict:
        return {"points": list(self.points), "order_pairs": [list(p) for p in self.order_pairs]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSpace":
        if not isinstance(data, dict) or set(data) - {"points", "order_pairs"}:
            raise SpecError("space needs exactly points and order_pairs")
        return cls(tuple(data["points"]), tuple(tuple(p) for p in data.get("order_pairs", [])))

    @classmethod
    def discrete(cls, n: int) -> "FiniteSpace":
        return cls(tuple(str(i) for i in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteSpace":
        pts = tuple(str(i) for i in range(n))
        return cls(pts, tuple((a, b) for a in pts for b in pts if a != b))


@dataclass(frozen=True)
class ContinuousMap:
    space: FiniteSpace
    table: tuple[int, ...]

    def __post_init__(self):
        s = self.space
        n = len(s.points)
        if len(self.table) != n or any(not 0 <= t < n for t in self.table):
            raise SpecError("map table must send every point to a point")
        for i in range(n):
            for j in _bits(s.up[i]):
                if not s.leq(self.table[i], self.table[j]):
                    raise SpecError(f"map is not continuous: {s.points[i]} <= {s.points[j]} "
                                    f"but images are not ordered")

    @classmethod
    def from_mapping(cls, space: FiniteSpace, mapping: Mapping[str, str]) -> "ContinuousMap":
        if set(map(str, mapping)) != set(space.points):
            raise SpecError("map must be defined on every point")
        return cls(space, tuple(space.index(mapping[p]) for p in space.points))

    def preimage(self, mask: Mask) -> Mask:
        out = 0
        for i, t in enumerate(self.table):
            if mask >> t & 1:
                out |= 1 << i
        return out

    def compose(self, other: "ContinuousMap") -> "ContinuousMap":
        return ContinuousMap(self.space, tuple(self.table[t] for t in other.table))

    def to_json(self) -> dict:
        return {p: self.space.points[t] for p, t in zip(self.space.points, self.table)}


def identity_map(space: FiniteSpace) -> ContinuousMap:
    return ContinuousMap(space, tuple(range(len(space.points))))


def continuous_selfmaps(space: FiniteSpace) -> list[ContinuousMap]:
    n = len(space.points)
    out = []
    for t in itertools.product(range(n), repeat=n):
        try:
            out.append(ContinuousMap(space, t))
        except SpecError:
            pass
    return out


# covers -------------------------------------------------------------------------

def make_cover(space: FiniteSpace, members: Iterable[Mask]) -> tuple[Mask, ...]:
    cover = tuple(members)
    for m in cover:
        if not space.is_open(m):
            raise SpecError(f"{space.names(m)} is not open")
    union = 0
    for m in cover:
        union |= m
    if union != space.full:
        raise SpecError("family does not cover the space")
    return cover


def cover_from_json(space: FiniteSpace, data) -> tuple[Mask, ...]:
    return make_cover(space, [space.mask(u) for u in data])


def min_subcover(space: FiniteSpace, cover: Sequence[Mask]) -> int:
    return min_cover_size(cover, space.full)


def cover_join(u: Sequence[Mask], v: Sequence[Mask]) -> tuple[Mask, ...]:
    """All pairwise intersections, duplicates kept."""
    return tuple(a & b for a in u for b in v)


def refines(v: Sequence[Mask], u: Sequence[Mask]) -> bool:
    """Every member of ``v`` lies inside some member of ``u``."""
    return all(any(a | b == b for b in u) for a in v)


def equivalent(u: Sequence[Mask], v: Sequence[Mask]) -> bool:
    return refines(u, v) and refines(v, u)


def pullback(phi: ContinuousMap, cover: Sequence[Mask]) -> tuple[Mask, ...]:
    return tuple(phi.preimage(m) for m in cover)


def cover_trajectory(phi: ContinuousMap, cover: Sequence[Mask], n_max: int) -> list[tuple[Mask, ...]]:
    """Reduced forms of ``U v phi^{-1}(U) v ... v phi^{-n+1}(U)``."""
    base = reduce_cover(cover)
    out = [base]
    pulled = base
    for _ in range(n_max - 1):
        pulled = reduce_cover(pullback(phi, pulled))
        out.append(reduce_cover(cover_join(out[-1], pulled)))
    return out


def cover_norms(phi: ContinuousMap, cover: Sequence[Mask], n_max: int) -> list[int]:
    return [min_cover_size(t, phi.space.full) for t in cover_trajectory(phi, cover, n_max)]


def map_repeat(table: Sequence[int]) -> tuple[int, int]:
    """First ``(k, m)``, ``k > m >= 1``, with ``f^k = f^m`` for a finite map."""
    seen = {tuple(table): 1}
    cur = tuple(table)
    k = 1
    while True:
        k += 1
        cur = tuple(table[t] for t in cur)
        if cur in seen:
            return k, seen[cur]
        seen[cur] = k


_COVER_FLAGS = CarrierFlags(subadditive=True, arithmetic=True, monotone_norm=True,
                            commutative=True, has_identity=True, structured=True)


def _finite_estimate(norms: Sequence[int], table: Sequence[int], window: int,
                     witness) -> EntropyEstimate:
    c = [LogValue.log(n) for n in norms]
    est = estimate_entropy(c, _COVER_FLAGS, window, witness=witness)
    k, m = map_repeat(table)
    certs = {"rule": "quasi_periodic", "pair": [k, m], "slope_rule": est.certificates.get("rule"),
             "bound": "c_n <= log |X|"}
    return EntropyEstimate(tuple(c), EXACT, LogValue.zero(), witness, window, est.window_slope,
                           est.residual, certs, witness_restricted=False)


def h_fin_top(phi: ContinuousMap, covers: Sequence[Sequence[Mask]], n_max: int = 16,
              window: int = DEFAULT_WINDOW) -> tuple[EntropyEstimate, list[list[int]]]:
    """Finite-cover entropy with the per-cover table of ``N(T_n)``.

    On a finite space the map is quasi-periodic and every ``c_n`` is at
    most ``log |X|``, so the value is certified to be 0; the table is the
    real output.
    """
    if not covers:
        raise SpecError("at least one cover is required")
    tables = [cover_norms(phi, u, n_max) for u in covers]
    best = max(range(len(tables)), key=lambda i: tables[i][-1])
    est = _finite_estimate(tables[best], phi.table, window, [phi.space.names(m) for m in covers[best]])
    return est, tables


# products -----------------------------------------------------------------------

def product_space(x: FiniteSpace, y: FiniteSpace) -> FiniteSpace:
    """``X x Y`` with the product preorder; point ``(i, j)`` has index ``i * |Y| + j``."""
    pts = tuple(f"{a},{b}" for a in x.points for b in y.points)
    pairs = []
    for i, a in enumerate(x.points):
        for j, b in enumerate(y.points):
            for i2 in _bits(x.up[i]):
                for j2 in _bits(y.up[j]):
                    if (i2, j2) != (i, j):
                        pairs.append((f"{a},{b}", f"{x.points[i2]},{y.points[j2]}"))
    return FiniteSpace(pts, tuple(pairs))


def product_map(phi: ContinuousMap, psi: ContinuousMap) -> ContinuousMap:
    ny = len(psi.space.points)
    table = tuple(phi.table[i] * ny + psi.table[j]
                  for i in range(len(phi.space.points)) for j in range(ny))
    return ContinuousMap(product_space(phi.space, psi.space), table)


def product_cover(x: FiniteSpace, y: FiniteSpace, u: Sequence[Mask], v: Sequence[Mask]
                  ) -> tuple[Mask, ...]:
    ny = len(y.points)
    return tuple(sum(1 << (i * ny + j) for i in _bits(a) for j in _bits(b)) for a in u for b in v)


@dataclass(frozen=True)
class AdditionEvidence:
    """Per-step numbers for ``phi x psi`` next to those of the factors.

    Whether the weak addition formula holds for this entropy is not known,
    so a run is recorded as evidence on one instance, never as a proof.
    """

    product: list[int]
    factors: list[tuple[int, int]]
    lhs: LogValue
    rhs: LogValue

    @property
    def consistent(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {"label": "evidence", "product": self.product, "factors": [list(f) for f in self.factors],
                "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(), "consistent": self.consistent}


def weak_addition_evidence(phi: ContinuousMap, psi: ContinuousMap, u: Sequence[Mask],
                           v: Sequence[Mask], n_max: int = 6) -> AdditionEvidence:
    """``h(phi x psi, U x V)`` against ``h(phi, U) + h(psi, V)`` with the tables behind them."""
    prod = product_map(phi, psi)
    w = product_cover(phi.space, psi.space, u, v)
    lhs, (pt,) = h_fin_top(prod, [w], n_max)
    a, (at,) = h_fin_top(phi, [u], n_max)
    b, (bt,) = h_fin_top(psi, [v], n_max)
    return AdditionEvidence(pt, list(zip(at, bt)), lhs.value, a.value + b.value)


# T0 reflection ------------------------------------------------------------------

@dataclass(frozen=True)
class Reflection:
    space: FiniteSpace
    quotient: FiniteSpace
    classes: tuple[int, ...]   # point index -> class index

    def push(self, mask: Mask) -> Mask:
        out = 0
        for i in _bits(mask):
            out |= 1 << self.classes[i]
        return out

    def induced(self, phi: ContinuousMap) -> ContinuousMap:
        rep = {}
        for i, c in enumerate(self.classes):
            rep.setdefault(c, i)
        table = tuple(self.classes[phi.table[rep[c]]] for c in range(len(self.quotient.points)))
        return ContinuousMap(self.quotient, table)


def t0_reflection(space: FiniteSpace) -> Reflection:
    n = len(space.points)
    classes = [-1] * n
    reps: list[int] = []
    for i in range(n):
        for c, r in enumerate(reps):
            if space.leq(i, r) and space.leq(r, i):
                classes[i] = c
                break
        else:
            classes[i] = len(reps)
            reps.append(i)
    names = tuple("/".join(space.points[j] for j in range(n) if classes[j] == c)
                  for c in range(len(reps)))
    pairs = tuple((names[classes[i]], names[classes[j]])
                  for i in range(n) for j in _bits(space.up[i]) if classes[i] != classes[j])
    return Reflection(space, FiniteSpace(names, tuple(sorted(set(pairs)))), tuple(classes))


@dataclass(frozen=True)
class BridgeSequences:
    ok: bool
    lhs: list[int]
    rhs: list[int]
    first_failure: int | None

    def to_json(self) -> dict:
        return {"ok": self.ok, "lhs": self.lhs, "rhs": self.rhs, "first_failure": self.first_failure}


def _compare(lhs: list[int], rhs: list[int]) -> BridgeSequences:
    bad = next((n for n, (a, b) in enumerate(zip(lhs, rhs), start=1) if a != b), None)
    return BridgeSequences(bad is None, lhs, rhs, bad)


def reflection_bridge_check(phi: ContinuousMap, cover: Sequence[Mask], n_max: int = 6
                            ) -> BridgeSequences:
    """Per-step ``N`` of cover trajectories on ``X`` and on its T0 reflection."""
    r = t0_reflection(phi.space)
    psi = r.induced(phi)
    return _compare(cover_norms(phi, cover, n_max),
                    cover_norms(psi, [r.push(m) for m in cover], n_max))


def closed_lift(space: FiniteSpace, closed: Mask, cover: Sequence[Mask]) -> tuple[Mask, ...]:
    """An open cover of ``X`` whose trace on the closed set ``C`` is ``cover``.

    Each relatively open ``V`` becomes ``up(V) u (X minus C)``; the trace of
    ``up(V)`` on ``C`` is ``V`` because ``C`` is a down-set.
    """
    if space.is_open(closed ^ space.full) is False:
        raise SpecError("subset is not closed")
    rest = space.full & ~closed
    return tuple(space.up_closure(v) | rest for v in cover)


# frames -------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteFrame:
    """Down-sets of a finite poset ``J`` of join-irreducibles.

    ``below[j]`` is the mask of ``{i : i <= j}``.  Elements are masks of
    down-sets, join is union and meet is intersection.
    """

    below: tuple[Mask, ...]
    labels: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return len(self.below)

    @property
    def top(self) -> Mask:
        return (1 << self.size) - 1

    def is_element(self, a: Mask) -> bool:
        return all(self.below[j] | a == a for j in _bits(a))

    def elements(self) -> list[Mask]:
        return [a for a in range(self.top + 1) if self.is_element(a)]

    def to_json(self) -> dict:
        return {"below": [[i for i in _bits(b)] for b in self.below], "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteFrame":
        below = data["below"]
        n = len(below)
        masks = []
        for j, b in enumerate(below):
            m = 1 << j
            for i in b:
                if not 0 <= i < n:
                    raise SpecError("join-irreducible index out of range")
                m |= 1 << i
            masks.append(m)
        # transitive closure
        changed = True
        while changed:
            changed = False
            for j in range(n):
                m = masks[j]
                for i in _bits(m):
                    m |= masks[i]
                if m != masks[j]:
                    masks[j] = m
                    changed = True
        for i in range(n):
            for j in range(n):
                if i != j and masks[i] >> j & 1 and masks[j] >> i & 1:
                    raise SpecError("join-irreducibles must form a partial order")
        return cls(tuple(masks), tuple(data.get("labels", [])))


@dataclass(frozen=True)
class FrameHom:
    """A frame endomorphism given by the images of the join-irreducibles."""

    frame: FiniteFrame
    images: tuple[Mask, ...]

    def __post_init__(self):
        f = self.frame
        if len(self.images) != f.size or not all(f.is_element(a) for a in self.images):
            raise SpecError("images must be frame elements, one per join-irreducible")
        els = f.elements()
        if self(f.top) != f.top:
            raise SpecError("frame map must preserve the top")
        for a in els:
            for b in els:
                if self(a & b) != self(a) & self(b):
                    raise SpecError("frame map must preserve binary meets")

    def __call__(self, a: Mask) -> Mask:
        out = 0
        for j in _bits(a):
            out |= self.images[j]
        return out

    def to_json(self) -> list:
        return [[i for i in _bits(a)] for a in self.images]


def to_frame(space: FiniteSpace) -> tuple[FiniteFrame, list[Mask]]:
    """The frame of opens with its join-irreducibles, the distinct sets ``up(x)``.

    Returns the frame and, per join-irreducible, the open set it stands for.
    """
    irr = sorted(set(space.up), key=lambda m: (bin(m).count("1"), m))
    below = []
    for a in irr:
        # up(y) <= up(x) as opens, i.e. contained
        below.append(sum(1 << i for i, b in enumerate(irr) if b | a == a))
    labels = tuple("up(" + ",".join(space.names(a)) + ")" for a in irr)
    return FiniteFrame(tuple(below), labels), irr


def open_to_element(irr: Sequence[Mask], u: Mask) -> Mask:
    return sum(1 << i for i, a in enumerate(irr) if a | u == u)


def frame_hom_of(phi: ContinuousMap) -> tuple[FrameHom, list[Mask]]:
    """``O(phi)``: the preimage map on opens, restricted to join-irreducibles."""
    frame, irr = to_frame(phi.space)
    images = tuple(open_to_element(irr, phi.preimage(a)) for a in irr)
    return FrameHom(frame, images), irr


def frame_cover_norms(h: FrameHom, cover: Sequence[Mask], n_max: int) -> list[int]:
    """``N`` of ``U v h(U) v ... v h^{n-1}(U)`` for a frame cover (join = top)."""
    top = h.frame.top
    base = reduce_cover(cover)
    traj = [base]
    pushed = base
    for _ in range(n_max - 1):
        pushed = reduce_cover(h(a) for a in pushed)
        traj.append(reduce_cover(a & b for a in traj[-1] for b in pushed))
    return [min_cover_size(t, top) for t in traj]


def frame_repeat(h: FrameHom) -> tuple[int, int]:
    f = h.frame
    els = f.elements()
    pos = {a: i for i, a in enumerate(els)}
    return map_repeat([pos[h(a)] for a in els])


def h_fr(h: FrameHom, covers: Sequence[Sequence[Mask]], n_max: int = 16,
         window: int = DEFAULT_WINDOW) -> tuple[EntropyEstimate, list[list[int]]]:
    """Frame entropy; finite frames force the value 0, certified by ``h^k = h^m``."""
    if not covers:
        raise SpecError("at least one cover is required")
    for u in covers:
        acc = 0
        for a in u:
            acc |= a
        if acc != h.frame.top:
            raise SpecError("frame cover must join to the top")
    tables = [frame_cover_norms(h, u, n_max) for u in covers]
    best = max(range(len(tables)), key=lambda i: tables[i][-1])
    els = h.frame.elements()
    pos = {a: i for i, a in enumerate(els)}
    est = _finite_estimate(tables[best], [pos[h(a)] for a in els], window, list(covers[best]))
    return est, tables


def o_functor_check(phi: ContinuousMap, cover: Sequence[Mask], n_max: int = 6) -> BridgeSequences:
    """Cover norms on the space against frame-cover norms of ``O(phi)`` on ``O(U)``."""
    h, irr = frame_hom_of(phi)
    frame_cover = [open_to_element(irr, u) for u in cover]
    return _compare(cover_norms(phi, cover, n_max), frame_cover_norms(h, frame_cover, n_max))


def four_element_frame() -> tuple[FrameHom, list[Mask]]:
    """The square ``{0, a, b, 1}`` with the endomorphism swapping ``a`` and ``b``.

    Presented abstractly by its two incomparable join-irreducibles, with no
    space attached; used to exercise frame entropy on its own.  Returns the
    endomorphism and the frame cover ``{a, b}``.
    """
    frame = FiniteFrame((0b01, 0b10), ("a", "b"))
    return FrameHom(frame, (0b10, 0b01)), [0b01, 0b10]


def check_contractive_cover(phi: ContinuousMap, cover: Sequence[Mask]) -> None:
    """``N(phi^{-1} U) <= N(U)``; raises when violated."""
    if min_subcover(phi.space, pullback(phi, cover)) > min_subcover(phi.space, cover):
        raise ContractivityError("pullback increased the subcover number")
