"""Finitely described selfmaps of countable sets and their set-theoretic entropies.

A :class:`SelfmapGraph` is a finite core plus three kinds of infinite
components, each a copy of the naturals:

* forward rays ``r(i, n) -> r(i, n+1)``;
* anti-rays ``a(i, n+1) -> a(i, n)`` with ``a(i, 0)`` sent to a core vertex
  or a ray base;
* collapsing rays, all of whose points go to one target (these make the
  map not finite-to-one).

Vertices are handles: ``("c", name)``, ``("r", i, n)``, ``("a", i, n)`` and
``("z", i, n)``.  Core successors may be core vertices or depth-0 entries of
rays and anti-rays.

For such graphs the covariant entropy is the number of forward rays and
the contravariant one the number of anti-rays.  Both formulas are
re-derived by the trajectory engine in the test suite rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from entrofunc.core.estimate import (DEFAULT_N_MAX, DEFAULT_WINDOW, EXACT, EntropyEstimate,
                                     declared_cofinal, semigroup_entropy)
from entrofunc.core.semigroup import DEFAULT_LIMITS, Carrier, CarrierFlags, Flow, Limits
from entrofunc.errors import NotFiniteToOneError, SpecError
from entrofunc.logvalue import LogValue

Handle = tuple
FiniteSubset = frozenset


def _entry_ok(h: Handle) -> bool:
    if not isinstance(h, tuple) or not h:
        return False
    if h[0] == "c":
        return len(h) == 2 and isinstance(h[1], str)
    return h[0] in ("r", "a") and len(h) == 3 and h[2] == 0


@dataclass(frozen=True)
class SelfmapGraph:
    core: tuple[tuple[str, Handle], ...] = ()
    rays: tuple[int, ...] = ()
    antirays: tuple[tuple[int, Handle], ...] = ()
    collapses: tuple[tuple[int, Handle], ...] = ()
    _succ: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _pre: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = [n for n, _ in self.core]
        if len(set(names)) != len(names):
            raise SpecError("duplicate core vertex names")
        for ids, what in ((self.rays, "ray"), ([i for i, _ in self.antirays], "anti-ray"),
                          ([i for i, _ in self.collapses], "collapsing ray")):
            if len(set(ids)) != len(ids):
                raise SpecError(f"duplicate {what} ids")
        succ = dict(self.core)
        ray_ids = set(self.rays)
        aray_ids = {i for i, _ in self.antirays}

        def valid_target(h: Handle, allow_antiray: bool) -> bool:
            if not _entry_ok(h):
                return False
            if h[0] == "c":
                return h[1] in succ
            if h[0] == "r":
                return h[1] in ray_ids
            return allow_antiray and h[1] in aray_ids

        for name, s in self.core:
            if not valid_target(s, True):
                raise SpecError(f"core vertex {name!r} has invalid successor {s!r}")
        for i, t in self.antirays:
            if not valid_target(t, False):
                raise SpecError(f"anti-ray {i} exits to {t!r}, expected a core vertex or ray base")
        for i, t in self.collapses:
            if not valid_target(t, False):
                raise SpecError(f"collapsing ray {i} targets {t!r}, expected a core vertex or ray base")
        object.__setattr__(self, "_succ", succ)
        pre: dict[Handle, list[Handle]] = {}
        for name, s in self.core:
            pre.setdefault(s, []).append(("c", name))
        for i, t in self.antirays:
            pre.setdefault(t, []).append(("a", i, 0))
        object.__setattr__(self, "_pre", pre)

    # structure ------------------------------------------------------------

    @property
    def finite_to_one(self) -> bool:
        return not self.collapses

    @property
    def forward_ray_count(self) -> int:
        return len(self.rays)

    @property
    def antiray_count(self) -> int:
        return len(self.antirays)

    def contains(self, h: Handle) -> bool:
        if not isinstance(h, tuple) or not h:
            return False
        if h[0] == "c":
            return len(h) == 2 and h[1] in self._succ
        if len(h) != 3 or not isinstance(h[2], int) or h[2] < 0:
            return False
        if h[0] == "r":
            return h[1] in self.rays
        if h[0] == "a":
            return any(i == h[1] for i, _ in self.antirays)
        if h[0] == "z":
            return any(i == h[1] for i, _ in self.collapses)
        return False

    def step(self, h: Handle) -> Handle:
        kind = h[0]
        if kind == "c":
            return self._succ[h[1]]
        if kind == "r":
            return ("r", h[1], h[2] + 1)
        if kind == "a":
            if h[2] > 0:
                return ("a", h[1], h[2] - 1)
            return dict(self.antirays)[h[1]]
        if kind == "z":
            return dict(self.collapses)[h[1]]
        raise SpecError(f"unknown vertex {h!r}")

    def preimage(self, h: Handle) -> list[Handle]:
        for i, t in self.collapses:
            if t == h:
                raise NotFiniteToOneError(f"{h!r} has an infinite fiber (collapsing ray {i})")
        out = list(self._pre.get(h, ()))
        kind = h[0]
        if kind == "r" and h[2] > 0:
            out.append(("r", h[1], h[2] - 1))
        elif kind == "a":
            out.append(("a", h[1], h[2] + 1))
        return out

    def image_step(self, d: Iterable[Handle]) -> FiniteSubset:
        return frozenset(self.step(h) for h in d)

    def preimage_step(self, d: Iterable[Handle]) -> FiniteSubset:
        return frozenset(x for h in d for x in self.preimage(h))

    def cofinal_witness(self) -> FiniteSubset:
        """Core, ray bases and anti-ray bases: realises both set-theoretic entropies."""
        out = {("c", n) for n, _ in self.core}
        out.update(("r", i, 0) for i in self.rays)
        out.update(("a", i, 0) for i, _ in self.antirays)
        return frozenset(out)

    # serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "core": [[n, list(s)] for n, s in self.core],
            "rays": list(self.rays),
            "antirays": [[i, list(t)] for i, t in self.antirays],
            "collapses": [[i, list(t)] for i, t in self.collapses],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SelfmapGraph":
        if not isinstance(data, dict):
            raise SpecError("selfmap graph must be a JSON object")
        unknown = set(data) - {"core", "rays", "antirays", "collapses"}
        if unknown:
            raise SpecError(f"unknown selfmap fields {sorted(unknown)}")
        try:
            core = tuple((str(n), handle_from_json(s)) for n, s in data.get("core", []))
            rays = tuple(int(i) for i in data.get("rays", []))
            antirays = tuple((int(i), handle_from_json(t)) for i, t in data.get("antirays", []))
            collapses = tuple((int(i), handle_from_json(t)) for i, t in data.get("collapses", []))
        except (TypeError, ValueError) as exc:
            raise SpecError(f"malformed selfmap graph: {exc}") from exc
        return cls(core, rays, antirays, collapses)


def handle_from_json(h) -> Handle:
    if isinstance(h, str):
        return ("c", h)
    if not isinstance(h, list) or not h:
        raise SpecError(f"bad vertex handle {h!r}")
    if h[0] == "c" and len(h) == 2:
        return ("c", str(h[1]))
    if h[0] in ("r", "a", "z") and len(h) == 3:
        return (h[0], int(h[1]), int(h[2]))
    raise SpecError(f"bad vertex handle {h!r}")


def subset_from_json(items) -> FiniteSubset:
    return frozenset(handle_from_json(h) for h in items)


def subset_to_json(d: Iterable[Handle]) -> list:
    return [list(h) for h in sorted(d, key=_handle_key)]


def _handle_key(h: Handle):
    return (h[0],) + tuple((0, x) if isinstance(x, int) else (1, x) for x in h[1:])


def sorted_subset(d: Iterable[Handle]) -> list[Handle]:
    return sorted(d, key=_handle_key)


# constructors ---------------------------------------------------------------

def from_finite_map(mapping: dict) -> SelfmapGraph:
    """A selfmap of a finite set given as ``{x: f(x)}``."""
    keys = {str(k) for k in mapping}
    core = []
    for k in sorted(mapping, key=str):
        v = str(mapping[k])
        if v not in keys:
            raise SpecError(f"{k!r} maps outside the domain")
        core.append((str(k), ("c", v)))
    return SelfmapGraph(tuple(core))


def successor_ray() -> SelfmapGraph:
    """``n -> n + 1`` on the naturals."""
    return SelfmapGraph(rays=(0,))


def two_sided_shift() -> SelfmapGraph:
    """``n -> n + 1`` on the integers: anti-ray of negatives glued to a ray."""
    return SelfmapGraph(rays=(0,), antirays=((0, ("r", 0, 0)),))


def pakex() -> SelfmapGraph:
    """``0, 1 -> 0``, ``2n+2 -> 2n``, ``2n+3 -> 2n+1`` on the naturals."""
    return SelfmapGraph(core=(("0", ("c", "0")), ("1", ("c", "0"))),
                        antirays=((0, ("c", "0")), (1, ("c", "1"))))


def pakex_label(h: Handle) -> int:
    """The natural number named by a handle of :func:`pakex`."""
    if h[0] == "c":
        return int(h[1])
    if h[0] == "a":
        return 2 * h[2] + 2 + h[1]
    raise SpecError(f"{h!r} is not a pakex vertex")


def rho_shape(tail: int, cycle: int) -> SelfmapGraph:
    """A tail of ``tail`` vertices running into a cycle of length ``cycle``."""
    if cycle < 1:
        raise SpecError("cycle length must be positive")
    core = []
    for i in range(tail):
        nxt = f"t{i + 1}" if i + 1 < tail else "c0"
        core.append((f"t{i}", ("c", nxt)))
    for j in range(cycle):
        core.append((f"c{j}", ("c", f"c{(j + 1) % cycle}")))
    return SelfmapGraph(tuple(core))


# trajectories -------------------------------------------------------------

def trajectory_sizes(g: SelfmapGraph, d: Iterable[Handle], n_max: int,
                     contravariant: bool = False, limits: Limits = DEFAULT_LIMITS) -> list[int]:
    """``|D u f(D) u ... u f^{n-1}(D)|`` for ``n = 1..n_max`` with ``f`` the
    image map, or the preimage map when ``contravariant``."""
    step = g.preimage_step if contravariant else g.image_step
    cur = frozenset(d)
    union = set(cur)
    out = [len(union)]
    for _ in range(n_max - 1):
        cur = step(cur)
        union |= cur
        limits.check_count(len(union), "trajectory subset")
        out.append(len(union))
    return out


def _subset_carrier(g: SelfmapGraph) -> Carrier:
    return Carrier("S(X)", lambda a, b: a | b, lambda a: LogValue.count(len(a)),
                   CarrierFlags(subadditive=True, arithmetic=True, monotone_norm=True,
                                d_monotone=True, commutative=True, has_identity=True,
                                structured=True),
                   leq=lambda a, b: a <= b, identity=frozenset(), size=len,
                   contains=lambda a: isinstance(a, frozenset) and all(g.contains(h) for h in a))


def image_flow(g: SelfmapGraph) -> Flow:
    return Flow(_subset_carrier(g), g.image_step, contractive=True, name="im")


def preimage_flow(g: SelfmapGraph) -> Flow:
    if not g.finite_to_one:
        raise NotFiniteToOneError("the preimage functor needs a finite-to-one map")
    return Flow(_subset_carrier(g), g.preimage_step, contractive=False, name="cim")


COFINAL_REASON = "trajectories are monotone in D and core plus ray and anti-ray bases dominate every finite D"


def covariant_entropy(g: SelfmapGraph, witnesses: Sequence[Iterable[Handle]] | None = None,
                      mode: str = "trajectory", n_max: int = DEFAULT_N_MAX,
                      window: int = DEFAULT_WINDOW, limits: Limits = DEFAULT_LIMITS
                      ) -> EntropyEstimate:
    if mode == "exact_structural":
        return EntropyEstimate((), EXACT, LogValue.count(g.forward_ray_count),
                               certificates={"rule": "structural", "forward_rays": g.forward_ray_count},
                               witness_restricted=False)
    if mode != "trajectory":
        raise SpecError(f"unknown mode {mode!r}")
    upgrade = None
    if witnesses is None:
        witnesses = [g.cofinal_witness()]
        upgrade = declared_cofinal(COFINAL_REASON)
    ws = [frozenset(w) for w in witnesses]
    if not ws:
        raise SpecError("trajectory mode needs at least one witness")
    est, _ = semigroup_entropy(image_flow(g), ws, n_max, window, upgrade, limits=limits)
    return est


def contravariant_entropy(g: SelfmapGraph, witnesses: Sequence[Iterable[Handle]] | None = None,
                          variant: str = "star", mode: str = "trajectory",
                          n_max: int = DEFAULT_N_MAX, window: int = DEFAULT_WINDOW,
                          limits: Limits = DEFAULT_LIMITS) -> EntropyEstimate:
    if not g.finite_to_one:
        raise NotFiniteToOneError("contravariant entropy needs a finite-to-one map")
    if variant == "star_p":
        sc = surjective_core(g)
        if witnesses is not None:
            witnesses = [frozenset(h for h in w if sc.contains(h)) for w in witnesses]
            witnesses = [w for w in witnesses if w] or [frozenset()]
        g = sc
    elif variant != "star":
        raise SpecError(f"unknown variant {variant!r}")
    if mode == "exact_structural":
        return EntropyEstimate((), EXACT, LogValue.count(g.antiray_count),
                               certificates={"rule": "structural", "antirays": g.antiray_count,
                                             "variant": variant},
                               witness_restricted=False)
    if mode != "trajectory":
        raise SpecError(f"unknown mode {mode!r}")
    upgrade = None
    if witnesses is None:
        witnesses = [g.cofinal_witness()]
        upgrade = declared_cofinal(COFINAL_REASON)
    ws = [frozenset(w) for w in witnesses]
    est, _ = semigroup_entropy(preimage_flow(g), ws, n_max, window, upgrade, limits=limits)
    return est


def surjective_core(g: SelfmapGraph) -> SelfmapGraph:
    """The restriction of ``g`` to the intersection of all its iterated images.

    In these graphs a point lies in every image exactly when it has an
    infinite backward orbit: anti-ray points always do, and so does
    everything reachable forward from an anti-ray exit or a core cycle.
    Depths of finite backward chains are bounded (collapsing rays add
    depth one), so no further points survive.
    """
    keep_core: set[str] = set()
    keep_rays: set[int] = set()

    def walk(h: Handle) -> None:
        seen: set[Handle] = set()
        while h[0] == "c" and h not in seen:
            seen.add(h)
            keep_core.add(h[1])
            h = g.step(h)
        if h[0] == "r":
            keep_rays.add(h[1])

    for name, _ in g.core:
        # a core vertex lies on a cycle when iterating returns to it inside the core
        h = ("c", name)
        x = h
        for _ in range(len(g.core) + 1):
            x = g.step(x)
            if x[0] != "c":
                break
            if x == h:
                walk(h)
                break
    for _, t in g.antirays:
        walk(t)
    core = tuple((n, s) for n, s in g.core if n in keep_core)
    rays = tuple(i for i in g.rays if i in keep_rays)
    return SelfmapGraph(core, rays, g.antirays, ())
