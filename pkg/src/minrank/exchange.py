"""Exchangeability graphs over a common independent set.

Three constructions live here:

* the true graph (verification only — needs both matroids in the clear),
* the probe-pair graph built purely from min-rank queries, which contains
  the true graph and preserves its shortest source-sink paths, and
* the intersected graph: the intersection of all probe-pair graphs once the
  source/sink sets are fixed, with each arc labeled sure (certainly true)
  or suspicious (membership undetermined by the oracle).

All graphs are directed and bipartite between I and E \\ I: layer-1 arcs run
from I outward, layer-2 arcs run from outside into I. An augmenting path
starts at a source, alternates sides, and ends at a sink; swapping I by the
symmetric difference of such a path grows the common independent set by one.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Sequence

from .bitset import bit, format_set, full_mask, iter_bits, popcount
from .core import Matroid
from .oracle import MinRankOracle


class StarPair(NamedTuple):
    """A probe pair (s, t): each extends I alone at flat rank, together they
    lift the min-rank by one."""

    s: int
    t: int


class DirectAugment(NamedTuple):
    """An element whose single addition already lifts the min-rank."""

    x: int


class ExchangeGraph:
    """Dense bipartite arc structure over (E \\ I, I) with sure/suspicious labels.

    ``arcs1[y]`` is the head mask of layer-1 arcs (y, x) leaving y ∈ I;
    ``arcs2[x]`` is the head mask of layer-2 arcs (x, y) leaving x ∉ I.
    ``sure1``/``sure2`` mark the sure subset of each layer; the rest of the
    arcs are suspicious. Instances are immutable; mutation helpers return
    fresh graphs.
    """

    __slots__ = ("n", "I", "S", "T", "arcs1", "arcs2", "sure1", "sure2", "kind")

    def __init__(
        self,
        n: int,
        I: int,
        S: int,
        T: int,
        arcs1: list[int] | tuple[int, ...],
        arcs2: list[int] | tuple[int, ...],
        sure1: list[int] | tuple[int, ...] | None = None,
        sure2: list[int] | tuple[int, ...] | None = None,
        kind: str = "true",
    ):
        outside = full_mask(n) & ~I
        if S & ~outside or T & ~outside:
            raise ValueError("sources/sinks must lie outside I")
        self.n = n
        self.I = I
        self.S = S
        self.T = T
        self.arcs1 = tuple(arcs1)
        self.arcs2 = tuple(arcs2)
        self.sure1 = tuple(sure1) if sure1 is not None else tuple(arcs1)
        self.sure2 = tuple(sure2) if sure2 is not None else tuple(arcs2)
        for y in range(n):
            heads = self.arcs1[y]
            if heads and not (I >> y) & 1:
                raise ValueError("layer-1 arcs must leave I")
            if heads & ~outside or self.sure1[y] & ~heads:
                raise ValueError("bad layer-1 head mask")
        for x in range(n):
            heads = self.arcs2[x]
            if heads and (I >> x) & 1:
                raise ValueError("layer-2 arcs must leave E \\ I")
            if heads & ~I or self.sure2[x] & ~heads:
                raise ValueError("bad layer-2 head mask")
        self.kind = kind

    # -- structure ---------------------------------------------------------

    def successors(self, v: int) -> int:
        return self.arcs1[v] if (self.I >> v) & 1 else self.arcs2[v]

    def predecessor_mask(self, v: int) -> int:
        layer = self.arcs2 if (self.I >> v) & 1 else self.arcs1
        preds = 0
        for u in range(self.n):
            if (layer[u] >> v) & 1:
                preds |= bit(u)
        return preds

    def has_arc(self, u: int, v: int) -> bool:
        return bool((self.successors(u) >> v) & 1)

    def is_sure(self, u: int, v: int) -> bool:
        layer = self.sure1 if (self.I >> u) & 1 else self.sure2
        return bool((layer[u] >> v) & 1)

    def arcs1_pairs(self) -> Iterator[tuple[int, int]]:
        for y in iter_bits(self.I):
            for x in iter_bits(self.arcs1[y]):
                yield (y, x)

    def arcs2_pairs(self) -> Iterator[tuple[int, int]]:
        for x in range(self.n):
            if not (self.I >> x) & 1:
                for y in iter_bits(self.arcs2[x]):
                    yield (x, y)

    def suspicious_pairs(self) -> Iterator[tuple[int, int]]:
        for y in iter_bits(self.I):
            for x in iter_bits(self.arcs1[y] & ~self.sure1[y]):
                yield (y, x)
        for x in range(self.n):
            if not (self.I >> x) & 1:
                for y in iter_bits(self.arcs2[x] & ~self.sure2[x]):
                    yield (x, y)

    def arc_count(self) -> int:
        return sum(popcount(m) for m in self.arcs1) + sum(
            popcount(m) for m in self.arcs2
        )

    # -- derived graphs ----------------------------------------------------

    def flipped(self) -> "ExchangeGraph":
        """The mirror graph: swap the roles of the two hidden matroids.

        Layer 1 and layer 2 exchange with all arcs reversed, and sources
        swap with sinks. Augmenting paths map to reversed paths with the
        same vertex set, so solvers are indifferent to the flip.
        """
        n = self.n
        arcs1 = [0] * n
        arcs2 = [0] * n
        sure1 = [0] * n
        sure2 = [0] * n
        for x, y in self.arcs2_pairs():
            arcs1[y] |= bit(x)
            if (self.sure2[x] >> y) & 1:
                sure1[y] |= bit(x)
        for y, x in self.arcs1_pairs():
            arcs2[x] |= bit(y)
            if (self.sure1[y] >> x) & 1:
                sure2[x] |= bit(y)
        return ExchangeGraph(
            n, self.I, self.T, self.S, arcs1, arcs2, sure1, sure2, kind=self.kind
        )

    def mutated(
        self,
        add: Sequence[tuple[int, int]] = (),
        drop: Sequence[tuple[int, int]] = (),
    ) -> "ExchangeGraph":
        """Fault-injection helper: a copy with arcs added and/or removed.

        Added arcs are labeled sure; audits should catch the lie.
        """
        arcs1, arcs2 = list(self.arcs1), list(self.arcs2)
        sure1, sure2 = list(self.sure1), list(self.sure2)
        for u, v in add:
            if (self.I >> u) & 1:
                arcs1[u] |= bit(v)
                sure1[u] |= bit(v)
            else:
                arcs2[u] |= bit(v)
                sure2[u] |= bit(v)
        for u, v in drop:
            if (self.I >> u) & 1:
                arcs1[u] &= ~bit(v)
                sure1[u] &= ~bit(v)
            else:
                arcs2[u] &= ~bit(v)
                sure2[u] &= ~bit(v)
        return ExchangeGraph(
            self.n, self.I, self.S, self.T, arcs1, arcs2, sure1, sure2, self.kind
        )

    def with_assignment(self, chosen: dict[tuple[int, int], bool]) -> "ExchangeGraph":
        """Keep sure arcs; keep a suspicious arc iff chosen[(u, v)] is True."""
        arcs1, arcs2 = list(self.sure1), list(self.sure2)
        sure1, sure2 = list(self.sure1), list(self.sure2)
        for (u, v), keep in chosen.items():
            if not keep:
                continue
            if not self.has_arc(u, v) or self.is_sure(u, v):
                raise ValueError(f"({u},{v}) is not a suspicious arc")
            if (self.I >> u) & 1:
                arcs1[u] |= bit(v)
            else:
                arcs2[u] |= bit(v)
        return ExchangeGraph(
            self.n, self.I, self.S, self.T, arcs1, arcs2, sure1, sure2, "consistent"
        )

    def to_dot(self, names: tuple[str, ...] | None = None) -> str:
        """Deterministic DOT text: I-side boxed, sources/sinks highlighted,
        sure arcs solid, suspicious arcs dashed."""

        def label(v: int) -> str:
            return names[v] if names else str(v)

        lines = ["digraph exchange {", "  rankdir=LR;"]
        for v in range(self.n):
            attrs = [f'label="{label(v)}"']
            attrs.append("shape=box" if (self.I >> v) & 1 else "shape=ellipse")
            roles = []
            if (self.S >> v) & 1:
                roles.append("source")
            if (self.T >> v) & 1:
                roles.append("sink")
            if roles:
                attrs.append("peripheries=2")
                attrs.append(f'xlabel="{"+".join(roles)}"')
            lines.append(f"  v{v} [{', '.join(attrs)}];")
        arcs = sorted(list(self.arcs1_pairs()) + list(self.arcs2_pairs()))
        for u, v in arcs:
            style = "solid" if self.is_sure(u, v) else "dashed"
            lines.append(f"  v{u} -> v{v} [style={style}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (
            f"ExchangeGraph(kind={self.kind!r}, I={format_set(self.I)}, "
            f"S={format_set(self.S)}, T={format_set(self.T)}, "
            f"arcs={self.arc_count()})"
        )


# -- construction ------------------------------------------------------------


def build_true_graph(m1: Matroid, m2: Matroid, I: int) -> ExchangeGraph:
    """The exact exchangeability graph, computed from both matroids.

    Layer-1 arc (y, x) means I + x - y stays independent in the first
    matroid; layer-2 arc (x, y) says the same for the second. Sources are
    the elements addable in the first matroid, sinks in the second.
    Verification-only: solvers never see the matroids individually.
    """
    if not (m1.is_independent(I) and m2.is_independent(I)):
        raise ValueError("I is not a common independent set")
    n = m1.n
    outside = full_mask(n) & ~I
    S = 0
    T = 0
    for x in iter_bits(outside):
        if m1.is_independent(I | bit(x)):
            S |= bit(x)
        if m2.is_independent(I | bit(x)):
            T |= bit(x)
    arcs1 = [0] * n
    arcs2 = [0] * n
    for x in iter_bits(outside):
        ext = I | bit(x)
        for y in iter_bits(I):
            swapped = ext & ~bit(y)
            if m1.is_independent(swapped):
                arcs1[y] |= bit(x)
            if m2.is_independent(swapped):
                arcs2[x] |= bit(y)
    return ExchangeGraph(n, I, S, T, arcs1, arcs2, kind="true")


def find_star_pair(
    o: MinRankOracle, I: int
) -> StarPair | DirectAugment | None:
    """Scan single and pairwise additions to I through the oracle.

    Returns, in this priority order: a DirectAugment for the smallest
    element whose addition lifts the min-rank; else the lexicographically
    smallest probe pair; else None, meaning every pairwise addition is flat
    (the whole ground set is then a dual certificate).
    """
    k = popcount(I)
    ground = getattr(o, "ground", full_mask(o.n))
    outside = ground & ~I
    flat = []
    for x in iter_bits(outside):
        if o.rmin(I | bit(x)) == k + 1:
            return DirectAugment(x)
        flat.append(x)
    for i, s in enumerate(flat):
        for t in flat[i + 1 :]:
            if o.rmin(I | bit(s) | bit(t)) == k + 1:
                return StarPair(s, t)
    return None


class ExtensionSurvey(NamedTuple):
    """Full addability scan: all rank-lifting singletons and the
    lexicographically smallest probe pair (None if no pair qualifies)."""

    direct: tuple[int, ...]
    pair: StarPair | None

    @property
    def all_flat(self) -> bool:
        return not self.direct and self.pair is None


def survey_extensions(o: MinRankOracle, I: int) -> ExtensionSurvey:
    """Like `find_star_pair` but never short-circuits: the weighted solver
    needs the probe pair even when rank-lifting singletons exist."""
    k = popcount(I)
    ground = getattr(o, "ground", full_mask(o.n))
    outside = ground & ~I
    direct = []
    flat = []
    for x in iter_bits(outside):
        if o.rmin(I | bit(x)) == k + 1:
            direct.append(x)
        else:
            flat.append(x)
    pair = None
    for i, s in enumerate(flat):
        if pair:
            break
        for t in flat[i + 1 :]:
            if o.rmin(I | bit(s) | bit(t)) == k + 1:
                pair = StarPair(s, t)
                break
    return ExtensionSurvey(tuple(direct), pair)


def _star_sets(o: MinRankOracle, I: int, sp: StarPair) -> tuple[int, int]:
    """Sources/sinks from the probe pair: s joins the source side if adding
    it alongside t* lifts the rank; sinks mirror with s*."""
    k = popcount(I)
    ground = getattr(o, "ground", full_mask(o.n))
    outside = ground & ~I
    if sp.s == sp.t or (I | ~ground) & (bit(sp.s) | bit(sp.t)):
        raise ValueError("probe pair must be two distinct elements outside I")
    sb, tb = bit(sp.s), bit(sp.t)
    S = 0
    T = 0
    for x in iter_bits(outside & ~tb):
        if o.rmin(I | bit(x) | tb) == k + 1:
            S |= bit(x)
    for x in iter_bits(outside & ~sb):
        if o.rmin(I | sb | bit(x)) == k + 1:
            T |= bit(x)
    if not (S >> sp.s) & 1 or not (T >> sp.t) & 1:
        raise ValueError(f"({sp.s}, {sp.t}) is not a valid probe pair for I")
    return S, T


def build_modified_graph(
    o: MinRankOracle, I: int, sp: StarPair
) -> ExchangeGraph:
    """The probe-pair graph: sources/sinks keep their full arc stars, and
    every other potential arc is admitted when a three-element swap probe
    against the opposite probe element keeps the min-rank flat.

    Contains the true graph; extra arcs never touch sources or sinks and
    never shorten any source-sink path. Arcs incident to a source or sink
    are labeled sure, the rest suspicious.
    """
    k = popcount(I)
    ground = getattr(o, "ground", full_mask(o.n))
    S, T = _star_sets(o, I, sp)
    outside = ground & ~I
    plain = outside & ~(S | T)
    sb, tb = bit(sp.s), bit(sp.t)
    arcs1 = [0] * o.n
    arcs2 = [0] * o.n
    sure1 = [0] * o.n
    sure2 = [0] * o.n
    for y in iter_bits(I):
        yb = bit(y)
        heads = S
        for t in iter_bits(T & ~S):
            if o.rmin((I | bit(t)) & ~yb) == k:
                heads |= bit(t)
        for x in iter_bits(plain):
            if o.rmin((I | tb | bit(x)) & ~yb) == k:
                heads |= bit(x)
        arcs1[y] = heads
        sure1[y] = heads & (S | T)
    for x in iter_bits(outside):
        xb = bit(x)
        if (T >> x) & 1:
            arcs2[x] = I
        elif (S >> x) & 1:
            heads = 0
            for y in iter_bits(I):
                if o.rmin((I | xb) & ~bit(y)) == k:
                    heads |= bit(y)
            arcs2[x] = heads
        else:
            heads = 0
            for y in iter_bits(I):
                if o.rmin((I | sb | xb) & ~bit(y)) == k:
                    heads |= bit(y)
            arcs2[x] = heads
        sure2[x] = arcs2[x] if ((S | T) >> x) & 1 else 0
    return ExchangeGraph(o.n, I, S, T, arcs1, arcs2, sure1, sure2, kind="modified")


def intersect_modified(
    o: MinRankOracle, I: int, sp: StarPair
) -> ExchangeGraph:
    """Intersection of the probe-pair graphs over all probe choices.

    With sources and sinks fixed, only the swap-probe arcs vary with the
    probe, so the intersection re-tests each candidate arc against every
    sink-side (layer 1) or source-side (layer 2) probe. Labels: an arc is
    sure when incident to a source/sink, or when its tail in I misses an
    arc to some sink (layer 1) / from some source (layer 2) — the
    intersection then certifies it as a true arc. All else is suspicious.
    """
    k = popcount(I)
    ground = getattr(o, "ground", full_mask(o.n))
    S, T = _star_sets(o, I, sp)
    outside = ground & ~I
    plain = outside & ~(S | T)
    arcs1 = [0] * o.n
    arcs2 = [0] * o.n
    sure1 = [0] * o.n
    sure2 = [0] * o.n
    t_probes = list(iter_bits(T & ~S))
    s_probes = list(iter_bits(S & ~T))
    for y in iter_bits(I):
        yb = bit(y)
        heads = S
        for t in t_probes:
            if o.rmin((I | bit(t)) & ~yb) == k:
                heads |= bit(t)
        for x in iter_bits(plain):
            if all(o.rmin((I | bit(t) | bit(x)) & ~yb) == k for t in t_probes):
                heads |= bit(x)
        arcs1[y] = heads
        # A sink missing from this tail's heads certifies every plain head.
        if T & ~heads:
            sure1[y] = heads
        else:
            sure1[y] = heads & (S | T)
    into = [0] * o.n  # into[y] = tails x of layer-2 arcs (x, y)
    for x in iter_bits(outside):
        xb = bit(x)
        if (T >> x) & 1:
            heads = I
        elif (S >> x) & 1:
            heads = 0
            for y in iter_bits(I):
                if o.rmin((I | xb) & ~bit(y)) == k:
                    heads |= bit(y)
        else:
            heads = 0
            for y in iter_bits(I):
                if all(
                    o.rmin((I | bit(s) | xb) & ~bit(y)) == k for s in s_probes
                ):
                    heads |= bit(y)
        arcs2[x] = heads
        for y in iter_bits(heads):
            into[y] |= xb
    for x in iter_bits(outside):
        if ((S | T) >> x) & 1:
            sure2[x] = arcs2[x]
    for y in iter_bits(I):
        # A source missing among this head's tails certifies every tail.
        if S & ~into[y]:
            for x in iter_bits(into[y]):
                sure2[x] |= bit(y)
    return ExchangeGraph(o.n, I, S, T, arcs1, arcs2, sure1, sure2, kind="intersected")


# -- paths -------------------------------------------------------------------


def _distances_to_sinks(g: ExchangeGraph) -> list[int | None]:
    """Reverse BFS: arc-count distance from each vertex to the sink set."""
    dist: list[int | None] = [None] * g.n
    frontier = []
    for t in iter_bits(g.T):
        dist[t] = 0
        frontier.append(t)
    while frontier:
        nxt = []
        for v in frontier:
            dv = dist[v]
            assert dv is not None
            for u in iter_bits(g.predecessor_mask(v)):
                if dist[u] is None:
                    dist[u] = dv + 1
                    nxt.append(u)
        frontier = sorted(nxt)
    return dist


def shortest_augmenting_path(g: ExchangeGraph) -> list[int] | None:
    """Minimum-arc source-to-sink path, ties broken toward the smallest
    vertex sequence; None when no sink is reachable. A source that is also
    a sink yields a single-vertex path."""
    dist = _distances_to_sinks(g)
    best: int | None = None
    for s in iter_bits(g.S):
        d = dist[s]
        if d is not None and (best is None or d < best):
            best = d
    if best is None:
        return None
    start = min(s for s in iter_bits(g.S) if dist[s] == best)
    path = [start]
    v, remaining = start, best
    while remaining:
        v = min(
            u for u in iter_bits(g.successors(v)) if dist[u] == remaining - 1
        )
        path.append(v)
        remaining -= 1
    return path


def reachability_certificate(g: ExchangeGraph) -> int:
    """The set of vertices that can reach a sink (sinks included).

    Only valid when no source reaches a sink; the caller pairs the returned
    set with its complement as a min-rank duality certificate.
    """
    dist = _distances_to_sinks(g)
    Z = 0
    for v in range(g.n):
        if dist[v] is not None:
            Z |= bit(v)
    if Z & g.S:
        raise ValueError("a source reaches a sink; an augmenting path exists")
    return Z


def all_shortest_paths(g: ExchangeGraph) -> list[tuple[int, ...]]:
    """Every minimum-length source-sink path as a vertex sequence, sorted.

    Exponential in the worst case; meant for small verification instances.
    """
    dist = _distances_to_sinks(g)
    best: int | None = None
    for s in iter_bits(g.S):
        d = dist[s]
        if d is not None and (best is None or d < best):
            best = d
    if best is None:
        return []
    out: list[tuple[int, ...]] = []

    def walk(v: int, remaining: int, acc: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        for u in iter_bits(g.successors(v)):
            if dist[u] == remaining - 1:
                acc.append(u)
                walk(u, remaining - 1, acc)
                acc.pop()

    for s in sorted(iter_bits(g.S)):
        if dist[s] == best:
            walk(s, best, [s])
    return sorted(out)


def path_mask(path: list[int] | tuple[int, ...]) -> int:
    """Vertex set of a path as a mask."""
    m = 0
    for v in path:
        m |= bit(v)
    return m
