"""Gadget reduction from graph 4-coloring to consistent-graph search.

From a properly 4-colored graph this module builds a matroid pair given by
two rational matrices: a maximal common independent set I (all y-elements),
a probe pair s, t, and a table prescribing the minimum rank of every small
exchange. The arc assignments consistent with that table correspond, after
projecting each vertex block onto its exchange situation, exactly to the
proper 4-colorings of the graph — so resolving the suspicious arcs of such
an instance is as hard as coloring.

Colors are pairs (i, j) with i, j in {1, 2}. A vertex block carries four
elements x1, x2 (outside I) and y1, y2 (inside I); color (i, j) selects the
arc into I at slot (x_i, y_j) and the arc out of I at the complementary
slot (x_{3-i}, y_{3-j}). Each edge contributes two three-element
sub-gadgets whose two legal orientations transport the endpoint colors;
equal endpoint colors leave no legal orientation, which is the whole point.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, NamedTuple, Sequence

from .bitset import (
    bit,
    elements_of,
    format_set,
    full_mask,
    iter_bits,
    mask_of,
    popcount,
)
from .core import LinearMatroid, Matroid
from .oracle import MinRankOracle
from .verify import BruteReport

Color = tuple[int, int]
COLORS: tuple[Color, ...] = ((1, 1), (1, 2), (2, 1), (2, 2))

# A slot is an (x, y) position with x outside I and y inside; its state is
# None (no arcs), "a" (arc into I), "b" (arc out of I), or "both".
Slot = tuple[int, int]


class ColoredGraph(NamedTuple):
    """A small simple graph, optionally 4-colored.

    A coloring maps each vertex to one of the four colors; it is proper
    when adjacent vertices get different colors.
    """

    vertices: int
    edges: tuple[tuple[int, int], ...]
    coloring: tuple[Color, ...] | None = None

    def normalized_edges(self) -> tuple[tuple[int, int], ...]:
        """Edges sorted with min endpoint first; rejects loops/duplicates."""
        out = []
        seen = set()
        for u, w in self.edges:
            if not (0 <= u < self.vertices and 0 <= w < self.vertices):
                raise ValueError(f"edge ({u},{w}) outside vertex range")
            if u == w:
                raise ValueError("self-loops are not allowed")
            e = (min(u, w), max(u, w))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            out.append(e)
        return tuple(sorted(out))

    def is_proper(self) -> bool:
        if self.coloring is None:
            return False
        return all(
            self.coloring[u] != self.coloring[w] for u, w in self.normalized_edges()
        )


def proper_four_colorings(g: ColoredGraph) -> set[tuple[Color, ...]]:
    """All proper 4-colorings, by exhaustive assignment."""
    edges = g.normalized_edges()
    return {
        combo
        for combo in product(COLORS, repeat=g.vertices)
        if all(combo[u] != combo[w] for u, w in edges)
    }


class GadgetInstance(NamedTuple):
    """A built reduction: layout, value table, matrices, realized arcs.

    Element layout: vertex v owns 4v..4v+3 as (x1, x2, y1, y2); the k-th
    edge (u, w) owns 4V+6k..4V+6k+5 as (x1 at u, x1 at w, x2 at u, x2 at w,
    y1, y2); s and t come last. I is the set of all y-elements.

    ``values`` prescribes rmin((I | X) & ~Y) for every pair of nonempty
    X outside I (plain elements only, at most 2) and Y inside I (at most
    2). Probe prescriptions are uniform and implicit: every exchange that
    adds s or t has value |I|, except adding both, which has |I| + 1; the
    circuit of s with I closes on the second matroid and the circuit of t
    on the first.

    ``Z1``/``Z2`` realize the table: identity on I, all-ones column tying t
    to I in Z1 and s to I in Z2, and one distinct prime per slot, entering
    Z1 for an arc out of I and Z2 for an arc into I. ``arcs1[y]``/
    ``arcs2[x]`` record the realized arcs as bitmasks of heads.
    """

    graph: ColoredGraph
    n: int
    names: tuple[str, ...]
    I: int
    s: int
    t: int
    values: dict[tuple[int, int], int]
    Z1: tuple[tuple[Fraction, ...], ...]
    Z2: tuple[tuple[Fraction, ...], ...]
    arcs1: tuple[int, ...]
    arcs2: tuple[int, ...]
    vertex_x: tuple[tuple[int, int], ...]
    vertex_y: tuple[tuple[int, int], ...]
    edge_x: tuple[tuple[int, int, int, int], ...]
    edge_y: tuple[tuple[int, int], ...]
    orientations: tuple[tuple[str, str], ...]

    @property
    def k(self) -> int:
        return popcount(self.I)

    @property
    def plain(self) -> int:
        """Elements outside I other than s and t: the gadget x's."""
        return full_mask(self.n) & ~self.I & ~bit(self.s) & ~bit(self.t)

    def as_matroids(self) -> tuple[Matroid, Matroid]:
        return LinearMatroid(self.Z1), LinearMatroid(self.Z2)


def _primes(count: int) -> list[int]:
    out: list[int] = []
    candidate = 2
    while len(out) < count:
        if all(candidate % p for p in out):
            out.append(candidate)
        candidate += 1
    return out


def _pattern_rank(slots: Sequence[Slot]) -> int:
    """Rank of an occupancy pattern over at most two rows and columns.

    Distinct prime entries make the numeric rank match the pattern rank:
    2 when two entries sit on distinct rows and columns (no 2x2 minor built
    from distinct primes can vanish), 1 for any other nonempty pattern.
    """
    if not slots:
        return 0
    for (x, y), (x2, y2) in combinations(slots, 2):
        if x != x2 and y != y2:
            return 2
    return 1


def _nonempty_submasks(mask: int) -> list[int]:
    els = elements_of(mask)
    out = []
    for r in range(1, len(els) + 1):
        for combo in combinations(els, r):
            out.append(mask_of(combo))
    return out


def _le_sets(mask: int) -> list[int]:
    """Nonempty subsets of size at most two, singletons first."""
    els = elements_of(mask)
    out = [bit(e) for e in els]
    out += [bit(a) | bit(b) for a, b in combinations(els, 2)]
    return out


def _vertex_slot_arcs(
    color: Color, vx: Sequence[int], vy: Sequence[int]
) -> dict[Slot, str]:
    """Color (i, j): arc into I at (x_i, y_j), out of I at (x_{3-i}, y_{3-j})."""
    i, j = color
    return {(vx[i - 1], vy[j - 1]): "a", (vx[2 - i], vy[2 - j]): "b"}


def _edge_slot_arcs(cfg: str, xu: int, xw: int, ye: int) -> dict[Slot, str]:
    """Orientation "A" feeds I from the first endpoint's element and leaves
    toward the second's; "B" mirrors."""
    if cfg == "A":
        return {(xu, ye): "a", (xw, ye): "b"}
    return {(xu, ye): "b", (xw, ye): "a"}


def _states_consistent(
    value: int,
    k: int,
    states: Mapping[Slot, str | None],
    xs: Sequence[int],
    ys: Sequence[int],
) -> bool:
    """One observed exchange value against explicit slot states.

    A high value (>= |I| - |Y| + 1) needs an arc in each direction
    somewhere in the block; a low one forbids having both directions.
    """
    has_a = has_b = False
    for x in xs:
        for y in ys:
            st = states.get((x, y))
            if st in ("a", "both"):
                has_a = True
            if st in ("b", "both"):
                has_b = True
    if value >= k - len(ys) + 1:
        return has_a and has_b
    return not (has_a and has_b)


def _designated_values(
    k: int,
    vertex_x: Sequence[tuple[int, int]],
    vertex_y: Sequence[tuple[int, int]],
    edge_x: Sequence[tuple[int, int, int, int]],
    edge_y: Sequence[tuple[int, int]],
    edges: Sequence[tuple[int, int]],
) -> dict[tuple[int, int], int]:
    """Prescribed values for the constrained pairs.

    Per vertex: the full block is one exchange short (value |I| - 1) while
    every proper sub-block has no slack at all (|I| - |Y'|). Per edge
    sub-gadget: the two same-index slots jointly exchange (value |I|),
    each alone does not (|I| - 1). Per edge endpoint: the cross pairs
    tying the sub-gadget's y to the endpoint's y through x1 of the vertex
    have no slack anywhere (|I| - |Y'| on all sub-blocks) — these
    transport the color constraint.
    """
    values: dict[tuple[int, int], int] = {}

    def put(X: int, Y: int, v: int) -> None:
        old = values.setdefault((X, Y), v)
        assert old == v, (
            f"conflicting designations {old} vs {v} at "
            f"({format_set(X)},{format_set(Y)})"
        )

    def put_blocks(X: int, Y: int, include_full: bool) -> None:
        for Xp in _nonempty_submasks(X):
            for Yp in _nonempty_submasks(Y):
                if not include_full and Xp == X and Yp == Y:
                    continue
                put(Xp, Yp, k - popcount(Yp))

    for v in range(len(vertex_x)):
        X = mask_of(vertex_x[v])
        Y = mask_of(vertex_y[v])
        put(X, Y, k - 1)
        put_blocks(X, Y, include_full=False)
    for e, (u, w) in enumerate(edges):
        x1u, x1w, x2u, x2w = edge_x[e]
        y1, y2 = edge_y[e]
        for i, (xu, xw, ye) in enumerate(((x1u, x1w, y1), (x2u, x2w, y2))):
            put(bit(xu) | bit(xw), bit(ye), k)
            put(bit(xu), bit(ye), k - 1)
            put(bit(xw), bit(ye), k - 1)
            for v, xev in ((u, xu), (w, xw)):
                CX = bit(xev) | bit(vertex_x[v][0])
                CY = bit(ye) | bit(vertex_y[v][i])
                put_blocks(CX, CY, include_full=True)
    return values


def _allowed_orientations(
    designated: Mapping[tuple[int, int], int],
    coloring: Sequence[Color],
    endpoints: tuple[int, int],
    index: int,
    ex: tuple[int, int, int, int],
    ey: tuple[int, int],
    vertex_x: Sequence[tuple[int, int]],
    vertex_y: Sequence[tuple[int, int]],
    k: int,
) -> list[str]:
    """Orientations of one edge sub-gadget legal under both endpoint colors.

    Judged purely by the designated cross-pair values: the full cross pair
    is slack-free, so whenever the endpoint color occupies the vertex slot
    in its block, the sub-gadget's slot at that endpoint must carry the
    same direction.
    """
    u, w = endpoints
    xu, xw = (ex[0], ex[1]) if index == 0 else (ex[2], ex[3])
    ye = ey[index]
    out = []
    for cfg in ("A", "B"):
        ok = True
        for v, xev in ((u, xu), (w, xw)):
            vx, vy = vertex_x[v], vertex_y[v]
            states: dict[Slot, str | None] = {}
            states.update(_vertex_slot_arcs(coloring[v], vx, vy))
            states.update(_edge_slot_arcs(cfg, xu, xw, ye))
            xs = (xev, vx[0])
            ys = (ye, vy[index])
            value = designated[(mask_of(xs), mask_of(ys))]
            if not _states_consistent(value, k, states, xs, ys):
                ok = False
                break
        if ok:
            out.append(cfg)
    return out


def build_gadget(g: ColoredGraph, allow_improper: bool = False) -> GadgetInstance:
    """Construct the reduction instance for a colored graph.

    The value table is filled from the realized arc pattern (identity plus
    distinct primes makes every small-exchange rank equal its pattern
    rank) and then overlaid with the designated constants; for proper
    colorings the two agree everywhere, which is asserted.
    ``allow_improper`` skips the properness check and the agreement
    assertion so tests can observe how equal endpoint colors collide with
    the prescriptions.
    """
    if g.coloring is None:
        raise ValueError("a coloring is required to build a gadget")
    if len(g.coloring) != g.vertices:
        raise ValueError("coloring length disagrees with vertex count")
    for c in g.coloring:
        if c not in COLORS:
            raise ValueError(f"unknown color {c}")
    edges = g.normalized_edges()
    if not allow_improper and not g.is_proper():
        raise ValueError("coloring is not proper: adjacent vertices share a color")

    V, F = g.vertices, len(edges)
    names: list[str] = []
    vertex_x: list[tuple[int, int]] = []
    vertex_y: list[tuple[int, int]] = []
    for v in range(V):
        base = 4 * v
        vertex_x.append((base, base + 1))
        vertex_y.append((base + 2, base + 3))
        names += [f"x1.v{v}", f"x2.v{v}", f"y1.v{v}", f"y2.v{v}"]
    edge_x: list[tuple[int, int, int, int]] = []
    edge_y: list[tuple[int, int]] = []
    for e, (u, w) in enumerate(edges):
        base = 4 * V + 6 * e
        edge_x.append((base, base + 1, base + 2, base + 3))
        edge_y.append((base + 4, base + 5))
        names += [
            f"x1.e{e}.v{u}",
            f"x1.e{e}.v{w}",
            f"x2.e{e}.v{u}",
            f"x2.e{e}.v{w}",
            f"y1.e{e}",
            f"y2.e{e}",
        ]
    s = 4 * V + 6 * F
    t = s + 1
    names += ["s", "t"]
    n = t + 1
    I = 0
    for vy in vertex_y:
        I |= mask_of(vy)
    for ey in edge_y:
        I |= mask_of(ey)
    k = popcount(I)

    designated = _designated_values(k, vertex_x, vertex_y, edge_x, edge_y, edges)

    orientations: list[tuple[str, str]] = []
    for e, (u, w) in enumerate(edges):
        cfg: list[str] = []
        for i in (0, 1):
            allowed = _allowed_orientations(
                designated, g.coloring, (u, w), i, edge_x[e], edge_y[e],
                vertex_x, vertex_y, k,
            )
            if not allowed:
                assert allow_improper, "proper coloring left no orientation"
                allowed = ["A"]
            cfg.append(allowed[0])
        orientations.append((cfg[0], cfg[1]))

    # Realized arcs: the color and orientation selections on designated
    # slots, arcs in both directions on every other slot, nothing on the
    # cross slots the selections leave empty.
    designated_slots: set[Slot] = set()
    for X, Y in designated:
        for x in iter_bits(X):
            for y in iter_bits(Y):
                designated_slots.add((x, y))
    selected: dict[Slot, str] = {}
    for v in range(V):
        selected.update(_vertex_slot_arcs(g.coloring[v], vertex_x[v], vertex_y[v]))
    for e in range(F):
        x1u, x1w, x2u, x2w = edge_x[e]
        y1, y2 = edge_y[e]
        selected.update(_edge_slot_arcs(orientations[e][0], x1u, x1w, y1))
        selected.update(_edge_slot_arcs(orientations[e][1], x2u, x2w, y2))
    arcs1 = [0] * n
    arcs2 = [0] * n
    for (x, y), direction in selected.items():
        if direction == "a":
            arcs2[x] |= bit(y)
        else:
            arcs1[y] |= bit(x)
    plain = full_mask(n) & ~I & ~bit(s) & ~bit(t)
    for y in iter_bits(I):
        for x in iter_bits(plain):
            if (x, y) not in designated_slots:
                arcs1[y] |= bit(x)
                arcs2[x] |= bit(y)

    # Value table = pattern ranks of the realization, overlaid with the
    # designated constants (which agree on proper colorings).
    values: dict[tuple[int, int], int] = {}
    for X in _le_sets(plain):
        for Y in _le_sets(I):
            slots1 = [
                (x, y)
                for x in iter_bits(X)
                for y in iter_bits(Y)
                if (arcs1[y] >> x) & 1
            ]
            slots2 = [
                (x, y)
                for x in iter_bits(X)
                for y in iter_bits(Y)
                if (arcs2[x] >> y) & 1
            ]
            values[(X, Y)] = (
                k - popcount(Y) + min(_pattern_rank(slots1), _pattern_rank(slots2))
            )
    if not allow_improper:
        for key, v in designated.items():
            assert values[key] == v, (
                f"realization disagrees with designation at "
                f"({format_set(key[0])},{format_set(key[1])}): "
                f"{values[key]} vs {v}"
            )
    values.update(designated)

    # Matrices: identity on I; t's column ties all of I in Z1 and s's in
    # Z2; the j-th slot in (y ascending, x ascending) order takes the j-th
    # prime, consumed whether or not an arc uses it.
    rows = sorted(elements_of(I)) + [s, t]
    row_of = {e: i for i, e in enumerate(rows)}
    Z1 = [[Fraction(0)] * n for _ in rows]
    Z2 = [[Fraction(0)] * n for _ in rows]
    for y in iter_bits(I):
        Z1[row_of[y]][y] = Fraction(1)
        Z2[row_of[y]][y] = Fraction(1)
        Z1[row_of[y]][t] = Fraction(1)
        Z2[row_of[y]][s] = Fraction(1)
    Z1[row_of[s]][s] = Fraction(1)
    Z2[row_of[t]][t] = Fraction(1)
    plain_list = elements_of(plain)
    prime_iter = iter(_primes(k * len(plain_list)))
    for y in sorted(iter_bits(I)):
        for x in plain_list:
            p = Fraction(next(prime_iter))
            if (arcs1[y] >> x) & 1:
                Z1[row_of[y]][x] = p
            if (arcs2[x] >> y) & 1:
                Z2[row_of[y]][x] = p

    return GadgetInstance(
        graph=ColoredGraph(V, edges, g.coloring),
        n=n,
        names=tuple(names),
        I=I,
        s=s,
        t=t,
        values=values,
        Z1=tuple(tuple(r) for r in Z1),
        Z2=tuple(tuple(r) for r in Z2),
        arcs1=tuple(arcs1),
        arcs2=tuple(arcs2),
        vertex_x=tuple(vertex_x),
        vertex_y=tuple(vertex_y),
        edge_x=tuple(edge_x),
        edge_y=tuple(edge_y),
        orientations=tuple(orientations),
    )


# -- verification --------------------------------------------------------------


def _int_rank(rows: Sequence[Sequence[int]], mask: int) -> int:
    """Exact rank of the integer submatrix on the masked columns.

    Fraction-free elimination: entries stay determinants of small minors,
    so dividing by the previous pivot is exact (checked).
    """
    cols = elements_of(mask)
    mat = [[row[c] for c in cols] for row in rows]
    nr, nc = len(mat), len(cols)
    rank = 0
    prev = 1
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if mat[r][col]), None)
        if piv is None:
            continue
        if piv != rank:
            mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        p = prow[col]
        for r in range(rank + 1, nr):
            row = mat[r]
            a = row[col]
            row[col] = 0
            for c2 in range(col + 1, nc):
                q, rem = divmod(row[c2] * p - prow[c2] * a, prev)
                assert rem == 0, "inexact fraction-free elimination step"
                row[c2] = q
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


def verify_gadget(gi: GadgetInstance, oracle_samples: int = 25) -> list[BruteReport]:
    """Recompute every prescription from the matrices by exact rank.

    Checks the full value table, the uniform probe prescriptions, the
    probe circuits (I+s closes on the second matroid, I+t on the first),
    that s is the only source and t the only sink, that the realized arcs
    match the matrix ranks slot by slot, and that s and t exchange freely
    with all of I in both matroids. A sample of the swept sets is
    re-checked through the matroid interface to tie the fast integer rank
    path back to it.
    """
    if gi.n > 40:
        raise ValueError("verify_gadget is capped at 40 columns")
    label = f"gadget(V={gi.graph.vertices},E={len(gi.graph.edges)})"

    def make(
        quantity: str, brute: object, solver: object, witnesses: tuple = ()
    ) -> BruteReport:
        return BruteReport(label, quantity, brute, solver, brute == solver, witnesses)

    rows1 = [[int(v) for v in row] for row in gi.Z1]
    rows2 = [[int(v) for v in row] for row in gi.Z2]
    cache: dict[int, tuple[int, int]] = {}

    def ranks(mask: int) -> tuple[int, int]:
        got = cache.get(mask)
        if got is None:
            got = (_int_rank(rows1, mask), _int_rank(rows2, mask))
            cache[mask] = got
        return got

    def rmin(mask: int) -> int:
        return min(ranks(mask))

    def nameset(mask: int) -> str:
        return "{" + ",".join(gi.names[e] for e in iter_bits(mask)) + "}"

    reports: list[BruteReport] = []
    I, s, t, k = gi.I, gi.s, gi.t, gi.k

    bad_values = []
    for (X, Y), want in sorted(gi.values.items()):
        got = rmin((I | X) & ~Y)
        if got != want:
            bad_values.append(f"{nameset(X)}-for-{nameset(Y)}: rank {got} vs {want}")
    witnesses = tuple(bad_values[:5])
    reports.append(make("le-values", (), witnesses, witnesses))

    bad_probe = []
    if rmin(I | bit(s)) != k:
        bad_probe.append("I+s")
    if rmin(I | bit(t)) != k:
        bad_probe.append("I+t")
    if rmin(I | bit(s) | bit(t)) != k + 1:
        bad_probe.append("I+s+t")
    for y in iter_bits(I):
        for probe in (s, t):
            if rmin((I | bit(probe)) & ~bit(y)) != k:
                bad_probe.append(f"I+{gi.names[probe]}-{gi.names[y]}")
    for y in iter_bits(I):
        for x in iter_bits(gi.plain):
            for probe in (s, t):
                if rmin((I | bit(probe) | bit(x)) & ~bit(y)) != k:
                    bad_probe.append(
                        f"I+{gi.names[probe]}+{gi.names[x]}-{gi.names[y]}"
                    )
    witnesses = tuple(bad_probe[:5])
    reports.append(make("probe-prescriptions", (), witnesses, witnesses))

    bad_circ = []
    if ranks(I | bit(s))[1] != k:
        bad_circ.append("I+s independent on side 2")
    if ranks(I | bit(t))[0] != k:
        bad_circ.append("I+t independent on side 1")
    for y in iter_bits(I):
        if ranks((I | bit(s)) & ~bit(y))[1] != k:
            bad_circ.append(f"I+s-{gi.names[y]} dependent on side 2")
        if ranks((I | bit(t)) & ~bit(y))[0] != k:
            bad_circ.append(f"I+t-{gi.names[y]} dependent on side 1")
    reports.append(make("probe-circuits", (), tuple(bad_circ), tuple(bad_circ)))

    sources = set()
    sinks = set()
    for e in elements_of(full_mask(gi.n) & ~I):
        r1, r2 = ranks(I | bit(e))
        if r1 == k + 1:
            sources.add(e)
        if r2 == k + 1:
            sinks.add(e)
    reports.append(make("source-sink-sets", ({s}, {t}), (sources, sinks)))

    bad_arcs = []
    for y in iter_bits(I):
        for x in iter_bits(gi.plain):
            r1, r2 = ranks((I | bit(x)) & ~bit(y))
            if (r1 == k) != bool((gi.arcs1[y] >> x) & 1):
                bad_arcs.append(f"out-arc ({gi.names[y]},{gi.names[x]})")
            if (r2 == k) != bool((gi.arcs2[x] >> y) & 1):
                bad_arcs.append(f"in-arc ({gi.names[x]},{gi.names[y]})")
    reports.append(make("true-arcs", (), tuple(bad_arcs[:5]), tuple(bad_arcs[:5])))

    bad_stars = []
    for y in iter_bits(I):
        for probe in (s, t):
            r1, r2 = ranks((I | bit(probe)) & ~bit(y))
            if r1 != k or r2 != k:
                bad_stars.append(f"({gi.names[y]},{gi.names[probe]})")
    reports.append(make("probe-stars", (), tuple(bad_stars), tuple(bad_stars)))

    masks = sorted(cache)
    stride = max(1, len(masks) // max(1, oracle_samples))
    sample = masks[::stride][:oracle_samples]
    o = MinRankOracle(*gi.as_matroids())
    bad_oracle = [
        format_set(mask) for mask in sample if o.rmin(mask) != min(cache[mask])
    ]
    reports.append(make("oracle-crosscheck", (), tuple(bad_oracle), tuple(bad_oracle)))
    return reports


# -- consistent-graph enumeration ----------------------------------------------


_SLOT_STATES: tuple[str | None, ...] = (None, "a", "b")


def _vertex_configs(
    gi: GadgetInstance, v: int
) -> dict[Color, dict[Slot, str | None]]:
    """Slot states of one vertex block satisfying its observed values.

    Exhausts all 3^4 states of the four suspicious slots; exactly the four
    color situations survive, keyed by the position of the arc into I.
    """
    vx, vy = gi.vertex_x[v], gi.vertex_y[v]
    slots = [(x, y) for x in vx for y in vy]
    survivors: list[tuple[Color, dict[Slot, str | None]]] = []
    for combo in product(_SLOT_STATES, repeat=len(slots)):
        states = dict(zip(slots, combo))
        if not all(
            _states_consistent(
                gi.values[(X, Y)], gi.k, states, elements_of(X), elements_of(Y)
            )
            for X in _le_sets(mask_of(vx))
            for Y in _le_sets(mask_of(vy))
        ):
            continue
        color = next(
            (i + 1, j + 1)
            for i, x in enumerate(vx)
            for j, y in enumerate(vy)
            if states[(x, y)] == "a"
        )
        survivors.append((color, states))
    out = dict(survivors)
    assert len(survivors) == 4 and len(out) == 4, (
        f"vertex {v}: {len(survivors)} consistent situations"
    )
    return out


def _edge_index_configs(
    gi: GadgetInstance, e: int, index: int
) -> dict[str, dict[Slot, str | None]]:
    """Slot states of one edge sub-gadget; exactly "A" and "B" survive."""
    ex, ey = gi.edge_x[e], gi.edge_y[e]
    xu, xw = (ex[0], ex[1]) if index == 0 else (ex[2], ex[3])
    ye = ey[index]
    survivors: dict[str, dict[Slot, str | None]] = {}
    for du, dw in product(_SLOT_STATES, repeat=2):
        states: dict[Slot, str | None] = {(xu, ye): du, (xw, ye): dw}
        if all(
            _states_consistent(
                gi.values[(X, bit(ye))], gi.k, states, elements_of(X), [ye]
            )
            for X in _le_sets(bit(xu) | bit(xw))
        ):
            survivors["A" if du == "a" else "B"] = states
    assert len(survivors) == 2, f"edge {e} index {index}: {sorted(survivors)}"
    return survivors


def _endpoint_compatible(
    gi: GadgetInstance,
    e: int,
    side: int,
    color_states: Mapping[Slot, str | None],
    cfgs: tuple[str, str],
) -> bool:
    """Whether a vertex situation coexists with an edge orientation pair.

    Checks every small-exchange value over the joint local universe of the
    vertex block and the edge's elements at this endpoint, with the forced
    double arcs filled in on unconstrained slots and the cross slots left
    empty.
    """
    u, w = gi.graph.edges[e]
    v = (u, w)[side]
    ex, ey = gi.edge_x[e], gi.edge_y[e]
    vx, vy = gi.vertex_x[v], gi.vertex_y[v]
    states: dict[Slot, str | None] = dict(color_states)
    for i, cfg in enumerate(cfgs):
        xu, xw = (ex[0], ex[1]) if i == 0 else (ex[2], ex[3])
        states.update(_edge_slot_arcs(cfg, xu, xw, ey[i]))
    xloc = [vx[0], vx[1], ex[side], ex[2 + side]]
    yloc = [vy[0], vy[1], ey[0], ey[1]]
    for x in xloc:
        for y in yloc:
            if (x, y) not in states and gi.values[(bit(x), bit(y))] == gi.k:
                states[(x, y)] = "both"
    return all(
        _states_consistent(
            gi.values[(X, Y)], gi.k, states, elements_of(X), elements_of(Y)
        )
        for X in _le_sets(mask_of(xloc))
        for Y in _le_sets(mask_of(yloc))
    )


def colorings_from_consistent_graphs(
    gi: GadgetInstance, g: ColoredGraph | None = None
) -> set[tuple[Color, ...]]:
    """Colorings read off the arc assignments consistent with the table.

    Uses only the layout and the value table — never the coloring the
    instance was built from. Enumerates the slot states of each vertex
    block and edge sub-gadget separately (forced double arcs are pinned by
    their one-for-one values; cross slots between blocks may be left empty
    in a consistent assignment whenever any assignment exists, so fixing
    them empty collapses no colorings), stitches the blocks together
    through the per-endpoint compatibility check, and projects each
    surviving global assignment onto its vertex situations. Asserts the
    result equals the proper 4-colorings before returning it; the
    orientation multiplicity of edge sub-gadgets collapses in the
    projection.
    """
    graph = g if g is not None else ColoredGraph(gi.graph.vertices, gi.graph.edges)
    edges = graph.normalized_edges()
    if graph.vertices != gi.graph.vertices or edges != gi.graph.edges:
        raise ValueError("graph disagrees with the gadget's layout")
    if graph.vertices > 4 or len(edges) > 4:
        raise ValueError("enumeration is capped at 4 vertices and 4 edges")

    vertex_configs = [_vertex_configs(gi, v) for v in range(graph.vertices)]
    for e in range(len(edges)):
        for index in (0, 1):
            _edge_index_configs(gi, e, index)
    cfg_pairs = tuple(product("AB", repeat=2))
    edge_ok: list[dict[tuple[int, Color, tuple[str, str]], bool]] = []
    for e, (u, w) in enumerate(edges):
        table: dict[tuple[int, Color, tuple[str, str]], bool] = {}
        for side, v in ((0, u), (1, w)):
            for color, cstates in vertex_configs[v].items():
                for cfgs in cfg_pairs:
                    table[(side, color, cfgs)] = _endpoint_compatible(
                        gi, e, side, cstates, cfgs
                    )
        edge_ok.append(table)

    out = set()
    for combo in product(COLORS, repeat=graph.vertices):
        if all(
            any(
                edge_ok[e][(0, combo[u], cfgs)] and edge_ok[e][(1, combo[w], cfgs)]
                for cfgs in cfg_pairs
            )
            for e, (u, w) in enumerate(edges)
        ):
            out.add(combo)
    assert out == proper_four_colorings(graph), (
        "consistent assignments disagree with proper colorings"
    )
    return out
