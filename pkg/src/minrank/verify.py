"""Brute-force cross-checks with full access to both matroids.

Everything here may look at the hidden rank functions directly; none of it
is available to the oracle-driven solvers. The enumerations are exponential
and guarded by size caps — they exist to certify the solvers on small
instances, not to compete with them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator, NamedTuple, Sequence

from .bitset import bit, elements_of, full_mask, iter_bits, popcount
from .consistency import (
    ObservationTable,
    build_cnf,
    check_consistency,
    consistency_summary,
    solve_2sat,
)
from .core import Matroid
from .exchange import (
    ExchangeGraph,
    StarPair,
    all_shortest_paths,
    build_modified_graph,
    build_true_graph,
    intersect_modified,
    path_mask,
    survey_extensions,
)
from .oracle import MinRankOracle


class BruteReport(NamedTuple):
    """One cross-check outcome: a named quantity computed two ways."""

    instance: str
    quantity: str
    brute: object
    solver: object
    ok: bool
    witnesses: tuple = ()

    def __str__(self) -> str:
        mark = "ok" if self.ok else "MISMATCH"
        return f"[{mark}] {self.instance}: {self.quantity} brute={self.brute} solver={self.solver}"


def _require(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise ValueError(f"{what} is capped at {cap} elements, got {n}")


# -- enumeration oracles ------------------------------------------------------


def common_independent_sets(m1: Matroid, m2: Matroid) -> Iterator[int]:
    """All common independent sets, by depth-first growth (downward closure
    makes pruning on single-element extensions exact)."""
    n = m1.n

    def grow(I: int, start: int) -> Iterator[int]:
        yield I
        for e in range(start, n):
            J = I | bit(e)
            if m1.is_independent(J) and m2.is_independent(J):
                yield from grow(J, e + 1)

    yield from grow(0, 0)


def brute_max_common(m1: Matroid, m2: Matroid) -> tuple[int, int]:
    """(max size, lexicographically smallest witness)."""
    _require(m1.n, 20, "brute_max_common")
    best_size = -1
    best = 0
    for I in common_independent_sets(m1, m2):
        k = popcount(I)
        if k > best_size or (k == best_size and I < best):
            best_size, best = k, I
    return best_size, best


def brute_dual(m1: Matroid, m2: Matroid) -> tuple[int, int]:
    """Minimum of rmin(Z) + rmin(E \\ Z) over all Z, with the smallest argmin.

    Asserts that this form, the classical r1(Z) + r2(E \\ Z) form, and the
    maximum common independent set size all agree.
    """
    n = m1.n
    _require(n, 20, "brute_dual")
    E = full_mask(n)
    best_min = None
    best_classic = None
    argmin = 0
    for Z in range(E + 1):
        co = E & ~Z
        v_min = min(m1.rank(Z), m2.rank(Z)) + min(m1.rank(co), m2.rank(co))
        v_classic = m1.rank(Z) + m2.rank(co)
        if best_min is None or v_min < best_min:
            best_min, argmin = v_min, Z
        if best_classic is None or v_classic < best_classic:
            best_classic = v_classic
    size, _ = brute_max_common(m1, m2)
    assert best_min == best_classic == size, (
        f"duality mismatch: min-rank form {best_min}, classical {best_classic}, "
        f"max common {size}"
    )
    return best_min, argmin


def brute_w_maximal(
    m1: Matroid, m2: Matroid, w: Sequence[Fraction | int], k: int
) -> tuple[Fraction | None, tuple[int, ...]]:
    """Best weight among size-k common independent sets and every argmax.

    Returns (None, ()) when no size-k common independent set exists.
    """
    _require(m1.n, 16, "brute_w_maximal")
    best: Fraction | None = None
    arg: list[int] = []
    for I in common_independent_sets(m1, m2):
        if popcount(I) != k:
            continue
        weight = sum((Fraction(w[e]) for e in iter_bits(I)), Fraction(0))
        if best is None or weight > best:
            best, arg = weight, [I]
        elif weight == best:
            arg.append(I)
    return best, tuple(sorted(arg))


def weight_classes(w: Sequence[Fraction | int]) -> list[Fraction]:
    """Distinct weights in descending order."""
    return sorted({Fraction(v) for v in w}, reverse=True)


def class_vector(I: int, w: Sequence[Fraction | int]) -> tuple[int, ...]:
    """How many elements of I fall in each weight class, heaviest first."""
    classes = weight_classes(w)
    pos = {c: i for i, c in enumerate(classes)}
    counts = [0] * len(classes)
    for e in iter_bits(I):
        counts[pos[Fraction(w[e])]] += 1
    return tuple(counts)


def brute_lexmax(
    m1: Matroid, m2: Matroid, w: Sequence[Fraction | int]
) -> tuple[tuple[int, ...], int]:
    """(best class-count vector, smallest witness) over all common
    independent sets, comparing vectors lexicographically heaviest-first."""
    _require(m1.n, 16, "brute_lexmax")
    best_vec: tuple[int, ...] | None = None
    best = 0
    for I in common_independent_sets(m1, m2):
        vec = class_vector(I, w)
        if best_vec is None or vec > best_vec or (vec == best_vec and I < best):
            best_vec, best = vec, I
    assert best_vec is not None
    return best_vec, best


def circuits(m: Matroid) -> list[int]:
    """All minimal dependent sets, ascending as masks."""
    _require(m.n, 14, "circuit enumeration")
    out = []
    for X in range(1, full_mask(m.n) + 1):
        if m.is_independent(X):
            continue
        if all(m.is_independent(X & ~bit(e)) for e in iter_bits(X)):
            out.append(X)
    return out


def check_promise_no_circuit_inclusion(m1: Matroid, m2: Matroid) -> bool:
    """True when no circuit of either matroid contains a circuit of the other.

    The solvers' tractable regime only needs one containment direction to be
    empty, but the oracle hides which matroid is which, so this conservative
    symmetric check is what instance generators test against.
    """
    c1 = circuits(m1)
    c2 = circuits(m2)
    for a in c1:
        for b in c2:
            if a & b in (a, b):  # b subset of a, or a subset of b
                return False
    return True


def largest_circuit_size(m: Matroid) -> int:
    """Size of the largest circuit; 0 for a free matroid."""
    cs = circuits(m)
    return max((popcount(c) for c in cs), default=0)


# -- matchings ----------------------------------------------------------------


def perfect_matchings(
    adj: dict[int, int], left: Sequence[int], right_mask: int
) -> list[tuple[tuple[int, int], ...]]:
    """All perfect matchings covering `left`, as sorted pair tuples.

    `adj[u]` is the mask of right-side vertices adjacent to u. A matching
    must also cover right_mask exactly (sizes are expected to agree).
    """
    left = sorted(left)
    if len(left) != popcount(right_mask):
        return []
    out: list[tuple[tuple[int, int], ...]] = []

    def assign(i: int, used: int, acc: list[tuple[int, int]]) -> None:
        if i == len(left):
            out.append(tuple(acc))
            return
        u = left[i]
        for v in iter_bits(adj.get(u, 0) & right_mask & ~used):
            acc.append((u, v))
            assign(i + 1, used | bit(v), acc)
            acc.pop()

    assign(0, 0, [])
    return out


def _layer_adjacency(g: ExchangeGraph, layer: int) -> dict[int, int]:
    """Adjacency from I-side to outside-side for the given layer (1 uses the
    arcs as-is, 2 reverses them)."""
    adj: dict[int, int] = {}
    if layer == 1:
        for y in iter_bits(g.I):
            adj[y] = g.arcs1[y]
    else:
        for x in range(g.n):
            if not (g.I >> x) & 1:
                for y in iter_bits(g.arcs2[x]):
                    adj[y] = adj.get(y, 0) | bit(x)
    return adj


def matching_count(g: ExchangeGraph, layer: int, left_mask: int, right_mask: int) -> int:
    """Number of perfect matchings between I-side left_mask and outside
    right_mask in the given arc layer."""
    adj = _layer_adjacency(g, layer)
    return len(perfect_matchings(adj, elements_of(left_mask), right_mask))


# -- path/cycle enumeration ---------------------------------------------------


def simple_cycles(g: ExchangeGraph) -> list[tuple[int, ...]]:
    """All simple directed cycles, each rotated to start at its smallest
    vertex, sorted."""
    seen: set[tuple[int, ...]] = set()

    def walk(start: int, v: int, visited: int, acc: list[int]) -> None:
        for u in iter_bits(g.successors(v)):
            if u == start:
                seen.add(tuple(acc))
            elif u > start and not (visited >> u) & 1:
                acc.append(u)
                walk(start, u, visited | bit(u), acc)
                acc.pop()

    for s in range(g.n):
        walk(s, s, bit(s), [s])
    return sorted(seen)


def simple_st_paths(g: ExchangeGraph) -> list[tuple[int, ...]]:
    """All simple source-to-sink paths (single vertices included), sorted."""
    out: list[tuple[int, ...]] = []

    def walk(v: int, visited: int, acc: list[int]) -> None:
        if (g.T >> v) & 1:
            out.append(tuple(acc))
        for u in iter_bits(g.successors(v) & ~visited):
            acc.append(u)
            walk(u, visited | bit(u), acc)
            acc.pop()

    for s in iter_bits(g.S):
        walk(s, bit(s), [s])
    return sorted(out)


# -- graph audits -------------------------------------------------------------


def _report_factory(instance: str) -> Callable[..., BruteReport]:
    def make(
        quantity: str, brute: object, solver: object, witnesses: tuple = ()
    ) -> BruteReport:
        return BruteReport(instance, quantity, brute, solver, brute == solver, witnesses)

    return make


def _arc_set(g: ExchangeGraph) -> set[tuple[int, int]]:
    return set(g.arcs1_pairs()) | set(g.arcs2_pairs())


def _sure_set(g: ExchangeGraph) -> set[tuple[int, int]]:
    out = set()
    for y in iter_bits(g.I):
        for x in iter_bits(g.sure1[y]):
            out.add((y, x))
    for x in range(g.n):
        if not (g.I >> x) & 1:
            for y in iter_bits(g.sure2[x]):
                out.add((x, y))
    return out


def path_cost(
    path: Sequence[int], I: int, w: Sequence[Fraction | int]
) -> Fraction:
    """Total signed cost of a path: elements of I count positive, elements
    outside negative (swapping along the path then improves the weight by
    exactly the negated cost)."""
    total = Fraction(0)
    for v in path:
        cv = Fraction(w[v])
        total += cv if (I >> v) & 1 else -cv
    return total


def audit_graphs(
    m1: Matroid,
    m2: Matroid,
    I: int,
    w: Sequence[Fraction | int] | None = None,
    mutate: Callable[[ExchangeGraph], ExchangeGraph] | None = None,
    instance: str = "instance",
) -> list[BruteReport]:
    """Cross-check every graph construction against the true graph.

    Covers: containment of the true graph in each probe graph and in the
    intersected graph, the no-new-arcs-at-sources/sinks property, the fake
    arc shortcut properties, preservation of shortest path sets, sureness of
    sure arcs, consistency of the true graph with all observations, solvability
    of the clause system by the true arc assignment, the bounds of the
    resolved graph, its cycle/path matching-partition properties against the
    true graph, and (when I is w-maximal at its size) absence of negative
    cycles plus coincidence of shortest cheapest path vertex sets.

    `mutate` lets tests corrupt the resolved graph before the downstream
    checks; a lying graph must trip at least one report.
    """
    _require(m1.n, 10, "audit_graphs")
    if w is None:
        w = [1] * m1.n
    make = _report_factory(instance)
    reports: list[BruteReport] = []
    D = build_true_graph(m1, m2, I)
    true_arcs = _arc_set(D)
    o = MinRankOracle(m1, m2)
    survey = survey_extensions(o, I)
    if survey.pair is None:
        reports.append(make("no-probe-pair", True, True))
        return reports

    valid_pairs = [
        StarPair(s, t)
        for s in elements_of(D.S & ~D.T)
        for t in elements_of(D.T & ~D.S)
    ]
    st_mask = D.S | D.T
    first_intersected: ExchangeGraph | None = None
    for sp in valid_pairs:
        tag = f"pair({sp.s},{sp.t})"
        M = build_modified_graph(o, I, sp)
        m_arcs = _arc_set(M)
        reports.append(make(f"{tag}-st-sets", (D.S, D.T), (M.S, M.T)))
        missing = tuple(sorted(true_arcs - m_arcs))
        reports.append(make(f"{tag}-contains-true", (), missing, missing))
        extras = sorted(m_arcs - true_arcs)
        touching = tuple(
            (u, v) for u, v in extras if (st_mask >> u) & 1 or (st_mask >> v) & 1
        )
        reports.append(make(f"{tag}-extras-avoid-st", (), touching, touching))
        bad_shortcut = []
        for u, v in extras:
            if (I >> u) & 1:  # fake (y, x): true graph must have (y, t*)
                if not D.has_arc(u, sp.t):
                    bad_shortcut.append((u, v))
            else:  # fake (x, y): true graph must have (s*, y)
                if not D.has_arc(sp.s, v):
                    bad_shortcut.append((u, v))
        reports.append(
            make(f"{tag}-fake-shortcut", (), tuple(bad_shortcut), tuple(bad_shortcut))
        )
        reports.append(
            make(
                f"{tag}-shortest-paths",
                all_shortest_paths(D),
                all_shortest_paths(M),
            )
        )
        N = intersect_modified(o, I, sp)
        if first_intersected is None:
            first_intersected = N
        else:
            reports.append(
                make(
                    f"{tag}-intersected-invariant",
                    (first_intersected.arcs1, first_intersected.arcs2),
                    (N.arcs1, N.arcs2),
                )
            )

    assert first_intersected is not None
    N = first_intersected
    n_arcs = _arc_set(N)
    missing = tuple(sorted(true_arcs - n_arcs))
    reports.append(make("intersected-contains-true", (), missing, missing))
    extras = sorted(n_arcs - true_arcs)
    touching = tuple(
        (u, v) for u, v in extras if (st_mask >> u) & 1 or (st_mask >> v) & 1
    )
    reports.append(make("intersected-extras-avoid-st", (), touching, touching))
    bad_shortcut = []
    for u, v in extras:
        if (I >> u) & 1:  # fake (y, x): (y, t) must be true for every sink t
            if not all(D.has_arc(u, t) for t in elements_of(D.T)):
                bad_shortcut.append((u, v))
        else:  # fake (x, y): (s, y) must be true for every source s
            if not all(D.has_arc(s, v) for s in elements_of(D.S)):
                bad_shortcut.append((u, v))
    reports.append(
        make("intersected-fake-shortcut", (), tuple(bad_shortcut), tuple(bad_shortcut))
    )
    lying_sure = tuple(sorted(_sure_set(N) - true_arcs))
    reports.append(make("sure-arcs-true", (), lying_sure, lying_sure))
    reports.append(
        make(
            "intersected-shortest-paths",
            all_shortest_paths(D),
            all_shortest_paths(N),
        )
    )

    table = ObservationTable(o, I, N.S, N.T)
    observations = table.all_observations()
    reports.append(
        make("true-graph-consistent", "consistent", consistency_summary(D, observations))
    )

    f = build_cnf(table, N)
    truth = {arc: arc in true_arcs for arc in f.variables}
    violated = []
    if f.contradiction:
        violated.append("folded-contradiction")
    for l1, l2 in f.clauses:
        v1 = truth[f.variables[abs(l1) - 1]] == (l1 > 0)
        v2 = truth[f.variables[abs(l2) - 1]] == (l2 > 0)
        if not (v1 or v2):
            violated.append((l1, l2))
    reports.append(make("cnf-true-assignment", (), tuple(violated), tuple(violated)))

    assignment = solve_2sat(f)
    reports.append(make("cnf-satisfiable", True, assignment is not None))
    if assignment is None:
        return reports
    C = N.with_assignment(assignment)
    if mutate is not None:
        C = mutate(C)
    c_arcs = _arc_set(C)

    sure_ok = _sure_set(N) <= c_arcs <= n_arcs
    reports.append(make("resolved-within-bounds", True, sure_ok))
    bad_pairs = []
    for obs in observations:
        verdict = check_consistency(C, obs)
        if verdict == "consistent":
            continue
        if table.is_evil(obs.X, obs.Y):
            # Evil observations may go unresolved, but only by dropping
            # every arc between X and Y.
            arcs_between = any(C.arcs1[y] & obs.X for y in iter_bits(obs.Y)) or any(
                C.arcs2[x] & obs.Y for x in iter_bits(obs.X)
            )
            if verdict != "underestimated-only" or arcs_between:
                bad_pairs.append((obs, verdict))
        else:
            bad_pairs.append((obs, verdict))
    reports.append(
        make("resolved-almost-consistent", (), tuple(bad_pairs), tuple(bad_pairs))
    )

    # Matching partitions: cycles of the resolved graph, and source-sink
    # paths, must decompose over the true graph's layers.
    bad_cycles = []
    for cyc in simple_cycles(C):
        cm = path_mask(cyc)
        inside, outside = cm & I, cm & ~I
        if matching_count(D, 1, inside, outside) == 0 or (
            matching_count(D, 2, inside, outside) == 0
        ):
            bad_cycles.append(cyc)
    reports.append(make("cycle-partition", (), tuple(bad_cycles), tuple(bad_cycles)))

    bad_paths = []
    for path in simple_st_paths(C):
        pm = path_mask(path)
        s, t = path[0], path[-1]
        inside = pm & I
        if matching_count(D, 1, inside, pm & ~I & ~bit(s)) == 0 or (
            matching_count(D, 2, inside, pm & ~I & ~bit(t)) == 0
        ):
            bad_paths.append(path)
    reports.append(
        make("path-cycle-partition", (), tuple(bad_paths), tuple(bad_paths))
    )

    # Weighted checks only make sense at a w-maximal set of its cardinality.
    k = popcount(I)
    best_w, arg = brute_w_maximal(m1, m2, w, k)
    my_w = sum((Fraction(w[e]) for e in iter_bits(I)), Fraction(0))
    w_maximal = best_w is not None and my_w == best_w
    has_neg_cycle_true = any(
        path_cost(cyc, I, w) < 0 for cyc in simple_cycles(D)
    )
    reports.append(make("neg-cycle-iff-not-maximal", not w_maximal, has_neg_cycle_true))
    if w_maximal:
        neg = tuple(
            cyc for cyc in simple_cycles(C) if path_cost(cyc, I, w) < 0
        )
        reports.append(make("resolved-no-negative-cycle", (), neg, neg))

        def optimal_paths(g: ExchangeGraph) -> tuple[object, set[frozenset[int]]]:
            paths = simple_st_paths(g)
            if not paths:
                return None, set()
            best = min((path_cost(p, I, w), len(p)) for p in paths)
            return best, {
                frozenset(p)
                for p in paths
                if (path_cost(p, I, w), len(p)) == best
            }

        best_d, sets_d = optimal_paths(D)
        best_c, sets_c = optimal_paths(C)
        reports.append(make("cheapest-path-value", best_d, best_c))
        reports.append(
            make(
                "cheapest-path-vertex-sets",
                tuple(sorted(map(sorted, sets_d))),
                tuple(sorted(map(sorted, sets_c))),
            )
        )
    return reports
