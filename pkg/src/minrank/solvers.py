"""Solvers that see a matroid pair only through its minimum-rank oracle.

Cardinality augmentation, weighted augmentation over resolved
exchangeability graphs, and the three tractable weighted regimes
(no-circuit-inclusion promise, bounded circuit size, lexicographic
maximality), plus the approximation wrapper for positive weights.

Everything here must work through `rmin` alone; the visibility audit in the
test suite holds this module to that.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .bitset import (
    bit,
    elements_of,
    format_set,
    full_mask,
    iter_bits,
    popcount,
    subsets_of,
)
from .consistency import ArcLiteral, ObservationTable, build_cnf, solve_2sat
from .errors import ContractViolationError, NegativeCycleError
from .exchange import (
    DirectAugment,
    ExchangeGraph,
    StarPair,
    build_modified_graph,
    find_star_pair,
    intersect_modified,
    path_mask,
    reachability_certificate,
    shortest_augmenting_path,
    survey_extensions,
)
from .oracle import MinRankOracle, RestrictedOracle

Oracle = MinRankOracle | RestrictedOracle


class Augmented(NamedTuple):
    """A common independent set one element larger."""

    J: int


class Certificate(NamedTuple):
    """A set Z with rmin(Z) + rmin(E \\ Z) = |I|, proving maximality."""

    Z: int


SolveResult = Augmented | Certificate


class AugmentStep(NamedTuple):
    """One trace line of a solver run."""

    k: int
    action: str
    detail: str
    queries: int

    def __str__(self) -> str:
        return f"k={self.k} {self.action} {self.detail} queries={self.queries}"


class CostedVertex(NamedTuple):
    """A vertex with its signed traversal cost: w(e) inside I, -w(e)
    outside, so that augmenting along a path of total cost c changes the
    weight by exactly -c."""

    element: int
    cost: object


class LexCost:
    """Path cost under class-count weights, compared lexicographically.

    An element of the i-th heaviest weight class contributes +/-1 in
    coordinate i. Since any simple path carries fewer than the ground-set
    size of any one class, comparing count vectors lexicographically orders
    path costs exactly as the huge explicit weights (n+1)^(classes-i) would,
    without ever forming them.
    """

    __slots__ = ("counts",)

    def __init__(self, counts: Iterable[int]):
        self.counts = tuple(counts)

    @classmethod
    def zero(cls, classes: int) -> "LexCost":
        return cls((0,) * classes)

    @classmethod
    def unit(cls, index: int, classes: int) -> "LexCost":
        return cls(tuple(1 if i == index else 0 for i in range(classes)))

    def __add__(self, other: "LexCost") -> "LexCost":
        return LexCost(a + b for a, b in zip(self.counts, other.counts, strict=True))

    def __neg__(self) -> "LexCost":
        return LexCost(-c for c in self.counts)

    def __lt__(self, other: "LexCost") -> bool:
        return self.counts < other.counts

    def __le__(self, other: "LexCost") -> bool:
        return self.counts <= other.counts

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LexCost) and self.counts == other.counts

    def __hash__(self) -> int:
        return hash(self.counts)

    def __repr__(self) -> str:
        return f"LexCost{self.counts}"


def _ground(o: Oracle) -> int:
    return getattr(o, "ground", full_mask(o.n))


def total_weight(w: Sequence, I: int) -> Fraction:
    return sum((Fraction(w[e]) for e in iter_bits(I)), Fraction(0))


def signed_costs(w: Sequence, I: int, ground: int) -> list[CostedVertex]:
    """Vertex costs per the augmentation sign convention."""
    out = []
    for e in elements_of(ground):
        wv = w[e] if isinstance(w[e], LexCost) else Fraction(w[e])
        out.append(CostedVertex(e, wv if (I >> e) & 1 else -wv))
    return out


# -- paths in resolved graphs -------------------------------------------------


def shortest_cheapest_path(
    g: ExchangeGraph, costs: Sequence[CostedVertex]
) -> list[int] | None:
    """Minimum (total cost, length) source-to-sink path, ties broken toward
    the smallest vertex sequence; None when no sink is reachable.

    Dynamic program over suffix labels relaxed to a fixed point; vertex
    costs include both endpoints. Labels can only keep improving past the
    vertex-count round in the presence of a negative-cost cycle, which is a
    contract violation here: the caller guarantees a weight-maximal base
    set, and those never see one.
    """
    c = {cv.element: cv.cost for cv in costs}
    label: dict[int, tuple] = {}
    for t in elements_of(g.T):
        label[t] = (c[t], 1)
    vertices = [v for v in range(g.n) if c.get(v) is not None]
    rounds = 0
    while True:
        changed = False
        for u in vertices:
            best = label.get(u)
            for v in iter_bits(g.successors(u)):
                lv = label.get(v)
                if lv is None:
                    continue
                cand = (c[u] + lv[0], lv[1] + 1)
                if best is None or cand < best:
                    best = cand
                    changed = True
            if best is not None:
                label[u] = best
        if not changed:
            break
        rounds += 1
        if rounds > len(vertices):
            raise NegativeCycleError(
                "negative-cost cycle in the exchangeability graph; the base "
                "set was not weight-maximal or the graph is inconsistent"
            )
    start = None
    best = None
    for s in elements_of(g.S):
        ls = label.get(s)
        if ls is not None and (best is None or ls < best):
            best, start = ls, s
    if start is None:
        return None
    path = [start]
    v = start
    cost_v, len_v = label[v]
    while len_v > 1:
        v = min(
            u
            for u in iter_bits(g.successors(v))
            if u in label
            and label[u][1] == len_v - 1
            and c[v] + label[u][0] == cost_v
        )
        path.append(v)
        cost_v, len_v = label[v]
    return path


# -- cardinality --------------------------------------------------------------


def augment_min_rank(
    o: Oracle, I: int, sp: StarPair | None = None
) -> SolveResult:
    """One cardinality augmentation step.

    In order: if some single element lifts the min-rank, add the smallest
    such; if every pairwise extension stays flat, the whole ground set is a
    duality certificate; otherwise build the probe-pair graph and either
    swap along a shortest source-sink path or return the set of vertices
    that reach a sink. `sp` forces the probe pair (outputs do not depend on
    the choice)."""
    if not o.is_common_independent(I):
        raise ValueError("I is not a common independent set")
    probe = find_star_pair(o, I)
    if probe is None:
        return Certificate(_ground(o))
    if isinstance(probe, DirectAugment):
        return Augmented(I | bit(probe.x))
    g = build_modified_graph(o, I, sp if sp is not None else probe)
    path = shortest_augmenting_path(g)
    if path is None:
        return Certificate(reachability_certificate(g))
    return Augmented(I ^ path_mask(path))


class CardinalityRun(NamedTuple):
    """Result of a full maximum-cardinality solve."""

    I: int
    Z: int
    queries: int
    trace: tuple[AugmentStep, ...]


def max_cardinality(o: Oracle) -> CardinalityRun:
    """Grow from the empty set one augmentation at a time until a duality
    certificate proves maximality."""
    I = 0
    steps: list[AugmentStep] = []
    base = o.query_count
    while True:
        before = o.query_count
        res = augment_min_rank(o, I)
        spent = o.query_count - before
        k = popcount(I)
        if isinstance(res, Certificate):
            steps.append(
                AugmentStep(k, "certificate", f"Z={format_set(res.Z)}", spent)
            )
            return CardinalityRun(I, res.Z, o.query_count - base, tuple(steps))
        steps.append(
            AugmentStep(k, "augment", f"J={format_set(res.J)}", spent)
        )
        I = res.J


# -- weighted augmentation ----------------------------------------------------


def _resolve(
    o: Oracle,
    I: int,
    sp: StarPair,
    extra: Sequence[Sequence[ArcLiteral]] = (),
) -> tuple[ExchangeGraph | None, ExchangeGraph, ObservationTable]:
    """Steps 3-4 of the weighted augmentation: intersected graph,
    observations, clause system, resolved graph (None if unsatisfiable)."""
    N = intersect_modified(o, I, sp)
    table = ObservationTable(o, I, N.S, N.T)
    f = build_cnf(table, N, extra=extra)
    assignment = solve_2sat(f)
    if assignment is None:
        return None, N, table
    return N.with_assignment(assignment), N, table


def _heaviest_direct(direct: Sequence[int], w: Sequence) -> int:
    def weigh(x: int):
        return w[x] if isinstance(w[x], LexCost) else Fraction(w[x])

    best = direct[0]
    for x in direct[1:]:
        if weigh(x) > weigh(best):
            best = x
    return best


def _trace(
    trace: list[AugmentStep] | None,
    k: int,
    action: str,
    detail: str,
    queries: int,
) -> None:
    if trace is not None:
        trace.append(AugmentStep(k, action, detail, queries))


def cheapest_path_augment(
    o: Oracle,
    w: Sequence,
    I: int,
    sp: StarPair | None = None,
    trace: list[AugmentStep] | None = None,
) -> SolveResult:
    """One weighted augmentation step at a weight-maximal I.

    Steps: (1) every pairwise extension flat -> ground-set certificate;
    (2) no valid probe pair -> add the heaviest rank-lifting element
    (smallest id on ties); (3) intersected graph from a probe pair;
    (4) observations -> clause system -> resolved graph; (5) swap along a
    shortest cheapest source-sink path, or certify with the set of vertices
    that reach a sink.

    The result is weight-maximal at |I|+1 under any of the three tractable
    regimes; on arbitrary instances it still runs and the verification
    module audits the output.
    """
    before = o.query_count
    k = popcount(I)
    survey = survey_extensions(o, I)
    if survey.all_flat:
        Z = _ground(o)
        _trace(trace, k, "certificate", f"Z={format_set(Z)}", o.query_count - before)
        return Certificate(Z)
    if survey.pair is None:
        x = _heaviest_direct(survey.direct, w)
        _trace(trace, k, "direct", f"x={x}", o.query_count - before)
        return Augmented(I | bit(x))
    C, _, _ = _resolve(o, I, sp if sp is not None else survey.pair)
    if C is None:
        raise ContractViolationError(
            "arc-constraint system unsatisfiable; oracle is not a matroid pair"
        )
    path = shortest_cheapest_path(C, signed_costs(w, I, _ground(o)))
    if path is None:
        Z = reachability_certificate(C)
        _trace(trace, k, "certificate", f"Z={format_set(Z)}", o.query_count - before)
        return Certificate(Z)
    if trace is not None:
        cost = _zero_like(w)
        for cv in signed_costs(w, I, path_mask(path)):
            cost = cost + cv.cost
        _trace(
            trace, k, "path", f"P={tuple(path)} cost={cost}", o.query_count - before
        )
    return Augmented(I ^ path_mask(path))


def _zero_like(w: Sequence) -> object:
    for v in w:
        if isinstance(v, LexCost):
            return LexCost.zero(len(v.counts))
    return Fraction(0)


class Level(NamedTuple):
    """Weight-maximal common independent set at one cardinality."""

    k: int
    I: int
    weight: Fraction


class WeightedRun(NamedTuple):
    """Per-cardinality maxima plus the terminating certificate."""

    levels: tuple[Level, ...]
    certificate: int
    queries: int
    trace: tuple[AugmentStep, ...]

    @property
    def best(self) -> Level:
        """The user-facing optimum: heaviest level, smallest k on ties."""
        return max(self.levels, key=lambda lv: (lv.weight, -lv.k))


def _run_levels(o: Oracle, w: Sequence, augment, weigh=None) -> WeightedRun:
    weigh = weigh if weigh is not None else (lambda I: total_weight(w, I))
    base = o.query_count
    steps: list[AugmentStep] = []
    I = 0
    levels = [Level(0, 0, weigh(0))]
    while True:
        res = augment(o, w, I, steps)
        if isinstance(res, Certificate):
            return WeightedRun(
                tuple(levels), res.Z, o.query_count - base, tuple(steps)
            )
        I = res.J
        levels.append(Level(popcount(I), I, weigh(I)))


def weighted_no_circuit_inclusion(o: Oracle, w: Sequence) -> WeightedRun:
    """Weight-maximal common independent sets of every cardinality, valid
    when no circuit of either matroid contains a circuit of the other (the
    promise makes every resolved graph fully consistent)."""
    return _run_levels(
        o, w, lambda oo, ww, I, tr: cheapest_path_augment(oo, ww, I, trace=tr)
    )


# -- bounded circuit size -----------------------------------------------------


_SKIP = object()


def _fpt_clause(
    N: ExchangeGraph,
    X: int,
    Y: int,
    J: int,
    Jp: int,
    side: int,
) -> object:
    """Extra clause for one unresolved two-for-two observation under a
    guessed exclusion set, following the bounded-circuit analysis.

    Returns None (no clause needed), _SKIP (the guess is self-contradictory
    and must be abandoned), or a clause as arc-literal pairs. `side` says
    which layer the suspicious-head bound J lives on: 2 constrains arcs
    into I, 1 arcs out of I.
    """

    def arc(x: int, y: int) -> tuple[int, int]:
        return (x, y) if side == 2 else (y, x)

    xs = elements_of(X)
    outside_J = Y & ~J
    if outside_J:
        yc = min(elements_of(outside_J))
        yo = elements_of(Y & ~bit(yc))[0]
        if any(N.has_arc(*arc(x, yc)) for x in xs):
            # Any such arc is sure (yc is not a suspicious head), so the
            # base clauses already rule out underestimation.
            return None
        return ((arc(xs[0], yo), False), (arc(xs[1], yo), False))
    inside = Y & Jp
    if inside == Y:
        return _SKIP
    if popcount(inside) == 1:
        yo = elements_of(Y & ~inside)[0]
        return ((arc(xs[0], yo), False), (arc(xs[1], yo), False))
    return None


def _validate_candidate(o: Oracle, I: int, path: Sequence[int]) -> bool:
    """Constructive acceptance test for a guessed augmentation: the swap
    must lift the min-rank, and every even prefix ending inside I and even
    suffix starting inside I must stay a common independent set of size |I|
    (the property a genuine shortest cheapest path always has)."""
    k = popcount(I)
    J = I ^ path_mask(path)
    if popcount(J) != k + 1 or o.rmin(J) != k + 1:
        return False
    for m in range(2, len(path), 2):
        if o.rmin(I ^ path_mask(path[:m])) != k:
            return False
    for j in range(1, len(path), 2):
        if o.rmin(I ^ path_mask(path[j:])) != k:
            return False
    return True


def _fpt_augment(
    o: Oracle,
    w: Sequence,
    I: int,
    gamma: int,
    sp: StarPair | None = None,
    trace: list[AugmentStep] | None = None,
) -> SolveResult:
    before = o.query_count
    k = popcount(I)
    survey = survey_extensions(o, I)
    if survey.all_flat:
        Z = _ground(o)
        _trace(trace, k, "certificate", f"Z={format_set(Z)}", o.query_count - before)
        return Certificate(Z)
    if survey.pair is None:
        x = _heaviest_direct(survey.direct, w)
        _trace(trace, k, "direct", f"x={x}", o.query_count - before)
        return Augmented(I | bit(x))
    pair = sp if sp is not None else survey.pair
    N = intersect_modified(o, I, pair)
    table = ObservationTable(o, I, N.S, N.T)
    J1 = 0
    J2 = 0
    for u, v in N.suspicious_pairs():
        if (N.I >> u) & 1:
            J1 |= bit(u)
        else:
            J2 |= bit(v)
    side = 2 if popcount(J2) <= popcount(J1) else 1
    J = J2 if side == 2 else J1
    if popcount(J) > gamma:
        raise ContractViolationError(
            f"suspicious-arc heads exceed the circuit-size bound {gamma} "
            "on both layers; the bound does not hold for this oracle"
        )
    evils = table.evil_pairs()
    candidates: list[int] = []
    certificates: list[int] = []
    guesses = 0
    for Jp in subsets_of(J):
        extra: list[tuple[ArcLiteral, ArcLiteral]] = []
        skip = False
        for X, Y in evils:
            clause = _fpt_clause(N, X, Y, J, Jp, side)
            if clause is _SKIP:
                skip = True
                break
            if clause is not None:
                extra.append(clause)  # type: ignore[arg-type]
        if skip:
            continue
        guesses += 1
        f = build_cnf(table, N, extra=extra)
        assignment = solve_2sat(f)
        if assignment is None:
            continue
        C = N.with_assignment(assignment)
        try:
            path = shortest_cheapest_path(C, signed_costs(w, I, _ground(o)))
        except NegativeCycleError:
            continue  # only a wrong guess can fabricate one
        if path is None:
            certificates.append(reachability_certificate(C))
            continue
        if _validate_candidate(o, I, path):
            candidates.append(I ^ path_mask(path))
    _trace(
        trace,
        k,
        "guesses",
        f"J={format_set(J)} tried={guesses} candidates={len(candidates)}",
        o.query_count - before,
    )
    if candidates:
        best = None
        best_w = None
        for cand in sorted(candidates):
            cw = total_weight(w, cand)
            if best_w is None or cw > best_w:
                best, best_w = cand, cw
        assert best is not None
        return Augmented(best)
    ground = _ground(o)
    for Z in certificates:
        if o.rmin(Z) + o.rmin(ground & ~Z) == k:
            return Certificate(Z)
    raise ContractViolationError(
        "no guess yielded a valid augmentation or a verifying certificate; "
        "the circuit-size bound does not hold for this oracle"
    )


def weighted_fpt_circuit(o: Oracle, w: Sequence, gamma: int) -> WeightedRun:
    """Weight-maximal common independent sets of every cardinality when one
    matroid has no circuit larger than `gamma`.

    Each augmentation guesses, among the at most `gamma` elements of I with
    suspicious arcs on the small-circuit layer, which ones truly have none,
    patches the clause system per guess (at most 2^gamma guesses), and
    accepts the heaviest candidate that passes the swap checks.
    """
    if gamma < 2:
        raise ValueError("circuit-size bound must be at least 2")
    return _run_levels(
        o, w, lambda oo, ww, I, tr: _fpt_augment(oo, ww, I, gamma, trace=tr)
    )


# -- lexicographic maximality and approximation -------------------------------


def weight_classes(w: Sequence, ground: int) -> list[Fraction]:
    """Distinct weights on the ground set, heaviest first."""
    return sorted({Fraction(w[e]) for e in iter_bits(ground)}, reverse=True)


def class_vector(w: Sequence, ground: int, I: int) -> tuple[int, ...]:
    """Element counts of I per weight class, heaviest class first."""
    classes = weight_classes(w, ground)
    pos = {c: i for i, c in enumerate(classes)}
    counts = [0] * len(classes)
    for e in iter_bits(I):
        counts[pos[Fraction(w[e])]] += 1
    return tuple(counts)


class LexmaxRun(NamedTuple):
    """Result of a lexicographic-maximum solve."""

    I: int
    vector: tuple[int, ...]
    levels: tuple[Level, ...]
    certificate: int
    queries: int
    trace: tuple[AugmentStep, ...]


def lexicographic_max(o: Oracle, w: Sequence) -> LexmaxRun:
    """The common independent set taking as many heaviest elements as
    possible, then second-heaviest, and so on.

    Runs the weighted augmentation with class-count costs (exactly the
    proof's huge weights, compared without forming them); the per-level
    results are class-vector-maximal at each cardinality and the best
    vector over levels is the lexicographic maximum."""
    ground = _ground(o)
    classes = weight_classes(w, ground)
    ell = len(classes)
    pos = {c: i for i, c in enumerate(classes)}
    lw: list = [LexCost.zero(ell)] * o.n
    for e in iter_bits(ground):
        lw[e] = LexCost.unit(pos[Fraction(w[e])], ell)
    run = _run_levels(
        o,
        lw,
        lambda oo, ww, I, tr: cheapest_path_augment(oo, ww, I, trace=tr),
        weigh=lambda I: total_weight(w, I),
    )
    best_I = 0
    best_vec = class_vector(w, ground, 0)
    for lv in run.levels:
        vec = class_vector(w, ground, lv.I)
        if vec > best_vec:
            best_vec, best_I = vec, lv.I
    return LexmaxRun(
        best_I, best_vec, run.levels, run.certificate, run.queries, run.trace
    )


class ApproxResult(NamedTuple):
    """Output of the positive-weight approximation."""

    I: int
    weight: Fraction
    guarantee: Fraction
    alpha: Fraction | None
    queries: int


def approx_max_weight(o: Oracle, w: Sequence) -> ApproxResult:
    """Drop non-positive elements, take the lexicographic maximum, and
    report the worst-case ratio min{1, alpha/2}, where alpha is the
    smallest ratio between consecutive distinct positive weights (a single
    positive weight class is solved exactly, guarantee 1)."""
    base = o.query_count
    ground = _ground(o)
    pos = 0
    for e in iter_bits(ground):
        if Fraction(w[e]) > 0:
            pos |= bit(e)
    if pos == 0:
        return ApproxResult(0, Fraction(0), Fraction(1), None, 0)
    run = lexicographic_max(RestrictedOracle(o, pos), w)
    distinct = weight_classes(w, pos)
    if len(distinct) <= 1:
        alpha = None
        guarantee = Fraction(1)
    else:
        alpha = min(
            distinct[i] / distinct[i + 1] for i in range(len(distinct) - 1)
        )
        guarantee = min(Fraction(1), alpha / 2)
    return ApproxResult(
        run.I, total_weight(w, run.I), guarantee, alpha, o.query_count - base
    )
