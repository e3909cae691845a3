"""Rank observations on small exchanges and suspicious-arc resolution.

The intersected exchange graph leaves some arcs suspicious. Observing the
min-rank of every small exchange — remove one or two elements of I, add one
or two plain outside elements — constrains which suspicious arcs can be
real. Each observation touches at most two arcs per direction, so the
constraints compile into two-literal clauses over one Boolean per
suspicious arc. A deterministic strongly-connected-component pass solves
the system, and the chosen arcs together with the sure ones form a graph
that is consistent with every observation except possibly the pathological
two-by-two exchanges, where it errs on the side of omitting arcs.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Mapping, NamedTuple, Sequence

from .bitset import bit, elements_of, full_mask, iter_bits, popcount
from .errors import ContractViolationError
from .exchange import ExchangeGraph, StarPair, intersect_modified, survey_extensions
from .oracle import MinRankOracle

Arc = tuple[int, int]
# A literal spec for clause assembly: an arc plus a negation flag.
ArcLiteral = tuple[Arc, bool]


class LEObservation(NamedTuple):
    """One observed exchange: X joins, Y leaves, value = rmin((I | X) & ~Y)."""

    X: int
    Y: int
    value: int


class ObservationTable:
    """Lazily queried, cached rank observations for all small exchanges.

    X ranges over nonempty subsets of at most two plain outside elements
    (sources and sinks excluded), Y over nonempty subsets of at most two
    elements of I. Each distinct exchanged set is queried exactly once.
    """

    def __init__(self, o: MinRankOracle, I: int, S: int, T: int):
        self.o = o
        self.I = I
        self.S = S
        self.T = T
        self.k = popcount(I)
        ground = getattr(o, "ground", full_mask(o.n))
        self._xs = elements_of(ground & ~(I | S | T))
        self._ys = elements_of(I)
        self._cache: dict[int, int] = {}

    def x_sets(self) -> list[int]:
        singles = [bit(x) for x in self._xs]
        pairs = [bit(a) | bit(b) for a, b in combinations(self._xs, 2)]
        return singles + pairs

    def y_sets(self) -> list[int]:
        singles = [bit(y) for y in self._ys]
        pairs = [bit(a) | bit(b) for a, b in combinations(self._ys, 2)]
        return singles + pairs

    def value(self, X: int, Y: int) -> int:
        key = (self.I | X) & ~Y
        got = self._cache.get(key)
        if got is None:
            got = self.o.rmin(key)
            self._cache[key] = got
        return got

    def observation(self, X: int, Y: int) -> LEObservation:
        return LEObservation(X, Y, self.value(X, Y))

    def pairs(self) -> Iterator[tuple[int, int]]:
        for X in self.x_sets():
            for Y in self.y_sets():
                yield X, Y

    def all_observations(self) -> list[LEObservation]:
        return [self.observation(X, Y) for X, Y in self.pairs()]

    def is_high(self, X: int, Y: int) -> bool:
        return self.value(X, Y) >= self.k - popcount(Y) + 1

    def subpair_values(self, X: int, Y: int) -> dict[tuple[int, int], int]:
        """Values of every proper subpair of (X, Y)."""
        out: dict[tuple[int, int], int] = {}
        for Xp in _nonempty_subsets(X):
            for Yp in _nonempty_subsets(Y):
                if (Xp, Yp) != (X, Y):
                    out[(Xp, Yp)] = self.value(Xp, Yp)
        return out

    def is_evil(self, X: int, Y: int) -> bool:
        if popcount(X) != 2 or popcount(Y) != 2:
            return False
        if self.value(X, Y) != self.k - 1:
            return False
        return is_evil(self.observation(X, Y), self.subpair_values(X, Y))

    def evil_pairs(self) -> list[tuple[int, int]]:
        return [
            (X, Y)
            for X in self.x_sets()
            for Y in self.y_sets()
            if popcount(X) == 2 and popcount(Y) == 2 and self.is_evil(X, Y)
        ]


def _nonempty_subsets(mask: int) -> list[int]:
    els = elements_of(mask)
    out = []
    for r in range(1, len(els) + 1):
        for combo in combinations(els, r):
            m = 0
            for e in combo:
                m |= bit(e)
            out.append(m)
    return out


def observe_le_pairs(
    o: MinRankOracle, I: int, S: int, T: int
) -> list[LEObservation]:
    """All small-exchange observations in deterministic order."""
    return ObservationTable(o, I, S, T).all_observations()


def is_evil(obs: LEObservation, subpairs: Mapping[tuple[int, int], int]) -> bool:
    """A two-by-two exchange is evil when its value sits one below the size
    of I and every proper subpair shows no rank slack at all — i.e. each
    subpair (X', Y') observes exactly |I| - |Y'|.

    `subpairs` must supply the value of every proper subpair; a missing one
    is a precondition error.
    """
    if popcount(obs.X) != 2 or popcount(obs.Y) != 2:
        return False
    k = obs.value + 1  # evil forces value == |I| - 1
    for Xp in _nonempty_subsets(obs.X):
        for Yp in _nonempty_subsets(obs.Y):
            if (Xp, Yp) == (obs.X, obs.Y):
                continue
            v = subpairs.get((Xp, Yp))
            if v is None:
                raise ValueError(f"missing subpair value for X={Xp:#x}, Y={Yp:#x}")
            if v != k - popcount(Yp):
                return False
    return True


# -- clause compilation -------------------------------------------------------


class TwoSat:
    """A two-literal clause system over suspicious arcs.

    Variables are the suspicious arcs in sorted order. Clause literals are
    ±(index + 1); unit clauses double their literal. `contradiction` is set
    when constant folding produced an always-false clause, making the whole
    system unsatisfiable regardless of the variables.
    """

    def __init__(self, variables: Sequence[Arc]):
        self.variables: tuple[Arc, ...] = tuple(variables)
        self.index: dict[Arc, int] = {a: i for i, a in enumerate(self.variables)}
        self.clauses: list[tuple[int, int]] = []
        self.contradiction = False

    def add(self, l1: int | bool, l2: int | bool) -> None:
        """Add a disjunction of two folded literals (True/False/signed int)."""
        if l1 is True or l2 is True:
            return
        if l1 is False and l2 is False:
            self.contradiction = True
            return
        if l1 is False:
            assert isinstance(l2, int)
            self.clauses.append((l2, l2))
        elif l2 is False:
            assert isinstance(l1, int)
            self.clauses.append((l1, l1))
        else:
            assert isinstance(l1, int) and isinstance(l2, int)
            self.clauses.append((l1, l2))

    def to_dimacs(self) -> str:
        lines = [f"c {i + 1} = arc ({u},{v})" for i, (u, v) in enumerate(self.variables)]
        lines.append(f"p cnf {len(self.variables)} {len(self.clauses)}")
        if self.contradiction:
            lines.append("c contradiction: a constant-false clause was folded away")
        lines.extend(f"{l1} {l2} 0" for l1, l2 in self.clauses)
        return "\n".join(lines) + "\n"


def _arc_literal(g: ExchangeGraph, f: TwoSat, arc: Arc, negated: bool) -> int | bool:
    """Fold an arc literal: sure arcs are constant True, absent arcs constant
    False, suspicious arcs become signed variable literals."""
    u, v = arc
    if not g.has_arc(u, v):
        present: int | bool = False
    elif g.is_sure(u, v):
        present = True
    else:
        present = f.index[arc] + 1
    if isinstance(present, bool):
        return (not present) if negated else present
    return -present if negated else present


def build_cnf(
    table: ObservationTable,
    g: ExchangeGraph,
    extra: Sequence[Sequence[ArcLiteral]] = (),
    emit_subsumed: bool = False,
) -> TwoSat:
    """Compile every observation into two-literal clauses.

    Clause tables, with a = arcs into I and b = arcs out of I:

    * one-for-one, value |I|:     (a | b), (~a | b), (a | ~b)
    * one-for-one, value |I|-1:   (~a | ~b)
    * one-for-two, value |I|-1:   (a1 | a2), (b1 | b2)
    * one-for-two, value |I|-2:   (~a1 | ~b2), (~a2 | ~b1)
    * two-for-one, value |I|:     (a1 | a2), (b1 | b2)
    * two-for-one, value |I|-1:   (~a1 | ~b2), (~a2 | ~b1)
    * two-for-two, value |I|-2:   (~a11 | ~b22), (~a12 | ~b21),
                                  (~a21 | ~b12), (~a22 | ~b11)
    * two-for-two, value |I|-1, evil: eight clauses equating each a_{i,j}
      with its partner b_{3-i,3-j}
    * anything else: no clauses (subpair clauses already cover it)

    `emit_subsumed` re-adds the diagonal clauses (~a1 | ~b1), (~a2 | ~b2)
    in the one-for-two and two-for-one low cases; they are implied by the
    one-for-one subpair clauses and normally omitted. `extra` appends
    pre-folded arc-literal clauses (used by the bounded-circuit solver).
    """
    variables = sorted(g.suspicious_pairs())
    f = TwoSat(variables)
    k = table.k

    def lit(arc: Arc, neg: bool = False) -> int | bool:
        return _arc_literal(g, f, arc, neg)

    for X, Y in table.pairs():
        v = table.value(X, Y)
        xs = elements_of(X)
        ys = elements_of(Y)
        if len(xs) == 1 and len(ys) == 1:
            a = (xs[0], ys[0])
            b = (ys[0], xs[0])
            if v == k:
                f.add(lit(a), lit(b))
                f.add(lit(a, True), lit(b))
                f.add(lit(a), lit(b, True))
            else:
                f.add(lit(a, True), lit(b, True))
        elif len(xs) == 1 and len(ys) == 2:
            a1, a2 = (xs[0], ys[0]), (xs[0], ys[1])
            b1, b2 = (ys[0], xs[0]), (ys[1], xs[0])
            if v == k - 1:
                f.add(lit(a1), lit(a2))
                f.add(lit(b1), lit(b2))
            elif v == k - 2:
                f.add(lit(a1, True), lit(b2, True))
                f.add(lit(a2, True), lit(b1, True))
                if emit_subsumed:
                    f.add(lit(a1, True), lit(b1, True))
                    f.add(lit(a2, True), lit(b2, True))
        elif len(xs) == 2 and len(ys) == 1:
            a1, a2 = (xs[0], ys[0]), (xs[1], ys[0])
            b1, b2 = (ys[0], xs[0]), (ys[0], xs[1])
            if v == k:
                f.add(lit(a1), lit(a2))
                f.add(lit(b1), lit(b2))
            elif v == k - 1:
                f.add(lit(a1, True), lit(b2, True))
                f.add(lit(a2, True), lit(b1, True))
                if emit_subsumed:
                    f.add(lit(a1, True), lit(b1, True))
                    f.add(lit(a2, True), lit(b2, True))
        else:
            # two-for-two; a[i][j] = (x_i, y_j), b[i][j] = (y_j, x_i)
            a = [[(x, y) for y in ys] for x in xs]
            b = [[(y, x) for y in ys] for x in xs]
            if v == k - 2:
                f.add(lit(a[0][0], True), lit(b[1][1], True))
                f.add(lit(a[0][1], True), lit(b[1][0], True))
                f.add(lit(a[1][0], True), lit(b[0][1], True))
                f.add(lit(a[1][1], True), lit(b[0][0], True))
            elif v == k - 1 and table.is_evil(X, Y):
                for i in (0, 1):
                    for j in (0, 1):
                        pa = a[i][j]
                        pb = b[1 - i][1 - j]
                        f.add(lit(pa, True), lit(pb))
                        f.add(lit(pa), lit(pb, True))
    for clause in extra:
        if len(clause) == 1:
            (arc1, neg1) = clause[0]
            f.add(lit(arc1, neg1), lit(arc1, neg1))
        else:
            (arc1, neg1), (arc2, neg2) = clause
            f.add(lit(arc1, neg1), lit(arc2, neg2))
    return f


def solve_2sat(f: TwoSat) -> dict[Arc, bool] | None:
    """Deterministic satisfiability: implication graph, Tarjan components
    visited in fixed node order (negative literal before positive, variables
    ascending), variable true iff its positive literal's component comes
    first. Returns None when unsatisfiable.
    """
    if f.contradiction:
        return None
    m = len(f.variables)
    nn = 2 * m
    adj: list[list[int]] = [[] for _ in range(nn)]

    def node(lit: int) -> int:
        v = abs(lit) - 1
        return 2 * v + (1 if lit > 0 else 0)

    for l1, l2 in f.clauses:
        adj[node(-l1)].append(node(l2))
        adj[node(-l2)].append(node(l1))
    index = [-1] * nn
    low = [0] * nn
    comp = [-1] * nn
    on_stack = [False] * nn
    stack: list[int] = []
    counter = 0
    comp_count = 0
    for root in range(nn):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descend = False
            while pi < len(adj[v]):
                u = adj[v][pi]
                pi += 1
                if index[u] == -1:
                    work.append((v, pi))
                    work.append((u, 0))
                    descend = True
                    break
                if on_stack[u] and index[u] < low[v]:
                    low[v] = index[u]
            if descend:
                continue
            if low[v] == index[v]:
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp[u] = comp_count
                    if u == v:
                        break
                comp_count += 1
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
        # next root
    result: dict[Arc, bool] = {}
    for i, arc in enumerate(f.variables):
        if comp[2 * i] == comp[2 * i + 1]:
            return None
        result[arc] = comp[2 * i + 1] < comp[2 * i]
    for l1, l2 in f.clauses:
        v1 = result[f.variables[abs(l1) - 1]] == (l1 > 0)
        v2 = result[f.variables[abs(l2) - 1]] == (l2 > 0)
        assert v1 or v2, "component assignment violated a clause"
    return result


# -- assembled graphs ---------------------------------------------------------


def almost_consistent_graph(
    o: MinRankOracle, I: int, sp: StarPair | None = None
) -> ExchangeGraph:
    """Resolve every suspicious arc of the intersected graph.

    Builds the intersected graph for the given (or lexicographically
    smallest) probe pair, gathers all small-exchange observations, compiles
    and solves the clause system, and keeps exactly the sure arcs plus the
    suspicious arcs assigned true. Genuine oracles always admit a solution;
    unsatisfiability is a contract violation.
    """
    if sp is None:
        survey = survey_extensions(o, I)
        if survey.pair is None:
            raise ValueError("no probe pair exists for I; nothing to resolve")
        sp = survey.pair
    g = intersect_modified(o, I, sp)
    table = ObservationTable(o, I, g.S, g.T)
    f = build_cnf(table, g)
    assignment = solve_2sat(f)
    if assignment is None:
        raise ContractViolationError(
            "arc-constraint system unsatisfiable; oracle is not a matroid pair"
        )
    return g.with_assignment(assignment)


def check_consistency(g: ExchangeGraph, obs: LEObservation) -> str:
    """Classify one observation against the graph's arcs.

    high observation (value > |I| - |Y|) wants both directions populated
    between Y and X; a low one forbids having both. Verdicts:
    ``consistent``, ``underestimated-only`` (arcs must be added), or
    ``overestimated-only`` (arcs must be removed). ``neither`` never occurs
    for a single observation; it is reserved for graph-wide summaries.
    """
    k = popcount(g.I)
    high = obs.value >= k - popcount(obs.Y) + 1
    dir1 = any(g.arcs1[y] & obs.X for y in iter_bits(obs.Y))
    dir2 = any(g.arcs2[x] & obs.Y for x in iter_bits(obs.X))
    if high:
        return "consistent" if (dir1 and dir2) else "underestimated-only"
    return "overestimated-only" if (dir1 and dir2) else "consistent"


def consistency_summary(
    g: ExchangeGraph, observations: Sequence[LEObservation]
) -> str:
    """Roll-up over all observations: ``consistent`` when every one is,
    ``overestimated-only``/``underestimated-only`` when all violations lean
    one way, ``neither`` when both kinds appear."""
    over = under = False
    for obs in observations:
        verdict = check_consistency(g, obs)
        if verdict == "overestimated-only":
            over = True
        elif verdict == "underestimated-only":
            under = True
    if over and under:
        return "neither"
    if over:
        return "overestimated-only"
    if under:
        return "underestimated-only"
    return "consistent"
