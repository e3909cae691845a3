"""Randomized invariant checks over generated inputs."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from minrank import (
    LexCost,
    MinRankOracle,
    TwoSat,
    bit,
    dumps,
    elements_of,
    format_set,
    full_mask,
    iter_bits,
    loads,
    mask_of,
    popcount,
    random_instance,
    solve_2sat,
)

# -- bitsets -----------------------------------------------------------------


@given(st.integers(min_value=0, max_value=(1 << 64) - 1))
def test_bitset_round_trip(mask):
    xs = elements_of(mask)
    assert xs == sorted(xs)
    assert mask_of(xs) == mask
    assert list(iter_bits(mask)) == xs
    assert popcount(mask) == len(xs)
    assert format_set(mask) == "{" + ",".join(str(x) for x in xs) + "}"


@given(st.lists(st.integers(min_value=0, max_value=63), max_size=12))
def test_mask_of_ignores_duplicates_and_order(xs):
    assert mask_of(xs) == mask_of(sorted(set(xs)))
    for x in xs:
        assert mask_of(xs) & bit(x)


# -- the joint rank function --------------------------------------------------


@st.composite
def oracle_and_masks(draw):
    n = draw(st.integers(min_value=2, max_value=7))
    seed = draw(st.integers(min_value=0, max_value=10_000))
    inst = random_instance(seed, n)
    a = draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    extra = draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    return MinRankOracle(inst.matroid1, inst.matroid2), a, a | extra


@settings(max_examples=60, deadline=None)
@given(oracle_and_masks())
def test_joint_rank_monotone_and_subcardinal(data):
    o, a, b = data
    ra, rb = o.rmin(a), o.rmin(b)
    assert 0 <= ra <= popcount(a)
    assert ra <= rb <= ra + popcount(b & ~a)
    assert o.rmin(0) == 0
    assert o.is_common_independent(a) == (ra == popcount(a))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=10_000),
    st.integers(min_value=2, max_value=8),
    st.booleans(),
)
def test_instance_serialization_round_trip(seed, n, weighted):
    inst = random_instance(seed, n, weighted=weighted)
    text = dumps(inst)
    assert dumps(loads(text)) == text


# -- two-literal satisfiability ------------------------------------------------


@st.composite
def two_cnf(draw):
    m = draw(st.integers(min_value=1, max_value=8))
    arcs = [(i, i + 1) for i in range(m)]
    f = TwoSat(arcs)
    n_clauses = draw(st.integers(min_value=0, max_value=16))
    for _ in range(n_clauses):
        l1 = draw(st.integers(min_value=1, max_value=m))
        l2 = draw(st.integers(min_value=1, max_value=m))
        s1 = draw(st.booleans())
        s2 = draw(st.booleans())
        f.add(l1 if s1 else -l1, l2 if s2 else -l2)
    return f


def _brute_satisfiable(f: TwoSat) -> bool:
    m = len(f.variables)
    for bits in range(1 << m):
        ok = True
        for l1, l2 in f.clauses:
            v1 = bool(bits >> (abs(l1) - 1) & 1) == (l1 > 0)
            v2 = bool(bits >> (abs(l2) - 1) & 1) == (l2 > 0)
            if not (v1 or v2):
                ok = False
                break
        if ok:
            return True
    return False


@settings(max_examples=300, deadline=None)
@given(two_cnf())
def test_two_sat_matches_brute_force(f):
    assignment = solve_2sat(f)
    if assignment is None:
        assert not _brute_satisfiable(f)
        return
    assert _brute_satisfiable(f)
    for l1, l2 in f.clauses:
        v1 = assignment[f.variables[abs(l1) - 1]] == (l1 > 0)
        v2 = assignment[f.variables[abs(l2) - 1]] == (l2 > 0)
        assert v1 or v2


@settings(max_examples=200, deadline=None)
@given(two_cnf())
def test_two_sat_deterministic(f):
    assert solve_2sat(f) == solve_2sat(f)


# -- lexicographic path costs ---------------------------------------------------


@st.composite
def lex_pair(draw):
    classes = draw(st.integers(min_value=1, max_value=4))
    counts = st.tuples(*(st.integers(min_value=-8, max_value=8),) * classes)
    return LexCost(draw(counts)), LexCost(draw(counts))


@settings(max_examples=200, deadline=None)
@given(lex_pair())
def test_lex_cost_orders_like_big_base_polynomial(pair):
    u, v = pair
    big = 1000

    def value(c: LexCost) -> int:
        return sum(x * big**(len(c.counts) - 1 - i) for i, x in enumerate(c.counts))

    assert (u < v) == (value(u) < value(v))
    assert (u == v) == (value(u) == value(v))
    assert (u <= v) == (value(u) <= value(v))


@settings(max_examples=100, deadline=None)
@given(lex_pair())
def test_lex_cost_addition_is_componentwise(pair):
    u, v = pair
    total = u + v
    assert total.counts == tuple(a + b for a, b in zip(u.counts, v.counts))
    assert u + LexCost.zero(len(u.counts)) == u


# -- weights survive text form ---------------------------------------------------


@given(
    st.lists(
        st.fractions(min_value=-100, max_value=100, max_denominator=50),
        min_size=4,
        max_size=4,
    )
)
def test_fractional_weights_round_trip(ws):
    from minrank import crossed_partition_instance

    inst = crossed_partition_instance(weights=tuple(ws))
    again = loads(dumps(inst))
    assert again.weight_vector() == tuple(Fraction(w) for w in ws)
