"""Brute-force referees and the graph-construction audit."""

from __future__ import annotations

from fractions import Fraction

import pytest

from minrank import (
    BruteReport,
    ExchangeGraph,
    GraphicMatroid,
    MinRankOracle,
    PartitionMatroid,
    UniformMatroid,
    audit_graphs,
    bit,
    brute_dual,
    brute_lexmax,
    brute_max_common,
    brute_w_maximal,
    build_true_graph,
    check_promise_no_circuit_inclusion,
    circuits,
    common_independent_sets,
    full_mask,
    largest_circuit_size,
    mask_of,
    popcount,
)
from minrank.verify import (
    class_vector,
    matching_count,
    perfect_matchings,
    path_cost,
    simple_cycles,
    simple_st_paths,
)
from conftest import crossed_pair, fixture_weights, small_zoo, triangle


# -- exhaustive enumeration ----------------------------------------------------


def test_common_independent_sets_crossed():
    m1, m2 = crossed_pair()
    sets = sorted(common_independent_sets(m1, m2))
    assert sets == [0, 1, 2, 4, 6, 8, 9]
    assert all(m1.is_independent(I) and m2.is_independent(I) for I in sets)


def test_brute_max_common_crossed():
    m1, m2 = crossed_pair()
    assert brute_max_common(m1, m2) == (2, mask_of((1, 2)))


def test_brute_max_common_identical_matroids():
    m = UniformMatroid(2, 4)
    size, witness = brute_max_common(m, m)
    assert size == 2
    assert witness == mask_of((0, 1))


def test_brute_dual_crossed():
    m1, m2 = crossed_pair()
    value, argmin = brute_dual(m1, m2)
    assert value == 2
    assert argmin == 0  # Z = empty set: rmin(E) alone equals the optimum


def test_brute_dual_free_versus_rank_one():
    m1 = UniformMatroid(3, 3)
    m2 = UniformMatroid(1, 3)
    assert brute_dual(m1, m2) == (1, 0)


def test_brute_dual_agrees_with_max_size():
    for m1 in small_zoo():
        for m2 in small_zoo():
            if m1.n != m2.n:
                continue
            size, _ = brute_max_common(m1, m2)
            value, _ = brute_dual(m1, m2)  # internally asserts both dual forms
            assert value == size


def test_brute_w_maximal_crossed():
    m1, m2 = crossed_pair()
    w = fixture_weights()
    assert brute_w_maximal(m1, m2, w, 0) == (0, (0,))
    assert brute_w_maximal(m1, m2, w, 1) == (5, (bit(0),))
    assert brute_w_maximal(m1, m2, w, 2) == (8, (mask_of((1, 2)),))
    assert brute_w_maximal(m1, m2, w, 3) == (None, ())


def test_brute_w_maximal_reports_all_argmaxes():
    m1, m2 = crossed_pair()
    best, argmaxes = brute_w_maximal(m1, m2, [1, 1, 1, 1], 2)
    assert best == 2
    assert argmaxes == (mask_of((1, 2)), mask_of((0, 3)))


def test_brute_lexmax_crossed():
    m1, m2 = crossed_pair()
    vector, witness = brute_lexmax(m1, m2, fixture_weights())
    assert vector == (1, 0, 1)
    assert witness == mask_of((0, 3))
    assert class_vector(witness, fixture_weights()) == vector


# -- circuit structure ---------------------------------------------------------


def test_circuits_partition():
    m1, _ = crossed_pair()
    assert circuits(m1) == [mask_of((0, 1)), mask_of((2, 3))]


def test_circuits_graphic_triangle():
    assert circuits(triangle()) == [mask_of((0, 1, 2))]


def test_circuits_uniform():
    assert circuits(UniformMatroid(2, 3)) == [mask_of((0, 1, 2))]
    assert circuits(UniformMatroid(1, 3)) == [
        mask_of((0, 1)),
        mask_of((0, 2)),
        mask_of((1, 2)),
    ]
    assert circuits(UniformMatroid(3, 3)) == []


def test_largest_circuit_size():
    m1, _ = crossed_pair()
    assert largest_circuit_size(m1) == 2
    assert largest_circuit_size(triangle()) == 3
    assert largest_circuit_size(UniformMatroid(3, 3)) == 0


def test_promise_holds_for_crossed_partitions():
    m1, m2 = crossed_pair()
    assert check_promise_no_circuit_inclusion(m1, m2)


def test_promise_fails_for_identical_and_nested_circuits():
    m1, _ = crossed_pair()
    assert not check_promise_no_circuit_inclusion(m1, m1)
    # Triangle and U(2,3) share the circuit {0,1,2}.
    assert not check_promise_no_circuit_inclusion(triangle(), UniformMatroid(2, 3))


# -- small graph combinatorics --------------------------------------------------


def test_perfect_matchings_two_by_two():
    adj = {0: mask_of((1, 2)), 3: mask_of((1, 2))}
    got = perfect_matchings(adj, [0, 3], mask_of((1, 2)))
    assert sorted(got) == [((0, 1), (3, 2)), ((0, 2), (3, 1))]
    assert perfect_matchings(adj, [0, 3], mask_of((1,))) == []


def test_true_graph_cycle_and_matching_count():
    m1, m2 = crossed_pair()
    D = build_true_graph(m1, m2, mask_of((0, 3)))
    cycles = simple_cycles(D)
    assert len(cycles) == 1
    assert sorted(cycles[0]) == [0, 1, 2, 3]
    assert matching_count(D, 1, mask_of((0, 3)), mask_of((1, 2))) == 1
    assert simple_st_paths(D) == []  # no sources or sinks at a maximum


def test_true_graph_st_paths_at_size_one():
    m1, m2 = crossed_pair()
    D = build_true_graph(m1, m2, bit(0))
    got = {tuple(p) for p in simple_st_paths(D)}
    assert got == {(3,), (2, 0, 1), (2, 0, 3), (3, 0, 1)}


def test_path_cost_signs():
    w = fixture_weights()
    I = mask_of((0, 3))
    # Cycle 0 -> 1 -> 3 -> 2 -> 0: +5 -4 +1 -4 = -2.
    assert path_cost((0, 1, 3, 2), I, w) == Fraction(-2)
    assert path_cost((3,), bit(0), w) == Fraction(-1)


def test_brute_report_str():
    ok = BruteReport("inst", "max-size", 2, 2, True)
    bad = BruteReport("inst", "max-size", 2, 1, False, (bit(0),))
    assert str(ok) == "[ok] inst: max-size brute=2 solver=2"
    assert str(bad).startswith("[MISMATCH] inst: max-size brute=2 solver=1")


# -- the graph audit -----------------------------------------------------------


def test_audit_passes_on_fixture_bases():
    m1, m2 = crossed_pair()
    for I in common_independent_sets(m1, m2):
        reports = audit_graphs(m1, m2, I, w=fixture_weights())
        assert reports, "audit must always report something"
        failing = [str(r) for r in reports if not r.ok]
        assert failing == []


def test_audit_passes_across_zoo():
    for m1 in small_zoo():
        for m2 in small_zoo():
            if m1.n != m2.n or m1.n > 4:
                continue
            for I in common_independent_sets(m1, m2):
                failing = [r for r in audit_graphs(m1, m2, I) if not r.ok]
                assert failing == []


def test_audit_reports_carry_instance_label():
    m1, m2 = crossed_pair()
    reports = audit_graphs(m1, m2, bit(0), instance="crossed@1")
    assert all(r.instance == "crossed@1" for r in reports)


def test_audit_flags_dropped_sure_arc():
    """A resolved graph missing a certainly-true arc must trip the audit."""
    m1, m2 = crossed_pair()

    def drop_first(C: ExchangeGraph) -> ExchangeGraph:
        arcs1 = list(C.arcs1)
        sure1 = list(C.sure1)
        for y in range(C.n):
            if arcs1[y]:
                x = arcs1[y] & -arcs1[y]
                arcs1[y] &= ~x
                sure1[y] &= ~x
                break
        return ExchangeGraph(
            C.n, C.I, C.S, C.T, arcs1, C.arcs2, sure1, C.sure2, kind=C.kind
        )

    reports = audit_graphs(m1, m2, bit(0), w=fixture_weights(), mutate=drop_first)
    failing = {r.quantity for r in reports if not r.ok}
    assert "resolved-within-bounds" in failing


def test_audit_flags_rewired_graph():
    """Swapping the resolved graph for a wrong-shape one must trip the audit."""
    m1, m2 = crossed_pair()

    def clear_layer2(C: ExchangeGraph) -> ExchangeGraph:
        return ExchangeGraph(
            C.n, C.I, C.S, C.T, C.arcs1, [0] * C.n, C.sure1, [0] * C.n, kind=C.kind
        )

    reports = audit_graphs(m1, m2, bit(0), mutate=clear_layer2)
    assert any(not r.ok for r in reports)


def test_audit_trivial_when_no_probe_pair():
    m1, m2 = crossed_pair()
    reports = audit_graphs(m1, m2, mask_of((0, 3)))
    assert len(reports) == 1
    assert reports[0].quantity == "no-probe-pair"
    assert reports[0].ok


def test_audit_rejects_large_ground_set():
    m = UniformMatroid(3, 12)
    with pytest.raises(ValueError):
        audit_graphs(m, m, 0)
