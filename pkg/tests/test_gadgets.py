"""The coloring reduction: gadget construction, verification, enumeration."""

from __future__ import annotations

from fractions import Fraction

import pytest

from minrank import (
    ColoredGraph,
    MinRankOracle,
    bit,
    build_gadget,
    colorings_from_consistent_graphs,
    full_mask,
    mask_of,
    matrix_rank,
    popcount,
    proper_four_colorings,
    verify_gadget,
)
from minrank.gadgets import _int_rank


def vertex_gadget(color=(1, 1)):
    return build_gadget(ColoredGraph(1, (), (color,)))


def edge_gadget():
    return build_gadget(ColoredGraph(2, ((0, 1),), ((1, 1), (2, 2))))


def triangle_gadget():
    return build_gadget(
        ColoredGraph(3, ((0, 1), (1, 2), (0, 2)), ((1, 1), (1, 2), (2, 1)))
    )


# -- colored graphs -------------------------------------------------------------


def test_proper_four_coloring_counts():
    assert len(proper_four_colorings(ColoredGraph(1, ()))) == 4
    assert len(proper_four_colorings(ColoredGraph(2, ((0, 1),)))) == 12
    assert len(proper_four_colorings(ColoredGraph(3, ((0, 1), (1, 2), (0, 2))))) == 24
    # Two isolated vertices: all 16 combinations are proper.
    assert len(proper_four_colorings(ColoredGraph(2, ()))) == 16


def test_colored_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        ColoredGraph(2, ((0, 0),)).normalized_edges()  # loop
    with pytest.raises(ValueError):
        ColoredGraph(2, ((0, 1), (1, 0))).normalized_edges()  # duplicate
    with pytest.raises(ValueError):
        ColoredGraph(2, ((0, 2),)).normalized_edges()  # out of range


def test_is_proper():
    assert ColoredGraph(2, ((0, 1),), ((1, 1), (1, 2))).is_proper()
    assert not ColoredGraph(2, ((0, 1),), ((1, 1), (1, 1))).is_proper()
    assert not ColoredGraph(1, (), None).is_proper()


# -- building -------------------------------------------------------------------


def test_build_requires_proper_coloring():
    bad = ColoredGraph(2, ((0, 1),), ((2, 1), (2, 1)))
    with pytest.raises(ValueError):
        build_gadget(bad)
    assert build_gadget(bad, allow_improper=True).n == 16


def test_build_rejects_missing_or_bad_coloring():
    with pytest.raises(ValueError):
        build_gadget(ColoredGraph(1, ()))
    with pytest.raises(ValueError):
        build_gadget(ColoredGraph(1, (), ((1, 3),)))
    with pytest.raises(ValueError):
        build_gadget(ColoredGraph(2, (), ((1, 1),)))


def test_single_vertex_layout():
    gi = vertex_gadget((1, 1))
    assert gi.n == 6
    assert gi.vertex_x == ((0, 1),)
    assert gi.vertex_y == ((2, 3),)
    assert gi.I == mask_of((2, 3))
    assert (gi.s, gi.t) == (4, 5)
    assert gi.k == 2
    assert gi.plain == mask_of((0, 1))
    assert len(gi.names) == 6


def test_single_vertex_matrix_pattern():
    """Color (1,1): into-I prime at (y1, x1) in Z2, out-of-I at (y2, x2) in Z1."""
    gi = vertex_gadget((1, 1))
    # Rows 0/1 carry the identity on I; columns 0/1 are x1/x2.
    assert gi.Z2[0][0] > 1 and gi.Z1[1][1] > 1
    assert gi.Z2[0][0] != gi.Z1[1][1]  # distinct primes per slot
    assert gi.Z1[0][0] == gi.Z1[0][1] == gi.Z1[1][0] == 0
    assert gi.Z2[0][1] == gi.Z2[1][0] == gi.Z2[1][1] == 0
    # Identity on I and the free-exchange columns for t (Z1) and s (Z2).
    assert gi.Z1[0][2] == gi.Z1[1][3] == 1
    assert gi.Z1[0][5] == gi.Z1[1][5] == 1
    assert gi.Z2[0][4] == gi.Z2[1][4] == 1
    # Realized arcs mirror the primes.
    assert gi.arcs2[0] == bit(2)  # x1 -> y1
    assert gi.arcs1[3] == bit(1)  # y2 -> x2


def test_value_table_is_coloring_independent():
    a = vertex_gadget((1, 1))
    b = vertex_gadget((2, 2))
    assert a.values == b.values
    assert a.Z1 != b.Z1  # only the realization moves with the coloring


def test_probe_prescriptions():
    gi = vertex_gadget((1, 2))
    m1, m2 = gi.as_matroids()
    o = MinRankOracle(m1, m2)
    k = gi.k
    assert o.rmin(gi.I) == k
    assert o.rmin(gi.I | bit(gi.s)) == k
    assert o.rmin(gi.I | bit(gi.t)) == k
    assert o.rmin(gi.I | bit(gi.s) | bit(gi.t)) == k + 1
    # The probe circuits close on opposite matroids.
    assert m1.rank(gi.I | bit(gi.s)) == k + 1
    assert m2.rank(gi.I | bit(gi.s)) == k
    assert m1.rank(gi.I | bit(gi.t)) == k
    assert m2.rank(gi.I | bit(gi.t)) == k + 1


def test_values_realized_by_matrices():
    gi = edge_gadget()
    m1, m2 = gi.as_matroids()
    o = MinRankOracle(m1, m2)
    for (X, Y), v in gi.values.items():
        assert o.rmin((gi.I | X) & ~Y) == v


def test_edge_gadget_is_loopless():
    gi = edge_gadget()
    m1, m2 = gi.as_matroids()
    o = MinRankOracle(m1, m2)
    assert all(o.rmin(bit(e)) == 1 for e in range(gi.n))


def test_single_vertex_x_columns_are_loops():
    """With no edges, each vertex contributes one loop per matrix; the
    reduction only promises looplessness once an edge ties blocks together."""
    gi = vertex_gadget((1, 1))
    m1, m2 = gi.as_matroids()
    o = MinRankOracle(m1, m2)
    assert [e for e in range(gi.n) if o.rmin(bit(e)) == 0] == [0, 1]


# -- verification ----------------------------------------------------------------


def test_verify_gadget_vertex_and_edge():
    for gi in (vertex_gadget((2, 1)), edge_gadget()):
        reports = verify_gadget(gi)
        assert reports
        assert [str(r) for r in reports if not r.ok] == []


def test_verify_gadget_flags_improper():
    gi = build_gadget(
        ColoredGraph(2, ((0, 1),), ((1, 2), (1, 2))), allow_improper=True
    )
    failing = {r.quantity for r in verify_gadget(gi) if not r.ok}
    assert "le-values" in failing


def test_verify_gadget_size_cap():
    g = ColoredGraph(
        7,
        ((0, 1), (2, 3), (4, 5)),
        ((1, 1), (2, 2), (1, 1), (2, 2), (1, 1), (2, 2), (1, 1)),
    )
    gi = build_gadget(g)
    assert gi.n == 48
    with pytest.raises(ValueError):
        verify_gadget(gi)


# -- enumeration ------------------------------------------------------------------


def test_coloring_counts_from_consistent_graphs():
    assert len(colorings_from_consistent_graphs(vertex_gadget((1, 1)))) == 4
    assert len(colorings_from_consistent_graphs(edge_gadget())) == 12
    assert len(colorings_from_consistent_graphs(triangle_gadget())) == 24


def test_enumeration_rejects_mismatched_graph():
    gi = edge_gadget()
    with pytest.raises(ValueError):
        colorings_from_consistent_graphs(gi, ColoredGraph(2, ()))


def test_enumeration_size_cap():
    g = ColoredGraph(
        5, (), ((1, 1), (1, 1), (1, 1), (1, 1), (1, 1))
    )
    gi = build_gadget(g)
    with pytest.raises(ValueError):
        colorings_from_consistent_graphs(gi)


# -- exact integer rank ------------------------------------------------------------


def test_int_rank_prime_blocks():
    assert _int_rank([[7, 0], [0, 11]], 0b11) == 2
    assert _int_rank([[0, 7], [11, 0]], 0b11) == 2
    assert _int_rank([[7, 11], [7, 11]], 0b11) == 1
    assert _int_rank([[0, 0], [0, 0]], 0b11) == 0


def test_int_rank_matches_fraction_elimination():
    import random

    rng = random.Random(23)
    for _ in range(200):
        nr = rng.randint(1, 4)
        nc = rng.randint(1, 5)
        rows = [[rng.randint(-3, 3) for _ in range(nc)] for _ in range(nr)]
        mask = rng.randrange(1, 1 << nc)
        cols = [c for c in range(nc) if (mask >> c) & 1]
        frac = [[Fraction(row[c]) for c in cols] for row in rows]
        assert _int_rank(rows, mask) == matrix_rank(frac)
