"""Matroid representations reduced to exact rank oracles.

Five kinds are supported: uniform, partition, graphic, linear-rational
(exact Fraction arithmetic), and explicit (an arbitrary small independence
family given extensionally). Every kind exposes the same interface:
``rank(mask)``, ``is_independent(mask)``, ``fundamental_circuit(I, x)``.

All matroids here are expected to be loopless; `validate` reports the first
violated axiom (with witness sets) instead of silently repairing anything.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple, Sequence

from .bitset import (
    MAX_GROUND,
    bit,
    elements_of,
    format_set,
    full_mask,
    iter_bits,
    popcount,
)


class ValidationReport(NamedTuple):
    """Outcome of `validate`: ok, or the first violated axiom with witnesses."""

    ok: bool
    axiom: str | None = None
    witnesses: tuple[int, ...] = ()
    detail: str = ""

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        sets = ", ".join(format_set(w) for w in self.witnesses)
        return f"violation: {self.axiom} ({self.detail}; witnesses {sets})"


class Matroid:
    """Base class: subclasses implement `_rank`; everything else is shared."""

    kind = "abstract"

    def __init__(self, n: int):
        if not 0 <= n <= MAX_GROUND:
            raise ValueError(f"ground set size {n} outside [0, {MAX_GROUND}]")
        self.n = n

    def _rank(self, mask: int) -> int:
        raise NotImplementedError

    def rank(self, mask: int) -> int:
        if mask & ~full_mask(self.n):
            raise ValueError(f"mask {bin(mask)} has elements outside [0, {self.n})")
        return self._rank(mask)

    def is_independent(self, mask: int) -> bool:
        return self.rank(mask) == popcount(mask)

    def fundamental_circuit(self, I: int, x: int) -> int:
        """C(I, x) = {y in I : I + x - y independent}, for I independent and
        I + x dependent. The unique circuit of I + x is this set plus x."""
        xb = bit(x)
        if xb & I:
            raise ValueError(f"element {x} already in I")
        if not self.is_independent(I):
            raise ValueError("I is not independent")
        ext = I | xb
        if self.is_independent(ext):
            raise ValueError(f"I + {x} is independent: no fundamental circuit")
        circ = 0
        for y in iter_bits(I):
            if self.is_independent(ext & ~bit(y)):
                circ |= bit(y)
        return circ

    def closure(self, mask: int) -> int:
        """cl(X) = X plus every e with rank(X + e) = rank(X)."""
        r = self.rank(mask)
        out = mask
        for e in range(self.n):
            if not (mask >> e) & 1 and self.rank(mask | bit(e)) == r:
                out |= bit(e)
        return out

    def params(self) -> dict:
        """Kind-specific parameters, for serialization."""
        raise NotImplementedError


class UniformMatroid(Matroid):
    """U(k, n): rank(X) = min(k, |X|)."""

    kind = "uniform"

    def __init__(self, k: int, n: int):
        super().__init__(n)
        if k < 0:
            raise ValueError("uniform rank bound must be nonnegative")
        self.k = k

    def _rank(self, mask: int) -> int:
        return min(self.k, popcount(mask))

    def params(self) -> dict:
        return {"k": self.k, "n": self.n}


class PartitionMatroid(Matroid):
    """Blocks B_1..B_m partitioning E with capacities c_i:
    rank(X) = sum_i min(|X ∩ B_i|, c_i)."""

    kind = "partition"

    def __init__(self, n: int, blocks: Sequence[int], capacities: Sequence[int]):
        super().__init__(n)
        if len(blocks) != len(capacities):
            raise ValueError("one capacity per block required")
        seen = 0
        for b in blocks:
            if b & seen:
                raise ValueError("blocks overlap")
            seen |= b
        if seen != full_mask(n):
            raise ValueError("blocks must cover every element exactly once")
        if any(c < 0 for c in capacities):
            raise ValueError("capacities must be nonnegative")
        self.blocks = tuple(blocks)
        self.capacities = tuple(capacities)

    def _rank(self, mask: int) -> int:
        return sum(
            min(popcount(mask & b), c) for b, c in zip(self.blocks, self.capacities)
        )

    def params(self) -> dict:
        return {
            "n": self.n,
            "blocks": [elements_of(b) for b in self.blocks],
            "capacities": list(self.capacities),
        }


class GraphicMatroid(Matroid):
    """Elements are edges of an undirected graph; rank(X) = size of a spanning
    forest of the subgraph with edge set X (union-find count of merges)."""

    kind = "graphic"

    def __init__(self, num_vertices: int, edges: Sequence[tuple[int, int]]):
        super().__init__(len(edges))
        for u, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge ({u},{v}) outside vertex range")
        self.num_vertices = num_vertices
        self.edges = tuple((u, v) for u, v in edges)

    def _rank(self, mask: int) -> int:
        parent = list(range(self.num_vertices))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        merges = 0
        for e in iter_bits(mask):
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                merges += 1
        return merges

    def params(self) -> dict:
        return {"num_vertices": self.num_vertices, "edges": [list(e) for e in self.edges]}


class LinearMatroid(Matroid):
    """Columns of a matrix over Q; rank by exact Gaussian elimination."""

    kind = "linear-rational"

    def __init__(self, matrix: Sequence[Sequence[Fraction | int | str]]):
        rows = [[Fraction(v) for v in row] for row in matrix]
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        n = widths.pop() if widths else 0
        super().__init__(n)
        self.matrix = tuple(tuple(r) for r in rows)
        self._rank_cache: dict[int, int] = {}

    def _rank(self, mask: int) -> int:
        cached = self._rank_cache.get(mask)
        if cached is not None:
            return cached
        cols = elements_of(mask)
        # Work on the transpose (rows of `work` are the selected columns):
        # row-echelon rank is the same and keeps the elimination loop simple.
        work = [[row[c] for row in self.matrix] for c in cols]
        r = matrix_rank(work)
        self._rank_cache[mask] = r
        return r

    def params(self) -> dict:
        return {
            "rows": [[str(v) for v in row] for row in self.matrix],
        }


def matrix_rank(rows: list[list[Fraction]]) -> int:
    """Rank of a matrix given as a list of Fraction rows (destructive)."""
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            if rows[i][col]:
                factor = rows[i][col] / inv
                ri, rp = rows[i], rows[rank]
                for j in range(col, ncols):
                    ri[j] -= factor * rp[j]
        rank += 1
        if rank == len(rows):
            break
    return rank


class ExplicitMatroid(Matroid):
    """An independence family given extensionally (any small matroid).

    Accepts the full family or just its maximal members; stores the bases and
    answers rank queries as max_B |B ∩ X| with memoization. Whether the input
    actually is a matroid is checked by `validate`, not the constructor.
    """

    kind = "explicit"

    def __init__(self, n: int, family: Sequence[int]):
        super().__init__(n)
        fam = set(family)
        fam.add(0)
        self.family = frozenset(fam)
        maximal = [
            f for f in fam if not any(g != f and g & f == f for g in fam)
        ]
        top = max((popcount(f) for f in maximal), default=0)
        self.bases = tuple(sorted(f for f in maximal if popcount(f) == top))
        self._rank_cache: dict[int, int] = {}

    def _rank(self, mask: int) -> int:
        cached = self._rank_cache.get(mask)
        if cached is not None:
            return cached
        r = max((popcount(mask & b) for b in self.bases), default=0)
        self._rank_cache[mask] = r
        return r

    def params(self) -> dict:
        return {"n": self.n, "family": [elements_of(f) for f in sorted(self.family)]}


def validate(m: Matroid, *, seed: int = 0) -> ValidationReport:
    """Check rank axioms and looplessness; report the first violation.

    Order of checks: explicit-family structure (downward closure, exchange,
    family/rank agreement), r(emptyset) = 0, unit monotonicity
    (exhaustive for n <= 12, sampled otherwise), submodularity on sampled
    triples, looplessness.
    """
    n = m.n
    rng = random.Random(seed)

    if isinstance(m, ExplicitMatroid) and n <= 16:
        fam = m.family
        for f in sorted(fam):
            for e in iter_bits(f):
                if f ^ bit(e) not in fam:
                    return ValidationReport(
                        False, "downward-closure", (f, f ^ bit(e)),
                        "family member has a missing subset",
                    )
        for a in sorted(fam):
            for b in sorted(fam):
                if popcount(a) < popcount(b):
                    if not any(a | bit(e) in fam for e in iter_bits(b & ~a)):
                        return ValidationReport(
                            False, "exchange", (a, b),
                            "no element of the larger set extends the smaller",
                        )
        # With closure+exchange verified, basis-derived rank must match the
        # family: every family member is independent.
        for f in sorted(fam):
            if m.rank(f) != popcount(f):
                return ValidationReport(
                    False, "family-rank", (f,),
                    "family member not independent under basis-derived rank",
                )

    if m.rank(0) != 0:
        return ValidationReport(False, "empty-rank", (0,), f"r(empty) = {m.rank(0)}")

    def unit_monotone_at(x: int, e: int) -> ValidationReport | None:
        r0, r1 = m.rank(x), m.rank(x | bit(e))
        if not r0 <= r1 <= r0 + 1:
            return ValidationReport(
                False, "unit-monotone", (x, x | bit(e)),
                f"r={r0} then r={r1}",
            )
        return None

    if n <= 12:
        for x in range(1 << n):
            for e in range(n):
                if not (x >> e) & 1:
                    bad = unit_monotone_at(x, e)
                    if bad:
                        return bad
    else:
        for _ in range(2000):
            x = rng.getrandbits(n)
            e = rng.randrange(n)
            if not (x >> e) & 1:
                bad = unit_monotone_at(x, e)
                if bad:
                    return bad

    samples = 400 if n <= 12 else 2000
    fm = full_mask(n)
    for _ in range(samples):
        x = rng.getrandbits(n) & fm
        y = rng.getrandbits(n) & fm
        if m.rank(x) + m.rank(y) < m.rank(x | y) + m.rank(x & y):
            return ValidationReport(
                False, "submodular", (x, y),
                "r(X)+r(Y) < r(X|Y)+r(X&Y)",
            )

    for e in range(n):
        if m.rank(bit(e)) != 1:
            return ValidationReport(
                False, "loopless", (bit(e),), f"element {e} is a loop"
            )

    return ValidationReport(True)


def restriction(m: Matroid, ground: int) -> "RestrictedMatroid":
    """The matroid restricted to a sub-ground-set, keeping original ids.

    Elements outside `ground` become forbidden (rank queries must not touch
    them); used by solvers that drop nonpositive-weight elements.
    """
    return RestrictedMatroid(m, ground)


class RestrictedMatroid(Matroid):
    kind = "restriction"

    def __init__(self, inner: Matroid, ground: int):
        super().__init__(inner.n)
        self.inner = inner
        self.ground = ground

    def _rank(self, mask: int) -> int:
        if mask & ~self.ground:
            raise ValueError("query touches removed elements")
        return self.inner.rank(mask)

    def params(self) -> dict:
        return {"ground": elements_of(self.ground), "inner": self.inner.params()}
