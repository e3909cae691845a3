"""Subset-of-[0,n) bitmask helpers.

Ground sets are capped at 64 elements, so plain Python ints serve as exact
bitsets: union/intersection/difference are ``|``, ``&``, ``& ~``; symmetric
difference is ``^``.
"""

from __future__ import annotations

from typing import Iterator

MAX_GROUND = 64


def bit(i: int) -> int:
    return 1 << i


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return mask.bit_count()


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set element ids of `mask` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    """Smallest element id in a nonempty mask."""
    if not mask:
        raise ValueError("empty mask has no lowest bit")
    return (mask & -mask).bit_length() - 1


def mask_of(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    return list(iter_bits(mask))


def subsets_of(mask: int) -> Iterator[int]:
    """All submasks of `mask`, including 0 and `mask` itself.

    Uses the standard decrementing-submask walk; order is decreasing, which
    callers must not rely on.
    """
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets_of_size(mask: int, k: int) -> Iterator[int]:
    """All k-element submasks, ordered by ascending element tuples."""
    from itertools import combinations

    elems = elements_of(mask)
    if k > len(elems):
        return
    for combo in combinations(elems, k):
        yield mask_of(combo)


def format_set(mask: int) -> str:
    """Render a mask as '{0,3,5}' with ascending ids (deterministic)."""
    return "{" + ",".join(str(e) for e in iter_bits(mask)) + "}"


def parse_set(text: str) -> int:
    """Inverse of format_set; also accepts bare comma lists like '0,3,5'."""
    body = text.strip().strip("{}").strip()
    if not body:
        return 0
    return mask_of(int(tok) for tok in body.split(","))
