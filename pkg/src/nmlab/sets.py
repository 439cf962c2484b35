"""Bitmask helpers for finite sets over an indexed universe.

A set over ``n`` elements is an int whose bit ``i`` marks membership of
element ``i``.  Everything else in the package builds on these few
primitives.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, starting with 0 and ending with ``mask``."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def full(n: int) -> int:
    return (1 << n) - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def canonical_order(masks: Iterable[int]) -> list[int]:
    """Deterministic order used for counterexample reporting.

    Smaller sets come first; ties are broken by the sorted index tuples.
    """
    return sorted(set(masks), key=lambda m: (popcount(m), tuple(bits(m))))


def fmt(mask: int, names: Sequence[str]) -> str:
    return "{" + ",".join(names[i] for i in bits(mask)) + "}"


def parse_braced(text: str, index: dict[str, int]) -> int:
    """Parse ``{a,b}`` (or ``{}``) into a mask using ``index``."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"expected a braced set, got {text!r}")
    body = body[1:-1].strip()
    if not body:
        return 0
    mask = 0
    for name in body.split(","):
        name = name.strip()
        if name not in index:
            raise ValueError(f"unknown element {name!r}")
        mask |= 1 << index[name]
    return mask
