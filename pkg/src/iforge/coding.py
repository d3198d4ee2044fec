"""Sequence arithmetic shared by both tree codings.

A pairing is any bijection between pairs of naturals and naturals with
``n, m <= pair(n, m)``; that inequality is what keeps :func:`relevant_pair`
inside the sequence.  Cantor's pairing is the default and every public
function accepts another conforming pairing.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from math import isqrt

from iforge.errors import ContractError

Seq = tuple[int, ...]


def _diagonal(k: int) -> tuple[int, int]:
    # largest w with w(w+1)/2 <= k
    w = (isqrt(8 * k + 1) - 1) // 2
    return w, k - w * (w + 1) // 2


@dataclass(frozen=True)
class Pairing:
    """Cantor pairing, optionally with the two coordinates swapped."""

    swapped: bool = False

    @property
    def name(self) -> str:
        return "cantor-swapped" if self.swapped else "cantor"

    def pair(self, n: int, m: int) -> int:
        if n < 0 or m < 0:
            raise ContractError("pairing is defined on naturals")
        if self.swapped:
            n, m = m, n
        return (n + m) * (n + m + 1) // 2 + m

    def unpair(self, k: int) -> tuple[int, int]:
        if k < 0:
            raise ContractError("pairing is defined on naturals")
        w, m = _diagonal(k)
        n = w - m
        return (m, n) if self.swapped else (n, m)


CANTOR = Pairing()
SWAPPED = Pairing(swapped=True)


def pair_index(n: int, m: int, pairing: Pairing = CANTOR) -> int:
    return pairing.pair(n, m)


def unpair_index(k: int, pairing: Pairing = CANTOR) -> tuple[int, int]:
    return pairing.unpair(k)


def even_subsequence(s: Sequence[int]) -> Seq:
    """Entries at even positions: ``s(0), s(2), ...``."""
    return tuple(s[::2])


def relevant_pair(s: Sequence[int], pairing: Pairing = CANTOR) -> tuple[int, int]:
    """``(s(n), s(m))`` where ``(n, m)`` unpairs ``len(s) - 1``."""
    if not s:
        raise ContractError("relevant pair of the empty sequence is undefined")
    n, m = pairing.unpair(len(s) - 1)
    return s[n], s[m]


def extension_length(prefix_len: int, distinct: bool, pairing: Pairing = CANTOR) -> tuple[int, int, int]:
    """Least ``L`` with ``(n, m) = unpair(L - 1)`` and ``2n, 2m > prefix_len``.

    A sequence ``v`` of length ``2L`` then has ``rp(even_subsequence(v)) =
    (v[2n], v[2m])`` with both positions past the first ``prefix_len + 1``
    entries, so any target pair can be written there.  ``distinct`` asks
    for ``n != m`` (needed when the target pair is off the diagonal).
    Returns ``(L, n, m)``.
    """
    if prefix_len < 0:
        raise ContractError("prefix length must be non-negative")
    low = prefix_len // 2 + 1
    # Cantor codes grow with n + m, so the least code sits on the first
    # usable anti-diagonal
    if distinct:
        candidates = [(low + 1, low), (low, low + 1)]
    else:
        candidates = [(low, low)]
    k = min(pairing.pair(n, m) for n, m in candidates)
    n, m = pairing.unpair(k)
    return k + 1, n, m


def extension_bound(prefix_len: int, pairing: Pairing = CANTOR) -> int:
    """An explicit even length by which :func:`extension_length` must succeed."""
    low = prefix_len // 2 + 1
    return 2 * (max(pairing.pair(low, low + 1), pairing.pair(low + 1, low)) + 1)
