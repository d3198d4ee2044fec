"""Finite equivalence relations, reductions between them and Schröder–Bernstein.

Partitions are over any hashable, mutually comparable labels.  A map ``f``
reduces ``e`` to ``g`` when ``a e b`` iff ``f(a) g f(b)``; a reduction
therefore induces an injective map of blocks.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from iforge.errors import ContractError

ReductionMap = Mapping[Any, Any]


@dataclass(frozen=True)
class FinPartition:
    ground: frozenset
    blocks: tuple[frozenset, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __init__(self, ground: Iterable[Hashable], blocks: Iterable[Iterable[Hashable]]):
        ground = frozenset(ground)
        blocks = tuple(frozenset(b) for b in blocks)
        index = {}
        for i, b in enumerate(blocks):
            if not b:
                raise ContractError(f"block {i} is empty")
            for v in b:
                if v in index:
                    raise ContractError(f"{v!r} lies in blocks {index[v]} and {i}")
                index[v] = i
        if set(index) != ground:
            raise ContractError("blocks do not cover the ground set exactly")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_index(self, v: Hashable) -> int:
        return self._index[v]

    def related(self, a: Hashable, b: Hashable) -> bool:
        return self._index[a] == self._index[b]

    def canonical(self) -> frozenset[frozenset]:
        return frozenset(self.blocks)

    @classmethod
    def from_labels(cls, labels: Mapping[Hashable, Hashable]) -> FinPartition:
        """Blocks are the fibres of ``labels``."""
        fibres: dict = {}
        for v, key in labels.items():
            fibres.setdefault(key, set()).add(v)
        return cls(labels, fibres.values())

    def to_doc(self) -> dict:
        return {"ground": sorted(self.ground), "blocks": [sorted(b) for b in self.blocks]}

    @classmethod
    def from_doc(cls, doc: Any) -> FinPartition:
        if not isinstance(doc, dict) or "ground" not in doc or "blocks" not in doc:
            raise ContractError('partition document needs "ground" and "blocks"')
        return cls(doc["ground"], doc["blocks"])


def _total(f: ReductionMap, e: FinPartition, g: FinPartition) -> None:
    if set(f) != e.ground:
        raise ContractError("map is not total on the source ground set")
    for v in f.values():
        if v not in g.ground:
            raise ContractError(f"image {v!r} escapes the target ground set")


def check_reduction(f: ReductionMap, e: FinPartition, g: FinPartition) -> bool:
    _total(f, e, g)
    # a e b  <=>  f(a) g f(b)  is the same as: block of a determines block of
    # f(a), and distinct blocks land in distinct blocks
    seen: dict[int, int] = {}
    for a, fa in f.items():
        src, dst = e.block_index(a), g.block_index(fa)
        if seen.setdefault(src, dst) != dst:
            return False
    return len(set(seen.values())) == len(seen)


def factoring(f: ReductionMap, e: FinPartition, g: FinPartition) -> dict[int, int]:
    """Block map induced by a reduction; contract error if ``f`` is not one."""
    if not check_reduction(f, e, g):
        raise ContractError("map is not a reduction")
    return {e.block_index(a): g.block_index(fa) for a, fa in f.items()}


def check_classwise_iso(phi: ReductionMap, psi: ReductionMap, e: FinPartition, g: FinPartition) -> bool:
    if not (check_reduction(phi, e, g) and check_reduction(psi, g, e)):
        return False
    ph, ps = factoring(phi, e, g), factoring(psi, g, e)
    if len(ph) != len(e) or len(ps) != len(g) or len(e) != len(g):
        return False
    return all(ps[ph[i]] == i for i in ph)


class SBResult(NamedTuple):
    bijection: dict[int, int]
    phi: dict
    psi: dict


def _require_injective(fac: dict[int, int], side: str, src: FinPartition) -> None:
    hit: dict[int, int] = {}
    for i, j in sorted(fac.items()):
        if j in hit:
            a, b = sorted(src.blocks[hit[j]]), sorted(src.blocks[i])
            raise ContractError(f"{side} factoring is not injective: blocks {a} and {b} share image {j}")
        hit[j] = i


def sb_bijection(e: FinPartition, g: FinPartition, phi: ReductionMap, psi: ReductionMap) -> SBResult:
    """Block bijection from two injective factorings, with element liftings.

    An ``e``-block whose backward chain starts at a ``g``-block outside the
    image of ``phi`` is sent along the inverse of ``psi``; every other block
    is sent along ``phi``.  Liftings pick the least element of the target
    block.
    """
    ph, ps = factoring(phi, e, g), factoring(psi, g, e)
    _require_injective(ph, "phi", e)
    _require_injective(ps, "psi", g)
    ph_inv = {j: i for i, j in ph.items()}
    ps_inv = {i: j for j, i in ps.items()}

    def from_g_stopper(i: int) -> bool:
        # walk i <- psi(j) <- phi(i') <- ... until the chain stops or cycles
        seen = set()
        while i not in seen:
            seen.add(i)
            j = ps_inv.get(i)
            if j is None:
                return False
            if j not in ph_inv:
                return True
            i = ph_inv[j]
        return False

    h = {i: (ps_inv[i] if from_g_stopper(i) else ph[i]) for i in range(len(e))}
    h_inv = {j: i for i, j in h.items()}
    if len(h_inv) != len(g):
        raise ContractError("block counts differ, no bijection")
    phi2 = {a: min(g.blocks[h[e.block_index(a)]]) for a in e.ground}
    psi2 = {b: min(e.blocks[h_inv[g.block_index(b)]]) for b in g.ground}
    return SBResult(h, phi2, psi2)


def disjoint_union(e: FinPartition, g: FinPartition) -> FinPartition:
    """Tag ``e`` labels with 0 and ``g`` labels with 1."""
    return FinPartition(
        [(0, v) for v in e.ground] + [(1, v) for v in g.ground],
        [[(0, v) for v in b] for b in e.blocks] + [[(1, v) for v in b] for b in g.blocks],
    )


def saturate(a: Iterable[Hashable], e: FinPartition) -> frozenset:
    a = frozenset(a)
    if not a <= e.ground:
        raise ContractError("subset is not inside the ground set")
    return frozenset().union(*(b for b in e.blocks if b & a))


def essentially_refine(e: FinPartition, x_f: Iterable[Hashable]) -> FinPartition:
    """Keep the blocks inside ``x_f`` and merge everything else into one block."""
    x_f = frozenset(x_f)
    if saturate(x_f, e) != x_f:
        raise ContractError("subset is not saturated")
    inside = [b for b in e.blocks if b <= x_f]
    rest = e.ground - x_f
    return FinPartition(e.ground, inside + ([rest] if rest else []))
