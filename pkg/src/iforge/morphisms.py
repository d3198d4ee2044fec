"""Morphism oracles: verification, exhaustive search and a naive reference.

Six kinds are supported.  A *homomorphism* here reflects relations as well
as preserving them, pointwise: ``(f(p), f(q))`` is related in the target iff
``(p, q)`` is related in the source.  The usual forward-only notion is a
*weak homomorphism*.  Embeddings are injective homomorphisms, isomorphisms
surjective embeddings, and (weak) epimorphisms surjective (weak)
homomorphisms.
"""

from __future__ import annotations

import enum
import itertools
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from iforge import _backend
from iforge._search_py import ABSENT, BUDGET, FOUND
from iforge.errors import BudgetExhausted, ContractError
from iforge.structures import Structure, _rel_lists, refine


class MorphKind(enum.Enum):
    ISOMORPHISM = "iso"
    EMBEDDING = "embed"
    HOMOMORPHISM = "hom"
    WEAK_HOMOMORPHISM = "weakhom"
    EPIMORPHISM = "epi"
    WEAK_EPIMORPHISM = "weakepi"

    @property
    def strong(self) -> bool:
        return self not in (MorphKind.WEAK_HOMOMORPHISM, MorphKind.WEAK_EPIMORPHISM)

    @property
    def injective(self) -> bool:
        return self in (MorphKind.ISOMORPHISM, MorphKind.EMBEDDING)

    @property
    def surjective(self) -> bool:
        return self in (MorphKind.ISOMORPHISM, MorphKind.EPIMORPHISM, MorphKind.WEAK_EPIMORPHISM)


@dataclass(frozen=True)
class MorphismWitness:
    map: Mapping[int, int]
    kind: MorphKind
    _key: tuple = field(init=False, repr=False, compare=True)

    def __post_init__(self):
        m = {int(k): int(v) for k, v in self.map.items()}
        object.__setattr__(self, "map", MappingProxyType(m))
        object.__setattr__(self, "_key", tuple(sorted(m.items())))

    def __hash__(self) -> int:
        return hash((self._key, self.kind))

    def as_tuple(self) -> tuple[int, ...]:
        """Images listed by ascending source label (the search order)."""
        return tuple(v for _, v in self._key)

    def compose(self, then: MorphismWitness) -> MorphismWitness:
        """``then`` after ``self``; the kind is ``self.kind``."""
        return MorphismWitness({k: then.map[v] for k, v in self.map.items()}, self.kind)


def _check_signature(a: Structure, b: Structure) -> None:
    if a.signature != b.signature:
        raise ContractError(
            f"signature mismatch: {sorted(a.signature)} vs {sorted(b.signature)}"
        )


def verify(a: Structure, b: Structure, w: MorphismWitness) -> bool:
    """Does ``w.map`` satisfy ``w.kind`` from ``a`` to ``b``?

    A map that is not total on ``a`` or escapes ``b`` is a contract error,
    not a ``False``.
    """
    _check_signature(a, b)
    f = w.map
    if set(f) != set(a.domain):
        raise ContractError("map is not total on the source domain")
    for v in f.values():
        if v not in b.domain:
            raise ContractError(f"image {v} escapes the target domain")
    kind = w.kind
    if kind.injective and len(set(f.values())) != len(f):
        return False
    if kind.surjective and set(f.values()) != set(b.domain):
        return False
    for name, ra in a.relations.items():
        rb = b.relations[name]
        for p, q in ra:
            if (f[p], f[q]) not in rb:
                return False
        if kind.strong:
            for p in a.domain:
                for q in a.domain:
                    if (f[p], f[q]) in rb and (p, q) not in ra:
                        return False
    return True


def naive_search(a: Structure, b: Structure, kind: MorphKind) -> MorphismWitness | None:
    """Enumerate every map in lexicographic order; reference oracle for tests."""
    _check_signature(a, b)
    src, tgt = sorted(a.domain), sorted(b.domain)
    for images in itertools.product(tgt, repeat=len(src)):
        w = MorphismWitness(dict(zip(src, images)), kind)
        if verify(a, b, w):
            return w
    return None


def _bitsets(s: Structure, labels: list[int]):
    outs, ins, loops = [], [], []
    for o, i, loop in _rel_lists(s, labels):
        outs.append([sum(1 << j for j in row) for row in o])
        ins.append([sum(1 << j for j in row) for row in i])
        loops.append(loop)
    return outs, ins, loops


def _with_loops(rows: list[list[int]], loops: list[list[bool]]) -> list[list[int]]:
    return [
        [row | (1 << j) if loop[j] else row for j, row in enumerate(rel_rows)]
        for rel_rows, loop in zip(rows, loops)
    ]


def _initial_domains(a: Structure, b: Structure, kind: MorphKind, la, lb, sa, sb) -> list[int] | None:
    na, nb = len(la), len(lb)
    a_out, a_in, a_loop = sa
    b_out, b_in, b_loop = sb
    full = (1 << nb) - 1
    doms = [full] * na
    for r in range(len(a_loop)):
        with_loop = sum(1 << j for j in range(nb) if b_loop[r][j])
        for u in range(na):
            if a_loop[r][u]:
                doms[u] &= with_loop
            elif kind.strong:
                doms[u] &= ~with_loop
    if kind.injective:
        # injective + reflecting: degrees and non-degrees can only grow
        for r in range(len(a_loop)):
            for rows_a, rows_b in ((a_out[r], b_out[r]), (a_in[r], b_in[r])):
                db = [bin(x).count("1") for x in rows_b]
                for u in range(na):
                    da = bin(rows_a[u]).count("1")
                    allowed = 0
                    for j in range(nb):
                        if db[j] >= da and (nb - 1 - db[j]) >= (na - 1 - da):
                            allowed |= 1 << j
                    doms[u] &= allowed
    if kind is MorphKind.ISOMORPHISM:
        rels = _rel_lists(_disjoint(a, b, la, lb), list(range(na + nb)))
        col = refine(rels, [0] * (na + nb))
        ca, cb = col[:na], col[na:]
        if sorted(ca) != sorted(cb):
            return None
        for u in range(na):
            doms[u] &= sum(1 << j for j in range(nb) if cb[j] == ca[u])
    return doms


def _disjoint(a: Structure, b: Structure, la, lb) -> Structure:
    ia = {v: i for i, v in enumerate(la)}
    ib = {v: len(la) + i for i, v in enumerate(lb)}
    rels = {}
    for name in a.relations:
        rels[name] = [(ia[p], ia[q]) for p, q in a.relations[name]] + [
            (ib[p], ib[q]) for p, q in b.relations[name]
        ]
    return Structure(range(len(la) + len(lb)), rels)


def _default_budget() -> int:
    env = os.environ.get("IFORGE_BUDGET")
    return int(env) if env else -1


def search(
    a: Structure,
    b: Structure,
    kind: MorphKind,
    budget: int | None = None,
) -> MorphismWitness | None:
    """Lexicographically least witness of ``kind`` from ``a`` to ``b``, or None.

    The map is compared as a tuple of images listed by ascending source
    label.  ``budget`` caps node expansions (default: ``IFORGE_BUDGET`` or
    unlimited); running out raises :class:`BudgetExhausted`.
    """
    _check_signature(a, b)
    if budget is None:
        budget = _default_budget()
    la, lb = sorted(a.domain), sorted(b.domain)
    na, nb = len(la), len(lb)
    if kind.injective and na > nb:
        return None
    if kind.surjective and nb > na:
        return None
    if kind is MorphKind.ISOMORPHISM and (
        na != nb or any(len(a.rel(n)) != len(b.rel(n)) for n in a.relations)
    ):
        return None
    sa, sb = _bitsets(a, la), _bitsets(b, lb)
    doms = _initial_domains(a, b, kind, la, lb, sa, sb)
    if doms is None or (na and not all(doms)):
        return None
    # a non-injective map may send both ends of a pair to one vertex, which
    # then needs a loop; the kernel reads loops off the target rows
    b_out, b_in = _with_loops(sb[0], sb[2]), _with_loops(sb[1], sb[2])
    status, assign, _ = _backend.search_kernel(
        na, nb, sa[0], sa[1], b_out, b_in,
        kind.strong, kind.injective, kind.surjective, doms, budget,
    )
    if status == BUDGET:
        raise BudgetExhausted(budget)
    if status == ABSENT:
        return None
    assert status == FOUND
    return MorphismWitness({la[i]: lb[j] for i, j in enumerate(assign)}, kind)


def exists(a: Structure, b: Structure, kind: MorphKind, budget: int | None = None) -> bool:
    return search(a, b, kind, budget) is not None


def is_isomorphic(a: Structure, b: Structure) -> bool:
    return exists(a, b, MorphKind.ISOMORPHISM)


def embeds(a: Structure, b: Structure) -> bool:
    return exists(a, b, MorphKind.EMBEDDING)
