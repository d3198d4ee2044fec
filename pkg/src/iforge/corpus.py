"""Small exhaustive corpora and the witness kits built from them."""

from __future__ import annotations

import itertools
from functools import lru_cache

from iforge.coding import CANTOR, Pairing
from iforge.morphisms import is_isomorphic
from iforge.structures import Structure, graph
from iforge.sums import NClasses, WitnessKit
from iforge.trees import TruncSpec, build_t


def all_graphs(n: int) -> list[Structure]:
    """Every labeled graph on ``0..n-1``, ordered by edge bitmask over lex pairs."""
    pairs = list(itertools.combinations(range(n), 2))
    return [
        graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
        for mask in range(1 << len(pairs))
    ]


@lru_cache(maxsize=None)
def g3() -> tuple[Structure, ...]:
    """All labeled graphs on 1 to 3 vertices (11 of them)."""
    return tuple(g for n in (1, 2, 3) for g in all_graphs(n))


@lru_cache(maxsize=None)
def g4() -> tuple[Structure, ...]:
    return tuple(all_graphs(4))


def with_strict_order(x: Structure) -> Structure:
    """``x`` plus the natural strict order ``<`` and an empty ``tree``."""
    order = itertools.combinations(sorted(x.domain), 2)
    return Structure(x.domain, {"edge": x.rel("edge"), "order": order, "tree": ()})


def code_member(code: Structure) -> Structure:
    """A tree code with labels compacted and an empty ``edge`` relation."""
    s = Structure(code.domain, {"edge": (), "order": code.rel("order"), "tree": code.rel("tree")})
    return s.compact()


def t_code_kit(
    spec: TruncSpec = TruncSpec(3, 3), pairing: Pairing = CANTOR
) -> tuple[WitnessKit, NClasses]:
    """Kit whose second family is the distinct ``T`` codes of the G3 graphs.

    ``family_prime`` is G3 with the natural strict order, and a code is
    classified as the first G3 graph it codes up to isomorphism.  Graph
    monomorphisms extend to alphabet permutations, so embeddability of the
    x-parts carries over to the codes.  The second return value lists one
    representative per isomorphism class of codes with its classified
    partner.
    """
    graphs = g3()
    codes = [code_member(build_t(x, spec, pairing).structure) for x in graphs]
    second: list[Structure] = []
    for c in codes:
        if c not in second:
            second.append(c)

    def classify(z: Structure) -> int:
        for i, c in enumerate(codes):
            if len(c) == len(z) and is_isomorphic(c, z):
                return i
        raise ValueError("structure is not the code of a corpus graph")

    kit = WitnessKit([with_strict_order(x) for x in graphs], second, classify)
    reps: list[tuple[int, int]] = []
    for zi, z in enumerate(second):
        if not any(is_isomorphic(z, second[r]) for r, _ in reps):
            reps.append((zi, classify(z)))
    return kit, NClasses(tuple(reps))
