"""Even/odd sums, parity-monotone permutations and the finite W-space.

``oplus(x, z)`` copies ``x`` onto the even labels and ``z`` onto the odd
ones.  A parity-monotone permutation of ``0..2k-1`` is increasing on each
parity class, so it is fixed by where the evens go; there are ``C(2k, k)``
of them.  The W-space pairs structures from two families through a
classifier and sends ``(x, z, g)`` to ``g`` acting on ``oplus(x, z)``.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

from iforge.errors import ContractError
from iforge.morphisms import MorphKind, MorphismWitness, embeds, is_isomorphic, verify
from iforge.structures import Structure, StructureClass


def oplus(x: Structure, z: Structure) -> Structure:
    names = set(x.relations) | set(z.relations)
    rels = {
        n: [(2 * a, 2 * b) for a, b in x.rel(n)] + [(2 * a + 1, 2 * b + 1) for a, b in z.rel(n)]
        for n in names
    }
    return Structure([2 * a for a in x.domain] + [2 * b + 1 for b in z.domain], rels)


def strict_root(x: Structure) -> int:
    """The vertex below every other vertex in the ``order`` relation."""
    order = x.rel("order")
    roots = [v for v in x.domain if all((v, u) in order for u in x.domain if u != v)]
    if len(roots) != 1 or (roots[0], roots[0]) in order:
        raise ContractError("root of x undefined")
    return roots[0]


def reflexive_root(z: Structure) -> int:
    """The unique element whose only ``order`` pair is with itself."""
    order = z.rel("order")
    roots = [
        v for v in z.domain
        if (v, v) in order and not any((v in p) for p in order if p != (v, v))
    ]
    if not roots:
        raise ContractError("root of z undefined")
    if len(roots) > 1:
        raise ContractError("root of z not unique")
    return roots[0]


def oplus_rooted(x: Structure, z: Structure) -> Structure:
    """``oplus(x, z)`` with one undirected edge joining the two roots."""
    rx, rz = 2 * strict_root(x), 2 * reflexive_root(z) + 1
    s = oplus(x, z)
    rels = {n: set(p) for n, p in s.relations.items()}
    rels.setdefault("edge", set()).update({(rx, rz), (rz, rx)})
    return Structure(s.domain, rels)


# ------------------------------------------------------- parity permutations


@dataclass(frozen=True)
class ParityPerm:
    """A permutation of ``0..2k-1`` listed as its images."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))) or len(self.images) % 2:
            raise ContractError("not a permutation of an even-sized initial segment")
        if not is_parity_monotone(self.images):
            raise ContractError("permutation is not monotone on each parity class")

    @property
    def k(self) -> int:
        return len(self.images) // 2

    def __call__(self, n: int) -> int:
        return self.images[n] if n < len(self.images) else n

    def odd_images(self) -> frozenset[int]:
        return frozenset(self.images[1::2])

    @classmethod
    def from_evens(cls, k: int, evens: Sequence[int]) -> ParityPerm:
        evens = sorted(evens)
        odds = sorted(set(range(2 * k)) - set(evens))
        g = [0] * (2 * k)
        g[0::2], g[1::2] = evens, odds
        return cls(tuple(g))


def is_parity_monotone(h: Sequence[int]) -> bool:
    return all(a < b for a, b in zip(h[0::2], h[2::2])) and all(
        a < b for a, b in zip(h[1::2], h[3::2])
    )


def enumerate_g(k: int) -> list[ParityPerm]:
    """All parity-monotone permutations of ``0..2k-1``, by evens-image set."""
    if k < 1:
        raise ContractError("k must be at least 1")
    return [ParityPerm.from_evens(k, a) for a in itertools.combinations(range(2 * k), k)]


def decompose_parity(h: Sequence[int]) -> tuple[ParityPerm, tuple[int, ...], tuple[int, ...]]:
    """Split ``h`` as ``h(2n) = g(2p(n))`` and ``h(2n+1) = g(2q(n)+1)``."""
    if sorted(h) != list(range(len(h))) or len(h) % 2:
        raise ContractError("not a permutation of an even-sized initial segment")
    evens, odds = sorted(h[0::2]), sorted(h[1::2])
    g = ParityPerm.from_evens(len(h) // 2, evens)
    erank = {v: i for i, v in enumerate(evens)}
    orank = {v: i for i, v in enumerate(odds)}
    return g, tuple(erank[v] for v in h[0::2]), tuple(orank[v] for v in h[1::2])


Perm = ParityPerm | Sequence[int] | Mapping[int, int]


def _as_function(g: Perm) -> Callable[[int], int]:
    if isinstance(g, ParityPerm):
        return g
    if isinstance(g, Mapping):
        return lambda n: g.get(n, n)
    return lambda n: g[n] if n < len(g) else n


def logic_action(g: Perm, a: Structure) -> Structure:
    """Relabel ``a`` along ``g``; labels ``g`` does not mention stay fixed."""
    f = _as_function(g)
    mapping = {v: f(v) for v in a.domain}
    if len(set(mapping.values())) != len(mapping):
        raise ContractError("permutation is not injective on the domain")
    return a.relabel(mapping)


def glue_embeddings(
    e1: MorphismWitness,
    e2: MorphismWitness,
    *,
    source: tuple[Structure, Structure] | None = None,
    target: tuple[Structure, Structure] | None = None,
) -> MorphismWitness:
    """Combine maps of the even and odd summands into one map of the sums.

    The result is an isomorphism when both inputs are, else an embedding.
    Passing ``source=(x1, z1)`` and ``target=(x2, z2)`` verifies the inputs.
    """
    for w in (e1, e2):
        if w.kind not in (MorphKind.EMBEDDING, MorphKind.ISOMORPHISM):
            raise ContractError("gluing needs embeddings or isomorphisms")
    if source is not None and target is not None:
        for w, a, b in ((e1, source[0], target[0]), (e2, source[1], target[1])):
            if not verify(a, b, w):
                raise ContractError(f"summand map fails verification as {w.kind.name.lower()}")
    kind = MorphKind.ISOMORPHISM if e1.kind is e2.kind is MorphKind.ISOMORPHISM else MorphKind.EMBEDDING
    m = {2 * a: 2 * b for a, b in e1.map.items()}
    m.update({2 * a + 1: 2 * b + 1 for a, b in e2.map.items()})
    return MorphismWitness(m, kind)


def split_parts(a: Structure) -> tuple[Structure, Structure]:
    """(vertices not order-related to themselves, those that are), induced."""
    order = a.rel("order")
    refl = {v for v in a.domain if (v, v) in order}
    return a.induced(a.domain - refl), a.induced(refl)


# ---------------------------------------------------------------- W-space


def _irreflexive(s: Structure) -> bool:
    return not any(a == b for a, b in s.rel("order"))


def _reflexive(s: Structure) -> bool:
    order = s.rel("order")
    return all((v, v) in order for v in s.domain)


@dataclass
class WitnessKit:
    """Finite stand-ins for two classes and the classifier between them.

    ``classify`` sends a member of ``family_second`` to an index into
    ``family_prime``; it must respect isomorphism.
    """

    family_prime: list[Structure]
    family_second: list[Structure]
    classify: Callable[[Structure], int]
    section: Callable[[int], Structure] | None = None

    def __post_init__(self):
        for i, x in enumerate(self.family_prime):
            if not _irreflexive(x):
                raise ContractError(f"family_prime[{i}] has a reflexive order pair")
        for i, z in enumerate(self.family_second):
            if not _reflexive(z):
                raise ContractError(f"family_second[{i}] order is not reflexive")

    def check_classifier(self) -> None:
        """Raise with a counterexample if ``classify`` splits an iso class."""
        labels = [self.classify(z) for z in self.family_second]
        for i, j in itertools.combinations(range(len(self.family_second)), 2):
            if labels[i] != labels[j] and is_isomorphic(self.family_second[i], self.family_second[j]):
                raise ContractError(
                    f"classifier not iso-invariant: family_second[{i}] and [{j}] are isomorphic "
                    f"but classified as {labels[i]} and {labels[j]}"
                )


@dataclass(frozen=True)
class NClasses:
    """Representatives ``(z_i, x_i)`` as index pairs into the kit families.

    A ``z`` isomorphic to one of the first ``n-1`` representatives is paired
    with its ``x_i``; every other ``z`` goes with the last ``x``.
    """

    reps: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class WEntry:
    x_index: int
    z_index: int
    g: ParityPerm
    x: Structure = field(repr=False, compare=False)
    z: Structure = field(repr=False, compare=False)


@dataclass
class WSpace:
    entries: list[WEntry]
    S: list[list[bool]]
    F: list[list[bool]]
    images: list[Structure]


def _partners(kit: WitnessKit, variant: NClasses | None) -> list[tuple[int, int]]:
    prime = kit.family_prime
    iso_prime = [[is_isomorphic(a, b) for b in prime] for a in prime]
    pairs = []
    if variant is None:
        for zi, z in enumerate(kit.family_second):
            target = kit.classify(z)
            pairs.extend((xi, zi) for xi in range(len(prime)) if iso_prime[target][xi])
        return pairs
    reps = list(variant.reps)
    if not reps:
        raise ContractError("n-classes variant needs at least one representative")
    for (a, _), (b, _) in itertools.combinations(reps, 2):
        if is_isomorphic(kit.family_second[a], kit.family_second[b]):
            raise ContractError(f"representatives family_second[{a}] and [{b}] are isomorphic")
    for zi, z in enumerate(kit.family_second):
        target = reps[-1][1]
        for rz, rx in reps[:-1]:
            if is_isomorphic(z, kit.family_second[rz]):
                target = rx
                break
        pairs.extend((xi, zi) for xi in range(len(prime)) if iso_prime[target][xi])
    return pairs


def assemble_w(kit: WitnessKit, k: int, variant: NClasses | None = None) -> WSpace:
    """Every admissible ``(x, z, g)`` with ``g`` in ``enumerate_g(k)``.

    ``S`` compares x-parts by embeddability and ``F`` compares z-parts by
    isomorphism; ``images[i]`` is ``g`` acting on ``oplus(x, z)``.
    """
    kit.check_classifier()
    perms = enumerate_g(k)
    entries = [
        WEntry(xi, zi, g, kit.family_prime[xi], kit.family_second[zi])
        for xi, zi in _partners(kit, variant)
        for g in perms
    ]
    xs = sorted({e.x_index for e in entries})
    zs = sorted({e.z_index for e in entries})
    emb = {(a, b): embeds(kit.family_prime[a], kit.family_prime[b]) for a in xs for b in xs}
    iso = {(a, b): is_isomorphic(kit.family_second[a], kit.family_second[b]) for a in zs for b in zs}
    S = [[emb[e1.x_index, e2.x_index] for e2 in entries] for e1 in entries]
    F = [[iso[e1.z_index, e2.z_index] for e2 in entries] for e1 in entries]
    images = [logic_action(e.g, oplus(e.x, e.z)) for e in entries]
    return WSpace(entries, S, F, images)
