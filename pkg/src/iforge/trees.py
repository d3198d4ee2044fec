"""Truncated graph-to-tree codings and the witness maps built from them.

Two codings are provided.  ``T`` attaches one terminal to every even-length
sequence and to odd-length sequences whose even-position relevant pair is
an edge.  ``R`` reserves the value 0 as a wildcard: a nonempty sequence
containing 0 gets two terminals, and a positive sequence gets one when its
relevant pair, shifted down by one, is an edge.  Both carry the same
equivalence relation on nodes as their ``order``.

Node labels do not depend on the truncation depth: a sequence of shortlex
rank ``k`` is labelled ``3k`` and its terminals ``3k+1`` and ``3k+2``.  The
code at depth ``d`` is therefore literally an induced substructure of the
code at any larger depth, and deep targets can be checked on just the
nodes that matter (see :func:`induced_code`).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Literal, NamedTuple, Union

from iforge.coding import CANTOR, Pairing, Seq, even_subsequence, extension_length, relevant_pair
from iforge.errors import ContractError
from iforge.morphisms import MorphKind, MorphismWitness, verify
from iforge.structures import Structure, StructureClass, validate

Kind = Literal["T", "R"]


@dataclass(frozen=True, order=True)
class SeqNode:
    seq: Seq


@dataclass(frozen=True, order=True)
class TermNode:
    parent: Seq
    slot: int = 0


TreeNode = Union[SeqNode, TermNode]


@dataclass(frozen=True)
class TruncSpec:
    max_len: int
    alphabet: int

    def __post_init__(self):
        if self.max_len < 1 or self.alphabet < 1:
            raise ContractError("truncation needs max_len >= 1 and alphabet >= 1")


# ------------------------------------------------------------------ labels

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _digits_value(s: Seq, base: int) -> int:
    # halves keep the big-int products balanced; short runs parse in C
    if len(s) <= 2048:
        if base <= len(_DIGITS):
            return int("".join([_DIGITS[d] for d in s]), base) if s else 0
        value = 0
        for d in s:
            value = value * base + d
        return value
    mid = len(s) // 2
    right = s[mid:]
    return _digits_value(s[:mid], base) * base ** len(right) + _digits_value(right, base)


def seq_rank(s: Seq, alphabet: int) -> int:
    """Position of ``s`` in the shortlex order of sequences over the alphabet."""
    n = len(s)
    if alphabet == 1:
        return n
    return (alphabet**n - 1) // (alphabet - 1) + _digits_value(tuple(s), alphabet)


@lru_cache(maxsize=1 << 16)
def node_label(node: TreeNode, alphabet: int) -> int:
    if isinstance(node, SeqNode):
        return 3 * seq_rank(node.seq, alphabet)
    return 3 * seq_rank(node.parent, alphabet) + 1 + node.slot


def _node_seq(node: TreeNode) -> Seq:
    return node.seq if isinstance(node, SeqNode) else node.parent


# -------------------------------------------------------------- the rules


def _edges(x: Structure) -> frozenset[tuple[int, int]]:
    return x.rel("edge")


def terminal_count(kind: Kind, edges, s: Seq, pairing: Pairing = CANTOR) -> int:
    """How many terminal successors ``s`` carries in the ``kind`` code."""
    if kind == "T":
        if len(s) % 2 == 0:
            return 1
        return 1 if relevant_pair(even_subsequence(s), pairing) in edges else 0
    if not s:
        return 0
    if 0 in s:
        return 2
    a, b = relevant_pair(s, pairing)
    return 1 if (a - 1, b - 1) in edges else 0


def order_class(node: TreeNode, pairing: Pairing = CANTOR) -> tuple:
    """Key of the node's class in the equivalence carried as ``order``."""
    if isinstance(node, TermNode):
        return ("term",)
    if not node.seq:
        return ("root",)
    return ("rp",) + relevant_pair(even_subsequence(node.seq), pairing)


@dataclass(frozen=True)
class TreeCode:
    structure: Structure
    provenance: Mapping[int, TreeNode]
    source_kind: Kind
    spec: TruncSpec
    pairing: Pairing = CANTOR

    def label(self, node: TreeNode) -> int:
        return node_label(node, self.spec.alphabet)

    @property
    def labels(self) -> dict[TreeNode, int]:
        return {n: lab for lab, n in self.provenance.items()}

    def provenance_doc(self) -> dict[str, dict]:
        doc = {}
        for lab in sorted(self.provenance):
            node = self.provenance[lab]
            if isinstance(node, SeqNode):
                doc[str(lab)] = {"seq": list(node.seq)}
            else:
                doc[str(lab)] = {"term": list(node.parent) + [node.slot]}
        return doc


def _check_graph(x: Structure, kind: Kind, spec: TruncSpec) -> None:
    diags = validate(x, StructureClass.GRAPH)
    if diags:
        raise ContractError(f"not a graph: {diags[0]}")
    n = len(x.domain)
    if x.domain != frozenset(range(n)):
        raise ContractError("graph domain must be 0..n-1")
    need = n if kind == "T" else n + 1
    if need > spec.alphabet:
        raise ContractError(f"graph on {n} vertices exceeds alphabet {spec.alphabet}")


def _relations(nodes: list[TreeNode], labels: dict[TreeNode, int], pairing: Pairing):
    tree: list[tuple[int, int]] = []
    longest = max((len(_node_seq(n)) for n in nodes), default=0)
    seqs = {n.seq: labels[n] for n in nodes if isinstance(n, SeqNode)}
    if longest <= 64:
        for n in nodes:
            s = _node_seq(n)
            top = len(s) if isinstance(n, SeqNode) else len(s) + 1
            for k in range(top):
                lab = seqs.get(s[:k])
                if lab is not None:
                    tree.append((lab, labels[n]))
    else:
        for n in nodes:
            s = _node_seq(n)
            strict = isinstance(n, SeqNode)
            for p, lab in seqs.items():
                if len(p) < len(s) or (not strict and len(p) == len(s)):
                    if s[:len(p)] == p:
                        tree.append((lab, labels[n]))
    classes: dict[tuple, list[int]] = {}
    for n in nodes:
        classes.setdefault(order_class(n, pairing), []).append(labels[n])
    order = [(a, b) for members in classes.values() for a in members for b in members]
    return tree, order


def induced_code(
    kind: Kind,
    x: Structure,
    spec: TruncSpec,
    nodes: Iterable[TreeNode],
    pairing: Pairing = CANTOR,
) -> Structure:
    """The substructure of the full ``kind`` code of ``x`` induced on ``nodes``.

    Raises :class:`ContractError` if a node is not part of the code.
    """
    _check_graph(x, kind, spec)
    edges = _edges(x)
    nodes = sorted(set(nodes), key=lambda n: node_label(n, spec.alphabet))
    for n in nodes:
        s = _node_seq(n)
        if len(s) > spec.max_len or (s and (min(s) < 0 or max(s) >= spec.alphabet)):
            raise ContractError(f"{n} lies outside the truncation {spec}")
        if isinstance(n, TermNode) and n.slot >= terminal_count(kind, edges, s, pairing):
            raise ContractError(f"{n} is not a terminal of the {kind}-code")
    labels = {n: node_label(n, spec.alphabet) for n in nodes}
    tree, order = _relations(nodes, labels, pairing)
    return Structure(
        labels.values(), {"tree": tree, "order": order}, StructureClass.ORDERED_SET_TREE
    )


def all_sequences(spec: TruncSpec) -> list[Seq]:
    return [
        s
        for length in range(spec.max_len + 1)
        for s in itertools.product(range(spec.alphabet), repeat=length)
    ]


def build(kind: Kind, x: Structure, spec: TruncSpec, pairing: Pairing = CANTOR) -> TreeCode:
    _check_graph(x, kind, spec)
    edges = _edges(x)
    nodes: list[TreeNode] = []
    for s in all_sequences(spec):
        nodes.append(SeqNode(s))
        nodes.extend(TermNode(s, k) for k in range(terminal_count(kind, edges, s, pairing)))
    labels = {n: node_label(n, spec.alphabet) for n in nodes}
    tree, order = _relations(nodes, labels, pairing)
    st = Structure(labels.values(), {"tree": tree, "order": order}, StructureClass.ORDERED_SET_TREE)
    return TreeCode(st, {lab: n for n, lab in labels.items()}, kind, spec, pairing)


def build_t(x: Structure, spec: TruncSpec, pairing: Pairing = CANTOR) -> TreeCode:
    """Truncated ``T`` coding of a graph on ``0..n-1`` with ``n <= alphabet``."""
    return build("T", x, spec, pairing)


def build_r(x: Structure, spec: TruncSpec, pairing: Pairing = CANTOR) -> TreeCode:
    """Truncated ``R`` coding; value ``v > 0`` stands for vertex ``v - 1``."""
    return build("R", x, spec, pairing)


def r_spec(x: Structure, max_len: int) -> TruncSpec:
    """The ``R`` truncation whose alphabet is exactly the graph's values."""
    return TruncSpec(max_len, len(x.domain) + 1)


# ---------------------------------------------------------------- witnesses


def _require(a: Structure, b: Structure, w: MorphismWitness, kind: MorphKind, what: str) -> None:
    if w.kind is not kind:
        raise ContractError(f"{what} must be a {kind.name.lower()} witness")
    try:
        ok = verify(a, b, w)
    except ContractError as e:
        raise ContractError(f"{what} fails verification: {e}") from None
    if not ok:
        raise ContractError(f"{what} fails verification as {kind.name.lower()}")


def _map_code(source: TreeCode, target_alphabet: int, node_map) -> dict[int, int]:
    return {
        lab: node_label(node_map(node), target_alphabet)
        for lab, node in source.provenance.items()
    }


def lift_iso(
    kind: Kind,
    x: Structure,
    y: Structure,
    sigma: MorphismWitness,
    spec: TruncSpec,
    pairing: Pairing = CANTOR,
) -> MorphismWitness:
    """Lift a graph isomorphism to an isomorphism between the two codes.

    ``sigma`` acts entrywise on sequences (shifted by one for ``R``, which
    keeps the wildcard 0 fixed).  Alphabet letters beyond the graph are
    fixed, which is a permutation because isomorphic graphs have the same
    size.  Terminals follow their parent slot by slot.
    """
    _require(x, y, sigma, MorphKind.ISOMORPHISM, "sigma")
    source = build(kind, x, spec, pairing)
    build(kind, y, spec, pairing)  # precondition check on y
    if kind == "T":
        perm = {a: sigma.map.get(a, a) for a in range(spec.alphabet)}
    else:
        perm = {0: 0}
        perm.update({v + 1: sigma.map[v] + 1 if v in sigma.map else v + 1 for v in range(spec.alphabet - 1)})

    def image(node: TreeNode) -> TreeNode:
        if isinstance(node, SeqNode):
            return SeqNode(tuple(perm[d] for d in node.seq))
        return TermNode(tuple(perm[d] for d in node.parent), node.slot)

    return MorphismWitness(_map_code(source, spec.alphabet, image), MorphKind.ISOMORPHISM)


def _extract(kind: Kind, x, y, tau, spec, pairing) -> MorphismWitness:
    cx, cy = build(kind, x, spec, pairing), build(kind, y, spec, pairing)
    _require(cx.structure, cy.structure, tau, MorphKind.ISOMORPHISM, "tau")
    shift = 0 if kind == "T" else 1
    sigma = {}
    for n in sorted(x.domain):
        img = cy.provenance[tau.map[cx.label(SeqNode((n + shift,)))]]
        if not isinstance(img, SeqNode) or len(img.seq) != 1:
            raise ContractError(f"image of the singleton <{n + shift}> is {img}, not a singleton")
        sigma[n] = img.seq[0] - shift
    return MorphismWitness(sigma, MorphKind.ISOMORPHISM)


def extract_iso_t(
    x: Structure, y: Structure, tau: MorphismWitness, spec: TruncSpec, pairing: Pairing = CANTOR
) -> MorphismWitness:
    """Candidate graph map read off an isomorphism of ``T`` codes.

    ``sigma(n) = m`` when ``tau`` sends ``<n>`` to ``<m>``.  The result is
    not checked; verify it against the graphs.
    """
    return _extract("T", x, y, tau, spec, pairing)


def extract_iso_r(
    x: Structure, y: Structure, tau: MorphismWitness, spec: TruncSpec, pairing: Pairing = CANTOR
) -> MorphismWitness:
    """As :func:`extract_iso_t` for ``R`` codes, reading ``<n+1>``."""
    return _extract("R", x, y, tau, spec, pairing)


class UniversalEmbedding(NamedTuple):
    witness: MorphismWitness
    target_spec: TruncSpec
    images: dict[TreeNode, TreeNode]


def universal_images(x: Structure, spec: TruncSpec, pairing: Pairing = CANTOR) -> dict[TreeNode, TreeNode]:
    """Node map of the universal embedding of the ``T`` code of ``x``.

    Every image sequence has even length, so it sits in the part of a
    ``T`` code that does not depend on the graph.  A child ``s+<a>`` of a
    node mapped to ``P`` goes to the shortest even-length extension of
    ``P`` that starts with ``a`` and whose relevant pair can be written
    strictly after that first coordinate; remaining entries are 0.
    """
    code = build_t(x, spec, pairing)
    seq_img: dict[Seq, Seq] = {(): ()}
    for s in all_sequences(spec):
        if not s:
            continue
        parent = seq_img[s[:-1]]
        p, q = relevant_pair(even_subsequence(s), pairing)
        length, n, m = extension_length(len(parent), p != q, pairing)
        v = list(parent) + [0] * (2 * length - len(parent))
        v[len(parent)] = s[-1]
        v[2 * n] = p
        v[2 * m] = q
        seq_img[s] = tuple(v)
    images: dict[TreeNode, TreeNode] = {}
    for node in code.provenance.values():
        if isinstance(node, SeqNode):
            images[node] = SeqNode(seq_img[node.seq])
        else:
            images[node] = TermNode(seq_img[node.parent], 0)
    return images


@lru_cache(maxsize=64)
def _universal(x: Structure, spec: TruncSpec, pairing: Pairing):
    # images do not depend on the target graph, so one computation serves all
    images = universal_images(x, spec, pairing)
    depth = max(len(_node_seq(n)) for n in images.values())
    w = MorphismWitness(
        {node_label(k, spec.alphabet): node_label(v, spec.alphabet) for k, v in images.items()},
        MorphKind.EMBEDDING,
    )
    return w, TruncSpec(max(1, depth), spec.alphabet), tuple(images.items())


def embed_universal_t(
    x: Structure, y: Structure, spec: TruncSpec, pairing: Pairing = CANTOR
) -> UniversalEmbedding:
    """Embed the ``T`` code of ``x`` into the ``T`` code of ``y`` at a deeper truncation.

    The returned ``target_spec`` is the least truncation holding every
    image.  Check the witness against
    ``induced_code("T", y, target_spec, images.values())``: materialising
    the whole target code is infeasible beyond toy depths.
    """
    _check_graph(y, "T", spec)
    w, target, items = _universal(x, spec, pairing)
    return UniversalEmbedding(w, target, dict(items))


def weak_epi_values(x: Structure, y: Structure, f: MorphismWitness) -> dict[int, int]:
    """The value map ``g``: 0 to 0, ``n+1`` to ``m+1`` if ``f(m) = n``, else 0."""
    inv = {v: k for k, v in f.map.items()}
    g = {0: 0}
    for n in sorted(y.domain):
        g[n + 1] = inv[n] + 1 if n in inv else 0
    return g


def lift_sequence(f: MorphismWitness, s: Seq) -> Seq:
    """A preimage of ``s`` under the entrywise value map: ``v > 0`` to ``f(v-1)+1``."""
    return tuple(0 if v == 0 else f.map[v - 1] + 1 for v in s)


def weak_epi_r(
    x: Structure, y: Structure, f: MorphismWitness, spec: TruncSpec, pairing: Pairing = CANTOR
) -> MorphismWitness:
    """Weak epimorphism from the ``R`` code of ``y`` onto the ``R`` code of ``x``.

    ``f`` is a graph embedding of ``x`` into ``y``.  ``spec`` is the
    truncation of the ``x`` side and its alphabet must be ``|x| + 1`` so
    that every value is hit; the ``y`` side uses ``r_spec(y,
    spec.max_len)``.  Terminals go to the same slot of the image sequence.
    """
    _require(x, y, f, MorphKind.EMBEDDING, "f")
    if spec.alphabet != len(x.domain) + 1:
        raise ContractError(
            f"alphabet {spec.alphabet} must equal |x|+1 = {len(x.domain) + 1} for surjectivity"
        )
    y_spec = r_spec(y, spec.max_len)
    source = build_r(y, y_spec, pairing)
    build_r(x, spec, pairing)
    g = weak_epi_values(x, y, f)

    def image(node: TreeNode) -> TreeNode:
        if isinstance(node, SeqNode):
            return SeqNode(tuple(g[d] for d in node.seq))
        return TermNode(tuple(g[d] for d in node.parent), node.slot)

    return MorphismWitness(_map_code(source, spec.alphabet, image), MorphKind.WEAK_EPIMORPHISM)
