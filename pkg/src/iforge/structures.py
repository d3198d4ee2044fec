"""Finite relational structures over arbitrary natural-number labels.

A structure is a finite domain plus named binary relations drawn from
``edge``, ``order`` and ``tree``.  Values are immutable; every operation
here returns a new structure.
"""

from __future__ import annotations

import enum
import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any

from iforge.errors import ContractError, StructureFormatError, StructureValidationError

RELATION_NAMES = ("edge", "order", "tree")

Pair = tuple[int, int]


class StructureClass(enum.Enum):
    GRAPH = "Graph"
    ORDERED_GRAPH = "OrderedGraph"
    COMBINATORIAL_TREE = "CombinatorialTree"
    ORDERED_COMBINATORIAL_TREE = "OrderedCombinatorialTree"
    SET_TREE = "SetTree"
    ORDERED_SET_TREE = "OrderedSetTree"


class Structure:
    """A finite domain with named binary relations.

    Equality and hashing ignore ``kind_hint``.  ``relations`` is a read-only
    mapping; a relation name that is present with no pairs is still part of
    the signature.
    """

    __slots__ = ("domain", "relations", "kind_hint", "_key")

    def __init__(
        self,
        domain: Iterable[int],
        relations: Mapping[str, Iterable[Pair]] | None = None,
        kind_hint: StructureClass | None = None,
    ):
        dom = frozenset(int(v) for v in domain)
        for v in dom:
            if v < 0:
                raise ContractError(f"label {v} is negative")
        rels: dict[str, frozenset[Pair]] = {}
        for name, pairs in (relations or {}).items():
            if name not in RELATION_NAMES:
                raise ContractError(f"unknown relation name {name!r}")
            fs = frozenset((int(a), int(b)) for a, b in pairs)
            for a, b in fs:
                if a not in dom:
                    raise ContractError(f"label {a} out of domain")
                if b not in dom:
                    raise ContractError(f"label {b} out of domain")
            rels[name] = fs
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "relations", MappingProxyType(dict(sorted(rels.items()))))
        object.__setattr__(self, "kind_hint", kind_hint)
        object.__setattr__(
            self, "_key", (dom, tuple(sorted(rels.items(), key=lambda kv: kv[0])))
        )

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("Structure is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        rels = ", ".join(f"{n}={sorted(p)}" for n, p in self.relations.items())
        return f"Structure(domain={sorted(self.domain)}, {rels})"

    def __len__(self) -> int:
        return len(self.domain)

    @property
    def signature(self) -> frozenset[str]:
        return frozenset(self.relations)

    def rel(self, name: str) -> frozenset[Pair]:
        return self.relations.get(name, frozenset())

    def relabel(self, mapping: Mapping[int, int]) -> Structure:
        """Push the structure forward along an injective label map."""
        image = [mapping[v] for v in self.domain]
        if len(set(image)) != len(image):
            raise ContractError("relabeling is not injective on the domain")
        return Structure(
            image,
            {n: ((mapping[a], mapping[b]) for a, b in p) for n, p in self.relations.items()},
            self.kind_hint,
        )

    def induced(self, subset: Iterable[int]) -> Structure:
        sub = frozenset(subset) & self.domain
        return Structure(
            sub,
            {n: ((a, b) for a, b in p if a in sub and b in sub) for n, p in self.relations.items()},
        )

    def compact(self) -> Structure:
        """Order-preserving relabeling onto ``0..n-1``."""
        return self.relabel({v: i for i, v in enumerate(sorted(self.domain))})


def graph(n: int, edges: Iterable[Pair] = (), order: Iterable[Pair] | None = None) -> Structure:
    """Undirected graph on ``0..n-1``; each edge is stored in both directions."""
    sym = set()
    for a, b in edges:
        sym.add((a, b))
        sym.add((b, a))
    rels: dict[str, Iterable[Pair]] = {"edge": sym}
    if order is not None:
        rels["order"] = order
    return Structure(range(n), rels)


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Diagnostic:
    axiom: str
    witness: tuple
    message: str

    def __str__(self) -> str:
        return self.message


def _check_relation(s: Structure, name: str, out: list[Diagnostic]) -> bool:
    if name not in s.relations:
        out.append(Diagnostic("missing relation", (name,), f"missing relation: {name}"))
        return False
    return True


def _graph_axioms(s: Structure, out: list[Diagnostic]) -> bool:
    if not _check_relation(s, "edge", out):
        return False
    ok = True
    edge = s.rel("edge")
    for a, b in sorted(edge):
        if a == b:
            out.append(Diagnostic("irreflexive", (a, a), f"not irreflexive: {a}-{a}"))
            ok = False
        elif (b, a) not in edge:
            out.append(Diagnostic("symmetric", (a, b), f"not symmetric: ({a},{b}) without ({b},{a})"))
            ok = False
    return ok


def _transitive(s: Structure, name: str, out: list[Diagnostic]) -> None:
    if not _check_relation(s, name, out):
        return
    rel = s.rel(name)
    succ: dict[int, set[int]] = {}
    for a, b in rel:
        succ.setdefault(a, set()).add(b)
    for a, b in sorted(rel):
        for c in sorted(succ.get(b, ())):
            if (a, c) not in rel:
                out.append(
                    Diagnostic(
                        "transitive",
                        (a, b, c),
                        f"{name} not transitive: ({a},{b}),({b},{c}) without ({a},{c})",
                    )
                )
                return


def _adjacency(s: Structure) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in s.domain}
    for a, b in s.rel("edge"):
        adj[a].append(b)
    for v in adj:
        adj[v].sort()
    return adj


def _find_cycle(s: Structure) -> list[int] | None:
    adj = _adjacency(s)
    seen: set[int] = set()
    for root in sorted(s.domain):
        if root in seen:
            continue
        parent = {root: None}
        stack = [(root, iter(adj[root]))]
        path = [root]
        seen.add(root)
        while stack:
            v, it = stack[-1]
            for w in it:
                if w == parent[v]:
                    continue
                if w in path:
                    return path[path.index(w):] + [w]
                if w in seen:
                    continue
                seen.add(w)
                parent[w] = v
                path.append(w)
                stack.append((w, iter(adj[w])))
                break
            else:
                stack.pop()
                path.pop()
    return None


def _components(s: Structure) -> list[set[int]]:
    adj = _adjacency(s)
    comps, seen = [], set()
    for root in sorted(s.domain):
        if root in seen:
            continue
        comp, todo = {root}, [root]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    todo.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def _set_tree_axioms(s: Structure, out: list[Diagnostic]) -> None:
    if not _check_relation(s, "tree", out):
        return
    rel = s.rel("tree")
    for a, b in sorted(rel):
        if a == b:
            out.append(Diagnostic("irreflexive", (a,), f"tree not irreflexive at {a}"))
            return
    before = len(out)
    _transitive(s, "tree", out)
    if len(out) > before:
        return
    pred: dict[int, set[int]] = {v: set() for v in s.domain}
    for a, b in rel:
        pred[b].add(a)
    for v in sorted(s.domain):
        ps = sorted(pred[v])
        for i, p in enumerate(ps):
            for q in ps[i + 1:]:
                if (p, q) not in rel and (q, p) not in rel:
                    out.append(
                        Diagnostic("chain", (v, p, q), f"predecessors of {v} not a chain: {p}, {q}")
                    )
                    return
    minimal = sorted(v for v in s.domain if not pred[v])
    if len(minimal) != 1:
        out.append(
            Diagnostic("root", tuple(minimal), f"expected a single minimal element, found {minimal}")
        )


def validate(s: Structure, c: StructureClass) -> list[Diagnostic]:
    """Check ``s`` against the axioms of ``c``; an empty list means valid."""
    out: list[Diagnostic] = []
    if c in (StructureClass.SET_TREE, StructureClass.ORDERED_SET_TREE):
        _set_tree_axioms(s, out)
    else:
        is_graph = _graph_axioms(s, out)
        if is_graph and c in (
            StructureClass.COMBINATORIAL_TREE,
            StructureClass.ORDERED_COMBINATORIAL_TREE,
        ):
            comps = _components(s)
            if len(comps) > 1:
                a, b = min(comps[0]), min(comps[1])
                out.append(Diagnostic("connected", (a, b), f"not connected: {a} and {b}"))
            cyc = _find_cycle(s)
            if cyc is not None:
                out.append(
                    Diagnostic("acyclic", tuple(cyc), "cycle: " + "-".join(map(str, cyc)))
                )
    if c in (
        StructureClass.ORDERED_GRAPH,
        StructureClass.ORDERED_COMBINATORIAL_TREE,
        StructureClass.ORDERED_SET_TREE,
    ):
        _transitive(s, "order", out)
    return out


# ---------------------------------------------------------- colour refinement


def _rel_lists(s: Structure, labels: list[int]) -> list[tuple[list[list[int]], list[list[int]], list[bool]]]:
    idx = {v: i for i, v in enumerate(labels)}
    n = len(labels)
    res = []
    for name in sorted(s.relations):
        outs: list[list[int]] = [[] for _ in range(n)]
        ins: list[list[int]] = [[] for _ in range(n)]
        loop = [False] * n
        for a, b in s.relations[name]:
            i, j = idx[a], idx[b]
            if i == j:
                loop[i] = True
            else:
                outs[i].append(j)
                ins[j].append(i)
        res.append((outs, ins, loop))
    return res


def refine(rels, colours: list) -> list[int]:
    """Equitable colour refinement; returns colours as dense ranks.

    ``rels`` comes from :func:`_rel_lists`.  New colours are ranks of
    label-independent signatures, so the result is isomorphism-invariant
    (including across the disjoint union of two structures).
    """
    n = len(colours)
    rank = {c: i for i, c in enumerate(sorted(set(colours)))}
    col = [rank[c] for c in colours]
    ncol = len(rank)
    while True:
        sigs = []
        for v in range(n):
            parts = [col[v]]
            for outs, ins, loop in rels:
                parts.append(loop[v])
                parts.append(tuple(sorted(col[w] for w in outs[v])))
                parts.append(tuple(sorted(col[w] for w in ins[v])))
            sigs.append(tuple(parts))
        rank = {c: i for i, c in enumerate(sorted(set(sigs)))}
        new = [rank[sg] for sg in sigs]
        if len(rank) == ncol:
            return new
        col, ncol = new, len(rank)


def canonical_form(s: Structure) -> Structure:
    """Canonical relabeling of ``s`` onto ``0..n-1``.

    Individualisation-refinement without automorphism pruning: the result
    is the least encoding over every leaf of the search tree.  Exact, but
    exponential on highly symmetric inputs; meant for small structures.
    """
    labels = sorted(s.domain)
    n = len(labels)
    rels = _rel_lists(s, labels)
    names = sorted(s.relations)
    pair_idx = [
        [(labels.index(a), labels.index(b)) for a, b in s.relations[nm]] for nm in names
    ] if n else [[] for _ in names]
    best: tuple | None = None
    best_perm: list[int] | None = None

    def encode(col: list[int]) -> tuple:
        return tuple(tuple(sorted((col[i], col[j]) for i, j in pairs)) for pairs in pair_idx)

    def walk(col: list[int]) -> None:
        nonlocal best, best_perm
        col = refine(rels, col)
        counts: dict[int, int] = {}
        for c in col:
            counts[c] = counts.get(c, 0) + 1
        target = next((c for c in sorted(counts) if counts[c] > 1), None)
        if target is None:
            enc = encode(col)
            if best is None or enc < best:
                best, best_perm = enc, col
            return
        for v in range(n):
            if col[v] == target:
                walk([(c, 0 if w == v else 1) for w, c in enumerate(col)])

    walk([0] * n)
    perm = best_perm or []
    return s.relabel({labels[i]: perm[i] for i in range(n)})


# ------------------------------------------------------------ serialisation


def structure_to_doc(s: Structure) -> dict:
    return {
        "domain": sorted(s.domain),
        "relations": {n: [list(p) for p in sorted(s.relations[n])] for n in sorted(s.relations)},
    }


def save_structure(s: Structure) -> bytes:
    return (json.dumps(structure_to_doc(s)) + "\n").encode()


def _as_label(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise StructureFormatError(f"{where}: expected a natural-number label, got {x!r}")
    return x


def structure_from_doc(doc: Any) -> Structure:
    if not isinstance(doc, dict):
        raise StructureFormatError("document must be a JSON object")
    if "domain" not in doc or not isinstance(doc["domain"], list):
        raise StructureFormatError("document needs a 'domain' list")
    domain = [_as_label(v, "domain") for v in doc["domain"]]
    rels_doc = doc.get("relations", {})
    if not isinstance(rels_doc, dict):
        raise StructureFormatError("'relations' must be an object")
    dom = set(domain)
    rels: dict[str, list[Pair]] = {}
    for name, pairs in rels_doc.items():
        if name not in RELATION_NAMES:
            raise StructureFormatError(f"unknown relation name {name!r}")
        if not isinstance(pairs, list):
            raise StructureFormatError(f"relation {name!r} must be a list of pairs")
        out = []
        for p in pairs:
            if not isinstance(p, list) or len(p) != 2:
                raise StructureFormatError(f"relation {name!r}: malformed pair {p!r}")
            a, b = (_as_label(x, name) for x in p)
            for x in (a, b):
                if x not in dom:
                    raise StructureValidationError(f"label {x} out of domain")
            out.append((a, b))
        rels[name] = out
    return Structure(domain, rels)


def load_structure(data: bytes | str) -> Structure:
    """Parse a structure document.

    Malformed JSON raises :class:`StructureFormatError` carrying the
    character offset; labels outside the domain raise
    :class:`StructureValidationError`.
    """
    if isinstance(data, bytes):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise StructureFormatError(
            f"malformed document at line {e.lineno} column {e.colno}: {e.msg}", e.pos
        ) from None
    return structure_from_doc(doc)


def export_dot(s: Structure, name: str = "G") -> bytes:
    """Render as DOT: ``edge`` undirected, ``order`` dashed arrows, ``tree`` solid arrows."""
    lines = [f"digraph {name} {{"]
    lines += [f"  {v};" for v in sorted(s.domain)]
    for a, b in sorted(s.rel("edge")):
        if a <= b or (b, a) not in s.rel("edge"):
            lines.append(f"  {a} -> {b} [dir=none];")
    lines += [f"  {a} -> {b} [style=dashed];" for a, b in sorted(s.rel("order"))]
    lines += [f"  {a} -> {b};" for a, b in sorted(s.rel("tree"))]
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()
