import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iforge import _search_py
from iforge._backend import BACKEND
from iforge.errors import BudgetExhausted, ContractError
from iforge.morphisms import (
    MorphKind,
    MorphismWitness,
    _bitsets,
    _initial_domains,
    _with_loops,
    embeds,
    is_isomorphic,
    naive_search,
    search,
    verify,
)
from iforge.structures import Structure, graph
from strategies import graphs, structures

P2, P3, K3 = graph(2, [(0, 1)]), graph(3, [(0, 1), (1, 2)]), graph(3, [(0, 1), (1, 2), (0, 2)])


def test_embedding_example():
    w = search(P2, P3, MorphKind.EMBEDDING)
    assert dict(w.map) == {0: 0, 1: 1}
    assert search(K3, P3, MorphKind.EMBEDDING) is None


def test_homomorphism_reflects_relations():
    # forward-only maps may create edges; strong ones may not
    e2 = graph(2)
    assert dict(search(e2, P2, MorphKind.HOMOMORPHISM).map) == {0: 0, 1: 0}
    assert search(P2, graph(1), MorphKind.WEAK_HOMOMORPHISM) is None
    w = search(e2, P2, MorphKind.WEAK_HOMOMORPHISM)
    assert dict(w.map) == {0: 0, 1: 0}
    assert not verify(e2, P2, MorphismWitness({0: 0, 1: 1}, MorphKind.HOMOMORPHISM))
    assert verify(e2, P2, MorphismWitness({0: 0, 1: 1}, MorphKind.WEAK_HOMOMORPHISM))


def test_weak_epimorphism_example():
    w = MorphismWitness({0: 0, 1: 1, 2: 0}, MorphKind.WEAK_EPIMORPHISM)
    assert verify(P3, P2, w)
    assert verify(P3, P2, MorphismWitness({0: 0, 1: 1, 2: 0}, MorphKind.EPIMORPHISM))
    # merging the ends of edge (0, 1) would need a loop
    assert not verify(P3, P2, MorphismWitness({0: 0, 1: 0, 2: 1}, MorphKind.WEAK_EPIMORPHISM))


def test_verify_contract_errors():
    with pytest.raises(ContractError):
        verify(P2, P3, MorphismWitness({0: 0}, MorphKind.EMBEDDING))
    with pytest.raises(ContractError):
        verify(P2, P3, MorphismWitness({0: 0, 1: 9}, MorphKind.EMBEDDING))
    with pytest.raises(ContractError):
        verify(P2, Structure([0, 1], {"order": []}), MorphismWitness({0: 0, 1: 1}, MorphKind.EMBEDDING))


def test_witness_helpers():
    w = MorphismWitness({2: 5, 0: 7}, MorphKind.HOMOMORPHISM)
    assert w.as_tuple() == (7, 5)
    v = MorphismWitness({5: 1, 7: 0}, MorphKind.HOMOMORPHISM)
    assert dict(w.compose(v).map) == {0: 0, 2: 1}


def test_budget():
    big = graph(8, itertools.combinations(range(8), 2))
    bigger = graph(9, [(i, (i + 1) % 9) for i in range(9)])
    with pytest.raises(BudgetExhausted):
        search(big, bigger, MorphKind.WEAK_HOMOMORPHISM, budget=3)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("IFORGE_BUDGET", "1")
    with pytest.raises(BudgetExhausted):
        search(graph(4, [(0, 1)]), graph(4, [(2, 3)]), MorphKind.ISOMORPHISM)


def test_empty_structures():
    empty = Structure([], {"edge": []})
    assert dict(search(empty, P2, MorphKind.EMBEDDING).map) == {}
    assert search(empty, P2, MorphKind.EPIMORPHISM) is None
    assert search(empty, empty, MorphKind.ISOMORPHISM) is not None


@settings(max_examples=300, deadline=None)
@given(structures(max_n=3), structures(max_n=3), st.sampled_from(list(MorphKind)))
def test_search_matches_naive_enumeration(a, b, kind):
    assert search(a, b, kind) == naive_search(a, b, kind)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=4), graphs(max_n=4), st.sampled_from(list(MorphKind)))
def test_found_witnesses_verify(a, b, kind):
    w = search(a, b, kind)
    if w is not None:
        assert verify(a, b, w)


def _kernel_args(a, b, kind):
    la, lb = sorted(a.domain), sorted(b.domain)
    sa, sb = _bitsets(a, la), _bitsets(b, lb)
    doms = _initial_domains(a, b, kind, la, lb, sa, sb)
    b_out, b_in = _with_loops(sb[0], sb[2]), _with_loops(sb[1], sb[2])
    return doms, (len(la), len(lb), sa[0], sa[1], b_out, b_in, kind.strong, kind.injective, kind.surjective)


@pytest.mark.skipif(BACKEND != "cython", reason="compiled kernel not built")
@settings(max_examples=200, deadline=None)
@given(structures(max_n=6), structures(max_n=6), st.sampled_from(list(MorphKind)))
def test_compiled_kernel_matches_python_kernel(a, b, kind):
    from iforge._search_ext import search_kernel as compiled

    doms, head = _kernel_args(a, b, kind)
    if doms is None:
        return
    assert compiled(*head, doms, -1) == _search_py.search_kernel(*head, doms, -1)


@pytest.mark.skipif(BACKEND != "cython", reason="compiled kernel not built")
def test_compiled_kernel_wide_bitsets():
    # more than 64 target vertices exercises multi-word domains
    a = graph(5, [(i, i + 1) for i in range(4)])
    b = graph(70, [(i, i + 1) for i in range(69)])
    for kind in (MorphKind.EMBEDDING, MorphKind.WEAK_HOMOMORPHISM):
        from iforge._search_ext import search_kernel as compiled

        doms, head = _kernel_args(a, b, kind)
        assert compiled(*head, doms, -1) == _search_py.search_kernel(*head, doms, -1)


def test_isomorphism_helpers():
    assert is_isomorphic(P3, graph(3, [(1, 0), (0, 2)]))
    assert not is_isomorphic(P3, K3)
    assert embeds(P2, K3) and not embeds(K3, P3)


def test_pure_backend_switch():
    import os
    import subprocess
    import sys

    env = dict(os.environ, IFORGE_PURE="1")
    code = "from iforge._backend import BACKEND; print(BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
