import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iforge.corpus import g3, t_code_kit, with_strict_order
from iforge.errors import ContractError
from iforge.morphisms import MorphKind, MorphismWitness, search, verify
from iforge.structures import Structure, graph
from iforge.sums import (
    NClasses,
    ParityPerm,
    WitnessKit,
    assemble_w,
    decompose_parity,
    enumerate_g,
    glue_embeddings,
    is_parity_monotone,
    logic_action,
    oplus,
    oplus_rooted,
    split_parts,
)
from iforge.trees import TruncSpec
from strategies import structures

X1 = Structure([0], {"edge": [], "order": []})
Z1 = Structure([0], {"edge": [], "order": [(0, 0)]})


def test_oplus_examples():
    s = oplus(X1, Z1)
    assert s == Structure([0, 1], {"edge": [], "order": [(1, 1)]})
    assert oplus(Structure([], {}), Structure([], {})) == Structure([], {})
    k2 = graph(2, [(0, 1)])
    assert oplus(k2, k2).rel("edge") == {(0, 2), (2, 0), (1, 3), (3, 1)}


def test_oplus_rooted():
    s = oplus_rooted(X1, Z1)
    assert s.rel("edge") == {(0, 1), (1, 0)}
    z2 = Structure([0, 1], {"edge": [], "order": [(0, 0), (1, 1)]})
    with pytest.raises(ContractError, match="root of z not unique"):
        oplus_rooted(X1, z2)
    no_min = Structure([0, 1], {"edge": [], "order": []})
    with pytest.raises(ContractError, match="root of x undefined"):
        oplus_rooted(no_min, Z1)


def test_oplus_rooted_picks_both_roots():
    x = Structure([0, 1, 2], {"edge": [(0, 1), (1, 0), (1, 2), (2, 1)], "order": [(1, 0), (1, 2), (0, 2)]})
    z = Structure([0, 1, 2], {"edge": [], "order": [(0, 0), (1, 1), (2, 2), (1, 2), (2, 1)]})
    s = oplus_rooted(x, z)
    assert s.rel("edge") - oplus(x, z).rel("edge") == {(2, 1), (1, 2)}
    with pytest.raises(ContractError, match="root of z undefined"):
        oplus_rooted(x, z.induced([1, 2]))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_enumerate_g_is_exactly_the_parity_monotone_permutations(k):
    gs = enumerate_g(k)
    assert len(gs) == math.comb(2 * k, k)
    assert ParityPerm(tuple(range(2 * k))) in gs
    if k <= 3:
        brute = [p for p in itertools.permutations(range(2 * k)) if is_parity_monotone(p)]
        assert sorted(g.images for g in gs) == sorted(brute)
    evens = [tuple(g.images[0::2]) for g in gs]
    assert evens == sorted(evens)
    assert len({g.odd_images() for g in gs}) == len(gs)


def test_enumerate_g_small():
    assert [g.images for g in enumerate_g(1)] == [(0, 1), (1, 0)]
    with pytest.raises(ContractError):
        enumerate_g(0)


def test_decompose_examples():
    g, p, q = decompose_parity((0, 1, 2, 3))
    assert g.images == (0, 1, 2, 3) and p == (0, 1) and q == (0, 1)
    g, p, q = decompose_parity((1, 0, 3, 2))
    assert g.images == (1, 0, 3, 2) and p == q == (0, 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_decomposition_identities_exhaustive(k):
    for h in itertools.permutations(range(2 * k)):
        g, p, q = decompose_parity(h)
        for n in range(k):
            assert h[2 * n] == g(2 * p[n])
            assert h[2 * n + 1] == g(2 * q[n] + 1)


def test_parity_perm_rejects_bad_input():
    with pytest.raises(ContractError):
        ParityPerm((1, 0, 2, 3)[::-1])
    with pytest.raises(ContractError):
        ParityPerm((0, 0))


@settings(max_examples=100)
@given(structures(max_n=4), st.permutations(range(8)), st.permutations(range(8)))
def test_logic_action_is_an_action(a, g, h):
    a = a.induced(range(8))
    gh = [g[h[i]] for i in range(8)]
    assert logic_action(gh, a) == logic_action(g, logic_action(h, a))
    assert logic_action(range(8), a) == a


def test_logic_action_examples():
    e = graph(2, [(0, 1)])
    assert logic_action((1, 0), e) == e
    with pytest.raises(ContractError):
        logic_action({0: 1, 1: 1}, e)


def test_glue_embeddings():
    x1, x2 = with_strict_order(graph(1)), with_strict_order(graph(2, [(0, 1)]))
    z = Structure([0], {"edge": [], "order": [(0, 0)], "tree": []})
    e1 = MorphismWitness({0: 1}, MorphKind.EMBEDDING)
    e2 = MorphismWitness({0: 0}, MorphKind.ISOMORPHISM)
    glued = glue_embeddings(e1, e2, source=(x1, z), target=(x2, z))
    assert dict(glued.map) == {0: 2, 1: 1} and glued.kind is MorphKind.EMBEDDING
    assert verify(oplus(x1, z), oplus(x2, z), glued)
    with pytest.raises(ContractError):
        glue_embeddings(MorphismWitness({0: 0}, MorphKind.EMBEDDING), e2, source=(x2, z), target=(x1, z))


def test_glue_of_isomorphisms_is_an_isomorphism():
    for x in g3():
        xs = with_strict_order(x)
        ident = MorphismWitness({v: v for v in x.domain}, MorphKind.ISOMORPHISM)
        z = Structure([0, 1], {"edge": [], "order": [(0, 0), (1, 1)], "tree": [(0, 1)]})
        zi = MorphismWitness({0: 0, 1: 1}, MorphKind.ISOMORPHISM)
        w = glue_embeddings(ident, zi)
        assert w.kind is MorphKind.ISOMORPHISM
        assert verify(oplus(xs, z), oplus(xs, z), w)


def test_split_parts():
    x = with_strict_order(graph(2, [(0, 1)]))
    z = Structure([0, 1], {"edge": [], "order": [(0, 0), (1, 1)], "tree": [(0, 1)]})
    s = oplus(x, z)
    irr, refl = split_parts(s)
    assert irr == x.relabel({0: 0, 1: 2}) and refl == z.relabel({0: 1, 1: 3})
    g = (3, 0, 2, 1)
    irr_g, refl_g = split_parts(logic_action(g, s))
    assert irr_g == logic_action(g, irr) and refl_g == logic_action(g, refl)
    assert split_parts(z) == (z.induced([]), z)


def test_kit_validation():
    with pytest.raises(ContractError):
        WitnessKit([Z1], [Z1], lambda z: 0)
    with pytest.raises(ContractError):
        WitnessKit([X1], [X1], lambda z: 0)


def test_classifier_must_respect_isomorphism():
    za = Structure([0, 1], {"edge": [], "order": [(0, 0), (1, 1)], "tree": [(0, 1)]})
    zb = za.relabel({0: 1, 1: 0})
    xs = [with_strict_order(graph(1)), with_strict_order(graph(2))]
    kit = WitnessKit(xs, [za, zb], lambda z: 0 if z == za else 1)
    with pytest.raises(ContractError, match="not iso-invariant"):
        assemble_w(kit, 1)


def test_singleton_kit():
    x, z = with_strict_order(graph(1)), Structure([0], {"edge": [], "order": [(0, 0)], "tree": []})
    space = assemble_w(WitnessKit([x], [z], lambda _: 0), 1)
    assert len(space.entries) == 2
    assert all(all(row) for row in space.S) and all(all(row) for row in space.F)


@pytest.fixture(scope="module")
def small_kit():
    return t_code_kit(TruncSpec(3, 3))


def test_w_space_claims_on_a_small_kit(small_kit):
    kit, reps = small_kit
    for variant in (None, reps):
        space = assemble_w(kit, 1, variant)
        n = len(space.entries)
        assert len(set(space.images)) == n
        for a, b in itertools.product(range(n), repeat=2):
            ia, ib = space.images[a], space.images[b]
            emb = search(ia, ib, MorphKind.EMBEDDING)
            assert (emb is not None) == space.S[a][b]
            assert (search(ia, ib, MorphKind.ISOMORPHISM) is not None) == space.F[a][b]
            if emb is not None:
                irr_a, refl_a = split_parts(ia)
                irr_b, _ = split_parts(ib)
                assert {emb.map[v] for v in irr_a.domain} <= irr_b.domain


def test_n_classes_rejects_isomorphic_representatives(small_kit):
    kit, reps = small_kit
    dup = NClasses(reps.reps + reps.reps[:1])
    with pytest.raises(ContractError):
        assemble_w(kit, 1, dup)


def test_n_classes_residual_goes_to_last_partner():
    x0, x1 = with_strict_order(graph(1)), with_strict_order(graph(2))
    za = Structure([0], {"edge": [], "order": [(0, 0)], "tree": []})
    zb = Structure([0, 1], {"edge": [], "order": [(0, 0), (1, 1)], "tree": [(0, 1)]})
    kit = WitnessKit([x0, x1], [za, zb], lambda z: 0 if len(z) == 1 else 1)
    space = assemble_w(kit, 1, NClasses(((1, 1), (0, 0))))
    pairs = {(e.x_index, e.z_index) for e in space.entries}
    assert pairs == {(1, 1), (0, 0)}
    # with only the second class named, everything else joins its partner
    space = assemble_w(kit, 1, NClasses(((0, 1),)))
    assert {(e.x_index, e.z_index) for e in space.entries} == {(1, 0), (1, 1)}
