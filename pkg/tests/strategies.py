"""Hypothesis strategies shared by the test modules."""

import itertools

from hypothesis import strategies as st

from iforge.structures import Structure, graph


@st.composite
def graphs(draw, min_n=0, max_n=5):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return graph(n, chosen)


@st.composite
def structures(draw, max_n=4, names=("edge", "order")):
    labels = draw(st.lists(st.integers(0, 30), unique=True, max_size=max_n))
    rels = {}
    for name in names:
        if labels:
            pairs = st.tuples(st.sampled_from(labels), st.sampled_from(labels))
            rels[name] = draw(st.lists(pairs, max_size=len(labels) ** 2))
        else:
            rels[name] = []
    return Structure(labels, rels)


@st.composite
def relabelings(draw, s: Structure):
    targets = draw(st.lists(st.integers(0, 60), unique=True, min_size=len(s), max_size=len(s)))
    return dict(zip(sorted(s.domain), targets))
