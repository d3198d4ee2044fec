"""Finite-scale codings of graphs into trees, structure sums and morphism oracles."""
