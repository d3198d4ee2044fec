"""Pure-Python backtracking kernel for morphism search.

Vertices of the source are assigned in index order, candidates tried in
ascending index order, so the first complete assignment found is the
lexicographically least one.  Domains are Python ints used as bitsets over
the target; forward checking narrows every later domain after each
assignment.

Both this module and ``_search_ext`` expose the same ``search_kernel``.
"""

from __future__ import annotations

FOUND, ABSENT, BUDGET = 0, 1, 2


def _popcount(x: int) -> int:
    return bin(x).count("1")


def search_kernel(
    na: int,
    nb: int,
    a_out: list[list[int]],
    a_in: list[list[int]],
    b_out: list[list[int]],
    b_in: list[list[int]],
    strong: bool,
    injective: bool,
    surjective: bool,
    domains: list[int],
    budget: int,
) -> tuple[int, list[int] | None, int]:
    """Return ``(status, assignment, expansions)``.

    ``a_out[r][u]`` is the bitset of ``u``'s out-neighbours in relation
    ``r`` (self loops excluded, they are handled by ``domains``).  With
    ``strong`` set, non-related source pairs must map to non-related target
    pairs.  ``budget < 0`` means unlimited.
    """
    full = (1 << nb) - 1
    if na == 0:
        if surjective and nb:
            return ABSENT, None, 0
        return FOUND, [], 0
    nrel = len(a_out)
    assign = [0] * na
    doms: list[list[int] | None] = [None] * (na + 1)
    doms[0] = list(domains)
    pending = [0] * (na + 1)
    pending[0] = domains[0]
    expansions = 0
    u = 0
    while u >= 0:
        cand = pending[u]
        if not cand:
            u -= 1
            continue
        low = cand & -cand
        pending[u] = cand ^ low
        v = low.bit_length() - 1
        expansions += 1
        if 0 <= budget < expansions:
            return BUDGET, None, expansions
        dom = doms[u]
        new = dom[:]
        ok = True
        union = 0
        for u2 in range(u + 1, na):
            d = new[u2]
            for r in range(nrel):
                if (a_out[r][u] >> u2) & 1:
                    d &= b_out[r][v]
                elif strong:
                    d &= ~b_out[r][v]
                if (a_in[r][u] >> u2) & 1:
                    d &= b_in[r][v]
                elif strong:
                    d &= ~b_in[r][v]
            if injective:
                d &= ~low
            if not d:
                ok = False
                break
            new[u2] = d
            union |= d
        if not ok:
            continue
        assign[u] = v
        left = na - u - 1
        if injective and left and _popcount(union) < left:
            continue
        if surjective:
            covered = 0
            for i in range(u + 1):
                covered |= 1 << assign[i]
            if (covered | union) != full or _popcount(full & ~covered) > left:
                continue
        if not left:
            return FOUND, assign[:], expansions
        u += 1
        doms[u] = new
        pending[u] = new[u]
    return ABSENT, None, expansions
