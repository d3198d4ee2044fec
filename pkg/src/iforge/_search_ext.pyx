# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backtracking kernel; same contract as ``_search_py.search_kernel``."""

from libc.stdint cimport uint64_t, uint8_t
from libc.stdlib cimport calloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    FOUND = 0
    ABSENT = 1
    BUDGET = 2

cdef uint64_t MASK64 = 0xFFFFFFFFFFFFFFFF


cdef void _fill(uint64_t* dst, object x, int words):
    cdef int w
    for w in range(words):
        dst[w] = <uint64_t>((x >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)


cdef int _next_bit(uint64_t* row, int start, int nb, int words) nogil:
    cdef int w, b
    cdef uint64_t x
    if start >= nb:
        return -1
    w = start >> 6
    x = row[w] & (MASK64 << (start & 63))
    while True:
        if x:
            b = (w << 6) + __builtin_ctzll(x)
            return b if b < nb else -1
        w += 1
        if w >= words:
            return -1
        x = row[w]


def search_kernel(int na, int nb, a_out, a_in, b_out, b_in,
                  bint strong, bint injective, bint surjective,
                  domains, long long budget):
    cdef int words = (nb + 63) // 64 if nb > 0 else 1
    cdef int nrel = len(a_out)
    cdef int r, u, u2, v, w, left, cnt, i
    cdef long long expansions = 0
    cdef bint ok
    cdef uint64_t d, bitv, tail
    cdef uint8_t* aout = NULL
    cdef uint8_t* ain = NULL
    cdef uint64_t* bo = NULL
    cdef uint64_t* bi = NULL
    cdef uint64_t* dom = NULL
    cdef uint64_t* uni = NULL
    cdef uint64_t* cov = NULL
    cdef int* assign = NULL
    cdef int* nextpos = NULL
    cdef uint64_t* cur
    cdef uint64_t* nxt
    cdef uint64_t* bov
    cdef uint64_t* biv
    cdef int status = ABSENT

    if na == 0:
        if surjective and nb:
            return ABSENT, None, 0
        return FOUND, [], 0

    tail = MASK64 if nb % 64 == 0 else ((<uint64_t>1 << (nb % 64)) - 1)
    try:
        aout = <uint8_t*>calloc(max(1, nrel * na * na), sizeof(uint8_t))
        ain = <uint8_t*>calloc(max(1, nrel * na * na), sizeof(uint8_t))
        bo = <uint64_t*>calloc(max(1, nrel * nb * words), sizeof(uint64_t))
        bi = <uint64_t*>calloc(max(1, nrel * nb * words), sizeof(uint64_t))
        dom = <uint64_t*>calloc((na + 1) * na * words, sizeof(uint64_t))
        uni = <uint64_t*>calloc(words, sizeof(uint64_t))
        cov = <uint64_t*>calloc(words, sizeof(uint64_t))
        assign = <int*>calloc(na, sizeof(int))
        nextpos = <int*>calloc(na + 1, sizeof(int))
        if (aout == NULL or ain == NULL or bo == NULL or bi == NULL or dom == NULL
                or uni == NULL or cov == NULL or assign == NULL or nextpos == NULL):
            raise MemoryError()

        for r in range(nrel):
            for u in range(na):
                xo = a_out[r][u]
                xi = a_in[r][u]
                for u2 in range(na):
                    aout[(r * na + u) * na + u2] = (xo >> u2) & 1
                    ain[(r * na + u) * na + u2] = (xi >> u2) & 1
            for v in range(nb):
                _fill(bo + (r * nb + v) * words, b_out[r][v], words)
                _fill(bi + (r * nb + v) * words, b_in[r][v], words)
        for u in range(na):
            _fill(dom + u * words, domains[u], words)

        u = 0
        nextpos[0] = 0
        with nogil:
            while u >= 0:
                cur = dom + u * na * words
                v = _next_bit(cur + u * words, nextpos[u], nb, words)
                if v < 0:
                    u -= 1
                    continue
                nextpos[u] = v + 1
                expansions += 1
                if budget >= 0 and expansions > budget:
                    status = BUDGET
                    break
                nxt = dom + (u + 1) * na * words
                ok = True
                for w in range(words):
                    uni[w] = 0
                for u2 in range(u + 1, na):
                    for w in range(words):
                        d = cur[u2 * words + w]
                        for r in range(nrel):
                            bov = bo + (r * nb + v) * words
                            biv = bi + (r * nb + v) * words
                            if aout[(r * na + u) * na + u2]:
                                d &= bov[w]
                            elif strong:
                                d &= ~bov[w]
                            if ain[(r * na + u) * na + u2]:
                                d &= biv[w]
                            elif strong:
                                d &= ~biv[w]
                        if injective and w == (v >> 6):
                            d &= ~(<uint64_t>1 << (v & 63))
                        nxt[u2 * words + w] = d
                        uni[w] |= d
                    cnt = 0
                    for w in range(words):
                        if nxt[u2 * words + w]:
                            cnt = 1
                            break
                    if not cnt:
                        ok = False
                        break
                if not ok:
                    continue
                assign[u] = v
                left = na - u - 1
                if injective and left:
                    cnt = 0
                    for w in range(words):
                        cnt += __builtin_popcountll(uni[w])
                    if cnt < left:
                        continue
                if surjective:
                    for w in range(words):
                        cov[w] = 0
                    for i in range(u + 1):
                        cov[assign[i] >> 6] |= (<uint64_t>1 << (assign[i] & 63))
                    cnt = 0
                    for w in range(words):
                        bitv = MASK64 if w < words - 1 else tail
                        if ((cov[w] | uni[w]) & bitv) != bitv:
                            ok = False
                        cnt += __builtin_popcountll(bitv & ~cov[w])
                    if not ok or cnt > left:
                        continue
                if not left:
                    status = FOUND
                    break
                u += 1
                nextpos[u] = 0
        if status == FOUND:
            return FOUND, [assign[i] for i in range(na)], expansions
        return status, None, expansions
    finally:
        free(aout)
        free(ain)
        free(bo)
        free(bi)
        free(dom)
        free(uni)
        free(cov)
        free(assign)
        free(nextpos)
