import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iforge.coding import (
    CANTOR,
    SWAPPED,
    even_subsequence,
    extension_bound,
    extension_length,
    pair_index,
    relevant_pair,
    unpair_index,
)
from iforge.errors import ContractError


def anti_diagonals(limit):
    """Cantor enumeration written out: walk each diagonal n + m = w upwards in m."""
    out = []
    for w in itertools.count():
        for m in range(w + 1):
            out.append((w - m, m))
            if len(out) == limit:
                return out


def test_examples():
    assert pair_index(0, 0) == 0
    assert unpair_index(1) == (1, 0)
    assert unpair_index(2) == (0, 1)
    assert relevant_pair((5,)) == (5, 5)
    assert relevant_pair(("a", "b")) == ("b", "a")
    assert relevant_pair(("a", "b", "c")) == ("a", "b")
    assert even_subsequence(()) == ()
    assert even_subsequence((7, 3, 5)) == (7, 5)


def test_unpair_matches_diagonal_walk():
    assert [unpair_index(k) for k in range(500)] == anti_diagonals(500)


@pytest.mark.parametrize("pairing", [CANTOR, SWAPPED])
def test_pairing_is_a_bijection_with_the_bound(pairing):
    for n, m in itertools.product(range(51), repeat=2):
        k = pairing.pair(n, m)
        assert pairing.unpair(k) == (n, m)
        assert n <= k and m <= k
    assert sorted(pairing.pair(n, m) for n in range(30) for m in range(30 - n)) == list(range(465))


def test_relevant_pair_stays_in_bounds():
    for length in range(1, 51):
        s = tuple(range(length))
        a, b = relevant_pair(s)
        assert 0 <= a < length and 0 <= b < length


def test_errors():
    with pytest.raises(ContractError):
        relevant_pair(())
    with pytest.raises(ContractError):
        pair_index(-1, 0)
    with pytest.raises(ContractError):
        unpair_index(-3)


@given(st.lists(st.integers(0, 9), max_size=40))
def test_even_subsequence_length(s):
    e = even_subsequence(s)
    assert len(e) == (len(s) + 1) // 2
    assert all(e[i] == s[2 * i] for i in range(len(e)))


@pytest.mark.parametrize("pairing", [CANTOR, SWAPPED])
def test_extension_is_least_and_within_bound(pairing):
    for prefix_len in range(21):
        bound = extension_bound(prefix_len, pairing)
        for distinct in (False, True):
            half, n, m = extension_length(prefix_len, distinct, pairing)
            assert 2 * half <= bound
            assert pairing.unpair(half - 1) == (n, m)
            assert 2 * n > prefix_len and 2 * m > prefix_len
            assert not distinct or n != m
            for smaller in range(1, half):
                a, b = pairing.unpair(smaller - 1)
                assert not (2 * a > prefix_len and 2 * b > prefix_len and (not distinct or a != b))


def test_extension_realises_every_target():
    for prefix_len, p, q in itertools.product(range(21), range(4), range(4)):
        half, n, m = extension_length(prefix_len, p != q)
        v = [9] * prefix_len + [0] * (2 * half - prefix_len)
        v[2 * n], v[2 * m] = p, q
        assert v[:prefix_len] == [9] * prefix_len
        assert relevant_pair(even_subsequence(v)) == (p, q)
