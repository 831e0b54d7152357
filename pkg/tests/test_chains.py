import itertools
from math import factorial, prod

import pytest
from hypothesis import given, strategies as st

from dyckrep.chains import (ChainError, apply_transposition, chain_from_word, enumerate_good_chains,
                            longest_good_chain, swapped_word, transposition_orbit, transposition_status)
from dyckrep.field import T, param, to_string
from dyckrep.posets import build_boolean, build_linear, build_partition_ideal

a1, a2, a3 = param(1), param(2), param(3)


def brute_force_good_words(E, k):
    """Every cover path of length k, filtered by w_i != t w_j."""
    out = set()
    for lam in range(len(E)):
        paths = [(lam, ())]
        for _ in range(k):
            paths = [(cv.dst, word + (cv.weight,)) for end, word in paths for cv in E.covers if cv.src == end]
        for _, word in paths:
            if all(x != T * y for x, y in itertools.product(word, word)):
                out.add((lam, word))
    return out


def strip_count(max_boxes, k):
    """Sum over horizontal strips mu/lam of size k of k!/prod(row lengths)!."""
    def parts(n, maxpart=None):
        if n == 0:
            yield ()
            return
        for first in range(min(n, maxpart or n), 0, -1):
            for rest in parts(n - first, first):
                yield (first,) + rest

    total = 0
    for n in range(max_boxes - k + 1):
        for lam in parts(n):
            for m in parts(n + k):
                lam_p = lam + (0,) * (len(m) - len(lam))
                if len(lam_p) > len(m):
                    continue
                # horizontal strip: m_i >= lam_i >= m_{i+1}
                if all(m[i] >= lam_p[i] for i in range(len(m))) and \
                        all(lam_p[i] >= m[i + 1] for i in range(len(m) - 1)):
                    rows = [m[i] - lam_p[i] for i in range(len(m))]
                    total += factorial(k) // prod(factorial(r) for r in rows)
    return total


def test_partition_ideal_2_level_2():
    E = build_partition_ideal(2)
    chains = enumerate_good_chains(E, 2)
    assert [ch.notation(E) for ch in chains] == ["[(); 1, q]"]


def test_boolean_level_1_count():
    assert len(enumerate_good_chains(build_boolean([a1, a2, a3]), 1)) == 12


def test_above_longest_is_empty():
    E = build_partition_ideal(3)
    K = longest_good_chain(E)
    assert enumerate_good_chains(E, K + 1) == []
    with pytest.raises(ChainError):
        enumerate_good_chains(E, -1)


@pytest.mark.parametrize("E", [build_partition_ideal(4), build_linear(4, a1), build_boolean([a1, a2, a3]),
                               build_partition_ideal(5, max_cols=2)], ids=lambda E: E.name)
def test_enumeration_matches_brute_force(E):
    for k in range(0, 5):
        got = {(ch.base, ch.word) for ch in enumerate_good_chains(E, k)}
        assert got == brute_force_good_words(E, k)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_partition_counts_match_strip_formula(n):
    E = build_partition_ideal(n)
    for k in range(0, n + 1):
        assert len(enumerate_good_chains(E, k)) == strip_count(n, k)


def test_order_is_deterministic():
    E = build_partition_ideal(4)
    chains = enumerate_good_chains(E, 2)
    keys = [(ch.base, tuple(to_string(x) for x in ch.word)) for ch in chains]
    assert keys == sorted(keys)


def test_transposition_status():
    E = build_partition_ideal(2)
    (ch,) = enumerate_good_chains(E, 2)
    assert transposition_status(ch, 1) == "non_admissible"
    B = build_boolean([a1, a2])
    bc = chain_from_word(B, 0, (a1, a2))
    assert transposition_status(bc, 1) == "excellent"
    with pytest.raises(IndexError):
        transposition_status(enumerate_good_chains(E, 1)[0], 1)


def test_apply_transposition():
    B = build_boolean([a1, a2])
    ch = chain_from_word(B, 0, (a2, a1))
    sw = apply_transposition(B, ch, 1)
    assert sw.word == (a1, a2) and sw.endpoint == ch.endpoint
    assert apply_transposition(B, sw, 1) == ch


def test_orbits_join_chains_with_same_weights():
    E = build_boolean([a1, a2, a3])
    chains = enumerate_good_chains(E, 3)
    by_key = {}
    for ch in chains:
        by_key.setdefault((ch.base, ch.endpoint, frozenset(ch.word)), set()).add(ch)
    for group in by_key.values():
        assert transposition_orbit(E, next(iter(group))) == group


@given(st.data())
def test_excellent_swaps_keep_goodness(data):
    E = build_partition_ideal(5)
    k = data.draw(st.integers(2, 4))
    chains = enumerate_good_chains(E, k)
    ch = data.draw(st.sampled_from(chains))
    i = data.draw(st.integers(1, k - 1))
    if transposition_status(ch, i) == "excellent":
        sw = apply_transposition(E, ch, i)
        assert sw in set(enumerate_good_chains(E, k))
        assert sw.endpoint == ch.endpoint and sw.word == swapped_word(ch, i)
