import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maproof.apps import (clique_split, cliques, elementary_symmetric_circuit, hamming_count, hamming_instance,
                          indicator_coeffs, kclique_count, kclique_instance, ov_count, ov_instance)
from maproof.circuit import syntactic_degree
from maproof.errors import UsageError
from maproof.graphs import Graph
from maproof.oracles import oracle_cliques, oracle_esym, oracle_hamming, oracle_multipoint, oracle_ov
from maproof.transcript import Coins


def _rand_vectors(rng, n, d):
    return [tuple(rng.randint(0, 1) for _ in range(d)) for _ in range(n)]


def _rand_graph(rng, n, p=0.5):
    return Graph(n, tuple(e for e in itertools.combinations(range(n), 2) if rng.random() < p))


def test_ov_examples():
    assert ov_count([(1, 0), (0, 1)]) == [1, 1]
    assert ov_count([(0, 0)]) == [1]


def test_ov_random():
    rng = random.Random(1)
    for trial in range(15):
        A = _rand_vectors(rng, rng.randint(1, 40), rng.randint(1, 16))
        assert ov_count(A, rng=Coins(trial)) == oracle_ov(A)


def test_ov_degree_and_prime():
    A = [(1, 1, 0), (0, 1, 1)]
    inst = ov_instance(A)
    assert syntactic_degree(inst.circuit) <= 3
    assert inst.p > len(A)


def test_hamming_examples():
    rng = random.Random(2)
    A = _rand_vectors(rng, 10, 5)
    assert hamming_count(A, 5) == [10] * 10
    distinct = list({v for v in _rand_vectors(rng, 20, 6)})
    assert hamming_count(distinct, 0) == [1] * len(distinct)


def test_hamming_random_all_k():
    rng = random.Random(3)
    for trial in range(6):
        d = rng.randint(1, 8)
        A = _rand_vectors(rng, rng.randint(1, 20), d)
        for k in range(d + 1):
            assert hamming_count(A, k, rng=Coins(trial)) == oracle_hamming(A, k)


def test_indicator_polynomial():
    p = 10007
    for d in range(1, 7):
        for k in range(d + 1):
            c = indicator_coeffs(d, k, p)
            assert len(c) == 2 * d + 1
            for j in range(-d, d + 1):
                val = sum(ci * j**i for i, ci in enumerate(c)) % p
                assert val == (1 if j >= d - 2 * k else 0)


def test_hamming_rejects_bad_k():
    with pytest.raises(UsageError):
        hamming_instance([(0, 1)], 3)
    with pytest.raises(UsageError):
        ov_count([(0, 2)])
    with pytest.raises(UsageError):
        ov_count([])


def test_esym_examples():
    for n in range(1, 7):
        assert oracle_multipoint(elementary_symmetric_circuit(1, n), [[1] * n]) == [n]
        assert oracle_multipoint(elementary_symmetric_circuit(n, n), [[1] * n]) == [1]
    assert syntactic_degree(elementary_symmetric_circuit(3, 6)) == 3


@settings(max_examples=40, deadline=None)
@given(xs=st.lists(st.integers(-5, 5), min_size=1, max_size=6), data=st.data())
def test_esym_matches_subset_sum(xs, data):
    k = data.draw(st.integers(0, len(xs)))
    assert oracle_multipoint(elementary_symmetric_circuit(k, len(xs)), [xs]) == [oracle_esym(xs, k)]


def test_clique_examples():
    K4 = Graph(4, tuple(itertools.combinations(range(4), 2)))
    assert kclique_count(K4, 4) == 1
    assert kclique_count(Graph(6, ()), 3) == 0
    assert kclique_count(Graph(6, ()), 2) == 0
    K6 = Graph(6, tuple(itertools.combinations(range(6), 2)))
    assert kclique_count(K6, 3) == 20


def test_cliques_enumeration():
    rng = random.Random(4)
    G = _rand_graph(rng, 10)
    for k in range(5):
        assert len(cliques(G, k)) == oracle_cliques(G, k)


def test_kclique_random():
    rng = random.Random(5)
    for trial in range(8):
        G = _rand_graph(rng, 12)
        for k in (3, 4, 5):
            assert kclique_count(G, k, rng=Coins(trial)) == oracle_cliques(G, k)


def test_clique_multiplicity():
    for k in range(2, 8):
        l, r = clique_split(k)
        assert l + r == k and l == k // 2
    rng = random.Random(6)
    G = _rand_graph(rng, 9, 0.7)
    inst = kclique_instance(G, 4)
    assert inst.multiplicity == math.comb(4, 2)
    total = sum(oracle_multipoint(inst.circuit, inst.points))
    assert total == inst.multiplicity * oracle_cliques(G, 4)


def test_clique_argument_checks():
    with pytest.raises(UsageError):
        kclique_count(Graph(3, ((0, 1),), True), 2)
    with pytest.raises(UsageError):
        kclique_count(Graph(3, ()), 4)
