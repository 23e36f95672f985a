import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_circuit
from maproof.circuit import CircuitBuilder, QuantifiedFormula, parse_formula, parse_qbf
from maproof.errors import CapacityError, UsageError
from maproof.graphs import Graph
from maproof.opcount import counting
from maproof.oracles import (oracle_cliques, oracle_cube_sum, oracle_hamcycles, oracle_multipoint, oracle_permanent,
                             oracle_qbf, oracle_sat, oracle_suffix_values)


def _const(n, c):
    b = CircuitBuilder(n)
    return b.build(b.const(c))


def test_multipoint_constant():
    assert oracle_multipoint(_const(2, 7), [(0, 1), (5, 5), (2, 2)]) == [7, 7, 7]
    assert oracle_multipoint(_const(2, 7), [(0, 1)], p=5) == [2]
    assert oracle_multipoint(_const(2, 7), []) == []
    with pytest.raises(UsageError):
        oracle_multipoint(_const(2, 7), [(1,)])


def test_cube_sum_examples():
    assert oracle_cube_sum(_const(3, 1)) == 8
    b = CircuitBuilder(2)
    assert oracle_cube_sum(b.build(b.input(0))) == 2
    with pytest.raises(CapacityError):
        oracle_cube_sum(_const(21, 1))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_cube_sum_is_linear(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    C1 = rand_circuit(rng, n, rng.randint(1, 15))
    C2 = rand_circuit(rng, n, rng.randint(1, 15))
    b = CircuitBuilder(n)
    xs = [b.input(j) for j in range(n)]
    both = b.build(b.add(b.embed(C1, xs), b.embed(C2, xs)))
    assert oracle_cube_sum(both) == oracle_cube_sum(C1) + oracle_cube_sum(C2)
    assert oracle_cube_sum(both, 101) == (oracle_cube_sum(C1) + oracle_cube_sum(C2)) % 101


def test_small_problem_examples():
    assert oracle_sat(parse_formula("x1 | x2")) == 3
    assert oracle_permanent([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    K5 = Graph(5, tuple(itertools.combinations(range(5), 2)))
    assert oracle_cliques(K5, 3) == 10
    assert oracle_hamcycles(K5) == 12
    assert oracle_qbf(parse_qbf("AE x1 x2 : (x1 & x2) | (!x1 & !x2)"))


def test_suffix_values():
    phi = parse_qbf("EAE x1 x2 x3 : x1 | (x2 & x3)")
    # suffix A x2 E x3 over x1: x1=0 -> (0+0)*(0+1) = 0, x1=1 -> (1+1)*(1+1) = 4
    assert oracle_suffix_values(phi, 2) == [0, 4]
    assert oracle_suffix_values(phi, 0) == [int(parse_formula("x1 | (x2 & x3)")(tuple((i >> j) & 1 for j in range(3))))
                                           for i in range(8)]
    with pytest.raises(UsageError):
        oracle_suffix_values(phi, 4)


def test_caps():
    with pytest.raises(CapacityError):
        oracle_permanent([[1] * 9] * 9)
    with pytest.raises(UsageError):
        oracle_permanent([[1, 2]])
    with pytest.raises(UsageError):
        oracle_hamcycles(Graph(2, ((0, 1),)))
    with pytest.raises(CapacityError):
        oracle_qbf(QuantifiedFormula("E" * 15, parse_formula("x1", n=15)))


def test_oracle_ops_charged_to_oracle_phase():
    with counting() as c:
        oracle_cube_sum(_const(4, 3))
    assert c.total("oracle") > 0 and c.total() == c.total("oracle")
