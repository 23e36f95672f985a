"""Random instance generators shared by the test modules."""

import random

from maproof.circuit import And, BConst, CircuitBuilder, Not, Or, Var, syntactic_degree

# (criterion number, passed, detail) lines printed at the end of the run
ACCEPTANCE: list = []


def rand_circuit(rng: random.Random, n: int, size: int, max_degree: int | None = None):
    """Random circuit with ``size`` gates over ``n`` inputs, rejected until the degree fits."""
    while True:
        b = CircuitBuilder(n, fold=False)
        ids = [b.input(j) for j in range(n)] if n else [b.const(rng.randrange(5))]
        while len(b.gates) < size:
            r = rng.random()
            if r < 0.1:
                ids.append(b.const(rng.randrange(-3, 7)))
            elif r < 0.55:
                ids.append(b.add(rng.choice(ids), rng.choice(ids)))
            else:
                ids.append(b.mul(rng.choice(ids), rng.choice(ids)))
        C = b.build(len(b.gates) - 1)
        if max_degree is None or syntactic_degree(C) <= max_degree:
            return C


def rand_formula(rng: random.Random, n: int, m: int, consts: bool = False):
    """Random formula tree with exactly ``m`` connectives."""
    if m == 0:
        if consts and rng.random() < 0.1:
            return BConst(rng.randint(0, 1))
        return Var(rng.randrange(n))
    r = rng.random()
    if r < 0.2:
        return Not(rand_formula(rng, n, m - 1, consts))
    k = rng.randint(0, m - 1)
    node = And if r < 0.6 else Or
    return node(rand_formula(rng, n, k, consts), rand_formula(rng, n, m - 1 - k, consts))
