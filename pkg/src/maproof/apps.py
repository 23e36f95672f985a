"""Counting problems certified by one batch-evaluation proof each.

Every problem is phrased as a low-degree circuit evaluated at a list of
points, with a prime large enough that the counts survive reduction:

* orthogonal vectors: P'(x) = sum_v prod_i (1 - x_i v_i) at every u in A;
* Hamming neighbours: P'(x) = sum_v Psi(<x', v'>) with +-1 encodings and
  Psi the degree-2d indicator of inner product >= d - 2k;
* k-cliques: sum over l-cliques S of E^(k-l) restricted to the joint
  neighbourhood of S, at the indicator vectors of all (k-l)-cliques.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, CircuitBuilder
from .errors import CapacityError, ProtocolError, UsageError
from .field import find_prime
from .graphs import Graph
from .protocol import EvalOutput, choose_params, prove_eval, verify_eval
from .sums import DEFAULT_EPS_EXP
from .transcript import Coins


@dataclass(frozen=True)
class AppInstance:
    """A circuit, the points to evaluate it at and the prime to work modulo."""

    circuit: Circuit
    points: tuple
    p: int


def certify(inst: AppInstance, eps_exp: int = DEFAULT_EPS_EXP, rng=None) -> EvalOutput:
    """Honest proof for the instance, checked by the verifier."""
    rng = Coins(0) if rng is None else rng
    params = choose_params(inst.circuit, len(inst.points), inst.p, eps_exp)
    proof = prove_eval(inst.circuit, inst.points, params)
    return verify_eval(inst.circuit, inst.points, proof, rng)


def _values(inst: AppInstance, eps_exp: int, rng, what: str) -> tuple:
    out = certify(inst, eps_exp, rng)
    if not out.accepted:
        raise ProtocolError(f"honest {what} proof rejected ({out.reason}): {out.detail}")
    return out.values


def _check_vectors(A) -> tuple[int, int]:
    A = [tuple(int(x) for x in v) for v in A]
    if not A:
        raise UsageError("need at least one vector")
    d = len(A[0])
    if any(len(v) != d for v in A) or any(x not in (0, 1) for v in A for x in v):
        raise UsageError("vectors must be 0/1 and of equal length")
    return len(A), d


# -- orthogonal vectors ----------------------------------------------------------

def ov_prime(n: int, d: int) -> int:
    return find_prime(max(n * n * max(d, 1), 2))


def ov_instance(A) -> AppInstance:
    n, d = _check_vectors(A)
    b = CircuitBuilder(d)
    one_minus = [b.sub(b.const(1), b.input(i)) for i in range(d)]
    terms = [b.prod(one_minus[i] for i in range(d) if v[i]) for v in A]
    return AppInstance(b.build(b.sum(terms)), tuple(tuple(v) for v in A), ov_prime(n, d))


def ov_count(A, eps_exp: int = DEFAULT_EPS_EXP, rng=None) -> list[int]:
    """For each u in A, the number of v in A with <u, v> = 0 (u itself included if self-orthogonal)."""
    return list(_values(ov_instance(A), eps_exp, rng, "orthogonal-vectors"))


# -- Hamming neighbours --------------------------------------------------------------

def hamming_prime(n: int, d: int) -> int:
    return find_prime(max(n * n * (2 * d + 1), 2))


def indicator_coeffs(d: int, k: int, p: int) -> list[int]:
    """Coefficients mod p of the degree-<=2d Psi with Psi(j) = [j >= d - 2k] on j = -d..d."""
    xs = list(range(-d, d + 1))
    out = [0] * len(xs)
    for xi in xs:
        if xi < d - 2 * k:
            continue
        # Lagrange basis polynomial for xi, expanded
        basis, denom = [1], 1
        for xj in xs:
            if xj == xi:
                continue
            basis = [(a - xj * b) % p for a, b in zip([0] + basis, basis + [0])]
            denom = denom * (xi - xj) % p
        inv = pow(denom, -1, p)
        out = [(o + c * inv) % p for o, c in zip(out, basis)]
    return out


def hamming_instance(A, k: int) -> AppInstance:
    n, d = _check_vectors(A)
    if not 0 <= k <= d:
        raise UsageError(f"need 0 <= k <= d = {d}, got k = {k}")
    p = hamming_prime(n, d)
    coeffs = indicator_coeffs(d, k, p)
    b = CircuitBuilder(d)
    signs = [b.sub(b.const(1), b.mul(b.const(2), b.input(i))) for i in range(d)]  # 0 -> 1, 1 -> -1
    terms = []
    for v in A:
        s = b.sum(signs[i] if v[i] == 0 else b.neg(signs[i]) for i in range(d))
        acc = b.const(coeffs[-1])
        for c in reversed(coeffs[:-1]):
            acc = b.add(b.mul(acc, s), b.const(c))
        terms.append(acc)
    return AppInstance(b.build(b.sum(terms)), tuple(tuple(v) for v in A), p)


def hamming_count(A, k: int, eps_exp: int = DEFAULT_EPS_EXP, rng=None) -> list[int]:
    """For each v in A, the number of w in A within Hamming distance k (v itself included)."""
    return list(_values(hamming_instance(A, k), eps_exp, rng, "Hamming"))


# -- elementary symmetric polynomials and k-cliques -----------------------------------

def _esym(b: CircuitBuilder, wires: list[int], k: int) -> int:
    """E^k of the given wires via e_j <- e_j + x_i * e_(j-1)."""
    e = [b.const(1)] + [b.const(0)] * k
    for x in wires:
        for j in range(k, 0, -1):
            e[j] = b.add(e[j], b.mul(x, e[j - 1]))
    return e[k]


def elementary_symmetric_circuit(k: int, n: int) -> Circuit:
    """E^k_n(x_1..x_n) = sum over k-subsets S of prod_{i in S} x_i; degree k."""
    if not 0 <= k <= n:
        raise UsageError(f"need 0 <= k <= n, got k = {k}, n = {n}")
    b = CircuitBuilder(n)
    return b.build(_esym(b, [b.input(i) for i in range(n)], k))


def cliques(G: Graph, size: int) -> list[tuple[int, ...]]:
    """All cliques with ``size`` vertices, in lexicographic order, by backtracking."""
    nb = G.neighbors
    out = []

    def grow(clique, cands):
        if len(clique) == size:
            out.append(tuple(clique))
            return
        for v in sorted(cands):
            grow(clique + [v], {u for u in cands if u > v and u in nb[v]})

    if size == 0:
        return [()]
    grow([], set(range(G.n)))
    return out


@dataclass(frozen=True)
class CliqueInstance(AppInstance):
    multiplicity: int = 1


def clique_split(k: int) -> tuple[int, int]:
    """(l, k - l) with l = floor(k/2)."""
    return k // 2, k - k // 2


def kclique_instance(G: Graph, k: int) -> CliqueInstance:
    if G.directed:
        raise UsageError("k-clique counting needs an undirected graph")
    if k < 2 or G.n < k:
        raise UsageError(f"need 2 <= k <= n, got k = {k}, n = {G.n}")
    l, r = clique_split(k)
    mult = math.comb(k, l)
    bound = max(math.comb(G.n, l), mult * math.comb(G.n, k))
    if bound >= 2**61:
        raise CapacityError("clique counts exceed the modulus range")
    nb = G.neighbors
    b = CircuitBuilder(G.n)
    xs = [b.input(i) for i in range(G.n)]
    terms = []
    for S in cliques(G, l):
        joint = set(range(G.n)).intersection(*(nb[s] for s in S))
        if len(joint) >= r:
            terms.append(_esym(b, [xs[v] for v in sorted(joint)], r))
    points = tuple(tuple(1 if v in T else 0 for v in range(G.n)) for T in cliques(G, r))
    return CliqueInstance(b.build(b.sum(terms)), points, find_prime(max(bound, 2)), mult)


def kclique_count(G: Graph, k: int, eps_exp: int = DEFAULT_EPS_EXP, rng=None) -> int:
    """Number of k-cliques: the certified sum over (k-l)-cliques divided by C(k, l)."""
    inst = kclique_instance(G, k)
    if not inst.points:
        return 0
    total = sum(_values(inst, eps_exp, rng, "k-clique")) % inst.p
    q, rem = divmod(total, inst.multiplicity)
    if rem:
        raise ProtocolError(f"certified sum {total} is not a multiple of C({k}, {k // 2}) = {inst.multiplicity}")
    return q
