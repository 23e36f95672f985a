"""Acceptance criteria 1 to 11, one test each.

Every test appends a "criterion N: PASS/FAIL ..." line to the shared
list printed by conftest.py, then asserts.  All tolerances, trial counts
and seeds are pinned below.
"""

import functools
import itertools
import math
import random
import time

import numpy as np
import pytest

from helpers import ACCEPTANCE, rand_circuit, rand_formula
from maproof.apps import certify, hamming_count, kclique_count, kclique_instance, ov_count
from maproof.batch import verify_eval_many
from maproof.circuit import (ADD, CONST, INPUT, MUL, And, BoolFormula, CircuitBuilder, Not, Or, QuantifiedFormula,
                             Var, arithmetize, syntactic_degree)
from maproof.field import PrimeField, build_extension, canonical_element, find_prime
from maproof.graphs import Graph
from maproof.opcount import counting
from maproof.oracles import (oracle_cliques, oracle_cube_sum, oracle_hamcycles, oracle_hamming, oracle_multipoint,
                             oracle_ov, oracle_permanent, oracle_poly_eval, oracle_qbf, oracle_sat)
from maproof.poly import DensePoly, evaluate_at, interpolate, multipoint_eval
from maproof.protocol import (Proof, choose_params, prove_eval, upit_deterministic, upit_field, upit_random,
                              verify_eval)
from maproof.qbf import qbf_run
from maproof.serialize import encode_elements, parse_proof, serialize_proof
from maproof.sums import (RoundSetup, SumClaim, build_half_sum_circuit, certify_sat, count_hamcycles, count_sat,
                          count_sat_many, multiround_sum, permanent, prove_sum, sat_prime, verify_sum)
from maproof.transcript import Coins

# criterion 1
C1_INSTANCES = 1000
C1_QS = (2, 3, 101)
C1_EPS = 40
C1_SECONDS = 60.0
# criterion 2: q = 2, d = 4, K = 4, so d*K/2^l is 2^-4 at t = 3 and 2^-8 at t = 7
C2_EPS = {3: 2.0**-4, 7: 2.0**-8}
C2_INSTANCES = 100
C2_SEEDS = 100
SIGMAS = 3.0
# criterion 3
C3_INSTANCES = 200
# criterion 4
C4_UNIVERSE_M = 5
C4_UNIVERSE_SIZE = 184612
C4_RANDOM = 200
C4_TAMPER_EPS = 3
C4_TAMPER_SEEDS = 50
C4_SECONDS = 120.0
# criterion 5
C5_N = 20
C5_CONNECTIVES = 30
C5_MIN_GAP = 8.0
C5_MAX_GROWTH = 2.5
# criterion 6
C6_SAMPLE = 200
C6_TAMPER_SEEDS = 1000
# criterion 7
C7_INSTANCES = 100
# criterion 8
C8_RANDOM = 200
C8_SEEDS = 2
C8_MAX_BOUND = 2.0**-20
# criterion 9
C9_INSTANCES = 100
# criterion 10
C10_ROUND_TRIPS = 1000
C10_MAX_RATIO = 2.6
C10_REPEATS = 3
# criterion 11
C11_PAIRS = 1000
C11_FALSE_EQUAL_SEEDS = 20
C11_Q = 101


def record(num: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.append((num, bool(ok), detail))


def binomial_limit(p: float, trials: int) -> float:
    return p + SIGMAS * math.sqrt(p * (1 - p) / trials)


def bump_coefficient(proof: Proof, rng: random.Random) -> Proof:
    """Add a random nonzero element of F_(q^l) to one random coefficient."""
    q, ell = proof.params.q, len(proof.modulus) - 1
    j = rng.randrange(len(proof.coeffs))
    delta = [0] * ell
    while not any(delta):
        delta = [rng.randrange(q) for _ in range(ell)]
    c = list(proof.coeffs)
    c[j] = tuple((a + b) % q for a, b in zip(c[j], delta))
    return Proof(proof.params, proof.modulus, tuple(c))


@functools.lru_cache(maxsize=None)
def stuff_roots(proof: Proof) -> Proof:
    """Q + prod_i (x - alpha_i) * prod_j (x - a_j) up to the degree cap.

    Decoded values do not move and the spot check passes exactly at the
    d*(K-1) roots, the most any proof of this length can collect.
    """
    F = proof.field
    N = len(proof.coeffs)
    extra = DensePoly.from_elements(F, [1])
    for i in range(N - 1):
        extra = extra * DensePoly.from_elements(F, [-canonical_element(F, i), 1])
    Q = proof.q_poly + extra
    coeffs = list(Q.coeffs) + [F.zero] * (N - len(Q.coeffs))
    return Proof(proof.params, proof.modulus, tuple(coeffs))


def formula_universe(m_max: int, n: int = 2) -> list:
    """Every formula tree over x1..xn with at most m_max connectives."""
    by_size = [[Var(i) for i in range(n)]]
    for m in range(1, m_max + 1):
        cur = [Not(f) for f in by_size[m - 1]]
        for i in range(m):
            for a in by_size[i]:
                for b in by_size[m - 1 - i]:
                    cur.append(And(a, b))
                    cur.append(Or(a, b))
        by_size.append(cur)
    return [f for level in by_size for f in level]


def random_formulas(seed: int, count: int, n_max: int, m_max: int) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, n_max)
        out.append(BoolFormula(rand_formula(rng, n, rng.randint(0, m_max)), n))
    return out


# -- criterion 1 --------------------------------------------------------------------

def test_criterion_1_completeness():
    rng = random.Random(101)
    failures = 0
    start = time.perf_counter()
    for i in range(C1_INSTANCES):
        q = rng.choice(C1_QS)
        n = rng.randint(1, 6)
        K = rng.randint(1, 64)
        C = rand_circuit(rng, n, rng.randint(n, 50), max_degree=32)
        pts = [[rng.randrange(q) for _ in range(n)] for _ in range(K)]
        proof = prove_eval(C, pts, choose_params(C, K, q, C1_EPS))
        out = verify_eval(C, pts, proof, Coins(i))
        if not (out.accepted and list(out.values) == oracle_multipoint(C, pts, q)):
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < C1_SECONDS
    record(1, ok, f"{C1_INSTANCES - failures}/{C1_INSTANCES} honest instances accepted with oracle values, "
                  f"{elapsed:.1f} s (limit {C1_SECONDS:.0f} s)")
    assert ok


# -- criterion 2 --------------------------------------------------------------------

def _degree4_instances(seed: int, eps: int):
    rng = random.Random(seed)
    out = []
    while len(out) < C2_INSTANCES:
        n = rng.randint(1, 3)
        C = rand_circuit(rng, n, rng.randint(n + 2, 20), max_degree=4)
        if syntactic_degree(C) != 4:
            continue
        pts = [[rng.randrange(2) for _ in range(n)] for _ in range(4)]
        out.append((C, pts, prove_eval(C, pts, choose_params(C, 4, 2, eps))))
    return out


def _acceptance_rate(instances, forge, seed: int) -> float:
    rng = random.Random(seed)
    circuits, points, proofs, coins = [], [], [], []
    for b, (C, pts, proof) in enumerate(instances):
        for s in range(C2_SEEDS):
            circuits.append(C)
            points.append(pts)
            proofs.append(forge(proof, rng))
            coins.append(Coins(b * C2_SEEDS + s))
    outs = verify_eval_many(circuits, points, proofs, coins)
    return sum(o.accepted for o in outs) / len(outs)


def test_criterion_2_soundness():
    trials = C2_INSTANCES * C2_SEEDS
    lines, ok = [], True
    for eps, target in C2_EPS.items():
        instances = _degree4_instances(eps, eps)
        bound = instances[0][2].params.error_bound
        assert bound == target
        limit = binomial_limit(bound, trials)
        single = _acceptance_rate(instances, bump_coefficient, 1)
        stuffed = _acceptance_rate(instances, lambda p, _rng: stuff_roots(p), 2)
        ok &= single <= limit and stuffed <= limit
        lines.append(f"dK/q^l = 2^{math.log2(bound):.0f}: single-coefficient {single:.4f}, "
                     f"root-stuffed {stuffed:.4f}, limit {limit:.4f}")
    record(2, ok, f"{trials} trials each; " + "; ".join(lines))
    assert ok


# -- criterion 3 --------------------------------------------------------------------

def test_criterion_3_proof_size():
    rng = random.Random(303)
    bad_count = bad_bits = 0
    headers = set()
    for _ in range(C3_INSTANCES):
        q = rng.choice(C1_QS)
        n = rng.randint(1, 6)
        K = rng.randint(1, 64)
        C = rand_circuit(rng, n, rng.randint(n, 50), max_degree=32)
        pts = [[rng.randrange(q) for _ in range(n)] for _ in range(K)]
        params = choose_params(C, K, q, C1_EPS)
        proof = prove_eval(C, pts, params)
        N = params.n_coeffs
        payload_bits = 8 * len(encode_elements(proof.coeff_array(proof.field)))
        blob = serialize_proof(proof)
        assert parse_proof(blob) == proof
        bad_count += len(proof.coeffs) != N
        bad_bits += payload_bits > N * params.ell * 64
        headers.add(8 * len(blob) - payload_bits - 64 * (params.ell + 1))
    ok = bad_count == 0 and bad_bits == 0
    record(3, ok, f"{C3_INSTANCES} proofs: coefficient count = d(K-1)+1 on all but {bad_count}, "
                  f"coefficient payload over N*l*64 bits on {bad_bits}; file header adds "
                  f"{sorted(headers)} bits plus l+1 modulus words")
    assert ok


# -- criterion 4 --------------------------------------------------------------------

def _sum_forgery_rate(formulas, forge) -> tuple[float, float]:
    rng = random.Random(44)
    accepted = trials = 0
    bounds = []
    for f in formulas:
        C = arithmetize(f)
        p = sat_prime(f.n)
        half = build_half_sum_circuit(C)
        proof = prove_sum(C, p, C4_TAMPER_EPS, half)
        claim = SumClaim(C, p, oracle_sat(f))
        for s in range(C4_TAMPER_SEEDS):
            accepted += verify_sum(claim, forge(proof, rng), Coins(trials), half=half).accepted
            trials += 1
            bounds.append(proof.params.error_bound)
    return accepted / trials, binomial_limit(float(np.mean(bounds)), trials)


def test_criterion_4_sat():
    start = time.perf_counter()
    universe = [BoolFormula(f, 2) for f in formula_universe(C4_UNIVERSE_M)]
    assert len(universe) == C4_UNIVERSE_SIZE
    got = count_sat_many(universe, rngs=[Coins(i) for i in range(len(universe))])
    wrong_universe = sum(g != oracle_sat(f) for g, f in zip(got, universe))
    randoms = random_formulas(404, C4_RANDOM, 10, 40)
    wrong_random = sum(count_sat(f, rng=Coins(i)) != oracle_sat(f) for i, f in enumerate(randoms))
    single, limit = _sum_forgery_rate(randoms, bump_coefficient)
    stuffed, limit2 = _sum_forgery_rate(randoms, lambda p, _rng: stuff_roots(p))
    elapsed = time.perf_counter() - start
    ok = (wrong_universe == 0 and wrong_random == 0 and single <= limit and stuffed <= limit2
          and elapsed < C4_SECONDS)
    record(4, ok, f"{len(universe) - wrong_universe}/{len(universe)} two-variable formulas and "
                  f"{C4_RANDOM - wrong_random}/{C4_RANDOM} random formulas agree; forged acceptance "
                  f"{single:.4f} (single) and {stuffed:.4f} (root-stuffed), limit {limit:.4f}; "
                  f"{elapsed:.1f} s (limit {C4_SECONDS:.0f} s)")
    assert ok


# -- criterion 5 --------------------------------------------------------------------

def test_criterion_5_sumcheck_opcount():
    root = rand_formula(random.Random(20), C5_N, C5_CONNECTIVES)
    verifier = {}
    for n in (C5_N, C5_N + 2):
        F = BoolFormula(root, n)
        with counting() as c:
            out = certify_sat(F, rng=Coins(1))
            if n == C5_N:
                oracle = oracle_cube_sum(arithmetize(F), sat_prime(n))
        assert out.accepted
        verifier[n] = c.total("verifier")
        if n == C5_N:
            assert out.total == oracle
            oracle_ops = c.total("oracle")
    gap = oracle_ops / verifier[C5_N]
    growth = verifier[C5_N + 2] / verifier[C5_N]
    ok = gap >= C5_MIN_GAP and growth <= C5_MAX_GROWTH
    record(5, ok, f"n = {C5_N}: oracle {oracle_ops} ops vs verifier {verifier[C5_N]} ops "
                  f"({gap:.1f}x, need >= {C5_MIN_GAP:.0f}x); n + 2 multiplies verifier ops by {growth:.2f} "
                  f"(limit {C5_MAX_GROWTH})")
    assert ok


# -- criterion 6 --------------------------------------------------------------------

def _vanishing_forgery(S: RoundSetup, k: int, F):
    """Round-k forgery h = prod over block points (x - alpha) * (D_k - 2^b more roots).

    h sums to zero over the block, so round k's own check passes; the next
    check fails unless r_k is one of the D_k roots of h.
    """
    D, size = S.round_degrees[k], 1 << S.blocks[k]
    h = DensePoly.from_elements(F, [1])
    for i in range(D):
        h = h * DensePoly.from_elements(F, [-canonical_element(F, i), 1])
    assert D >= size
    arr = h.to_array()

    def tamper(j, coeffs):
        if j == k:
            coeffs[: len(arr)] = F.vadd(coeffs[: len(arr)], arr)
        return coeffs

    return tamper


def test_criterion_6_multiround():
    universe = formula_universe(C4_UNIVERSE_M)
    picks = random.Random(606).sample(range(len(universe)), C6_SAMPLE)
    formulas = [BoolFormula(universe[i], 2) for i in picks] + random_formulas(404, C4_RANDOM, 10, 40)
    wrong = 0
    for i, f in enumerate(formulas):
        C = arithmetize(f)
        p = sat_prime(f.n)
        want = oracle_sat(f)
        for c in (2, 3):
            out = multiround_sum(SumClaim(C, p, want), c, rng=Coins(i))
            wrong += not (out.accepted and out.total == want and count_sat(f, rng=Coins(i), rounds=c) == want)

    C = arithmetize(BoolFormula(rand_formula(random.Random(66), 6, 12), 6))
    p = sat_prime(6)
    want = oracle_cube_sum(C, p)
    lines, ok_tamper = [], True
    for c in (2, 3):
        S = RoundSetup.derive(C, p, c, 0)
        F = build_extension(p, S.ell)
        for k in range(c):
            tamper = _vanishing_forgery(S, k, F)
            rejected = sum(not multiround_sum(SumClaim(C, p, want), c, 0, Coins(s), tamper).accepted
                           for s in range(C6_TAMPER_SEEDS))
            bad = S.round_degrees[k] / p**S.ell
            need = 1 - bad - SIGMAS * math.sqrt(bad * (1 - bad) / C6_TAMPER_SEEDS)
            rate = rejected / C6_TAMPER_SEEDS
            ok_tamper &= rate >= need
            lines.append(f"c={c} round {k + 1}: {rate:.4f} >= {need:.4f}")
    ok = wrong == 0 and ok_tamper
    record(6, ok, f"{2 * len(formulas) - wrong}/{2 * len(formulas)} honest c in {{2,3}} runs exact; "
                  f"tampered rejection " + ", ".join(lines))
    assert ok


# -- criterion 7 --------------------------------------------------------------------

def test_criterion_7_permanent_hamcycles():
    rng = random.Random(707)
    bad_perm = bad_ham = 0
    for i in range(C7_INSTANCES):
        n = rng.randint(1, 6)
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        bad_perm += permanent(M, rng=Coins(i)) != oracle_permanent(M)
    for i in range(C7_INSTANCES):
        directed = rng.random() < 0.5
        n = rng.randint(2 if directed else 3, 6)
        pairs = itertools.permutations(range(n), 2) if directed else itertools.combinations(range(n), 2)
        dens = rng.random()
        G = Graph(n, tuple(e for e in pairs if rng.random() < dens), directed)
        bad_ham += count_hamcycles(G, rng=Coins(i)) != oracle_hamcycles(G)
    ok = bad_perm == 0 and bad_ham == 0
    record(7, ok, f"permanents {C7_INSTANCES - bad_perm}/{C7_INSTANCES}, "
                  f"Hamiltonian cycle counts {C7_INSTANCES - bad_ham}/{C7_INSTANCES} exact")
    assert ok


# -- criterion 8 --------------------------------------------------------------------

def _matrix_family(n: int) -> list:
    """Every matrix over x1..xn with at most two connectives."""
    return [BoolFormula(f, n) for f in formula_universe(2, n)]


def test_criterion_8_qbf():
    runs = wrong = 0
    worst = 0.0
    cases = []
    rng = random.Random(808)
    for _ in range(C8_RANDOM):
        n = rng.randint(1, 8)
        cases.append(QuantifiedFormula("".join(rng.choice("EA") for _ in range(n)),
                                       BoolFormula(rand_formula(rng, n, rng.randint(0, 24), consts=True), n)))
    for n in (1, 2, 3):
        for prefix in itertools.product("EA", repeat=n):
            for M in _matrix_family(n):
                cases.append(QuantifiedFormula("".join(prefix), M))
    for i, phi in enumerate(cases):
        want = oracle_qbf(phi)
        for s in range(C8_SEEDS):
            out = qbf_run(phi, rng=Coins(i * C8_SEEDS + s))
            runs += 1
            wrong += not (out.accepted and out.value == want)
            worst = max(worst, out.prime_failure_bound)
    ok = wrong == 0 and worst < C8_MAX_BOUND
    record(8, ok, f"{runs - wrong}/{runs} runs over {len(cases)} QBFs agree with the oracle; "
                  f"worst prime failure bound {worst:.2e} (limit 2^-20 = {C8_MAX_BOUND:.2e})")
    assert ok


# -- criterion 9 --------------------------------------------------------------------

def _random_vectors(rng, n_max=64, d_max=16):
    n, d = rng.randint(1, n_max), rng.randint(1, d_max)
    dens = rng.random()
    return [tuple(int(rng.random() < dens) for _ in range(d)) for _ in range(n)]


def test_criterion_9_appendix_counts():
    rng = random.Random(909)
    bad_ov = bad_ham = bad_clique = bad_rem = clique_runs = 0
    for i in range(C9_INSTANCES):
        A = _random_vectors(rng)
        bad_ov += ov_count(A, rng=Coins(i)) != oracle_ov(A)
    for i in range(C9_INSTANCES):
        A = _random_vectors(rng)
        bad_ham += any(hamming_count(A, k, rng=Coins(i)) != oracle_hamming(A, k) for k in range(len(A[0]) + 1))
    for i in range(C9_INSTANCES):
        n = rng.randint(5, 15)
        dens = rng.random()
        G = Graph(n, tuple(e for e in itertools.combinations(range(n), 2) if rng.random() < dens))
        for k in (3, 4, 5):
            clique_runs += 1
            want = oracle_cliques(G, k)
            inst = kclique_instance(G, k)
            if inst.points:
                out = certify(inst, rng=Coins(i))
                total = sum(out.values) % inst.p
                bad_rem += total % inst.multiplicity != 0
                bad_clique += total // inst.multiplicity != want
            else:
                bad_clique += want != 0
            bad_clique += kclique_count(G, k, rng=Coins(i)) != want
    ok = bad_ov == bad_ham == bad_clique == bad_rem == 0
    record(9, ok, f"OV {C9_INSTANCES - bad_ov}/{C9_INSTANCES}, Hamming (every k) "
                  f"{C9_INSTANCES - bad_ham}/{C9_INSTANCES}, k-clique errors {bad_clique} over {clique_runs} runs, "
                  f"nonzero remainders {bad_rem}")
    assert ok


# -- criterion 10 -------------------------------------------------------------------

def _round_trips(F, rng) -> int:
    bad = 0
    for _ in range(C10_ROUND_TRIPS):
        m = rng.randint(1, min(64, F.order))
        xs = [canonical_element(F, i) for i in rng.sample(range(F.order), m)]
        p = DensePoly.from_elements(F, [canonical_element(F, rng.randrange(F.order)) for _ in range(m)])
        bad += interpolate(zip(xs, multipoint_eval(p, xs))) != p
    return bad


def _best_time(fn) -> float:
    best = math.inf
    for _ in range(C10_REPEATS):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def test_criterion_10_poly_kernel():
    rng = random.Random(1010)
    fields = [PrimeField(101), build_extension(2, 8), build_extension(3, 5), PrimeField(2**61 - 1)]
    bad = {str(F): _round_trips(F, rng) for F in fields}

    F = PrimeField(find_prime(2**30))
    nprng = np.random.default_rng(10)
    sizes = [2**k for k in range(10, 15)]
    fast, naive = [], []
    for n in sizes:
        pts = (np.arange(n) % F.q).reshape(-1, 1).astype(F.dtype)
        f = nprng.integers(0, F.q, size=(n, 1)).astype(F.dtype)
        fast.append(_best_time(lambda: evaluate_at(F, f, pts)))
        if n <= 2**13:
            naive.append(_best_time(lambda: oracle_poly_eval(F, f, pts)))
        assert np.array_equal(evaluate_at(F, f, pts[:64]), oracle_poly_eval(F, f, pts[:64]))
    ratios = [b / a for a, b in zip(fast, fast[1:])]
    naive_ratios = [b / a for a, b in zip(naive, naive[1:])]
    ok = not any(bad.values()) and max(ratios) <= C10_MAX_RATIO
    record(10, ok, f"round-trip failures {sum(bad.values())} over {C10_ROUND_TRIPS} per field in {len(fields)} fields; "
                   f"T(2n)/T(n) for n = 2^10..2^14: {', '.join(f'{r:.2f}' for r in ratios)} (limit {C10_MAX_RATIO}); "
                   f"naive ratios {', '.join(f'{r:.2f}' for r in naive_ratios)}")
    assert ok


# -- criterion 11 -------------------------------------------------------------------

def _int_coeffs(C, q: int) -> list[int]:
    """Coefficients mod q of a univariate circuit, by expanding every gate."""
    vals = []
    for g in C.gates:
        if g.op == INPUT:
            v = [0, 1]
        elif g.op == CONST:
            v = [g.a % q]
        elif g.op == ADD:
            a, b = vals[g.a], vals[g.b]
            v = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(max(len(a), len(b)))]
        elif g.op == MUL:
            a, b = vals[g.a], vals[g.b]
            v = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    v[i + j] = (v[i + j] + x * y) % q
        vals.append(v)
    return vals[C.output]


def _horner_circuit(coeffs: list[int]):
    b = CircuitBuilder(1, fold=False)
    x = b.input(0)
    acc = b.const(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = b.add(b.mul(acc, x), b.const(c))
    return b.build(acc)


def test_criterion_11_upit():
    rng = random.Random(1111)
    q = C11_Q
    disagree = wrong = 0
    false_equal = trials = 0
    bounds = []
    for i in range(C11_PAIRS):
        C1 = rand_circuit(rng, 1, rng.randint(2, 14), max_degree=40)
        coeffs = _int_coeffs(C1, q)
        equal = i % 2 == 0
        if not equal:
            # add c * prod_j (x - a_j): up to deg roots where a random r can land
            m = rng.randint(0, max(len(coeffs) - 1, 0))
            extra = [rng.randrange(1, q)]
            for a in rng.sample(range(q), m):
                extra = [((extra[t - 1] if t else 0) - a * (extra[t] if t < len(extra) else 0)) % q
                         for t in range(len(extra) + 1)]
            coeffs = [((coeffs[t] if t < len(coeffs) else 0) + (extra[t] if t < len(extra) else 0)) % q
                      for t in range(max(len(coeffs), len(extra)))]
        C2 = _horner_circuit(coeffs)
        det = upit_deterministic(C1, C2, q)
        ran = upit_random(C1, C2, Coins(i), q, eps_exp=40)
        disagree += det != ran
        wrong += det != equal
        if not equal:
            N = max(syntactic_degree(C1), syntactic_degree(C2), 1)
            size = upit_field(C1, C2, q).order
            for s in range(C11_FALSE_EQUAL_SEEDS):
                false_equal += upit_random(C1, C2, Coins(10**6 + trials), q)
                trials += 1
                bounds.append(N / size)
    rate = false_equal / trials
    limit = binomial_limit(float(np.mean(bounds)), trials)
    ok = disagree == 0 and wrong == 0 and rate <= limit
    record(11, ok, f"testers disagree on {disagree}/{C11_PAIRS} pairs, deterministic wrong on {wrong}; "
                   f"false-equal rate {rate:.4f} over {trials} trials (limit {limit:.4f})")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
