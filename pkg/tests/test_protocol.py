import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_circuit
from maproof.circuit import CircuitBuilder, parse_circuit, syntactic_degree
from maproof.errors import CapacityError, UsageError
from maproof.field import PrimeField, build_extension, canonical_element
from maproof.oracles import oracle_multipoint
from maproof.poly import multipoint_eval
from maproof.protocol import (MALFORMED, UNSOUND, Proof, ProtocolParams, build_psi, choose_params, prove_eval,
                              upit_deterministic, upit_random, verify_eval)
from maproof.transcript import Coins, ReplayCoins


def _deg_circuit(d, n=1):
    b = CircuitBuilder(n)
    return b.build(b.prod([b.input(0)] * d))


def tamper(proof: Proof, j: int, delta: int = 1) -> Proof:
    c = list(proof.coeffs)
    row = list(c[j])
    row[0] = (row[0] + delta) % proof.params.q
    c[j] = tuple(row)
    return Proof(proof.params, proof.modulus, tuple(c))


def test_choose_params_examples():
    assert choose_params(_deg_circuit(4), 8, 2, 1).ell == 7
    assert choose_params(_deg_circuit(4), 25, 101, 0).ell == 1
    assert choose_params(_deg_circuit(2), 3, 3, 0).ell == 2
    p = choose_params(_deg_circuit(3), 5, 7, 10)
    assert 7**p.ell > 3 * 5 * 2**10 >= 7 ** (p.ell - 1)
    assert p.n_coeffs == 3 * 4 + 1


def test_choose_params_errors():
    with pytest.raises(UsageError):
        choose_params(_deg_circuit(1), 0, 5, 1)
    with pytest.raises(UsageError):
        choose_params(_deg_circuit(1), 1, 4, 1)
    with pytest.raises(CapacityError):
        choose_params(_deg_circuit(1), 1, 2, 70)


def test_psi_examples():
    F = build_extension(5, 1)
    psi = build_psi([(1, 2), (3, 4)], F)
    assert [p.int_coeffs() for p in psi] == [[1, 2], [2, 2]]
    psi = build_psi([(4, 0, 3)], build_extension(7, 2))
    assert [p.int_coeffs() for p in psi] == [[4], [], [3]]
    with pytest.raises(CapacityError):
        build_psi([(0,)] * 6, F)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), q=st.sampled_from([2, 3, 101]), ell=st.integers(1, 3))
def test_psi_round_trip(seed, q, ell):
    rng = random.Random(seed)
    F = build_extension(q, ell)
    K = rng.randint(1, min(F.order, 30))
    n = rng.randint(1, 4)
    pts = [[rng.randrange(q) for _ in range(n)] for _ in range(K)]
    alphas = [canonical_element(F, i) for i in range(K)]
    for j, p in enumerate(build_psi(pts, F)):
        assert p.degree <= K - 1
        assert [int(v) for v in multipoint_eval(p, alphas)] == [row[j] for row in pts]


def test_constant_and_projection_proofs():
    b = CircuitBuilder(2)
    C = b.build(b.const(6))
    params = choose_params(C, 3, 101, 4)
    proof = prove_eval(C, [(1, 2), (3, 4), (5, 6)], params)
    assert proof.q_poly.int_coeffs() == [6]
    b = CircuitBuilder(2)
    X = b.build(b.input(0))
    pts = [(1, 2), (3, 4), (9, 6)]
    params = choose_params(X, 3, 101, 4)
    F = build_extension(101, params.ell)
    assert prove_eval(X, pts, params).q_poly == build_psi(pts, F)[0]


@pytest.mark.parametrize("strategy", ["symbolic", "interpolate"])
def test_honest_proofs_accepted(strategy):
    rng = random.Random(17)
    for trial in range(60):
        q = rng.choice([2, 3, 101])
        n = rng.randint(1, 4)
        K = rng.randint(1, 20)
        C = rand_circuit(rng, n, rng.randint(n, 30), max_degree=16)
        pts = [[rng.randrange(q) for _ in range(n)] for _ in range(K)]
        params = choose_params(C, K, q, rng.choice([1, 8, 30]))
        proof = prove_eval(C, pts, params, strategy=strategy)
        assert len(proof.coeffs) == params.n_coeffs
        out = verify_eval(C, pts, proof, Coins(trial))
        assert out.accepted and list(out.values) == oracle_multipoint(C, pts, q)


def test_strategies_agree():
    rng = random.Random(2)
    for _ in range(20):
        q = rng.choice([3, 101])
        C = rand_circuit(rng, 2, rng.randint(2, 20), max_degree=10)
        pts = [[rng.randrange(q) for _ in range(2)] for _ in range(rng.randint(1, 9))]
        params = choose_params(C, len(pts), q, 12)
        assert prove_eval(C, pts, params, "symbolic") == prove_eval(C, pts, params, "interpolate")


def _honest(q=101, K=4, eps=10):
    C = parse_circuit("circuit n=2\ng1 input 0\ng2 input 1\ng3 mul g1 g2\ng4 mul g3 g1\noutput g4\n")
    pts = [(1, 2), (3, 4), (5, 6), (7, 8)][:K]
    params = choose_params(C, K, q, eps)
    return C, pts, prove_eval(C, pts, params)


def test_degree_too_high_is_malformed():
    C, pts, proof = _honest()
    longer = Proof(proof.params, proof.modulus, proof.coeffs + ((1,) + (0,) * (proof.params.ell - 1),))
    coins = Coins(0)
    out = verify_eval(C, pts, longer, coins)
    assert not out.accepted and out.reason == MALFORMED and coins.bits_used == 0


def test_reducible_modulus_is_malformed():
    C, pts, proof = _honest(q=3, K=4, eps=6)
    assert proof.params.ell >= 2
    bad = (0,) * proof.params.ell + (1,)  # x^l has root 0
    out = verify_eval(C, pts, Proof(proof.params, bad, proof.coeffs), Coins(0))
    assert out.reason == MALFORMED


def test_header_mismatch_is_malformed():
    C, pts, proof = _honest()
    hdr = proof.params
    wrong = ProtocolParams(hdr.q, hdr.ell, hdr.d + 1, hdr.K, hdr.n, hdr.eps_exp)
    assert verify_eval(C, pts, Proof(wrong, proof.modulus, proof.coeffs), Coins(0)).reason == MALFORMED


def test_out_of_range_coefficient_is_malformed():
    C, pts, proof = _honest()
    c = list(proof.coeffs)
    c[0] = (proof.params.q,) + c[0][1:]
    assert verify_eval(C, pts, Proof(proof.params, proof.modulus, tuple(c)), Coins(0)).reason == MALFORMED


def test_tampered_proof_rejected_as_unsound():
    C, pts, proof = _honest(eps=30)
    out = verify_eval(C, pts, tamper(proof, 2), Coins(4))
    assert not out.accepted and out.reason == UNSOUND and out.values is None


def test_off_base_decoding_rejected():
    # Q' = Q + g*(x - r0) with g outside F_q passes the spot check at r0,
    # but Q'(alpha_i) leaves the base field
    C, pts, proof = _honest(q=3, K=2, eps=4)
    F = proof.field
    assert F.ell > 1
    N = proof.params.n_coeffs
    r0 = F.order - 1
    g = F.gen
    lin = [-(g * canonical_element(F, r0)), g] + [F(0)] * (N - 2)
    coeffs = tuple((F(c) + e).raw for c, e in zip(proof.coeffs, lin))
    forged = Proof(proof.params, proof.modulus, coeffs)
    out = verify_eval(C, pts, forged, ReplayCoins([(F.bits_per_element, r0)]))
    assert not out.accepted and out.reason == UNSOUND and "base field" in out.detail


def test_soundness_monte_carlo_small():
    # d*K/q^l = 4*3/3^4 = 12/81; a single perturbed coefficient is caught except at roots
    C = _deg_circuit(4)
    pts = [(0,), (1,), (2,)]
    params = choose_params(C, 3, 3, 2)
    assert params.ell == 4
    proof = prove_eval(C, pts, params)
    bound = params.error_bound
    trials = 3000
    accepted = sum(verify_eval(C, pts, tamper(proof, seed % params.n_coeffs), Coins(seed)).accepted
                   for seed in range(trials))
    rate = accepted / trials
    assert rate <= bound + 3 * math.sqrt(bound * (1 - bound) / trials)


def test_upit_examples():
    sq = parse_circuit("circuit n=1\ng1 input 0\ng2 const 1\ng3 add g1 g2\ng4 mul g3 g3\noutput g4\n")
    ex = parse_circuit("circuit n=1\ng1 input 0\ng2 mul g1 g1\ng3 const 2\ng4 mul g3 g1\ng5 add g2 g4\n"
                       "g6 const 1\ng7 add g5 g6\noutput g7\n")
    assert upit_deterministic(sq, ex)
    assert all(upit_random(sq, ex, Coins(s)) for s in range(50))
    assert upit_deterministic(sq, sq) and upit_random(sq, sq, Coins(1))
    off = parse_circuit("circuit n=1\ng1 input 0\ng2 mul g1 g1\noutput g2\n")
    assert not upit_deterministic(sq, off)


def test_upit_needs_univariate():
    b = CircuitBuilder(2)
    C = b.build(b.add(b.input(0), b.input(1)))
    with pytest.raises(UsageError):
        upit_random(C, C, Coins(0))


def test_upit_detects_high_degree_difference_over_small_field():
    # x^q - x vanishes on F_q but is not the zero polynomial
    b = CircuitBuilder(1)
    x = b.input(0)
    C1 = b.build(b.sub(b.prod([x] * 5), x))
    b = CircuitBuilder(1)
    C2 = b.build(b.const(0))
    assert not upit_deterministic(C1, C2, q=5)
    assert syntactic_degree(C1) == 5


def test_verifier_is_deterministic_in_seed():
    C, pts, proof = _honest()
    bad = tamper(proof, 1)
    assert verify_eval(C, pts, bad, Coins(3)) == verify_eval(C, pts, bad, Coins(3))
    assert PrimeField(5).q == 5
