"""Certified sums over the Boolean cube.

One round: with x split into ceil(n/2) free and floor(n/2) summed
variables, C'(x) = sum_b C(x, b) has the same degree as C, and the cube
sum of C is the sum of C' over the K = 2^ceil(n/2) Boolean points, which
the batch-evaluation proof certifies.

c rounds: the variables are cut into c+1 blocks.  Block k's index j is
carried by bit polynomials (Psi_i(j) = bit i of j), and in round k Merlin
sends Q_k(y), the sum over the later blocks with block k set to Psi(y)
and the earlier blocks fixed at Arthur's coins.  Arthur checks each Q_k
against the previous round and finishes with the explicit last-block sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import poly as P
from .circuit import Circuit, CircuitBuilder, evaluate_batch, syntactic_degree, arithmetize, BoolFormula
from .errors import CapacityError, ProtocolError, UsageError
from .field import build_extension, find_prime, is_prime
from .graphs import Graph
from .opcount import phase, tally
from .protocol import (MALFORMED, MAX_EXTENSION_DEGREE, UNSOUND, Proof, _decode, _draw, _psi_arrays, _psi_at,
                       alpha_tree, canonical_array, choose_params, extension_degree, prove_eval, verify_eval,
                       _embed_base)
from .serialize import decode_elements, encode_elements
from .transcript import Coins, ReplayCoins, Transcript

DEFAULT_EPS_EXP = 40
# cap on int64 words held by one batched evaluation chunk
BATCH_WORDS = 1 << 22


@dataclass(frozen=True)
class SumClaim:
    circuit: Circuit
    p: int
    claimed: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise UsageError(f"sum modulus {self.p} is not prime")


@dataclass(frozen=True)
class SumOutcome:
    """Verdict on a cube-sum claim; ``total`` is the certified sum mod p when accepted."""

    accepted: bool
    total: int | None
    coins_used: int
    reason: str | None = None
    detail: str = ""
    round: int | None = None
    transcript: Transcript | None = dc_field(default=None, compare=False)


def half_split(n: int) -> tuple[int, int]:
    """(free, summed) = (ceil(n/2), floor(n/2))."""
    return (n + 1) // 2, n // 2


def boolean_points(k: int) -> np.ndarray:
    """All of {0,1}^k as a (2^k, k) int64 array; row i holds the bits of i, low bit first."""
    idx = np.arange(1 << k, dtype=np.int64)
    return ((idx[:, None] >> np.arange(k, dtype=np.int64)[None, :]) & 1).astype(np.int64)


def build_half_sum_circuit(C: Circuit) -> Circuit:
    """C'(x_1..x_f) = sum over b in {0,1}^(n-f) of C(x, b), f = ceil(n/2)."""
    free, summed = half_split(C.n_inputs)
    b = CircuitBuilder(free)
    xs = [b.input(j) for j in range(free)]
    bits = [b.const(0), b.const(1)]
    terms = [b.embed(C, xs + [bits[(mask >> j) & 1] for j in range(summed)]) for mask in range(1 << summed)]
    return b.build(b.sum(terms))


def _sum_axis(F, arr: np.ndarray, axis: int) -> np.ndarray:
    """Sum mod q along ``axis`` without int64 overflow."""
    if arr.dtype != object and arr.shape[axis] * F.q < 2**63:
        return arr.sum(axis=axis) % F.q
    arr = np.moveaxis(arr, axis, 0)
    while len(arr) > 1:
        half = len(arr) // 2
        head = F.vadd(arr[:half], arr[half:2 * half])
        arr = np.concatenate([head, arr[2 * half:]]) if len(arr) % 2 else head
    return arr[0] if len(arr) else np.zeros(arr.shape[1:], dtype=F.dtype)


def _grid_sums(C: Circuit, F, prefix: np.ndarray, tail_bits: int) -> np.ndarray:
    """sum_b C(prefix[i], b) over b in {0,1}^tail_bits for each row of prefix (M, n-tail, l)."""
    M, width = prefix.shape[0], prefix.shape[1]
    B = 1 << tail_bits
    bits = _embed_base(F, boolean_points(tail_bits).astype(F.dtype))
    rows_per_chunk = max(1, BATCH_WORDS // max(1, B * C.n_inputs * F.ell))
    out = []
    for s in range(0, M, rows_per_chunk):
        chunk = prefix[s:s + rows_per_chunk]
        m = len(chunk)
        X = np.empty((m, B, C.n_inputs, F.ell), dtype=F.dtype)
        X[:, :, :width] = chunk[:, None]
        X[:, :, width:] = bits[None]
        vals = evaluate_batch(C, F, X.reshape(m * B, C.n_inputs, F.ell)).reshape(m, B, F.ell)
        tally("add", m * (B - 1))
        out.append(_sum_axis(F, vals, 1))
    return np.concatenate(out) if out else P.zeros(F, 0)


# -- one round -------------------------------------------------------------------

def prove_sum(C: Circuit, p: int, eps_exp: int = DEFAULT_EPS_EXP, half: Circuit | None = None) -> Proof:
    """Merlin's proof for C' on the Boolean points of the free variables.

    Q is obtained by evaluating sum_b C(Psi(beta), b) at d*(K-1)+1
    canonical points beta and interpolating, which avoids running the
    2^(n/2)-times larger C' over polynomial wires.
    """
    half = half or build_half_sum_circuit(C)
    free, summed = half_split(C.n_inputs)
    pts = boolean_points(free)
    params = choose_params(half, len(pts), p, eps_exp)
    if summed == 0 or params.n_coeffs < 4:
        return prove_eval(half, pts, params)
    with phase("prover"):
        F = build_extension(p, params.ell)
        psi = _psi_arrays(F, pts, alpha_tree(F, len(pts)))
        N = params.n_coeffs
        beta = canonical_array(F, len(pts), N)
        W = F
        if F.ell > 1 and not psi[..., 1:].any() and not beta[:, 1:].any():
            # Psi and beta lie in F_p, so Q does too: work there
            W = build_extension(p, 1)
            psi, beta = psi[..., :1], beta[:, :1]
        tree = P.SubproductTree(W, beta)
        X = np.moveaxis(tree.evaluate(psi), 0, 1)  # (N, free, l)
        Q = tree.interpolate(_grid_sums(C, W, X, summed))
        if W is not F:
            Q = _embed_base(F, Q[:, 0].astype(F.dtype))
        full = P.zeros(F, N)
        full[: len(Q)] = Q[:N]
        return Proof(params, tuple(F.modulus), tuple(F.from_array(full)))


def verify_sum(claim: SumClaim, proof: Proof, rng, eps_exp: int | None = None,
               half: Circuit | None = None) -> SumOutcome:
    """Arthur: verify C' at the Boolean points, add the decoded values, compare to the claim."""
    hdr = proof.params
    if hdr.q != claim.p:
        return SumOutcome(False, None, 0, MALFORMED, f"proof works mod {hdr.q}, claim is mod {claim.p}")
    if eps_exp is not None and hdr.eps_exp != eps_exp:
        return SumOutcome(False, None, 0, MALFORMED, f"proof targets 2^-{hdr.eps_exp}, verifier requires 2^-{eps_exp}")
    half = half or build_half_sum_circuit(claim.circuit)
    free, _ = half_split(claim.circuit.n_inputs)
    out = verify_eval(half, boolean_points(free), proof, rng)
    if not out.accepted:
        return SumOutcome(False, None, out.coins_used, out.reason, out.detail)
    with phase("verifier"):
        total = sum(out.values) % claim.p
        tally("add", len(out.values))
    if total != claim.claimed % claim.p:
        return SumOutcome(False, None, out.coins_used, UNSOUND,
                          f"decoded values sum to {total}, claim is {claim.claimed % claim.p}")
    return SumOutcome(True, total, out.coins_used)


def certify_cube_sum(C: Circuit, p: int, eps_exp: int = DEFAULT_EPS_EXP, rng=None, rounds: int = 1) -> SumOutcome:
    """Honest run: Merlin proves sum_b C(b) mod p, Arthur checks it; rounds >= 2 uses the block protocol."""
    rng = Coins(0) if rng is None else rng
    if rounds >= 2:
        with phase("prover"):
            claimed = _cube_sum_value(C, p)
        return multiround_sum(SumClaim(C, p, claimed), rounds, eps_exp, rng)
    if rounds != 1:
        raise UsageError(f"rounds must be >= 1, got {rounds}")
    half = build_half_sum_circuit(C)
    proof = prove_sum(C, p, eps_exp, half)
    hdr = proof.params
    F = proof.field
    # Merlin's claim is what his proof decodes to; recomputing it here keeps the API one-shot
    with phase("prover"):
        tree = alpha_tree(F, hdr.K)
        vals = _decode(F, proof.coeff_array(F), tree)
        claimed = int(_sum_axis(F, vals, 0)[0])
    return verify_sum(SumClaim(C, p, claimed), proof, rng, half=half)


def _cube_sum_value(C: Circuit, p: int) -> int:
    """Honest prover's cube sum, by batched evaluation in F_p."""
    F = build_extension(p, 1)
    empty = np.zeros((1, 0, 1), dtype=F.dtype)
    return int(_grid_sums(C, F, empty, C.n_inputs)[0, 0])


# -- #SAT ----------------------------------------------------------------------------

def sat_prime(n: int) -> int:
    """Smallest prime above 2^n, so a count in [0, 2^n] is recovered exactly."""
    if n > 60:
        raise CapacityError(f"#SAT needs a prime above 2^{n}; limit is n <= 60")
    return find_prime(max(1 << n, 2))


def count_sat(F: BoolFormula, eps_exp: int = DEFAULT_EPS_EXP, rng=None, rounds: int = 1) -> int:
    """Number of satisfying assignments, certified through the arithmetized formula."""
    out = certify_sat(F, eps_exp, rng, rounds)
    if not out.accepted:
        raise ProtocolError(f"honest #SAT proof rejected: {out.detail}")
    return out.total


def certify_sat(F: BoolFormula, eps_exp: int = DEFAULT_EPS_EXP, rng=None, rounds: int = 1) -> SumOutcome:
    return certify_cube_sum(arithmetize(F), sat_prime(F.n), eps_exp, rng, rounds)


def certify_cube_sums_many(circuits: list[Circuit], p: int, eps_exp: int = DEFAULT_EPS_EXP,
                           rngs=None) -> list[SumOutcome]:
    """One-round certification of many small cube sums, run in lockstep (see :mod:`maproof.batch`)."""
    from .batch import prove_eval_many, verify_eval_many

    rngs = [Coins(i) for i in range(len(circuits))] if rngs is None else list(rngs)
    results: list[SumOutcome | None] = [None] * len(circuits)
    halves = [build_half_sum_circuit(C) for C in circuits]
    groups: dict = {}
    for i, (C, H) in enumerate(zip(circuits, halves)):
        free, _ = half_split(C.n_inputs)
        prm = choose_params(H, 1 << free, p, eps_exp)
        groups.setdefault((free, prm.ell), []).append((i, prm))
    for (free, _), members in groups.items():
        idx = [i for i, _ in members]
        pts = boolean_points(free)
        allpts = np.broadcast_to(pts, (len(idx),) + pts.shape)
        proofs = prove_eval_many([halves[i] for i in idx], allpts, [prm for _, prm in members])
        outs = verify_eval_many([halves[i] for i in idx], allpts, proofs, [rngs[i] for i in idx])
        for i, out in zip(idx, outs):
            if out.accepted:
                results[i] = SumOutcome(True, sum(out.values) % p, out.coins_used)
            else:
                results[i] = SumOutcome(False, None, out.coins_used, out.reason, out.detail)
    return results


def count_sat_many(formulas: list[BoolFormula], eps_exp: int = DEFAULT_EPS_EXP, rngs=None) -> list[int]:
    """:func:`count_sat` for many small formulas at once; formula i uses ``rngs[i]``."""
    rngs = [Coins(i) for i in range(len(formulas))] if rngs is None else list(rngs)
    counts: list[int | None] = [None] * len(formulas)
    by_n: dict = {}
    for i, f in enumerate(formulas):
        by_n.setdefault(f.n, []).append(i)
    for n, idx in by_n.items():
        outs = certify_cube_sums_many([arithmetize(formulas[i]) for i in idx], sat_prime(n), eps_exp,
                                      [rngs[i] for i in idx])
        for i, out in zip(idx, outs):
            if not out.accepted:
                raise ProtocolError(f"honest #SAT proof rejected for formula {i}: {out.detail}")
            counts[i] = out.total
    return counts


# -- c rounds --------------------------------------------------------------------

def split_blocks(n: int, c: int) -> tuple[int, ...]:
    """n variables in c+1 consecutive blocks whose sizes differ by at most one, larger first."""
    if c < 1:
        raise UsageError(f"need at least one round, got {c}")
    q, r = divmod(n, c + 1)
    return tuple(q + (1 if k < r else 0) for k in range(c + 1))


@dataclass(frozen=True)
class RoundSetup:
    """Public parameters of the c-round protocol, all derived from (C, p, c, eps_exp)."""

    n: int
    c: int
    p: int
    ell: int
    d: int
    eps_exp: int
    blocks: tuple
    round_degrees: tuple

    @classmethod
    def derive(cls, C: Circuit, p: int, c: int, eps_exp: int) -> "RoundSetup":
        if not is_prime(p) or p >= 2**62:
            raise UsageError(f"sum modulus {p} is not a prime below 2^62")
        blocks = split_blocks(C.n_inputs, c)
        d = syntactic_degree(C)
        degs = tuple(d * ((1 << b) - 1) for b in blocks[:c])
        # coins must beat every round degree by 2^t; block indices must be distinct field points
        bound = max(max(degs), 1 << max(blocks), 1) << eps_exp
        ell = extension_degree(p, bound)
        if ell > MAX_EXTENSION_DEGREE:
            raise CapacityError(f"extension degree {ell} required, limit is {MAX_EXTENSION_DEGREE}")
        return cls(C.n_inputs, c, p, ell, d, eps_exp, blocks, degs)

    def as_dict(self) -> dict:
        return {"n": self.n, "c": self.c, "p": self.p, "ell": self.ell, "d": self.d, "eps_exp": self.eps_exp,
                "blocks": list(self.blocks), "round_degrees": list(self.round_degrees)}

    @property
    def error_bound(self) -> float:
        """Union bound over rounds: sum_k deg(Q_k) / p^l."""
        return sum(self.round_degrees) / self.p**self.ell

    def offsets(self) -> list[int]:
        out, acc = [], 0
        for b in self.blocks:
            out.append(acc)
            acc += b
        return out


def _bit_setup(F, b: int):
    """Alpha tree over 2^b points and the bit polynomials of a b-bit block."""
    tree = alpha_tree(F, 1 << b)
    bits = boolean_points(b)
    return tree, bits, _psi_arrays(F, bits, tree)


def _prover_round(C: Circuit, S: RoundSetup, F, rs: list, k: int) -> np.ndarray:
    """Q_k: sum over blocks after k, block k at Psi(y), earlier blocks at Psi(r_m)."""
    with phase("prover"):
        D = S.round_degrees[k]
        beta = canonical_array(F, 0, D + 1)
        tree = P.SubproductTree(F, beta)
        fixed = []
        for m in range(k):
            mtree, bits, _ = _bit_setup(F, S.blocks[m])
            fixed.append(_psi_at(F, bits, mtree, rs[m]))
        _, _, psi = _bit_setup(F, S.blocks[k])
        if S.blocks[k]:
            cur = np.moveaxis(tree.evaluate(psi), 0, 1)
        else:
            cur = np.zeros((D + 1, 0, F.ell), dtype=F.dtype)
        width = sum(S.blocks[: k + 1])
        prefix = np.empty((D + 1, width, F.ell), dtype=F.dtype)
        off = 0
        for m, v in enumerate(fixed):
            prefix[:, off:off + S.blocks[m]] = v[None]
            off += S.blocks[m]
        prefix[:, off:] = cur
        vals = _grid_sums(C, F, prefix, S.n - width)
        return tree.interpolate(vals)


class RoundVerifier:
    """Arthur's side of the c-round protocol, fed one polynomial per round."""

    def __init__(self, C: Circuit, S: RoundSetup, F, claimed: int, rng):
        self.C, self.S, self.F, self.rng = C, S, F, rng
        self.expected = F.from_int(claimed)
        self.rs: list = []
        self.coins = 0

    def receive(self, k: int, coeffs: np.ndarray) -> tuple[str, str] | None:
        """Check Q_k and draw r_k; returns (reason, detail) on rejection."""
        F, S = self.F, self.S
        with phase("verifier"):
            D = S.round_degrees[k]
            if coeffs.ndim != 2 or coeffs.shape[1] != F.ell:
                return MALFORMED, f"round {k + 1}: coefficients are not {F.ell}-tuples"
            if coeffs.size and ((coeffs < 0).any() or (coeffs >= F.q).any()):
                return MALFORMED, f"round {k + 1}: coefficient outside [0, {F.q})"
            if len(P.trim(coeffs)) > D + 1:
                return MALFORMED, f"round {k + 1}: degree exceeds the bound {D}"
            tree, _, _ = _bit_setup(F, S.blocks[k])
            total = tuple(int(x) for x in _sum_axis(F, _decode(F, coeffs, tree), 0))
            tally("add", tree.K)
            if total != tuple(F.coeffs(self.expected)):
                what = "the claim" if k == 0 else f"Q_{k}(r_{k})"
                return UNSOUND, f"round {k + 1}: block sum of Q_{k + 1} differs from {what}"
            r, used = _draw(F, self.rng)
            self.coins += used
            self.rs.append(r)
            self.expected = P.horner(F, coeffs, r)
            return None

    def finish(self) -> tuple[str, str] | None:
        F, S = self.F, self.S
        with phase("verifier"):
            width = sum(S.blocks[: S.c])
            prefix = np.empty((1, width, F.ell), dtype=F.dtype)
            off = 0
            for m in range(S.c):
                tree, bits, _ = _bit_setup(F, S.blocks[m])
                prefix[0, off:off + S.blocks[m]] = _psi_at(F, bits, tree, self.rs[m])
                off += S.blocks[m]
            got = tuple(int(x) for x in _grid_sums(self.C, F, prefix, S.blocks[-1])[0])
            if got != tuple(F.coeffs(self.expected)):
                return UNSOUND, f"final check: last-block sum differs from Q_{S.c}(r_{S.c})"
            return None


def multiround_sum(claim: SumClaim, c: int, eps_exp: int = DEFAULT_EPS_EXP, rng=None,
                   tamper=None) -> SumOutcome:
    """Run the c-round protocol with an honest prover; the transcript is attached to the outcome.

    ``tamper(k, coeffs) -> coeffs`` lets tests corrupt round k (0-based)
    before it is sent; later rounds stay honest.
    """
    rng = Coins(0) if rng is None else rng
    S = RoundSetup.derive(claim.circuit, claim.p, c, eps_exp)
    F = build_extension(S.p, S.ell)
    t = Transcript("multiround-sum", {**S.as_dict(), "claimed": claim.claimed % claim.p,
                                      "modulus": [int(x) for x in F.modulus]},
                   getattr(rng, "seed", None))
    V = RoundVerifier(claim.circuit, S, F, claim.claimed % claim.p, rng)
    mark = len(getattr(rng, "draws", []))
    verdict = None
    for k in range(c):
        Q = _prover_round(claim.circuit, S, F, V.rs, k)
        full = P.zeros(F, S.round_degrees[k] + 1)
        full[: len(Q)] = Q[: len(full)]
        if tamper is not None:
            full = np.asarray(tamper(k, full.copy()), dtype=F.dtype)
        t.send("prover", "poly", encode_elements(full))
        verdict = V.receive(k, full)
        if hasattr(rng, "draws"):
            mark = t.record_coins(rng, mark)
        if verdict:
            return _close(t, verdict, V, k + 1)
    verdict = V.finish()
    return _close(t, verdict, V, c + 1 if verdict else None, claim.claimed % claim.p)


def _close(t: Transcript, verdict, V: RoundVerifier, rnd, total=None) -> SumOutcome:
    ok = verdict is None
    t.decision = ok
    t.send("verifier", "decision", b"\x01" if ok else b"\x00")
    if ok:
        return SumOutcome(True, total, V.coins, transcript=t)
    return SumOutcome(False, None, V.coins, verdict[0], verdict[1], rnd, t)


def replay_multiround(C: Circuit, t: Transcript) -> SumOutcome:
    """Re-run Arthur on a recorded transcript with its recorded coins."""
    hdr = t.params
    try:
        S = RoundSetup.derive(C, int(hdr["p"]), int(hdr["c"]), int(hdr["eps_exp"]))
        claimed = int(hdr["claimed"])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"transcript header is incomplete: {exc}") from exc
    if {k: hdr.get(k) for k in S.as_dict()} != S.as_dict():
        return SumOutcome(False, None, 0, MALFORMED, "transcript header disagrees with the recomputed parameters")
    F = build_extension(S.p, S.ell)
    if [int(x) for x in hdr.get("modulus", [])] != [int(x) for x in F.modulus]:
        return SumOutcome(False, None, 0, MALFORMED, "transcript uses a different field modulus")
    coins = ReplayCoins.from_transcript(t)
    V = RoundVerifier(C, S, F, claimed, coins)
    polys = t.messages("poly")
    for k in range(S.c):
        if k >= len(polys):
            return SumOutcome(False, None, V.coins, MALFORMED, f"transcript ends before round {k + 1}", k + 1)
        verdict = V.receive(k, decode_elements(polys[k], F.ell, F.dtype))
        if verdict:
            return SumOutcome(False, None, V.coins, *verdict, k + 1)
    verdict = V.finish()
    if verdict:
        return SumOutcome(False, None, V.coins, *verdict, S.c + 1)
    return SumOutcome(True, claimed, V.coins)


# -- permanent and Hamiltonian cycles ----------------------------------------------

def ryser_circuit(M) -> Circuit:
    """C_M(y) = prod_j (2 y_j - 1) * prod_i (sum_j M[i][j] y_j); its cube sum is perm(M).

    With S = {j : y_j = 1}, prod_j (2 y_j - 1) = (-1)^(n - |S|), which is
    the sign Ryser's formula attaches to S.
    """
    n = len(M)
    if n < 1 or any(len(row) != n for row in M):
        raise UsageError("Ryser circuit needs a non-empty square matrix")
    b = CircuitBuilder(n)
    ys = [b.input(j) for j in range(n)]
    two, minus_one = b.const(2), b.const(-1)
    signs = [b.add(b.mul(two, y), minus_one) for y in ys]
    rows = [b.sum(b.mul(b.const(int(M[i][j])), ys[j]) for j in range(n)) for i in range(n)]
    return b.build(b.mul(b.prod(signs), b.prod(rows)))


def permanent_bound(M) -> int:
    """|perm(M)| <= prod_i sum_j |M[i][j]|."""
    return math.prod(sum(abs(int(x)) for x in row) for row in M)


def permanent(M, eps_exp: int = DEFAULT_EPS_EXP, rng=None, rounds: int = 1) -> int:
    """perm(M) over the integers, certified mod a prime p > 2*bound and decoded symmetrically."""
    out, p = certify_permanent(M, eps_exp, rng, rounds)
    if not out.accepted:
        raise ProtocolError(f"honest permanent proof rejected: {out.detail}")
    return signed(out.total, p)


def certify_permanent(M, eps_exp: int = DEFAULT_EPS_EXP, rng=None, rounds: int = 1):
    bound = 2 * permanent_bound(M) + 1
    if bound >= 2**61:
        raise CapacityError("permanent bound needs a modulus beyond 2^61")
    p = find_prime(max(bound, 2))
    return certify_cube_sum(ryser_circuit(M), p, eps_exp, rng, rounds), p


def signed(v: int, p: int) -> int:
    return v - p if v > p // 2 else v


def hamiltonian_circuit(G: Graph) -> Circuit:
    """Signed count of closed n-walks from vertex 1 inside {1} and the selected vertices.

    Inputs y_2..y_n (vertex 1 is always selected); the gate for arc i -> j
    is A[i][j]*y_i*y_j.  The sign prod_{j>=2} (2 y_j - 1) is (-1)^(number
    of unselected vertices), so the sum over {0,1}^(n-1) counts the
    directed Hamiltonian cycles by inclusion-exclusion.
    """
    D = G.as_directed()
    n = D.n
    if n < 2:
        raise UsageError("Hamiltonian cycle counting needs n >= 2")
    A = D.adjacency
    b = CircuitBuilder(n - 1)
    y = [b.const(1)] + [b.input(j) for j in range(n - 1)]
    gate = {(i, j): b.mul(y[i], y[j]) for i in range(n) for j in range(n) if A[i][j]}
    w = [b.const(1)] + [b.const(0)] * (n - 1)
    for _ in range(n):
        w = [b.sum(b.mul(w[i], gate[i, j]) for i in range(n) if (i, j) in gate) for j in range(n)]
    sign = b.prod(b.add(b.mul(b.const(2), y[j]), b.const(-1)) for j in range(1, n))
    return b.build(b.mul(sign, w[0]))


def hamcycle_prime(n: int) -> int:
    """Directed Hamiltonian cycles number at most (n-1)!."""
    bound = math.factorial(max(n - 1, 1))
    if bound >= 2**61:
        raise CapacityError(f"(n-1)! for n = {n} exceeds the modulus range")
    return find_prime(max(bound, 2))


def count_hamcycles(G: Graph, eps_exp: int = DEFAULT_EPS_EXP, rng=None, rounds: int = 1) -> int:
    """Directed cycles for digraphs; undirected cycles (each counted once) otherwise."""
    out = certify_hamcycles(G, eps_exp, rng, rounds)
    if not out.accepted:
        raise ProtocolError(f"honest Hamiltonian proof rejected: {out.detail}")
    return hamcycles_from_total(G, out.total)


def certify_hamcycles(G: Graph, eps_exp: int = DEFAULT_EPS_EXP, rng=None, rounds: int = 1) -> SumOutcome:
    if not G.directed and G.n <= 2:
        raise UsageError("undirected Hamiltonian cycles are ambiguous for n <= 2")
    return certify_cube_sum(hamiltonian_circuit(G), hamcycle_prime(G.n), eps_exp, rng, rounds)


def hamcycles_from_total(G: Graph, total: int) -> int:
    if G.directed:
        return total
    if total % 2:
        raise ProtocolError(f"directed cycle count {total} of an undirected graph is odd")
    return total // 2
