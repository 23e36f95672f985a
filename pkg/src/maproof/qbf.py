"""Quantified Boolean formulas by an Arthur-Merlin-Arthur exchange.

The last L = ceil(delta*n) quantifiers are arithmetized away: an
existential becomes a sum over x in {0,1}, a universal a product.  The
result P'(x_1..x_k), k = n - L, is nonzero over the integers on a Boolean
point exactly when the suffix subformula holds there.

1. Arthur picks a random prime p from [2, 2^E * m].
2. Merlin proves the values of P' mod p at all 2^k Boolean points.
3. Arthur checks the proof, reads "nonzero" as true and folds the prefix
   quantifiers over the resulting truth table.

A nonzero value |v| <= B has at most log2(B) prime factors, so a random
prime kills one with probability at most log2(B) / pi(2^E m).  Universals
square B, so the suffix is flipped (formula negated) when universals are
the majority there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .circuit import Circuit, CircuitBuilder, QuantifiedFormula, arithmetize
from .errors import CapacityError, ParameterError, ProofFormatError, ProtocolError, UsageError
from .field import is_prime
from .opcount import phase, tally
from .protocol import MALFORMED, Proof, _reject, choose_params, prove_eval, verify_eval
from .serialize import parse_proof, serialize_proof
from .sums import DEFAULT_EPS_EXP, boolean_points
from .transcript import Coins, ReplayCoins, Transcript

DEFAULT_DELTA = Fraction(2, 3)
# default interval exponent is 2n^2 clamped into this range
MIN_PRIME_EXP = 32
MAX_PRIME_EXP = 52
# primes must stay below the 62-bit base-field limit
PRIME_LIMIT = 1 << 62
# gate budget for the 2^L copies of the matrix
MAX_SUFFIX_GATES = 1 << 22


@dataclass(frozen=True)
class QbfParams:
    """``prime_interval_exp`` None means the default for the instance."""

    delta: Fraction = DEFAULT_DELTA
    prime_interval_exp: int | None = None
    eps_exp: int = DEFAULT_EPS_EXP
    max_prime_tries: int = 4096

    def __post_init__(self):
        d = Fraction(self.delta).limit_denominator(10**6)
        if not 0 <= d <= 1:
            raise UsageError(f"delta must lie in [0, 1], got {self.delta}")
        object.__setattr__(self, "delta", d)
        if self.prime_interval_exp is not None and self.prime_interval_exp < 0:
            raise UsageError("prime interval exponent must be >= 0")


def suffix_length(n: int, delta) -> int:
    """L = ceil(delta * n)."""
    return math.ceil(Fraction(delta).limit_denominator(10**6) * n)


def default_prime_exp(n: int, m: int) -> int:
    """2n^2 clamped to [32, 52], lowered until 2^E * m stays below 2^62."""
    E = min(max(2 * n * n, MIN_PRIME_EXP), MAX_PRIME_EXP)
    while E > 0 and (max(m, 1) << E) >= PRIME_LIMIT:
        E -= 1
    return E


def flip_if_needed(phi: QuantifiedFormula, delta=DEFAULT_DELTA) -> tuple[QuantifiedFormula, bool]:
    """Negate when the suffix has more universals than existentials.

    not (Q_1 x_1 ... Q_n x_n F) = (Q'_1 x_1 ... Q'_n x_n (not F)) with E and A swapped.
    """
    L = suffix_length(phi.n, delta)
    suffix = phi.prefix[phi.n - L:]
    if suffix.count("A") <= suffix.count("E"):
        return phi, False
    return negate(phi), True


def negate(phi: QuantifiedFormula) -> QuantifiedFormula:
    swapped = phi.prefix.translate(str.maketrans("EA", "AE"))
    return QuantifiedFormula(swapped, phi.matrix.negated())


def suffix_arithmetize(phi: QuantifiedFormula, delta=DEFAULT_DELTA) -> Circuit:
    """P'(x_1..x_k): sum over existential, product over universal suffix variables."""
    n = phi.n
    L = suffix_length(n, delta)
    k = n - L
    P0 = arithmetize(phi.matrix)
    if (P0.size + 1) << L > MAX_SUFFIX_GATES:
        raise CapacityError(f"suffix of {L} variables needs about 2^{L} * {P0.size} gates")
    b = CircuitBuilder(k)
    xs = [b.input(j) for j in range(k)]
    bits = [b.const(0), b.const(1)]

    def build(i: int, fixed: list[int]) -> int:
        if i == n:
            return b.embed(P0, xs + [bits[v] for v in fixed])
        lo = build(i + 1, fixed + [0])
        hi = build(i + 1, fixed + [1])
        return b.add(lo, hi) if phi.prefix[i] == "E" else b.mul(lo, hi)

    return b.build(build(k, []))


def suffix_log_bound(phi: QuantifiedFormula, delta=DEFAULT_DELTA) -> int:
    """log2 of a bound B on |P'(b)| for Boolean b: E doubles B, A squares it."""
    lb = 0
    L = suffix_length(phi.n, delta)
    for quant in reversed(phi.prefix[phi.n - L:]):
        lb = lb + 1 if quant == "E" else 2 * lb
    return lb


def prime_count_lower(N: int) -> float:
    """pi(N) >= N / ln N for N >= 17; exact counts below that."""
    if N < 17:
        return float(sum(1 for v in range(2, N + 1) if is_prime(v)))
    return N / math.log(N)


def prime_failure_bound(K: int, log_bound: int, N: int) -> float:
    """Chance that a random prime in [2, N] divides one of K nonzero values below 2^log_bound."""
    primes = prime_count_lower(N)
    if primes <= 0:
        return 1.0
    return min(1.0, K * log_bound / primes)


def sample_prime(N: int, rng, tries: int) -> int:
    """Uniform prime in [2, N] by rejection on uniform integers."""
    if N < 2:
        raise ParameterError(f"interval [2, {N}] contains no prime")
    for _ in range(tries):
        v = rng.randrange(2, N + 1)
        tally("mul", 12)  # one Miller-Rabin round per witness, charged flat
        if is_prime(v):
            return v
    raise ParameterError(f"no prime found in [2, {N}] after {tries} draws")


def fold_prefix(prefix: str, table: list[int]) -> bool:
    """Fold quantifiers over a truth table indexed by the bits of the prefix (low bit = x_1)."""
    k = len(prefix)
    if len(table) != 1 << k:
        raise UsageError(f"table of {len(table)} rows for {k} prefix variables")
    vals = [bool(v) for v in table]
    for j in range(k - 1, -1, -1):
        half = len(vals) // 2
        lo, hi = vals[:half], vals[half:]
        vals = [a or b for a, b in zip(lo, hi)] if prefix[j] == "E" else [a and b for a, b in zip(lo, hi)]
    return vals[0]


@dataclass(frozen=True)
class QbfOutcome:
    """Arthur's verdict.  ``value`` is the truth value of the input formula when accepted."""

    accepted: bool
    value: bool | None
    p: int
    negated: bool
    prime_exp: int
    prime_failure_bound: float
    eval_error_bound: float
    coins_used: int
    table: tuple | None = None
    reason: str | None = None
    detail: str = ""
    transcript: Transcript | None = dc_field(default=None, compare=False)


def _setup(phi: QuantifiedFormula, params: QbfParams):
    if phi.n < 1:
        raise UsageError("QBF needs at least one variable")
    psi, negated = flip_if_needed(phi, params.delta)
    m = phi.matrix.m
    E = params.prime_interval_exp
    if E is None:
        E = default_prime_exp(phi.n, m)
    N = max(m, 1) << E
    if N >= PRIME_LIMIT:
        raise CapacityError(f"interval bound 2^{E} * {max(m, 1)} exceeds the 62-bit field limit")
    return psi, negated, E, N


def qbf_run(phi: QuantifiedFormula, params: QbfParams | None = None, rng=None, tamper=None) -> QbfOutcome:
    """The full exchange with an honest Merlin; ``tamper(proof) -> proof`` corrupts round 2."""
    params = params or QbfParams()
    rng = Coins(0) if rng is None else rng
    psi, negated, E, N = _setup(phi, params)
    L = suffix_length(phi.n, params.delta)
    k = phi.n - L
    K = 1 << k
    t = Transcript("qbf", {"n": phi.n, "suffix": L, "delta": str(params.delta), "prime_exp": E,
                           "interval": N, "negated": negated, "eps_exp": params.eps_exp},
                   getattr(rng, "seed", None))
    start_bits = rng.bits_used

    # round 1: Arthur's prime
    with phase("verifier"):
        p = sample_prime(N, rng, params.max_prime_tries)
    mark = t.record_coins(rng) if hasattr(rng, "draws") else 0
    t.send("verifier", "prime", p.to_bytes(8, "little"))

    # round 2: Merlin's proof for P' mod p on the Boolean prefix points
    C = suffix_arithmetize(psi, params.delta)
    points = boolean_points(k).tolist() if k else [[]]
    hdr = choose_params(C, K, p, params.eps_exp)
    proof = prove_eval(C, points, hdr)
    if tamper is not None:
        proof = tamper(proof)
    t.send("prover", "poly", serialize_proof(proof))

    # round 3: Arthur's check and the prefix fold
    out = _check(C, points, proof, p, rng)
    if hasattr(rng, "draws"):
        t.record_coins(rng, mark)
    return _finish(t, psi, negated, p, E, N, K, hdr.error_bound, out, rng.bits_used - start_bits, params.delta)


def _check(C, points, proof: Proof, p: int, rng):
    # Merlin must work modulo Arthur's prime, not one of his choosing
    if proof.params.q != p:
        return _reject(MALFORMED, f"proof is over F_{proof.params.q}, Arthur chose p = {p}")
    return verify_eval(C, points, proof, rng)


def _finish(t, psi, negated, p, E, N, K, eval_bound, out, coins, delta) -> QbfOutcome:
    fail = prime_failure_bound(K, suffix_log_bound(psi, delta), N)
    common = dict(p=p, negated=negated, prime_exp=E, prime_failure_bound=fail,
                  eval_error_bound=eval_bound, coins_used=coins, transcript=t)
    t.decision = out.accepted
    if not out.accepted:
        t.send("verifier", "decision", b"\x00")
        return QbfOutcome(False, None, reason=out.reason, detail=out.detail, **common)
    with phase("verifier"):
        k = psi.n - suffix_length(psi.n, delta)
        truth = fold_prefix(psi.prefix[:k], [v != 0 for v in out.values])
        tally("add", max(K - 1, 0))
    value = (not truth) if negated else truth
    t.params["value"] = value
    t.send("verifier", "decision", b"\x01")
    t.send("verifier", "values", bytes([int(value)]))
    return QbfOutcome(True, value, table=out.values, **common)


def qbf_decide(phi: QuantifiedFormula, params: QbfParams | None = None, rng=None) -> bool:
    """Truth value of phi, certified; raises ProtocolError if Arthur rejects."""
    out = qbf_run(phi, params, rng)
    if not out.accepted:
        raise ProtocolError(f"QBF proof rejected ({out.reason}): {out.detail}")
    return out.value


def replay_qbf(phi: QuantifiedFormula, t: Transcript, params: QbfParams | None = None) -> QbfOutcome:
    """Re-check a recorded exchange with its recorded prime, proof and coins."""
    params = params or QbfParams(delta=Fraction(t.params.get("delta", DEFAULT_DELTA)),
                                 prime_interval_exp=t.params.get("prime_exp"),
                                 eps_exp=t.params.get("eps_exp", DEFAULT_EPS_EXP))
    psi, negated, E, N = _setup(phi, params)
    k = phi.n - suffix_length(phi.n, params.delta)
    K = 1 << k
    coins = ReplayCoins.from_transcript(t)
    primes, polys = t.messages("prime"), t.messages("poly")
    if len(primes) != 1 or len(polys) != 1:
        raise UsageError("QBF transcript needs exactly one prime and one proof")
    with phase("verifier"):
        p = sample_prime(N, coins, params.max_prime_tries)
    if p != int.from_bytes(primes[0], "little"):
        raise ProtocolError("recorded prime does not follow from the recorded coins")
    try:
        proof: Proof = parse_proof(polys[0])
    except ProofFormatError as exc:
        raise UsageError(f"recorded proof is malformed: {exc}") from exc
    C = suffix_arithmetize(psi, params.delta)
    points = boolean_points(k).tolist() if k else [[]]
    out = _check(C, points, proof, p, coins)
    replayed = Transcript("qbf", dict(t.params), t.seed)
    return _finish(replayed, psi, negated, p, E, N, K, proof.params.error_bound, out, coins.bits_used, params.delta)
