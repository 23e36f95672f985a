"""Batch evaluation proofs for low-degree circuits, and univariate identity testing.

Merlin wants to convince Arthur of ``C(a_1), ..., C(a_K)``.  Both sides
fix the extension field F = F_{q^l} with l minimal such that
q^l > d*K*2^t, put the points on the canonical abscissae
alpha_i = canonical_element(i) through interpolating polynomials
Psi_1..Psi_n of degree < K, and consider R(x) = C(Psi_1(x), ..., Psi_n(x)),
of degree at most d*(K-1).

Merlin sends the coefficients of Q (claimed equal to R).  Arthur draws one
uniform r in F, checks Q(r) == C(Psi(r)), and then reads the outputs off as
Q(alpha_i).  A wrong Q agrees with R on at most d*(K-1) points, so a bad
proof survives with probability below d*K/q^l < 2^-t.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import poly as P
from .circuit import Circuit, evaluate_raw, evaluate_batch, evaluate_symbolic, syntactic_degree
from .errors import CapacityError, UsageError
from .field import ExtensionField, PrimeField, build_extension, is_irreducible, is_prime
from .opcount import phase, recorded, replay, tally

# Largest extension degree the implementation will instantiate.
MAX_EXTENSION_DEGREE = 64

MALFORMED = "malformed"
UNSOUND = "unsound"


@dataclass(frozen=True)
class ProtocolParams:
    q: int
    ell: int
    d: int
    K: int
    n: int
    eps_exp: int

    @property
    def n_coeffs(self) -> int:
        """Length of the honest proof vector, d*(K-1)+1."""
        return self.d * (self.K - 1) + 1

    @property
    def error_bound(self) -> float:
        """d*K/q^l, the soundness error the parameters guarantee."""
        return max(self.d, 1) * self.K / self.q**self.ell

    def as_dict(self) -> dict:
        return {"q": self.q, "ell": self.ell, "d": self.d, "K": self.K, "n": self.n, "eps_exp": self.eps_exp}


@dataclass(frozen=True)
class Proof:
    """Merlin's message: parameters, field modulus and the coefficients of Q.

    ``coeffs`` keeps the full-length vector the prover emitted (trailing
    zeros included); :attr:`q_poly` is the trimmed polynomial.
    """

    params: ProtocolParams
    modulus: tuple
    coeffs: tuple

    @property
    def field(self) -> ExtensionField:
        return extension_for(self.params.q, tuple(self.modulus))

    @property
    def q_poly(self) -> P.DensePoly:
        F = self.field
        return P.DensePoly.from_array(F, self.coeff_array(F))

    def coeff_array(self, F) -> np.ndarray:
        return np.array(self.coeffs, dtype=F.dtype).reshape(-1, F.ell)


@dataclass(frozen=True)
class EvalOutput:
    """Verifier verdict: ``values`` is set exactly when ``accepted``."""

    values: tuple | None
    accepted: bool
    coins_used: int
    reason: str | None = None
    detail: str = ""
    r: tuple | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.accepted != (self.values is not None):
            raise UsageError("values must be present iff the proof is accepted")


def _reject(reason: str, detail: str, coins: int = 0, r=None) -> EvalOutput:
    return EvalOutput(None, False, coins, reason, detail, r)


@functools.lru_cache(maxsize=256)
def _checked_irreducible(q: int, modulus: tuple) -> bool:
    return is_irreducible(list(modulus), q)


@functools.lru_cache(maxsize=256)
def extension_for(q: int, modulus: tuple) -> ExtensionField:
    """Field for a (trusted or already checked) modulus, sharing the canonical instance."""
    ell = len(modulus) - 1
    canon = build_extension(q, ell)
    if tuple(canon.modulus) == tuple(modulus):
        return canon
    return ExtensionField(PrimeField(q), list(modulus), check=False)


def extension_degree(q: int, bound: int) -> int:
    """Smallest l with q^l > bound."""
    ell, size = 1, q
    while size <= bound:
        ell += 1
        size *= q
    return ell


def choose_params(C: Circuit, K: int, q: int, eps_exp: int) -> ProtocolParams:
    """d = syntactic degree of C; l minimal with q^l > max(d,1)*K*2^eps_exp."""
    if K < 1:
        raise UsageError(f"need K >= 1 points, got {K}")
    if eps_exp < 0:
        raise UsageError("error exponent must be >= 0")
    if not (2 <= q < 2**62 and is_prime(q)):
        raise UsageError(f"base modulus {q} is not a prime below 2^62")
    d = syntactic_degree(C)
    ell = extension_degree(q, (max(d, 1) * K) << eps_exp)
    if ell > MAX_EXTENSION_DEGREE:
        raise CapacityError(f"extension degree {ell} required, limit is {MAX_EXTENSION_DEGREE}")
    return ProtocolParams(q, ell, d, K, C.n_inputs, eps_exp)


def canonical_array(F, start: int, count: int) -> np.ndarray:
    """Canonical elements start, start+1, ... (mod |F|) as an array (count, l)."""
    q, ell = F.q, F.ell
    out = np.zeros((count, ell), dtype=F.dtype)
    if F.order < 2**62:
        idx = (np.arange(count, dtype=np.int64) + start % F.order) % F.order
        for j in range(ell):
            out[:, j] = idx % q
            idx //= q
        return out
    for i in range(count):
        v = (start + i) % F.order
        for j in range(ell):
            v, out[i, j] = divmod(v, q)
    return out


def points_array(points, q: int, n: int | None = None) -> np.ndarray:
    """K x n integer matrix of base-field values (reduced mod q)."""
    rows = [[int(v) for v in row] for row in points]
    if not rows:
        raise UsageError("need at least one point")
    width = len(rows[0]) if n is None else n
    for i, row in enumerate(rows):
        if len(row) != width:
            raise UsageError(f"point {i} has {len(row)} coordinates, expected {width}")
    dtype = np.int64 if q < 2**62 and all(abs(v) < 2**62 for row in rows for v in row) else object
    arr = np.array(rows, dtype=dtype).reshape(len(rows), width)
    return arr % q


@functools.lru_cache(maxsize=32)
def _alpha_setup(F, K: int):
    def build():
        tree = P.SubproductTree(F, canonical_array(F, 0, K))
        tree.weights  # noqa: B018 - force the cached inverse weights
        return tree
    return recorded(build)


def alpha_tree(F, K: int) -> P.SubproductTree:
    """Subproduct tree over alpha_0..alpha_(K-1).

    It depends only on (F, K), so it is built once and reused; every use
    is still charged the full construction cost in the operation counts.
    """
    tree, cost = _alpha_setup(F, K)
    replay(cost)
    return tree


def _embed_base(F, ints: np.ndarray) -> np.ndarray:
    out = np.zeros(ints.shape + (F.ell,), dtype=F.dtype)
    out[..., 0] = ints
    return out


def _psi_arrays(F, pts: np.ndarray, tree: P.SubproductTree) -> np.ndarray:
    """Coefficients of Psi_1..Psi_n, shape (n, K, l)."""
    if pts.shape[1] == 0:
        return np.zeros((0, len(pts), F.ell), dtype=F.dtype)
    return tree.interpolate(_embed_base(F, pts.T.astype(F.dtype)))


def build_psi(points, F: ExtensionField) -> list[P.DensePoly]:
    """Psi_j of degree < K with Psi_j(alpha_i) = a_i[j] at alpha_i = canonical_element(i)."""
    pts = points_array(points, F.q)
    K = len(pts)
    if K > F.order:
        raise CapacityError(f"{K} points need a field with at least {K} elements, have {F.order}")
    tree = alpha_tree(F, K)
    return [P.DensePoly.from_array(F, a) for a in _psi_arrays(F, pts, tree)]


def _psi_is_base(psi: np.ndarray) -> bool:
    return psi.shape[-1] == 1 or not psi[..., 1:].any()


def prove_eval(C: Circuit, points, params: ProtocolParams, strategy: str = "auto",
               field: ExtensionField | None = None) -> Proof:
    """Honest Merlin: Q = C(Psi_1, ..., Psi_n), padded to d*(K-1)+1 coefficients.

    ``strategy`` "interpolate" evaluates C at d*(K-1)+1 canonical points
    beyond the alpha_i and interpolates; "symbolic" runs C over polynomial
    wires.  Both give the same Q; "auto" picks by instance shape.
    """
    with phase("prover"):
        F = field or build_extension(params.q, params.ell)
        pts = points_array(points, params.q, params.n)
        K = len(pts)
        if K != params.K or C.n_inputs != params.n:
            raise UsageError("points or circuit do not match the parameters")
        if K > F.order:
            raise CapacityError(f"{K} points exceed the field size {F.order}")
        N = params.n_coeffs
        psi = _psi_arrays(F, pts, alpha_tree(F, K))
        if strategy == "auto":
            # polynomial wires win unless the circuit is large next to deg Q
            strategy = "interpolate" if C.size > N and F.ell <= 4 else "symbolic"
        if strategy == "symbolic":
            Q = _symbolic_q(C, F, psi)
        elif strategy == "interpolate":
            Q = _interpolated_q(C, F, psi, K, N)
        else:
            raise UsageError(f"unknown prover strategy {strategy!r}")
        full = P.zeros(F, N)
        full[: len(Q)] = Q[:N]
        return Proof(params, tuple(F.modulus), tuple(F.from_array(full)))


def _symbolic_q(C, F, psi) -> np.ndarray:
    if F.ell > 1 and _psi_is_base(psi):
        # every Psi lies in F_q[x], hence so does Q: compute there and embed
        base = build_extension(F.q, 1)
        Q = evaluate_symbolic(C, base, [p[:, :1].astype(base.dtype) for p in psi])
        return _embed_base(F, Q[:, 0].astype(F.dtype))
    return evaluate_symbolic(C, F, list(psi))


def _interpolated_q(C, F, psi, K, N) -> np.ndarray:
    if F.ell > 1 and _psi_is_base(psi) and K + N <= F.q:
        # Psi and every beta lie in F_q, so the whole computation does too
        base = build_extension(F.q, 1)
        Q = _interpolated_q(C, base, psi[..., :1].astype(base.dtype), K, N)
        return _embed_base(F, Q[:, 0].astype(F.dtype))
    # continues the canonical order past the alpha_i, wrapping mod |F| (N < |F|)
    beta = canonical_array(F, K, N)
    tree = P.SubproductTree(F, beta)
    X = tree.evaluate(psi)  # (n, N, l)
    vals = evaluate_batch(C, F, np.moveaxis(X, 0, 1))
    return tree.interpolate(vals)


def _draw(F, rng):
    bits = F.bits_per_element
    used = 0
    while True:
        v = rng.getrandbits(bits)
        used += bits
        if v < F.order:
            return F.element(v), used


def verify_eval(C: Circuit, points, proof: Proof, rng, strategy: str = "auto") -> EvalOutput:
    """Arthur: recompute parameters, spot-check Q at one random r, decode Q(alpha_i)."""
    with phase("verifier"):
        hdr = proof.params
        try:
            pts = points_array(points, hdr.q)
            mine = choose_params(C, len(pts), hdr.q, hdr.eps_exp)
        except UsageError as exc:
            return _reject(MALFORMED, str(exc))
        if pts.shape[1] != C.n_inputs:
            return _reject(MALFORMED, "point width does not match the circuit")
        if mine != hdr:
            return _reject(MALFORMED, f"header parameters {hdr.as_dict()} differ from recomputed {mine.as_dict()}")
        modulus = tuple(int(c) for c in proof.modulus)
        if len(modulus) != mine.ell + 1 or modulus[-1] != 1 or any(not 0 <= c < hdr.q for c in modulus):
            return _reject(MALFORMED, "modulus is not a monic polynomial of degree l over F_q")
        if not _checked_irreducible(hdr.q, modulus):
            return _reject(MALFORMED, "modulus is reducible")
        F = extension_for(hdr.q, modulus)
        N = mine.n_coeffs
        try:
            coeffs = proof.coeff_array(F)
        except (TypeError, ValueError):
            return _reject(MALFORMED, "coefficients are not l-tuples")
        if len(coeffs) > N and (coeffs[N:] != 0).any():
            return _reject(MALFORMED, f"Q has degree {len(P.trim(coeffs)) - 1} > d*(K-1) = {N - 1}")
        if len(coeffs) > N:
            return _reject(MALFORMED, f"{len(coeffs)} coefficients, at most {N} allowed")
        if coeffs.size and ((coeffs < 0).any() or (coeffs >= hdr.q).any()):
            return _reject(MALFORMED, "coefficient outside [0, q)")
        K = mine.K

        r, used = _draw(F, rng)
        lhs = P.horner(F, coeffs, r)
        tree = alpha_tree(F, K)
        v = _psi_at(F, pts, tree, r)
        rhs = evaluate_raw(C, F, F.from_array(v))
        if lhs != rhs:
            return _reject(UNSOUND, "Q(r) differs from C(Psi(r))", used, r)

        vals = _decode(F, coeffs, tree)
        if F.ell > 1 and (vals[:, 1:] != 0).any():
            bad = int(np.flatnonzero((vals[:, 1:] != 0).any(axis=1))[0])
            return _reject(UNSOUND, f"Q(alpha_{bad}) is not in the base field", used, r)
        return EvalOutput(tuple(int(x) for x in vals[:, 0].tolist()), True, used, None, "", r)


def _decode(F, coeffs: np.ndarray, tree: P.SubproductTree) -> np.ndarray:
    """Q(alpha_i) for all i via the alpha tree (Q reduced mod its root first)."""
    if not len(coeffs):
        return P.zeros(F, tree.K)
    if len(coeffs) <= P.SMALL_EVAL:
        return P.evaluate_at(F, coeffs, tree.points)
    return tree.evaluate(coeffs)


def _psi_at(F, pts: np.ndarray, tree: P.SubproductTree, r) -> np.ndarray:
    """Psi_j(r) for all j, shape (n, l), from the Lagrange form at r.

    Psi_j(r) = m(r) * sum_i a_i[j] * w_i / (r - alpha_i) with m the root of
    the alpha tree and w_i = 1/m'(alpha_i) its cached weights.
    """
    K, n = pts.shape
    idx = F.index(r)
    if idx < K:
        return _embed_base(F, pts[idx].astype(F.dtype))
    diff = F.vsub(F.to_array([r]), tree.points)
    m = _vprod(F, diff)
    c = F.vmul(F.vmul(F.vinv(diff), tree.weights), m[None])
    tally("inv", K)
    tally("mul", 3 * K + n * K)
    tally("add", K + n * K)
    return P.base_matmul(F, pts.T, c)


def _vprod(F, a: np.ndarray) -> np.ndarray:
    """Product of the rows of a (K, l) batch by pairwise halving."""
    while len(a) > 1:
        half = len(a) // 2
        head = F.vmul(a[:half], a[half:2 * half])
        a = np.concatenate([head, a[2 * half:]]) if len(a) % 2 else head
    return a[0]


# -- univariate identity testing ---------------------------------------------

def _univariate(C: Circuit) -> None:
    if C.n_inputs > 1:
        raise UsageError(f"identity testing needs univariate circuits, got {C.n_inputs} inputs")


def _as_univariate(C: Circuit) -> Circuit:
    if C.n_inputs == 1:
        return C
    return Circuit(1, C.gates, C.output)


def upit_field(C1: Circuit, C2: Circuit, q: int, eps_exp: int = 0) -> ExtensionField:
    """F_{q^l} with q^l > N * 2^eps_exp for the degree bound N."""
    N = max(syntactic_degree(C1), syntactic_degree(C2), 1)
    ell = extension_degree(q, N << eps_exp)
    if ell > MAX_EXTENSION_DEGREE:
        raise CapacityError(f"extension degree {ell} required, limit is {MAX_EXTENSION_DEGREE}")
    return build_extension(q, ell)


def upit_random(C1: Circuit, C2: Circuit, rng, q: int = 101, eps_exp: int = 0) -> bool:
    """Equal at one uniform r; false "equal" has probability at most N/|F|."""
    _univariate(C1)
    _univariate(C2)
    F = upit_field(C1, C2, q, eps_exp)
    r, _ = _draw(F, rng)
    a = evaluate_raw(_as_univariate(C1), F, [r])
    b = evaluate_raw(_as_univariate(C2), F, [r])
    return a == b


def upit_deterministic(C1: Circuit, C2: Circuit, q: int = 101) -> bool:
    """Compare coefficient vectors interpolated from N+1 shared canonical points."""
    _univariate(C1)
    _univariate(C2)
    F = upit_field(C1, C2, q)
    N = max(syntactic_degree(C1), syntactic_degree(C2), 1)
    pts = canonical_array(F, 0, N + 1)
    X = pts[:, None, :]
    tree = P.SubproductTree(F, pts)
    c1 = tree.interpolate(evaluate_batch(_as_univariate(C1), F, X))
    c2 = tree.interpolate(evaluate_batch(_as_univariate(C2), F, X))
    return bool(np.array_equal(c1, c2))
