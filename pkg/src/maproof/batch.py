"""The batch-evaluation proof run on many small instances in lockstep.

Every instance still gets its own proof, its own coins and its own
checks; the instances merely share a field and the point count K, so
their circuits can be packed and each protocol step done as one array
operation across all of them.  Results match :func:`prove_eval` and
:func:`verify_eval` instance by instance.
"""

from __future__ import annotations

import functools
from collections import defaultdict

import numpy as np

from . import poly as P
from .circuit import Circuit, PackedCircuits
from .errors import UsageError
from .field import build_extension
from .opcount import phase, tally
from .protocol import (MALFORMED, UNSOUND, EvalOutput, Proof, ProtocolParams, _checked_irreducible, _draw,
                       _reject, alpha_tree, canonical_array, choose_params, extension_for, points_array)

# instances handled per packed chunk
CHUNK = 1024
# dense per-instance steps below are meant for small K and d*(K-1)
MAX_K = 64
MAX_COEFFS = 512


def _lagrange(F, tree: P.SubproductTree) -> np.ndarray:
    """Coefficients of the Lagrange basis over the tree's points, shape (K, K, l)."""
    eye = np.zeros((tree.K, tree.K, F.ell), dtype=F.dtype)
    eye[np.arange(tree.K), np.arange(tree.K), 0] = 1
    return tree.interpolate(eye)


def _horner_rows(F, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Row b of coeffs (B, N, l) evaluated at x[b] (shape (B, l) or (B, M, l))."""
    extra = x.ndim - 2
    acc = np.zeros_like(x)
    # base-field points multiply by scaling
    step = (lambda y: (y * x[..., :1]) % F.q) if not x[..., 1:].any() else (lambda y: F.vmul(y, x))
    for t in range(coeffs.shape[1] - 1, -1, -1):
        c = coeffs[:, t].reshape((coeffs.shape[0],) + (1,) * extra + (F.ell,))
        acc = F.vadd(step(acc), c)
    steps = max(coeffs.shape[1] - 1, 0) * int(np.prod(x.shape[:-1]))
    tally("mul", steps)
    tally("add", steps)
    return acc


def _check_shared(params: list[ProtocolParams]) -> ProtocolParams:
    first = params[0]
    for p in params:
        if (p.q, p.ell, p.K, p.n) != (first.q, first.ell, first.K, first.n):
            raise UsageError("batched instances must share q, l, K and n")
    if first.K > MAX_K or max(p.n_coeffs for p in params) > MAX_COEFFS:
        raise UsageError(f"batched proofs are limited to K <= {MAX_K} and {MAX_COEFFS} coefficients")
    return first


def prove_eval_many(circuits: list[Circuit], points, params: list[ProtocolParams]) -> list[Proof]:
    """Honest proofs for circuit b at points[b] (shape (B, K, n)); Q by interpolation at shared betas."""
    if not circuits:
        return []
    hdr = _check_shared(params)
    with phase("prover"):
        F = build_extension(hdr.q, hdr.ell)
        N, K = max(p.n_coeffs for p in params), hdr.K
        pts = np.asarray(points, dtype=np.int64).reshape(len(circuits), K, hdr.n) % hdr.q
        lag = _lagrange_cached(F, K)
        if F.dtype is not object and not lag[..., 1:].any():
            return _prove_base(F, circuits, pts, params, lag[..., 0], N)
        btree = P.SubproductTree(F, canonical_array(F, K, N))
        at_beta = btree.evaluate(lag)  # L_i(beta_t), (K, N, l)
        modulus = tuple(F.modulus)
        out = []
        for s in range(0, len(circuits), CHUNK):
            part = circuits[s:s + CHUNK]
            X = _spread_shared(F, pts[s:s + CHUNK], at_beta)  # (B, N, n, l)
            vals = PackedCircuits(part, F.q).evaluate(F, X)
            Q = btree.interpolate(vals)  # (B, N, l)
            for b, prm in enumerate(params[s:s + CHUNK]):
                out.append(Proof(prm, modulus, tuple(F.from_array(Q[b, :prm.n_coeffs]))))
        return out


def _prove_base(F, circuits, pts, params, lag, N) -> list[Proof]:
    """Every Psi lies in F_q[x], hence so does Q: run the circuits over F_q[x]."""
    q = F.q
    modulus = tuple(F.modulus)
    out = []
    for s in range(0, len(circuits), CHUNK):
        part = pts[s:s + CHUNK]
        psi = np.zeros((len(part), part.shape[2], lag.shape[1]), dtype=np.int64)  # (B, n, K)
        for i in range(part.shape[1]):
            psi = (psi + part[:, i, :, None] * lag[i][None, None, :]) % q
        tally("mul", psi.size * part.shape[1])
        Q = PackedCircuits(circuits[s:s + CHUNK], q).evaluate_base_polys(q, psi, N)
        for b, prm in enumerate(params[s:s + CHUNK]):
            row = [(int(c),) + (0,) * (F.ell - 1) for c in Q[b, :prm.n_coeffs].tolist()]
            out.append(Proof(prm, modulus, tuple(row)))
    return out


def _spread_shared(F, pts: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """X[b, t, j] = sum_i pts[b, i, j] * basis[i, t] for basis (K, M, l); result (B, M, n, l)."""
    q = F.q
    out = None
    for i in range(pts.shape[1]):
        term = pts[:, i, None, :, None].astype(F.dtype) * basis[i][None, :, None, :]
        out = term % q if out is None else (out + term) % q
    tally("mul", out.size // F.ell * pts.shape[1])
    return out


def _spread_rows(F, pts: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """X[b, j] = sum_i pts[b, i, j] * basis[b, i] for basis (B, K, l); result (B, n, l)."""
    q = F.q
    out = np.zeros((pts.shape[0], pts.shape[2], F.ell), dtype=F.dtype)
    for i in range(pts.shape[1]):
        out = (out + pts[:, i, :, None].astype(F.dtype) * basis[:, i, None, :]) % q
    tally("mul", out.size // F.ell * pts.shape[1])
    return out


def _header_check(C: Circuit, pts: np.ndarray, proof: Proof):
    """Per-instance structural checks of :func:`verify_eval`; a rejection or the coefficient array."""
    hdr = proof.params
    try:
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
    try:
        coeffs = proof.coeff_array(F)
    except (TypeError, ValueError):
        return _reject(MALFORMED, "coefficients are not l-tuples")
    N = mine.n_coeffs
    if len(coeffs) > N and (coeffs[N:] != 0).any():
        return _reject(MALFORMED, f"Q has degree {len(P.trim(coeffs)) - 1} > d*(K-1) = {N - 1}")
    if len(coeffs) > N:
        return _reject(MALFORMED, f"{len(coeffs)} coefficients, at most {N} allowed")
    if coeffs.size and ((coeffs < 0).any() or (coeffs >= hdr.q).any()):
        return _reject(MALFORMED, "coefficient outside [0, q)")
    return F, coeffs


def verify_eval_many(circuits: list[Circuit], points, proofs: list[Proof], rngs) -> list[EvalOutput]:
    """:func:`verify_eval` for every instance; instance b draws its coin from ``rngs[b]``."""
    B = len(circuits)
    results: list[EvalOutput | None] = [None] * B
    with phase("verifier"):
        groups = defaultdict(list)
        arrays = {}
        for b in range(B):
            pts = points_array(points[b], proofs[b].params.q)
            got = _header_check(circuits[b], pts, proofs[b])
            if isinstance(got, EvalOutput):
                results[b] = got
                continue
            F, coeffs = got
            arrays[b] = (pts, coeffs)
            groups[(F, len(pts), pts.shape[1])].append(b)
        for (F, K, n), members in groups.items():
            if K > MAX_K:
                raise UsageError(f"batched verification is limited to K <= {MAX_K}")
            for s in range(0, len(members), CHUNK):
                _verify_group(F, K, n, members[s:s + CHUNK], circuits, arrays, rngs, results)
    return results


def _verify_group(F, K, n, members, circuits, arrays, rngs, results):
    G = len(members)
    N = max(max(len(arrays[b][1]) for b in members), 1)
    coeffs = np.zeros((G, N, F.ell), dtype=F.dtype)
    pts = np.zeros((G, K, n), dtype=np.int64)
    for g, b in enumerate(members):
        c = arrays[b][1]
        coeffs[g, : len(c)] = c
        pts[g] = arrays[b][0].astype(np.int64)
    draws = [_draw(F, rngs[b]) for b in members]
    R = F.to_array([r for r, _ in draws])  # (G, l)
    lhs = _horner_rows(F, coeffs, R)

    tree = alpha_tree(F, K)
    alpha = tree.points
    L = _basis_at(F, tree, R, draws, K)
    psi_r = _spread_rows(F, pts, L)  # (G, n, l)
    rhs = PackedCircuits([circuits[b] for b in members], F.q).evaluate(F, psi_r[:, None])[:, 0]

    vals = _horner_rows(F, coeffs, np.broadcast_to(alpha, (G, K, F.ell)).copy())
    ok = (lhs == rhs).all(axis=1)
    off_base = (vals[..., 1:] != 0).any(axis=-1) if F.ell > 1 else np.zeros((G, K), dtype=bool)
    for g, b in enumerate(members):
        r, used = draws[g]
        if not ok[g]:
            results[b] = _reject(UNSOUND, "Q(r) differs from C(Psi(r))", used, r)
        elif off_base[g].any():
            bad = int(np.flatnonzero(off_base[g])[0])
            results[b] = _reject(UNSOUND, f"Q(alpha_{bad}) is not in the base field", used, r)
        else:
            results[b] = EvalOutput(tuple(int(x) for x in vals[g, :, 0].tolist()), True, used, None, "", r)


def _basis_at(F, tree, R, draws, K):
    """Lagrange basis values L_i(r) for each row's coin, shape (G, K, l)."""
    G = len(R)
    lag = _lagrange_cached(F, K)
    if not lag[..., 1:].any():
        # base coefficients: powers of r and scalings only, no inversions
        pows = [np.zeros_like(R), R]
        pows[0][:, 0] = 1
        for _ in range(2, K):
            pows.append(F.vmul(pows[-1], R))
        tally("mul", G * max(K - 2, 0))
        L = np.zeros((G, K, F.ell), dtype=F.dtype)
        for k in range(K):
            L = (L + lag[None, :, k, :1] * pows[k][:, None, :]) % F.q
        tally("mul", G * K * K)
        return L
    alpha = tree.points
    hit = np.array([F.index(r) < K for r, _ in draws])
    diff = F.vsub(R[:, None, :], alpha[None])
    diff[hit] = 0
    diff[hit, :, 0] = 1
    m = diff[:, 0]
    for i in range(1, K):
        m = F.vmul(m, diff[:, i])
    L = F.vmul(F.vmul(F.vinv(diff), tree.weights[None]), m[:, None])
    for g in np.flatnonzero(hit):
        L[g] = 0
        L[g, F.index(draws[g][0]), 0] = 1
    tally("inv", G * K)
    tally("mul", 3 * G * K)
    return L


@functools.lru_cache(maxsize=64)
def _lagrange_cached(F, K: int) -> np.ndarray:
    return _lagrange(F, alpha_tree(F, K))
