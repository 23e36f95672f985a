"""Dense univariate polynomials over a field.

Internally a polynomial is a numpy array of shape ``(L, l)``: row i holds
the coefficient of x^i in the field's array form (see :mod:`maproof.field`).
Long products use Kronecker substitution: both operands are packed into
one big integer (as bivariate polynomials in x and the field generator),
multiplied with GMP, and unpacked.  Short products and the lower levels of
subproduct trees use schoolbook arithmetic vectorized across tree nodes.

:class:`DensePoly` is the immutable public wrapper.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass

import gmpy2
import numpy as np

from .errors import DomainError, UsageError
from .field import FieldElement, _Field
from .opcount import tally

NEG_INF = float("-inf")

# Operands with at most this many coefficients go through schoolbook products.
SCHOOLBOOK_CROSSOVER = 64
# Tree levels whose nodes have at most this many coefficients are processed
# as one stacked numpy batch instead of node by node.
BATCH_NODE_LIMIT = 64


def _crossover(F) -> int:
    # extension products cost ~l^2 per coefficient pair, so switch earlier
    return max(2, SCHOOLBOOK_CROSSOVER // (F.ell * F.ell))


def zeros(F, n: int, lead=()) -> np.ndarray:
    return np.zeros(tuple(lead) + (n, F.ell), dtype=F.dtype)


def trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero((a != 0).any(axis=-1))
    return a[: nz[-1] + 1] if len(nz) else a[:0]


def _fast_cost(n: int) -> int:
    # operation count charged for an FFT-class product of total size n
    return n * max(1, (n - 1).bit_length())


def add(F, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] = F.vadd(out[: len(b)], b)
    tally("add", len(b))
    return out


def sub(F, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    out = zeros(F, n)
    out[: len(a)] = a
    out[: len(b)] = F.vsub(out[: len(b)], b)
    tally("add", len(b))
    return out


def schoolbook_mul(F, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product via the O(La*Lb) convolution, over any leading batch axes."""
    La, Lb = a.shape[-2], b.shape[-2]
    if La == 0 or Lb == 0:
        return np.zeros(np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (0, F.ell), dtype=F.dtype)
    if La > Lb:
        a, b, La, Lb = b, a, Lb, La
    lead = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    out = np.zeros(lead + (La + Lb - 1, F.ell), dtype=F.dtype)
    for i in range(La):
        seg = out[..., i:i + Lb, :]
        out[..., i:i + Lb, :] = F.vadd(seg, F.vmul(a[..., i:i + 1, :], b))
    batch = int(np.prod(lead)) if lead else 1
    tally("mul", batch * La * Lb)
    tally("add", batch * La * Lb)
    return out


def _fft_shape(F, La: int, Lb: int):
    """FFT grid for an exact float64 product of (La, l) by (Lb, l) arrays, or None."""
    if F.dtype is object:
        return None
    s0 = 1 << (La + Lb - 2).bit_length()
    s1 = 1 << (2 * F.ell - 2).bit_length()
    bound = min(La, Lb) * F.ell * (F.q - 1) ** 2
    # keep the largest convolution value times the transform size well inside 2^53
    if bound * s0 * s1 > 2**44:
        return None
    return s0, s1


def batched_mul(F, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Products of stacked polynomials (..., La, l) x (..., Lb, l) with broadcasting.

    Uses one 2-D real FFT over (power of x, power of the generator) when
    float64 is provably exact for the sizes involved, else :func:`schoolbook_mul`.
    """
    La, Lb = X.shape[-2], Y.shape[-2]
    shape = _fft_shape(F, La, Lb) if min(La, Lb) > 1 else None
    if shape is None:
        return schoolbook_mul(F, X, Y)
    fx = np.fft.rfft2(X, shape)
    fy = np.fft.rfft2(Y, shape)
    p = np.fft.irfft2(fx * fy, shape)[..., : La + Lb - 1, : 2 * F.ell - 1]
    out = F.reduce_rows((np.rint(p) % F.q).astype(np.int64))
    lead = np.broadcast_shapes(X.shape[:-2], Y.shape[:-2])
    batch = int(np.prod(lead)) if lead else 1
    tally("mul", batch * _fast_cost(La + Lb))
    tally("add", batch * _fast_cost(La + Lb))
    return out


def kronecker_mul(F, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two (L, l) coefficient arrays through one big-integer product.

    Coefficient (i, u) of each operand (power x^i, generator power u) goes
    to slot i*(2l-1) + u; slots are whole bytes, wide enough that no
    convolution sum spills into its neighbour.
    """
    La, Lb = len(a), len(b)
    if La == 0 or Lb == 0:
        return zeros(F, 0)
    q, ell = F.q, F.ell
    width = 2 * ell - 1
    bound = min(La, Lb) * ell * (q - 1) ** 2
    nbytes = max(1, (bound.bit_length() + 7) // 8)
    if nbytes > 8:
        nbytes = (nbytes + 7) // 8 * 8

    def pack(x):
        if nbytes <= 8:
            z = np.zeros((len(x), width, 8), dtype=np.uint8)
            z[:, :ell] = np.ascontiguousarray(x, dtype="<u8").view(np.uint8).reshape(len(x), ell, 8)
            z = z[..., :nbytes]
        else:
            z = np.zeros((len(x), width, nbytes // 8), dtype="<u8")
            z[:, :ell, 0] = x
        return gmpy2.mpz.from_bytes(np.ascontiguousarray(z).tobytes(), "little")

    prod = pack(a) * pack(b)
    Lc = La + Lb - 1
    buf = prod.to_bytes(Lc * width * nbytes, "little")
    if nbytes <= 8:
        raw = np.zeros((Lc, width, 8), dtype=np.uint8)
        raw[..., :nbytes] = np.frombuffer(buf, dtype=np.uint8).reshape(Lc, width, nbytes)
        coef = raw.view("<u8")[..., 0] % np.uint64(q)
        coef = coef.astype(object) if F.dtype is object else coef.astype(np.int64)
    else:
        words = nbytes // 8
        raw = np.frombuffer(buf, dtype="<u8").reshape(Lc, width, words)
        if F.dtype is object:
            acc = raw[..., 0].astype(object)
            for j in range(1, words):
                acc = acc + (raw[..., j].astype(object) << (64 * j))
            coef = acc % q
        else:
            uq = np.uint64(q)
            acc = raw[..., 0] % uq
            for j in range(1, words):
                cj = np.uint64(pow(2, 64 * j, q))
                acc = (acc + (raw[..., j] % uq) * cj % uq) % uq
            coef = acc.astype(np.int64)
    tally("mul", _fast_cost(La + Lb))
    tally("add", _fast_cost(La + Lb))
    return F.reduce_rows(coef)


def mul(F, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if min(len(a), len(b)) <= _crossover(F):
        return schoolbook_mul(F, a, b)
    return kronecker_mul(F, a, b)


def mul_lead(F, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """:func:`mul` broadcasting over leading axes (looping when products are long)."""
    if a.ndim == 2 and b.ndim == 2:
        return mul(F, a, b)
    if min(a.shape[-2], b.shape[-2]) <= _crossover(F):
        return schoolbook_mul(F, a, b)
    if _fft_shape(F, a.shape[-2], b.shape[-2]) is not None:
        return batched_mul(F, a, b)
    lead = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    a = np.broadcast_to(a, lead + a.shape[-2:])
    b = np.broadcast_to(b, lead + b.shape[-2:])
    out = np.zeros(lead + (a.shape[-2] + b.shape[-2] - 1, F.ell), dtype=F.dtype)
    for idx in np.ndindex(*lead):
        out[idx] = kronecker_mul(F, a[idx], b[idx])
    return out


def inv_series(F, g: np.ndarray, k: int) -> np.ndarray:
    """h with g*h = 1 mod x^k, for g with constant term 1 (Newton iteration)."""
    h = zeros(F, 1)
    h[0, 0] = 1
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        gh = mul(F, g[:prec], h)[:prec]
        e = F.vneg(gh)
        e[0] = F.vadd(e[0], F.vconst(2))
        h = mul(F, h, e)[:prec]
    return h


def rem_monic(F, f: np.ndarray, m: np.ndarray, inv: np.ndarray | None = None) -> np.ndarray:
    """f mod m for monic m.  A dividend already shorter than m comes back as is,
    so callers see at most deg(m) rows.  ``inv`` may carry a precomputed
    inverse series of reversed m to at least len(f) - deg(m) terms."""
    D = len(m) - 1
    Lf = len(f)
    if Lf <= D:
        return f
    k = Lf - D
    if _rem_is_schoolbook(F, k, D):
        r = f.copy()
        low = m[:D]
        for t in range(Lf - 1, D - 1, -1):
            r[t - D:t] = F.vsub(r[t - D:t], F.vmul(r[t:t + 1], low))
        tally("mul", k * D)
        tally("add", k * D)
        return r[:D]
    if inv is None:
        inv = inv_series(F, m[::-1], k)
    qrev = mul(F, f[::-1][:k], inv[:k])[:k]
    quo = qrev[::-1]
    prod = mul(F, quo, m)[:D]
    return F.vsub(f[:D], prod)


def _rem_is_schoolbook(F, k: int, D: int) -> bool:
    return k <= _crossover(F) or D <= _crossover(F)


def _brem(F, R: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Batched remainders of R (..., Lr, l) modulo monic M (..., D+1, l)."""
    D = M.shape[-2] - 1
    Lr = R.shape[-2]
    lead = np.broadcast_shapes(R.shape[:-2], M.shape[:-2])
    if Lr <= D:
        return np.array(np.broadcast_to(R, lead + R.shape[-2:]))
    R = np.array(np.broadcast_to(R, lead + R.shape[-2:]))
    low = M[..., :D, :]
    for t in range(Lr - 1, D - 1, -1):
        R[..., t - D:t, :] = F.vsub(R[..., t - D:t, :], F.vmul(R[..., t:t + 1, :], low))
    batch = int(np.prod(lead)) if lead else 1
    tally("mul", batch * (Lr - D) * D)
    tally("add", batch * (Lr - D) * D)
    return R[..., :D, :]


def _pairwise(jobs, batched, single):
    """Apply an op to many (x, y) pairs, stacking same-shape small pairs."""
    out = [None] * len(jobs)
    groups = defaultdict(list)
    for idx, (x, y) in enumerate(jobs):
        groups[(x.shape, y.shape)].append(idx)
    for (sx, sy), idxs in groups.items():
        if len(idxs) > 1 and max(sx[-2], sy[-2]) <= BATCH_NODE_LIMIT:
            X = np.stack([jobs[i][0] for i in idxs])
            Y = np.stack([jobs[i][1] for i in idxs])
            if X.ndim > Y.ndim:
                # batched values with extra leading axes against plain tree nodes
                Y = Y.reshape(Y.shape[:1] + (1,) * (X.ndim - Y.ndim) + Y.shape[1:])
            Z = batched(X, Y)
            for j, i in enumerate(idxs):
                out[i] = Z[j]
        else:
            for i in idxs:
                out[i] = single(*jobs[i])
    return out


class SubproductTree:
    """Products of (x - a_i) over a balanced binary tree of the points.

    ``levels[0]`` holds the linear leaves; ``levels[h+1][i]`` is the
    product of ``levels[h][2i]`` and ``levels[h][2i+1]`` (an unpaired last
    node is carried up unchanged).
    """

    def __init__(self, F, points: np.ndarray):
        self.F = F
        points = np.asarray(points, dtype=F.dtype).reshape(-1, F.ell)
        self.K = K = len(points)
        if K == 0:
            raise UsageError("subproduct tree needs at least one point")
        self.points = points
        leaves = np.zeros((K, 2, F.ell), dtype=F.dtype)
        leaves[:, 0] = F.vneg(points)
        leaves[:, 1, 0] = 1
        level = list(leaves)
        self.levels = [level]
        while len(level) > 1:
            jobs = [(level[2 * i], level[2 * i + 1]) for i in range(len(level) // 2)]
            nxt = _pairwise(jobs, lambda X, Y: batched_mul(F, X, Y), lambda x, y: mul(F, x, y))
            if len(level) % 2:
                nxt.append(level[-1])
            self.levels.append(nxt)
            level = nxt
        self.root = level[0]

    @functools.cached_property
    def weights(self) -> np.ndarray:
        """1 / m'(a_i) for the root m = prod (x - a_i)."""
        F = self.F
        m = self.root
        idx = np.arange(1, len(m), dtype=F.dtype if F.dtype is not object else object)
        dm = (m[1:] * idx.reshape(-1, 1)) % F.q
        tally("mul", len(m) - 1)
        tally("inv", self.K)
        return F.vinv(self.evaluate(dm))

    def _descend(self, r: np.ndarray) -> list[np.ndarray]:
        F = self.F
        rems = [r]
        for h in range(len(self.levels) - 2, -1, -1):
            level = self.levels[h]
            parent = self.levels[h + 1]
            jobs, where, nxt = [], [], [None] * len(level)
            for j, m in enumerate(level):
                pr = rems[j // 2]
                if j // 2 < len(parent) and parent[j // 2] is m:
                    nxt[j] = pr
                else:
                    jobs.append((pr, m))
                    where.append(j)
            res = _pairwise(jobs, lambda R, M: _brem(F, R, M), lambda x, m: _lead_rem(F, x, m))
            for j, v in zip(where, res):
                nxt[j] = v
            rems = nxt
        return rems

    def evaluate(self, f: np.ndarray) -> np.ndarray:
        """Values of f at every point, shape (K, l); f may have leading axes."""
        F = self.F
        f = np.asarray(f)
        lead = f.shape[:-2]
        if f.shape[-2] == 0:
            return np.zeros(lead + (self.K, F.ell), dtype=F.dtype)
        r = _lead_rem(F, f, self.root)
        rems = self._descend(r)
        return np.stack([x[..., 0, :] for x in rems], axis=-2)

    def interpolate(self, values: np.ndarray) -> np.ndarray:
        """Coefficients of the unique degree < K polynomial through (a_i, values_i).

        ``values`` has shape (..., K, l); leading axes interpolate several
        value vectors over the same points at once.
        """
        F = self.F
        values = np.asarray(values, dtype=F.dtype)
        coef = F.vmul(values, self.weights)
        tally("mul", int(np.prod(values.shape[:-1])))
        level = [coef[..., i:i + 1, :] for i in range(self.K)]

        def bmul(X, Y):
            return batched_mul(F, X, Y)
        for h in range(len(self.levels) - 1):
            mods = self.levels[h]
            jobs_a, jobs_b, pos = [], [], []
            nxt = []
            for i in range(len(level) // 2):
                jobs_a.append((level[2 * i], mods[2 * i + 1]))
                jobs_b.append((level[2 * i + 1], mods[2 * i]))
            pa = _pairwise(jobs_a, bmul, lambda x, y: mul_lead(F, x, y))
            pb = _pairwise(jobs_b, bmul, lambda x, y: mul_lead(F, x, y))
            for x, y in zip(pa, pb):
                nxt.append(_lead_add(F, x, y))
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        out = level[0]
        width = self.K
        if out.shape[-2] < width:
            pad = np.zeros(out.shape[:-2] + (width - out.shape[-2], F.ell), dtype=F.dtype)
            out = np.concatenate([out, pad], axis=-2)
        return out[..., :width, :]


def _lead_rem(F, f, m):
    if f.ndim == 2:
        return rem_monic(F, f, m)
    D = len(m) - 1
    k = f.shape[-2] - D
    if k <= 0:
        return f
    # one inverse series serves every polynomial along the leading axes
    inv = None if _rem_is_schoolbook(F, k, D) else inv_series(F, m[::-1], k)
    lead = f.shape[:-2]
    out = np.zeros(lead + (D, F.ell), dtype=F.dtype)
    for idx in np.ndindex(*lead):
        out[idx] = rem_monic(F, f[idx], m, inv)
    return out


def _lead_add(F, x, y):
    n = max(x.shape[-2], y.shape[-2])
    lead = np.broadcast_shapes(x.shape[:-2], y.shape[:-2])
    out = np.zeros(lead + (n, F.ell), dtype=F.dtype)
    out[..., : x.shape[-2], :] = x
    out[..., : y.shape[-2], :] = F.vadd(out[..., : y.shape[-2], :], y)
    tally("add", int(np.prod(lead + (y.shape[-2],))))
    return out


# below this length, evaluating f at many points by vectorized Horner wins
SMALL_EVAL = 8


def _horner_many(F, f, points):
    acc = np.zeros(points.shape, dtype=F.dtype)
    for c in f[::-1]:
        acc = F.vadd(F.vmul(acc, points), c)
    tally("mul", len(points) * max(len(f) - 1, 0))
    tally("add", len(points) * max(len(f) - 1, 0))
    return acc


def base_matmul(F, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """A @ B for a matrix A of base-field ints and a batch B (K, l) of elements."""
    A = np.asarray(A)
    if F.dtype is object or A.dtype == object:
        return (A.astype(object) @ B.astype(object)) % F.q
    chunk = max(1, (2**62) // max((F.q - 1) ** 2, 1))
    out = np.zeros((A.shape[0], F.ell), dtype=np.int64)
    for s in range(0, A.shape[1], chunk):
        out = (out + A[:, s:s + chunk].astype(np.int64) @ B[s:s + chunk]) % F.q
    return out


def evaluate_at(F, f: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Multipoint evaluation for any number of points (chunks of len(f) when more)."""
    points = np.asarray(points, dtype=F.dtype).reshape(-1, F.ell)
    M = len(points)
    if M == 0:
        return zeros(F, 0)
    if len(f) <= SMALL_EVAL:
        return _horner_many(F, f, points)
    chunk = max(len(f), 1)
    if M <= chunk:
        return SubproductTree(F, points).evaluate(f)
    parts = [SubproductTree(F, points[i:i + chunk]).evaluate(f) for i in range(0, M, chunk)]
    return np.concatenate(parts, axis=-2)


def horner(F, f: np.ndarray, r) -> object:
    """f(r) for a raw scalar r by Horner's rule: deg(f) multiplications and additions."""
    L = len(f)
    tally("mul", max(L - 1, 0))
    tally("add", max(L - 1, 0))
    if L == 0:
        return F.from_array(zeros(F, 1))[0]
    q = F.q
    if F.ell == 1:
        x = F.coeffs(r)[0]
        acc = 0
        for c in f[::-1, 0].tolist():
            acc = (acc * x + c) % q
        return F.from_array(np.array([[acc]], dtype=F.dtype))[0]
    if F.ell <= 3:
        acc = F.from_int(0)
        for c in F.from_array(f[::-1]):
            acc = F.add(F.mul(acc, r), c)
        return acc
    Mr = F.mul_matrix(r)
    acc = np.zeros(F.ell, dtype=F.dtype)
    for c in f[::-1]:
        acc = (Mr @ acc + c) % q
    return F.from_array(acc.reshape(1, -1))[0]


# -- public wrapper ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DensePoly:
    """Immutable polynomial; ``coeffs[i]`` is the raw coefficient of x^i."""

    field: _Field
    coeffs: tuple

    @classmethod
    def from_array(cls, F, arr: np.ndarray) -> "DensePoly":
        return cls(F, tuple(F.from_array(trim(np.asarray(arr)))))

    @classmethod
    def from_ints(cls, F, ints) -> "DensePoly":
        return cls.from_array(F, F.to_array([F.from_int(int(c)) for c in ints]))

    @classmethod
    def from_elements(cls, F, elems) -> "DensePoly":
        return cls.from_array(F, F.to_array([F.coerce(e) for e in elems]))

    def to_array(self) -> np.ndarray:
        return self.field.to_array(self.coeffs)

    @property
    def degree(self):
        """Highest nonzero power; the zero polynomial has degree ``NEG_INF``."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, c) for c in self.coeffs]

    def int_coeffs(self) -> list[int]:
        """Coefficients as base-field ints; fails for genuinely extension coefficients."""
        F = self.field
        out = []
        for c in self.coeffs:
            if not F.is_base(c):
                raise DomainError("coefficient outside the base field")
            out.append(F.to_base(c))
        return out

    def __eq__(self, other):
        if not isinstance(other, DensePoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _check(self, other):
        if not isinstance(other, DensePoly):
            return NotImplemented
        if other.field != self.field:
            raise UsageError(f"polynomials over {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return DensePoly.from_array(self.field, add(self.field, self.to_array(), other.to_array()))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return DensePoly.from_array(self.field, sub(self.field, self.to_array(), other.to_array()))

    def __mul__(self, other):
        return poly_mul(self, other)

    def __call__(self, r):
        return horner_eval(self, r)

    def __repr__(self):
        return f"DensePoly({self.field!r}, {list(self.coeffs)})"


def poly_mul(f: DensePoly, g: DensePoly) -> DensePoly:
    if f.field != g.field:
        raise UsageError(f"polynomials over {f.field} and {g.field}")
    F = f.field
    return DensePoly.from_array(F, mul(F, f.to_array(), g.to_array()))


def _raw_points(F, pts) -> list:
    return [F.coerce(p) for p in pts]


def multipoint_eval(p: DensePoly, pts) -> list[FieldElement]:
    """(p(pts[0]), ..., p(pts[m-1])) through a subproduct tree."""
    F = p.field
    raw = _raw_points(F, pts)
    if not raw:
        return []
    vals = evaluate_at(F, p.to_array(), F.to_array(raw))
    return [FieldElement(F, v) for v in F.from_array(vals)]


def interpolate(pairs) -> DensePoly:
    """The unique polynomial of degree < len(pairs) through the given points."""
    pairs = list(pairs)
    if not pairs:
        raise UsageError("interpolate needs at least one pair")
    F = pairs[0][0].field if isinstance(pairs[0][0], FieldElement) else None
    if F is None:
        raise UsageError("interpolate expects FieldElement abscissae")
    xs = _raw_points(F, [x for x, _ in pairs])
    ys = _raw_points(F, [y for _, y in pairs])
    seen = {}
    for i, x in enumerate(xs):
        if x in seen:
            raise DomainError(f"duplicate abscissa {FieldElement(F, x)!r} at positions {seen[x]} and {i}")
        seen[x] = i
    tree = SubproductTree(F, F.to_array(xs))
    return DensePoly.from_array(F, tree.interpolate(F.to_array(ys)))


def horner_eval(p: DensePoly, r) -> FieldElement:
    F = p.field
    return FieldElement(F, horner(F, p.to_array(), F.coerce(r)))
