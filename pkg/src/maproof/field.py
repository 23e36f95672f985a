"""Prime fields F_q, extensions F_{q^l}, primes and irreducible polynomials.

Elements are handled in two forms.  Scalars are "raw" values: a Python
int for :class:`PrimeField`, a tuple of ``l`` ints (coefficients of
1, x, ..., x^(l-1)) for :class:`ExtensionField`.  Batches are numpy
arrays whose last axis holds those coefficients, shape ``(..., l)``
(``l == 1`` for prime fields); the ``v*`` methods operate on them.
:class:`FieldElement` wraps a raw value for the public API.
"""

from __future__ import annotations

import functools
import re

import gmpy2
import numpy as np

from .errors import DomainError, UsageError

MAX_MODULUS_BITS = 62
# extension degrees from which batched products go through a float FFT
FFT_MIN_DEGREE = 12
# batches up to this many elements multiply through a single tensor matmul
TENSOR_MAX_ROWS = 64

def is_prime(n: int) -> bool:
    """Exact below 2^64 (GMP's Baillie-PSW), which covers every modulus used here."""
    return n >= 2 and bool(gmpy2.is_prime(n))


def find_prime(lower_bound: int) -> int:
    """Smallest prime strictly greater than ``lower_bound``."""
    if not 2 <= lower_bound < 2**61:
        raise UsageError(f"find_prime needs 2 <= bound < 2^61, got {lower_bound}")
    return int(gmpy2.next_prime(lower_bound))


# -- dense polynomials over F_q as int lists, low degree first ------------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: list[int], g: list[int], q: int) -> list[int]:
    f = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, q)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k] * inv_lead % q
        if c:
            base = k - dg
            for i, gi in enumerate(g):
                f[base + i] = (f[base + i] - c * gi) % q
    return _trim(f[:dg])


def _pmulmod(a: list[int], b: list[int], f: list[int], q: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _pmod([c % q for c in prod], f, q)


def _ppowmod(a: list[int], e: int, f: list[int], q: int) -> list[int]:
    result = [1]
    base = _pmod(a, f, q)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, q)
        e >>= 1
        if e:
            base = _pmulmod(base, base, f, q)
    return result


def _pgcd(a: list[int], b: list[int], q: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, q)
    return a


def _psub(a: list[int], b: list[int], q: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    for i, y in enumerate(b):
        a[i] = (a[i] - y) % q
    return _trim(a)


def is_irreducible(f, q: int | None = None) -> bool:
    """Ben-Or test: monic ``f`` of degree l is irreducible over F_q iff
    gcd(x^(q^i) - x, f) = 1 for every 1 <= i <= l/2.

    ``f`` is a low-degree-first coefficient sequence of ints (``q``
    required) or a :class:`~maproof.poly.DensePoly` over a prime field.
    """
    if hasattr(f, "field"):
        q = f.field.q if q is None else q
        if f.field.ell != 1:
            raise UsageError("is_irreducible expects a polynomial over a prime field")
        coeffs = [int(c) for c in f.int_coeffs()]
    else:
        if q is None:
            raise UsageError("is_irreducible needs q for a plain coefficient list")
        coeffs = [int(c) % q for c in f]
    coeffs = _trim(coeffs)
    if len(coeffs) < 2:
        raise UsageError("is_irreducible needs degree >= 1")
    if coeffs[-1] != 1:
        raise UsageError("is_irreducible needs a monic polynomial")
    ell = len(coeffs) - 1
    if ell == 1:
        return True
    if coeffs[0] == 0:
        return False
    x = [0, 1]
    h = x
    for _ in range(ell // 2):
        h = _ppowmod(h, q, coeffs, q)
        if len(_pgcd(coeffs, _psub(h, x, q), q)) > 1:
            return False
    return True


def _digits(i: int, q: int, ell: int) -> tuple[int, ...]:
    out = []
    for _ in range(ell):
        i, r = divmod(i, q)
        out.append(r)
    return tuple(out)


# -- fields ----------------------------------------------------------------

class _Field:
    """Operations common to both field kinds; subclasses fill in raw ops."""

    q: int
    ell: int
    order: int

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, self.coerce(value))

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    @property
    def bits_per_element(self) -> int:
        # ceil(l * log2 q), exactly, for q^l >= 2
        return (self.order - 1).bit_length()

    @functools.cached_property
    def dtype(self):
        # int64 whenever every accumulation in vmul / reduce_rows stays below 2^63
        if self.q < 2**31 and self.ell * (self.q - 1) ** 2 + self.q < 2**62:
            return np.int64
        return object

    def element(self, i: int):
        """Raw element with canonical index ``i`` (base-q digits)."""
        if not 0 <= i < self.order:
            raise UsageError(f"canonical index {i} outside [0, {self.order})")
        return self._from_digits(_digits(i, self.q, self.ell))

    def random_raw(self, rng):
        bits = self.bits_per_element
        while True:
            v = rng.getrandbits(bits)
            if v < self.order:
                return self.element(v)

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        result = np.zeros_like(a)
        result[..., 0] = 1
        while e:
            if e & 1:
                result = self.vmul(result, a)
            e >>= 1
            if e:
                a = self.vmul(a, a)
        return result

    def vinv(self, a: np.ndarray) -> np.ndarray:
        """Elementwise inverse via Fermat; caller guarantees nonzero entries."""
        if self.ell == 1 and a.size < 64:
            q = self.q
            return self.to_array([pow(int(x), -1, q) for x in a.reshape(-1)]).reshape(a.shape)
        return self.vpow(a, self.order - 2)

    def vadd(self, a, b):
        return (a + b) % self.q

    def vsub(self, a, b):
        return (a - b) % self.q

    def vneg(self, a):
        return (-a) % self.q

    def vscale(self, a, c: int):
        """Multiply a batch by a base-field constant."""
        return (a * (c % self.q)) % self.q

    def vconst(self, c: int, shape=()) -> np.ndarray:
        out = np.zeros(tuple(shape) + (self.ell,), dtype=self.dtype)
        out[..., 0] = c % self.q
        return out

    def to_array(self, raws) -> np.ndarray:
        raise NotImplementedError

    def from_array(self, arr) -> list:
        raise NotImplementedError


class PrimeField(_Field):
    """The prime field F_q; raw elements are ints in [0, q)."""

    def __init__(self, q: int):
        if not (2 <= q < 2**MAX_MODULUS_BITS):
            raise UsageError(f"prime modulus must lie in [2, 2^62), got {q}")
        if not is_prime(q):
            raise UsageError(f"{q} is not prime")
        self.q = q
        self.ell = 1
        self.order = q

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("F", self.q))

    def __repr__(self):
        return f"PrimeField({self.q})"

    @property
    def modulus(self):
        return [0, 1]

    def coerce(self, value) -> int:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise UsageError(f"element of {value.field} used in {self}")
            return value.raw
        if isinstance(value, (list, tuple)):
            if len(value) != 1:
                raise UsageError("prime-field element needs exactly one coefficient")
            value = value[0]
        return int(value) % self.q

    def from_int(self, c: int) -> int:
        return c % self.q

    def _from_digits(self, digits):
        return digits[0]

    def index(self, a: int) -> int:
        return a

    def coeffs(self, a: int) -> tuple[int, ...]:
        return (a,)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_base(self, a) -> bool:
        return True

    def to_base(self, a) -> int:
        return a

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def neg(self, a):
        return -a % self.q

    def mul(self, a, b):
        return a * b % self.q

    def scale(self, a, c: int):
        return a * c % self.q

    def inv(self, a):
        if a == 0:
            raise DomainError("inverse of zero")
        return pow(a, -1, self.q)

    def vmul(self, a, b):
        return (a * b) % self.q

    def reduce_rows(self, prod):
        return prod % self.q

    def mul_matrix(self, a):
        return np.array([[a]], dtype=self.dtype)

    def to_array(self, raws) -> np.ndarray:
        return np.array(list(raws), dtype=self.dtype).reshape(-1, 1)

    def from_array(self, arr) -> list:
        return np.asarray(arr).reshape(-1).tolist()


class ExtensionField(_Field):
    """F_q[x] / (f) for a monic irreducible f of degree ``ell``.

    Raw elements are tuples of ``ell`` ints, coefficient of x^k at index k.
    With ``ell == 1`` and f = x this is a copy of F_q in tuple form.
    """

    def __init__(self, base: PrimeField, modulus, check: bool = True):
        q = base.q
        f = _trim([int(c) % q for c in modulus])
        if len(f) < 2 or f[-1] != 1:
            raise UsageError("extension modulus must be monic of degree >= 1")
        if check and not is_irreducible(f, q):
            raise DomainError(f"modulus {f} is not irreducible over F_{q}")
        self.base = base
        self.q = q
        self.ell = len(f) - 1
        self.order = q**self.ell
        self.modulus = tuple(f)
        ell = self.ell
        # x^(ell+k) mod f for k = 0 .. ell-2
        rows = []
        cur = [(-c) % q for c in f[:ell]]
        for _ in range(ell - 1):
            rows.append(list(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(cur[i] - top * f[i]) % q for i in range(ell)]
        self._red = rows
        self._red_arr = np.array(rows, dtype=self.dtype).reshape(max(ell - 1, 0), ell)
        self._zero = (0,) * ell

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.q == self.q
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("E", self.q, self.modulus))

    def __repr__(self):
        return f"ExtensionField({self.q}^{self.ell}, modulus={list(self.modulus)})"

    def coerce(self, value) -> tuple:
        if isinstance(value, FieldElement):
            if value.field == self:
                return value.raw
            if value.field == self.base:
                return self.from_int(value.raw)
            raise UsageError(f"element of {value.field} used in {self}")
        if isinstance(value, (list, tuple)):
            if len(value) != self.ell:
                raise UsageError(f"extension element needs {self.ell} coefficients")
            return tuple(int(c) % self.q for c in value)
        return self.from_int(int(value))

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self, self._from_digits((0, 1) + (0,) * (self.ell - 2))
                            if self.ell > 1 else (0,))

    def from_int(self, c: int) -> tuple:
        return (c % self.q,) + self._zero[1:]

    def _from_digits(self, digits):
        return tuple(digits)

    def index(self, a) -> int:
        i = 0
        for c in reversed(a):
            i = i * self.q + c
        return i

    def coeffs(self, a) -> tuple[int, ...]:
        return a

    def is_zero(self, a) -> bool:
        return not any(a)

    def is_base(self, a) -> bool:
        return not any(a[1:])

    def to_base(self, a) -> int:
        return a[0]

    def add(self, a, b):
        q = self.q
        return tuple([(x + y) % q for x, y in zip(a, b)])

    def sub(self, a, b):
        q = self.q
        return tuple([(x - y) % q for x, y in zip(a, b)])

    def neg(self, a):
        q = self.q
        return tuple([-x % q for x in a])

    def scale(self, a, c: int):
        q = self.q
        return tuple([x * c % q for x in a])

    def mul(self, a, b):
        q, ell = self.q, self.ell
        if ell == 1:
            return (a[0] * b[0] % q,)
        if ell > 5 and self.dtype is np.int64:
            # numpy convolution beats the Python double loop from here on
            p = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)) % q
            return tuple(((p[:ell] + p[ell:] @ self._red_arr) % q).tolist())
        prod = [0] * (2 * ell - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        res = prod[:ell]
        for k, row in enumerate(self._red):
            c = prod[ell + k] % q
            if c:
                for t in range(ell):
                    res[t] += c * row[t]
        return tuple([v % q for v in res])

    def inv(self, a):
        if not any(a):
            raise DomainError("inverse of zero")
        q, f = self.q, list(self.modulus)
        # extended Euclid on (f, a): track s with s*a = r (mod f)
        r0, r1 = f, _trim(list(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            quo, rem = _pdivmod(r0, r1, q)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(quo, s1, q), q)
        c = pow(r1[0], -1, q)
        s = [x * c % q for x in s1]
        s = _pmod(s, f, q) if len(s) > self.ell else s
        return tuple(s) + self._zero[len(s):]

    @functools.cached_property
    def _fft(self):
        """(FFT length, float reduction table) when float64 convolution is exact."""
        ell, q = self.ell, self.q
        if ell < FFT_MIN_DEGREE or self.dtype is object or ell * (q - 1) ** 2 >= 2**30:
            return None
        return 1 << (2 * ell - 2).bit_length(), self._red_arr.astype(np.float64)

    @functools.cached_property
    def _tensor(self):
        """Float (l*l, l) matrix T with coeffs(a*b) = (a (x) b) @ T, when float64 is exact."""
        ell, q = self.ell, self.q
        if self.dtype is object or ell * ell * (q - 1) ** 2 >= 2**53:
            return None
        full = np.vstack([np.eye(ell, dtype=np.int64), self._red_arr])  # x^k mod f, k < 2l-1
        idx = np.add.outer(np.arange(ell), np.arange(ell)).reshape(-1)
        return full[idx].astype(np.float64)

    def vmul(self, a, b):
        q, ell = self.q, self.ell
        if ell == 1:
            return (a * b) % q
        rows = max(a.size, b.size) // ell
        if ell > 4 and rows <= TENSOR_MAX_ROWS and self._tensor is not None:
            # one small matmul beats an FFT round trip on tiny batches
            outer = (a[..., :, None] * b[..., None, :]) % q
            flat = outer.reshape(outer.shape[:-2] + (ell * ell,)).astype(np.float64)
            return (np.rint(flat @ self._tensor) % q).astype(np.int64)
        if self._fft is not None:
            nfft, red = self._fft
            fa = np.fft.rfft(a, nfft)
            fb = np.fft.rfft(b, nfft)
            p = np.rint(np.fft.irfft(fa * fb, nfft)[..., : 2 * ell - 1]) % q
            return (np.rint(p[..., :ell] + p[..., ell:] @ red) % q).astype(np.int64)
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        prod = np.zeros(shape + (2 * ell - 1,), dtype=self.dtype)
        for i in range(ell):
            prod[..., i:i + ell] += a[..., i:i + 1] * b
        return self.reduce_rows(prod % q)

    def _frobenius_matrix(self, k: int) -> np.ndarray:
        """Phi with coeffs(a^(q^k)) = coeffs(a) @ Phi (Frobenius is F_q-linear)."""
        cache = self.__dict__.setdefault("_frob_cache", {})
        if k not in cache:
            if k == 1:
                xq = self.pow(self.gen.raw, self.q)
                rows, cur = [], self.one
                for _ in range(self.ell):
                    rows.append(cur)
                    cur = self.mul(cur, xq)
                cache[1] = np.array(rows, dtype=self.dtype)
            else:
                half = self._frobenius_matrix(k // 2)
                m = (half @ half) % self.q
                if k % 2:
                    m = (m @ self._frobenius_matrix(1)) % self.q
                cache[k] = m
        return cache[k]

    def vfrob(self, a: np.ndarray, k: int = 1) -> np.ndarray:
        """a^(q^k) elementwise."""
        k %= self.ell
        if k == 0:
            return a.copy()
        return (a @ self._frobenius_matrix(k)) % self.q

    def vinv(self, a: np.ndarray) -> np.ndarray:
        """Itoh-Tsujii: a^-1 = N(a)^-1 * a^(q + ... + q^(l-1)) with N(a) in F_q."""
        if self.ell == 1:
            return super().vinv(a)
        e, k = a, 1  # e = a^(1 + q + ... + q^(k-1))
        for bit in bin(self.ell - 1)[3:]:
            e = self.vmul(self.vfrob(e, k), e)
            k *= 2
            if bit == "1":
                e = self.vmul(self.vfrob(e, 1), a)
                k += 1
        b = self.vfrob(e, 1)
        norm = self.vmul(a, b)[..., 0]
        ninv = _vinv_mod(norm, self.q)
        return (b * ninv[..., None]) % self.q

    @functools.cached_property
    def _red_float(self):
        # float64 matmul (BLAS) is exact while every dot product stays below 2^53
        if self.dtype is object or self.ell * (self.q - 1) ** 2 + self.q >= 2**53:
            return None
        return self._red_arr.astype(np.float64)

    def reduce_rows(self, prod):
        """Reduce coefficient rows of length up to 2l-1 (entries in [0, q)) mod f."""
        ell = self.ell
        if prod.shape[-1] <= ell:
            return prod % self.q
        low = prod[..., :ell]
        red = self._red_float
        if red is not None and ell > 4:
            high = prod[..., ell:].astype(np.float64) @ red
            return (low + np.rint(high).astype(np.int64) % self.q) % self.q
        return (low + prod[..., ell:] @ self._red_arr) % self.q

    def mul_matrix(self, a) -> np.ndarray:
        """Matrix M over F_q with M @ coeffs(b) = coeffs(a*b)."""
        basis = np.eye(self.ell, dtype=self.dtype)
        return self.vmul(self.to_array([a]), basis).T.copy()

    def to_array(self, raws) -> np.ndarray:
        return np.array(list(raws), dtype=self.dtype).reshape(-1, self.ell)

    def from_array(self, arr) -> list:
        return [tuple(r) for r in np.asarray(arr).reshape(-1, self.ell).tolist()]


def _vinv_mod(x: np.ndarray, q: int) -> np.ndarray:
    """Elementwise inverse in F_q by Fermat, on an integer array."""
    if x.size < 64:
        flat = [pow(int(v), q - 2, q) for v in x.reshape(-1)]
        return np.array(flat, dtype=x.dtype).reshape(x.shape)
    result = np.ones_like(x)
    base, e = x % q, q - 2
    while e:
        if e & 1:
            result = (result * base) % q
        e >>= 1
        if e:
            base = (base * base) % q
    return result


def _pmul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim([c % q for c in out])


def _pdivmod(f, g, q):
    f = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, q)
    quo = [0] * max(len(f) - dg, 0)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k] * inv_lead % q
        quo[k - dg] = c
        if c:
            for i, gi in enumerate(g):
                f[k - dg + i] = (f[k - dg + i] - c * gi) % q
    return _trim(quo), _trim(f[:dg])


def _binomial_possible(q: int, ell: int) -> bool:
    """Some x^ell - a is irreducible over F_q iff every prime r | ell divides q - 1
    and q = 1 mod 4 when 4 | ell (take a primitive)."""
    m, r = ell, 2
    while m > 1:
        if m % r == 0:
            if (q - 1) % r:
                return False
            while m % r == 0:
                m //= r
        r += 1
    return ell % 4 != 0 or q % 4 == 1


@functools.lru_cache(maxsize=256)
def build_extension(q: int, ell: int) -> ExtensionField:
    """F_{q^ell} with the lexicographically smallest monic irreducible modulus.

    Candidates x^ell + c_(ell-1) x^(ell-1) + ... + c_0 are scanned by the
    integer whose base-q digits are (c_0, ..., c_(ell-1)), smallest first.
    """
    if ell < 1:
        raise UsageError(f"extension degree must be >= 1, got {ell}")
    base = PrimeField(q)
    if ell == 1:
        return ExtensionField(base, [0, 1], check=False)
    # i < q are the binomials x^ell + c_0; skip them when none can be irreducible
    start = 0 if _binomial_possible(q, ell) else q
    for i in range(start, q**ell):
        low = _digits(i, q, ell)
        if low[0] == 0:
            continue
        f = list(low) + [1]
        if is_irreducible(f, q):
            return ExtensionField(base, f, check=False)
    raise AssertionError("no irreducible polynomial found")  # unreachable: one always exists


def canonical_element(F: _Field, i: int) -> "FieldElement":
    """Element whose coefficient vector is the base-q expansion of ``i``."""
    return FieldElement(F, F.element(i))


def random_element(F: _Field, rng) -> "FieldElement":
    """Uniform element of F by rejection sampling on ceil(l*log2 q)-bit draws.

    ``rng`` is anything with ``getrandbits`` (a seeded ``random.Random`` or
    a :class:`~maproof.transcript.Coins`).
    """
    return FieldElement(F, F.random_raw(rng))


_SPEC = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*$")


def parse_field_spec(text: str) -> ExtensionField:
    """Parse the CLI form ``"q^l"`` (e.g. ``"101^1"``, ``"2^16"``)."""
    m = _SPEC.match(text)
    if not m:
        raise UsageError(f"field spec must look like q^l, got {text!r}")
    return build_extension(int(m.group(1)), int(m.group(2)))


class FieldElement:
    """Immutable element of a prime or extension field."""

    __slots__ = ("field", "raw")

    def __init__(self, field: _Field, raw):
        self.field = field
        self.raw = raw

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                if (isinstance(self.field, ExtensionField) and other.field == self.field.base):
                    return self.field.from_int(other.raw)
                raise UsageError(f"cannot combine elements of {self.field} and {other.field}")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.add(self.raw, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.sub(self.raw, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.sub(b, self.raw))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.mul(self.raw, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.raw, self.field.inv(b)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.raw, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.raw))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.raw)

    def index(self) -> int:
        return self.field.index(self.raw)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.raw)

    def __int__(self):
        if not self.field.is_base(self.raw):
            raise DomainError(f"{self!r} is not in the base field")
        return self.field.to_base(self.raw)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.raw == other.raw
        if isinstance(other, int):
            return self.raw == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __repr__(self):
        if self.field.ell == 1:
            return f"{self.coeffs[0]} (mod {self.field.q})"
        terms = [f"{c}*x^{k}" if k else str(c) for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"

