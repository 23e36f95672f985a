"""Binary encodings: field elements, coefficient vectors and proof files.

Elements are ``l`` unsigned 64-bit little-endian words in ascending power
order.  A proof file is::

    "MAEP" | version u16 = 1 | q u64 | l u32 | l+1 modulus words u64
    | n u64 | K u64 | d u64 | eps_exp u32 | count u64 | count * l words u64
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import ProofFormatError
from .protocol import Proof, ProtocolParams

MAGIC = b"MAEP"
VERSION = 1

BAD_MAGIC = "bad-magic"
BAD_VERSION = "bad-version"
TRUNCATED = "truncated"
OUT_OF_RANGE = "out-of-range"
TRAILING = "trailing-data"
BAD_HEADER = "bad-header"


def encode_elements(arr: np.ndarray) -> bytes:
    """Rows of an (N, l) coefficient array as N*l u64 words."""
    flat = [int(v) for v in np.asarray(arr).reshape(-1).tolist()]
    return struct.pack(f"<{len(flat)}Q", *flat)


def decode_elements(data: bytes, ell: int, dtype=np.int64) -> np.ndarray:
    if len(data) % (8 * ell):
        raise ProofFormatError(TRUNCATED, "element data is not a whole number of elements")
    words = struct.unpack(f"<{len(data) // 8}Q", data)
    return np.array(words, dtype=dtype if max(words, default=0) < 2**63 else object).reshape(-1, ell)


def serialize_proof(proof: Proof) -> bytes:
    p = proof.params
    out = [MAGIC, struct.pack("<HQI", VERSION, p.q, p.ell)]
    out.append(struct.pack(f"<{p.ell + 1}Q", *[int(c) for c in proof.modulus]))
    out.append(struct.pack("<QQQIQ", p.n, p.K, p.d, p.eps_exp, len(proof.coeffs)))
    flat = [int(c) for row in proof.coeffs for c in row]
    out.append(struct.pack(f"<{len(flat)}Q", *flat))
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str, what: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise ProofFormatError(TRUNCATED, f"file ends inside {what}")
        vals = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return vals


def parse_proof(data: bytes) -> Proof:
    """Inverse of :func:`serialize_proof`; every malformation has its own error code."""
    if len(data) < 4:
        raise ProofFormatError(TRUNCATED, "file shorter than the magic number")
    if data[:4] != MAGIC:
        raise ProofFormatError(BAD_MAGIC, f"expected {MAGIC!r}, found {data[:4]!r}")
    r = _Reader(data)
    r.pos = 4
    (version,) = r.take("<H", "version")
    if version != VERSION:
        raise ProofFormatError(BAD_VERSION, f"unsupported version {version}")
    q, ell = r.take("<QI", "field header")
    if q < 2 or ell < 1 or ell > 4096:
        raise ProofFormatError(BAD_HEADER, f"implausible field q={q}, l={ell}")
    modulus = r.take(f"<{ell + 1}Q", "modulus")
    n, K, d, eps_exp, count = r.take("<QQQIQ", "parameter block")
    if count * ell * 8 > len(data) - r.pos:
        raise ProofFormatError(TRUNCATED, f"{count} coefficients announced, file too short")
    flat = r.take(f"<{count * ell}Q", "coefficients")
    if r.pos != len(data):
        raise ProofFormatError(TRAILING, f"{len(data) - r.pos} bytes after the last coefficient")
    if any(c >= q for c in modulus) or any(c >= q for c in flat):
        raise ProofFormatError(OUT_OF_RANGE, f"value >= q = {q}")
    coeffs = tuple(tuple(flat[i * ell:(i + 1) * ell]) for i in range(count))
    return Proof(ProtocolParams(q, ell, d, K, n, eps_exp), tuple(modulus), coeffs)
