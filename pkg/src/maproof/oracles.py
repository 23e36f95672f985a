"""Brute-force reference answers.

Nothing here touches the provers or verifiers: circuits are run by a
separate gate interpreter, formulas are evaluated as Boolean trees, and
the combinatorial problems are solved by plain enumeration with exact
integers.  Operation counts go to the "oracle" phase.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .circuit import ADD, CONST, INPUT, MUL, And, BConst, BoolFormula, Circuit, Not, Or, QuantifiedFormula, Var
from .errors import CapacityError, UsageError
from .graphs import Graph
from .opcount import phase, tally

MAX_CUBE_VARS = 20
MAX_PERM_N = 8
MAX_QBF_VARS = 14
MAX_SUBSETS = 10**7


def _cap(value: int, limit: int, what: str) -> None:
    if value > limit:
        raise CapacityError(f"{what} = {value} exceeds the oracle limit {limit}")


def _gates(C: Circuit, columns: list, p: int | None):
    """Run C on input columns (arrays or ints); mod p unless p is None."""
    vals = []
    adds = muls = 0
    for g in C.gates:
        if g.op == INPUT:
            v = columns[g.a]
        elif g.op == CONST:
            v = g.a if p is None else g.a % p
        elif g.op == ADD:
            v = vals[g.a] + vals[g.b]
            adds += 1
        elif g.op == MUL:
            v = vals[g.a] * vals[g.b]
            muls += 1
        else:
            raise UsageError(f"unknown gate op {g.op}")
        if p is not None and g.op in (ADD, MUL):
            v = v % p
        vals.append(v)
    return vals[C.output], adds, muls


def _columns(rows, p: int | None) -> list:
    """Point rows -> per-variable arrays (int64 when products stay below 2^63)."""
    small = p is not None and p < 2**31
    arr = np.array([[int(x) for x in r] for r in rows], dtype=np.int64 if small else object)
    arr = arr.reshape(len(rows), -1)
    if p is not None:
        arr = arr % p
    return [arr[:, j] for j in range(arr.shape[1])]


def oracle_multipoint(C: Circuit, points, p: int | None = None) -> list[int]:
    """C at every point, exactly over the integers or mod p."""
    points = [list(r) for r in points]
    if any(len(r) != C.n_inputs for r in points):
        raise UsageError(f"points must have {C.n_inputs} coordinates")
    with phase("oracle"):
        if not points:
            return []
        out, adds, muls = _gates(C, _columns(points, p), p)
        K = len(points)
        tally("add", adds * K)
        tally("mul", muls * K)
        out = np.broadcast_to(np.asarray(out, dtype=object), (K,))
        return [int(v) for v in out]


def _cube(k: int) -> np.ndarray:
    """{0,1}^k, row i = bits of i (low bit first)."""
    idx = np.arange(1 << k, dtype=np.int64)
    return (idx[:, None] >> np.arange(k, dtype=np.int64)) & 1


def oracle_cube_sum(C: Circuit, p: int | None = None) -> int:
    """Sum of C over {0,1}^n by enumeration (n <= 20)."""
    n = C.n_inputs
    _cap(n, MAX_CUBE_VARS, "cube dimension")
    with phase("oracle"):
        total = 0
        chunk = 1 << min(n, 16)  # int64 sums stay exact: 2^16 * p < 2^47
        for start in range(0, 1 << n, chunk):
            idx = np.arange(start, start + chunk, dtype=np.int64)
            bits = [(idx >> j) & 1 for j in range(n)]
            if p is None or p >= 2**31:
                bits = [b.astype(object) for b in bits]
            out, adds, muls = _gates(C, bits, p)
            tally("add", adds * chunk + chunk)
            tally("mul", muls * chunk)
            if np.ndim(out) == 0:
                total += int(out) * chunk
            else:
                total += int(out.sum()) if out.dtype != object else sum(int(v) for v in out)
        return total if p is None else total % p


def _bool_eval(node, cols: list, size: int) -> np.ndarray:
    if isinstance(node, Var):
        return cols[node.index]
    if isinstance(node, BConst):
        return np.full(size, bool(node.value))
    if isinstance(node, Not):
        return ~_bool_eval(node.arg, cols, size)
    left = _bool_eval(node.left, cols, size)
    right = _bool_eval(node.right, cols, size)
    return (left & right) if isinstance(node, And) else (left | right)


def truth_table(F: BoolFormula) -> np.ndarray:
    """F on every assignment, index = sum_j x_j 2^j."""
    cube = _cube(F.n).astype(bool)
    cols = [cube[:, j] for j in range(F.n)]
    return _bool_eval(F.root, cols, 1 << F.n)


def oracle_sat(F: BoolFormula) -> int:
    """Number of satisfying assignments (n <= 20)."""
    _cap(F.n, MAX_CUBE_VARS, "variable count")
    with phase("oracle"):
        table = truth_table(F)
        tally("add", len(table))
        return int(table.sum())


def oracle_qbf(phi: QuantifiedFormula) -> bool:
    """Truth value by recursion over the quantifiers (n <= 14)."""
    _cap(phi.n, MAX_QBF_VARS, "variable count")
    with phase("oracle"):
        table = [int(v) for v in truth_table(phi.matrix)]

        # x_(i+1) is bit i of the table index
        def fold(i: int, offset: int) -> int:
            if i == phi.n:
                return table[offset]
            a = fold(i + 1, offset)
            b = fold(i + 1, offset + (1 << i))
            return a | b if phi.prefix[i] == "E" else a & b

        return bool(fold(0, 0))


def oracle_suffix_values(phi: QuantifiedFormula, L: int) -> list[int]:
    """Exact integer value of the sum/product arithmetization of the last L quantifiers,
    at every Boolean assignment of the first n - L variables (index = bits, low first)."""
    _cap(phi.n, MAX_QBF_VARS, "variable count")
    n = phi.n
    if not 0 <= L <= n:
        raise UsageError(f"suffix length {L} outside [0, {n}]")
    with phase("oracle"):
        table = [int(v) for v in truth_table(phi.matrix)]

        def rec(i: int, offset: int) -> int:
            if i == n:
                return table[offset]
            a = rec(i + 1, offset)
            b = rec(i + 1, offset + (1 << i))
            return a + b if phi.prefix[i] == "E" else a * b

        k = n - L
        return [rec(k, idx) for idx in range(1 << k)]


def oracle_permanent(M) -> int:
    """Sum over permutations of prod M[i][sigma(i)], exact (n <= 8)."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise UsageError("permanent needs a square matrix")
    _cap(n, MAX_PERM_N, "matrix size")
    with phase("oracle"):
        total = 0
        for sigma in itertools.permutations(range(n)):
            total += math.prod(int(M[i][sigma[i]]) for i in range(n))
        tally("mul", math.factorial(n) * max(n - 1, 0))
        tally("add", math.factorial(n))
        return total


def oracle_hamcycles(G: Graph) -> int:
    """Directed Hamiltonian cycles (digraphs) or undirected ones counted once (n <= 8)."""
    n = G.n
    _cap(n, MAX_PERM_N, "vertex count")
    if n < 2 or (not G.directed and n <= 2):
        raise UsageError("Hamiltonian cycles need n >= 2 (n >= 3 for undirected graphs)")
    arcs = set(G.edges) if G.directed else set(G.edges) | {(v, u) for u, v in G.edges}
    with phase("oracle"):
        count = 0
        for rest in itertools.permutations(range(1, n)):
            tour = (0,) + rest + (0,)
            if all((tour[i], tour[i + 1]) in arcs for i in range(n)):
                count += 1
        return count if G.directed else count // 2


def oracle_ov(A) -> list[int]:
    """For each u, the number of v in A with <u, v> = 0."""
    A = [tuple(int(x) for x in v) for v in A]
    with phase("oracle"):
        tally("mul", len(A) ** 2 * (len(A[0]) if A else 0))
        return [sum(1 for v in A if not any(a and b for a, b in zip(u, v))) for u in A]


def oracle_hamming(A, k: int) -> list[int]:
    """For each v, the number of w in A differing from v in at most k coordinates."""
    A = [tuple(int(x) for x in v) for v in A]
    with phase("oracle"):
        return [sum(1 for w in A if sum(a != b for a, b in zip(v, w)) <= k) for v in A]


def oracle_cliques(G: Graph, k: int) -> int:
    """Number of k-vertex cliques by checking every k-subset."""
    if k < 0:
        raise UsageError("clique size must be >= 0")
    _cap(math.comb(G.n, k), MAX_SUBSETS, "number of vertex subsets")
    adj = G.adjacency
    with phase("oracle"):
        return sum(1 for S in itertools.combinations(range(G.n), k)
                   if all(adj[a][b] for a, b in itertools.combinations(S, 2)))


def oracle_esym(xs, k: int, p: int | None = None) -> int:
    """E^k(xs) from its definition as a sum over k-subsets."""
    _cap(math.comb(len(xs), k), MAX_SUBSETS, "number of subsets")
    total = sum(math.prod(int(xs[i]) for i in S) for S in itertools.combinations(range(len(xs)), k))
    return total if p is None else total % p


def oracle_poly_eval(F, coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Naive evaluation: every point gets its own Horner pass, O(deg * #points) products."""
    coeffs = np.asarray(coeffs, dtype=F.dtype)
    points = np.asarray(points, dtype=F.dtype)
    with phase("oracle"):
        out = np.zeros_like(points)
        for c in coeffs[::-1]:
            out = F.vadd(F.vmul(out, points), np.broadcast_to(c, points.shape))
        tally("mul", len(coeffs) * len(points))
        tally("add", len(coeffs) * len(points))
        return out
