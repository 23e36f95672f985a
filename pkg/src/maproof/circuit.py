"""Arithmetic circuits, Boolean formulas and their arithmetization.

A :class:`Circuit` is a straight-line program of fan-in-2 gates.  Gate ids
are list positions and operands always point backwards, so the list order
is a topological order.  Constants are plain integers, reduced into
whatever field the circuit is evaluated over.

Text formats
------------
Circuits (``.actxt``)::

    # squaring
    circuit n=1
    g1 input 0
    g2 mul g1 g1
    output g2

Formulas use ``x1 .. xn``, ``0``, ``1``, ``!``, ``&``, ``|`` (binding in
that order, ``&`` and ``|`` left-associative) and parentheses.  A QBF is a
quantifier string, the variable list and the matrix: ``EA x1 x2 : x1 | x2``.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import poly as P
from .errors import ParseError, UsageError
from .field import FieldElement, _Field
from .opcount import tally

INPUT, CONST, ADD, MUL = 0, 1, 2, 3
OP_NAMES = ("input", "const", "add", "mul")


class Gate(NamedTuple):
    op: int
    a: int
    b: int = -1

    def __repr__(self):
        name = OP_NAMES[self.op]
        if self.op in (INPUT, CONST):
            return f"{name}({self.a})"
        return f"{name}({self.a}, {self.b})"


@dataclass(frozen=True)
class Circuit:
    """Gate list plus designated output; see the module docstring."""

    n_inputs: int
    gates: tuple
    output: int

    def __post_init__(self):
        if self.n_inputs < 0:
            raise UsageError("n_inputs must be >= 0")
        for i, g in enumerate(self.gates):
            if g.op == INPUT:
                if not 0 <= g.a < self.n_inputs:
                    raise UsageError(f"gate {i}: input index {g.a} outside [0, {self.n_inputs})")
            elif g.op in (ADD, MUL):
                if not (0 <= g.a < i and 0 <= g.b < i):
                    raise UsageError(f"gate {i}: operands must reference earlier gates")
            elif g.op != CONST:
                raise UsageError(f"gate {i}: unknown op {g.op}")
        if not 0 <= self.output < len(self.gates):
            raise UsageError(f"output id {self.output} out of range")

    @property
    def size(self) -> int:
        return len(self.gates)

    @functools.cached_property
    def degrees(self) -> tuple[int, ...]:
        out = []
        for g in self.gates:
            if g.op == INPUT:
                out.append(1)
            elif g.op == CONST:
                out.append(0)
            elif g.op == ADD:
                out.append(max(out[g.a], out[g.b]))
            else:
                out.append(out[g.a] + out[g.b])
        return tuple(out)

    @functools.cached_property
    def is_const(self) -> tuple[bool, ...]:
        flags = []
        for g in self.gates:
            flags.append(g.op == CONST or (g.op != INPUT and flags[g.a] and flags[g.b]))
        return tuple(flags)

    @functools.cached_property
    def last_use(self) -> tuple[int, ...]:
        last = list(range(len(self.gates)))
        for i, g in enumerate(self.gates):
            if g.op in (ADD, MUL):
                last[g.a] = i
                last[g.b] = i
        last[self.output] = len(self.gates)
        return tuple(last)

    @functools.cached_property
    def op_counts(self) -> dict[str, int]:
        adds = sum(1 for g in self.gates if g.op == ADD)
        return {"add": adds, "mul": len(self.gates) - adds - sum(1 for g in self.gates if g.op in (INPUT, CONST))}

    def __repr__(self):
        return f"Circuit(n={self.n_inputs}, size={self.size}, output={self.output})"


def syntactic_degree(C: Circuit) -> int:
    """Inputs 1, constants 0, add takes the max, mul the sum."""
    return C.degrees[C.output]


class CircuitBuilder:
    """Incremental construction with memoized inputs and constants.

    With ``fold=True`` gates whose operands are both constants are folded
    (reduced mod ``fold_modulus`` when given), and x+0, x*0, x*1 simplify.
    """

    def __init__(self, n_inputs: int, fold: bool = True, fold_modulus: int | None = None):
        self.n = n_inputs
        self.gates: list[Gate] = []
        self._inputs: dict[int, int] = {}
        self._consts: dict[int, int] = {}
        self._const_of: dict[int, int] = {}
        self.fold = fold
        self.mod = fold_modulus

    def _push(self, g: Gate) -> int:
        self.gates.append(g)
        return len(self.gates) - 1

    def input(self, j: int) -> int:
        if j not in self._inputs:
            if not 0 <= j < self.n:
                raise UsageError(f"input index {j} outside [0, {self.n})")
            self._inputs[j] = self._push(Gate(INPUT, j))
        return self._inputs[j]

    def const(self, c: int) -> int:
        c = int(c)
        if self.mod is not None:
            c %= self.mod
        if c not in self._consts:
            gid = self._push(Gate(CONST, c))
            self._consts[c] = gid
            self._const_of[gid] = c
        return self._consts[c]

    def const_value(self, gid: int):
        return self._const_of.get(gid)

    def add(self, a: int, b: int) -> int:
        if self.fold:
            ca, cb = self._const_of.get(a), self._const_of.get(b)
            if ca is not None and cb is not None:
                return self.const(ca + cb)
            if ca == 0:
                return b
            if cb == 0:
                return a
        return self._push(Gate(ADD, a, b))

    def mul(self, a: int, b: int) -> int:
        if self.fold:
            ca, cb = self._const_of.get(a), self._const_of.get(b)
            if ca is not None and cb is not None:
                return self.const(ca * cb)
            if ca == 0 or cb == 0:
                return self.const(0)
            if ca == 1:
                return b
            if cb == 1:
                return a
        return self._push(Gate(MUL, a, b))

    def neg(self, a: int) -> int:
        return self.mul(self.const(-1), a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _tree(self, ids, op, empty):
        ids = list(ids)
        if not ids:
            return self.const(empty)
        while len(ids) > 1:
            nxt = [op(ids[i], ids[i + 1]) for i in range(0, len(ids) - 1, 2)]
            if len(ids) % 2:
                nxt.append(ids[-1])
            ids = nxt
        return ids[0]

    def sum(self, ids) -> int:
        """Balanced addition tree (0 for no operands)."""
        return self._tree(ids, self.add, 0)

    def prod(self, ids) -> int:
        """Balanced multiplication tree (1 for no operands)."""
        return self._tree(ids, self.mul, 1)

    def embed(self, C: Circuit, inputs) -> int:
        """Copy C into this builder with C's input j wired to gate ``inputs[j]``."""
        if len(inputs) != C.n_inputs:
            raise UsageError(f"embed needs {C.n_inputs} input wires, got {len(inputs)}")
        ids = []
        for g in C.gates:
            if g.op == INPUT:
                ids.append(inputs[g.a])
            elif g.op == CONST:
                ids.append(self.const(g.a))
            elif g.op == ADD:
                ids.append(self.add(ids[g.a], ids[g.b]))
            else:
                ids.append(self.mul(ids[g.a], ids[g.b]))
        return ids[C.output]

    def build(self, output: int) -> Circuit:
        return Circuit(self.n, tuple(self.gates), output)


# -- evaluation ---------------------------------------------------------------

def _field_of(point, field):
    if field is not None:
        return field
    for v in point:
        if isinstance(v, FieldElement):
            return v.field
    raise UsageError("evaluate needs FieldElement inputs or an explicit field")


def evaluate(C: Circuit, point, field: _Field | None = None) -> FieldElement:
    """Gate-by-gate value of C at ``point`` (FieldElements or ints with ``field``)."""
    point = list(point)
    if len(point) != C.n_inputs:
        raise UsageError(f"circuit has {C.n_inputs} inputs, point has {len(point)}")
    F = _field_of(point, field)
    return FieldElement(F, evaluate_raw(C, F, [F.coerce(v) for v in point]))


def evaluate_raw(C: Circuit, F: _Field, xs: list):
    """:func:`evaluate` on raw field values; multiplications by constants are scalings."""
    vals = [None] * len(C.gates)
    is_const = C.is_const
    add, mul, scale, to_base = F.add, F.mul, F.scale, F.to_base
    for i, (op, a, b) in enumerate(C.gates):
        if op == MUL:
            if is_const[a]:
                vals[i] = scale(vals[b], to_base(vals[a]))
            elif is_const[b]:
                vals[i] = scale(vals[a], to_base(vals[b]))
            else:
                vals[i] = mul(vals[a], vals[b])
        elif op == ADD:
            vals[i] = add(vals[a], vals[b])
        elif op == INPUT:
            vals[i] = xs[a]
        else:
            vals[i] = F.from_int(a)
    counts = C.op_counts
    tally("add", counts["add"])
    tally("mul", counts["mul"])
    return vals[C.output]


def _batch_run(C: Circuit, F, inputs, add, mul, scale, shift, count):
    """Shared driver: constant gates stay Python ints (reduced mod q)."""
    q = F.q
    vals: list = [None] * len(C.gates)
    last = C.last_use
    for i, (op, a, b) in enumerate(C.gates):
        if op == INPUT:
            v = inputs[a]
        elif op == CONST:
            v = a % q
        else:
            x, y = vals[a], vals[b]
            xi, yi = isinstance(x, int), isinstance(y, int)
            if xi and yi:
                v = (x + y) % q if op == ADD else (x * y) % q
            elif op == ADD:
                v = shift(y, x) if xi else shift(x, y) if yi else add(x, y)
                count("add", x, y)
            else:
                v = scale(y, x) if xi else scale(x, y) if yi else mul(x, y)
                count("mul", x, y)
            if last[a] == i:
                vals[a] = None
            if last[b] == i:
                vals[b] = None
        vals[i] = v
    return vals[C.output]


def evaluate_batch(C: Circuit, F: _Field, X: np.ndarray) -> np.ndarray:
    """Values at M points at once: X has shape (M, n, l), result (M, l)."""
    X = np.asarray(X, dtype=F.dtype)
    if X.ndim != 3 or X.shape[1] != C.n_inputs or X.shape[2] != F.ell:
        raise UsageError(f"batch input must have shape (M, {C.n_inputs}, {F.ell}), got {X.shape}")
    M = X.shape[0]

    def shift(x, c):
        out = x.copy()
        out[..., 0] = (out[..., 0] + c) % F.q
        return out

    def count(kind, x, y):
        tally(kind, M)

    out = _batch_run(C, F, [X[:, j] for j in range(C.n_inputs)], F.vadd, F.vmul,
                     F.vscale, shift, count)
    if isinstance(out, int):
        return F.vconst(out, (M,))
    return out


class PackedCircuits:
    """Several circuits with the same input count as padded gate arrays.

    Row p holds circuit p; gates past its end have op -1 and are skipped.
    Constants are stored reduced mod ``q``; a multiplication with a
    constant operand is flagged so it runs as a scaling.
    """

    def __init__(self, circuits, q: int):
        circuits = list(circuits)
        if not circuits:
            raise UsageError("need at least one circuit to pack")
        n = circuits[0].n_inputs
        if any(C.n_inputs != n for C in circuits):
            raise UsageError("packed circuits must share the input count")
        self.n_inputs, self.q, self.P = n, q, len(circuits)
        G = max(C.size for C in circuits)
        self.op = np.full((self.P, G), -1, dtype=np.int8)
        self.a = np.zeros((self.P, G), dtype=np.int64)
        self.b = np.zeros((self.P, G), dtype=np.int64)
        self.scaled = np.zeros((self.P, G), dtype=bool)
        for p, C in enumerate(circuits):
            ops, xs, ys = zip(*C.gates)
            k = len(ops)
            const = C.is_const
            # scaling gates keep the constant operand in ``a``
            pairs = [(y, x) if o == MUL and const[y] and not const[x] else (x, y) for o, x, y in C.gates]
            self.op[p, :k] = ops
            self.a[p, :k] = [x % q if o == CONST else pr[0] for o, x, pr in zip(ops, xs, pairs)]
            self.b[p, :k] = [pr[1] for pr in pairs]
            self.scaled[p, :k] = [o == MUL and (const[pr[0]] or const[pr[1]]) for o, pr in zip(ops, pairs)]
        self.output = np.array([C.output for C in circuits], dtype=np.int64)
        self.adds = sum(C.op_counts["add"] for C in circuits)
        self.muls = sum(C.op_counts["mul"] for C in circuits)

    def _run(self, inputs, width, dtype, add, mul, scale):
        P_ = self.P
        G = self.op.shape[1]
        vals = np.zeros((P_, G) + width, dtype=dtype)
        for i in range(G):
            o, a, b = self.op[:, i], self.a[:, i], self.b[:, i]
            sc = self.scaled[:, i]
            for code in (INPUT, CONST, ADD, MUL):
                rows = np.flatnonzero(o == code)
                if not rows.size:
                    continue
                if code == INPUT:
                    vals[rows, i] = inputs[rows, a[rows]]
                elif code == CONST:
                    lead = (slice(None),) * (len(width) - 1)
                    vals[(rows, i) + lead + (0,)] = a[rows].reshape((-1,) + (1,) * (len(width) - 1))
                elif code == ADD:
                    vals[rows, i] = add(vals[rows, a[rows]], vals[rows, b[rows]])
                else:
                    s_rows, m_rows = rows[sc[rows]], rows[~sc[rows]]
                    if s_rows.size:
                        c = vals[s_rows, a[s_rows]][..., :1]
                        vals[s_rows, i] = scale(vals[s_rows, b[s_rows]], c)
                    if m_rows.size:
                        vals[m_rows, i] = mul(vals[m_rows, a[m_rows]], vals[m_rows, b[m_rows]])
        return vals[np.arange(P_), self.output]

    def evaluate(self, F, X: np.ndarray) -> np.ndarray:
        """Circuit p at the M points X[p] (shape (P, M, n, l)); result (P, M, l)."""
        M = X.shape[1]
        if X.shape[0] != self.P or X.shape[2] != self.n_inputs or X.shape[3] != F.ell:
            raise UsageError(f"packed input must have shape ({self.P}, M, {self.n_inputs}, {F.ell})")
        q = F.q
        out = self._run(np.moveaxis(X, 2, 1), (M, F.ell), F.dtype, F.vadd, F.vmul, lambda x, c: (x * c) % q)
        tally("add", self.adds * M)
        tally("mul", self.muls * M)
        return out

    def evaluate_base_polys(self, q: int, polys: np.ndarray, length: int) -> np.ndarray:
        """Circuit p over polynomial wires in F_q[x] truncated to ``length`` coefficients.

        ``polys`` has shape (P, n, L); everything is reduced mod x^length,
        so the result is exact whenever the true output degree is below ``length``.
        """
        X = np.zeros((self.P, self.n_inputs, length), dtype=np.int64)
        L = min(polys.shape[2], length)
        X[:, :, :L] = polys[:, :, :L] % q

        def mul(x, y):
            out = np.zeros_like(x)
            for t in range(length):
                out[:, t:] = (out[:, t:] + x[:, t, None] * y[:, : length - t]) % q
            tally("mul", x.shape[0] * length * (length + 1) // 2)
            return out

        def add(x, y):
            tally("add", x.size)
            return (x + y) % q

        return self._run(X, (length,), np.int64, add, mul, lambda x, c: (x * c) % q)


def evaluate_symbolic(C: Circuit, F: _Field, polys) -> np.ndarray:
    """C composed with univariate polynomials (coefficient arrays (L, l)) as input wires."""
    if len(polys) != C.n_inputs:
        raise UsageError(f"circuit has {C.n_inputs} inputs, got {len(polys)} polynomials")
    polys = [P.trim(np.asarray(p, dtype=F.dtype)) for p in polys]

    def shift(x, c):
        out = P.zeros(F, max(len(x), 1))
        out[: len(x)] = x
        out[0, 0] = (out[0, 0] + c) % F.q
        return P.trim(out)

    def count(kind, x, y):
        pass  # the polynomial routines tally themselves

    out = _batch_run(C, F, polys, lambda x, y: P.trim(P.add(F, x, y)),
                     lambda x, y: P.trim(P.mul(F, x, y)),
                     lambda x, c: P.trim(F.vscale(x, c)), shift, count)
    if isinstance(out, int):
        return P.trim(F.vconst(out, (1,)))
    return out


# -- Boolean formulas --------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int  # 0-based: x1 is Var(0)

    def __repr__(self):
        return f"x{self.index + 1}"


@dataclass(frozen=True)
class BConst:
    value: int

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True)
class Not:
    arg: object

    def __repr__(self):
        return f"!{self.arg!r}"


@dataclass(frozen=True)
class And:
    left: object
    right: object

    def __repr__(self):
        return f"({self.left!r} & {self.right!r})"


@dataclass(frozen=True)
class Or:
    left: object
    right: object

    def __repr__(self):
        return f"({self.left!r} | {self.right!r})"


def _max_var(node) -> int:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, BConst):
        return -1
    if isinstance(node, Not):
        return _max_var(node.arg)
    return max(_max_var(node.left), _max_var(node.right))


def _connectives(node) -> int:
    if isinstance(node, (Var, BConst)):
        return 0
    if isinstance(node, Not):
        return 1 + _connectives(node.arg)
    return 1 + _connectives(node.left) + _connectives(node.right)


def eval_node(node, bits) -> int:
    if isinstance(node, Var):
        return bits[node.index]
    if isinstance(node, BConst):
        return node.value
    if isinstance(node, Not):
        return 1 - eval_node(node.arg, bits)
    if isinstance(node, And):
        return eval_node(node.left, bits) & eval_node(node.right, bits)
    return eval_node(node.left, bits) | eval_node(node.right, bits)


@dataclass(frozen=True)
class BoolFormula:
    """Formula tree over ``n`` variables."""

    root: object
    n: int

    def __post_init__(self):
        if _max_var(self.root) >= self.n:
            raise UsageError(f"formula uses x{_max_var(self.root) + 1} but declares n={self.n}")

    @classmethod
    def of(cls, root, n: int | None = None) -> "BoolFormula":
        return cls(root, _max_var(root) + 1 if n is None else n)

    @property
    def m(self) -> int:
        """Connective count."""
        return _connectives(self.root)

    def __call__(self, bits) -> int:
        return eval_node(self.root, bits)

    def negated(self) -> "BoolFormula":
        return BoolFormula(Not(self.root), self.n)

    def __str__(self):
        return repr(self.root)


@dataclass(frozen=True)
class QuantifiedFormula:
    """``(Q_1 x_1) ... (Q_n x_n) matrix`` with ``prefix[i]`` in {'E', 'A'}."""

    prefix: str
    matrix: BoolFormula

    def __post_init__(self):
        if len(self.prefix) != self.matrix.n:
            raise UsageError(f"prefix has {len(self.prefix)} quantifiers for {self.matrix.n} variables")
        if set(self.prefix) - {"E", "A"}:
            raise UsageError("quantifiers must be E or A")

    @property
    def n(self) -> int:
        return self.matrix.n

    def __str__(self):
        names = " ".join(f"x{i + 1}" for i in range(self.n))
        return f"{self.prefix} {names} : {self.matrix}"


def arithmetize(F: BoolFormula) -> Circuit:
    """AND -> xy, OR -> x + y - xy, NOT -> 1 - x; agrees with F on {0,1}^n."""
    b = CircuitBuilder(F.n)
    out = _arith(b, F.root, {})
    return b.build(out)


def _arith(b: CircuitBuilder, node, memo) -> int:
    key = id(node)
    if key in memo:
        return memo[key][1]
    if isinstance(node, Var):
        g = b.input(node.index)
    elif isinstance(node, BConst):
        g = b.const(node.value)
    elif isinstance(node, Not):
        g = b.sub(b.const(1), _arith(b, node.arg, memo))
    else:
        x = _arith(b, node.left, memo)
        y = _arith(b, node.right, memo)
        if isinstance(node, And):
            g = b.mul(x, y)
        else:
            g = b.sub(b.add(x, y), b.mul(x, y))
    memo[key] = (node, g)  # keep node alive so id() stays unique
    return g


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x\d+)|([01])|([!&|()])|(\S))")


def _tokenize(text: str, line: int = 1, col0: int = 0):
    toks = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(4):
            raise ParseError(f"unexpected character {m.group(4)!r}", line, col0 + start + 1)
        toks.append((m.group(m.lastindex), col0 + start + 1))
        pos = m.end()
    return toks


class _FormulaParser:
    def __init__(self, toks, line, names=None, n=None, end_col=1):
        self.toks = toks
        self.i = 0
        self.line = line
        self.names = names
        self.n = n
        self.end_col = end_col

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def col(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else self.end_col

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self):
        node = self.disj()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r}", self.line, self.col())
        return node

    def disj(self):
        node = self.conj()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self):
        if self.peek() == "!":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of formula", self.line, self.col())
        col = self.col()
        self.take()
        if tok == "(":
            node = self.disj()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.line, self.col())
            self.take()
            return node
        if tok in ("0", "1"):
            return BConst(int(tok))
        if tok.startswith("x"):
            if self.names is not None:
                if tok not in self.names:
                    raise ParseError(f"variable {tok} is not quantified", self.line, col)
                return Var(self.names[tok])
            k = int(tok[1:])
            if k < 1 or (self.n is not None and k > self.n):
                raise ParseError(f"variable {tok} out of range", self.line, col)
            return Var(k - 1)
        raise ParseError(f"unexpected {tok!r}", self.line, col)


def parse_formula(text: str, n: int | None = None) -> BoolFormula:
    """Parse the formula grammar; ``n`` defaults to the largest variable index used."""
    root = _FormulaParser(_tokenize(text), 1, n=n, end_col=len(text) + 1).parse()
    return BoolFormula.of(root, n)


def parse_qbf(text: str) -> QuantifiedFormula:
    """``<E/A string> <variables> : <formula>``; quantifier i binds the i-th listed variable."""
    if ":" not in text:
        raise ParseError("QBF needs ':' between the prefix and the formula", 1, len(text) + 1)
    head, body = text.split(":", 1)
    parts = head.split()
    if not parts:
        raise ParseError("missing quantifier string", 1, 1)
    prefix, names = parts[0], parts[1:]
    if set(prefix) - {"E", "A"}:
        raise ParseError(f"quantifier string {prefix!r} may only contain E and A", 1, text.find(prefix) + 1)
    if len(names) != len(prefix):
        raise ParseError(f"{len(prefix)} quantifiers but {len(names)} variables", 1, len(head) + 1)
    index = {}
    for k, name in enumerate(names):
        if not re.fullmatch(r"x\d+", name) or name in index:
            raise ParseError(f"bad or repeated variable {name!r}", 1, head.find(name) + 1)
        index[name] = k
    col0 = len(head) + 1
    root = _FormulaParser(_tokenize(body, 1, col0), 1, names=index, end_col=len(text) + 1).parse()
    return QuantifiedFormula(prefix, BoolFormula(root, len(prefix)))


_ID = re.compile(r"[A-Za-z_]*(\d+)$")


def parse_circuit(text: str) -> Circuit:
    """Parse the ``.actxt`` format (see module docstring)."""
    n = None
    b = None
    ids: dict[str, int] = {}
    last_num = None
    output = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = raw.find(line) + 1
        parts = line.split()
        if output is not None:
            raise ParseError("content after the output line", lineno, col)
        if n is None:
            m = re.fullmatch(r"circuit\s+n\s*=\s*(\d+)", line)
            if not m:
                raise ParseError("expected header 'circuit n=<int>'", lineno, col)
            n = int(m.group(1))
            b = CircuitBuilder(n, fold=False)
            continue
        if parts[0] == "output":
            if len(parts) != 2 or parts[1] not in ids:
                raise ParseError(f"output must name a defined gate", lineno, col)
            output = ids[parts[1]]
            continue
        gid = parts[0]
        m = _ID.match(gid)
        if not m:
            raise ParseError(f"bad gate id {gid!r}", lineno, col)
        if gid in ids or (last_num is not None and int(m.group(1)) <= last_num):
            raise ParseError(f"gate id {gid!r} not introduced in increasing order", lineno, col)
        if len(parts) < 3:
            raise ParseError("incomplete gate line", lineno, col)
        op = parts[1]
        try:
            if op == "input" and len(parts) == 3:
                j = int(parts[2])
                if not 0 <= j < n:
                    raise ParseError(f"input index {j} outside [0, {n})", lineno, raw.find(parts[2]) + 1)
                b.gates.append(Gate(INPUT, j))
            elif op == "const" and len(parts) == 3:
                b.gates.append(Gate(CONST, int(parts[2])))
            elif op in ("add", "mul") and len(parts) == 4:
                refs = []
                for r in parts[2:]:
                    if r not in ids:
                        raise ParseError(f"reference to undefined gate {r!r}", lineno, raw.find(r, col) + 1)
                    refs.append(ids[r])
                b.gates.append(Gate(ADD if op == "add" else MUL, *refs))
            else:
                raise ParseError(f"bad gate line {line!r}", lineno, col)
        except ValueError:
            raise ParseError(f"bad integer in {line!r}", lineno, col) from None
        ids[gid] = len(b.gates) - 1
        last_num = int(m.group(1))
    if n is None:
        raise ParseError("empty circuit file", 1, 1)
    if output is None:
        raise ParseError("missing output line", len(text.splitlines()) + 1, 1)
    return b.build(output)


def circuit_to_text(C: Circuit) -> str:
    lines = [f"circuit n={C.n_inputs}"]
    for i, g in enumerate(C.gates):
        if g.op in (INPUT, CONST):
            lines.append(f"g{i} {OP_NAMES[g.op]} {g.a}")
        else:
            lines.append(f"g{i} {OP_NAMES[g.op]} g{g.a} g{g.b}")
    lines.append(f"output g{C.output}")
    return "\n".join(lines) + "\n"
