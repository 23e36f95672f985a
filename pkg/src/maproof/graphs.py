"""Small graphs, 0/1 vector sets and integer matrices: types and text formats."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property

from .errors import ParseError, UsageError


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices 0..n-1; undirected edges are stored once with u < v."""

    n: int
    edges: tuple
    directed: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise UsageError("graph needs n >= 0")
        clean = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise UsageError(f"edge ({u}, {v}) outside a {self.n}-vertex graph")
            if u == v:
                continue
            clean.add((u, v) if self.directed else (min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(clean)))

    @cached_property
    def adjacency(self) -> tuple:
        A = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges:
            A[u][v] = 1
            if not self.directed:
                A[v][u] = 1
        return tuple(tuple(row) for row in A)

    @cached_property
    def neighbors(self) -> tuple:
        return tuple(frozenset(j for j in range(self.n) if self.adjacency[i][j]) for i in range(self.n))

    def as_directed(self) -> "Graph":
        if self.directed:
            return self
        return Graph(self.n, self.edges + tuple((v, u) for u, v in self.edges), True)


def parse_edge_list(text: str, n: int | None = None, directed: bool = False) -> Graph:
    """Lines "u v" with 1-indexed vertices.

    A line holding a single integer sets the vertex count (needed for
    isolated vertices); otherwise it is the largest vertex mentioned.
    Blank lines and ``#`` comments are ignored.
    """
    edges, declared = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno, 1) from None
        if len(nums) == 1 and declared is None and not edges:
            declared = nums[0]
        elif len(nums) == 2:
            if min(nums) < 1:
                raise ParseError("vertices are numbered from 1", lineno, 1)
            edges.append((nums[0] - 1, nums[1] - 1))
        else:
            raise ParseError(f"expected 'u v', got {line!r}", lineno, 1)
    size = n if n is not None else declared
    if size is None:
        size = max((max(e) + 1 for e in edges), default=0)
    if any(max(e) >= size for e in edges):
        raise ParseError(f"edge endpoint exceeds the vertex count {size}")
    return Graph(size, tuple(edges), directed)


def graph_to_text(G: Graph) -> str:
    return "".join([f"{G.n}\n"] + [f"{u + 1} {v + 1}\n" for u, v in G.edges])


def parse_int_csv(text: str) -> list[list[int]]:
    """Rows of comma-separated integers; blank lines skipped."""
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        cells = [c.strip() for c in row]
        if not any(cells):
            continue
        try:
            rows.append([int(c) for c in cells])
        except ValueError:
            raise ParseError(f"non-integer entry in {row!r}", lineno, 1) from None
    return rows


def parse_matrix(text: str) -> list[list[int]]:
    rows = parse_int_csv(text)
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ParseError("matrix must be square and non-empty")
    return rows


def parse_vectors(text: str) -> list[tuple[int, ...]]:
    rows = parse_int_csv(text)
    if not rows:
        raise ParseError("need at least one vector")
    width = len(rows[0])
    for i, r in enumerate(rows, 1):
        if len(r) != width:
            raise ParseError(f"vector {i} has {len(r)} entries, expected {width}", i, 1)
        if any(x not in (0, 1) for x in r):
            raise ParseError(f"vector {i} is not 0/1", i, 1)
    return [tuple(r) for r in rows]


def rows_to_csv(rows) -> str:
    return "".join(",".join(str(int(x)) for x in row) + "\n" for row in rows)
