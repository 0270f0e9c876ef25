"""Latin-square scaffolds and the seeded jumble graph.

An l-square is the partition form of a Latin square: rows, columns and
diagonals of an l*l cell set, any two blocks from different partitions
meeting in exactly one cell.  The cyclic square (diagonal d holds the
cells with row+col = d mod l) is used throughout for reproducibility.

A scaffold for the jumble construction is a 3-vertex path plus l
pairwise disjoint l-squares; pairs of vertices inside the path or
inside one line are fixed (deterministic adjacency), all other pairs
are free fair coins.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InvalidParameters, ParseError
from .graphs import Graph
from .rng import coin_array

__all__ = [
    "LSquare",
    "LPattern",
    "LineRef",
    "PairClass",
    "make_l_square",
    "make_l_pattern",
    "pair_class",
    "sample_jumble_graph",
    "s1_witness",
    "S1Witness",
]


@dataclass(frozen=True)
class LSquare:
    l: int
    cells: tuple  # absolute vertex ids, row-major
    rows: tuple  # l frozensets each
    columns: tuple
    diagonals: tuple

    def lines(self):
        for kind, blocks in (("row", self.rows), ("col", self.columns), ("diag", self.diagonals)):
            for i, b in enumerate(blocks):
                yield kind, i, b


@dataclass(frozen=True)
class LineRef:
    square: int  # 1-based square index
    kind: str  # "row" | "col" | "diag"
    index: int
    cells: frozenset


@dataclass(frozen=True)
class PairClass:
    kind: str  # "fixed_p3" | "fixed_line" | "free"
    line: LineRef | None = None


def make_l_square(l: int, offset: int = 0) -> LSquare:
    """Cyclic l-square on cell ids offset..offset+l*l-1 (row-major)."""
    if l < 1:
        raise InvalidParameters("l must be >= 1")
    cell = lambda r, c: offset + r * l + c  # noqa: E731
    rows = tuple(frozenset(cell(r, c) for c in range(l)) for r in range(l))
    cols = tuple(frozenset(cell(r, c) for r in range(l)) for c in range(l))
    diags = tuple(
        frozenset(cell(r, c) for r in range(l) for c in range(l) if (r + c) % l == d)
        for d in range(l)
    )
    square = LSquare(l, tuple(range(offset, offset + l * l)), rows, cols, diags)
    _validate_square(square)
    return square


def _validate_square(sq: LSquare):
    for blocks in (sq.rows, sq.columns, sq.diagonals):
        assert len(blocks) == sq.l
        for b in blocks:
            assert len(b) == sq.l
    groups = (sq.rows, sq.columns, sq.diagonals)
    for a in range(3):
        for b in range(a + 1, 3):
            for x in groups[a]:
                for y in groups[b]:
                    assert len(x & y) == 1, "cross-family blocks must meet exactly once"


@dataclass(frozen=True)
class LPattern:
    l: int
    squares: tuple  # l LSquares, vertex-disjoint, after the 3 path vertices

    @property
    def n(self) -> int:
        return self.l**3 + 3

    @property
    def p3_vertices(self):
        return (0, 1, 2)

    @property
    def p3_edges(self):
        return ((0, 1), (1, 2))

    def lines(self):
        for idx, sq in enumerate(self.squares, start=1):
            for kind, i, cells in sq.lines():
                yield LineRef(idx, kind, i, cells)

    def line_lookup(self):
        """vertex -> tuple of LineRefs through it (path vertices: none)."""
        table = [[] for _ in range(self.n)]
        for ref in self.lines():
            for v in ref.cells:
                table[v].append(ref)
        return [tuple(refs) for refs in table]

    def to_json(self, indent=None) -> str:
        doc = {
            "l": self.l,
            "n": self.n,
            "p3_vertices": list(self.p3_vertices),
            "p3_edges": [list(e) for e in self.p3_edges],
            "squares": [
                {"cells": list(sq.cells)} for sq in self.squares
            ],
        }
        return json.dumps(doc, sort_keys=True, indent=indent)

    @staticmethod
    def from_json(text: str) -> "LPattern":
        doc = json.loads(text)
        pat = make_l_pattern(doc["l"])
        if doc.get("n", pat.n) != pat.n:
            raise ParseError("scaffold vertex count does not match l")
        for sq, entry in zip(pat.squares, doc.get("squares", [])):
            if list(sq.cells) != entry["cells"]:
                raise ParseError("scaffold cell numbering must be canonical")
        return pat


def make_l_pattern(l: int) -> LPattern:
    """Canonical scaffold: path vertices 0,1,2 with edges (0,1),(1,2),
    then square i on 3 + (i-1)l^2 .. 2 + i*l^2, cells row-major."""
    if l < 1:
        raise InvalidParameters("l must be >= 1")
    squares = tuple(make_l_square(l, offset=3 + i * l * l) for i in range(l))
    return LPattern(l, squares)


def pair_class(pat: LPattern, u: int, v: int) -> PairClass:
    """fixed_p3 (both path vertices), fixed_line (both on one line;
    transversality makes that line unique), or free."""
    if u == v:
        raise InvalidParameters("a pair needs two distinct vertices")
    if not (0 <= u < pat.n and 0 <= v < pat.n):
        raise InvalidParameters("vertex outside the scaffold")
    if u < 3 and v < 3:
        return PairClass("fixed_p3")
    table = pat.line_lookup()
    shared = [ref for ref in table[u] if v in ref.cells]
    if shared:
        assert len(shared) == 1, "a pair lies on at most one line"
        return PairClass("fixed_line", shared[0])
    return PairClass("free")


def _pair_rank(u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def sample_jumble_graph(pat: LPattern, seed: int) -> Graph:
    """Random graph on the scaffold: the path induces itself, square i
    induces the structure whose rows and first i diagonals are stable
    while columns and the remaining diagonals are cliques, and every
    free pair is a fair coin indexed by its position (so the sample is
    independent of iteration order)."""
    n = pat.n
    adj = [0] * n

    def add(u, v):
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    for u, v in pat.p3_edges:
        add(u, v)
    fixed = set()
    for a, b in ((0, 1), (0, 2), (1, 2)):
        fixed.add(_pair_rank(a, b))
    for idx, sq in enumerate(pat.squares, start=1):
        for kind, i, cells in sq.lines():
            members = sorted(cells)
            if kind == "row":
                is_clique = False
            elif kind == "col":
                is_clique = True
            else:
                is_clique = i >= idx  # first idx diagonals are stable
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    u, v = members[a], members[b]
                    fixed.add(_pair_rank(u, v))
                    if is_clique:
                        add(u, v)
    coins = coin_array(seed, n * (n - 1) // 2)
    for v in range(n):
        for u in range(v):
            rank = _pair_rank(u, v)
            if rank not in fixed and coins[rank]:
                add(u, v)
    return Graph(n, tuple(adj))


@dataclass(frozen=True)
class S1Witness:
    s: int
    blocks: tuple  # l^2 frozensets covering everything but the path
    roles: tuple  # "stable" | "clique" per block


def s1_witness(pat: LPattern, s: int) -> S1Witness:
    """The l^2 line blocks realizing s stable and l^2 - s clique parts in
    every sampled graph.

    Writing s = q*l + r: all rows when s = l^2; otherwise the diagonals
    of square r (its first r diagonals are stable) when r > 0, rows of
    the q lowest-indexed other squares, columns of the rest.
    """
    l = pat.l
    if not 0 <= s <= l * l:
        raise InvalidParameters(f"s must lie in 0..{l * l}")
    blocks = []
    roles = []
    q, r = divmod(s, l)
    if s == l * l:
        row_squares, col_squares, diag_square = list(range(1, l + 1)), [], None
    elif r == 0:
        row_squares = list(range(1, q + 1))
        col_squares = [i for i in range(1, l + 1) if i not in row_squares]
        diag_square = None
    else:
        diag_square = r
        others = [i for i in range(1, l + 1) if i != r]
        row_squares = others[:q]
        col_squares = others[q:]
    if diag_square is not None:
        sq = pat.squares[diag_square - 1]
        for d, cells in enumerate(sq.diagonals):
            blocks.append(cells)
            roles.append("stable" if d < diag_square else "clique")
    for i in row_squares:
        for cells in pat.squares[i - 1].rows:
            blocks.append(cells)
            roles.append("stable")
    for i in col_squares:
        for cells in pat.squares[i - 1].columns:
            blocks.append(cells)
            roles.append("clique")
    witness = S1Witness(s, tuple(blocks), tuple(roles))
    assert sum(1 for role in witness.roles if role == "stable") == s
    assert len(witness.blocks) == l * l
    return witness
