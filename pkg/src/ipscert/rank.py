"""Partition coefficient matrices, exact rank, and full-rank witnesses.

For a multilinear polynomial f over 2n variables split into two sides of
size n, the partition matrix has rows indexed by multilinear monomials in
the row side and columns by monomials in the column side; its (m_y, m_z)
entry is the coefficient of m_y * m_z in f.  Rank is computed exactly over
the rationals by clearing denominators row by row and running
fraction-free (Bareiss) elimination over integers.

fullrank_witness reproduces the recursive control assignment that makes
the gadgeted interval polynomial full rank for any balanced partition:
if the interval endpoints lie on opposite sides, take the leaf branch at
weight 1/2 (w_top = 0, w_leaf = 1/2) and recurse inward; if they lie on
the same side, some valid split cuts the interval into two halves that are
themselves balanced (an discrete intermediate-value argument guarantees
one exists), so select it through the address block (w_top = 1) and
recurse into both halves.  Control variables off the recursion path are
set to 0.  When several splits balance, the smallest cut point is chosen.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .instances import gadgeted_ry_circuit, uvar, valid_splits, wvar
from .poly import SparsePoly, Var, mono_from_pairs, parse_var


@dataclass(frozen=True)
class Partition:
    """A balanced split of variables into row side and column side."""

    y_side: tuple
    z_side: tuple

    def __post_init__(self):
        if not self.y_side or len(self.y_side) != len(self.z_side):
            raise ValueError("partition sides must be nonempty and of equal size")
        if set(self.y_side) & set(self.z_side):
            raise ValueError("partition sides must be disjoint")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        left, _, right = text.partition("|")
        if not right:
            raise ValueError("partition syntax is 'u1,u3|u2,u4'")
        y = tuple(parse_var(t.strip()) for t in left.split(","))
        z = tuple(parse_var(t.strip()) for t in right.split(","))
        return cls(y_side=tuple(sorted(y)), z_side=tuple(sorted(z)))

    def format(self) -> str:
        return ",".join(v.name for v in self.y_side) + "|" + ",".join(v.name for v in self.z_side)

    def side_of(self, v: Var) -> int:
        if v in self.y_side:
            return 0
        if v in self.z_side:
            return 1
        raise ValueError(f"{v.name} is in neither side of the partition")


@dataclass
class RankMatrix:
    """2^n x 2^n coefficient matrix over a balanced partition."""

    row_monos: tuple
    col_monos: tuple
    entries: list  # list of rows of Fractions


def _side_monomials(side: tuple) -> tuple:
    """All multilinear monomials over a side, in subset-mask order."""
    out = []
    for mask in range(1 << len(side)):
        pairs = [(side[k], 1) for k in range(len(side)) if mask >> k & 1]
        out.append(mono_from_pairs(pairs))
    return tuple(out)


def rank_matrix(f: SparsePoly, p: Partition) -> RankMatrix:
    """The partition coefficient matrix of a multilinear polynomial."""
    if not f.is_multilinear():
        raise ValueError("rank matrix requires a multilinear polynomial")
    y_pos = {v: k for k, v in enumerate(p.y_side)}
    z_pos = {v: k for k, v in enumerate(p.z_side)}
    n = len(p.y_side)
    entries = [[Fraction(0)] * (1 << n) for _ in range(1 << n)]
    for m, c in f.terms.items():
        row = col = 0
        for v, _ in m:
            if v in y_pos:
                row |= 1 << y_pos[v]
            elif v in z_pos:
                col |= 1 << z_pos[v]
            else:
                raise ValueError(
                    f"variable {v.name} is outside the partition; substitute it first")
        entries[row][col] = c
    return RankMatrix(row_monos=_side_monomials(p.y_side),
                      col_monos=_side_monomials(p.z_side),
                      entries=entries)


def exact_rank(m) -> int:
    """Exact rank over the rationals by fraction-free elimination.

    Accepts a RankMatrix or a plain list of rows of rationals.  Rows are
    scaled to integers (rank-preserving), then eliminated Bareiss-style so
    every intermediate value stays an exact integer.
    """
    rows = m.entries if isinstance(m, RankMatrix) else m
    a = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        scale = lcm(*(x.denominator for x in fr)) if fr else 1
        a.append([int(x * scale) for x in fr])
    if not a or not a[0]:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(row, n_rows) if a[r][col]), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        for r in range(row + 1, n_rows):
            for c in range(col + 1, n_cols):
                num = a[r][c] * a[row][col] - a[r][col] * a[row][c]
                q, rem = divmod(num, prev)
                if rem:
                    raise AssertionError("fraction-free elimination lost exactness")
                a[r][c] = q
            a[r][col] = 0
        prev = a[row][col]
        rank += 1
        row += 1
        if row == n_rows:
            break
    return rank


def balanced_partitions(uvars: Sequence[Var]):
    """All unordered balanced partitions, the first variable fixed to the row side."""
    uvars = tuple(uvars)
    n = len(uvars) // 2
    if len(uvars) != 2 * n:
        raise ValueError("balanced partitions need an even number of variables")
    first, rest = uvars[0], uvars[1:]
    for combo in itertools.combinations(rest, n - 1):
        y = (first,) + combo
        z = tuple(v for v in rest if v not in combo)
        yield Partition(y_side=y, z_side=z)


def fullrank_witness(n: int, p: Partition) -> dict:
    """Control assignment making the gadgeted interval polynomial full rank.

    Raises RuntimeError if no balancing split exists at some same-side
    interval, which would contradict the construction; the failure is
    reported rather than patched.
    """
    expected = tuple(sorted((uvar(k) for k in range(1, 2 * n + 1))))
    if tuple(sorted(p.y_side + p.z_side)) != expected:
        raise ValueError(f"partition must cover exactly u1..u{2 * n}")
    _, wsets = gadgeted_ry_circuit(n)
    assignment = {}
    for ws in wsets:
        assignment[ws.w_top] = Fraction(0)
        assignment[ws.w_leaf] = Fraction(0)
        for v in ws.address_vars:
            assignment[v] = Fraction(0)

    def balance(i: int, j: int) -> int:
        return sum(1 if p.side_of(uvar(k)) == 0 else -1 for k in range(i, j + 1))

    def rec(i: int, j: int) -> None:
        if j < i:
            return
        if balance(i, j) != 0:
            raise RuntimeError(f"interval [{i},{j}] is not balanced under the partition")
        if p.side_of(uvar(i)) != p.side_of(uvar(j)):
            assignment[wvar(i, j, "top")] = Fraction(0)
            assignment[wvar(i, j, "leaf")] = Fraction(1, 2)
            rec(i + 1, j - 1)
            return
        splits = valid_splits(i, j)
        chosen = None
        for idx, r in enumerate(splits):
            if balance(i, r) == 0:
                chosen = (idx, r)
                break
        if chosen is None:
            raise RuntimeError(
                f"no balancing split for same-side interval [{i},{j}]; "
                "this contradicts the full-rank recursion")
        idx, r = chosen
        assignment[wvar(i, j, "top")] = Fraction(1)
        ws = next(w for w in wsets if (w.i, w.j) == (i, j))
        code = idx + (1 << (len(ws.address_vars) - 1))
        for bit, v in enumerate(ws.address_vars):
            assignment[v] = Fraction(code >> bit & 1)
        rec(i, r)
        rec(r + 1, j)

    rec(1, 2 * n)
    return assignment
