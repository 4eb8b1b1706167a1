"""The integer exponent matrix a_ij of the commutator relations.

Indices are 1-based everywhere in the public API. Entries are Python ints,
so nothing overflows: a_nn = -2^(n-1).
"""
import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import pandas as pd

from errors import IndexOutOfRange

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoeffMatrix:
    n_max: int
    entries: Tuple[Tuple[int, ...], ...]

    def __call__(self, i, j):
        """a_ij; zero for j beyond the stored block (a_nl = 0 for l > n)."""
        if not 1 <= i <= self.n_max or j < 1:
            raise IndexOutOfRange(f"a_({i},{j}) is outside the computed block 1..{self.n_max}")
        if j > self.n_max:
            return 0
        return self.entries[i - 1][j - 1]

    def row(self, n):
        return list(self.entries[n - 1])

    def with_entry(self, i, j, value):
        rows = [list(r) for r in self.entries]
        rows[i - 1][j - 1] = value
        return CoeffMatrix(self.n_max, tuple(tuple(r) for r in rows))


def build_recursive(n_max: int) -> CoeffMatrix:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    rows = []
    # colsum[j] = sum of a_lj over the rows built so far
    colsum = [0] * (n_max + 1)
    for i in range(1, n_max + 1):
        row = [0] * (n_max + 1)
        if i == 1:
            row[1] = -1
        else:
            row[1] = 1 if i == 2 else 0
            prev = rows[-1]
            for j in range(2, n_max + 1):
                row[j] = colsum[j - 1] - colsum[j] + prev[j - 1]
        rows.append(row)
        for j in range(1, n_max + 1):
            colsum[j] += row[j]
    return CoeffMatrix(n_max, tuple(tuple(r[1:]) for r in rows))


def _binom(l, m):
    return math.comb(l, m) if 0 <= m <= l else 0


def closed_form(i: int, j: int) -> int:
    """a_ij from the binomial closed form.

    A term whose binomial coefficient is out of range is exactly zero, and is
    dropped before its power of two is looked at.
    """
    if i < 1 or j < 1:
        raise IndexOutOfRange(f"closed form needs i, j >= 1, got ({i}, {j})")
    value = 0
    c1 = _binom(j - 1, i - j - 1)
    if c1:
        value += (-1 if (i - j - 1) % 2 else 1) * 2 ** (2 * j - i) * c1
    c2 = _binom(j - 1, i - j)
    if c2:
        value -= (-1 if (i - j) % 2 else 1) * 2 ** (2 * j - i - 1) * c2
    return value


def closed_form_matches(M: CoeffMatrix) -> List[Tuple[int, int]]:
    """Positions where the closed form disagrees with the stored entry."""
    return [(i, j) for i in range(1, M.n_max + 1) for j in range(1, M.n_max + 1)
            if closed_form(i, j) != M(i, j)]


def simplified_recurrence_holds(M: CoeffMatrix) -> Optional[Tuple[int, int]]:
    """First (i, j) with a_ij != 2 a_(i-1,j-1) - a_(i-2,j-1), or None."""
    for i in range(3, M.n_max + 1):
        for j in range(2, M.n_max + 1):
            if M(i, j) != 2 * M(i - 1, j - 1) - M(i - 2, j - 1):
                return (i, j)
    return None


class RowCheck(NamedTuple):
    n: int
    ok: bool
    failed: Optional[str]


class RowIdentityReport(NamedTuple):
    rows: List[RowCheck]

    @property
    def ok(self):
        return all(r.ok for r in self.rows)

    @property
    def first_failure(self):
        return next((r for r in self.rows if not r.ok), None)


def _check_row(M, n):
    row = M.row(n)
    if sum(row) != -1:
        return 'row-sum'
    if M(n, n) != -2 ** (n - 1):
        return 'diagonal'
    if any(row[l - 1] for l in range(n + 1, M.n_max + 1)):
        return 'upper-zero'
    odd = [j for j in range(1, M.n_max + 1) if row[j - 1] % 2]
    if odd != [(n + 1) // 2]:
        return 'unique-odd'
    return None


def check_row_identities(M: CoeffMatrix) -> RowIdentityReport:
    rows = []
    for n in range(1, M.n_max + 1):
        failed = _check_row(M, n)
        rows.append(RowCheck(n, failed is None, failed))
    report = RowIdentityReport(rows)
    if not report.ok:
        logger.info("row identities fail first at row %d (%s)",
                    report.first_failure.n, report.first_failure.failed)
    return report


def check_sum_identity(M: CoeffMatrix, m: int, n: int) -> bool:
    if not 1 <= m <= n <= M.n_max - 1:
        raise IndexOutOfRange(f"summation identity needs 1 <= m <= n <= {M.n_max - 1}, got m={m}, n={n}")
    lhs = sum(M(n, j) for j in range(m, n + 1)) + sum(M(j, m) for j in range(m, n + 1))
    rhs = sum(M(n + 1, j) for j in range(m + 1, n + 2))
    return lhs == rhs


def relation_exponents(M: CoeffMatrix, n: int) -> List[Tuple[int, int]]:
    """Nonzero (j, a_nj) pairs: the h-exponents in the level-j correction factors."""
    return [(j, M(n, j)) for j in range(1, n + 1) if M(n, j) != 0]


def to_frame(M: CoeffMatrix, blanks=True) -> pd.DataFrame:
    def cell(v):
        if blanks:
            return '' if v == 0 else str(v)
        return v
    data = [[cell(v) for v in row] for row in M.entries]
    index = pd.Index(range(1, M.n_max + 1), name='i')
    return pd.DataFrame(data, index=index, columns=list(range(1, M.n_max + 1)), dtype=object)


_shared = {'matrix': None}


def coeff_matrix(n: int) -> CoeffMatrix:
    """A shared matrix covering rows 1..n, rebuilt at twice the size when outgrown."""
    current = _shared['matrix']
    if current is None or current.n_max < n:
        size = max(n, 16, 2 * current.n_max if current else 0)
        logger.debug("building coefficient matrix up to n=%d", size)
        current = build_recursive(size)
        _shared['matrix'] = current
    return current
