"""Exact rational linear algebra: sparse elimination ranks and small solves.

Ranks over Q determine homology over a field, so no normal-form machinery is
needed.  The workhorse is sparse Gaussian elimination over Fraction with a
fill-reducing pivot choice; a dense fraction-free (Bareiss) elimination over
integers is kept as an independent cross-check oracle.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

SparseMatrix = dict  # {row index: {col index: Fraction}}


def sparse_from_rows(rows: Iterable[Sequence]) -> SparseMatrix:
    out: SparseMatrix = {}
    for i, row in enumerate(rows):
        entries = {j: Fraction(v) for j, v in enumerate(row) if v}
        if entries:
            out[i] = entries
    return out


def sparse_transpose(m: SparseMatrix) -> SparseMatrix:
    out: SparseMatrix = {}
    for i, row in m.items():
        for j, v in row.items():
            out.setdefault(j, {})[i] = v
    return out


def sparse_rank(matrix: SparseMatrix) -> int:
    """Rank by sparse elimination; pivots chosen to limit fill-in."""
    rows = {i: dict(row) for i, row in matrix.items() if row}
    col_rows: dict = {}
    for i, row in rows.items():
        for j in row:
            col_rows.setdefault(j, set()).add(i)
    rank = 0
    while rows:
        best = None
        for i, row in rows.items():
            rlen = len(row)
            for j in row:
                clen = len(col_rows[j])
                cost = (rlen - 1) * (clen - 1)
                if best is None or cost < best[0]:
                    best = (cost, i, j)
            if best is not None and best[0] == 0:
                break
        _, pi, pj = best
        pivot_row = rows.pop(pi)
        pivot_val = pivot_row[pj]
        for j in pivot_row:
            col_rows[j].discard(pi)
        rank += 1
        targets = [i for i in col_rows.get(pj, ()) if i in rows]
        for i in targets:
            row = rows[i]
            factor = row[pj] / pivot_val
            for j, v in pivot_row.items():
                cur = row.get(j)
                nxt = (-factor * v) if cur is None else cur - factor * v
                if nxt:
                    if cur is None:
                        col_rows.setdefault(j, set()).add(i)
                    row[j] = nxt
                else:
                    if cur is not None:
                        del row[j]
                        col_rows[j].discard(i)
            if not row:
                del rows[i]
    return rank


def bareiss_rank(rows: Sequence[Sequence]) -> int:
    """Dense fraction-free elimination over integers (cross-check oracle)."""
    m = []
    for row in rows:
        fracs = [Fraction(v) for v in row]
        scale = 1
        for f in fracs:
            scale = scale * f.denominator // gcd(scale, f.denominator)
        m.append([int(f * scale) for f in fracs])
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row, n_rows):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        for r in range(row + 1, n_rows):
            for c in range(col + 1, n_cols):
                m[r][c] = (m[r][c] * m[row][col] - m[r][col] * m[row][c]) // prev
            m[r][col] = 0
        prev = m[row][col]
        row += 1
        rank += 1
        if row == n_rows:
            break
    return rank


def solve_exact(a_rows: Sequence[Sequence], b_cols: Sequence[Sequence]):
    """Solve A X = B column by column; raises if any system is inconsistent.

    `a_rows` is a dense row-major rational matrix, `b_cols` a list of
    right-hand-side columns.  Returns the solution columns (one exact rational
    list per input column); free variables are set to zero.
    """
    n_rows = len(a_rows)
    n_cols = len(a_rows[0]) if n_rows else 0
    k = len(b_cols)
    aug = [[Fraction(a_rows[i][j]) for j in range(n_cols)]
           + [Fraction(b_cols[c][i]) for c in range(k)]
           for i in range(n_rows)]
    pivots = []
    row = 0
    for col in range(n_cols):
        sel = None
        for r in range(row, n_rows):
            if aug[r][col]:
                sel = r
                break
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        pv = aug[row][col]
        aug[row] = [v / pv for v in aug[row]]
        for r in range(n_rows):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == n_rows:
            break
    for r in range(row, n_rows):
        if any(aug[r][n_cols:]):
            raise ValueError("inconsistent linear system")
    solutions = []
    for c in range(k):
        x = [Fraction(0)] * n_cols
        for r, col in enumerate(pivots):
            x[col] = aug[r][n_cols + c]
        solutions.append(x)
    return solutions


def row_space_basis(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Reduced basis of the row space of a dense rational matrix."""
    work = [[Fraction(v) for v in row] for row in rows]
    n_cols = len(work[0]) if work else 0
    basis = []
    row = 0
    for col in range(n_cols):
        sel = None
        for r in range(row, len(work)):
            if work[r][col]:
                sel = r
                break
        if sel is None:
            continue
        work[row], work[sel] = work[sel], work[row]
        pv = work[row][col]
        work[row] = [v / pv for v in work[row]]
        for r in range(len(work)):
            if r != row and work[r][col]:
                f = work[r][col]
                work[r] = [v - f * w for v, w in zip(work[r], work[row])]
        row += 1
        if row == len(work):
            break
    for r in range(row):
        basis.append(work[r])
    return basis


def sturm_root_count(coeffs: Sequence[Fraction]) -> int:
    """Number of distinct real roots of a rational polynomial.

    `coeffs` are ascending (constant term first).  The zero polynomial is
    rejected; callers must handle the identically-zero case themselves.
    """
    p = _trim([Fraction(c) for c in coeffs])
    if not p:
        raise ValueError("zero polynomial has infinitely many roots")
    if len(p) == 1:
        return 0
    p = _square_free(p)
    chain = [p, _poly_derivative(p)]
    while len(chain[-1]) > 1 or (chain[-1] and chain[-1][0]):
        rem = _poly_mod(chain[-2], chain[-1])
        rem = [-c for c in rem]
        if not rem:
            break
        chain.append(rem)
    return _sign_changes(chain, -1) - _sign_changes(chain, +1)


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_derivative(p):
    return _trim([p[i] * i for i in range(1, len(p))])


def _poly_mod(a, b):
    a = list(a)
    if not b:
        raise ZeroDivisionError
    while len(a) >= len(b) and _trim(a):
        if not a:
            break
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = _trim(a)
    return a


def _poly_gcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _poly_divide(a, b):
    """Exact quotient a / b (remainder must vanish)."""
    a = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = _trim(a)
        if not a:
            break
    if a:
        raise ValueError("non-exact polynomial division")
    return q


def _square_free(p):
    d = _poly_derivative(p)
    if not d:
        return p
    g = _poly_gcd(p, d)
    if len(g) <= 1:
        return p
    return _poly_divide(p, [c / g[-1] for c in g])


def _sign_at_infinity(p, direction):
    lead = p[-1]
    if direction > 0:
        return 1 if lead > 0 else -1
    deg = len(p) - 1
    s = 1 if lead > 0 else -1
    return s if deg % 2 == 0 else -s


def _sign_changes(chain, direction):
    signs = []
    for p in chain:
        if not p:
            continue
        signs.append(_sign_at_infinity(p, direction))
    changes = 0
    for a, b in zip(signs, signs[1:]):
        if a * b < 0:
            changes += 1
    return changes
