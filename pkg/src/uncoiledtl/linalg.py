"""Exact dense linear algebra over Fraction (or complex) entries.

Plain Gaussian elimination with a deterministic pivot order: scan columns
left to right, take the first row with a nonzero entry.  Over Fractions the
arithmetic is exact; the float path (used only by the complex backend)
pivots on the first entry above a small threshold.
"""

from __future__ import annotations

from fractions import Fraction

_PIVOT_TOL = 1e-12


class SingularSystemError(ValueError):
    """The linear system has no unique solution at these parameters."""


def _nonzero(x) -> bool:
    if isinstance(x, (Fraction, int)):
        return x != 0
    return abs(x) > _PIVOT_TOL


def echelon(rows, rhs=None):
    """Row-reduce in place; returns the list of pivot columns."""
    if not rows:
        return []
    ncols = len(rows[0])
    piv_cols = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if _nonzero(rows[i][col]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        if rhs is not None:
            rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        if rhs is not None:
            rhs[r] = rhs[r] * inv
        for i in range(len(rows)):
            if i != r and _nonzero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                if rhs is not None:
                    rhs[i] = rhs[i] - f * rhs[r]
        piv_cols.append(col)
        r += 1
        if r == len(rows):
            break
    return piv_cols


def rank(rows) -> int:
    work = [list(r) for r in rows]
    return len(echelon(work))


def nullspace(rows, ncols):
    """A basis of the kernel of the (rows x ncols) matrix."""
    work = [list(r) for r in rows if any(_nonzero(x) for x in r)]
    if not work:
        eye = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            eye.append(v)
        return eye
    piv_cols = echelon(work)
    piv_set = set(piv_cols)
    free = [c for c in range(ncols) if c not in piv_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(piv_cols):
            v[pc] = -work[r][fc]
        basis.append(v)
    return basis


