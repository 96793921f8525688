"""Dense linear algebra over the rationals.

Everything here works on lists of lists of Fractions and is meant for the
small systems that show up when completing matrices of cubics: a few dozen
rows, no pivoting subtleties beyond exact nonzero tests.  Floating-point
callers should use numpy instead.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InputError


def _as_fraction_rows(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    out = []
    width = None
    for r in rows:
        fr = [Fraction(v) for v in r]
        if width is None:
            width = len(fr)
        elif len(fr) != width:
            raise InputError("ragged matrix")
        out.append(fr)
    if not out:
        raise InputError("empty matrix")
    return out


def exact_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with the list of pivot columns."""
    M = _as_fraction_rows(rows)
    nr, nc = len(M), len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        pivot_row = next((i for i in range(r, nr) if M[i][c] != 0), None)
        if pivot_row is None:
            continue
        M[r], M[pivot_row] = M[pivot_row], M[r]
        inv = Fraction(1) / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(nr):
            if i != r and M[i][c] != 0:
                factor = M[i][c]
                M[i] = [a - factor * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return M, pivots


def exact_nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column of the RREF."""
    R, pivots = exact_rref(rows)
    nc = len(R[0])
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * nc
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -R[ri][fc]
        basis.append(v)
    return basis


def exact_solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """One solution of A x = b; raises on inconsistency.

    Overdetermined systems are welcome: consistency of every dependent row is
    checked exactly, which is the point of using this over least squares.
    Underdetermined systems return the solution with free variables at zero.
    """
    M = _as_fraction_rows(rows)
    b = [Fraction(v) for v in rhs]
    if len(b) != len(M):
        raise InputError("rhs length mismatch")
    aug = [row + [bv] for row, bv in zip(M, b)]
    R, pivots = exact_rref(aug)
    nc = len(M[0])
    if nc in pivots:
        raise InputError("inconsistent linear system")
    x = [Fraction(0)] * nc
    for ri, pc in enumerate(pivots):
        x[pc] = R[ri][nc]
    return x


def exact_rank(rows: Sequence[Sequence]) -> int:
    return len(exact_rref(rows)[1])


def exact_matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list[Fraction]]:
    Ar = _as_fraction_rows(A)
    Br = _as_fraction_rows(B)
    if len(Ar[0]) != len(Br):
        raise InputError("shape mismatch")
    return [
        [sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*Br)]
        for row in Ar
    ]


def exact_inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    M = _as_fraction_rows(rows)
    n = len(M)
    if any(len(r) != n for r in M):
        raise InputError("inverse of a non-square matrix")
    aug = [row + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = exact_rref(aug)
    if pivots != list(range(n)):
        raise InputError("matrix is singular")
    return [row[n:] for row in R]
