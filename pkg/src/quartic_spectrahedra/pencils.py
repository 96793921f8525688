"""Symmetric 4x4 matrix pencils A(x) = x0 A0 + x1 A1 + x2 A2 + x3 A3.

The pencil is the package's central object: its determinant is the quartic
symmetroid, the set where A(x) is positive semidefinite is the spectrahedron,
and congruence acts on everything covariantly.  Exact integer or rational
input stays exact through determinants, adjugates, signatures and congruence;
floats take the numpy route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError
from .points import ProjPoint
from .polynomials import MultiPoly, poly_matrix_det
from .tolerances import DEFAULT_TOL, Tolerances

_EXACT_TYPES = (int, Fraction)


def _canon_entry(v):
    if isinstance(v, bool):
        raise InputError("boolean matrix entry")
    if isinstance(v, _EXACT_TYPES):
        return Fraction(v)
    if isinstance(v, (np.integer,)):
        return Fraction(int(v))
    if isinstance(v, (float, complex, np.floating, np.complexfloating)):
        return complex(v)
    raise InputError(f"unsupported matrix entry type {type(v).__name__}")


class SymmetricPencil:
    """Immutable tuple of symmetric coefficient matrices, one per variable."""

    __slots__ = ("matrices", "size", "nvars", "exact")

    def __init__(self, matrices: Sequence[Sequence[Sequence]]):
        mats = []
        exact = True
        for M in matrices:
            rows = [[_canon_entry(v) for v in row] for row in M]
            n = len(rows)
            if any(len(r) != n for r in rows):
                raise InputError("matrix is not square")
            for i in range(n):
                for j in range(i + 1, n):
                    if rows[i][j] != rows[j][i]:
                        a, b = complex(rows[i][j]), complex(rows[j][i])
                        if abs(a - b) > 1e-12 * max(1.0, abs(a), abs(b)):
                            raise InputError(f"matrix entry ({i},{j}) breaks symmetry")
                        # float dust: symmetrize
                        avg = (a + b) / 2
                        rows[i][j] = avg
                        rows[j][i] = avg
            if any(not isinstance(v, Fraction) for r in rows for v in r):
                exact = False
            mats.append(tuple(tuple(v for v in r) for r in rows))
        if not mats:
            raise InputError("empty pencil")
        size = len(mats[0])
        if any(len(M) != size for M in mats):
            raise InputError("matrices have mixed sizes")
        if not exact:
            mats = [
                tuple(tuple(complex(v) for v in r) for r in M) for M in mats
            ]
        object.__setattr__(self, "matrices", tuple(mats))
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "nvars", len(mats))
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("SymmetricPencil is immutable")

    # -- evaluation ----------------------------------------------------------

    def evaluate_exact(self, x: Sequence) -> list[list[Fraction]]:
        if not self.exact or not all(isinstance(v, _EXACT_TYPES) for v in x):
            raise InputError("exact evaluation needs exact pencil and point")
        n = self.size
        out = [[Fraction(0)] * n for _ in range(n)]
        for Xk, M in zip(x, self.matrices):
            q = Fraction(Xk)
            if q == 0:
                continue
            for i in range(n):
                for j in range(n):
                    out[i][j] += q * M[i][j]
        return out

    def evaluate(self, x: Sequence) -> np.ndarray:
        A = np.zeros((self.size, self.size), dtype=complex)
        for xv, M in zip(x, self.matrices):
            A += complex(xv) * np.array([[complex(v) for v in r] for r in M])
        return A

    def float_matrices(self) -> np.ndarray:
        """Stack of coefficient matrices as a (nvars, n, n) complex array."""
        return np.array(
            [[[complex(v) for v in r] for r in M] for M in self.matrices]
        )

    def entry_poly(self, i: int, j: int) -> MultiPoly:
        return MultiPoly(
            self.nvars,
            {
                tuple(int(k == m) for m in range(self.nvars)): self.matrices[k][i][j]
                for k in range(self.nvars)
            },
        )

    def entry_matrix(self) -> list[list[MultiPoly]]:
        return [
            [self.entry_poly(i, j) for j in range(self.size)] for i in range(self.size)
        ]

    # -- algebra -------------------------------------------------------------

    def is_real(self, tol: float = DEFAULT_TOL.realness) -> bool:
        if self.exact:
            return True
        scale = max(
            (abs(v) for M in self.matrices for r in M for v in r), default=1.0
        ) or 1.0
        return all(
            abs(v.imag) <= tol * scale for M in self.matrices for r in M for v in r
        )

    def conjugate(self) -> "SymmetricPencil":
        if self.exact:
            return self
        return SymmetricPencil(
            [[[v.conjugate() for v in r] for r in M] for M in self.matrices]
        )

    def __neg__(self) -> "SymmetricPencil":
        return SymmetricPencil([[[-v for v in r] for r in M] for M in self.matrices])

    def scale(self, c) -> "SymmetricPencil":
        return SymmetricPencil([[[v * c for v in r] for r in M] for M in self.matrices])

    def variable_substitution(self, S: Sequence[Sequence]) -> "SymmetricPencil":
        """Pencil of x -> A(S y); column j of S builds the new j-th matrix."""
        rows = [list(r) for r in S]
        if len(rows) != self.nvars:
            raise InputError("substitution matrix has wrong row count")
        m = len(rows[0])
        mats = []
        for j in range(m):
            n = self.size
            acc = [[0 for _ in range(n)] for _ in range(n)]
            for i in range(self.nvars):
                cij = rows[i][j]
                if cij == 0:
                    continue
                Mi = self.matrices[i]
                for a in range(n):
                    for b in range(n):
                        acc[a][b] += cij * Mi[a][b]
            mats.append(acc)
        return SymmetricPencil(mats)


def congruence_apply(P: SymmetricPencil, T: Sequence[Sequence]) -> SymmetricPencil:
    """The pencil T^t A(x) T; exact for exact inputs."""
    rows = [list(r) for r in T]
    n = P.size
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError("congruence matrix has wrong shape")
    mats = []
    for M in P.matrices:
        MT = [[sum(M[i][k] * rows[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        TMT = [[sum(rows[k][i] * MT[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        mats.append(TMT)
    return SymmetricPencil(mats)


def pencil_determinant(P: SymmetricPencil) -> MultiPoly:
    """det A(x) as a degree-n form in the pencil variables."""
    return poly_matrix_det(P.entry_matrix())


def adjugate_pencil(P: SymmetricPencil) -> list[list[MultiPoly]]:
    """Adjugate matrix of A(x): entries are degree n-1 forms, adj(A) A = det(A) I."""
    M = P.entry_matrix()
    n = P.size
    adj: list[list[MultiPoly | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [
                [M[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = poly_matrix_det(sub)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# signatures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    pos: int
    neg: int
    zero: int

    @property
    def rank(self) -> int:
        return self.pos + self.neg

    def flipped(self) -> "Signature":
        return Signature(self.neg, self.pos, self.zero)

    def semidefinite(self) -> bool:
        return self.pos == 0 or self.neg == 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.pos, self.neg, self.zero)


def _exact_signature(M: Sequence[Sequence[Fraction]]) -> Signature:
    n = len(M)
    W = [[Fraction(v) for v in row] for row in M]
    active = list(range(n))
    pos = neg = zero = 0
    while active:
        piv = next((i for i in active if W[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and W[i][j] != 0),
                None,
            )
            if pair is None:
                zero += len(active)
                break
            i, j = pair
            # symmetric row+col addition makes W[i][i] = 2 W[i][j] != 0
            for k in range(n):
                W[i][k] += W[j][k]
            for k in range(n):
                W[k][i] += W[k][j]
            continue
        d = W[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        pivot_row = [W[piv][j] for j in range(n)]
        for i in active:
            r = W[i][piv] / d
            if r:
                for j in active:
                    W[i][j] -= r * pivot_row[j]
    return Signature(pos, neg, zero)


def signature_via_charpoly(M: Sequence[Sequence[Fraction]]) -> Signature:
    """Cross-check oracle: Descartes count on the characteristic polynomial.

    Valid because a real symmetric matrix has a real-rooted characteristic
    polynomial; exact arithmetic throughout.
    """
    n = len(M)
    A = [[Fraction(v) for v in row] for row in M]
    # Faddeev-LeVerrier: p(t) = t^n + c[n-1] t^(n-1) + ... + c[0]
    coeffs = [Fraction(0)] * n
    Mk = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    AM = A
    for k in range(1, n + 1):
        if k > 1:
            AM = [
                [sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)]
                for i in range(n)
            ]
        trace = sum(AM[i][i] for i in range(n))
        ck = -trace / k
        coeffs[n - k] = ck
        Mk = [[AM[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    poly = coeffs + [Fraction(1)]  # ascending
    zero = 0
    while poly[zero] == 0 and zero < n:
        zero += 1
    reduced = poly[zero:]
    signs = [c for c in reduced if c != 0]
    variations = sum(
        1 for a, b in zip(signs, signs[1:]) if (a < 0 < b) or (b < 0 < a)
    )
    pos = variations
    return Signature(pos, n - zero - pos, zero)


def matrix_signature(
    M: Sequence[Sequence] | np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> Signature:
    """Inertia of a real symmetric matrix; exact when the entries are rational."""
    if isinstance(M, np.ndarray):
        rows = M.tolist()
    else:
        rows = [list(r) for r in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("matrix is not square")
    if all(isinstance(v, _EXACT_TYPES) for r in rows for v in r):
        return _exact_signature(rows)
    A = np.array(rows, dtype=complex)
    if np.max(np.abs(A - A.T)) > 1e-10 * max(1.0, np.max(np.abs(A))):
        raise InputError("matrix is not symmetric")
    if np.max(np.abs(A.imag)) > tol.realness * max(1.0, np.max(np.abs(A))):
        raise InputError("signature of a genuinely complex matrix is undefined")
    evals = np.linalg.eigvalsh(A.real.astype(float))
    scale = max(1.0, float(np.max(np.abs(evals))))
    gate = tol.rank_gate * scale
    pos = int(np.sum(evals > gate))
    neg = int(np.sum(evals < -gate))
    return Signature(pos, neg, n - pos - neg)


def matrix_rank(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    """Numerical rank via singular values with a relative gate."""
    sv = np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol.rank_gate * sv[0]))


# ---------------------------------------------------------------------------
# spectrahedron interior
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InteriorResult:
    status: str                   # "FOUND" or "EMPTY_WITH_MARGIN"
    point: tuple[float, ...] | None
    min_eigenvalue: float         # at `point` for FOUND, best seen otherwise
    starts_used: int

    @property
    def found(self) -> bool:
        return self.status == "FOUND"


def find_interior_point(
    P: SymmetricPencil, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> InteriorResult:
    """Search for e with A(e) positive definite.

    Maximizes the (concave on rays) minimum eigenvalue over the unit sphere by
    projected supergradient ascent from seeded random starts.  A FOUND result
    is certified (all leading principal minors checked positive); an
    EMPTY_WITH_MARGIN result reports the best min-eigenvalue seen and is
    evidence, not proof, of emptiness.
    """
    if not P.is_real():
        raise InputError("interior search needs a real pencil")
    mats = P.float_matrices().real
    scale = max(np.linalg.norm(M) for M in mats) or 1.0
    mats = mats / scale
    rng = np.random.default_rng(np.random.PCG64(seed))
    nv = P.nvars
    best_val = -np.inf
    best_x = None

    def min_eig_and_vec(x):
        A = np.tensordot(x, mats, axes=1)
        w, V = np.linalg.eigh(A)
        return w[0], V[:, 0]

    starts = 0
    for trial in range(tol.interior_starts):
        starts += 1
        x = rng.standard_normal(nv)
        x /= np.linalg.norm(x)
        val, v = min_eig_and_vec(x)
        for _ in range(120):
            grad = np.array([v @ M @ v for M in mats])
            grad_t = grad - (grad @ x) * x
            gn = np.linalg.norm(grad_t)
            if gn < 1e-14:
                break
            step = 0.5
            improved = False
            while step > 1e-12:
                x_new = x + step * grad_t / gn
                x_new /= np.linalg.norm(x_new)
                val_new, v_new = min_eig_and_vec(x_new)
                if val_new > val + 1e-16:
                    x, val, v = x_new, val_new, v_new
                    improved = True
                    break
                step /= 2
            if not improved:
                break
        if val > best_val:
            best_val, best_x = val, x
        if val > tol.interior_min_eig:
            A = np.tensordot(x, mats, axes=1)
            minors_ok = all(
                np.linalg.det(A[: k + 1, : k + 1]) > 0 for k in range(P.size)
            )
            if minors_ok:
                return InteriorResult(
                    "FOUND", tuple(float(c) for c in x), float(val * scale), starts
                )
    return InteriorResult(
        "EMPTY_WITH_MARGIN",
        tuple(float(c) for c in best_x) if best_x is not None else None,
        float(best_val * scale),
        starts,
    )


def classify_point_on_pencil(
    P: SymmetricPencil, x: ProjPoint, tol: Tolerances = DEFAULT_TOL
) -> tuple[int, Signature | None]:
    """(rank, signature-or-None) of A(x); exact when pencil and point allow."""
    if P.exact and x.exact:
        A = P.evaluate_exact(x.exact_coords())
        sig = _exact_signature(A)
        return sig.rank, sig
    A = P.evaluate(x.complex_coords())
    r = matrix_rank(A, tol)
    if x.is_real(tol.realness) and P.is_real():
        Ar = P.evaluate(x.real_coords()).real
        return r, matrix_signature(Ar, tol)
    return r, None
