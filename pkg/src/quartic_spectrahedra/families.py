"""Catalog of named quartic spectrahedra and Gram matrices of sextics.

The catalog half constructs four classical pencils: the Toeplitz
spectrahedron, the pillow, the arrangement pencil built from five linear
forms (a Renegar derivative of a product of planes), and the Kummer
symmetroids attached to a binary sextic.  The Gram half parametrizes the
representations of a univariate sextic as a combination of two squares of
cubics and reports which of those are real and positive semidefinite.

Conventions.  Sextics are stored either as plain ascending-coefficient
`UniPoly` values or as `SexticCoeffs`, whose seven fields follow the
binomial-weighted convention

    p(t) = a0 - 6 a1 t + 15 a2 t^2 - 20 a3 t^3 + 15 a4 t^4 - 6 a5 t^5 + a6 t^6.

Cubics in one variable are identified with vectors against the basis
(t^3, t^2, t, 1); a symmetric 4x4 matrix M then represents the sextic
(t^3, t^2, t, 1) M (t^3, t^2, t, 1)^T, its image under the Gram map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError, StageError
from .exact_linalg import exact_nullspace, exact_rank
from .nodes import Node, NodesResult, find_all_nodes
from .pencils import (
    InteriorResult,
    SymmetricPencil,
    find_interior_point,
    pencil_determinant,
)
from .points import ProjPoint
from .polynomials import MultiPoly, UniPoly, univariate_roots
from .tolerances import DEFAULT_TOL, Tolerances

_VARS4 = [MultiPoly.variable(4, i) for i in range(4)]


# ---------------------------------------------------------------------------
# Toeplitz spectrahedron
# ---------------------------------------------------------------------------

def toeplitz_pencil() -> SymmetricPencil:
    """The 4x4 symmetric Toeplitz pencil, homogenized.

    Diagonal k carries variable x_k, so the affine slice x0 = 1 is the set of
    symmetric Toeplitz matrices with unit diagonal and free entries
    (x1, x2, x3).
    """
    mats = []
    for k in range(4):
        mats.append([[1 if abs(i - j) == k else 0 for j in range(4)] for i in range(4)])
    return SymmetricPencil(mats)


def toeplitz_determinant_factors() -> tuple[MultiPoly, MultiPoly]:
    """The two quadrics whose product is det of the Toeplitz pencil.

    Both are returned homogenized; setting x0 = 1 recovers the affine pair,
    which differ by the sign flip (x1, x3) -> (-x1, -x3).
    """
    x0, x1, x2, x3 = _VARS4
    plus = x1 * x1 + 2 * x1 * x2 + x2 * x2 - x1 * x3 - x0 * x1 - x0 * x3 - x0 * x0
    minus = x1 * x1 - 2 * x1 * x2 + x2 * x2 - x1 * x3 + x0 * x1 + x0 * x3 - x0 * x0
    return plus, minus


def toeplitz_rank_one_points() -> tuple[ProjPoint, ProjPoint]:
    """The two rank-one matrices on the boundary, ends of the moment curve arc."""
    return ProjPoint([1, 1, 1, 1]), ProjPoint([1, -1, 1, -1])


# ---------------------------------------------------------------------------
# The pillow
# ---------------------------------------------------------------------------

def pillow_pencil() -> SymmetricPencil:
    """Unit-diagonal pencil with cyclic off-diagonal pattern (x1, x2, x3, x1);
    its symmetroid is an irreducible quartic singular along two lines."""
    a0 = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    a1 = [[0] * 4 for _ in range(4)]
    a1[0][1] = a1[1][0] = 1
    a1[0][3] = a1[3][0] = 1
    a2 = [[0] * 4 for _ in range(4)]
    a2[1][2] = a2[2][1] = 1
    a3 = [[0] * 4 for _ in range(4)]
    a3[2][3] = a3[3][2] = 1
    return SymmetricPencil([a0, a1, a2, a3])


def quartic_splits_into_quadrics(f: MultiPoly, seed: int = 0) -> bool:
    """Whether a rational quartic factors as a product of two real quadrics.

    Attacks the bilinear coefficient system Q * R = f by alternating least
    squares (each factor is linear given the other), snaps converged
    candidates to rationals, and accepts only an exact product.  A True
    answer is therefore a certificate; False means no factorization was
    found within the start budget, which suffices for the small catalog
    quartics this gate exists for.
    """
    if not f.exact:
        raise InputError("quadric split test needs rational input")
    from .polynomials import monomials_of_degree

    quad_monos = monomials_of_degree(4, 2)
    quartic_monos = monomials_of_degree(4, 4)
    nq = len(quad_monos)
    row_of = {e: i for i, e in enumerate(quartic_monos)}
    fv = np.array([float(f.coeffs.get(e, 0)) for e in quartic_monos])
    scale = max(1.0, float(np.abs(fv).max()))

    def mult_matrix(vec: np.ndarray) -> np.ndarray:
        A = np.zeros((len(quartic_monos), nq))
        for i, em in enumerate(quad_monos):
            if vec[i] == 0:
                continue
            for j, en in enumerate(quad_monos):
                e = tuple(a + b for a, b in zip(em, en))
                A[row_of[e], j] += vec[i]
        return A

    rng = np.random.Generator(np.random.PCG64(seed + 5))
    for _ in range(12):
        q = rng.standard_normal(nq)
        r = np.zeros(nq)
        for _ in range(60):
            r, *_ = np.linalg.lstsq(mult_matrix(q), fv, rcond=None)
            q, *_ = np.linalg.lstsq(mult_matrix(r), fv, rcond=None)
        if np.linalg.norm(mult_matrix(q) @ r - fv) > 1e-10 * scale:
            continue
        # kill the scaling freedom before the rational snap: pivot coefficient
        # of Q to exactly 1, fold the scale into R
        piv = int(np.argmax(np.abs(q)))
        if abs(q[piv]) < 1e-8:
            continue
        qv = [Fraction(v).limit_denominator(10**6) for v in q / q[piv]]
        rv = [Fraction(v).limit_denominator(10**6) for v in r * q[piv]]
        Q = MultiPoly.from_terms(4, zip(quad_monos, qv))
        R = MultiPoly.from_terms(4, zip(quad_monos, rv))
        if not Q.is_zero() and not R.is_zero() and Q * R == f:
            return True
    return False


# ---------------------------------------------------------------------------
# Five-plane arrangement pencil (Sylvester-style construction)
# ---------------------------------------------------------------------------

def _as_linear_form(v) -> MultiPoly:
    if isinstance(v, MultiPoly):
        if v.nvars != 4 or v.degree() > 1:
            raise InputError("linear forms must be degree-1 in four variables")
        return v
    coeffs = list(v)
    if len(coeffs) != 4:
        raise InputError("linear form needs four coefficients")
    return MultiPoly(
        4,
        {
            tuple(1 if k == i else 0 for k in range(4)): c
            for i, c in enumerate(coeffs)
            if c != 0
        },
    )


def _form_coeff_rows(forms: Sequence[MultiPoly]) -> list[list]:
    rows = []
    for form in forms:
        rows.append([form.coefficient(tuple(1 if k == i else 0 for k in range(4))) for i in range(4)])
    return rows


def sylvester_prism_forms() -> list[MultiPoly]:
    """Default five-form configuration: a triangular prism with a slab."""
    x0, x1, x2, x3 = _VARS4
    return [x1, x2, x0 - x1 - x2, x3, x0 - x3]


def sylvester_pencil(forms: Sequence) -> SymmetricPencil:
    """Pencil diag(l1..l4) + l5 * (all-ones) from five linear forms.

    Its determinant is sum_i prod_{j != i} l_j, the derivative of the product
    l1*...*l5 along the all-directions vector field; the symmetroid interlaces
    the plane arrangement.  Requires every four of the five forms to be
    linearly independent.
    """
    lf = [_as_linear_form(v) for v in forms]
    if len(lf) != 5:
        raise InputError("need exactly five linear forms")
    rows = _form_coeff_rows(lf)
    for subset in itertools.combinations(range(5), 4):
        sub = [rows[i] for i in subset]
        if all(isinstance(v, Fraction) for r in sub for v in r):
            ok = exact_rank(sub) == 4
        else:
            ok = np.linalg.matrix_rank(np.array(sub, dtype=complex)) == 4
        if not ok:
            raise InputError(f"forms {subset} are linearly dependent")
    mats = []
    for k in range(4):
        c = [form.coefficient(tuple(1 if v == k else 0 for v in range(4))) for form in lf]
        M = [[c[4]] * 4 for _ in range(4)]
        for i in range(4):
            M[i][i] = M[i][i] + c[i]
        mats.append(M)
    return SymmetricPencil(mats)


def sylvester_determinant_identity(forms: Sequence) -> MultiPoly:
    """The expected determinant sum_i prod_{j != i} l_j of the five-form pencil."""
    lf = [_as_linear_form(v) for v in forms]
    total = MultiPoly.zero(4)
    for i in range(5):
        term = MultiPoly.constant(4, 1)
        for j in range(5):
            if j != i:
                term = term * lf[j]
        total = total + term
    return total


def sylvester_nodes(forms: Sequence) -> list[tuple[tuple[int, int, int], ProjPoint]]:
    """The ten triple intersection points {l_i = l_j = l_k = 0}, exact."""
    lf = [_as_linear_form(v) for v in forms]
    rows = _form_coeff_rows(lf)
    out = []
    for triple in itertools.combinations(range(5), 3):
        sub = [rows[i] for i in triple]
        if all(isinstance(v, Fraction) for r in sub for v in r):
            kernel = exact_nullspace(sub)
            if len(kernel) != 1:
                raise StageError("family", f"triple {triple} has a degenerate kernel")
            out.append((triple, ProjPoint(kernel[0])))
        else:
            A = np.array(sub, dtype=complex)
            _, s, vh = np.linalg.svd(A)
            if s[-1] > 1e-10 * s[0]:  # pragma: no cover
                raise StageError("family", f"triple {triple} has no kernel")
            out.append((triple, ProjPoint(vh[-1])))
    return out


def sylvester_lines(forms: Sequence) -> list[tuple[tuple[int, int], tuple[ProjPoint, ProjPoint]]]:
    """The ten lines {l_i = l_j = 0}, each spanned by two exact points."""
    lf = [_as_linear_form(v) for v in forms]
    rows = _form_coeff_rows(lf)
    out = []
    for pair in itertools.combinations(range(5), 2):
        sub = [rows[i] for i in pair]
        if all(isinstance(v, Fraction) for r in sub for v in r):
            kernel = exact_nullspace(sub)
            if len(kernel) != 2:
                raise StageError("family", f"pair {pair} has a degenerate kernel")
            out.append((pair, (ProjPoint(kernel[0]), ProjPoint(kernel[1]))))
        else:
            A = np.array(sub, dtype=complex)
            _, s, vh = np.linalg.svd(A, full_matrices=True)
            out.append((pair, (ProjPoint(vh[-1]), ProjPoint(vh[-2]))))
    return out


# ---------------------------------------------------------------------------
# Kummer symmetroids from a binary sextic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SexticCoeffs:
    """Binomial-weighted coefficients of a univariate sextic.

    p(t) = a0 - 6 a1 t + 15 a2 t^2 - 20 a3 t^3 + 15 a4 t^4 - 6 a5 t^5 + a6 t^6
    """

    a0: object
    a1: object
    a2: object
    a3: object
    a4: object
    a5: object
    a6: object

    _WEIGHTS = (1, -6, 15, -20, 15, -6, 1)

    def as_tuple(self) -> tuple:
        return (self.a0, self.a1, self.a2, self.a3, self.a4, self.a5, self.a6)

    def to_unipoly(self) -> UniPoly:
        return UniPoly([w * a for w, a in zip(self._WEIGHTS, self.as_tuple())])

    @staticmethod
    def from_unipoly(p: UniPoly) -> "SexticCoeffs":
        if p.degree > 6:
            raise InputError("degree exceeds six")
        c = list(p.coeffs) + [0] * (7 - len(p.coeffs))
        if p.exact:
            vals = [Fraction(ci, w) if w != 1 else Fraction(ci) for ci, w in zip(c, SexticCoeffs._WEIGHTS)]
        else:
            vals = [ci / w for ci, w in zip(c, SexticCoeffs._WEIGHTS)]
        return SexticCoeffs(*vals)


def moment_kernel_basis() -> tuple:
    """The three constant symmetric matrices annihilated by the Gram map.

    They span the kernel of gram_map on symmetric 4x4 matrices and double as
    the x0, x1, x2 coefficient matrices of every Kummer pencil.
    """
    a0 = [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, -2, 0], [0, 1, 0, 0]]
    a1 = [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]]
    a2 = [[0, 0, 1, 0], [0, -2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]]
    return (a0, a1, a2)


def kummer_pencil(a: SexticCoeffs) -> SymmetricPencil:
    """Quartic symmetroid with sixteen nodes built from a binary sextic.

    The x3 coefficient matrix maps to p under the Gram map and the other
    three span its kernel, so (t^3,t^2,t,1) A(x) (t^3,t^2,t,1)^T = x3 * p(t)
    identically in (t, x).  The slice x3 = 1 is the Gram spectrahedron of p.
    """
    a0, a1, a2, a3, a4, a5, a6 = a.as_tuple()
    k0, k1, k2 = moment_kernel_basis()
    m3 = [
        [a6, -3 * a5, 3 * a4, -a3],
        [-3 * a5, 9 * a4, -9 * a3, 3 * a2],
        [3 * a4, -9 * a3, 9 * a2, -3 * a1],
        [-a3, 3 * a2, -3 * a1, a0],
    ]
    return SymmetricPencil([k0, k1, k2, m3])


# ---------------------------------------------------------------------------
# Gram map and rank-two decompositions
# ---------------------------------------------------------------------------

def gram_map(M) -> UniPoly:
    """Sextic represented by a symmetric 4x4 matrix against (t^3, t^2, t, 1)."""
    if isinstance(M, np.ndarray):
        rows = M.tolist()
    else:
        rows = [list(r) for r in M]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise InputError("gram_map needs a 4x4 matrix")
    coeffs = [0] * 7
    for j in range(4):
        for k in range(4):
            coeffs[6 - j - k] = coeffs[6 - j - k] + rows[j][k]
    return UniPoly(coeffs)


def _cubic_vector(sym) -> list:
    """Coefficients of a matrix row/cubic against (t^3, t^2, t, 1)."""
    c = list(sym.coeffs) + [0] * (4 - len(sym.coeffs))
    return [c[3], c[2], c[1], c[0]]


@dataclass(frozen=True)
class GramDecomposition:
    """One writing of p as leading * ((q/2)^2 - (r/2)^2)."""

    partition: tuple
    q: UniPoly
    r: UniPoly
    gram: tuple
    rank: int
    is_real: bool
    is_psd: bool


def _snap_roots_exact(p: UniPoly, roots: list) -> list | None:
    if not p.exact:
        return None
    snapped = []
    for z in roots:
        if abs(z.imag) > 1e-9 * (1 + abs(z)):
            return None
        q = Fraction(z.real).limit_denominator(10**8)
        if p(q) != 0:
            return None
        snapped.append(q)
    return snapped


def rank_two_gram_decompositions(
    p: UniPoly, tol: Tolerances = DEFAULT_TOL
) -> list[GramDecomposition]:
    """All ten rank-two Gram matrices of a sextic with simple roots.

    One decomposition per partition of the six roots into two unordered
    triples: with elementary symmetric data (s, m, P) per triple,

        q = 2 t^3 - (s1+s2) t^2 + (m1+m2) t - (P1+P2)
        r = (s1-s2) t^2 - (m1-m2) t + (P1-P2)

    satisfy p = leading * ((q/2)^2 - (r/2)^2), and the Gram matrix is the
    corresponding difference of outer products.  Partitions carry root
    indices into the sorted root list.
    """
    if p.degree != 6:
        raise InputError("need a genuine sextic")
    rooted = univariate_roots(p, tol)
    if any(m != 1 for _, m in rooted):
        raise InputError("repeated roots: rank-two decompositions degenerate")
    roots = [z for z, _ in rooted]
    exact_roots = _snap_roots_exact(p, roots)
    us = exact_roots if exact_roots is not None else roots
    lead = p.coeffs[-1]
    out = []
    scale = p.max_abs_coeff()
    for rest in itertools.combinations(range(1, 6), 2):
        t1 = (0,) + rest
        t2 = tuple(i for i in range(6) if i not in t1)
        tri1 = [us[i] for i in t1]
        tri2 = [us[i] for i in t2]
        s1, s2 = sum(tri1), sum(tri2)
        m1 = tri1[0] * tri1[1] + tri1[0] * tri1[2] + tri1[1] * tri1[2]
        m2 = tri2[0] * tri2[1] + tri2[0] * tri2[2] + tri2[1] * tri2[2]
        p1 = tri1[0] * tri1[1] * tri1[2]
        p2 = tri2[0] * tri2[1] * tri2[2]
        q = UniPoly([-(p1 + p2), m1 + m2, -(s1 + s2), 2])
        r = UniPoly([p1 - p2, -(m1 - m2), s1 - s2])
        qv = _cubic_vector(q)
        rv = _cubic_vector(r)
        quarter = Fraction(1, 4) if isinstance(lead, Fraction) and exact_roots is not None else 0.25
        G = [
            [quarter * lead * (qv[j] * qv[k] - rv[j] * rv[k]) for k in range(4)]
            for j in range(4)
        ]
        diff = gram_map(G) - p
        if diff.max_abs_coeff() > tol.psi_residual * max(1.0, scale):
            raise StageError("gram", f"decomposition misses the sextic by {diff.max_abs_coeff():.2e}")
        Gc = np.array([[complex(v) for v in row] for row in G])
        real = float(np.abs(Gc.imag).max()) <= max(tol.realness * max(1.0, float(np.abs(Gc).max())), 1e-9)
        rank = int(np.linalg.matrix_rank(Gc, tol=1e-9 * max(1.0, float(np.abs(Gc).max()))))
        psd = False
        if real:
            eig = np.linalg.eigvalsh(Gc.real)
            psd = bool(eig.min() >= -1e-9 * max(1.0, float(np.abs(eig).max())))
        out.append(
            GramDecomposition(
                partition=(t1, t2),
                q=q,
                r=r,
                gram=tuple(tuple(row) for row in G),
                rank=rank,
                is_real=real,
                is_psd=psd,
            )
        )
    return out


def positive_sextic_sos_pairs(a, b, c, d, e, f) -> list[tuple[UniPoly, UniPoly]]:
    """Four sum-of-two-squares writings of ((t-a)^2+b^2)((t-c)^2+d^2)((t-e)^2+f^2).

    The four sign patterns (e1, e2, e3) in {-1, +1}^3 with e1*e2*e3 = -1 give

        first  = P1 P2 P3 + e1 d f P1 + e2 b f P2 + e3 b d P3
        second = b d f + e1 b P2 P3 + e2 d P1 P3 + e3 f P1 P2

    with P1 = t-a, P2 = t-c, P3 = t-e, and each pair satisfies
    first^2 + second^2 = p exactly.
    """
    if b == 0 or d == 0 or f == 0:
        raise InputError("quadratic factors must be strictly complex (b, d, f nonzero)")
    P1 = UniPoly([-a, 1])
    P2 = UniPoly([-c, 1])
    P3 = UniPoly([-e, 1])
    target = (P1 * P1 + b * b) * (P2 * P2 + d * d) * (P3 * P3 + f * f)
    pairs = []
    for e1, e2, e3 in ((-1, -1, -1), (-1, 1, 1), (1, -1, 1), (1, 1, -1)):
        first = P1 * P2 * P3 + (e1 * d * f) * P1 + (e2 * b * f) * P2 + (e3 * b * d) * P3
        second = (
            UniPoly([b * d * f])
            + (e1 * b) * (P2 * P3)
            + (e2 * d) * (P1 * P3)
            + (e3 * f) * (P1 * P2)
        )
        if not (first * first + second * second - target).is_zero():
            resid = (first * first + second * second - target).max_abs_coeff()
            if resid > 1e-9 * max(1.0, target.max_abs_coeff()):
                raise StageError("gram", f"square pair misses the product by {resid:.2e}")
        pairs.append((first, second))
    return pairs


def sos_pair_gram(first: UniPoly, second: UniPoly) -> tuple:
    """PSD Gram matrix of a two-squares representation, rank at most two."""
    w1 = _cubic_vector(first)
    w2 = _cubic_vector(second)
    return tuple(
        tuple(w1[j] * w1[k] + w2[j] * w2[k] for k in range(4)) for j in range(4)
    )


# ---------------------------------------------------------------------------
# Full report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GramReport:
    sextic: UniPoly
    nonnegative: bool
    positive: bool
    simple_roots: bool
    kernel_basis: tuple
    decompositions: tuple
    real_sos_count: int | None
    node_census: NodesResult | None
    interior: InteriorResult | None


def sextic_sign_profile(p: UniPoly, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, bool, bool]:
    """(nonnegative on R, strictly positive on R, simple roots)."""
    if p.degree != 6:
        raise InputError("need a genuine sextic")
    if not all(abs(complex(cc).imag) <= tol.realness * max(1.0, abs(complex(cc))) for cc in p.coeffs):
        raise InputError("sign profile of a non-real sextic")
    lead = complex(p.coeffs[-1]).real
    rooted = univariate_roots(p, tol)
    simple = all(m == 1 for _, m in rooted)
    real_roots = [(z, m) for z, m in rooted if abs(z.imag) <= 1e-7 * (1 + abs(z))]
    nonneg = lead > 0 and all(m % 2 == 0 for _, m in real_roots)
    positive = lead > 0 and not real_roots
    return nonneg, positive, simple


def gram_report(
    p: UniPoly,
    tol: Tolerances = DEFAULT_TOL,
    seed: int = 0,
    with_nodes: bool = True,
) -> GramReport:
    """Everything this library knows about the Gram matrices of one sextic.

    With simple roots the ten rank-two decompositions are enumerated and, when
    requested, the node census of the associated Kummer pencil and an interior
    probe of its spectrahedron are attached.  With repeated roots only the
    sign profile is reported.
    """
    nonneg, positive, simple = sextic_sign_profile(p, tol)
    decos: tuple = ()
    real_sos: int | None = None
    census = None
    interior = None
    if simple:
        decos = tuple(rank_two_gram_decompositions(p, tol))
        real_sos = sum(1 for d in decos if d.is_psd)
        if positive and real_sos != 4:
            raise StageError(
                "gram", f"positive sextic produced {real_sos} real PSD decompositions, not 4"
            )
        if nonneg and not positive and real_sos == 0:
            raise StageError("gram", "nonnegative sextic with no PSD decomposition")
        if not nonneg and real_sos != 0:
            raise StageError("gram", "sign-indefinite sextic produced a PSD decomposition")
        if with_nodes:
            pencil = kummer_pencil(SexticCoeffs.from_unipoly(p))
            # the rank-3 nodes sit at (u^2 : u : 1 : 0) over the roots u;
            # passing them as hints still subjects them to the full certify gate
            hints = [
                ProjPoint([u * u, u, 1.0, 0.0])
                for u, _ in univariate_roots(p, tol)
            ]
            census = find_all_nodes(pencil, seed=seed, tol=tol, hint_points=hints)
            interior = find_interior_point(pencil, seed=seed, tol=tol)
    return GramReport(
        sextic=p,
        nonnegative=nonneg,
        positive=positive,
        simple_roots=simple,
        kernel_basis=moment_kernel_basis(),
        decompositions=decos,
        real_sos_count=real_sos,
        node_census=census,
        interior=interior,
    )
