"""Rebuild a symmetric determinantal representation from one node.

The input is a nodal quartic surface and one rank-2 node on it.  After moving
the node to (1:0:0:0) the quartic reads f = -q*x0^2 + 2*g*x0 + delta, and the
branch sextic g^2 + q*delta of the projection away from the node splits into
two cubics.  One branch cubic together with the residual quartic determines a
four-dimensional space of cubics (the solutions C of g*C = a*f11 + b*delta);
that space contains f11 and g and any basis of it extending those two can
serve as the first row of a symmetric 4x4 cubic matrix F.  The remaining
entries follow from linear solves (products of first-row entries reduce
modulo delta), det F is a constant multiple of delta^3, and adj F / delta^2
is a matrix of linear forms whose x0-extension is the desired pencil.

Three reality flavors come out of the branch-cubic pair: both cubics real
(the pencil is real as built), complex-conjugate cubics (the matrix is
assembled over C with a conjugation symmetry and then compressed to a real
pencil by a fixed congruence), or no reality at all (complex output).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import plane_curve_intersections
from .errors import CommonComponentError, InputError, StageError
from .exact_linalg import exact_inverse, exact_nullspace, exact_rref, exact_solve
from .pencils import SymmetricPencil, congruence_apply, pencil_determinant
from .points import ProjPoint
from .polynomials import (
    MultiPoly,
    coeff_vector,
    monomials_of_degree,
    poly_matrix_det,
)
from .projection import (
    _classify_cubic_pair,
    factor_ramification_sextic,
    quartic_node_data,
)
from .tolerances import DEFAULT_TOL, Tolerances

_M2 = monomials_of_degree(3, 2)
_M3 = monomials_of_degree(3, 3)
_M6 = monomials_of_degree(3, 6)


@dataclass(frozen=True)
class CubicSpace:
    """Cubics C with g*C in the ideal of (f11, delta), plus the cofactor data.

    For each basis cubic C the identity g*C = image*f11 + multiplier*delta
    holds; the image map sends f11 to g and g to the other branch cubic.
    """

    basis: tuple
    images: tuple
    multipliers: tuple


@dataclass(frozen=True)
class Reconstruction:
    variant: str
    pencil: SymmetricPencil
    cube_scale: object
    cubic_matrix: tuple
    quadric_matrix: tuple
    conic: MultiPoly
    mixed_cubic: MultiPoly
    residual_quartic: MultiPoly
    branch_cubics: tuple
    substitution: tuple
    node: ProjPoint


def _vec(p: MultiPoly, monos) -> list:
    return coeff_vector(p, monos)


def _poly(coeffs, monos) -> MultiPoly:
    return MultiPoly(3, {m: c for m, c in zip(monos, coeffs)})


def contact_points(
    f11: MultiPoly, delta: MultiPoly, tol: Tolerances = DEFAULT_TOL, seed: int = 0
):
    """The six half-multiplicity points where delta touches a branch cubic.

    The residual quartic meets either branch cubic everywhere to even order;
    an odd local multiplicity means the cubic is not a branch factor of the
    input data.  Returns (point, half multiplicity) pairs summing to six.
    """
    try:
        raw = plane_curve_intersections(f11, delta, tol, seed)
    except CommonComponentError as exc:
        raise StageError("contact", str(exc))
    for pt, mult in raw:
        if mult % 2 != 0:
            raise StageError(
                "contact", f"odd contact multiplicity {mult} at {pt}"
            )
    out = [(pt, mult // 2) for pt, mult in raw]
    if sum(m for _, m in out) != 6:
        raise StageError("contact", "contact divisor does not have degree six")
    return out


def _contacts_off_conics(pts) -> bool:
    """Six distinct contact points lying on no conic (rank of the 6x6 system)."""
    if len(pts) != 6:
        return False
    rows = []
    for p, _m in pts:
        y = p.complex_coords()
        rows.append([y[0] ** a * y[1] ** b * y[2] ** c for (a, b, c) in _M2])
    sv = np.linalg.svd(np.array(rows, dtype=complex), compute_uv=False)
    return bool(sv[-1] > 1e-6 * sv[0])


def _float_rref(rows: np.ndarray, ncols: int, gate: float) -> np.ndarray:
    """Reduced row echelon form, pivoting only within the first ncols columns."""
    R = np.array(rows, dtype=complex)
    nr = R.shape[0]
    r = 0
    for c in range(ncols):
        if r >= nr:
            break
        k = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[k, c]) <= gate:
            continue
        R[[r, k]] = R[[k, r]]
        R[r] = R[r] / R[r, c]
        for i in range(nr):
            if i != r:
                R[i] = R[i] - R[i, c] * R[r]
        r += 1
    return R


def cubic_space_basis(
    q: MultiPoly,
    g: MultiPoly,
    delta: MultiPoly,
    f11: MultiPoly,
    tol: Tolerances = DEFAULT_TOL,
) -> CubicSpace:
    """Canonical basis of the cubic space attached to one branch cubic.

    Solves the linear system g*C - a*f11 - b*delta = 0 over (cubic, cubic,
    quadric) triples; the solution space must be exactly four-dimensional and
    its projection to the C block is the space of cubics through the contact
    divisor.  The basis is canonicalized by reduced row echelon form on the C
    block in graded-lex monomial order, then reordered so that f11 and g come
    first; everything rides on the triples so the images stay attached.
    """
    for p, d in ((q, 2), (g, 3), (delta, 4), (f11, 3)):
        if p.nvars != 3 or p.degree() > d:
            raise InputError("branch data has wrong arity or degree")
    exact = all(p.exact for p in (q, g, delta, f11))
    cols = []
    for m in _M3:
        cols.append(_vec(g * MultiPoly.monomial(3, m), _M6))
    for m in _M3:
        cols.append([-v for v in _vec(f11 * MultiPoly.monomial(3, m), _M6)])
    for m in _M2:
        cols.append([-v for v in _vec(delta * MultiPoly.monomial(3, m), _M6)])
    rows = [[cols[j][i] for j in range(26)] for i in range(28)]
    if exact:
        kernel = exact_nullspace(rows)
        if len(kernel) != 4:
            raise StageError(
                "cubic-space",
                f"solution space has dimension {len(kernel)}, expected 4",
            )
        triples, _piv = exact_rref(kernel)
    else:
        A = np.array([[complex(v) for v in row] for row in rows])
        # column equilibration: input blocks can differ by many magnitudes
        norms = np.linalg.norm(A, axis=0)
        norms[norms == 0] = 1.0
        _u, sv, Vh = np.linalg.svd(A / norms)
        small = [i for i in range(26) if sv[i] <= 1e-8 * sv[0]] if sv[0] else []
        if len(small) != 4:
            raise StageError(
                "cubic-space",
                f"solution space has dimension {len(small)}, expected 4",
            )
        K = np.stack([Vh[i].conj() / norms for i in small], axis=0)
        # unit C block per vector: keeps the echelon pivots meaningful
        for i in range(4):
            cn = float(np.linalg.norm(K[i, :10]))
            if cn == 0:
                raise StageError("cubic-space", "a solution has zero cubic part")
            K[i] /= cn
        R = _float_rref(K, 10, 1e-8 * float(np.max(np.abs(K))))
        all_real = all(p.is_real(1e-10) for p in (q, g, delta, f11))
        if all_real and float(np.max(np.abs(R.imag))) <= 1e-7 * float(
            np.max(np.abs(R.real))
        ):
            R = R.real.astype(complex)
        triples = list(R)
    basis = [_poly(t[:10], _M3) for t in triples]
    images = [_poly(t[10:20], _M3) for t in triples]
    mults = [_poly(t[20:26], _M2) for t in triples]
    # residual check: each triple really satisfies the defining identity
    gscale = max(
        (g * basis[0]).max_abs_coeff(), f11.max_abs_coeff(), delta.max_abs_coeff()
    )
    for C, a, b in zip(basis, images, mults):
        resid = g * C - f11 * a - delta * b
        if not resid.is_negligible(1e-9, max(gscale, 1.0)):
            raise StageError("cubic-space", "triple identity residual too large")
    ordered = _reorder_with(basis, images, mults, f11, g, exact)
    return CubicSpace(
        basis=tuple(t[0] for t in ordered),
        images=tuple(t[1] for t in ordered),
        multipliers=tuple(t[2] for t in ordered),
    )


def _coords_in(space_vecs, target, exact: bool):
    """Coordinates of a coefficient vector in a small spanning set, or None."""
    if exact:
        rows = [[space_vecs[j][i] for j in range(len(space_vecs))]
                for i in range(len(target))]
        try:
            return exact_solve(rows, list(target))
        except InputError:
            return None
    A = np.array(space_vecs, dtype=complex).T
    b = np.array([complex(v) for v in target])
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.linalg.norm(A @ sol - b) > 1e-8 * max(1.0, float(np.linalg.norm(b))):
        return None
    return sol


def _reorder_with(basis, images, mults, f11, g, exact):
    """Put (f11, g) first, then the canonical rows completing them."""
    vecs = [_vec(C, _M3) for C in basis]
    lead = []
    for target_poly, want_image in ((f11, g), (g, None)):
        coords = _coords_in(vecs, _vec(target_poly, _M3), exact)
        if coords is None:
            raise StageError(
                "cubic-space", "a branch cubic is missing from the cubic space"
            )
        C = sum((basis[i] * coords[i] for i in range(4)), MultiPoly.zero(3))
        a = sum((images[i] * coords[i] for i in range(4)), MultiPoly.zero(3))
        b = sum((mults[i] * coords[i] for i in range(4)), MultiPoly.zero(3))
        if want_image is not None:
            sc = max(a.max_abs_coeff(), want_image.max_abs_coeff(), 1.0)
            if not (a - want_image).is_negligible(1e-8, sc):
                raise StageError("cubic-space", "image of f11 is not g")
        lead.append((target_poly, a, b))
    chosen = list(lead)
    if exact:
        # echelon order: first independent rows, deterministic and exact
        chosen_vecs = [_vec(t[0], _M3) for t in chosen]
        for C, a, b in zip(basis, images, mults):
            if len(chosen) == 4:
                break
            trial = chosen_vecs + [_vec(C, _M3)]
            M = np.array([[complex(v) for v in row] for row in trial])
            sv = np.linalg.svd(M, compute_uv=False)
            if sv[-1] > 1e-8 * sv[0]:
                chosen.append((C, a, b))
                chosen_vecs.append(_vec(C, _M3))
    else:
        # float: greedily take the rows farthest from the chosen span
        pool = list(zip(basis, images, mults))
        while len(chosen) < 4 and pool:
            span = np.array(
                [[complex(v) for v in _vec(t[0], _M3)] for t in chosen]
            )
            Qs, _ = np.linalg.qr(span.conj().T, mode="reduced")

            def resid_norm(t):
                v = np.array([complex(x) for x in _vec(t[0], _M3)])
                n = np.linalg.norm(v)
                if n == 0:
                    return 0.0
                v = v / n
                return float(np.linalg.norm(v - Qs @ (Qs.conj().T @ v)))

            best = max(pool, key=resid_norm)
            if resid_norm(best) <= 1e-8:
                break
            pool.remove(best)
            chosen.append(best)
    if len(chosen) != 4:
        raise StageError("cubic-space", "could not complete f11, g to a basis")
    return chosen


def conjugation_fixed_completion(
    space: CubicSpace, tol: Tolerances = DEFAULT_TOL
) -> tuple[MultiPoly, MultiPoly]:
    """Two cubics completing (f11, g) inside the conjugation-fixed real form.

    When the branch cubics are complex conjugates, C -> conj(image of C) is an
    antilinear involution of the cubic space; its fixed set is a real form
    containing f11+g and i*(f11-g).  Completing inside the fixed set forces
    the conjugation symmetry of the full matrix, which is what later allows
    the compression to a real pencil.
    """
    vecs = [np.array([complex(v) for v in _vec(C, _M3)]) for C in space.basis]
    B = np.stack(vecs, axis=1)  # 10 x 4
    K = np.zeros((4, 4), dtype=complex)
    for j, a in enumerate(space.images):
        target = np.conj(np.array([complex(v) for v in _vec(a, _M3)]))
        sol, *_ = np.linalg.lstsq(B, target, rcond=None)
        if np.linalg.norm(B @ sol - target) > 1e-7 * max(
            1.0, float(np.linalg.norm(target))
        ):
            raise StageError(
                "cubic-space", "conjugated image leaves the cubic space"
            )
        K[:, j] = sol
    P, Q = K.real, K.imag
    eye = np.eye(4)
    big = np.block([[eye - P, -Q], [-Q, eye + P]])
    _u, sv, Vh = np.linalg.svd(big)
    null = [Vh[i] for i in range(8) if sv[i] <= 1e-7 * sv[0]]
    if len(null) != 4:
        raise StageError(
            "cubic-space",
            f"conjugation-fixed set has real dimension {len(null)}, expected 4",
        )
    # complete (f11+g, i*(f11-g)) inside the fixed set; independence must be
    # measured on the cubic coefficient vectors, not on basis coordinates:
    # the basis is scale-skewed, so a coordinate vector can look independent
    # while its cubic still lies in the span of f11 and g
    def unit(u):
        return u / np.linalg.norm(u)

    base = [unit(B[:, 0] + B[:, 1]), unit(1j * (B[:, 0] - B[:, 1]))]
    out = []
    for _ in range(2):
        best_z, best_res = None, 1e-3
        for v in null:
            z = v.real[:4] + 1j * v.real[4:]
            u = B @ z
            nu = float(np.linalg.norm(u))
            if nu == 0.0:
                continue
            A = np.stack(base, axis=1)
            sol, *_ = np.linalg.lstsq(A, u / nu, rcond=None)
            res = float(np.linalg.norm(A @ sol - u / nu))
            if res > best_res:
                best_z, best_res = z, res
        if best_z is None:
            raise StageError("cubic-space", "fixed-set completion failed")
        base.append(unit(B @ best_z))
        cubic = sum(
            (space.basis[i] * complex(best_z[i]) for i in range(4)),
            MultiPoly.zero(3),
        )
        out.append(cubic)
    return out[0], out[1]


def complete_cubic_matrix(
    first_row,
    q: MultiPoly,
    delta: MultiPoly,
    tol: Tolerances = DEFAULT_TOL,
):
    """Fill the symmetric 4x4 cubic matrix from its first row.

    Products of first-row entries reduce against (f11, delta): the relation
    F1j*F1k = F11*Fjk + qjk*delta pins every remaining entry together with a
    quadric certificate; uniqueness holds because f11 and delta share no
    component.  The (2,2) certificate must come out as -q, which ties the
    completion back to the projection data and is checked here.
    """
    f11 = first_row[0]
    exact = all(p.exact for p in first_row) and q.exact and delta.exact
    cols = []
    for m in _M3:
        cols.append(_vec(f11 * MultiPoly.monomial(3, m), _M6))
    for m in _M2:
        cols.append(_vec(delta * MultiPoly.monomial(3, m), _M6))
    rows = [[cols[j][i] for j in range(16)] for i in range(28)]
    Afl = np.array([[complex(v) for v in row] for row in rows])
    colnorm = np.linalg.norm(Afl, axis=0)
    colnorm[colnorm == 0] = 1.0
    zero3 = MultiPoly.zero(3)
    F = [[zero3] * 4 for _ in range(4)]
    Qm = [[zero3] * 4 for _ in range(4)]
    for j in range(4):
        F[0][j] = F[j][0] = first_row[j]
    for j in range(1, 4):
        for k in range(j, 4):
            target = _vec(first_row[j] * first_row[k], _M6)
            if exact:
                try:
                    sol = exact_solve(rows, target)
                except InputError:
                    raise StageError(
                        "completion",
                        f"entry ({j},{k}) has no exact solution",
                    )
            else:
                b = np.array([complex(v) for v in target])
                sol, *_ = np.linalg.lstsq(Afl / colnorm, b, rcond=None)
                sol = sol / colnorm
                resid = np.linalg.norm(Afl @ sol - b)
                if resid > 1e-7 * max(1.0, float(np.linalg.norm(b))):
                    raise StageError(
                        "completion", f"entry ({j},{k}) solve residual {resid:.2e}"
                    )
            F[j][k] = F[k][j] = _poly(sol[:10], _M3)
            Qm[j][k] = Qm[k][j] = _poly(sol[10:16], _M2)
    mismatch = Qm[1][1] + q
    if not mismatch.is_negligible(1e-8, max(q.max_abs_coeff(), 1.0)):
        raise StageError(
            "completion", "the (2,2) certificate quadric is not -q"
        )
    return tuple(tuple(r) for r in F), tuple(tuple(r) for r in Qm)


def _poly_adjugate(M):
    """Adjugate of a 4x4 polynomial matrix (transposed signed cofactors)."""
    n = 4
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [
                [M[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = poly_matrix_det(sub)
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof
    return out


def _divide_out(numer: MultiPoly, denom: MultiPoly, out_deg: int, tol: Tolerances):
    """Quotient numer/denom of known degree; float inputs go through a fit."""
    if numer.exact and denom.exact:
        if numer.is_zero():
            return MultiPoly.zero(3)
        return numer.exact_div(denom)
    monos = monomials_of_degree(3, out_deg)
    big = monomials_of_degree(3, out_deg + denom.degree())
    cols = [_vec(denom * MultiPoly.monomial(3, m), big) for m in monos]
    A = np.array([[complex(c[i]) for c in cols] for i in range(len(big))])
    b = np.array([complex(v) for v in _vec(numer, big)])
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.linalg.norm(A @ sol - b) > 1e-7 * max(1.0, float(np.linalg.norm(b))):
        raise StageError("determinant", "division leaves a remainder")
    return _poly(sol, monos)


def assemble_representation(
    F,
    q: MultiPoly,
    g: MultiPoly,
    delta: MultiPoly,
    tol: Tolerances = DEFAULT_TOL,
):
    """Collapse the cubic matrix to the linear pencil it represents.

    det F is a constant multiple c of delta^3; adj F / delta^2 is a matrix M
    of linear forms with det M = c^3 * delta, adj M = c^2 * F and lower 2x2
    corner determinant c*q.  Appending c*x0 on the hyperbolic positions gives
    a pencil whose determinant is exactly c^3 * (-q*x0^2 + 2*g*x0 + delta).
    Every one of those identities is verified; a failure means the first row
    did not span the cubic space attached to a genuine node.
    """
    detF = poly_matrix_det([[F[i][j] for j in range(4)] for i in range(4)])
    # roundoff floor of a 4x4 determinant with these row scales; a determinant
    # that cancels down to the floor is numerically zero, anything above it is
    # judged by whether delta^3 divides it cleanly
    row_prod = 1.0
    for i in range(4):
        row_prod *= max(F[i][j].max_abs_coeff() for j in range(4)) or 1.0
    if detF.is_zero() or (
        not detF.exact and detF.max_abs_coeff() <= 1e-13 * row_prod
    ):
        raise StageError("determinant", "det F is not a nonzero multiple of delta^3")
    d3 = delta * delta * delta
    try:
        cpoly = _divide_out(detF, d3, 0, tol)
    except StageError:
        raise StageError("determinant", "det F is not a nonzero multiple of delta^3")
    c = cpoly.coefficient((0, 0, 0))
    if c == 0:
        raise StageError("determinant", "det F is not a nonzero multiple of delta^3")
    adj = _poly_adjugate(F)
    d2 = delta * delta
    M = [[_divide_out(adj[i][j], d2, 1, tol) for j in range(4)] for i in range(4)]
    scale = max(m.max_abs_coeff() for row in M for m in row) or 1.0
    detM = poly_matrix_det(M)
    if not (detM - delta * c**3).is_negligible(1e-8, scale**4):
        raise StageError("determinant", "det of the linear matrix is off")
    adjM = _poly_adjugate(M)
    for i in range(4):
        for j in range(4):
            resid = adjM[i][j] - F[i][j] * c**2
            if not resid.is_negligible(1e-8, scale**3 + F[i][j].max_abs_coeff()):
                raise StageError("determinant", "adjugate does not return the cubics")
    corner = M[2][2] * M[3][3] - M[2][3] * M[3][2]
    if not (corner - q * c).is_negligible(1e-8, scale**2):
        raise StageError("determinant", "lower corner minor is not c*q")
    mats = [[[0 for _ in range(4)] for _ in range(4)] for _ in range(4)]
    mats[0][0][1] = mats[0][1][0] = c
    for k in range(3):
        unit = tuple(int(t == k) for t in range(3))
        for i in range(4):
            for j in range(i, 4):
                # mirror the upper triangle: lstsq dust must not break symmetry
                v = M[i][j].coefficient(unit)
                mats[k + 1][i][j] = v
                mats[k + 1][j][i] = v
    P = SymmetricPencil(mats)
    x0sq = MultiPoly.monomial(4, (2, 0, 0, 0))
    x0 = MultiPoly.monomial(4, (1, 0, 0, 0))
    f_norm = (
        -(q.insert_var(0)) * x0sq
        + (g.insert_var(0) * 2) * x0
        + delta.insert_var(0)
    )
    detP = pencil_determinant(P)
    resid = detP - f_norm * c**3
    # the noise floor of det P is set by its row scales, not by det P itself,
    # which can cancel several orders below them
    row_base = 1.0
    for i in range(4):
        row_base *= max(abs(complex(mats[k][i][j])) for k in range(4) for j in range(4)) or 1.0
    if not (
        resid.is_negligible(1e-8, max(detP.max_abs_coeff(), 1.0))
        or resid.is_negligible(1e-10, row_base)
    ):
        raise StageError("determinant", "pencil determinant mismatch")
    return P, c


# fixed compression: conjugate coordinate pair -> real pair, entries stay real
_COMPRESS = (
    (1, 1j, 0, 0),
    (1, -1j, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
)


def _real_display(P: SymmetricPencil, c, f_norm: MultiPoly, tol: Tolerances):
    """Real pencil congruent (over C) to a conjugation-symmetric complex one.

    The compression matrix U has det -2i; doubling the congruence makes the
    determinant constant rational: det(2 U^T A U) = (-4c)^3 * f.  The result
    is verified real and re-verified against f before the imaginary dust is
    dropped.
    """
    Pc = congruence_apply(P, [list(r) for r in _COMPRESS]).scale(2)
    mats = Pc.float_matrices()
    if float(np.max(np.abs(mats.imag))) > 1e-7 * max(
        float(np.max(np.abs(mats.real))), 1.0
    ):
        raise StageError("determinant", "compressed pencil is not real")
    real_mats = [
        [
            [float(mats[k][min(i, j)][max(i, j)].real) for j in range(4)]
            for i in range(4)
        ]
        for k in range(4)
    ]
    P2 = SymmetricPencil(real_mats)
    c2 = -4 * complex(c)
    c2 = c2.real if abs(c2.imag) <= 1e-9 * max(abs(c2), 1.0) else c2
    detP2 = pencil_determinant(P2)
    resid = detP2 - f_norm * c2**3
    if not resid.is_negligible(1e-7, max(detP2.max_abs_coeff(), 1.0)):
        raise StageError("determinant", "real compression broke the determinant")
    return P2, c2


def _frame_at(node: ProjPoint):
    """Invertible substitution sending (1:0:0:0) to the node, exact if it is."""
    if node.exact:
        v = list(node.exact_coords())
        p = max(range(4), key=lambda i: abs(v[i]))
        cols = [v] + [
            [Fraction(int(i == j)) for i in range(4)] for j in range(4) if j != p
        ]
        T = [[cols[j][i] for j in range(4)] for i in range(4)]
        return T, exact_inverse(T)
    v = np.array(node.complex_coords(), dtype=complex)
    v = v / np.linalg.norm(v)
    Mt = np.eye(4, dtype=complex)
    p = int(np.argmax(np.abs(v)))
    order = [p] + [i for i in range(4) if i != p]
    B = np.stack([v] + [Mt[:, i] for i in order[1:]], axis=1)
    Qf, _ = np.linalg.qr(B)
    # keep the node exactly in the first column
    T = np.concatenate([v[:, None], Qf[:, 1:]], axis=1)
    return (
        [[complex(T[i][j]) for j in range(4)] for i in range(4)],
        [[complex(v) for v in row] for row in np.linalg.inv(T)],
    )


def reconstruct(
    f: MultiPoly,
    node: ProjPoint,
    f11: MultiPoly | None = None,
    completion=None,
    tol: Tolerances = DEFAULT_TOL,
    seed: int = 0,
) -> Reconstruction:
    """Determinantal representation of a nodal quartic from one rank-2 node.

    Normalizes the node to (1:0:0:0), reads off (q, g, delta), obtains the
    branch cubic (given, or by factoring the branch sextic), builds the cubic
    space and a first row, completes the symmetric cubic matrix, collapses it
    to a pencil and maps back to the input coordinates.  ``completion``
    overrides the two first-row cubics (they must span with f11 and g);
    ``f11`` overrides the branch factor (useful when exactness matters and
    the factoring route would go through floats).
    """
    if f.nvars != 4 or f.degree() != 4 or not f.is_homogeneous():
        raise InputError("expected a homogeneous quartic in 4 variables")
    T, Tinv = _frame_at(node)
    f_norm = f.subs_linear(T)
    q, g, delta = quartic_node_data(f_norm, tol)
    if q.is_zero() and g.is_zero():
        raise StageError("node-normal-form", "node has rank at most 1")
    sextic = g * g + q * delta
    if f11 is None:
        f11, f22, kind = factor_ramification_sextic(sextic, tol, seed)
        if kind == "conjugate-pair":
            # rescale so that f11 * conj(f11) equals the branch sextic: this
            # makes conj-after-image an involution, not just an antilinear map
            lead = complex(sextic.leading_term()[1])
            if not (lead.real > 0 and abs(lead.imag) <= 1e-9 * lead.real):
                raise StageError(
                    "factor", "branch sextic has no conjugate-norm scaling"
                )
            lam = float(np.sqrt(lead.real))
            f11 = f11 * lam
            f22 = f22 * lam
        elif sextic.exact and f11.exact and f22.exact:
            # match the product back to the sextic so later identities are exact
            f11 = f11 * sextic.leading_term()[1]
        else:
            # float route: balance the first row around sqrt of the sextic
            # scale, otherwise determinants of the completed matrix cancel
            # across many orders of magnitude and drown in roundoff
            lam = float(np.sqrt(sextic.max_abs_coeff())) / (
                f11.max_abs_coeff() or 1.0
            )
            f11 = f11 * lam
            f22 = _divide_out(sextic, f11, 3, tol)
        f22_for_result = f22
    else:
        if f11.exact and sextic.exact:
            f22_for_result = sextic.exact_div(f11)
        else:
            f22_for_result = _divide_out(sextic, f11, 3, tol)
        kind, _cr, _cc = _classify_cubic_pair(f11, f22_for_result, tol)
    f22 = f22_for_result
    # contact certification is exact-only: float tangencies sit at the
    # square-root noise floor and cannot be certified, while the determinant
    # identities further down verify the float result end to end anyway
    contacts = None
    if f11.exact and delta.exact:
        contacts = contact_points(f11, delta, tol, seed)
    space = cubic_space_basis(q, g, delta, f11, tol)
    # dual route: every cubic of the space passes through the contact divisor
    if (
        contacts is not None
        and all(m == 1 for _, m in contacts)
        and _contacts_off_conics(contacts)
    ):
        for C in space.basis:
            sc = C.max_abs_coeff() or 1.0
            for p, _m in contacts:
                if abs(C(p.complex_coords())) > 1e-5 * sc:
                    raise StageError(
                        "cubic-space",
                        "a basis cubic misses the contact divisor",
                    )
    if completion is not None:
        c3, c4 = completion
    elif kind == "conjugate-pair":
        c3, c4 = conjugation_fixed_completion(space, tol)
    else:
        c3, c4 = space.basis[2], space.basis[3]
    if not (f11.exact and g.exact and c3.exact and c4.exact):
        # positive rescale keeps conjugation-fixedness and balances the row
        s_row = float(np.sqrt(sextic.max_abs_coeff())) or 1.0
        c3 = c3 * (s_row / (c3.max_abs_coeff() or 1.0))
        c4 = c4 * (s_row / (c4.max_abs_coeff() or 1.0))
    F, Qm = complete_cubic_matrix((f11, g, c3, c4), q, delta, tol)
    x0sq = MultiPoly.monomial(4, (2, 0, 0, 0))
    x0 = MultiPoly.monomial(4, (1, 0, 0, 0))
    fn = (
        -(q.insert_var(0)) * x0sq
        + (g.insert_var(0) * 2) * x0
        + delta.insert_var(0)
    )
    P_norm, c = assemble_representation(F, q, g, delta, tol)
    variant = kind
    if kind == "conjugate-pair":
        P_norm, c = _real_display(P_norm, c, fn, tol)
    P_out = P_norm.variable_substitution(Tinv)
    detP = pencil_determinant(P_out)
    resid = detP - f * c**3
    if not resid.is_negligible(1e-7, max(detP.max_abs_coeff(), 1.0)):
        raise StageError("determinant", "final pencil does not represent the input")
    return Reconstruction(
        variant=variant,
        pencil=P_out,
        cube_scale=c,
        cubic_matrix=F,
        quadric_matrix=Qm,
        conic=q,
        mixed_cubic=g,
        residual_quartic=delta,
        branch_cubics=(f11, f22),
        substitution=tuple(tuple(row) for row in T),
        node=node,
    )
