"""Projection of a nodal quartic symmetroid from one of its nodes.

Projecting from a rank-2 node exhibits the quartic as a double cover of the
plane branched along a sextic that splits into two cubics.  Concretely, after
moving the node to (1:0:0:0) and normalizing the rank-2 matrix there, the
pencil determinant collapses to

    f = -q * (c*x0)^2 + 2*g * (c*x0) + delta

with q a conic, g a cubic and delta a quartic in (x1,x2,x3).  The two cubic
branch curves are cofactors of the reduced matrix, their nine intersection
points are the images of the other nine nodes, and the reality type of the
cubic pair classifies the node (split real pair versus complex-conjugate
pair).  Everything here works either on an explicit pencil (cofactor route,
exact-friendly) or on a bare quartic (factoring route, used by the
reconstruction pipeline).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .curves import (
    _center_score,
    _embed,
    _fiber_slice,
    _polish_on_chart,
    _polish_on_fiber,
    _random_gl3,
    plane_curve_intersections,
)
from .errors import CommonComponentError, InputError, StageError
from .pencils import SymmetricPencil, congruence_apply, pencil_determinant
from .points import ProjPoint, dedup_points
from .polynomials import (
    MultiPoly,
    UniPoly,
    elimination_resultant,
    interpolate,
    monomials_of_degree,
    poly_matrix_det,
    restrict_to_line,
    univariate_roots,
)
from .tolerances import DEFAULT_TOL, Tolerances

# congruence that trades the block diag(c, c) for the hyperbolic block
# [[0, 2c], [2c, 0]]; its determinant is -2i, so pencil determinants pick up
# a factor of (-2i)^2 = -4
_COMPLEXIFY = (
    (1, 1, 0, 0),
    (1j, -1j, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
)


@dataclass(frozen=True)
class NormalizedNode:
    """Outcome of moving a rank-2 node to (1:0:0:0) in normal form."""

    pencil: SymmetricPencil          # T^t A(S y) T
    substitution: tuple              # S, columns: node rep then a complement
    congruence: tuple                # T
    kind: str                        # "split-real" | "definite-real" | "complex"
    base: ProjPoint


@dataclass(frozen=True)
class NodalProjection:
    """The plane data of the double cover obtained from one node."""

    q: MultiPoly
    g: MultiPoly
    delta: MultiPoly
    f11: MultiPoly
    f22: MultiPoly
    x0_scale: complex | Fraction
    kind: str                        # "split-real" | "conjugate-pair" | "complex"
    nine_points: tuple = ()
    cubics_real: bool = False
    cubics_conjugate: bool = False
    conic_point: tuple | None = None
    lines_through_base: tuple = ()


@dataclass(frozen=True)
class LiftOutcome:
    points: tuple                    # nine ProjPoints in original coordinates
    branches: tuple                  # per-point tag: "conic", "residual", "line"
    via_lines: tuple                 # (image_point, (node, node)) for line fibers


# ---------------------------------------------------------------------------
# normalization at a node
# ---------------------------------------------------------------------------


def _complement_columns(rep: np.ndarray) -> np.ndarray:
    """Invertible matrix with rep in the first column, orthonormal rest."""
    rep = np.asarray(rep, dtype=complex)
    n = rep.shape[0]
    b = rep / np.linalg.norm(rep)
    drop = int(np.argmax(np.abs(b)))
    eye = np.eye(n, dtype=complex)
    cols = [b] + [eye[:, k] for k in range(n) if k != drop]
    Q, _ = np.linalg.qr(np.stack(cols, axis=1))
    out = Q.copy()
    out[:, 0] = rep
    return out


def normalize_at_node(
    P: SymmetricPencil,
    node: ProjPoint,
    tol: Tolerances = DEFAULT_TOL,
    force_complex: bool = False,
) -> NormalizedNode:
    """Move a rank-2 node to (1:0:0:0) and its matrix to normal form.

    Real nodes with an indefinite rank-2 matrix get the real hyperbolic block;
    real semidefinite ones get the block diag(1/2, 1/2); everything else gets
    the complex hyperbolic block.  Raises if the matrix rank at the node is
    not 2.
    """
    A = P.evaluate(node.complex_coords())
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0 or int(np.sum(sv > tol.rank_gate * sv[0])) != 2:
        raise StageError("normalize", "matrix rank at the node is not 2")
    real_case = P.is_real() and node.is_real(tol.realness) and not force_complex
    if real_case:
        rep = np.array(node.real_coords(), dtype=float)
        Ar = P.evaluate(rep).real
        w, V = np.linalg.eigh(Ar)
        order = np.argsort(-np.abs(w))
        lam = w[order[:2]]
        vecs = V[:, order[:2]]
        kernel = V[:, order[2:]]
        if lam[0] * lam[1] < 0:
            kind = "split-real"
            ip, im = (0, 1) if lam[0] > 0 else (1, 0)
            cp = vecs[:, ip] / np.sqrt(2 * lam[ip])
            cm = vecs[:, im] / np.sqrt(-2 * lam[im])
            T = np.stack([cp + cm, cp - cm, kernel[:, 0], kernel[:, 1]], axis=1)
        else:
            kind = "definite-real"
            if lam[0] < 0:
                # projective sign: use the representative where A is PSD
                rep = -rep
                Ar = -Ar
                lam = -lam
            c1 = vecs[:, 0] / np.sqrt(2 * lam[0])
            c2 = vecs[:, 1] / np.sqrt(2 * lam[1])
            T = np.stack([c1, c2, kernel[:, 0], kernel[:, 1]], axis=1)
        S = _complement_columns(rep.astype(complex)).real
    else:
        kind = "complex"
        rep = np.array(node.complex_coords(), dtype=complex)
        A = P.evaluate(rep)
        U, sv, Vh = np.linalg.svd(A)
        kernel = Vh[2:, :].conj().T
        comp = Vh[:2, :].conj().T
        B = comp.T @ A @ comp  # 2x2 complex symmetric, nondegenerate
        roots = np.roots([B[0, 0], 2 * B[0, 1], B[1, 1]])
        if len(roots) == 2:
            z1, z2 = roots
            c1 = z1 * comp[:, 0] + comp[:, 1]
            c2 = z2 * comp[:, 0] + comp[:, 1]
        else:
            # leading coefficient vanished: one isotropic direction is comp[:,0]
            c1 = comp[:, 0]
            z2 = roots[0] if len(roots) else -B[1, 1] / (2 * B[0, 1])
            c2 = z2 * comp[:, 0] + comp[:, 1]
        s = c1 @ A @ c2
        if abs(s) < 1e-14 * sv[0]:
            raise StageError("normalize", "degenerate isotropic pair at the node")
        c2 = c2 / s
        T = np.stack([c1, c2, kernel[:, 0], kernel[:, 1]], axis=1)
        S = _complement_columns(rep)
    P1 = P.variable_substitution([[c for c in row] for row in S])
    P_norm = congruence_apply(P1, [[c for c in row] for row in T])
    return NormalizedNode(
        pencil=P_norm,
        substitution=tuple(tuple(row) for row in S),
        congruence=tuple(tuple(row) for row in T),
        kind=kind,
        base=node,
    )


# ---------------------------------------------------------------------------
# ramification data
# ---------------------------------------------------------------------------


def _read_hyperbolic_scale(P: SymmetricPencil, tol: Tolerances) -> tuple[str, object]:
    """Identify A0 as gamma*(E01+E10) or gamma*diag(1,1,0,0); return (form, gamma)."""
    A0 = P.matrices[0]
    scale = max((abs(complex(v)) for M in P.matrices for r in M for v in r), default=1.0)
    gate = 1e-7 * scale
    A0f = np.array([[complex(v) for v in row] for row in A0])
    hyp = np.zeros((4, 4), dtype=complex)
    hyp[0, 1] = hyp[1, 0] = A0f[0, 1]
    if abs(A0f[0, 1]) > gate and np.max(np.abs(A0f - hyp)) <= gate:
        return "hyperbolic", A0[0][1]
    dfn = np.zeros((4, 4), dtype=complex)
    dfn[0, 0] = dfn[1, 1] = A0f[0, 0]
    if abs(A0f[0, 0]) > gate and np.max(np.abs(A0f - dfn)) <= gate:
        return "definite", A0[0][0]
    raise StageError(
        "ramification",
        "leading matrix is not in rank-2 normal form (node not normalized?)",
    )


def ramification_data(
    P_norm: SymmetricPencil,
    tol: Tolerances = DEFAULT_TOL,
    seed: int = 0,
    with_intersections: bool = True,
) -> NodalProjection:
    """Plane projection data of a pencil normalized at a rank-2 node.

    Accepts the hyperbolic normal form directly; the semidefinite real form is
    first complexified by a fixed congruence (the cubic pair then comes out
    complex conjugate).  The branch cubics are matrix cofactors, so this route
    involves no factoring and stays exact on exact input.
    """
    form, gamma = _read_hyperbolic_scale(P_norm, tol)
    work = P_norm
    if form == "definite":
        work = congruence_apply(P_norm, [list(r) for r in _COMPLEXIFY])
        form2, gamma = _read_hyperbolic_scale(work, tol)
        if form2 != "hyperbolic":
            raise StageError("ramification", "complexification failed")
    # m(x1,x2,x3): the pencil entries with x0 deleted, as 3-variable linear forms
    m = [
        [
            MultiPoly(
                3,
                {
                    tuple(int(k == t) for t in range(3)): work.matrices[k + 1][i][j]
                    for k in range(3)
                },
            )
            for j in range(4)
        ]
        for i in range(4)
    ]
    q = m[2][2] * m[3][3] - m[2][3] * m[2][3]
    delta = poly_matrix_det(m)

    def minor(i, j):
        sub = [[m[r][c] for c in range(4) if c != j] for r in range(4) if r != i]
        return poly_matrix_det(sub)

    f11 = minor(0, 0)
    f22 = minor(1, 1)
    g = -minor(0, 1)
    if f11.is_zero() or f22.is_zero():
        raise StageError("ramification", "a branch cubic vanishes identically")
    # Jacobi identity ties the data together; failure means a normalization bug
    resid = f11 * f22 - g * g - q * delta
    scale = max(f11.max_abs_coeff() * f22.max_abs_coeff(), 1.0)
    if not resid.is_negligible(tol.factor_identity, scale):
        raise StageError("ramification", "cofactor identity residual too large")
    kind, cr, cc = _classify_cubic_pair(f11, f22, tol)
    nine: tuple = ()
    lines: tuple = ()
    if with_intersections:
        pts = plane_curve_intersections(f11, f22, tol, seed)
        pts = _refine_line_images(q, g, delta, pts, tol)
        nine = tuple(pts)
        lines = tuple(_line_images(q, g, delta, pts, tol))
    return NodalProjection(
        q=q,
        g=g,
        delta=delta,
        f11=f11,
        f22=f22,
        x0_scale=gamma,
        kind=kind,
        nine_points=nine,
        cubics_real=cr,
        cubics_conjugate=cc,
        conic_point=conic_real_point(q, tol),
        lines_through_base=lines,
    )


def _classify_cubic_pair(f11: MultiPoly, f22: MultiPoly, tol: Tolerances):
    a = f11.leading_normalized()
    b = f22.leading_normalized()
    real = a.is_real(tol.realness) and b.is_real(tol.realness)
    conj = (a.conjugate() - b).is_negligible(
        tol.realness, max(a.max_abs_coeff(), 1.0)
    )
    if real:
        return "split-real", True, conj
    if conj:
        return "conjugate-pair", False, True
    return "complex", False, False


def _line_images(q, g, delta, nine_points, tol: Tolerances):
    """Image points where the whole projection fiber lies in the surface."""
    out = []
    sq = q.max_abs_coeff() or 1.0
    sg = g.max_abs_coeff() or 1.0
    sd = delta.max_abs_coeff() or 1.0
    for pt, mult in nine_points:
        y = pt.complex_coords()
        if (
            abs(q(y)) <= 1e-8 * sq
            and abs(g(y)) <= 1e-8 * sg
            and abs(delta(y)) <= 1e-8 * sd
        ):
            out.append(pt)
    return out


def _common_zero_polish(polys, y):
    """Gauss-Newton a point onto the common zero of several ternary forms.

    Iteration is step-driven: where the forms meet tangentially the residuals
    sit at the noise floor well before the point stops moving, so a residual
    exit would accept an unpolished point.
    """
    scales = [p.max_abs_coeff() or 1.0 for p in polys]
    parts = [[p.partial(j) for j in range(3)] for p in polys]
    y = np.array(y, dtype=complex)
    k = int(np.argmax(np.abs(y)))
    free = [j for j in range(3) if j != k]
    for _ in range(30):
        r = np.array([complex(p(list(y))) / s for p, s in zip(polys, scales)])
        J = np.array(
            [
                [complex(parts[i][j](list(y))) / scales[i] for j in free]
                for i in range(len(polys))
            ]
        )
        dz, *_ = np.linalg.lstsq(J, -r, rcond=None)
        if not np.all(np.isfinite(dz)):
            return None
        y = y.copy()
        y[free] += dz
        if np.max(np.abs(dz)) <= 1e-14 * max(1.0, float(np.max(np.abs(y)))):
            break
    r = np.array([complex(p(list(y))) / s for p, s in zip(polys, scales)])
    return y if np.max(np.abs(r)) <= 1e-11 else None


def _refine_line_images(q, g, delta, pts, tol: Tolerances):
    """Repair tangential intersections that float root-finding split in two.

    A fiber line inside the surface images to a point where conic, mixed and
    residual data all vanish and the branch cubics touch to order two; noise
    splits such a point into two simple roots a square root of the noise
    apart.  Candidates near the common zero are polished onto it and merged
    back into one point carrying the summed multiplicity.
    """
    sq = q.max_abs_coeff() or 1.0
    sg = g.max_abs_coeff() or 1.0
    sd = delta.max_abs_coeff() or 1.0
    keep: list = []
    polished: list[list] = []
    for pt, mult in pts:
        y = pt.complex_coords()
        near = (
            abs(q(y)) <= 1e-5 * sq
            and abs(g(y)) <= 1e-5 * sg
            and abs(delta(y)) <= 1e-5 * sd
        )
        z = _common_zero_polish([q, g, delta], y) if near else None
        if z is None:
            keep.append((pt, mult))
            continue
        zp = ProjPoint(list(z))
        for entry in polished:
            if entry[0].same_as(zp, 1e-6):
                entry[1] += mult
                break
        else:
            polished.append([zp, mult])
    return keep + [(p, m) for p, m in polished]


def project_from_node(
    P: SymmetricPencil,
    node: ProjPoint,
    tol: Tolerances = DEFAULT_TOL,
    seed: int = 0,
) -> tuple[NormalizedNode, NodalProjection]:
    ctx = normalize_at_node(P, node, tol)
    proj = ramification_data(ctx.pencil, tol, seed)
    return ctx, proj


# ---------------------------------------------------------------------------
# quartic route: read q, g, delta off a quartic with a node at (1:0:0:0)
# ---------------------------------------------------------------------------


def quartic_node_data(
    f: MultiPoly, tol: Tolerances = DEFAULT_TOL
) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """(q, g, delta) of a quartic with a node at (1:0:0:0).

    The quartic must be free of x0^4 and x0^3; the node condition is exactly
    that, plus delta and g carrying no further constraints.
    """
    if f.nvars != 4 or f.degree() != 4 or not f.is_homogeneous():
        raise InputError("expected a homogeneous quartic in 4 variables")
    sc = f.max_abs_coeff()
    parts = f.coeffs_in_var(0)
    for k in (3, 4):
        bad = parts.get(k)
        if bad is not None and not bad.is_negligible(1e-9, sc):
            raise StageError("node-normal-form", "quartic has no node at (1:0:0:0)")
    zero3 = MultiPoly.zero(3)
    q = -(parts.get(2, zero3))
    two_g = parts.get(1, zero3)
    if two_g.exact:
        g = two_g * Fraction(1, 2)
    else:
        g = two_g * 0.5
    delta = parts.get(0, zero3)
    return q, g, delta


def factor_ramification_sextic(
    sextic: MultiPoly, tol: Tolerances = DEFAULT_TOL, seed: int = 0
) -> tuple[MultiPoly, MultiPoly, str]:
    """Split g^2 + q*delta into its two cubic factors.

    The sextic is the branch locus of the double cover; the nine mutual
    intersection points of the two cubics are singular points, the cubics
    through them form a pencil, and the pair is cut out of that pencil by a
    rank-2 quadric.  Singular points beyond the nine (own nodes of a nodal or
    reducible factor) are screened out by subset search; near-coincident ones
    merge harmlessly because the rank argument tolerates a larger nullspace.
    Whatever pair comes out is re-polished against the product identity and
    only a verified product is accepted.  Returns leading-normalized factors
    and the pair's reality kind; exact rational factors are returned when the
    input is exact and the float factors snap cleanly.
    """
    if sextic.nvars != 3 or sextic.degree() != 6 or not sextic.is_homogeneous():
        raise InputError("expected a homogeneous sextic in 3 variables")
    p1 = sextic.partial(0)
    p2 = sextic.partial(1)
    p3 = sextic.partial(2)
    s_scale = sextic.max_abs_coeff()
    try:
        cand = plane_curve_intersections(p1, p2, tol, seed)
        sing = []
        for pt, _mult in cand:
            y = pt.complex_coords()
            if abs(sextic(y)) <= 1e-7 * s_scale and abs(p3(y)) <= 1e-6 * (p3.max_abs_coeff() or 1.0):
                sing.append(pt)
        sing = dedup_points(sing, tol.dedup)
    except CommonComponentError:
        raise
    except StageError:
        # clustered or tangential polar intersections defeat the certified
        # search; an uncertified point cloud is enough to seed the factor
        # recovery because the product identity check below is what certifies
        # the outcome
        sing = _singular_point_cloud(sextic, (p1, p2, p3), tol, seed)
    if not 6 <= len(sing) <= 18:
        raise StageError(
            "factor",
            f"expected around 9 singular points of the branch sextic, found {len(sing)}",
        )

    def quality(pt: ProjPoint) -> float:
        y = pt.complex_coords()
        bound = (max(abs(z) for z in y) + 1.0) ** 5
        return max(
            abs(p(y)) / ((p.max_abs_coeff() or 1.0) * bound) for p in (p1, p2, p3)
        )

    sing.sort(key=quality)
    # the full set first: merged clusters lower its rank and the gate ladder
    # absorbs the noise; subset search only screens out own nodes of a nodal
    # or reducible factor, which poison the nullspace
    got = _cubics_from_points(sextic, sing, tol)
    pool = sing[: min(len(sing), 12)]
    if got is None:
        for size in range(min(9, len(pool)), 5, -1):
            for subset in combinations(range(len(pool)), size):
                got = _cubics_from_points(sextic, [pool[i] for i in subset], tol)
                if got is not None:
                    break
            if got is not None:
                break
    if got is None:
        raise StageError(
            "factor", "no cubic pair through the singular points reproduces the sextic"
        )
    f11, f22, scalar = got
    kind, cr, cc = _classify_cubic_pair(f11, f22, tol)
    if kind == "conjugate-pair":
        # product of conjugates is a positive multiple of a norm; a negative
        # scalar would make the sextic minus a sum of squares, which the
        # underlying geometry forbids -- fail loudly if it happens
        if abs(scalar.imag) > 1e-7 * abs(scalar) or scalar.real <= 0:
            raise StageError(
                "factor", "conjugate cubic pair carries a negative scalar"
            )
    if sextic.exact:
        snapped = _try_exact_snap(sextic, f11)
        if snapped is not None:
            f11_r, f22_r = snapped
            return f11_r, f22_r, kind
    return f11, f22, kind


def _singular_point_cloud(
    sextic: MultiPoly,
    partials: tuple[MultiPoly, MultiPoly, MultiPoly],
    tol: Tolerances,
    seed: int,
    frames: int = 5,
) -> list[ProjPoint]:
    """Best-effort singular points of a plane sextic.

    Seeds come from polar-curve resultants in several random frames; each
    candidate is polished freely and kept only if the whole gradient vanishes
    there.  No completeness claim is made, and tight clusters are merged to a
    representative: downstream recovery tolerates both gaps and merges.
    """
    p1, p2, p3 = partials
    rng = np.random.default_rng(np.random.PCG64(seed + 211))
    s_scale = sextic.max_abs_coeff()
    scales = [p.max_abs_coeff() or 1.0 for p in partials]
    found: list[ProjPoint] = []
    for frame in range(frames):
        if frame == 0:
            S = None
            F, G = p1, p2
        else:
            # a random frame mixes all three partials through the chain rule
            S = _random_gl3(rng)
            s_sub = sextic.subs_linear(S)
            F, G = s_sub.partial(0), s_sub.partial(1)
        v = max(range(3), key=lambda k: min(_center_score(F, k), _center_score(G, k)))
        if min(_center_score(F, v), _center_score(G, v)) <= 1e-12:
            continue
        rest = [i for i in range(3) if i != v]
        res = elimination_resultant(F, G, v)
        if res.is_zero():
            raise CommonComponentError("polar curves share a component")
        full = F.degree() * G.degree()
        cs = [0j] * (full + 1)
        for exp, c in res.coeffs.items():
            cs[exp[1]] = complex(c)
        sc = max(abs(c) for c in cs) or 1.0
        deg_eff = max((k for k, c in enumerate(cs) if abs(c) > 1e-10 * sc), default=-1)
        if deg_eff < 1:
            continue
        try:
            w_roots = univariate_roots(UniPoly(cs[: deg_eff + 1]), tol)
        except StageError:
            continue
        fibs = [(1.0 + 0j, complex(z)) for z, _ in w_roots]
        if deg_eff < full:
            fibs.append((0j, 1.0 + 0j))
        for ab in fibs:
            rf = [z for z, _ in univariate_roots(_fiber_slice(F, v, ab), tol)] if F.degree_in(v) > 0 else []
            rg = [z for z, _ in univariate_roots(_fiber_slice(G, v, ab), tol)] if G.degree_in(v) > 0 else []
            for a in rf:
                for b in rg:
                    if abs(a - b) > 1e-2 * max(1.0, abs(a), abs(b)):
                        continue
                    t1 = _polish_on_fiber(F, G, v, rest, (a + b) / 2, ab)
                    x = np.array(_embed(v, rest, t1, ab), dtype=complex)
                    x = _polish_on_chart(F, G, x, iters=80)
                    if S is not None:
                        x = np.array(
                            [sum(complex(S[i][j]) * x[j] for j in range(3)) for i in range(3)],
                            dtype=complex,
                        )
                    x = x / x[int(np.argmax(np.abs(x)))]
                    pt = tuple(x)
                    bound = (float(np.max(np.abs(x))) + 1.0) ** 5
                    if any(
                        abs(p(pt)) > 1e-8 * scales[i] * bound
                        for i, p in enumerate(partials)
                    ):
                        continue
                    if abs(sextic(pt)) > 1e-8 * s_scale * bound * (float(np.max(np.abs(x))) + 1.0):
                        continue
                    newp = ProjPoint(list(x))
                    if not any(newp.same_as(old, 1e-4) for old in found):
                        found.append(newp)
    return found


def _cubics_from_points(
    sextic: MultiPoly, pts: list[ProjPoint], tol: Tolerances
) -> tuple[MultiPoly, MultiPoly, complex] | None:
    """Recover the cubic pair from a set of supposed mutual singular points.

    The cubics through the points must span at least a pencil; the sextic is
    then a rank-2 quadric in those nullspace coordinates, and splitting the
    quadric splits the sextic.  The points only seed the search: the pair is
    re-polished against the product identity and verified tightly, so a wrong
    subset returns None instead of a wrong answer.
    """
    monos = monomials_of_degree(3, 3)
    rows = []
    for p in pts:
        y = p.complex_coords()
        rows.append([y[0] ** a * y[1] ** b * y[2] ** c for (a, b, c) in monos])
    Emat = np.array(rows, dtype=complex)
    norms = np.linalg.norm(Emat, axis=1)
    Emat = Emat / norms[:, None]
    _, sv, Vh = np.linalg.svd(Emat)
    # ladder of rank gates: cluster dust around semi-merged singular points
    # inflates the rank at the tight gate; a looser one recovers the pencil
    # with noisy coordinates, which the pair polish then repairs
    seen_dims: set[int] = set()
    for gate in (1e-6, 1e-4, 3e-3):
        rank = int(np.sum(sv > gate * sv[0]))
        dim = len(monos) - rank
        if dim < 2 or dim > 4 or dim in seen_dims:
            continue
        seen_dims.add(dim)
        cubics = [
            MultiPoly(3, {m: Vh[rank + d, i].conjugate() for i, m in enumerate(monos)})
            for d in range(dim)
        ]
        got = _split_in_cubic_space(sextic, cubics, tol)
        if got is not None:
            return got
    return None


def _split_in_cubic_space(
    sextic: MultiPoly, cubics: list[MultiPoly], tol: Tolerances
) -> tuple[MultiPoly, MultiPoly, complex] | None:
    """Express the sextic as a rank-2 quadric in the given cubics and split it."""
    dim = len(cubics)
    smonos = monomials_of_degree(3, 6)

    def vec6(poly: MultiPoly) -> np.ndarray:
        return np.array([complex(poly.coeffs.get(m, 0)) for m in smonos])

    index_pairs = [(i, j) for i in range(dim) for j in range(i, dim)]
    B = np.stack([vec6(cubics[i] * cubics[j]) for i, j in index_pairs], axis=1)
    target = vec6(sextic)
    coef, *_ = np.linalg.lstsq(B, target, rcond=None)
    # loose screen only: the polished pair is re-verified tightly below
    if np.linalg.norm(B @ coef - target) > 1e-3 * max(1.0, float(np.linalg.norm(target))):
        return None
    Q = np.zeros((dim, dim), dtype=complex)
    for c, (i, j) in zip(coef, index_pairs):
        if i == j:
            Q[i, i] = c
        else:
            Q[i, j] = Q[j, i] = c / 2
    Uq, sq, _ = np.linalg.svd(Q)
    if dim > 2 and sq[2] > 1e-5 * sq[0]:
        return None
    U2 = Uq[:, :2]
    M = U2.conj().T @ Q @ U2.conj()
    M = (M + M.T) / 2
    u_poly = cubics[0] * complex(U2[0, 0])
    v_poly = cubics[0] * complex(U2[0, 1])
    for d in range(1, dim):
        u_poly = u_poly + cubics[d] * complex(U2[d, 0])
        v_poly = v_poly + cubics[d] * complex(U2[d, 1])
    pa, pb, pc = complex(M[0, 0]), 2 * complex(M[0, 1]), complex(M[1, 1])
    scale_abc = max(abs(pa), abs(pb), abs(pc))
    if scale_abc == 0.0:
        return None
    if abs(pa) > 1e-10 * scale_abc:
        rts = np.roots([pa, pb, pc])
        f11 = u_poly + v_poly * (-complex(rts[0]))
        f22 = u_poly + v_poly * (-complex(rts[1]))
    else:
        f11 = v_poly
        f22 = u_poly * pb + v_poly * pc
    if f11.is_zero() or f22.is_zero():
        return None
    f11, f22 = _polish_factor_pair(sextic, f11, f22)
    if f11.is_zero() or f22.is_zero():
        return None
    f11 = f11.leading_normalized()
    f22 = f22.leading_normalized()
    prod = f11 * f22
    lead_exp, lead_prod = prod.leading_term()
    lead_s = sextic.coeffs.get(lead_exp)
    if lead_s is None:
        return None
    scalar = complex(lead_s) / complex(lead_prod)
    resid = sextic - prod * scalar
    if not resid.is_negligible(1e-7, sextic.max_abs_coeff()):
        return None
    return f11, f22, scalar


def _polish_factor_pair(
    sextic: MultiPoly, f11: MultiPoly, f22: MultiPoly, iters: int = 30
) -> tuple[MultiPoly, MultiPoly]:
    """Gauss-Newton on both cubics' coefficients against f11*f22 = sextic.

    Decouples the final accuracy from the accuracy of the seeding points; the
    pair of a reduced product is an isolated solution up to rescaling, which
    least-squares steps handle without gauge fixing.
    """
    smonos = monomials_of_degree(3, 6)
    cmonos = monomials_of_degree(3, 3)
    sidx = {m: k for k, m in enumerate(smonos)}
    pidx = [
        [sidx[(mi[0] + mj[0], mi[1] + mj[1], mi[2] + mj[2])] for mj in cmonos]
        for mi in cmonos
    ]
    target = np.array([complex(sextic.coeffs.get(m, 0)) for m in smonos])
    a = np.array([complex(f11.coeffs.get(m, 0)) for m in cmonos])
    b = np.array([complex(f22.coeffs.get(m, 0)) for m in cmonos])
    # work at unit scale: split the target norm evenly between the factors
    tscale = float(np.linalg.norm(target)) or 1.0
    half = tscale**0.5
    a = a * (half / (float(np.linalg.norm(a)) or 1.0))
    b = b * (half / (float(np.linalg.norm(b)) or 1.0))
    target = target / tscale
    a = a / half
    b = b / half

    def prod_vec(av: np.ndarray, bv: np.ndarray) -> np.ndarray:
        out = np.zeros(len(smonos), dtype=complex)
        for i in range(10):
            if av[i] == 0:
                continue
            for j in range(10):
                out[pidx[i][j]] += av[i] * bv[j]
        return out

    # absorb the free product scalar into the first factor up front
    pv = prod_vec(a, b)
    denom = float((pv.conj() @ pv).real)
    if denom > 0.0:
        a = a * ((pv.conj() @ target) / denom)
    r = prod_vec(a, b) - target
    best = (float(np.linalg.norm(r)), a.copy(), b.copy())
    for _ in range(iters):
        Ja = np.zeros((len(smonos), 10), dtype=complex)
        Jb = np.zeros((len(smonos), 10), dtype=complex)
        for i in range(10):
            for j in range(10):
                K = pidx[i][j]
                Ja[K, i] += b[j]
                Jb[K, j] += a[i]
        J = np.concatenate([Ja, Jb], axis=1)
        colnorm = np.linalg.norm(J, axis=0)
        colnorm[colnorm == 0.0] = 1.0
        step, *_ = np.linalg.lstsq(J / colnorm, -r, rcond=None)
        step = step / colnorm
        moved = False
        for damp in (1.0, 0.5, 0.25):
            a_new = a + damp * step[:10]
            b_new = b + damp * step[10:]
            r_new = prod_vec(a_new, b_new) - target
            if np.linalg.norm(r_new) <= np.linalg.norm(r):
                a, b, r = a_new, b_new, r_new
                moved = True
                break
        if not moved:
            break
        if float(np.linalg.norm(r)) < best[0]:
            best = (float(np.linalg.norm(r)), a.copy(), b.copy())
        if best[0] <= 1e-15:
            break
    _, a, b = best
    a = a * half
    b = b * half
    f11_out = MultiPoly(3, {m: a[i] for i, m in enumerate(cmonos) if a[i] != 0})
    f22_out = MultiPoly(3, {m: b[i] for i, m in enumerate(cmonos) if b[i] != 0})
    return f11_out, f22_out


def _try_exact_snap(sextic: MultiPoly, f11: MultiPoly):
    """Rationalize a float cubic factor and verify by exact division."""
    try:
        cand = MultiPoly(
            3,
            {
                e: Fraction(c.real).limit_denominator(10**8)
                for e, c in f11.coeffs.items()
                if abs(c) > 1e-9
            },
        )
    except (ValueError, OverflowError):
        return None
    if cand.is_zero():
        return None
    if not all(abs(complex(cand.coeffs.get(e, 0)) - c) < 1e-6 * max(1.0, abs(c)) for e, c in f11.coeffs.items()):
        return None
    try:
        f22 = sextic.exact_div(cand)
    except InputError:
        return None
    return cand.leading_normalized(), f22.leading_normalized()


# ---------------------------------------------------------------------------
# lifting the nine nodes
# ---------------------------------------------------------------------------


def _restrict_pencil_to_fiber(P_norm: SymmetricPencil, y: tuple) -> list[np.ndarray]:
    """A(t, y1, y2, y3) = t*A0 + const; return [A0_float, M_float]."""
    mats = P_norm.float_matrices()
    const = sum(complex(y[k]) * mats[k + 1] for k in range(3))
    return [mats[0], const]


def _gradient_polish(grads, jac, v, scale):
    """Newton a 4-vector onto a regular zero of the determinant gradient."""
    v = np.array(v, dtype=complex)
    v = v / np.max(np.abs(v))
    for _ in range(25):
        r = np.array([complex(p(list(v))) for p in grads])
        k = int(np.argmax(np.abs(v)))
        free = [j for j in range(4) if j != k]
        J = np.array([[complex(jac[i][j](list(v))) for j in free] for i in range(4)])
        dz, *_ = np.linalg.lstsq(J, -r, rcond=None)
        if not np.all(np.isfinite(dz)):
            return None
        v = v.copy()
        v[free] += dz
        v = v / np.max(np.abs(v))
        if np.max(np.abs(dz)) <= 1e-15:
            break
    r = np.array([complex(p(list(v))) for p in grads])
    return v if np.max(np.abs(r)) <= 1e-11 * scale else None


def _fiber_rank2_points(
    P_norm: SymmetricPencil, y: tuple, tol: Tolerances, grads, jac
) -> list[np.ndarray]:
    """Rank-2 points at finite height on a fiber line inside the surface.

    The image point of such a line is only good to the root of the working
    precision (the branch data is tangentially flat there), so candidates from
    a minor sweep along the approximate fiber are re-polished in the ambient
    space as singular points of the quartic, where convergence is quadratic,
    and the rank call happens after that.
    """
    A0f, Mf = _restrict_pencil_to_fiber(P_norm, y)
    rng = np.random.default_rng(np.random.PCG64(12345))
    cands: list[complex] = []
    for _ in range(4):
        rows = sorted(rng.choice(4, size=3, replace=False))
        cols = sorted(rng.choice(4, size=3, replace=False))
        # det(t*A + M) on the submatrix: cubic in t via interpolation
        ts = [0.0, 1.0, -1.0, 2.0]
        vals = [
            complex(np.linalg.det((t * A0f + Mf)[np.ix_(rows, cols)])) for t in ts
        ]
        cubic = interpolate(ts, vals, exact=False)
        if cubic.max_abs_coeff() < 1e-12:
            continue
        if cubic.degree < 1:
            continue
        try:
            for z, _m in univariate_roots(cubic, tol):
                cands.append(complex(z))
        except InputError:
            continue
    fiber_dir = np.array([0.0, y[0], y[1], y[2]], dtype=complex)
    fiber_dir /= np.linalg.norm(fiber_dir)
    e0 = np.zeros(4, dtype=complex)
    e0[0] = 1.0
    scale = max(p.max_abs_coeff() for p in grads) or 1.0
    out: list[np.ndarray] = []
    for t in cands:
        A = t * A0f + Mf
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[0] > 0 and sv[2] > 1e-4 * sv[0]:
            continue
        v = _gradient_polish(grads, jac, [t, y[0], y[1], y[2]], scale)
        if v is None:
            continue
        # reject drift off the fiber line (towards the base node or beyond)
        proj = (np.conj(fiber_dir) @ v) * fiber_dir + (np.conj(e0) @ v) * e0
        if np.linalg.norm(v - proj) > 1e-5 * np.linalg.norm(v):
            continue
        if abs(np.conj(fiber_dir) @ v) <= 1e-6 * np.linalg.norm(v):
            continue
        Av = sum(
            complex(v[k]) * M for k, M in enumerate(P_norm.float_matrices())
        )
        sv = np.linalg.svd(Av, compute_uv=False)
        if sv[2] > 1e-9 * sv[0]:
            continue
        if not any(
            ProjPoint(list(v)).same_as(ProjPoint(list(w)), 1e-7) for w in out
        ):
            out.append(v)
    return out


def lift_nine_nodes(
    proj: NodalProjection,
    ctx: NormalizedNode,
    tol: Tolerances = DEFAULT_TOL,
) -> LiftOutcome:
    """Recover the other nine nodes from the plane picture.

    Each intersection point of the branch cubics is the image of a node; the
    double root of the fiber quadratic gives its height.  Fibers lying inside
    the surface (conic, mixed and residual data all vanish) carry two nodes
    each and are resolved by a rank sweep along the fiber line.
    """
    gamma = complex(proj.x0_scale)
    S = np.array([[complex(v) for v in row] for row in ctx.substitution])
    sq = proj.q.max_abs_coeff() or 1.0
    sg = proj.g.max_abs_coeff() or 1.0
    sd = proj.delta.max_abs_coeff() or 1.0
    work_pencil = ctx.pencil
    if ctx.kind == "definite-real":
        work_pencil = congruence_apply(ctx.pencil, [list(r) for r in _COMPLEXIFY])
    fiber_grads = None
    fiber_jac = None
    points: list[ProjPoint] = []
    branches: list[str] = []
    via_lines: list = []
    for pt, mult in proj.nine_points:
        y = pt.complex_coords()
        qv, gv, dv = complex(proj.q(y)), complex(proj.g(y)), complex(proj.delta(y))
        if abs(qv) > 1e-8 * sq:
            s_star = gv / qv
            branch = "conic"
        elif abs(gv) > 1e-8 * sg:
            s_star = -dv / gv
            branch = "residual"
        elif abs(dv) <= 1e-8 * sd:
            # whole fiber lies in the surface: sweep it for rank-2 points
            if fiber_grads is None:
                F = pencil_determinant(work_pencil)
                fiber_grads = [F.partial(i) for i in range(4)]
                fiber_jac = [
                    [gi.partial(j) for j in range(4)] for gi in fiber_grads
                ]
            vs = _fiber_rank2_points(work_pencil, y, tol, fiber_grads, fiber_jac)
            if len(vs) != 2:
                raise StageError(
                    "lift",
                    f"fiber line carries {len(vs)} rank-2 points, expected 2",
                )
            if mult != 2:
                raise StageError(
                    "lift", "fiber line under a simple intersection point"
                )
            lifted_pair = []
            for v in vs:
                x = S @ np.array(v, dtype=complex)
                node_pt = ProjPoint(list(x))
                points.append(node_pt)
                branches.append("line")
                lifted_pair.append(node_pt)
            via_lines.append((pt, tuple(lifted_pair)))
            continue
        else:
            raise StageError(
                "lift", "ramification point with q=g=0 but delta != 0"
            )
        # a tangency off the line case lifts to a single point carrying the
        # full plane multiplicity; repeat it so the total stays at nine
        y4 = np.array([s_star / gamma, y[0], y[1], y[2]], dtype=complex)
        x = S @ y4
        node_pt = ProjPoint(list(x))
        for _ in range(mult):
            points.append(node_pt)
            branches.append(branch)
    if len(points) != 9:
        raise StageError("lift", f"lift produced {len(points)} nodes, expected 9")
    return LiftOutcome(tuple(points), tuple(branches), tuple(via_lines))


# ---------------------------------------------------------------------------
# tangency and interlacing certificates
# ---------------------------------------------------------------------------


def total_tangency_check(
    conic: MultiPoly, cubic: MultiPoly, tol: Tolerances = DEFAULT_TOL, seed: int = 0
) -> tuple[bool, list]:
    """Does the cubic meet the conic to even order everywhere?"""
    pts = plane_curve_intersections(conic, cubic, tol, seed)
    return all(m % 2 == 0 for _, m in pts), pts


def conic_real_point(q: MultiPoly, tol: Tolerances = DEFAULT_TOL):
    """An explicit real point on a real conic, or None.

    Signature route: an indefinite or degenerate real quadratic form always
    has a real zero built from its eigen-directions; a definite one has none.
    """
    if q.nvars != 3 or q.degree() > 2:
        raise InputError("expected a ternary conic")
    if not q.is_real(tol.realness):
        return None
    Q = np.zeros((3, 3))
    for e, c in q.coeffs.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        if len(idx) != 2:
            raise InputError("conic is not homogeneous of degree 2")
        i, j = idx
        val = complex(c).real
        if i == j:
            Q[i][j] += val
        else:
            Q[i][j] += val / 2
            Q[j][i] += val / 2
    w, V = np.linalg.eigh(Q)
    scale = max(abs(w[0]), abs(w[2]), 1e-300)
    gate = tol.rank_gate * scale
    zeros = [k for k in range(3) if abs(w[k]) <= gate]
    if zeros:
        v = V[:, zeros[0]]
        return tuple(float(c) for c in v)
    if w[0] > 0 or w[2] < 0:
        return None  # definite
    v = V[:, 2] / np.sqrt(w[2]) + V[:, 0] / np.sqrt(-w[0])
    v = v / np.max(np.abs(v))
    return tuple(float(c) for c in v)


@dataclass(frozen=True)
class InterlaceResult:
    passed: bool
    lines_checked: int
    witness: dict | None = None


def interlacing_check(
    f: MultiPoly,
    h: MultiPoly,
    e,
    tol: Tolerances = DEFAULT_TOL,
    seed: int = 0,
) -> InterlaceResult:
    """Certify that h interlaces f with respect to the base point e.

    On each of `interlace_samples` random real lines through directions e the
    restrictions must be real-rooted with roots alternating (ties allowed at
    resolution `interlace_tie`).  Fails fast with the witness line.
    """
    if f.nvars != h.nvars:
        raise InputError("polynomial variable counts differ")
    if h.degree() != f.degree() - 1:
        raise InputError("interlacer must have degree one less")
    if not (f.is_real(tol.realness) and h.is_real(tol.realness)):
        raise InputError("interlacing is a real-coefficient question")
    e = [float(v) for v in e]
    fe = complex(f(e)).real
    he = complex(h(e)).real
    sf = f.max_abs_coeff()
    sh = h.max_abs_coeff()
    if abs(fe) <= 1e-10 * sf or abs(he) <= 1e-10 * sh:
        raise InputError("base point lies on a curve; interlacing undefined")
    rng = np.random.default_rng(np.random.PCG64(seed))
    n = f.nvars
    d = f.degree()
    for k in range(tol.interlace_samples):
        x = rng.standard_normal(n)
        pf = restrict_to_line(f, x, e)
        ph = restrict_to_line(h, x, e)
        rf = np.roots([complex(c).real for c in reversed(pf.coeffs)])
        rh = np.roots([complex(c).real for c in reversed(ph.coeffs)])
        spread = max(1.0, float(np.max(np.abs(rf))) if len(rf) else 1.0)
        if len(rf) != d or len(rh) != d - 1:
            return InterlaceResult(False, k + 1, {"line": list(x), "reason": "degree drop"})
        if np.max(np.abs(rf.imag)) > 1e-7 * spread:
            return InterlaceResult(
                False, k + 1, {"line": list(x), "reason": "nonreal roots of quartic restriction"}
            )
        if np.max(np.abs(rh.imag)) > 1e-7 * spread:
            return InterlaceResult(
                False, k + 1, {"line": list(x), "reason": "nonreal roots of interlacer"}
            )
        a = np.sort(rf.real)
        b = np.sort(rh.real)
        tie = tol.interlace_tie * spread
        for i in range(d - 1):
            if not (a[i] - tie <= b[i] <= a[i + 1] + tie):
                return InterlaceResult(
                    False,
                    k + 1,
                    {"line": list(x), "reason": "roots fail to alternate", "index": i},
                )
    return InterlaceResult(True, tol.interlace_samples)
