"""Intersection of plane projective curves with certified multiplicities.

The workhorse is :func:`plane_curve_intersections`.  One variable is
eliminated from the homogeneous pair with a Sylvester resultant; because the
projection center is kept off both curves, the resultant is a binary form of
degree exactly d*e whose root multiplicities are the fiber-wise sums of
intersection multiplicities.  Fibers are then resolved by matching the two
univariate slices along each projection line.  Degenerate situations (two
intersection points on one fiber line, no matchable fiber root) are detected
and retried under a seeded random change of coordinates instead of being
patched over.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import CommonComponentError, InputError, StageError
from .points import ProjPoint
from .polynomials import (
    MultiPoly,
    UniPoly,
    elimination_resultant,
    restrict_to_line,
    univariate_roots,
)
from .tolerances import DEFAULT_TOL, Tolerances


def _exact_det3(M) -> Fraction:
    a, b, c = M[0]
    d, e, f = M[1]
    g, h, i = M[2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _random_gl3(rng: np.random.Generator) -> list[list[Fraction]]:
    while True:
        M = [[Fraction(int(v)) for v in row] for row in rng.integers(-3, 4, (3, 3))]
        if _exact_det3(M) != 0:
            return M


def check_no_common_component(f: MultiPoly, g: MultiPoly, tol: Tolerances = DEFAULT_TOL) -> None:
    """Raise if the two plane curves share a component.

    Exact inputs: a common factor must involve some variable, and for any
    variable it involves, the resultant in that variable vanishes identically;
    scanning all shared variables is therefore a complete test.  Float inputs:
    a common factor puts a shared root on every line, so restrictions to a few
    random lines voting "root sets overlap" every time is the witness (the
    magnitude of a float resultant has no usable scale).
    """
    if f.exact and g.exact:
        shared = [
            v for v in range(f.nvars) if f.degree_in(v) > 0 and g.degree_in(v) > 0
        ]
        for v in shared:
            if elimination_resultant(f, g, v).is_zero():
                raise CommonComponentError()
        return
    rng = np.random.default_rng(np.random.PCG64(0xC0FFEE))
    overlaps = 0
    lines = 4
    for _ in range(lines):
        base = rng.standard_normal(f.nvars) + 1j * rng.standard_normal(f.nvars)
        direc = rng.standard_normal(f.nvars) + 1j * rng.standard_normal(f.nvars)
        pf = restrict_to_line(f, base, direc)
        pg = restrict_to_line(g, base, direc)
        rf = np.roots([complex(c) for c in reversed(pf.coeffs)])
        rg = np.roots([complex(c) for c in reversed(pg.coeffs)])
        if len(rf) == 0 or len(rg) == 0:
            overlaps += 1
            continue
        spread = max(1.0, float(np.max(np.abs(rf))), float(np.max(np.abs(rg))))
        dmin = min(abs(a - b) for a in rf for b in rg)
        if dmin <= 1e-6 * spread:
            overlaps += 1
    if overlaps == lines:
        raise CommonComponentError()


def _center_score(f: MultiPoly, var: int) -> float:
    """Relative size of the pure-power coefficient x_var^deg (0 means the
    coordinate point sits on the curve)."""
    d = f.degree()
    exp = tuple(d if i == var else 0 for i in range(f.nvars))
    c = f.coefficient(exp)
    m = f.max_abs_coeff()
    return abs(complex(c)) / m if m else 0.0


def _fiber_slice(F: MultiPoly, v: int, ab: tuple[complex, complex]) -> UniPoly:
    """F restricted to the line {t*e_v + a*e_i + b*e_j}, as a polynomial in t."""
    rest = [i for i in range(3) if i != v]
    cs = [0j] * (F.degree_in(v) + 1)
    for e, c in F.coeffs.items():
        val = complex(c)
        val *= ab[0] ** e[rest[0]]
        val *= ab[1] ** e[rest[1]]
        cs[e[v]] += val
    return UniPoly(cs)


def _polish_on_fiber(
    F: MultiPoly, G: MultiPoly, v: int, rest: list[int], t: complex,
    ab: tuple[complex, complex], iters: int = 30,
) -> complex:
    """Gauss-Newton along one projection fiber; the fiber itself stays fixed."""
    dFv, dGv = F.partial(v), G.partial(v)
    t = complex(t)
    for _ in range(iters):
        x = _embed(v, rest, t, ab)
        r = np.array([F(x), G(x)], dtype=complex)
        j = np.array([dFv(x), dGv(x)], dtype=complex)
        denom = float((np.conj(j) @ j).real)
        if denom == 0.0:
            break
        dt = -(np.conj(j) @ r) / denom
        t = t + dt
        if abs(dt) <= 1e-15 * max(1.0, abs(t)):
            break
    return t


def _polish_on_chart(
    F: MultiPoly, G: MultiPoly, x: np.ndarray, iters: int = 40,
    max_step: float | None = None,
) -> np.ndarray:
    """Damped Gauss-Newton for F=G=0 near x, freezing the largest coordinate.

    ``max_step`` caps the per-iteration step norm.  Near a tangential
    intersection the Jacobian is close to singular and an uncapped first step
    can jump into the basin of a nearby twin root.
    """
    x = x.astype(complex).copy()
    pivot = int(np.argmax(np.abs(x)))
    x = x / x[pivot]
    free = [i for i in range(3) if i != pivot]
    parts_F = [F.partial(i) for i in free]
    parts_G = [G.partial(i) for i in free]
    lam = 0.0
    for _ in range(iters):
        pt = tuple(x)
        r = np.array([F(pt), G(pt)], dtype=complex)
        J = np.array(
            [[p(pt) for p in parts_F], [p(pt) for p in parts_G]], dtype=complex
        )
        A = J.conj().T @ J + lam * np.eye(2)
        rhs = -J.conj().T @ r
        try:
            step = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            lam = max(lam * 10.0, 1e-12)
            continue
        if max_step is not None:
            norm = float(np.linalg.norm(step))
            if norm > max_step:
                step = step * (max_step / norm)
        x_new = x.copy()
        x_new[free[0]] += step[0]
        x_new[free[1]] += step[1]
        r_new = np.array([F(tuple(x_new)), G(tuple(x_new))], dtype=complex)
        if np.linalg.norm(r_new) <= np.linalg.norm(r):
            x = x_new
            lam /= 4.0
        else:
            lam = max(lam * 10.0, 1e-12)
    return x


def plane_curve_intersections(
    f: MultiPoly,
    g: MultiPoly,
    tol: Tolerances = DEFAULT_TOL,
    seed: int = 0,
    max_attempts: int = 8,
) -> list[tuple[ProjPoint, int]]:
    """All intersection points of two plane projective curves, with multiplicities.

    Returns ``[(point, multiplicity), ...]`` whose multiplicities sum to the
    product of the degrees.  Raises :class:`CommonComponentError` if the
    curves share a component and :class:`StageError` if no projection attempt
    yields a certified answer.
    """
    for p, name in ((f, "first"), (g, "second")):
        if p.nvars != 3:
            raise InputError(f"{name} curve must have 3 variables")
        if p.is_zero() or p.degree() < 1:
            raise InputError(f"{name} curve must have positive degree")
        if not p.is_homogeneous():
            raise InputError(f"{name} curve must be homogeneous")
    check_no_common_component(f, g, tol)
    d, e = f.degree(), g.degree()
    target = d * e
    rng = np.random.default_rng(np.random.PCG64(seed))
    last_reason = "no attempt ran"
    for attempt in range(max_attempts):
        if attempt == 0:
            S = None
            F, G = f, g
        else:
            S = _random_gl3(rng)
            F, G = f.subs_linear(S), g.subs_linear(S)
        v = max(range(3), key=lambda k: min(_center_score(F, k), _center_score(G, k)))
        if min(_center_score(F, v), _center_score(G, v)) <= 1e-12:
            last_reason = "projection center lies on a curve"
            continue
        rest = [i for i in range(3) if i != v]
        res = elimination_resultant(F, G, v)  # binary form in the two others
        if res.is_zero():
            raise CommonComponentError()
        # read the binary form R(a, b) as a polynomial in w = b/a
        # the eliminated slot is dropped, so res lives in (x_rest0, x_rest1)
        cs: list = [0] * (target + 1)
        for exp, c in res.coeffs.items():
            ka, kb = exp
            if ka + kb != target:
                raise StageError(
                    "intersection", f"resultant is not a binary form of degree {target}"
                )
            cs[kb] = c
        P = UniPoly(cs)
        if P.exact:
            inf_mult = target - P.degree
        else:
            sc = max(abs(complex(c)) for c in cs) or 1.0
            deg_eff = max(
                (k for k, c in enumerate(cs) if abs(complex(c)) > 1e-10 * sc), default=-1
            )
            P = UniPoly([complex(c) for c in cs[: deg_eff + 1]])
            inf_mult = target - deg_eff
        try:
            w_roots = [(complex(z), m) for z, m in univariate_roots(P, tol)] if P.degree >= 1 else []
        except StageError as err:
            last_reason = str(err)
            continue
        fibers: list[tuple[tuple[complex, complex], int]] = [((1.0 + 0j, z), m) for z, m in w_roots]
        if inf_mult > 0:
            fibers.append(((0j, 1.0 + 0j), inf_mult))
        out: list[tuple[ProjPoint, int]] = []
        ok = True
        for fi, (ab, mult) in enumerate(fibers):
            roots_F = [z for z, _ in univariate_roots(_fiber_slice(F, v, ab), tol)] if F.degree_in(v) > 0 else []
            roots_G = [z for z, _ in univariate_roots(_fiber_slice(G, v, ab), tol)] if G.degree_in(v) > 0 else []
            pairs = [
                (a, b)
                for a in roots_F
                for b in roots_G
                if abs(a - b) <= 1e-4 * max(1.0, abs(a), abs(b))
            ]
            if not pairs:
                ok = False
                last_reason = "no common root on a projection fiber"
                break
            # a near-match is only a candidate: when the curves run almost
            # tangent to each other, a fiber picks up root pairs far from any
            # true intersection.  Polishing drifts those to a zero over some
            # OTHER fiber, so assign each polished point to its nearest fiber
            # and keep only the ones that come home.
            nab = (abs(ab[0]) ** 2 + abs(ab[1]) ** 2) ** 0.5
            gap = min(
                (
                    abs(ab[0] * cd[1] - ab[1] * cd[0])
                    / (nab * (abs(cd[0]) ** 2 + abs(cd[1]) ** 2) ** 0.5)
                    for fj, (cd, _) in enumerate(fibers)
                    if fj != fi
                ),
                default=None,
            )
            # cap polish steps well below the gap to the nearest other fiber,
            # else the first Gauss-Newton step near a tangency overshoots into
            # a twin root's basin
            clamp = None if gap is None else max(0.3 * gap, 1e-9)
            confirmed: list[np.ndarray] = []
            for a, b in pairs:
                t1 = _polish_on_fiber(F, G, v, rest, (a + b) / 2, ab)
                x1 = np.array(_embed(v, rest, t1, ab), dtype=complex)
                x = _polish_on_chart(F, G, x1.copy(), max_step=clamp)
                if _nearest_fiber(x, rest, fibers) != fi:
                    # free polish hopped to a twin point over a nearby fiber;
                    # the on-fiber refinement cannot, so fall back to it
                    x = x1
                scale = max(F.max_abs_coeff(), G.max_abs_coeff()) * (
                    float(np.max(np.abs(x))) + 1.0
                ) ** max(d, e)
                if max(abs(F(tuple(x))), abs(G(tuple(x)))) > tol.joint_residual * scale:
                    continue
                if _nearest_fiber(x, rest, fibers) != fi:
                    continue
                if not any(
                    ProjPoint(list(x)).same_as(ProjPoint(list(y)), 1e-6)
                    for y in confirmed
                ):
                    confirmed.append(x)
            if not confirmed:
                ok = False
                last_reason = "no common root on a projection fiber"
                break
            if len(confirmed) > 1:
                ok = False
                last_reason = "two intersection points share a projection fiber"
                break
            x = confirmed[0]
            if S is not None:
                x = np.array(
                    [sum(complex(S[i][j]) * x[j] for j in range(3)) for i in range(3)],
                    dtype=complex,
                )
            out.append((ProjPoint(list(x)), mult))
        if not ok:
            continue
        if sum(m for _, m in out) != target:
            last_reason = "multiplicities do not sum to the degree product"
            continue
        out.sort(key=lambda t: t[0].sort_key())
        return out
    raise StageError("intersection", f"all projection attempts failed: {last_reason}")


def _embed(v: int, rest: list[int], t: complex, ab: tuple[complex, complex]) -> tuple:
    x = [0j, 0j, 0j]
    x[v] = t
    x[rest[0]] = ab[0]
    x[rest[1]] = ab[1]
    return tuple(x)


def _nearest_fiber(x: np.ndarray, rest: list[int], fibers) -> int:
    """Index of the fiber a point projects closest to (sine of the angle
    between (x_r0 : x_r1) and (a : b); scale-free on both sides)."""
    p0, p1 = complex(x[rest[0]]), complex(x[rest[1]])
    pn = np.hypot(abs(p0), abs(p1))
    best, best_d = -1, float("inf")
    for i, (ab, _m) in enumerate(fibers):
        an = np.hypot(abs(ab[0]), abs(ab[1]))
        d = abs(p0 * ab[1] - p1 * ab[0]) / (pn * an)
        if d < best_d:
            best, best_d = i, d
    return best
