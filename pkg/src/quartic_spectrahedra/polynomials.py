"""Dense exponent-map polynomials with a dual exact/float personality.

Everything downstream (pencil determinants, ramification data, the
reconstruction pipeline) runs on :class:`MultiPoly` in at most four variables
and :class:`UniPoly` restrictions.  A polynomial is *exact* when every
coefficient is a :class:`fractions.Fraction`; any float or complex coefficient
demotes the whole polynomial to complex floats.  Exact inputs stay exact
through ring operations, substitution, resultants and division, which is what
lets the determinantal identities in the test-suite be asserted with ``==``
rather than a tolerance.

Monomial order is graded lexicographic with ``x0 > x1 > x2 > x3``; that order
fixes leading coefficients, canonical coefficient vectors, and echelon pivots
everywhere else in the package.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InputError, MultiplicityVoteError
from .tolerances import DEFAULT_TOL, Tolerances

Exponent = tuple[int, ...]

_EXACT_TYPES = (int, Fraction)


def _canon_scalar(c):
    """Normalize a coefficient to Fraction (exact) or complex (approx)."""
    if isinstance(c, bool):
        raise InputError("boolean is not a polynomial coefficient")
    if isinstance(c, _EXACT_TYPES):
        return Fraction(c)
    if isinstance(c, (float, complex, np.floating, np.complexfloating, np.integer)):
        if isinstance(c, np.integer):
            return Fraction(int(c))
        return complex(c)
    raise InputError(f"unsupported coefficient type {type(c).__name__}")


def grlex_key(exp: Exponent) -> tuple:
    """Sort key; larger means later.  Use reverse=True for leading-first."""
    return (sum(exp), exp)


def monomials_of_degree(nvars: int, deg: int) -> list[Exponent]:
    """All exponent tuples of total degree ``deg``, leading (grlex) first."""
    out = [
        e
        for e in itertools.product(range(deg + 1), repeat=nvars)
        if sum(e) == deg
    ]
    out.sort(key=grlex_key, reverse=True)
    return out


class MultiPoly:
    """Immutable multivariate polynomial, exact-rational or complex-float."""

    __slots__ = ("nvars", "coeffs", "exact")

    def __init__(self, nvars: int, coeffs: Mapping[Exponent, object]):
        cleaned: dict[Exponent, object] = {}
        exact = True
        for exp, c in coeffs.items():
            exp = tuple(int(k) for k in exp)
            if len(exp) != nvars or any(k < 0 for k in exp):
                raise InputError(f"bad exponent {exp} for {nvars} variables")
            c = _canon_scalar(c)
            if not isinstance(c, Fraction):
                exact = False
            if exp in cleaned:
                cleaned[exp] = cleaned[exp] + c
            else:
                cleaned[exp] = c
        if not exact:
            cleaned = {e: complex(c) for e, c in cleaned.items()}
            cleaned = {e: c for e, c in cleaned.items() if c != 0}
        else:
            cleaned = {e: c for e, c in cleaned.items() if c != 0}
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MultiPoly":
        return MultiPoly(nvars, {})

    @staticmethod
    def constant(nvars: int, c) -> "MultiPoly":
        return MultiPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise InputError(f"variable index {i} out of range")
        e = [0] * nvars
        e[i] = 1
        return MultiPoly(nvars, {tuple(e): 1})

    @staticmethod
    def monomial(nvars: int, exp: Exponent, c=1) -> "MultiPoly":
        return MultiPoly(nvars, {tuple(exp): c})

    @staticmethod
    def from_terms(nvars: int, terms: Iterable[tuple[Exponent, object]]) -> "MultiPoly":
        acc: dict[Exponent, object] = {}
        for exp, c in terms:
            exp = tuple(exp)
            acc[exp] = acc.get(exp, 0) + c if exp in acc else c
        return MultiPoly(nvars, acc)

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_negligible(self, tol: float, scale: float | None = None) -> bool:
        if self.exact:
            return self.is_zero()
        bound = tol * (scale if scale is not None else 1.0)
        return all(abs(c) <= bound for c in self.coeffs.values())

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return max(sum(e) for e in self.coeffs)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.coeffs}
        return len(degs) <= 1

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        return sorted(self.coeffs.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, object]:
        if not self.coeffs:
            raise InputError("zero polynomial has no leading term")
        exp = max(self.coeffs, key=grlex_key)
        return exp, self.coeffs[exp]

    def leading_normalized(self) -> "MultiPoly":
        """Divide by the grlex-leading coefficient (monic in that sense)."""
        _, c = self.leading_term()
        return self * (Fraction(1) / c if self.exact else 1.0 / c)

    def max_abs_coeff(self) -> float:
        if not self.coeffs:
            return 0.0
        return max(abs(complex(c)) for c in self.coeffs.values())

    def degree_in(self, var: int) -> int:
        if not self.coeffs:
            return -1
        return max(e[var] for e in self.coeffs)

    def coefficient(self, exp: Exponent):
        return self.coeffs.get(tuple(exp), Fraction(0) if self.exact else 0j)

    def is_real(self, tol: float = 0.0) -> bool:
        if self.exact:
            return True
        scale = self.max_abs_coeff() or 1.0
        return all(abs(c.imag) <= tol * scale for c in self.coeffs.values())

    # -- ring operations -----------------------------------------------------

    def _check_compat(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise InputError("mixed variable counts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            other = MultiPoly.constant(self.nvars, other)
        self._check_compat(other)
        acc = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc[e] = acc.get(e, 0) + c
        return MultiPoly(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -_canon_scalar(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            if _canon_scalar(other) == 0:
                return MultiPoly.zero(self.nvars)
            return MultiPoly(self.nvars, {e: c * other for e, c in self.coeffs.items()})
        self._check_compat(other)
        acc: dict[Exponent, object] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative power")
        out = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover
        return hash((self.nvars, frozenset(self.coeffs.items())))

    def conjugate(self) -> "MultiPoly":
        if self.exact:
            return self
        return MultiPoly(self.nvars, {e: c.conjugate() for e, c in self.coeffs.items()})

    def partial(self, var: int) -> "MultiPoly":
        acc = {}
        for e, c in self.coeffs.items():
            k = e[var]
            if k:
                e2 = list(e)
                e2[var] = k - 1
                acc[tuple(e2)] = c * k
        return MultiPoly(self.nvars, acc)

    def gradient(self) -> list["MultiPoly"]:
        return [self.partial(i) for i in range(self.nvars)]

    # -- evaluation ----------------------------------------------------------

    def __call__(self, point: Sequence):
        if len(point) != self.nvars:
            raise InputError("point has wrong dimension")
        exact_pt = all(isinstance(v, _EXACT_TYPES) for v in point)
        if self.exact and exact_pt:
            total = Fraction(0)
            for e, c in self.coeffs.items():
                term = c
                for v, k in zip(point, e):
                    if k:
                        term *= Fraction(v) ** k
                total += term
            return total
        pt = [complex(v) for v in point]
        total = 0j
        for e, c in self.coeffs.items():
            term = complex(c)
            for v, k in zip(pt, e):
                if k:
                    term *= v**k
            total += term
        return total

    def eval_many(self, X: np.ndarray) -> np.ndarray:
        """Evaluate at the rows of X, shape (N, nvars)."""
        if not self.coeffs:
            return np.zeros(X.shape[0], dtype=complex)
        E = np.array(sorted(self.coeffs), dtype=np.int64)
        C = np.array([complex(self.coeffs[tuple(e)]) for e in E])
        mono = np.prod(X[:, None, :] ** E[None, :, :], axis=2)
        return mono @ C

    # -- structural maps -----------------------------------------------------

    def subs_linear(self, T: Sequence[Sequence]) -> "MultiPoly":
        """Compose with a linear change of variables: returns f(T @ y).

        ``T`` has ``nvars`` rows; the column count sets the new variable count.
        Exact when both the polynomial and T are exact.
        """
        rows = [list(r) for r in T]
        if len(rows) != self.nvars:
            raise InputError("substitution matrix has wrong row count")
        m = len(rows[0])
        if any(len(r) != m for r in rows):
            raise InputError("ragged substitution matrix")
        forms = [
            MultiPoly(m, {tuple(int(j == k) for k in range(m)): rows[i][j] for j in range(m)})
            for i in range(self.nvars)
        ]
        pow_cache: list[list[MultiPoly]] = [[MultiPoly.constant(m, 1)] for _ in range(self.nvars)]
        out = MultiPoly.zero(m)
        for e, c in self.coeffs.items():
            term = MultiPoly.constant(m, c)
            for i, k in enumerate(e):
                cache = pow_cache[i]
                while len(cache) <= k:
                    cache.append(cache[-1] * forms[i])
                if k:
                    term = term * cache[k]
            out = out + term
        return out

    def set_var_one(self, var: int) -> "MultiPoly":
        """Substitute x_var = 1, keeping the variable slot."""
        acc: dict[Exponent, object] = {}
        for e, c in self.coeffs.items():
            e2 = list(e)
            e2[var] = 0
            e2 = tuple(e2)
            acc[e2] = acc.get(e2, 0) + c
        return MultiPoly(self.nvars, acc)

    def drop_var(self, var: int) -> "MultiPoly":
        """Remove an unused variable slot."""
        if self.degree_in(var) > 0:
            raise InputError(f"variable {var} still occurs")
        return MultiPoly(
            self.nvars - 1,
            {e[:var] + e[var + 1:]: c for e, c in self.coeffs.items()},
        )

    def insert_var(self, pos: int, nnew: int = 1) -> "MultiPoly":
        """Add unused variable slots at ``pos``."""
        return MultiPoly(
            self.nvars + nnew,
            {e[:pos] + (0,) * nnew + e[pos:]: c for e, c in self.coeffs.items()},
        )

    def coeffs_in_var(self, var: int) -> dict[int, "MultiPoly"]:
        """Write the polynomial as sum_k x_var^k * c_k(other vars).

        The returned slices live in nvars-1 variables (slot removed).
        """
        buckets: dict[int, dict[Exponent, object]] = {}
        for e, c in self.coeffs.items():
            k = e[var]
            rest = e[:var] + e[var + 1:]
            buckets.setdefault(k, {})[rest] = buckets.get(k, {}).get(rest, 0) + c
        return {k: MultiPoly(self.nvars - 1, d) for k, d in buckets.items()}

    def to_unipoly_in(self, var: int) -> "UniPoly":
        """View as univariate in x_var; the other variables must not occur."""
        for e in self.coeffs:
            if any(k and i != var for i, k in enumerate(e)):
                raise InputError("polynomial is not univariate in the requested variable")
        deg = self.degree_in(var)
        coeffs = []
        for k in range(max(deg, 0) + 1):
            exp = tuple(k if i == var else 0 for i in range(self.nvars))
            coeffs.append(self.coefficient(exp))
        return UniPoly(coeffs)

    # -- exact division ------------------------------------------------------

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact quotient self/divisor; raises if the division leaves a remainder.

        Long division by a single divisor in grlex order; the remainder is zero
        iff divisor | self, which is what callers rely on.
        """
        self._check_compat(divisor)
        if divisor.is_zero():
            raise InputError("division by zero polynomial")
        if not (self.exact and divisor.exact):
            raise InputError("exact_div requires exact operands")
        lt_exp, lt_c = divisor.leading_term()
        rem = self
        quot: dict[Exponent, object] = {}
        while not rem.is_zero():
            r_exp, r_c = rem.leading_term()
            q_exp = tuple(a - b for a, b in zip(r_exp, lt_exp))
            if any(k < 0 for k in q_exp):
                raise InputError("polynomial division leaves a remainder")
            q_c = r_c / lt_c
            quot[q_exp] = quot.get(q_exp, 0) + q_c
            rem = rem - divisor * MultiPoly.monomial(self.nvars, q_exp, q_c)
        return MultiPoly(self.nvars, quot)

    def __repr__(self):  # pragma: no cover
        if not self.coeffs:
            return "MultiPoly(0)"
        names = ["x0", "x1", "x2", "x3", "x4", "x5"][: self.nvars]
        bits = []
        for e, c in self.sorted_terms()[:12]:
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i]
                for i, k in enumerate(e)
                if k
            )
            bits.append(f"({c})" + ("*" + mono if mono else ""))
        tail = " + ..." if len(self.coeffs) > 12 else ""
        return "MultiPoly[" + " + ".join(bits) + tail + "]"


def coeff_vector(f: MultiPoly, monos: Sequence[Exponent]):
    """Coefficients of f on the listed monomials (error if f has others)."""
    listed = set(map(tuple, monos))
    for e in f.coeffs:
        if e not in listed:
            raise InputError(f"unexpected monomial {e}")
    zero = Fraction(0) if f.exact else 0j
    return [f.coeffs.get(tuple(e), zero) for e in monos]


def poly_matrix_det(M: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a small matrix with polynomial entries.

    Laplace expansion with memoization on (row, remaining-columns); degrees of
    intermediates never exceed the final degree, which keeps exact arithmetic
    cheap for the sizes used here (n <= 8).
    """
    n = len(M)
    if n == 0:
        raise InputError("empty matrix")
    nvars = M[0][0].nvars
    memo: dict[tuple[int, tuple[int, ...]], MultiPoly] = {}

    def minor(r: int, cols: tuple[int, ...]) -> MultiPoly:
        if r == n:
            return MultiPoly.constant(nvars, 1)
        key = (r, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = MultiPoly.zero(nvars)
        for pos, c in enumerate(cols):
            entry = M[r][c]
            if entry.is_zero():
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            acc = acc + (term if pos % 2 == 0 else -term)
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


# ---------------------------------------------------------------------------
# univariate layer
# ---------------------------------------------------------------------------


class UniPoly:
    """Univariate polynomial, ascending coefficients, exact or complex."""

    __slots__ = ("coeffs", "exact")

    def __init__(self, coeffs: Sequence):
        vals = [_canon_scalar(c) for c in coeffs]
        exact = all(isinstance(c, Fraction) for c in vals)
        if not exact:
            vals = [complex(c) for c in vals]
        while vals and vals[-1] == 0:
            vals.pop()
        object.__setattr__(self, "coeffs", tuple(vals))
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("UniPoly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        acc = Fraction(0) if self.exact and isinstance(t, _EXACT_TYPES) else 0j
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def eval_many(self, ts: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(ts, dtype=complex)
        for c in reversed(self.coeffs):
            acc = acc * ts + complex(c)
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            other = UniPoly([other])
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, UniPoly) else -_canon_scalar(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            return UniPoly([c * other for c in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1) if self.coeffs and other.coeffs else []
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover
        return hash(self.coeffs)

    def max_abs_coeff(self) -> float:
        return max((abs(complex(c)) for c in self.coeffs), default=0.0)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        inv = Fraction(1) / lead if self.exact else 1.0 / lead
        return self * inv

    def divmod(self, d: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if d.is_zero():
            raise InputError("division by zero polynomial")
        if not (self.exact and d.exact):
            raise InputError("exact divmod requires exact operands")
        rem = list(self.coeffs)
        dd = d.degree
        lead = d.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] / lead
            if c:
                quot[i - dd] = c
                for j, b in enumerate(d.coeffs):
                    rem[i - dd + j] -= c * b
        return UniPoly(quot), UniPoly(rem[:dd] if dd else [])

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def squarefree_decomposition(self) -> list[tuple["UniPoly", int]]:
        """Yun's algorithm: returns [(factor_i, multiplicity_i)], exact."""
        if not self.exact:
            raise InputError("squarefree decomposition requires exact input")
        if self.degree <= 0:
            return []
        f = self.monic()
        fp = f.derivative()
        a = f.gcd(fp)
        b = f.divmod(a)[0]
        c = fp.divmod(a)[0]
        d = c - b.derivative()
        out = []
        i = 1
        while b.degree > 0:
            g = b.gcd(d)
            if g.degree > 0:
                out.append((g, i))
            b, c = b.divmod(g)[0], d.divmod(g)[0]
            d = c - b.derivative()
            i += 1
        return out


def restrict_to_line(f: MultiPoly, base: Sequence, direction: Sequence) -> UniPoly:
    """The univariate restriction t -> f(base + t*direction).

    Exact when all inputs are exact (interpolation through d+1 integer nodes
    solved over the rationals); complex-float otherwise.
    """
    d = max(f.degree(), 0)
    exact = f.exact and all(isinstance(v, _EXACT_TYPES) for v in list(base) + list(direction))
    ts = list(range(d + 1))
    ys = []
    for t in ts:
        pt = [b + t * s for b, s in zip(base, direction)]
        ys.append(f(pt))
    return interpolate(ts, ys, exact=exact)


def interpolate(xs: Sequence, ys: Sequence, exact: bool) -> UniPoly:
    """Interpolating polynomial through (xs, ys); Newton divided differences."""
    n = len(xs)
    if n != len(ys):
        raise InputError("interpolation data length mismatch")
    if exact:
        xs = [Fraction(x) for x in xs]
        table = [Fraction(y) for y in ys]
    else:
        xs = [complex(x) for x in xs]
        table = [complex(y) for y in ys]
    coeffs = [table[0]]
    for level in range(1, n):
        table = [
            (table[i + 1] - table[i]) / (xs[i + level] - xs[i])
            for i in range(n - level)
        ]
        coeffs.append(table[0])
    # expand the Newton form
    poly = UniPoly([coeffs[-1]])
    for k in range(n - 2, -1, -1):
        poly = poly * UniPoly([-xs[k], 1]) + UniPoly([coeffs[k]])
    return poly


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------


def _newton_polish(p: UniPoly, roots: np.ndarray, iters: int = 30) -> np.ndarray:
    dp = p.derivative()
    z = roots.astype(complex).copy()
    scale = p.max_abs_coeff() or 1.0
    for _ in range(iters):
        pv = p.eval_many(z)
        dv = dp.eval_many(z)
        safe = np.abs(dv) > 1e-300
        step = np.zeros_like(z)
        step[safe] = pv[safe] / dv[safe]
        # damp huge steps so clustered roots do not fly away
        big = np.abs(step) > 1.0 + np.abs(z)
        step[big] *= (1.0 + np.abs(z[big])) / np.abs(step[big])
        z = z - step
        if np.all(np.abs(pv) <= 1e-15 * scale * np.maximum(1.0, np.abs(z)) ** max(p.degree, 1)):
            break
    return z


def _cluster_points(points: list[complex], radius: float) -> list[list[int]]:
    """Union-find clustering with a scale-aware merge radius."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            r = radius * max(1.0, abs(points[i]), abs(points[j]))
            if abs(points[i] - points[j]) <= r:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pi] = pj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _root_sort_key(z: complex):
    return (round(z.real, 9), round(z.imag, 9))


def univariate_roots(
    p: UniPoly, tol: Tolerances = DEFAULT_TOL
) -> list[tuple[complex, int]]:
    """All complex roots with multiplicities.

    Float route: companion-matrix roots, Newton polish, cluster vote.  Exact
    route (rational coefficients): Yun square-free split pins multiplicities
    algebraically; the two votes must agree or the call fails loudly rather
    than guessing.
    """
    if p.is_zero():
        raise InputError("root finding on the zero polynomial")
    if p.degree == 0:
        return []
    if p.exact:
        out: list[tuple[complex, int]] = []
        for factor, mult in p.squarefree_decomposition():
            if factor.degree == 0:
                continue
            raw = np.roots([complex(c) for c in reversed(factor.coeffs)])
            polished = _newton_polish(factor, raw)
            out.extend((z, mult) for z in polished)
        out.sort(key=lambda t: _root_sort_key(t[0]))
        # cross vote: plain clustering of the full float root list
        float_roots = _float_roots_clustered(p, tol)
        if _multiset_signature(out, tol) != _multiset_signature(float_roots, tol):
            raise MultiplicityVoteError(
                f"cluster vote {_multiset_signature(float_roots, tol)} != "
                f"algebraic vote {_multiset_signature(out, tol)}"
            )
        return out
    return _float_roots_clustered(p, tol)


def _float_roots_clustered(p: UniPoly, tol: Tolerances) -> list[tuple[complex, int]]:
    coeffs = [complex(c) for c in p.coeffs]
    scale = max(abs(c) for c in coeffs)
    # strip numerically-dead leading coefficients before the companion matrix
    while len(coeffs) > 1 and abs(coeffs[-1]) <= 1e-13 * scale:
        coeffs.pop()
    if len(coeffs) <= 1:
        raise InputError("polynomial is numerically constant")
    raw = np.roots(coeffs[::-1])
    polished = _newton_polish(UniPoly(coeffs), raw)
    clusters = _cluster_points(list(polished), tol.root_cluster)
    out = []
    for idx in clusters:
        pts = [polished[i] for i in idx]
        center = sum(pts) / len(pts)
        if len(idx) == 1:
            center = _newton_polish(UniPoly(coeffs), np.array([center]))[0]
        out.append((complex(center), len(idx)))
    out.sort(key=lambda t: _root_sort_key(t[0]))
    return out


def _multiset_signature(roots: list[tuple[complex, int]], tol: Tolerances):
    """Order-insensitive (root, mult) fingerprint at clustering resolution."""
    merged: list[tuple[complex, int]] = []
    for z, m in sorted(roots, key=lambda t: _root_sort_key(t[0])):
        if merged and abs(merged[-1][0] - z) <= tol.root_cluster * max(1.0, abs(z)):
            merged[-1] = (merged[-1][0], merged[-1][1] + m)
        else:
            merged.append((z, m))
    return tuple(m for _, m in merged)


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------


def elimination_resultant(f: MultiPoly, g: MultiPoly, var: int) -> MultiPoly:
    """Sylvester resultant of f and g with respect to x_var.

    The result lives in the same variable ring with x_var absent.  Exact for
    exact inputs.  Degenerate cases (variable missing from both inputs) are
    rejected rather than silently returning a unit.
    """
    fc = f.coeffs_in_var(var)
    gc = g.coeffs_in_var(var)
    m = max(fc) if fc else -1
    n = max(gc) if gc else -1
    if m <= 0 and n <= 0:
        raise InputError(f"variable x{var} occurs in neither polynomial")
    nv = f.nvars - 1
    zero = MultiPoly.zero(nv)
    if m <= 0:
        # res(f, g) = f^deg(g) when f is constant in the variable
        base = fc.get(0, zero)
        return base**n if n > 0 else MultiPoly.constant(nv, 1)
    if n <= 0:
        base = gc.get(0, zero)
        return base**m if m > 0 else MultiPoly.constant(nv, 1)
    size = m + n
    rows: list[list[MultiPoly]] = []
    fa = [fc.get(k, zero) for k in range(m + 1)]
    ga = [gc.get(k, zero) for k in range(n + 1)]
    for shift in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[shift + k] = fa[m - k]
        rows.append(row)
    for shift in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[shift + k] = ga[n - k]
        rows.append(row)
    res = poly_matrix_det(rows)
    return res
