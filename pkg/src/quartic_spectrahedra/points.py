"""Projective points with exact or floating coordinates."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .tolerances import DEFAULT_TOL

_EXACT_TYPES = (int, Fraction)


class ProjPoint:
    """A point of projective space, stored with its largest coordinate scaled to 1.

    Exact rational coordinates survive normalization exactly; anything else is
    stored as complex.  Comparisons use the chordal metric (sine of the
    principal angle), which does not care which coordinate was the pivot.
    """

    __slots__ = ("coords", "exact")

    def __init__(self, coords: Sequence):
        vals = list(coords)
        if not vals:
            raise InputError("empty coordinate vector")
        exact = all(isinstance(v, _EXACT_TYPES) for v in vals)
        if exact:
            vals = [Fraction(v) for v in vals]
            pivot = max(range(len(vals)), key=lambda i: abs(vals[i]))
            if vals[pivot] == 0:
                raise InputError("zero vector is not a projective point")
            p = vals[pivot]
            vals = [v / p for v in vals]
        else:
            vals = [complex(v) for v in vals]
            pivot = max(range(len(vals)), key=lambda i: abs(vals[i]))
            if vals[pivot] == 0:
                raise InputError("zero vector is not a projective point")
            p = vals[pivot]
            vals = [v / p for v in vals]
        object.__setattr__(self, "coords", tuple(vals))
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("ProjPoint is immutable")

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def complex_coords(self) -> tuple[complex, ...]:
        return tuple(complex(v) for v in self.coords)

    def is_real(self, tol: float = DEFAULT_TOL.realness) -> bool:
        if self.exact:
            return True
        return all(abs(v.imag) <= tol for v in self.coords)

    def real_coords(self) -> tuple[float, ...]:
        if not self.is_real():
            raise InputError("point is not real")
        if self.exact:
            return tuple(float(v) for v in self.coords)
        return tuple(v.real for v in self.coords)

    def exact_coords(self) -> tuple[Fraction, ...]:
        if not self.exact:
            raise InputError("point is not exact")
        return self.coords  # type: ignore[return-value]

    def conjugate(self) -> "ProjPoint":
        if self.exact:
            return self
        return ProjPoint([v.conjugate() for v in self.coords])

    def distance(self, other: "ProjPoint") -> float:
        """sin of the principal angle between the two lines in C^n.

        Computed from the 2x2 minors (norm of the wedge product), which stays
        accurate for nearly-equal points where 1 - cos^2 would cancel.
        """
        a = self.complex_coords()
        b = other.complex_coords()
        if len(a) != len(b):
            raise InputError("dimension mismatch")
        na = math.sqrt(sum(abs(x) ** 2 for x in a))
        nb = math.sqrt(sum(abs(y) ** 2 for y in b))
        wedge = 0.0
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                wedge += abs(a[i] * b[j] - a[j] * b[i]) ** 2
        return min(1.0, math.sqrt(wedge) / (na * nb))

    def same_as(self, other: "ProjPoint", tol: float = DEFAULT_TOL.dedup) -> bool:
        return self.distance(other) <= tol

    def sort_key(self):
        return tuple((round(complex(v).real, 8), round(complex(v).imag, 8)) for v in self.coords)

    def __repr__(self):  # pragma: no cover
        if self.exact:
            inner = " : ".join(str(v) for v in self.coords)
        else:
            inner = " : ".join(
                f"{v.real:.6g}" + (f"{v.imag:+.6g}i" if abs(v.imag) > 1e-12 else "")
                for v in self.coords
            )
        return f"({inner})"


def dedup_points(points: list[ProjPoint], tol: float = DEFAULT_TOL.dedup) -> list[ProjPoint]:
    """Merge projectively-equal points, keeping first representatives,
    returned in canonical sort order."""
    kept: list[ProjPoint] = []
    for p in points:
        if not any(p.same_as(q, tol) for q in kept):
            kept.append(p)
    kept.sort(key=ProjPoint.sort_key)
    return kept


def match_point_sets(
    a: list[ProjPoint], b: list[ProjPoint], tol: float = DEFAULT_TOL.dedup
) -> bool:
    """Multiset equality of projective point lists under the chordal metric."""
    if len(a) != len(b):
        return False
    used = [False] * len(b)
    for p in a:
        hit = None
        for j, q in enumerate(b):
            if not used[j] and p.same_as(q, tol):
                hit = j
                break
        if hit is None:
            return False
        used[hit] = True
    return True
