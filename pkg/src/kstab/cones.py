"""Nef and ample tests, the normalization constant, and the boundary-face
contraction classification.

The curve cone of every model here is spanned by finitely many explicit
classes, so nefness and ampleness reduce to exact sign checks against that
list, and the normalization constant (the smallest lambda with K + lambda*L
effective along the cone) to one small linear program.  ``face_decompose``
then rewrites a normalized ample class as -K + delta*C + sum a_i E_i with
pairwise disjoint contracted curves and classifies which minimal model the
face contracts onto.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .curves import disjoint_sets, fiber_classes, minus_one_curves
from .errors import DomainError, InvariantError
from .lattice import (
    DivClass,
    Rational,
    SurfaceModel,
    anticanonical,
    basis_exceptional,
    canonical,
    div,
    intersect,
    square,
    zero_class,
)
from .ratlp import Optimal, cone_member, lp, solve

KIND_TO_P2 = "ToP2"
KIND_CONIC_F1 = "ConicBundleF1"
KIND_CONIC_P1P1 = "ConicBundleP1P1"
_KINDS = (KIND_TO_P2, KIND_CONIC_F1, KIND_CONIC_P1P1)


@lru_cache(maxsize=None)
def _mori_generators(degree: int) -> tuple[DivClass, ...]:
    s = SurfaceModel(degree)
    gens = minus_one_curves(s)
    if degree == 8:
        # one blown-up point: the ruling class closes the curve cone
        gens.append(div(1, [-1]))
    return tuple(gens)


def mori_generators(s: SurfaceModel) -> list[DivClass]:
    """Classes spanning the cone of curves."""
    return list(_mori_generators(s.degree))


@lru_cache(maxsize=None)
def _line_set(degree: int) -> frozenset:
    return frozenset(minus_one_curves(SurfaceModel(degree)))


@lru_cache(maxsize=None)
def _fiber_set(degree: int) -> frozenset:
    return frozenset(fiber_classes(SurfaceModel(degree)))


def is_nef(dv: DivClass, s: SurfaceModel) -> bool:
    """True when dv pairs nonnegatively with every curve-cone generator."""
    return all(intersect(dv, g, s) >= 0 for g in _mori_generators(s.degree))


def is_nef_lp(dv: DivClass, s: SurfaceModel) -> bool:
    """Linear-programming route to the nefness predicate.

    Minimizes dv.G over convex combinations of the cone generators; dv is
    nef exactly when that minimum is nonnegative.  Kept alongside is_nef
    so the two implementations can cross-check each other.
    """
    gens = _mori_generators(s.degree)
    products = [intersect(dv, g, s) for g in gens]
    res = solve(lp(products, [[1] * len(gens)], ["=="], [1]))
    if not isinstance(res, Optimal):
        raise InvariantError("minimum over a simplex must be attained")
    return res.value >= 0


def is_ample(dv: DivClass, s: SurfaceModel) -> bool:
    """True when dv pairs positively with every generator and dv**2 > 0."""
    return ample_violation(dv, s) is None


def ample_violation(dv: DivClass, s: SurfaceModel) -> str | None:
    """Reason dv fails the ampleness test, or None when ample."""
    if square(dv, s) <= 0:
        return f"self-intersection of {dv} is not positive"
    for g in _mori_generators(s.degree):
        if intersect(dv, g, s) <= 0:
            return f"pairing of {dv} with the curve class {g} is not positive"
    return None


def _coords(c: DivClass) -> tuple:
    return (c.h,) + c.e


def mu(l: DivClass, s: SurfaceModel) -> Rational:
    """Smallest lambda >= 0 with K + lambda*l in the curve cone.

    Solved exactly: minimize lambda subject to
    lambda*l - sum(t_i * G_i) = -K with all variables nonnegative.
    """
    if not is_ample(l, s):
        raise DomainError(f"mu needs an ample class; {ample_violation(l, s)}")
    gens = _mori_generators(s.degree)
    target = _coords(anticanonical(s))
    lcoords = _coords(l)
    rows = []
    for coord in range(s.r + 1):
        rows.append([lcoords[coord]] + [-_coords(g)[coord] for g in gens])
    res = solve(lp([1] + [0] * len(gens), rows, ["=="] * len(rows), list(target)))
    if not isinstance(res, Optimal):
        raise InvariantError("the normalization program must have a finite optimum")
    value = res.value
    # independent recheck through the membership formulation
    if cone_member(canonical(s) + value * l, list(gens)) is None:
        raise InvariantError("normalization value failed the membership recheck")
    return value


def mu_bisect(
    l: DivClass, s: SurfaceModel, width: Rational = Fraction(1, 1024)
) -> tuple[Rational, Rational]:
    """Bracket mu(l) by doubling plus bisection on cone membership.

    Returns (lo, hi) with hi - lo <= width, membership failing at lo and
    holding at hi, so lo < mu(l) <= hi.  Shares no code path with the
    parametric program in mu beyond the feasibility solver.
    """
    if not is_ample(l, s):
        raise DomainError(f"mu_bisect needs an ample class; {ample_violation(l, s)}")
    if width <= 0:
        raise DomainError("bracket width must be positive")
    gens = mori_generators(s)
    k = canonical(s)

    def member(x: Rational) -> bool:
        return cone_member(k + x * l, gens) is not None

    if member(Fraction(0)):
        raise InvariantError("the canonical class cannot lie in the curve cone")
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(64):
        if member(hi):
            break
        lo, hi = hi, 2 * hi
    else:
        raise InvariantError("no membership threshold found below 2**64")
    while hi - lo > width:
        mid = (lo + hi) / 2
        if member(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def _dot(a: DivClass, b: DivClass) -> Rational:
    if len(a.e) != len(b.e):
        raise DomainError("mixed ranks in contraction data")
    return a.h * b.h - sum(x * y for x, y in zip(a.e, b.e))


@dataclass(frozen=True)
class ContractionData:
    """Boundary-face data: l == -K + delta*curveC + sum(a_i * curveE_i).

    kind records the minimal model the contracted face maps onto.  ToP2
    has no fiber slot and delta = 0.  A conic-bundle kind always carries
    a fiber class; delta may still be zero when the fiber direction meets
    the face only in its closure.
    """

    kind: str
    delta: Rational
    a: tuple[Rational, ...]
    curveE: tuple[DivClass, ...]
    curveC: DivClass | None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown contraction kind {self.kind!r}")
        if self.delta < 0:
            raise DomainError("delta must be nonnegative")
        if len(self.a) != len(self.curveE):
            raise DomainError("need one coefficient per contracted curve")
        if any(x < 0 for x in self.a):
            raise DomainError("curve coefficients must be nonnegative")
        if any(x < y for x, y in zip(self.a, self.a[1:])):
            raise DomainError("curve coefficients must be sorted nonincreasing")
        if self.a and self.a[0] >= 1:
            raise DomainError("leading curve coefficient must stay below 1")
        if self.kind == KIND_TO_P2:
            if self.curveC is not None or self.delta != 0:
                raise DomainError("a plane contraction carries no fiber part")
        elif self.curveC is None:
            raise DomainError("a conic-bundle contraction needs a fiber class")
        classes = list(self.curveE)
        if self.curveC is not None:
            classes.append(self.curveC)
        if not classes:
            return
        degree = 9 - len(classes[0].e)
        if not 1 <= degree <= 8:
            raise DomainError("contraction data has an invalid rank")
        lines = _line_set(degree)
        for c in self.curveE:
            if c not in lines:
                raise DomainError(f"{c} is not an exceptional curve class")
        if self.curveC is not None and self.curveC not in _fiber_set(degree):
            raise DomainError(f"{self.curveC} is not a fiber class")
        for i, c1 in enumerate(classes):
            for c2 in classes[i + 1 :]:
                if _dot(c1, c2) != 0:
                    raise DomainError("contracted curves must be pairwise disjoint")


def reconstruct(data: ContractionData, s: SurfaceModel) -> DivClass:
    """The class -K + delta*C + sum(a_i * E_i) a decomposition encodes."""
    acc = anticanonical(s)
    if data.curveC is not None:
        acc = acc + data.delta * data.curveC
    for x, c in zip(data.a, data.curveE):
        acc = acc + x * c
    return acc


def _sorted_face(coeffs, subset):
    order = sorted(zip(coeffs, subset), key=lambda p: (-p[0], p[1].sort_key()))
    return tuple(p[0] for p in order), tuple(p[1] for p in order)


def _plane_decomposition(w, s, lines):
    for subset in disjoint_sets(lines, s.r, s):
        coeffs = tuple(-intersect(w, c, s) for c in subset)
        if any(x < 0 for x in coeffs):
            continue
        acc = zero_class(s)
        for x, c in zip(coeffs, subset):
            acc = acc + x * c
        if acc != w:
            continue
        a, curve = _sorted_face(coeffs, subset)
        return ContractionData(KIND_TO_P2, Fraction(0), a, curve, None)
    return None


def _section_curve(subset, fib, s, lines):
    for v in lines:
        if intersect(v, fib, s) == 1 and all(
            intersect(v, c, s) == 0 for c in subset
        ):
            return v
    return None


def _conic_decomposition(w, s, lines):
    fibers = fiber_classes(s)
    for subset in disjoint_sets(lines, s.r - 1, s):
        for fib in fibers:
            if any(intersect(fib, c, s) != 0 for c in subset):
                continue
            coeffs = tuple(-intersect(w, c, s) for c in subset)
            if any(x < 0 for x in coeffs):
                continue
            resid = w
            for x, c in zip(coeffs, subset):
                resid = resid - x * c
            delta = Fraction(resid.h, 1) / fib.h
            if delta < 0 or resid != delta * fib:
                continue
            kind = (
                KIND_CONIC_F1
                if _section_curve(subset, fib, s, lines) is not None
                else KIND_CONIC_P1P1
            )
            a, curve = _sorted_face(coeffs, subset)
            return ContractionData(kind, delta, a, curve, fib)
    return None


def face_decompose(l: DivClass, s: SurfaceModel) -> ContractionData:
    """Decompose a normalized ample class along its boundary face.

    Requires degree <= 7, l ample, and mu(l) = 1 (rescale first).  Tries
    a full-rank disjoint set of exceptional curves (plane contraction),
    then a corank-one set together with a fiber class (conic bundle),
    taking the lexicographically first valid choice in each pass.
    """
    if s.degree > 7:
        raise DomainError("face decomposition is defined for degree at most 7")
    if not is_ample(l, s):
        raise DomainError(
            f"face decomposition needs an ample class; {ample_violation(l, s)}"
        )
    if mu(l, s) != 1:
        raise DomainError("face decomposition needs a normalized class (mu = 1)")
    w = l + canonical(s)
    if w.is_zero():
        base = tuple(basis_exceptional(s, i) for i in range(1, s.r + 1))
        data = ContractionData(
            KIND_TO_P2, Fraction(0), (Fraction(0),) * s.r, base, None
        )
    else:
        lines = minus_one_curves(s)
        data = _plane_decomposition(w, s, lines)
        if data is None:
            data = _conic_decomposition(w, s, lines)
        if data is None:
            raise InvariantError(f"no boundary-face decomposition found for {l}")
    if reconstruct(data, s) != l:
        raise InvariantError("face decomposition failed the reconstruction check")
    return data
