"""Slope normalization, the nef residual test and the K-stability verdicts.

The pipeline: compute the slope of the polarization, test whether the
anticanonical class minus two thirds of the slope-scaled polarization stays
nef, and branch on the degree.  Low degrees get a certified lower bound for
the alpha invariant; degree three is settled only on a specific one
parameter family; degrees four to seven get an upper-bound certificate
showing why the nef-residual route cannot conclude there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .alphabound import Certificate, certificate, compare_with_slope
from .cones import ample_violation, face_decompose, is_nef, mu
from .curves import disjoint_sets, minus_one_curves
from .errors import DomainError, InvariantError
from .lattice import (
    DivClass,
    Rational,
    SurfaceModel,
    anticanonical,
    intersect,
    rational_str,
    square,
    zero_class,
)

STATUS_MAIN = "KStableByMainTheorem"
STATUS_SIX_LINE = "KStableBySixLineTheorem"
STATUS_INAPPLICABLE = "DervanInapplicable"
STATUS_UNSUPPORTED = "Unsupported"
STATUS_UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    status: str
    condition_a: bool
    nu: Rational
    alpha_lower: Optional[Rational]
    certificate: Optional[Certificate]
    notes: str


@dataclass(frozen=True)
class EpsilonData:
    """The anticanonical pairing with the residual of a normalized class."""

    epsilon: Rational
    R: DivClass


def nu(l: DivClass, s: SurfaceModel) -> Fraction:
    """The slope (-K . l) / l^2."""
    sq = square(l, s)
    if sq == 0:
        raise DomainError("slope undefined: the class squares to zero")
    return intersect(anticanonical(s), l, s) / sq


def condition_a(l: DivClass, s: SurfaceModel) -> bool:
    """Whether -K - (2/3) nu(l) l is nef."""
    residual = anticanonical(s) - Fraction(2, 3) * nu(l, s) * l
    return is_nef(residual, s)


def normalize(l: DivClass, s: SurfaceModel) -> DivClass:
    """Rescale so the slope becomes exactly 3/2."""
    scaled = Fraction(2, 3) * nu(l, s) * l
    if nu(scaled, s) != Fraction(3, 2):
        raise InvariantError("normalization did not land on slope 3/2")
    return scaled


def _epsilon(s: SurfaceModel, l_normalized: DivClass) -> EpsilonData:
    r = anticanonical(s) - l_normalized
    eps = intersect(anticanonical(s), r, s)
    if eps <= 0 and r != zero_class(s):
        raise InvariantError("nonpositive epsilon for a nontrivial residual")
    return EpsilonData(epsilon=eps, R=r)


def gamma_lower_bound(s: SurfaceModel, l: DivClass) -> Fraction:
    """Certified alpha lower bound for the normalized class, degree 1 or 2.

    The bound is a single rational depending only on epsilon; it exceeds 1
    on the whole admissible range, which is what the stability argument
    needs.
    """
    if s.degree not in (1, 2):
        raise DomainError("gamma bound applies in degree 1 and 2 only")
    violation = ample_violation(l, s)
    if violation is not None:
        raise DomainError(f"gamma bound needs an ample class: {violation}")
    if not condition_a(l, s):
        raise DomainError("gamma bound needs the nef residual condition")
    eps = _epsilon(s, normalize(l, s)).epsilon
    if s.degree == 1:
        gamma = Fraction(6, 5) if eps >= Fraction(1, 2) else 3 / (3 - eps)
    else:
        gamma = Fraction(12, 11) if eps >= 1 else 12 / (12 - eps)
    if gamma <= 1:
        raise InvariantError("gamma bound failed to exceed 1")
    return gamma


def _six_line_parameter(l: DivClass, s: SurfaceModel):
    """Match l + K against x times a disjoint six-line sum, first match wins."""
    w = l - anticanonical(s)
    if w == zero_class(s):
        return Fraction(0)
    lines = minus_one_curves(s)
    for sextet in disjoint_sets(lines, 6, s):
        total = zero_class(s)
        for c in sextet:
            total = total + c
        x = intersect(anticanonical(s), w, s) / 6
        if x > 0 and w == x * total:
            return x
    return None


def verdict(s: SurfaceModel, l: DivClass) -> Verdict:
    """Top-level decision for a polarized surface in the supported range."""
    violation = ample_violation(l, s)
    if violation is not None:
        raise DomainError(f"verdict needs an ample class: {violation}")
    slope = nu(l, s)
    cond = condition_a(l, s)
    if s.degree == 8:
        return Verdict(
            status=STATUS_UNSUPPORTED,
            condition_a=cond,
            nu=slope,
            alpha_lower=None,
            certificate=None,
            notes="one-point blow-up models are settled by classical means "
            "and are outside the scope of this tool",
        )
    if s.degree <= 2:
        if not cond:
            return Verdict(
                status=STATUS_UNKNOWN,
                condition_a=cond,
                nu=slope,
                alpha_lower=None,
                certificate=None,
                notes="the nef residual condition fails, so the low-degree "
                "criterion does not apply",
            )
        gamma = gamma_lower_bound(s, l)
        rescaled = gamma * Fraction(2, 3) * slope
        return Verdict(
            status=STATUS_MAIN,
            condition_a=cond,
            nu=slope,
            alpha_lower=gamma,
            certificate=None,
            notes="alpha lower bound for the slope-normalized class; for the "
            f"input class it rescales to {rational_str(rescaled)}",
        )
    if s.degree == 3:
        x = _six_line_parameter(l, s)
        if x == 0:
            return Verdict(
                status=STATUS_UNKNOWN,
                condition_a=cond,
                nu=slope,
                alpha_lower=None,
                certificate=None,
                notes="the anticanonical cubic surface is settled by "
                "classical means and is outside the scope of this tool",
            )
        if x is not None and x <= Fraction(1, 10):
            return Verdict(
                status=STATUS_SIX_LINE,
                condition_a=cond,
                nu=slope,
                alpha_lower=2 / (3 + 3 * x),
                certificate=None,
                notes="six-line family parameter "
                f"{rational_str(x)} lies in the proven window",
            )
        if x is not None:
            return Verdict(
                status=STATUS_UNKNOWN,
                condition_a=cond,
                nu=slope,
                alpha_lower=None,
                certificate=None,
                notes="six-line family parameter "
                f"{rational_str(x)} is outside the proven window; stability "
                "there is only conjectured",
            )
        return Verdict(
            status=STATUS_UNKNOWN,
            condition_a=cond,
            nu=slope,
            alpha_lower=None,
            certificate=None,
            notes="no result covers this cubic-surface polarization",
        )
    # degree 4 to 7: produce the upper-bound certificate on the normalized
    # class; it rules out the nef-residual route instead of applying it
    scale = mu(l, s)
    cd = face_decompose(scale * l, s)
    cert = certificate(s, cd)
    comparison = compare_with_slope(s, cd, cert)
    upper = scale * cert.bound
    notes = (
        f"alpha upper bound {rational_str(cert.bound)} for the input scaled "
        f"by {rational_str(scale)}; for the input class it rescales to "
        f"{rational_str(upper)}, at most two thirds of the slope"
    )
    if comparison["equality"]:
        notes += "; the two sides agree exactly here"
    return Verdict(
        status=STATUS_INAPPLICABLE,
        condition_a=cond,
        nu=slope,
        alpha_lower=None,
        certificate=cert,
        notes=notes,
    )


def cubic_line_family_report(x) -> dict:
    """Exact report for the cubic-surface one-parameter six-line family.

    The window test is rationalized: the irrational left endpoint is the
    positive root of 13 t^2 + 2 t - 3, so membership is the sign of that
    quadratic together with the nef threshold.
    """
    x = Fraction(x)
    if not 0 <= x < 1:
        raise DomainError("family parameter must lie in [0, 1)")
    slope = (3 + x) / (3 + 2 * x - x * x)
    cond = x <= Fraction(3, 5)
    upper = 3 / (4 + 2 * x)
    in_window = 13 * x * x + 2 * x - 3 >= 0 and cond
    return {
        "x": x,
        "nu": slope,
        "condition_a": cond,
        "alpha_upper": upper,
        "in_window": in_window,
    }
