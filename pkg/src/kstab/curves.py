"""Enumeration of the extremal curve data on each surface model.

Everything here is a bounded exhaustive search over integral classes, with
the bounds derived from the defining Diophantine identities, so the output
is self-verifying rather than a transcribed table.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .lattice import DivClass, SurfaceModel, canonical, intersect

_ZERO = Fraction(0)


def _nonincreasing_tuples(length, lo, hi, total, sq_total):
    """Nonincreasing integer tuples with fixed sum and fixed sum of squares."""
    out = []

    def rec(prefix, remaining, cap, t, q):
        if remaining == 0:
            if t == 0 and q == 0:
                out.append(tuple(prefix))
            return
        for v in range(min(cap, t - lo * (remaining - 1)), lo - 1, -1):
            # bounds: later entries are <= v and >= lo
            rt = t - v
            rq = q - v * v
            if rq < 0:
                continue
            if rt > v * (remaining - 1) or rt < lo * (remaining - 1):
                continue
            # Cauchy-Schwarz: remaining sum of squares >= rt^2 / (remaining-1)
            if remaining > 1 and rt * rt > rq * (remaining - 1):
                continue
            if remaining > 1 and rq > (remaining - 1) * max(v * v, lo * lo):
                continue
            rec(prefix + [v], remaining - 1, v, rt, rq)

    rec([], length, hi, total, sq_total)
    return out


def _distinct_permutations(values):
    """All distinct orderings of a multiset, in lexicographic order."""
    values = sorted(values)
    n = len(values)
    out = []

    def rec(prefix, pool):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        last = None
        for i, v in enumerate(pool):
            if v == last:
                continue
            last = v
            rec(prefix + [v], pool[:i] + pool[i + 1 :])

    rec([], values)
    return out


@lru_cache(maxsize=None)
def _minus_one_curves(degree: int) -> tuple[DivClass, ...]:
    s = SurfaceModel(degree)
    r = s.r
    found = []
    # candidates a*H - sum(b_i E_i), integral, with a^2 - sum b_i^2 = -1
    # and 3a - sum b_i = 1.  Cauchy-Schwarz on (b_i) gives
    # (3a-1)^2 <= r*(a^2+1), so a <= 6 for r <= 8; equality at a = 7, r = 8
    # would force all b_i = 20/8, not integral.  The same argument applied to
    # all-but-one coordinate pins each b_i to [-1, a].
    for a in range(0, 7):
        total = 3 * a - 1
        sq = a * a + 1
        if total * total > r * sq:
            continue
        for multiset in _nonincreasing_tuples(r, -1, a, total, sq):
            for perm in _distinct_permutations(multiset):
                found.append(
                    DivClass(Fraction(a), tuple(Fraction(-b) for b in perm))
                )
    found.sort(key=DivClass.sort_key)
    mk = canonical(s)
    for c in found:
        assert intersect(c, c, s) == -1 and intersect(mk, c, s) == -1, c
    return tuple(found)


@lru_cache(maxsize=None)
def _fiber_classes(degree: int) -> tuple[DivClass, ...]:
    s = SurfaceModel(degree)
    r = s.r
    lines = _minus_one_curves(degree)
    mk = canonical(s)
    found = []
    # candidates h*H - sum(b_i E_i) with h^2 = sum b_i^2 and 3h - sum b_i = 2.
    # Cauchy-Schwarz: (3h-2)^2 <= r*h^2, so h <= 5 for r <= 7 and h <= 11 for
    # r = 8; per-coordinate it pins b_i to [0, h].
    hi = 11 if r == 8 else 5
    for h in range(1, hi + 1):
        total = 3 * h - 2
        sq = h * h
        if total * total > r * sq:
            continue
        for multiset in _nonincreasing_tuples(r, 0, h, total, sq):
            for perm in _distinct_permutations(multiset):
                cand = DivClass(Fraction(h), tuple(Fraction(-b) for b in perm))
                if all(intersect(cand, line, s) >= 0 for line in lines):
                    found.append(cand)
    found.sort(key=DivClass.sort_key)
    for c in found:
        assert intersect(c, c, s) == 0 and intersect(mk, c, s) == -2, c
    return tuple(found)


def minus_one_curves(s: SurfaceModel) -> list[DivClass]:
    """All integral classes C with C^2 = -1 and -K.C = 1, sorted."""
    return list(_minus_one_curves(s.degree))


def fiber_classes(s: SurfaceModel) -> list[DivClass]:
    """All integral classes C with C^2 = 0, -K.C = 2, nonnegative against
    every curve from minus_one_curves."""
    return list(_fiber_classes(s.degree))


def disjoint_sets(curves, k: int, s: SurfaceModel) -> list[tuple[DivClass, ...]]:
    """All k-subsets of curves with pairwise product 0, in index-lex order."""
    curves = list(curves)
    if len(set(curves)) != len(curves):
        raise DomainError("curves must be pairwise distinct")
    if k < 0:
        raise DomainError("k must be >= 0")
    out = []

    def rec(start, chosen):
        if len(chosen) == k:
            out.append(tuple(chosen))
            return
        for i in range(start, len(curves)):
            c = curves[i]
            if all(intersect(c, d, s) == 0 for d in chosen):
                rec(i + 1, chosen + [c])

    rec(0, [])
    return out
