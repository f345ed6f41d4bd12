"""Separating polynomials with exact minimum p-adic valuations over
residue classes.

A polynomial g separates alpha from L + qZ when v_p(g(alpha)) is strictly
below v_p(g(u)) for every integer u congruent mod q to an element of L.
Polynomials are kept in factored form (integer lead times integer roots),
which is the shape of every construction this toolkit produces and lets
class minima be computed exactly by a digit recursion instead of a scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .padic import PrimePower, Valuation, _vp_int, vp

__all__ = [
    "FactoredIntPoly",
    "SeparationReport",
    "canonical_interval_poly",
    "min_valuation_over_class",
    "check_separation",
    "search_min_degree",
    "degree_upper_bound",
]


@dataclass(frozen=True)
class FactoredIntPoly:
    """g(y) = lead * product of (y - r) over the root multiset."""

    lead: int
    roots: tuple[int, ...]

    def __post_init__(self):
        if self.lead == 0:
            raise ValueError("lead coefficient must be nonzero")
        object.__setattr__(self, "roots", tuple(sorted(self.roots)))

    @property
    def degree(self) -> int:
        return len(self.roots)

    def __call__(self, y: int) -> int:
        value = self.lead
        for r in self.roots:
            value *= y - r
        return value

    def shift_reflect(self, alpha: int) -> "FactoredIntPoly":
        """The polynomial y -> g(alpha - y), again in factored form."""
        lead = self.lead if self.degree % 2 == 0 else -self.lead
        return FactoredIntPoly(lead, tuple(alpha - r for r in self.roots))

    def __str__(self):
        head = "" if self.lead == 1 else f"{self.lead}*"
        factors = "".join(
            f"(y-{r})" if r >= 0 else f"(y+{-r})" for r in self.roots
        )
        return head + (factors or "1")


def canonical_interval_poly(L) -> FactoredIntPoly:
    """The monic polynomial whose roots are exactly the elements of L."""
    roots = tuple(sorted(L))
    if not roots:
        raise ValueError("L must be nonempty")
    return FactoredIntPoly(1, roots)


_joint_cache: dict[tuple[int, tuple[int, ...]], int] = {}


def _joint_min(p: int, offsets: tuple[int, ...]) -> int:
    """min over integers t of the sum of v_p(t - d) for d in offsets.

    A single offset (or all offsets equal) can be dodged entirely by
    choosing t in another residue class mod p, so the minimum is 0.
    Otherwise fix the last base-p digit c of t: offsets outside c's class
    contribute nothing and the rest recurse one digit deeper.  Memoized on
    the min-shifted multiset; depth is bounded by the digit length of the
    largest pairwise offset difference.
    """
    if len(offsets) <= 1:
        return 0
    base = min(offsets)
    norm = tuple(sorted(d - base for d in offsets))
    if norm[-1] == 0:
        return 0
    key = (p, norm)
    hit = _joint_cache.get(key)
    if hit is not None:
        return hit
    best: int | None = None
    for c in range(p):
        bucket = [d for d in norm if d % p == c]
        if not bucket:
            best = 0
            break
        cand = len(bucket) + _joint_min(p, tuple((d - c) // p for d in bucket))
        if best is None or cand < best:
            best = cand
    _joint_cache[key] = best
    return best


def min_valuation_over_class(
    pp: PrimePower, g: FactoredIntPoly, residue: int
) -> Valuation:
    """Exact minimum of v_p(g(u)) over all integers u == residue (mod q).

    Roots outside the residue class contribute the fixed amount
    v_p(residue - r); each in-class root contributes k plus a digit term,
    and the joint minimum of the digit terms is computed by `_joint_min`.
    """
    if not 0 <= residue < pp.q:
        raise ValueError(f"residue {residue} out of range [0, {pp.q - 1}]")
    total = _vp_int(pp.p, g.lead)
    offsets = []
    for r in g.roots:
        if (r - residue) % pp.q:
            total += _vp_int(pp.p, residue - r)
        else:
            offsets.append((r - residue) // pp.q)
    if offsets:
        total += pp.k * len(offsets) + _joint_min(pp.p, tuple(offsets))
    return Valuation(total)


@dataclass
class SeparationReport:
    """Outcome of testing whether g separates alpha from L + qZ.

    `class_minima` maps each element of L to the exact minimum valuation of
    g over that element's residue class.  The shifted flags test the two
    side conditions v_p(g(alpha)) <= v_p(g(u -+ 1)) over the same classes,
    which unlock the stronger (n-1)-column bounds downstream.
    """

    alpha: int
    v0: Valuation
    class_minima: dict[int, Valuation]
    separates: bool
    shifted_minus_ok: bool
    shifted_plus_ok: bool


def check_separation(
    pp: PrimePower, g: FactoredIntPoly, alpha: int, L
) -> SeparationReport:
    """Full separation report for g, alpha and the residue set L."""
    q = pp.q
    residues = sorted({ell % q for ell in L})
    if not residues:
        raise ValueError("L must be nonempty")
    if alpha % q in residues:
        raise ValueError(f"alpha = {alpha} lies in L modulo {q}")
    v0 = vp(pp.p, g(alpha))
    minima = {ell: min_valuation_over_class(pp, g, ell % q) for ell in sorted(set(L))}
    separates = all(v0 < m for m in minima.values())
    minus_ok = all(
        v0 <= min_valuation_over_class(pp, g, (r - 1) % q) for r in residues
    )
    plus_ok = all(
        v0 <= min_valuation_over_class(pp, g, (r + 1) % q) for r in residues
    )
    return SeparationReport(alpha, v0, minima, separates, minus_ok, plus_ok)


def search_min_degree(
    pp: PrimePower,
    alpha: int,
    L,
    max_degree: int,
    root_window: range | None = None,
) -> tuple[FactoredIntPoly, int] | None:
    """Lowest-degree monic integer-rooted polynomial separating alpha from L.

    Iterative deepening over the degree; root multisets are drawn from
    `root_window` (default [0, q**2)) in sorted-multiset lexicographic
    order, so the result is reproducible byte for byte.  The degree found
    is an upper bound on the true minimum over the factored candidate
    class only; returns None when nothing passes within the limits.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    window = root_window if root_window is not None else range(0, pp.q ** 2)
    for d in range(1, max_degree + 1):
        for roots in combinations_with_replacement(window, d):
            g = FactoredIntPoly(1, roots)
            if check_separation(pp, g, alpha, L).separates:
                return g, d
    return None


def degree_upper_bound(s: int, k: int) -> int:
    """Worst-case separating degree over all size-s residue sets mod p**k.

    floor of min(2**(s-1), (1 + (s-1)/k)**k), evaluated in exact rational
    arithmetic before flooring.
    """
    if s < 1 or k < 1:
        raise ValueError("s and k must be positive")
    alt = Fraction(k + s - 1, k) ** k
    return math.floor(min(Fraction(2 ** (s - 1)), alt))
