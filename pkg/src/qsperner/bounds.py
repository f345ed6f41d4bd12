"""Theorem-portfolio bound engine.

Every rule below checks its hypotheses exactly (using the p-adic, closure,
and separating-polynomial machinery), produces an auditable certificate
with a binomial-sum descriptor, and the engine returns the minimum over
all applicable certificates.  Non-modular difference/Hamming/intersecting
constraints are additionally lifted to the p-modular setting at the
smallest prime exceeding both max(L) and n, which is always faithful
because no cardinality statistic can reach that prime.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .closure import IntervalL, closure_length_bound, q_closure
from .families import ConstraintSpec, Kind
from .padic import PrimePower, is_prime, lucas_nondivisible, vp_factorial, _vp_int
from .seppoly import (
    FactoredIntPoly,
    canonical_interval_poly,
    check_separation,
    degree_upper_bound,
    search_min_degree,
)

__all__ = [
    "BinomSum",
    "BoundCertificate",
    "SeparationFailure",
    "binom_sum",
    "best_bound",
    "bound_from_seppoly",
]


@dataclass(frozen=True)
class BinomSum:
    """Descriptor of sum of C(n, i) or C(n-1, i) for i in [lower, upper],
    with indices clamped into the column's valid range when evaluating."""

    lower: int
    upper: int
    column: str  # "n" or "n-1"
    value: int


def binom_sum(n: int, lower: int, upper: int, column: str = "n") -> BinomSum:
    if column not in ("n", "n-1"):
        raise ValueError(f"unknown column {column!r}")
    width = n if column == "n" else n - 1
    lo = max(lower, 0)
    hi = min(upper, width)
    value = sum(comb(width, i) for i in range(lo, hi + 1)) if lo <= hi else 0
    return BinomSum(lower, upper, column, value)


@dataclass(frozen=True)
class BoundCertificate:
    """A bound with its rule id and the machine-checked hypotheses that
    license it; `auxiliary` carries rule-specific evidence (separating
    polynomial roots, closure intervals, per-class degrees, ...)."""

    theorem_id: str
    hypotheses: tuple[tuple[str, bool], ...]
    bound: BinomSum
    auxiliary: dict | None = None


class SeparationFailure(ValueError):
    """A supplied polynomial fails to separate; names the failing class."""

    def __init__(self, message: str, failing_class: int, report=None):
        super().__init__(message)
        self.failing_class = failing_class
        self.report = report


def _rule_number(theorem_id: str) -> int:
    return int(theorem_id.lstrip("R"))


def _cert_key(cert: BoundCertificate):
    return (cert.bound.value, len(cert.hypotheses), _rule_number(cert.theorem_id))


def _next_prime(m: int) -> int:
    c = m + 1
    while not is_prime(c):
        c += 1
    return c


def _as_interval(L: tuple[int, ...]) -> IntervalL | None:
    """The plain interval equal to L, if there is one."""
    if L and L[-1] - L[0] + 1 == len(L) and L[0] >= 1:
        return IntervalL(L[0], L[-1])
    return None


def _as_mod_interval(L: tuple[int, ...], q: int) -> int | None:
    """Size of L as an interval in the modulo-q sense (wrap-around allowed);
    returns None when L is not one.  Tested by rotating every candidate
    start through L."""
    s = len(L)
    if s == 0 or s > q:
        return None
    Lset = set(L)
    for start in L:
        if all((start + i) % q in Lset for i in range(s)):
            return s
    return None


def _as_arithmetic_progression(L: tuple[int, ...]) -> tuple[int, int] | None:
    """(first term, common difference) when sorted L is an AP of positive
    integers; singletons count with difference 1."""
    if not L or L[0] < 1:
        return None
    if len(L) == 1:
        return L[0], 1
    d = L[1] - L[0]
    if d < 1:
        return None
    if all(L[i + 1] - L[i] == d for i in range(len(L) - 1)):
        return L[0], d
    return None


@dataclass
class _Ctx:
    kind: Kind
    n: int
    L: tuple[int, ...]  # sorted
    pp: PrimePower | None
    lift_note: tuple[str, bool] | None = None

    def hyp(self, *texts: str) -> tuple[tuple[str, bool], ...]:
        hyps = [(t, True) for t in texts]
        if self.lift_note is not None:
            hyps.append(self.lift_note)
        return tuple(hyps)


def _cert(ctx, rule, texts, bound, aux=None) -> BoundCertificate:
    return BoundCertificate(rule, ctx.hyp(*texts), bound, aux)


# --- difference-Sperner rules (modular) ------------------------------------


def _diff_kind_hyp(ctx: _Ctx) -> str:
    return f"family is {ctx.pp.q}-modular L-differencing Sperner"


def _r1(ctx: _Ctx):
    if ctx.pp.k != 1:
        return []
    s = len(ctx.L)
    texts = (_diff_kind_hyp(ctx), f"modulus {ctx.pp.p} is prime", f"L within [1, {ctx.pp.p - 1}]")
    return [_cert(ctx, "R1", texts, binom_sum(ctx.n, 0, s, "n"))]


def _r2(ctx: _Ctx):
    if ctx.pp.k != 1:
        return []
    s = len(ctx.L)
    texts = (_diff_kind_hyp(ctx), f"modulus {ctx.pp.p} is prime", f"L within [1, {ctx.pp.p - 1}]")
    return [_cert(ctx, "R2", texts, binom_sum(ctx.n, 0, s, "n-1"))]


def _r3(ctx: _Ctx):
    s = len(ctx.L)
    if ctx.L != tuple(range(1, s + 1)) or ctx.pp.q <= s:
        return []
    texts = (
        _diff_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"L = [{s}]",
        f"q = {ctx.pp.q} > s = {s}",
    )
    return [_cert(ctx, "R3", texts, binom_sum(ctx.n, 0, s, "n"))]


def _r4(ctx: _Ctx):
    iv = _as_interval(ctx.L)
    if iv is None:
        return []
    b, s = iv.hi, iv.size
    if not lucas_nondivisible(ctx.pp.p, b, s):
        return []
    texts = (
        _diff_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"L is the interval {iv}",
        f"{ctx.pp.p} does not divide C({b}, {s})",
    )
    aux = {"b": b, "s": s}
    return [_cert(ctx, "R4", texts, binom_sum(ctx.n, 0, s, "n-1"), aux)]


def _r5(ctx: _Ctx):
    q = ctx.pp.q
    if ctx.L != tuple(range(1, q)):
        return []
    texts = (
        _diff_kind_hyp(ctx),
        f"modulus {q} is a prime power",
        f"L = [1, {q - 1}], the full nonzero residue range",
    )
    return [_cert(ctx, "R5", texts, binom_sum(ctx.n, 0, q - 1, "n-1"))]


def _r6(ctx: _Ctx):
    ap = _as_arithmetic_progression(ctx.L)
    if ap is None:
        return []
    a, d = ap
    p, k = ctx.pp.p, ctx.pp.k
    s = len(ctx.L)
    lhs = sum(_vp_int(p, ell) for ell in ctx.L)
    vd = _vp_int(p, d)
    rhs = max((s - 1) * vd + k, s * vd + vp_factorial(p, s).value + 1)
    if lhs >= rhs:
        return []
    texts = (
        _diff_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"L is the arithmetic progression {a} + {d}*[0, {s - 1}]",
        f"sum of valuations {lhs} < max((s-1)v(d)+v(q), s v(d)+v(s!)+1) = {rhs}",
    )
    return [_cert(ctx, "R6", texts, binom_sum(ctx.n, 0, s, "n"), {"a": a, "d": d})]


def _r7(ctx: _Ctx):
    p, k = ctx.pp.p, ctx.pp.k
    total = sum(_vp_int(p, ell) for ell in ctx.L)
    if total >= k:
        return []
    texts = (
        _diff_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"sum of element valuations {total} < k = {k}",
    )
    return [_cert(ctx, "R7", texts, binom_sum(ctx.n, 0, len(ctx.L), "n"))]


def _r8(ctx: _Ctx):
    iv = _as_interval(ctx.L)
    if iv is None:
        return []
    s = iv.size
    mu = closure_length_bound(ctx.pp, s)
    branches = {
        "closure": binom_sum(ctx.n, 0, mu, "n-1"),
        "doubling": binom_sum(ctx.n, 0, 2 ** (s - 1), "n"),
    }
    if ctx.pp.k == 2:
        branches["prime-square"] = binom_sum(ctx.n, 0, 2 * s - 1, "n")
    winner = min(branches, key=lambda name: branches[name].value)
    texts = (
        _diff_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"L is the interval {iv}",
    )
    aux = {
        "branches": {name: b.value for name, b in branches.items()},
        "winner": winner,
        "closure_length_bound": mu,
    }
    return [_cert(ctx, "R8", texts, branches[winner], aux)]


def _r9(ctx: _Ctx):
    s = len(ctx.L)
    texts = (
        _diff_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"L within [1, {ctx.pp.q - 1}]",
        f"worst-case separating degree 2^(s-1) = {2 ** (s - 1)}",
    )
    return [_cert(ctx, "R9", texts, binom_sum(ctx.n, 0, 2 ** (s - 1), "n"))]


def _zero_separation_candidates(pp: PrimePower, L: tuple[int, ...]):
    """Deterministic factored candidates for separating 0 from L mod q:
    the plain root set, the closed superinterval of its hull, and the full
    range [1, q-1] (which always works)."""
    cands = [("given residues", canonical_interval_poly(L))]
    hull = IntervalL(L[0], L[-1])
    closed = q_closure(pp, hull).interval
    cands.append((f"closed superinterval {closed}", canonical_interval_poly(closed.residues())))
    if pp.q > 2:
        cands.append(
            ("full range", canonical_interval_poly(range(1, pp.q)))
        )
    return cands


def _r22_diff_hamming(ctx: _Ctx, rule_kind_text: str, allow_column_upgrade: bool):
    best = None
    for label, g in _zero_separation_candidates(ctx.pp, ctx.L):
        rep = check_separation(ctx.pp, g, 0, ctx.L)
        if not rep.separates:
            continue
        shifted = rep.shifted_minus_ok or rep.shifted_plus_ok
        column = "n-1" if allow_column_upgrade and shifted else "n"
        b = binom_sum(ctx.n, 0, g.degree, column)
        entry = (b.value, g.degree, label, g, rep, column)
        if best is None or entry[:2] < best[:2]:
            best = entry
    if best is None:  # pragma: no cover
        return []
    _, _, label, g, rep, column = best
    texts = [
        rule_kind_text,
        f"modulus {ctx.pp.q} is a prime power",
        f"candidate roots from {label}",
        "polynomial separates 0 from L modulo q",
    ]
    if column == "n-1":
        side = "u-1" if rep.shifted_minus_ok else "u+1"
        texts.append(f"shifted condition over {side} holds, granting the n-1 column")
    aux = {
        "roots": list(g.roots),
        "lead": g.lead,
        "v0": None if rep.v0.is_infinite else rep.v0.value,
        "shifted_minus_ok": rep.shifted_minus_ok,
        "shifted_plus_ok": rep.shifted_plus_ok,
    }
    return [_cert(ctx, "R22", tuple(texts), binom_sum(ctx.n, 0, g.degree, column), aux)]


def _r22_diff(ctx: _Ctx):
    return _r22_diff_hamming(ctx, _diff_kind_hyp(ctx), allow_column_upgrade=True)


_DIFF_MODULAR_RULES = (_r1, _r2, _r3, _r4, _r5, _r6, _r7, _r8, _r9, _r22_diff)


# --- non-modular difference / close-Sperner rules ---------------------------


def _r10(ctx: _Ctx):
    s = len(ctx.L)
    if ctx.L != tuple(range(1, s + 1)):
        return []
    if not (ctx.n + 2 <= 3 * s and 2 * s <= ctx.n):
        return []
    texts = (
        "family is L-differencing Sperner (non-modular)",
        f"L = [{s}]",
        f"(n+2)/3 <= s <= n/2 with n = {ctx.n}, s = {s}",
    )
    return [_cert(ctx, "R10", texts, binom_sum(ctx.n, 3 * s - ctx.n - 1, s, "n-1"))]


def _r11(ctx: _Ctx):
    s = len(ctx.L)
    kind_text = (
        "family is L-close Sperner"
        if ctx.kind is Kind.CLOSE_SPERNER
        else "family is L-differencing Sperner, hence L-close Sperner"
    )
    certs = [
        _cert(
            ctx,
            "R11",
            (kind_text, "L is a set of positive integers"),
            binom_sum(ctx.n, 0, s, "n"),
        )
    ]
    if s == 1:
        certs.append(
            _cert(
                ctx,
                "R11",
                (kind_text, "L is a set of positive integers", "|L| = 1"),
                binom_sum(ctx.n, 1, 1, "n"),
            )
        )
    return certs


def _r12(ctx: _Ctx):
    s = len(ctx.L)
    if ctx.L != tuple(range(1, s + 1)):
        return []
    if not (ctx.n + 1 <= 3 * s and 2 * s <= ctx.n):
        return []
    kind_text = (
        "family is L-close Sperner"
        if ctx.kind is Kind.CLOSE_SPERNER
        else "family is L-differencing Sperner, hence L-close Sperner"
    )
    texts = (
        kind_text,
        f"L = [{s}]",
        f"(n+1)/3 <= s <= n/2 with n = {ctx.n}, s = {s}",
    )
    return [_cert(ctx, "R12", texts, binom_sum(ctx.n, 3 * s - ctx.n, s, "n"))]


# --- intersecting rules ------------------------------------------------------


def _int_kind_hyp(ctx: _Ctx) -> str:
    if ctx.pp is None:
        return "family is L-avoiding L-intersecting (non-modular)"
    return f"family is {ctx.pp.q}-modular L-avoiding L-intersecting"


def _r13(ctx: _Ctx):
    if ctx.L and ctx.L[0] >= 1:
        texts = (
            "family is L-intersecting (non-modular)",
            "L is a set of positive integers",
            "modulus-free Snevily bound",
        )
        return [_cert(ctx, "R13", texts, binom_sum(ctx.n, 0, len(ctx.L), "n-1"))]
    return []


def _r14(ctx: _Ctx):
    s = len(ctx.L)
    cap = degree_upper_bound(s, ctx.pp.k)
    texts = (
        _int_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"worst-case separating degree bound {cap}",
    )
    return [_cert(ctx, "R14", texts, binom_sum(ctx.n, 0, cap, "n"), {"degree_cap": cap})]


def _r15(ctx: _Ctx):
    s = len(ctx.L)
    if ctx.L != tuple(range(s)) or s >= ctx.pp.q:
        return []
    texts = (
        _int_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"L = {{0, ..., {s - 1}}}",
        f"s = {s} < q = {ctx.pp.q}",
    )
    return [_cert(ctx, "R15", texts, binom_sum(ctx.n, 0, 2 * s, "n"))]


def _r17(ctx: _Ctx):
    q = ctx.pp.q
    s = _as_mod_interval(ctx.L, q)
    if s is None or s > ctx.n - q + 2:
        return []
    texts = (
        _int_kind_hyp(ctx),
        f"modulus {q} is a prime power",
        "L is an interval in the modulo-q sense",
        f"|L| = {s} <= n - q + 2 = {ctx.n - q + 2}",
    )
    return [_cert(ctx, "R17", texts, binom_sum(ctx.n, s, q - 1, "n"))]


def _r18(ctx: _Ctx):
    q = ctx.pp.q
    s = _as_mod_interval(ctx.L, q)
    if s is None or s > q - 1:
        return []
    mu = closure_length_bound(ctx.pp, s)
    texts = (
        _int_kind_hyp(ctx),
        f"modulus {q} is a prime power",
        "L is an interval in the modulo-q sense",
    )
    return [_cert(ctx, "R18", texts, binom_sum(ctx.n, 0, mu, "n"), {"closure_length_bound": mu})]


def _r19(ctx: _Ctx):
    texts = (_int_kind_hyp(ctx), f"modulus {ctx.pp.q} is a prime power")
    return [_cert(ctx, "R19", texts, binom_sum(ctx.n, 0, ctx.pp.q - 1, "n"))]


def _r20(ctx: _Ctx):
    if ctx.pp.k != 2:
        return []
    s = _as_mod_interval(ctx.L, ctx.pp.q)
    if s is None:
        return []
    texts = (
        _int_kind_hyp(ctx),
        f"modulus {ctx.pp.q} = {ctx.pp.p}^2 is a prime square",
        "L is an interval in the modulo-q sense",
    )
    return [_cert(ctx, "R20", texts, binom_sum(ctx.n, 0, 2 * s - 1, "n"))]


def _per_alpha_construction(pp: PrimePower, L: tuple[int, ...], alpha: int):
    """Cheapest deterministic factored polynomial separating alpha from
    L + qZ, built by reflecting a polynomial that separates 0 from the
    reflected residues (alpha - L) mod q."""
    reflected = tuple(sorted({(alpha - ell) % pp.q for ell in L}))
    best = None
    for label, h in _zero_separation_candidates(pp, reflected):
        if not check_separation(pp, h, 0, reflected).separates:
            continue
        if best is None or h.degree < best[1].degree:
            best = (label, h)
    if best is None:  # pragma: no cover
        raise AssertionError("the full-range polynomial always separates")
    label, h = best
    return label, h.shift_reflect(alpha)


def _r22_intersecting(ctx: _Ctx):
    q = ctx.pp.q
    Lset = set(ctx.L)
    alphas = [a for a in range(q) if a not in Lset]
    if not alphas:
        return []
    degrees = {}
    worst = 0
    for alpha in alphas:
        _, g = _per_alpha_construction(ctx.pp, ctx.L, alpha)
        degrees[alpha] = g.degree
        worst = max(worst, g.degree)
    texts = (
        _int_kind_hyp(ctx),
        f"modulus {q} is a prime power",
        "a separating polynomial was constructed for every residue outside L",
        f"maximum degree used is {worst}",
    )
    aux = {"per_alpha_degrees": degrees}
    return [_cert(ctx, "R22", texts, binom_sum(ctx.n, 0, worst, "n"), aux)]


_INT_MODULAR_RULES = (_r14, _r15, _r17, _r18, _r19, _r20, _r22_intersecting)


# --- uniform intersecting ----------------------------------------------------


def _r16(ctx: _Ctx, residue: int):
    q = ctx.pp.q
    if 2 * (q - 1) > ctx.n:
        return []
    texts = (
        f"member sizes are congruent to {residue} and no intersection is (mod {q})",
        f"modulus {q} is a prime power",
        f"2(q-1) = {2 * (q - 1)} <= n = {ctx.n}",
    )
    return [_cert(ctx, "R16", texts, binom_sum(ctx.n, q - 1, q - 1, "n"))]


# --- Hamming rules -----------------------------------------------------------


def _hamming_kind_hyp(ctx: _Ctx) -> str:
    if ctx.pp is None:
        return "pairwise Hamming distances lie in L"
    return f"pairwise Hamming distances lie in L modulo {ctx.pp.q}"


def _r21_nonmodular(ctx: _Ctx):
    texts = (_hamming_kind_hyp(ctx), "no modulus (Delsarte bound)")
    return [_cert(ctx, "R21", texts, binom_sum(ctx.n, 0, len(ctx.L), "n"))]


def _r21_prime(ctx: _Ctx):
    # Note: the n-1 column is NOT sound in the Hamming setting even at a
    # prime modulus.  The 8 even-weight subsets of [4] have pairwise
    # symmetric differences in {2, 4}, both nonzero mod 3, beating
    # sum of C(3, i) for i <= 2 = 7.  Only the full-column bound holds.
    if ctx.pp.k != 1:
        return []
    texts = (
        _hamming_kind_hyp(ctx),
        f"modulus {ctx.pp.p} is prime and L avoids its multiples",
    )
    return [_cert(ctx, "R21", texts, binom_sum(ctx.n, 0, len(ctx.L), "n"))]


def _r21_initial_interval(ctx: _Ctx):
    s = len(ctx.L)
    if ctx.L != tuple(range(1, s + 1)):
        return []
    texts = (
        _hamming_kind_hyp(ctx),
        f"modulus {ctx.pp.q} is a prime power",
        f"L = [{s}]",
    )
    return [_cert(ctx, "R21", texts, binom_sum(ctx.n, 0, s, "n"))]


def _r22_hamming(ctx: _Ctx):
    # same soundness caveat as in _r21_prime: no column upgrade here
    return _r22_diff_hamming(ctx, _hamming_kind_hyp(ctx), allow_column_upgrade=False)


_HAMMING_MODULAR_RULES = (_r21_prime, _r21_initial_interval, _r22_hamming)


# --- the engine --------------------------------------------------------------


def _lifted_ctx(kind: Kind, n: int, L: tuple[int, ...]) -> _Ctx:
    p = _next_prime(max(max(L), n))
    note = (
        f"non-modular constraint read modulo p = {p}, the smallest prime "
        f"exceeding max(L) and n",
        True,
    )
    return _Ctx(kind, n, L, PrimePower(p, 1), lift_note=note)


def _applicable(spec: ConstraintSpec) -> list[BoundCertificate]:
    if not spec.L and spec.kind is not Kind.INTERSECTING_UNIFORM:
        raise ValueError("empty L is rejected by the bound engine")
    L = tuple(sorted(spec.L))
    certs: list[BoundCertificate] = []
    kind = spec.kind
    if kind is Kind.DIFF_SPERNER:
        if spec.modulus is not None:
            ctx = _Ctx(kind, spec.n, L, spec.modulus)
            for rule in _DIFF_MODULAR_RULES:
                certs.extend(rule(ctx))
        else:
            direct = _Ctx(kind, spec.n, L, None)
            for rule in (_r10, _r11, _r12):
                certs.extend(rule(direct))
            lifted = _lifted_ctx(kind, spec.n, L)
            for rule in _DIFF_MODULAR_RULES:
                certs.extend(rule(lifted))
    elif kind is Kind.CLOSE_SPERNER:
        ctx = _Ctx(kind, spec.n, L, None)
        for rule in (_r11, _r12):
            certs.extend(rule(ctx))
    elif kind is Kind.INTERSECTING:
        if spec.modulus is not None:
            ctx = _Ctx(kind, spec.n, L, spec.modulus)
            for rule in _INT_MODULAR_RULES:
                certs.extend(rule(ctx))
        else:
            certs.extend(_r13(_Ctx(kind, spec.n, L, None)))
            lifted = _lifted_ctx(kind, spec.n, L)
            for rule in _INT_MODULAR_RULES:
                certs.extend(rule(lifted))
    elif kind is Kind.INTERSECTING_UNIFORM:
        q = spec.modulus.q
        r = spec.uniform_residue
        complement = tuple(x for x in range(q) if x != r)
        ctx = _Ctx(kind, spec.n, complement, spec.modulus)
        certs.extend(_r16(ctx, r))
        note = (
            f"uniform residue {r} read as L-avoiding L-intersecting with "
            f"L = all residues except {r}",
            True,
        )
        mapped = _Ctx(Kind.INTERSECTING, spec.n, complement, spec.modulus, lift_note=note)
        for rule in _INT_MODULAR_RULES:
            certs.extend(rule(mapped))
    elif kind is Kind.HAMMING:
        if spec.modulus is not None:
            ctx = _Ctx(kind, spec.n, L, spec.modulus)
            for rule in _HAMMING_MODULAR_RULES:
                certs.extend(rule(ctx))
        else:
            certs.extend(_r21_nonmodular(_Ctx(kind, spec.n, L, None)))
            lifted = _lifted_ctx(kind, spec.n, L)
            for rule in _HAMMING_MODULAR_RULES:
                certs.extend(rule(lifted))
    else:
        raise ValueError(f"no bound rules for kind {kind.value}")
    return certs


def best_bound(spec: ConstraintSpec) -> tuple[BoundCertificate, list[BoundCertificate]]:
    """Minimum certificate plus the full applicable portfolio, sorted by
    (bound value, hypothesis count, rule number)."""
    certs = sorted(_applicable(spec), key=_cert_key)
    if not certs:  # pragma: no cover
        raise AssertionError("the rule portfolio is total for supported kinds")
    return certs[0], certs


# --- explicit separating-polynomial bounds -----------------------------------


def _first_failing_class(report) -> int:
    for ell, minimum in sorted(report.class_minima.items()):
        if not report.v0 < minimum:
            return ell
    raise AssertionError("no failing class in a separating report")


def bound_from_seppoly(
    spec: ConstraintSpec,
    g: FactoredIntPoly | None = None,
    per_alpha: dict[int, FactoredIntPoly] | None = None,
    *,
    search_max_degree: int | None = None,
    search_window: range | None = None,
) -> BoundCertificate:
    """Degree-based bound from explicit (or searched) separating polynomials.

    Difference/Hamming kinds need one polynomial separating 0 from L mod q;
    a shifted separation upgrades the column to n-1.  Intersecting kinds
    need one polynomial per residue alpha outside L, and the bound uses the
    maximum degree.  Raises SeparationFailure naming the failing class when
    a supplied polynomial does not separate.
    """
    if spec.modulus is None:
        raise ValueError("bound_from_seppoly needs a modular constraint")
    pp = spec.modulus
    L = tuple(sorted(spec.L))
    if not L:
        raise ValueError("empty L is rejected")
    if spec.kind in (Kind.DIFF_SPERNER, Kind.HAMMING):
        if g is None:
            if search_max_degree is None:
                raise ValueError("supply a polynomial or a search_max_degree")
            found = search_min_degree(pp, 0, L, search_max_degree, search_window)
            if found is None:
                raise SeparationFailure(
                    f"no separating polynomial found up to degree {search_max_degree}",
                    -1,
                )
            g = found[0]
        rep = check_separation(pp, g, 0, L)
        if not rep.separates:
            ell = _first_failing_class(rep)
            raise SeparationFailure(
                f"polynomial does not separate 0 from class {ell} (mod {pp.q})",
                ell,
                rep,
            )
        # the shifted-condition column upgrade is only sound in the
        # difference-Sperner setting (see the note in _r21_prime)
        shifted = (
            spec.kind is Kind.DIFF_SPERNER
            and (rep.shifted_minus_ok or rep.shifted_plus_ok)
        )
        column = "n-1" if shifted else "n"
        kind_text = (
            f"family is {pp.q}-modular L-differencing Sperner"
            if spec.kind is Kind.DIFF_SPERNER
            else f"pairwise Hamming distances lie in L modulo {pp.q}"
        )
        texts = [
            (kind_text, True),
            (f"modulus {pp.q} is a prime power", True),
            ("polynomial separates 0 from L modulo q", True),
        ]
        if shifted:
            side = "u-1" if rep.shifted_minus_ok else "u+1"
            texts.append(
                (f"shifted condition over {side} holds, granting the n-1 column", True)
            )
        aux = {
            "roots": list(g.roots),
            "lead": g.lead,
            "v0": None if rep.v0.is_infinite else rep.v0.value,
            "shifted_minus_ok": rep.shifted_minus_ok,
            "shifted_plus_ok": rep.shifted_plus_ok,
        }
        return BoundCertificate(
            "R22", tuple(texts), binom_sum(spec.n, 0, g.degree, column), aux
        )
    if spec.kind is Kind.INTERSECTING:
        q = pp.q
        Lset = set(L)
        alphas = [a for a in range(q) if a not in Lset]
        if per_alpha is None:
            per_alpha = {}
            for alpha in alphas:
                if search_max_degree is not None:
                    found = search_min_degree(
                        pp, alpha, L, search_max_degree, search_window
                    )
                    if found is None:
                        raise SeparationFailure(
                            f"no separating polynomial found for alpha = {alpha}",
                            alpha,
                        )
                    per_alpha[alpha] = found[0]
                else:
                    per_alpha[alpha] = _per_alpha_construction(pp, L, alpha)[1]
        missing = [a for a in alphas if a not in per_alpha]
        if missing:
            raise SeparationFailure(
                f"no polynomial supplied for alpha = {missing[0]}", missing[0]
            )
        worst = 0
        degrees = {}
        for alpha in alphas:
            rep = check_separation(pp, per_alpha[alpha], alpha, L)
            if not rep.separates:
                ell = _first_failing_class(rep)
                raise SeparationFailure(
                    f"polynomial for alpha = {alpha} fails on class {ell} (mod {q})",
                    ell,
                    rep,
                )
            degrees[alpha] = per_alpha[alpha].degree
            worst = max(worst, per_alpha[alpha].degree)
        texts = (
            (f"family is {q}-modular L-avoiding L-intersecting", True),
            (f"modulus {q} is a prime power", True),
            ("every residue outside L has a verified separating polynomial", True),
            (f"maximum degree used is {worst}", True),
        )
        return BoundCertificate(
            "R22",
            texts,
            binom_sum(spec.n, 0, worst, "n"),
            {"per_alpha_degrees": degrees},
        )
    raise ValueError(f"bound_from_seppoly does not apply to kind {spec.kind.value}")
