"""Exhaustive desk-scale consistency checks behind the ``lemma-suite`` command.

Each check names the identity it verifies and returns ``(passed, detail)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .audits import (
    chi_bounds,
    chi_bounds_by_rank,
    chi_upper_bound_holds,
    derivative_condition,
    pad_image,
    scaled_decay_monotone,
    sparsity_probe,
)
from .iso import build_xi, conjugate_language
from .langs import Builtin, builtin_language, complement
from .phase import curve, get_parameter, max_rank_for_length, transfer_parameter
from .poly import parse_poly
from .protocol import DeviceModel, build_cohort, predict_with_confidence, run_verification
from .roughp import (
    HeuristicOutcome,
    bottom_fraction,
    build_default_csb,
    build_phi_oracle,
    errorless_heuristic,
    farago_target,
    identity_bijection,
    is_square,
)
from .words import (
    Word,
    alpha_unrank,
    count_up_to_length,
    enumerate_words,
    theta_rank,
    words_of_length,
    words_up_to_length,
)

PADDABLE = (Builtin.FIRST_SYMBOL, Builtin.KERNEL_MAJORITY, Builtin.OMEGA_PARITY)
ALL_BUILTINS = tuple(Builtin)


@dataclass(frozen=True)
class Check:
    name: str
    identity: str
    run: Callable[[int], tuple[bool, str]]


def _first_failure(items, ok) -> tuple[bool, str]:
    n = 0
    for item in items:
        n += 1
        if not ok(item):
            return False, f"fails at {item!r}"
    return True, f"{n} cases"


def check_codec(scale: int):
    cases = ((k, r) for k in (2, 3, 4, 5) for r in range(scale * 500))
    return _first_failure(cases, lambda kr: theta_rank(alpha_unrank(kr[1], kr[0])) == kr[1])


def check_xi(scale: int):
    iso = build_xi(3, 4)
    langs = [builtin_language(b, 3) for b in ALL_BUILTINS]
    conj = [conjugate_language(L, iso) for L in langs]

    def ok(w: Word) -> bool:
        v = iso.forward(w)
        if theta_rank(v) != theta_rank(w) or iso.backward(v) != w:
            return False
        return all(L.decide(w) == H.decide(v) for L, H in zip(langs, conj))

    return _first_failure(enumerate_words(3, scale * 500), ok)


def check_inverse_iso(scale: int):
    iso = build_xi(3, 4)
    inv = iso.inverse()
    pairs = [(conjugate_language(builtin_language(b, 3), iso), builtin_language(b, 3)) for b in ALL_BUILTINS]

    def ok(v: Word) -> bool:
        w = inv.forward(v)
        if theta_rank(w) != theta_rank(v) or inv.backward(w) != v:
            return False
        return all(H.decide(v) == L.decide(w) for H, L in pairs)

    return _first_failure(enumerate_words(4, scale * 500), ok)


def check_padding_transfer(scale: int):
    iso = build_xi(3, 4)
    H = conjugate_language(builtin_language(Builtin.FIRST_SYMBOL, 3), iso)
    ys = list(enumerate_words(4, scale * 20))
    pairs = ((y, z) for y in ys for z in ys)
    return _first_failure(
        pairs, lambda yz: H.padder.dec(H.padder.pad(*yz)) == yz[1] and H.decide(H.padder.pad(*yz)) == H.decide(yz[0])
    )


def check_pad_injective(scale: int):
    def ok(b: Builtin) -> bool:
        L = builtin_language(b, 3)
        ys = list(enumerate_words(3, scale * 100))
        x = L.witnesses[0]
        return len({L.padder.pad(x, y) for y in ys}) == len(ys)

    return _first_failure(PADDABLE, ok)


def check_pad_image_count(scale: int):
    cases = [(b, k, n) for b in PADDABLE for k in (2, 3) for n in range(0, 4)]

    def ok(c) -> bool:
        b, k, n = c
        L = builtin_language(b, k)
        return all(len(pad_image(L, x, n)) == count_up_to_length(k, n) for x in L.witnesses)

    return _first_failure(cases, ok)


def check_errorless(scale: int):
    t = farago_target(builtin_language(Builtin.OMEGA_PARITY, 2))

    def ok(w: Word) -> bool:
        out = errorless_heuristic(t, w)
        member = t.target.decide(w)
        if out is HeuristicOutcome.ACCEPT:
            return member
        if out is HeuristicOutcome.REJECT:
            return not member
        return is_square(w)

    return _first_failure(words_up_to_length(2, 8 + scale), ok)


def check_bottom_decay(scale: int):
    t = farago_target(builtin_language(Builtin.OMEGA_PARITY, 2))
    phi = identity_bijection(2)
    # fraction <= 2**(-n/2)  <=>  fraction**2 * 2**n <= 1
    return _first_failure(range(0, 8 + scale), lambda n: bottom_fraction(t, phi, n) ** 2 * 2**n <= 1)


def check_chi(scale: int):
    L = builtin_language(Builtin.FIRST_SYMBOL, 3)
    t = farago_target(L)
    phi = build_phi_oracle((L, t.target), 10_000)
    iso = build_xi(3)

    def ok(n: int) -> bool:
        r = chi_bounds(iso, phi, n)
        lo, hi, alphas = chi_bounds_by_rank(3, n)
        return r.bound_ok is True and r.filling_ok and r.covers and (r.chi_low, r.chi_upp) == (lo, hi) and r.alphas == alphas

    return _first_failure(range(0, 6), ok)


def check_chi_by_rank(scale: int):
    def ok(c) -> bool:
        k, n = c
        lo, hi, alphas = chi_bounds_by_rank(k, n)
        interior = all(alphas[j] == 1 for j in range(lo + 1, hi))
        return interior and chi_upper_bound_holds(k, n, hi) is True

    return _first_failure([(k, n) for k in (3, 5, 7) for n in range(0, 10 * scale + 1)], ok)


def check_curve_transfer(scale: int):
    iso = build_xi(3, 4)
    L = builtin_language(Builtin.SIGNED_LENGTH_DEMO, 3)
    H = conjugate_language(L, iso)
    g = get_parameter("signed-length")
    m = max_rank_for_length(3, 4 + scale)
    a = curve(L, transfer_parameter(g, iso), m)
    b = curve(H, g, m)
    return (a.slices == b.slices), f"{len(a.slices)} slices"


def check_complement_duality(scale: int):
    L = builtin_language(Builtin.KERNEL_MAJORITY, 3)
    g = get_parameter("kernel-balance")
    m = max_rank_for_length(3, 4 + scale)
    a, b = curve(L, g, m), curve(complement(L), g, m)
    ok = all(x.fraction + y.fraction == 1 for x, y in zip(a.slices, b.slices))
    return ok, f"{len(a.slices)} slices"


def check_scaled_decay(scale: int):
    """Whenever the derivative condition holds on the whole range, the scaled decay is monotone."""
    ns = range(0, 41)
    for text in ("n+8", "n+20", "2n+30", "n+4", "10n+1"):
        poly = parse_poly(text)
        rows = derivative_condition(poly, 3, ns)
        if all(r.holds is True for r in rows):
            verdict, bad = scaled_decay_monotone(poly, 3, ns)
            if verdict is not True:
                return False, f"{text}: derivative condition holds but decay increases at {bad}"
    return True, "5 polynomials"


def check_non_sparse(scale: int):
    poly = parse_poly("n^3")
    ok = lambda b: sparsity_probe(builtin_language(b, 3), poly, range(0, 9)).exceeded_at is not None
    return _first_failure(PADDABLE, ok)


def check_csb(scale: int):
    L = builtin_language(Builtin.OMEGA_PARITY, 2)
    t = farago_target(L)
    phi = build_default_csb(L)
    ws = list(enumerate_words(2, scale * 500))
    images = [phi.forward(w) for w in ws]
    if len(set(images)) != len(ws):
        return False, "forward not injective"
    return _first_failure(
        zip(ws, images), lambda p: phi.backward(p[1]) == p[0] and L.decide(p[0]) == t.target.decide(p[1])
    )


def check_protocol(scale: int):
    L = builtin_language(Builtin.SIGNED_LENGTH_DEMO, 3)
    g = get_parameter("signed-length")
    r = curve(L, g, max_rank_for_length(3, 5))
    cohort = build_cohort(next(iter(words_of_length(3, 4))), 10)
    rep = run_verification(DeviceModel(L, Fraction(0), 0), cohort, lambda w: predict_with_confidence(r, w, g))
    return rep.overall_confidence == 1 and not rep.mismatches, f"overall {rep.overall_confidence}"


CHECKS: tuple[Check, ...] = (
    Check("codec", "theta(alpha(r)) = r", check_codec),
    Check("xi", "rank(xi(w)) = rank(w), xi^-1(xi(w)) = w, w in L <=> xi(w) in xi(L)", check_xi),
    Check("xi-inverse", "the inverse map is again rank- and membership-preserving", check_inverse_iso),
    Check("pad-transfer", "dec_H(pad_H(y,z)) = z and pad_H(y,z) in H <=> y in H", check_padding_transfer),
    Check("pad-injective", "pad(x, .) is injective", check_pad_injective),
    Check("pad-image", "|pad(x, words of length <= n)| = (k^(n+1)-1)/(k-1)", check_pad_image_count),
    Check("errorless", "A only on members, R only on non-members, _ only on squares", check_errorless),
    Check("bottom-decay", "bottom fraction of length-n words <= 2^(-n/2)", check_bottom_decay),
    Check("chi", "chi_upp(n) <= 2n log_k(k+1), interior B_j filled, union covers", check_chi),
    Check("chi-rank", "rank-interval chi_upp(n) <= 2n log_k(k+1) for k in 3,5,7", check_chi_by_rank),
    Check("curve-transfer", "A_L[slice of g.xi at n] = A_H[slice of g at n]", check_curve_transfer),
    Check("complement", "A_L + A_complement = 1 per slice", check_complement_duality),
    Check("scaled-decay", "derivative condition => Poly(lam n) 2^(-n/2) nonincreasing", check_scaled_decay),
    Check("non-sparse", "paddable built-ins exceed n^3 members within length 8", check_non_sparse),
    Check("csb", "CSB map is a class-preserving bijection", check_csb),
    Check("protocol", "exact device and 0/1 curve give overall confidence 1", check_protocol),
)


@dataclass(frozen=True)
class CheckResult:
    check: Check
    passed: bool
    detail: str


def run_suite(scale: int = 1, only: tuple[str, ...] = ()) -> list[CheckResult]:
    if scale < 1:
        raise ValueError("scale must be at least 1")
    results = []
    for c in CHECKS:
        if only and c.name not in only:
            continue
        try:
            passed, detail = c.run(scale)
        except Exception as exc:  # a crash is a failed check, reported with its cause
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(c, passed, detail))
    return results


def render_matrix(results: list[CheckResult]) -> str:
    width = max(len(r.check.name) for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.check.name:<{width}}  {r.check.identity}  [{r.detail}]" for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    for r in failed:
        lines.append(f"failed: {r.check.name}: {r.check.identity}")
    return "\n".join(lines) + "\n"
