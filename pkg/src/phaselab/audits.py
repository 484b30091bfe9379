"""Balance, adequacy, chi-bound and density audits.

``B_n`` below is the set of words whose image under a bijection ``phi`` has
length ``n``. The *pulled-back* set for index ``n`` is the set of source words
``x`` with ``|xi(phi(x))| = n``: the preimage under ``xi`` of ``B_n`` for the
conjugated map ``xi . phi . xi^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import NotApplicableError, UndefinedFractionError
from .iso import PreservingIso
from .langs import LanguageSpec, pad
from .phase import Tolerances
from .poly import PolySpec, _precision, adequacy_lambda, half_log2, leq, midpoint, to_interval
from .roughp import Bijection, FaragoTarget, HeuristicOutcome, b_set, errorless_heuristic
from .words import (
    Word,
    check_cap,
    length_of_rank,
    length_rank_interval,
    words_of_length,
    words_up_to_length,
)

Pairs = list[tuple[Word, Word]]


def b_pairs(phi: Bijection, n: int) -> Pairs:
    """``(x, phi(x))`` for every ``x`` in ``B_n``."""
    back = phi.backward
    if phi.coverage is not None:
        b_set(phi, n)  # raises on missing coverage
    return [(back(y), y) for y in words_of_length(phi.alphabet, n)]


def pulled_back_pairs(iso: PreservingIso, phi: Bijection, n: int) -> Pairs:
    """``(x, phi(x))`` for every ``x`` with ``|xi(phi(x))| = n``."""
    check_cap(iso.dst.size**n)
    back_xi, back_phi = iso.backward, phi.backward
    out = []
    for v in words_of_length(iso.dst, n):
        y = back_xi(v)
        out.append((back_phi(y), y))
    return out


@dataclass(frozen=True)
class BalanceRow:
    n: int
    size: int
    accept_correct: Fraction
    reject_correct: Fraction
    bottom: Fraction
    bound: Optional[Fraction]
    passed: bool


@dataclass(frozen=True)
class NaeuReport:
    rows: tuple[BalanceRow, ...]
    monotone: bool
    monotone_failures: tuple[int, ...]
    passed: bool


def decay_monotone(poly: PolySpec, n_range: Sequence[int]) -> tuple[bool, tuple[int, ...]]:
    """Whether ``poly(n) * 2**(-n/2)`` never increases along ``n_range``.

    Compared exactly via ``poly(n+1)**2 <= 2 * poly(n)**2`` on nonnegative values.
    """
    bad = []
    ns = sorted(n_range)
    for a, b in zip(ns, ns[1:]):
        pa, pb = poly(a), poly(b)
        if pa < 0 or pb < 0 or pb * pb > 2 ** (b - a) * pa * pa:
            bad.append(a)
    return not bad, tuple(bad)


def _balance_row(n: int, pairs: Pairs, lang: LanguageSpec, t: FaragoTarget, poly: PolySpec) -> BalanceRow:
    if not pairs:
        raise UndefinedFractionError(f"B_{n} is empty")
    acc = rej = bot = 0
    decide = lang.decide
    for x, y in pairs:
        out = errorless_heuristic(t, y)
        if out is HeuristicOutcome.BOTTOM:
            bot += 1
        elif out is HeuristicOutcome.ACCEPT:
            acc += decide(x)
        else:
            rej += not decide(x)
    size = len(pairs)
    pn = poly(n)
    bound = Fraction(1) / pn if pn > 0 else None
    fa, fr = Fraction(acc, size), Fraction(rej, size)
    ok = bound is not None and fa >= bound and fr >= bound
    return BalanceRow(n, size, fa, fr, Fraction(bot, size), bound, ok)


def naeu_audit(
    lang: LanguageSpec,
    phi: Bijection,
    t: FaragoTarget,
    poly: PolySpec,
    n_range: Iterable[int],
    *,
    pairs_for: Optional[Callable[[int], Pairs]] = None,
) -> NaeuReport:
    """Correct-accept and correct-reject shares of each ``B_n`` against ``1/poly(n)``.

    A word counts as correctly accepted when the heuristic, run on its image,
    answers ACCEPT and the word is a member; likewise for REJECT.
    """
    ns = list(n_range)
    source = pairs_for if pairs_for is not None else (lambda n: b_pairs(phi, n))
    rows = tuple(_balance_row(n, source(n), lang, t, poly) for n in ns)
    mono, bad = decay_monotone(poly, ns)
    return NaeuReport(rows, mono, bad, mono and all(r.passed for r in rows))


@dataclass(frozen=True)
class ChiReport:
    n: int
    chi_low: int
    chi_upp: int
    bound: float
    bound_ok: Optional[bool]
    alphas: dict = field(compare=False)
    filling_ok: bool
    covers: bool
    size: int


def chi_bounds(iso: PreservingIso, phi: Bijection, n: int) -> ChiReport:
    """Which ``B_j`` the pulled-back set for index ``n`` touches, and how much of each.

    ``alphas[j]`` is the share of ``B_j`` inside the pulled-back set. Interior
    ``j`` must be filled completely, and the shares weighted by ``|B_j|`` must
    add back up to the size of the pulled-back set.
    """
    pairs = pulled_back_pairs(iso, phi, n)
    pulled = {x for x, _ in pairs}
    lengths = {len(y) for _, y in pairs}
    lo, hi = min(lengths), max(lengths)
    alphas: dict[int, Fraction] = {}
    union: set[Word] = set()
    weighted = Fraction(0)
    for j in range(lo, hi + 1):
        bj = b_set(phi, j)
        union |= bj
        share = Fraction(len(bj & pulled), len(bj))
        alphas[j] = share
        weighted += share * len(bj)
    interior_full = all(alphas[j] == 1 for j in range(lo + 1, hi))
    filling_ok = interior_full and all(0 < a <= 1 for a in alphas.values()) and weighted == len(pulled)
    covers = pulled <= union
    bound_ok, bound_mid = chi_upper_bound(phi.alphabet.size, n, hi)
    return ChiReport(n, lo, hi, bound_mid, bound_ok, alphas, filling_ok, covers, len(pulled))


def chi_upper_bound_holds(k: int, n: int, chi_upp: int) -> Optional[bool]:
    return chi_upper_bound(k, n, chi_upp)[0]


def chi_upper_bound(k: int, n: int, chi_upp: int) -> tuple[Optional[bool], float]:
    with _precision():
        bound = adequacy_lambda(k) * n
        return leq(chi_upp, bound), midpoint(bound)


def chi_bounds_by_rank(k: int, n: int) -> tuple[int, int, dict[int, Fraction]]:
    """Same ``(chi_low, chi_upp, alphas)`` from rank intervals alone.

    Any bijection ``phi`` sends ``B_j`` onto the length-``j`` words, so the
    answer only depends on how the rank block of length-``n`` words over
    ``k + 1`` symbols overlaps the length blocks over ``k`` symbols.
    """
    lo, hi = length_rank_interval(k + 1, n)
    j_lo, j_hi = length_of_rank(lo, k), length_of_rank(hi, k)
    alphas = {}
    for j in range(j_lo, j_hi + 1):
        a, b = length_rank_interval(k, j)
        overlap = min(b, hi) - max(a, lo) + 1
        alphas[j] = Fraction(overlap, b - a + 1)
    return j_lo, j_hi, alphas


@dataclass(frozen=True)
class DerivativeRow:
    n: int
    lhs: float
    rhs: float
    holds: Optional[bool]
    increasing: Optional[bool]


def derivative_condition(poly: PolySpec, k: int, n_range: Iterable[int]) -> tuple[DerivativeRow, ...]:
    """``poly'(lam*n) <= (ln(2)/2 / lam) * poly(lam*n)`` with ``lam = 2 log_k(k+1)``.

    Each side is an interval enclosure; ``holds`` is ``None`` when they overlap.
    """
    rows = []
    dpoly = poly.derivative()
    with _precision():
        lam = adequacy_lambda(k)
        c = half_log2() / lam
        for n in n_range:
            x = lam * n
            lhs = dpoly(x)
            rhs = c * poly(x)
            holds = leq(lhs, rhs)
            increasing = leq(0, lhs)
            rows.append(DerivativeRow(n, midpoint(lhs), midpoint(rhs), holds, increasing))
    return tuple(rows)


def scaled_decay_monotone(poly: PolySpec, k: int, n_range: Sequence[int]) -> tuple[Optional[bool], tuple[int, ...]]:
    """Whether ``poly(lam*n) * 2**(-n/2)`` never increases between consecutive ``n``.

    Returns ``(verdict, failing n)``; the verdict is ``None`` if some step
    could not be decided at the working precision.
    """
    bad = []
    undecided = False
    ns = sorted(n_range)
    with _precision():
        lam = adequacy_lambda(k)
        sqrt2 = to_interval(2) ** 0.5
        for a, b in zip(ns, ns[1:]):
            lhs = poly(lam * b)
            rhs = poly(lam * a) * sqrt2 ** (b - a)
            r = leq(lhs, rhs)
            if r is False:
                bad.append(a)
            elif r is None:
                undecided = True
    if bad:
        return False, tuple(bad)
    return (None if undecided else True), ()


@dataclass(frozen=True)
class SplitRow:
    n: int
    j: int
    piece: int
    piece_fraction: Fraction
    block_fraction: Fraction
    passed: bool


@dataclass(frozen=True)
class AdequacyReport:
    split: tuple[SplitRow, ...]
    split_ok: bool
    derivative: tuple[DerivativeRow, ...]
    derivative_ok: Optional[bool]
    alt_naeu: NaeuReport
    passed: Optional[bool]


def proportional_split(
    lang: LanguageSpec, iso: PreservingIso, phi: Bijection, n_range: Iterable[int], tol: Fraction
) -> tuple[SplitRow, ...]:
    """Member share of each piece ``B_j`` cut by a pulled-back set versus the share in all of ``B_j``."""
    rows = []
    decide = lang.decide
    block_share: dict[int, Fraction] = {}
    for n in n_range:
        pieces: dict[int, list[Word]] = {}
        for x, y in pulled_back_pairs(iso, phi, n):
            pieces.setdefault(len(y), []).append(x)
        for j, xs in sorted(pieces.items()):
            if j not in block_share:
                bj = b_set(phi, j)
                block_share[j] = Fraction(sum(1 for w in bj if decide(w)), len(bj))
            share = Fraction(sum(1 for w in xs if decide(w)), len(xs))
            ok = abs(share - block_share[j]) <= tol
            rows.append(SplitRow(n, j, len(xs), share, block_share[j], ok))
    return tuple(rows)


def adequacy_audit(
    lang: LanguageSpec,
    iso: PreservingIso,
    phi: Bijection,
    t: FaragoTarget,
    poly: PolySpec,
    n_range: Iterable[int],
    tol: Tolerances = Tolerances(),
) -> AdequacyReport:
    if lang.alphabet.size % 2 == 0:
        raise NotApplicableError(f"the extra adequacy conditions apply to odd alphabets, got {lang.alphabet}")
    ns = list(n_range)
    split = proportional_split(lang, iso, phi, ns, tol.split)
    split_ok = all(r.passed for r in split)
    deriv = derivative_condition(poly, lang.alphabet.size, ns)
    if any(r.holds is False or r.increasing is False for r in deriv):
        deriv_ok: Optional[bool] = False
    elif any(r.holds is None or r.increasing is None for r in deriv):
        deriv_ok = None
    else:
        deriv_ok = True
    alt = naeu_audit(lang, phi, t, poly, ns, pairs_for=lambda n: pulled_back_pairs(iso, phi, n))
    if deriv_ok is None:
        passed = None
    else:
        passed = split_ok and deriv_ok and alt.passed
    return AdequacyReport(split, split_ok, deriv, deriv_ok, alt, passed)


def density(lang: LanguageSpec, n: int) -> int:
    """Number of members of length at most ``n``."""
    decide = lang.decide
    return sum(1 for w in words_up_to_length(lang.alphabet, n) if decide(w))


@dataclass(frozen=True)
class SparsityVerdict:
    exceeded_at: Optional[int]
    densities: tuple[int, ...]
    bounds: tuple[Fraction, ...]

    @property
    def consistent_with_sparse(self) -> bool:
        return self.exceeded_at is None


def sparsity_probe(lang: LanguageSpec, poly_s: PolySpec, n_range: Iterable[int]) -> SparsityVerdict:
    """First ``n`` with ``density(n) > poly_s(n)``, if any within ``n_range``."""
    ns = sorted(n_range)
    if not ns:
        return SparsityVerdict(None, (), ())
    decide = lang.decide
    running = 0
    per_length: dict[int, int] = {}
    for length in range(0, ns[-1] + 1):
        running += sum(1 for w in words_of_length(lang.alphabet, length) if decide(w))
        per_length[length] = running
    dens, bounds = [], []
    hit = None
    for n in ns:
        d, b = per_length[n], poly_s(n)
        dens.append(d)
        bounds.append(b)
        if hit is None and d > b:
            hit = n
    return SparsityVerdict(hit, tuple(dens), tuple(bounds))


def pad_image(lang: LanguageSpec, x: Word, n: int) -> set[Word]:
    return {pad(lang, x, y) for y in words_up_to_length(lang.alphabet, n)}
