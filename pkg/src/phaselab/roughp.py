"""Square-or-odd target languages, their errorless heuristic, and bijections.

For a language ``L`` the target ``H_L`` holds every word with odd symbol sum
plus every square ``xx`` with ``x`` in ``L``. Parity and squareness are cheap
to test, so a heuristic can commit on everything except even-sum squares,
and the squares of length ``n`` are only ``k**(n/2)`` of the ``k**n`` words.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import (
    AlphabetMismatchError,
    ConstructionError,
    CoverageError,
    UndefinedFractionError,
    UnsupportedOperationError,
)
from .langs import LanguageSpec
from .words import (
    Alphabet,
    Word,
    alpha_unrank,
    check_cap,
    enumerate_words,
    length_rank_interval,
    omega_sum,
    theta_rank,
    words_of_length,
)

DEFAULT_STEP_BUDGET = 10**6


class HeuristicOutcome(enum.Enum):
    ACCEPT = "A"
    REJECT = "R"
    BOTTOM = "_"

    def __str__(self) -> str:
        return self.value


def is_square(w: Word) -> bool:
    n = len(w.symbols)
    if n % 2:
        return False
    h = n // 2
    return w.symbols[:h] == w.symbols[h:]


def square_root(w: Word) -> Optional[Word]:
    if not is_square(w):
        return None
    return w[: len(w) // 2]


@dataclass(frozen=True)
class FaragoTarget:
    base: LanguageSpec
    target: LanguageSpec


def farago_target(lang: LanguageSpec) -> FaragoTarget:
    base_decide = lang.decide

    def decide(w: Word) -> bool:
        if sum(w.symbols) % 2:
            return True
        if is_square(w):
            return base_decide(w[: len(w) // 2])
        return False

    witnesses = None
    if lang.witnesses is not None:
        member, non_member = lang.witnesses
        witnesses = (member + member, non_member + non_member)
    target = LanguageSpec(lang.alphabet, decide, None, witnesses, name=f"target({lang.name})")
    return FaragoTarget(lang, target)


def errorless_heuristic(t: FaragoTarget, w: Word) -> HeuristicOutcome:
    if w.alphabet != t.target.alphabet:
        raise AlphabetMismatchError(f"heuristic for {t.target.alphabet} given a word over {w.alphabet}")
    if sum(w.symbols) % 2:
        return HeuristicOutcome.ACCEPT
    if is_square(w):
        return HeuristicOutcome.BOTTOM
    return HeuristicOutcome.REJECT


@dataclass(frozen=True)
class Bijection:
    """A bijection on the words of one alphabet.

    ``coverage`` is ``None`` for total maps; otherwise both directions are
    defined on every word of rank ``<= coverage`` and may raise
    :class:`CoverageError` beyond it.
    """

    alphabet: Alphabet
    forward: Callable[[Word], Word]
    backward: Callable[[Word], Word]
    coverage: Optional[int] = None
    name: str = "phi"
    diagnostics: dict = field(default_factory=dict, compare=False)


def identity_bijection(alphabet: Alphabet | int) -> Bijection:
    a = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    return Bijection(a, lambda w: w, lambda w: w, None, name="identity")


def induced_heuristic(t: FaragoTarget, phi: Bijection) -> Callable[[Word], HeuristicOutcome]:
    """The heuristic for the base language: map through ``phi``, then ask the target heuristic."""
    fwd = phi.forward

    def outcome(x: Word) -> HeuristicOutcome:
        return errorless_heuristic(t, fwd(x))

    return outcome


def build_phi_oracle(pair: tuple[LanguageSpec, LanguageSpec], max_rank: int) -> Bijection:
    """Rank-matching bijection between two languages on the words of rank ``<= max_rank``.

    The i-th member of the first language maps to the i-th member of the
    second, and the same for non-members. When the counts differ, the longer
    list keeps an unmatched tail; ``diagnostics`` records it and ``coverage``
    stops below the first gap.
    """
    src, dst = pair
    if src.alphabet != dst.alphabet:
        raise AlphabetMismatchError(f"oracle needs one alphabet, got {src.alphabet} and {dst.alphabet}")
    a = src.alphabet
    src_in: list[int] = []
    src_out: list[int] = []
    dst_in: list[int] = []
    dst_out: list[int] = []
    for r, w in enumerate(enumerate_words(a, max_rank)):
        (src_in if src.decide(w) else src_out).append(r)
        (dst_in if dst.decide(w) else dst_out).append(r)

    size = max_rank + 1
    fwd = [-1] * size
    bwd = [-1] * size
    for xs, ys in ((src_in, dst_in), (src_out, dst_out)):
        for x, y in zip(xs, ys):
            fwd[x] = y
            bwd[y] = x

    coverage = -1
    for r in range(size):
        if fwd[r] < 0 or bwd[r] < 0:
            break
        coverage = r

    def forward(w: Word) -> Word:
        r = theta_rank(w)
        if r >= size or fwd[r] < 0:
            raise CoverageError(f"oracle has no image for rank {r} (window {max_rank})")
        return alpha_unrank(fwd[r], a)

    def backward(v: Word) -> Word:
        r = theta_rank(v)
        if r >= size or bwd[r] < 0:
            raise CoverageError(f"oracle has no preimage for rank {r} (window {max_rank})")
        return alpha_unrank(bwd[r], a)

    diagnostics = {
        "max_rank": max_rank,
        "members": (len(src_in), len(dst_in)),
        "non_members": (len(src_out), len(dst_out)),
        "unmatched_members": abs(len(src_in) - len(dst_in)),
        "unmatched_non_members": abs(len(src_out) - len(dst_out)),
        "matched": min(len(src_in), len(dst_in)) + min(len(src_out), len(dst_out)),
    }
    return Bijection(a, forward, backward, coverage, name=f"oracle({src.name}->{dst.name})", diagnostics=diagnostics)


@dataclass(frozen=True)
class Injection:
    """An injective word map with its partial inverse (``None`` off the image)."""

    apply: Callable[[Word], Word]
    preimage: Callable[[Word], Optional[Word]]


def doubling_injection() -> Injection:
    return Injection(apply=lambda x: x + x, preimage=square_root)


_TAG_ODD = (1,)
_TAG_SQUARE = (2, 1)
_TAG_OTHER = (2, 2)


def padding_injection(lang: LanguageSpec) -> Injection:
    """Class-preserving injection from the target of ``lang`` back into ``lang``.

    Odd-sum words go through the member witness, squares through their half,
    and the rest through the non-member witness; a tag in the payload keeps
    the three cases apart.
    """
    if lang.padder is None:
        raise UnsupportedOperationError(f"{lang.name} needs a padder")
    if lang.witnesses is None:
        raise UnsupportedOperationError(f"{lang.name} needs member and non-member witnesses")
    a = lang.alphabet
    member, non_member = lang.witnesses
    do_pad, do_dec = lang.padder.pad, lang.padder.dec

    def tagged(tag: tuple[int, ...], y: Word) -> Word:
        return Word._trusted(tag + y.symbols, a)

    def apply(y: Word) -> Word:
        if omega_sum(y) % 2:
            return do_pad(member, tagged(_TAG_ODD, y))
        if is_square(y):
            return do_pad(y[: len(y) // 2], tagged(_TAG_SQUARE, y))
        return do_pad(non_member, tagged(_TAG_OTHER, y))

    def preimage(w: Word) -> Optional[Word]:
        p = do_dec(w).symbols
        if p[:1] == _TAG_ODD:
            y = Word._trusted(p[1:], a)
        elif p[:2] == _TAG_SQUARE or p[:2] == _TAG_OTHER:
            y = Word._trusted(p[2:], a)
        else:
            return None
        return y if apply(y) == w else None

    return Injection(apply, preimage)


def default_injections(lang: LanguageSpec) -> tuple[Injection, Injection]:
    return doubling_injection(), padding_injection(lang)


def build_phi_csb(
    f: Injection,
    g: Injection,
    alphabet: Alphabet | int,
    *,
    step_budget: int = DEFAULT_STEP_BUDGET,
    name: str = "csb",
) -> Bijection:
    """Schroeder-Bernstein bijection from injections ``f: A -> B`` and ``g: B -> A``.

    A word whose backward chain stops on the ``A`` side (or cycles) is sent
    through ``f``; one whose chain stops on the ``B`` side through ``g``'s
    inverse. Chains are finite when both maps lengthen all but finitely many
    words.
    """
    a = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    f_apply, f_pre, g_apply, g_pre = f.apply, f.preimage, g.apply, g.preimage

    def forward(x: Word) -> Word:
        cur = x
        for _ in range(step_budget):
            b = g_pre(cur)
            if b is None:
                return f_apply(x)
            prev = f_pre(b)
            if prev is None:
                return g_pre(x)
            if prev == x:
                return f_apply(x)
            cur = prev
        raise ConstructionError(f"chain from {x!r} did not stop within {step_budget} steps")

    def backward(y: Word) -> Word:
        cur = y
        for _ in range(step_budget):
            x = f_pre(cur)
            if x is None:
                return g_apply(y)
            prev = g_pre(x)
            if prev is None:
                return f_pre(y)
            if prev == y:
                return f_pre(y)
            cur = prev
        raise ConstructionError(f"chain from {y!r} did not stop within {step_budget} steps")

    return Bijection(a, forward, backward, None, name=name)


def build_default_csb(lang: LanguageSpec, *, step_budget: int = DEFAULT_STEP_BUDGET) -> Bijection:
    f, g = default_injections(lang)
    return build_phi_csb(f, g, lang.alphabet, step_budget=step_budget, name=f"csb({lang.name})")


def _check_length_coverage(phi: Bijection, n: int) -> None:
    if phi.coverage is None:
        return
    _, hi = length_rank_interval(phi.alphabet.size, n)
    if hi > phi.coverage:
        raise CoverageError(f"{phi.name} covers ranks <= {phi.coverage}; length {n} needs up to {hi}")


def b_set(phi: Bijection, n: int, alphabet: Alphabet | int | None = None) -> frozenset[Word]:
    """Words whose image under ``phi`` has length ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = phi.alphabet if alphabet is None else (alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet))
    if a != phi.alphabet:
        raise AlphabetMismatchError(f"{phi.name} acts on {phi.alphabet}, asked for {a}")
    check_cap(a.size**n)
    _check_length_coverage(phi, n)
    back = phi.backward
    return frozenset(back(y) for y in words_of_length(a, n))


def bottom_fraction(t: FaragoTarget, phi: Bijection, n: int) -> Fraction:
    """Share of ``B_n`` on which the induced heuristic returns BOTTOM, exactly."""
    members = b_set(phi, n)
    if not members:
        raise UndefinedFractionError(f"B_{n} is empty")
    h = induced_heuristic(t, phi)
    bottoms = sum(1 for x in members if h(x) is HeuristicOutcome.BOTTOM)
    return Fraction(bottoms, len(members))


def bottom_set(outcome: Callable[[Word], HeuristicOutcome], words: Iterable[Word]) -> frozenset[Word]:
    return frozenset(w for w in words if outcome(w) is HeuristicOutcome.BOTTOM)
