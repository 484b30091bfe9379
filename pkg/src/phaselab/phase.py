"""Parameters, slices, accepting fractions and finite-window transition verdicts.

All counts and fractions are exact. Logarithms only enter the exponential-mass
fit, which is a statistical proxy anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import InsufficientDataError, UndefinedFractionError
from .iso import PreservingIso
from .langs import LanguageSpec, _scan
from .roughp import HeuristicOutcome
from .words import Alphabet, Word, count_up_to_length, enumerate_words

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Parameter:
    """A total, exact-valued map from words to rationals."""

    name: str
    fn: Callable[[Word], object]

    def __call__(self, w: Word) -> Fraction:
        return Fraction(self.fn(w))


def signed_length() -> Parameter:
    """``+|w|`` when the kernel of ``w`` starts with symbol 1, otherwise ``-|w|``."""

    def fn(w: Word) -> int:
        syms, _ = _scan(w.symbols)
        n = len(w.symbols)
        return n if syms and syms[0] == 1 else -n

    return Parameter("signed-length", fn)


def kernel_balance() -> Parameter:
    """Count of the top symbol minus count of symbol 1, on the kernel."""

    def fn(w: Word) -> int:
        syms, _ = _scan(w.symbols)
        return syms.count(w.alphabet.size) - syms.count(1)

    return Parameter("kernel-balance", fn)


def length_parameter() -> Parameter:
    return Parameter("length", lambda w: len(w.symbols))


def omega_parameter() -> Parameter:
    return Parameter("omega", lambda w: sum(w.symbols))


PARAMETERS: dict[str, Callable[[], Parameter]] = {
    "signed-length": signed_length,
    "kernel-balance": kernel_balance,
    "length": length_parameter,
    "omega": omega_parameter,
}

# parameter that pairs with each built-in in demos and the CLI
CANONICAL_PARAMETER = {
    "signed-length-demo": "signed-length",
    "first-symbol": "signed-length",
    "kernel-majority": "kernel-balance",
    "omega-parity": "omega",
}


def get_parameter(name: str) -> Parameter:
    try:
        return PARAMETERS[name.strip().lower()]()
    except KeyError:
        raise ValueError(f"unknown parameter {name!r}; choose from {sorted(PARAMETERS)}") from None


def transfer_parameter(g: Parameter, iso: PreservingIso) -> Parameter:
    """Pull a parameter on the destination side back to the source: ``x -> g(forward(x))``."""
    fwd = iso.forward
    inner = g.fn

    def fn(x: Word):
        return inner(fwd(x))

    return Parameter(f"{g.name}.xi", fn)


def accepting_fraction(lang: LanguageSpec, words: Iterable[Word]) -> Fraction:
    total = 0
    hits = 0
    decide = lang.decide
    for w in words:
        total += 1
        hits += bool(decide(w))
    if total == 0:
        raise UndefinedFractionError("accepting fraction of an empty set")
    return Fraction(hits, total)


@dataclass(frozen=True)
class SliceStats:
    value: Fraction
    total: int
    accepted: int
    undecided: int = 0

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.accepted, self.total)


@dataclass(frozen=True)
class Tolerances:
    mono: Fraction = Fraction(0)
    limit: Fraction = Fraction(1, 20)
    r2: float = 0.9
    delta: Fraction = Fraction(1)
    cutoff: Fraction = Fraction(2)
    min_side_slices: int = 5
    split: Fraction = Fraction(1, 10)

    def updated(self, **overrides) -> "Tolerances":
        clean = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in self.__dataclass_fields__:
                raise ValueError(f"unknown tolerance {key!r}")
            if key == "r2":
                clean[key] = float(value)
            elif key == "min_side_slices":
                clean[key] = int(value)
            else:
                clean[key] = Fraction(value)
        return replace(self, **clean)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def label(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass(frozen=True)
class CurveReport:
    language: str
    parameter: str
    max_rank: int
    slices: tuple[SliceStats, ...]
    threshold: Optional[Fraction]
    threshold_method: str
    verdicts: dict = field(default_factory=dict, compare=False)

    @property
    def corpus_size(self) -> int:
        return sum(s.total for s in self.slices)

    def slice_at(self, value) -> Optional[SliceStats]:
        v = Fraction(value)
        for s in self.slices:
            if s.value == v:
                return s
        return None

    def fractions(self) -> dict[Fraction, Fraction]:
        return {s.value: s.fraction for s in self.slices}


def aggregate_slices(
    values: Iterable[Fraction], accepted: Iterable[bool], undecided: Optional[Iterable[bool]] = None
) -> tuple[SliceStats, ...]:
    """Group per-word observations into slices sorted by parameter value."""
    counts: dict[Fraction, list[int]] = {}
    und_iter = iter(undecided) if undecided is not None else None
    for v, acc in zip(values, accepted):
        c = counts.get(v)
        if c is None:
            c = counts[v] = [0, 0, 0]
        c[0] += 1
        c[1] += bool(acc)
        if und_iter is not None:
            c[2] += bool(next(und_iter))
    return tuple(SliceStats(v, c[0], c[1], c[2]) for v, c in sorted(counts.items()))


def estimate_threshold(slices: tuple[SliceStats, ...]) -> tuple[Optional[Fraction], str]:
    """First value where the fraction crosses 1/2, by linear interpolation."""
    if not slices:
        return None, "empty"
    for s in slices:
        if s.fraction == HALF:
            return s.value, "exact-half"
    for a, b in zip(slices, slices[1:]):
        fa, fb = a.fraction, b.fraction
        if (fa - HALF) * (fb - HALF) < 0:
            t = a.value + (HALF - fa) / (fb - fa) * (b.value - a.value)
            return t, "half-crossing"
    lo, hi = slices[0].value, slices[-1].value
    return (lo + hi) / 2, "no-crossing-midpoint"


def curve(
    lang: LanguageSpec,
    g: Parameter,
    max_rank: int,
    *,
    heuristic: Optional[Callable[[Word], HeuristicOutcome]] = None,
) -> CurveReport:
    """Slice every word of rank ``<= max_rank`` by ``g`` and count acceptances."""
    values: list[Fraction] = []
    accepted: list[bool] = []
    undecided: Optional[list[bool]] = [] if heuristic is not None else None
    decide = lang.decide
    for w in enumerate_words(lang.alphabet, max_rank):
        values.append(g(w))
        accepted.append(decide(w))
        if undecided is not None:
            undecided.append(heuristic(w) is HeuristicOutcome.BOTTOM)
    slices = aggregate_slices(values, accepted, undecided)
    threshold, method = estimate_threshold(slices)
    return CurveReport(lang.name, g.name, max_rank, slices, threshold, method)


def max_rank_for_length(alphabet: Alphabet | int, max_length: int) -> int:
    k = alphabet.size if isinstance(alphabet, Alphabet) else alphabet
    return count_up_to_length(k, max_length) - 1


def _side_slices(report: CurveReport, tol: Tolerances):
    if report.threshold is None:
        raise InsufficientDataError("curve has no slices")
    t = report.threshold
    left = [s for s in report.slices if s.value < t]
    right = [s for s in report.slices if s.value > t]
    need = tol.min_side_slices
    if len(left) < need or len(right) < need:
        raise InsufficientDataError(
            f"need {need} slices on each side of the threshold {t}, have {len(left)} left and {len(right)} right"
        )
    return left, right


def _upper_limit_check(right: list[SliceStats], tol: Tolerances) -> Verdict:
    fr = [s.fraction for s in right]
    envelope = list(fr)
    for i in range(len(fr) - 2, -1, -1):
        envelope[i] = min(fr[i], envelope[i + 1])
    gap = max(f - e for f, e in zip(fr, envelope))
    edge = fr[-1]
    ok = gap <= tol.mono and edge >= 1 - tol.limit
    return Verdict(ok, {"edge_value": right[-1].value, "edge_fraction": edge, "monotone_gap": gap, "envelope": envelope})


def _lower_limit_check(left: list[SliceStats], tol: Tolerances) -> Verdict:
    fr = [s.fraction for s in left]
    envelope = list(fr)
    for i in range(1, len(fr)):
        envelope[i] = max(fr[i], envelope[i - 1])
    gap = max(e - f for f, e in zip(fr, envelope))
    edge = fr[0]
    ok = gap <= tol.mono and edge <= tol.limit
    return Verdict(ok, {"edge_value": left[0].value, "edge_fraction": edge, "monotone_gap": gap, "envelope": envelope})


def window_masses(report: CurveReport, delta: Fraction) -> list[tuple[Fraction, int]]:
    """``(A, |{w : A <= g(w) <= A + delta}|)`` for every observed ``A`` whose window lies inside the range."""
    slices = report.slices
    if not slices:
        return []
    top = slices[-1].value
    out = []
    for i, s in enumerate(slices):
        end = s.value + delta
        if end > top:
            break
        mass = 0
        for other in slices[i:]:
            if other.value > end:
                break
            mass += other.total
        out.append((s.value, mass))
    return out


def _growth_check(report: CurveReport, tol: Tolerances) -> Verdict:
    t = report.threshold
    points = [
        (abs(a - t), mass) for a, mass in window_masses(report, tol.delta) if abs(a - t) >= tol.cutoff and mass > 0
    ]
    if len(points) < 3:
        return Verdict(False, {"reason": "fewer than 3 windows beyond the cutoff", "points": len(points)})
    x = np.array([float(d) for d, _ in points])
    y = np.array([math.log(m) for _, m in points])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    ok = slope > 0 and r2 >= tol.r2
    return Verdict(ok, {"slope": float(slope), "r2": r2, "windows": len(points)})


def detect_transition(report: CurveReport, tol: Tolerances = Tolerances()) -> dict[str, Verdict]:
    """Finite-window verdicts for the three transition conditions."""
    left, right = _side_slices(report, tol)
    return {
        "cond1": _upper_limit_check(right, tol),
        "cond2": _lower_limit_check(left, tol),
        "cond3": _growth_check(report, tol),
    }


def with_verdicts(report: CurveReport, tol: Tolerances = Tolerances()) -> CurveReport:
    return replace(report, verdicts=detect_transition(report, tol))


def window_cardinality(report: CurveReport, lo, hi) -> int:
    lo, hi = Fraction(lo), Fraction(hi)
    return sum(s.total for s in report.slices if lo <= s.value <= hi)
