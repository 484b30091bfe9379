"""Checking a noisy decision device against phase-curve predictions.

The cohort is a list of instances whose element 0 is the target ``p``. Each
instance gets a curve-based prediction with a confidence; each disagreement
with the device multiplies ``1 - confidence`` into the overall confidence.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import DeviceError, InsufficientDataError, NoPredictionError
from .langs import LanguageSpec, builtin_key, parse_language_token
from .phase import CANONICAL_PARAMETER, HALF, CurveReport, Parameter, curve, get_parameter
from .roughp import HeuristicOutcome
from .serial import exact, ratio
from .words import Word, alpha_unrank, decode_word, encode_word, length_rank_interval, theta_rank

Prediction = tuple[HeuristicOutcome, Fraction]


class CohortPolicy(str, enum.Enum):
    SAME_LENGTH = "same-length"
    RANK_NEIGHBORS = "rank-neighbors"


@dataclass(frozen=True)
class DeviceModel:
    """Answers with the true membership, flipped independently with probability ``flip_probability``.

    ``forced_flips`` lists query indices that are always flipped.
    """

    truth: LanguageSpec
    flip_probability: Fraction = Fraction(0)
    seed: int = 0
    forced_flips: frozenset[int] = frozenset()

    def __post_init__(self):
        p = Fraction(self.flip_probability)
        if not 0 <= p <= 1:
            raise ValueError(f"flip probability must lie in [0, 1], got {p}")
        object.__setattr__(self, "flip_probability", p)
        object.__setattr__(self, "forced_flips", frozenset(self.forced_flips))

    def session(self) -> Callable[[int, Word], HeuristicOutcome]:
        """A fresh query function; the flip stream restarts from ``seed``."""
        rng = random.Random(self.seed)
        p = self.flip_probability
        decide = self.truth.decide

        def query(index: int, w: Word) -> HeuristicOutcome:
            try:
                answer = bool(decide(w))
            except Exception as exc:
                raise DeviceError(f"device failed on instance {index} ({w})") from exc
            # exact Bernoulli(p): draw before checking forced flips so the stream stays aligned
            flip = rng.randrange(p.denominator) < p.numerator
            if flip or index in self.forced_flips:
                answer = not answer
            return HeuristicOutcome.ACCEPT if answer else HeuristicOutcome.REJECT

        return query


def build_cohort(p: Word, size: int, policy: CohortPolicy | str = CohortPolicy.SAME_LENGTH) -> list[Word]:
    """``size`` distinct instances, ``p`` first.

    SAME_LENGTH walks the ranks of words of length ``|p|`` upward from ``p``,
    wrapping around to the lowest rank of that length; RANK_NEIGHBORS takes the next ranks.
    """
    if size < 1:
        raise ValueError("cohort size must be at least 1")
    policy = CohortPolicy(policy)
    r0 = theta_rank(p)
    a = p.alphabet
    if policy is CohortPolicy.RANK_NEIGHBORS:
        return [alpha_unrank(r0 + j, a) for j in range(size)]
    lo, hi = length_rank_interval(a.size, len(p))
    count = hi - lo + 1
    if size > count:
        raise InsufficientDataError(f"only {count} words of length {len(p)} over {a}, asked for {size}")
    return [alpha_unrank(lo + (r0 - lo + j) % count, a) for j in range(size)]


def predict_with_confidence(report: CurveReport, w: Word, g: Parameter) -> Prediction:
    v = g(w)
    s = report.slice_at(v)
    if s is None:
        raise NoPredictionError(f"curve has no slice at {v}")
    a = s.fraction
    outcome = HeuristicOutcome.ACCEPT if a >= HALF else HeuristicOutcome.REJECT
    return outcome, max(a, 1 - a)


@dataclass(frozen=True)
class InstanceRecord:
    index: int
    word: Word
    prediction: Optional[HeuristicOutcome]
    confidence: Optional[Fraction]
    device: HeuristicOutcome
    mismatch: bool
    skipped: bool = False

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "word": encode_word(self.word),
            "prediction": None if self.prediction is None else str(self.prediction),
            "confidence": None if self.confidence is None else exact(self.confidence),
            "device": str(self.device),
            "mismatch": self.mismatch,
            "skipped": self.skipped,
        }


@dataclass(frozen=True)
class VerificationReport:
    s0: HeuristicOutcome
    overall_confidence: Fraction
    records: tuple[InstanceRecord, ...]
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def skipped(self) -> tuple[int, ...]:
        return tuple(r.index for r in self.records if r.skipped)

    @property
    def mismatches(self) -> tuple[int, ...]:
        return tuple(r.index for r in self.records if r.mismatch)

    def as_dict(self) -> dict:
        out = dict(self.meta)
        out.update(
            {
                "s0": str(self.s0),
                "overall_confidence": ratio(self.overall_confidence),
                "overall_confidence_decimal": exact(self.overall_confidence)["decimal"],
                "mismatches": list(self.mismatches),
                "skipped": list(self.skipped),
                "records": [r.as_dict() for r in self.records],
            }
        )
        return out


class PartialVerificationError(DeviceError):
    def __init__(self, message: str, records: tuple[InstanceRecord, ...]):
        super().__init__(message)
        self.records = records


def run_verification(
    device: DeviceModel, cohort: list[Word], predictor: Callable[[Word], Prediction]
) -> VerificationReport:
    if not cohort:
        raise ValueError("cohort must contain at least the target instance")
    query = device.session()
    records: list[InstanceRecord] = []
    overall = Fraction(1)
    for j, w in enumerate(cohort):
        try:
            answer = query(j, w)
        except DeviceError as exc:
            raise PartialVerificationError(str(exc), tuple(records)) from exc
        try:
            guess, conf = predictor(w)
        except NoPredictionError:
            records.append(InstanceRecord(j, w, None, None, answer, False, skipped=True))
            continue
        mismatch = guess is not answer
        if mismatch:
            overall *= 1 - conf
        records.append(InstanceRecord(j, w, guess, conf, answer, mismatch))
    return VerificationReport(records[0].device, overall, tuple(records))


# scenario files -------------------------------------------------------------

SCENARIO_KEYS = {
    "lang": str,
    "param": str,
    "max_rank": int,
    "target": str,
    "cohort_size": int,
    "policy": str,
    "flip_probability": Fraction,
    "seed": int,
    "forced_flips": str,
}


@dataclass(frozen=True)
class Scenario:
    lang: str = "signed-length-demo@k=3"
    param: Optional[str] = None
    max_rank: int = 9840
    target: str = "1212"
    cohort_size: int = 8
    policy: str = CohortPolicy.SAME_LENGTH.value
    flip_probability: Fraction = Fraction(0)
    seed: int = 0
    forced_flips: str = ""

    def updated(self, **overrides) -> "Scenario":
        clean = {k: SCENARIO_KEYS[k](v) for k, v in overrides.items() if v is not None}
        return Scenario(**{**self.__dict__, **clean})


def parse_scenario(text: str) -> Scenario:
    """Line-based ``key = value``; ``#`` starts a comment. Unknown keys are errors."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in SCENARIO_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = SCENARIO_KEYS[key](value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"line {lineno}: bad value for {key}: {exc}") from None
    return Scenario(**values)


def run_scenario(sc: Scenario) -> VerificationReport:
    lang = parse_language_token(sc.lang)
    g = get_parameter(sc.param or CANONICAL_PARAMETER.get(builtin_key(lang), "signed-length"))
    if sc.max_rank < 0:
        raise ValueError("max_rank must be nonnegative")
    report = curve(lang, g, sc.max_rank)
    p = decode_word(sc.target, lang.alphabet)
    cohort = build_cohort(p, sc.cohort_size, sc.policy)
    forced = frozenset(int(s) for s in sc.forced_flips.replace(",", " ").split())
    device = DeviceModel(lang, sc.flip_probability, sc.seed, forced)
    result = run_verification(device, cohort, lambda w: predict_with_confidence(report, w, g))
    meta = {
        "language": lang.name,
        "parameter": g.name,
        "max_rank": sc.max_rank,
        "target": encode_word(p),
        "target_truth": "A" if lang.decide(p) else "R",
        "policy": CohortPolicy(sc.policy).value,
        "cohort_size": len(cohort),
        "flip_probability": ratio(sc.flip_probability),
        "seed": sc.seed,
    }
    return VerificationReport(result.s0, result.overall_confidence, result.records, meta)
