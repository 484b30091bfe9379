"""Estimator-style wrappers: a phase-curve classifier and a transcoding transformer.

Inputs are sequences of :class:`Word`; labels are booleans (member or not).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .errors import AlphabetMismatchError, InvalidWordError, NoPredictionError
from .iso import build_xi
from .phase import (
    HALF,
    CurveReport,
    Parameter,
    Tolerances,
    aggregate_slices,
    detect_transition,
    estimate_threshold,
    get_parameter,
)
from .words import Alphabet, Word


def check_words(X, alphabet: Optional[Alphabet] = None) -> list[Word]:
    """Validate a sequence of words, all over one alphabet."""
    if isinstance(X, Word):
        raise InvalidWordError("expected a sequence of words, got a single word")
    words = list(X)
    for i, w in enumerate(words):
        if not isinstance(w, Word):
            raise InvalidWordError(f"item {i} is {type(w).__name__}, not a Word")
        if alphabet is None:
            alphabet = w.alphabet
        elif w.alphabet != alphabet:
            raise AlphabetMismatchError(f"item {i} is over {w.alphabet}, expected {alphabet}")
    return words


def check_labels(y, n: int) -> list[bool]:
    labels = [bool(v) for v in y]
    if len(labels) != n:
        raise ValueError(f"got {n} words but {len(labels)} labels")
    return labels


def _check_fitted(est, attr: str) -> None:
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


def confidence_of(fraction: Fraction) -> Fraction:
    return max(fraction, 1 - fraction)


class PhaseCurve(ClassifierMixin, BaseEstimator):
    """Predict membership from the accepting fraction of a word's parameter slice.

    ``fit`` groups labelled words by parameter value. A word is predicted a
    member when its slice fraction is at least 1/2; the confidence is the
    larger of the fraction and its complement.
    """

    def __init__(self, parameter="signed-length", tol: Optional[Tolerances] = None, name: str = "fitted"):
        self.parameter = parameter
        self.tol = tol
        self.name = name

    def _param(self) -> Parameter:
        if isinstance(self.parameter, Parameter):
            return self.parameter
        return get_parameter(self.parameter)

    def fit(self, X, y, undecided=None):
        words = check_words(X)
        labels = check_labels(y, len(words))
        if not words:
            raise ValueError("cannot fit a curve on no words")
        g = self._param()
        und = None if undecided is None else check_labels(undecided, len(words))
        slices = aggregate_slices([g(w) for w in words], labels, und)
        threshold, method = estimate_threshold(slices)
        self.report_ = CurveReport(self.name, g.name, len(words) - 1, slices, threshold, method)
        self.fractions_ = self.report_.fractions()
        self.threshold_ = threshold
        self.classes_ = np.array([False, True])
        self.alphabet_ = words[0].alphabet
        return self

    def slice_fraction(self, w: Word) -> Fraction:
        _check_fitted(self, "fractions_")
        v = self._param()(w)
        try:
            return self.fractions_[v]
        except KeyError:
            raise NoPredictionError(f"no slice at parameter value {v} for {w}") from None

    def predict(self, X) -> np.ndarray:
        return np.array([self.slice_fraction(w) >= HALF for w in check_words(X, self._alphabet())], dtype=bool)

    def predict_proba(self, X) -> np.ndarray:
        a = [float(self.slice_fraction(w)) for w in check_words(X, self._alphabet())]
        p = np.array(a, dtype=float)
        return np.column_stack([1 - p, p])

    def confidence(self, X) -> list[Fraction]:
        return [confidence_of(self.slice_fraction(w)) for w in check_words(X, self._alphabet())]

    def verdicts(self, tol: Optional[Tolerances] = None):
        _check_fitted(self, "report_")
        return detect_transition(self.report_, tol or self.tol or Tolerances())

    def _alphabet(self):
        _check_fitted(self, "alphabet_")
        return self.alphabet_


class XiTranscoder(TransformerMixin, BaseEstimator):
    """Rank-preserving transcoding to an alphabet one symbol larger or smaller.

    ``target_size=None`` means one more symbol than the fitted alphabet.
    """

    def __init__(self, target_size: Optional[int] = None):
        self.target_size = target_size

    def fit(self, X, y=None):
        words = check_words(X)
        if not words:
            raise ValueError("cannot infer the alphabet from no words")
        self.iso_ = build_xi(words[0].alphabet, self.target_size)
        return self

    def transform(self, X) -> list[Word]:
        _check_fitted(self, "iso_")
        fwd = self.iso_.forward
        return [fwd(w) for w in check_words(X, self.iso_.src)]

    def inverse_transform(self, X) -> list[Word]:
        _check_fitted(self, "iso_")
        back = self.iso_.backward
        return [back(v) for v in check_words(X, self.iso_.dst)]


def fit_phase_curve(words: Sequence[Word], lang, parameter="signed-length") -> PhaseCurve:
    """Fit on exact membership labels from ``lang``."""
    return PhaseCurve(parameter, name=lang.name).fit(words, [lang.decide(w) for w in words])
