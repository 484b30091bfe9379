from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from phaselab.errors import InsufficientDataError, UndefinedFractionError
from phaselab.iso import build_xi, conjugate_language
from phaselab.langs import Builtin, always_accept, builtin_language, complement
from phaselab.phase import (
    CurveReport,
    Parameter,
    SliceStats,
    Tolerances,
    accepting_fraction,
    aggregate_slices,
    curve,
    detect_transition,
    estimate_threshold,
    get_parameter,
    max_rank_for_length,
    transfer_parameter,
    window_cardinality,
    with_verdicts,
)
from phaselab.roughp import errorless_heuristic, farago_target
from phaselab.words import Alphabet, Word, enumerate_words, words_of_length

from conftest import kernel_oracle, shortlex_colex

DEMO = Builtin.SIGNED_LENGTH_DEMO


def oracle_signed_length(syms):
    kern, _ = kernel_oracle(syms)
    return len(syms) if kern[:1] == (1,) else -len(syms)


def oracle_first_symbol(syms):
    return kernel_oracle(syms)[0][:1] == (1,)


@pytest.fixture(scope="module")
def demo_report():
    lang = builtin_language(DEMO, 3)
    return curve(lang, get_parameter("signed-length"), max_rank_for_length(3, 8))


class TestAcceptingFraction:
    def test_witness(self):
        lang = builtin_language(Builtin.FIRST_SYMBOL, 3)
        assert accepting_fraction(lang, [lang.witnesses[0]]) == 1

    def test_length_two_words(self):
        lang = builtin_language(Builtin.FIRST_SYMBOL, 3)
        expected = Fraction(sum(oracle_first_symbol(p) for p in shortlex_colex(3, 2) if len(p) == 2), 9)
        assert accepting_fraction(lang, words_of_length(3, 2)) == expected == Fraction(2, 9)

    def test_empty_set(self):
        with pytest.raises(UndefinedFractionError):
            accepting_fraction(builtin_language(Builtin.FIRST_SYMBOL, 3), [])

    @given(st.sampled_from(list(Builtin)), st.integers(0, 400), st.integers(1, 200))
    @settings(max_examples=40)
    def test_partition_identity(self, name, start, size):
        lang = builtin_language(name, 3)
        ws = [w for i, w in enumerate(enumerate_words(3, start + size)) if i >= start]
        assert accepting_fraction(lang, ws) + accepting_fraction(complement(lang), ws) == 1


class TestCurve:
    def test_demo_examples(self, demo_report):
        assert demo_report.slice_at(2).fraction == 1
        assert demo_report.slice_at(-2).fraction == 0
        assert demo_report.slice_at(2).undecided == 0

    def test_threshold_is_half_crossing(self, demo_report):
        # slice 0 is {eps}, rejected; slice 1 is {1}, accepted
        assert demo_report.slice_at(0).fraction == 0
        assert demo_report.slice_at(1).fraction == 1
        assert demo_report.threshold == Fraction(1, 2)
        assert demo_report.threshold_method == "half-crossing"

    def test_matches_brute_force(self, demo_report):
        totals, accepted = Counter(), Counter()
        for syms in shortlex_colex(3, 8):
            v = oracle_signed_length(syms)
            totals[v] += 1
            accepted[v] += oracle_first_symbol(syms)
        got = {s.value: (s.total, s.accepted) for s in demo_report.slices}
        assert got == {Fraction(v): (totals[v], accepted[v]) for v in totals}

    def test_mass_conservation_and_bounds(self, demo_report):
        assert demo_report.corpus_size == demo_report.max_rank + 1
        for s in demo_report.slices:
            assert 0 <= s.fraction <= 1
            assert 0 <= s.accepted + s.undecided <= s.total

    def test_complement_duality(self):
        lang = builtin_language(Builtin.KERNEL_MAJORITY, 3)
        g = get_parameter("kernel-balance")
        a = curve(lang, g, 3000)
        b = curve(complement(lang), g, 3000)
        assert [s.value for s in a.slices] == [s.value for s in b.slices]
        assert all(x.fraction + y.fraction == 1 for x, y in zip(a.slices, b.slices))

    def test_undecided_counts(self):
        t = farago_target(builtin_language(Builtin.OMEGA_PARITY, 2))
        rep = curve(t.target, get_parameter("length"), 62, heuristic=lambda w: errorless_heuristic(t, w))
        # lengths 0..5: squares of even length k**(n/2)
        assert [s.undecided for s in rep.slices] == [1, 0, 2, 0, 4, 0]


class TestThreshold:
    def _slices(self, fracs):
        return tuple(SliceStats(Fraction(i), f[1], f[0]) for i, f in enumerate(fracs))

    def test_exact_half(self):
        t, method = estimate_threshold(self._slices([(0, 2), (1, 2), (2, 2)]))
        assert (t, method) == (1, "exact-half")

    def test_interpolation(self):
        t, _ = estimate_threshold(self._slices([(0, 4), (1, 4), (3, 4)]))
        assert t == Fraction(3, 2)

    def test_no_crossing_midpoint(self):
        t, method = estimate_threshold(self._slices([(1, 1), (1, 1), (1, 1)]))
        assert (t, method) == (1, "no-crossing-midpoint")


class TestVerdicts:
    def test_demo_passes_everything(self, demo_report):
        v = detect_transition(demo_report)
        assert [v[c].passed for c in ("cond1", "cond2", "cond3")] == [True, True, True]
        assert v["cond3"].diagnostics["r2"] >= 0.9

    def test_always_accept_fails_lower_limit(self):
        rep = curve(always_accept(3), get_parameter("signed-length"), max_rank_for_length(3, 8))
        assert not detect_transition(rep)["cond2"].passed

    def test_majority_fails_growth(self):
        lang = builtin_language(Builtin.KERNEL_MAJORITY, 3)
        rep = curve(lang, get_parameter("kernel-balance"), max_rank_for_length(3, 10))
        v = detect_transition(rep)
        assert v["cond1"].passed and v["cond2"].passed and not v["cond3"].passed
        assert v["cond3"].diagnostics["slope"] < 0

    def test_too_few_slices(self):
        rep = curve(builtin_language(DEMO, 3), get_parameter("signed-length"), 12)
        with pytest.raises(InsufficientDataError):
            detect_transition(rep)

    def test_tolerances_configurable(self, demo_report):
        strict = Tolerances().updated(r2="0.99")
        assert not detect_transition(demo_report, strict)["cond3"].passed
        with pytest.raises(ValueError):
            Tolerances().updated(bogus=1)

    def test_nonmonotone_curve_fails(self):
        fr = [(0, 1)] * 6 + [(1, 2)] + [(1, 1), (0, 1), (1, 1), (1, 1), (1, 1), (1, 1)]
        slices = tuple(SliceStats(Fraction(i - 6), f[1], f[0]) for i, f in enumerate(fr))
        t, m = estimate_threshold(slices)
        rep = CurveReport("x", "g", 0, slices, t, m)
        assert not detect_transition(rep)["cond1"].passed

    def test_with_verdicts(self, demo_report):
        assert set(with_verdicts(demo_report).verdicts) == {"cond1", "cond2", "cond3"}


class TestTransfer:
    def test_empty_word(self):
        g = get_parameter("signed-length")
        g2 = transfer_parameter(g, build_xi(3))
        eps = Word((), Alphabet(3))
        assert g2(eps) == g(Word((), Alphabet(4)))

    def test_slice_sets_and_curves(self):
        iso = build_xi(3)
        lang = builtin_language(DEMO, 3)
        h = conjugate_language(lang, iso)
        g = get_parameter("signed-length")
        g2 = transfer_parameter(g, iso)
        m = max_rank_for_length(3, 6)
        src_slices: dict = {}
        for x in enumerate_words(3, m):
            src_slices.setdefault(g2(x), set()).add(iso.forward(x))
        dst_slices: dict = {}
        for v in enumerate_words(4, m):
            dst_slices.setdefault(g(v), set()).add(v)
        assert src_slices == dst_slices
        a, b = curve(lang, g2, m), curve(h, g, m)
        assert a.slices == b.slices
        for s in a.slices:
            assert window_cardinality(a, s.value, s.value + 1) == window_cardinality(b, s.value, s.value + 1)


class TestParameters:
    def test_lookup(self):
        assert get_parameter("Kernel-Balance").name == "kernel-balance"
        with pytest.raises(ValueError):
            get_parameter("nope")

    def test_values_are_fractions(self):
        p = Parameter("half", lambda w: Fraction(len(w), 2))
        assert p(Word((1, 1, 1), Alphabet(2))) == Fraction(3, 2)

    def test_aggregate_sorted(self):
        out = aggregate_slices([Fraction(2), Fraction(-1), Fraction(2)], [True, False, False])
        assert [(s.value, s.total, s.accepted) for s in out] == [(-1, 1, 0), (2, 2, 1)]
