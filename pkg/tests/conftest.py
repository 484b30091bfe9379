"""Shared strategies and brute-force oracles written independently of the library."""

import itertools

import pytest
from hypothesis import strategies as st

from phaselab.words import Alphabet, Word


def shortlex_colex(k, max_len):
    """All words up to ``max_len`` ordered by length, then by reversed word."""
    out = []
    for n in range(max_len + 1):
        block = [tuple(reversed(p)) for p in itertools.product(range(1, k + 1), repeat=n)]
        out.extend(block)
    return out


def bijective_value(symbols, k):
    """Little-endian bijective base-k value, computed by Horner from the top digit."""
    v = 0
    for s in reversed(symbols):
        v = v * k + s
    return v


def kernel_oracle(symbols):
    """Literal left-to-right scan: 11 -> 1, 12 stops, anything else copies."""
    out = []
    i = 0
    while i < len(symbols):
        if symbols[i] == 1 and i + 1 < len(symbols):
            if symbols[i + 1] == 1:
                out.append(1)
                i += 2
                continue
            if symbols[i + 1] == 2:
                return tuple(out), i + 2
        out.append(symbols[i])
        i += 1
    return tuple(out), None


@st.composite
def words(draw, k=None, max_size=12, min_k=2, max_k=6):
    size = k if k is not None else draw(st.integers(min_k, max_k))
    syms = draw(st.lists(st.integers(1, size), max_size=max_size))
    return Word(tuple(syms), Alphabet(size))


@pytest.fixture
def w():
    def make(k, *symbols):
        return Word(tuple(symbols), Alphabet(k))

    return make


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
