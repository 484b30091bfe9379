"""Alphabets, words and bijective-numeration ranking.

A word over the alphabet ``{1..k}`` is read as a little-endian numeral in
bijective base ``k``: the symbol at index ``j`` contributes ``w[j] * k**j``.
That reading is a bijection between all words and the nonnegative integers,
with the empty word at rank 0, and its order (shorter words first, then by
reversed word) is the canonical enumeration order used everywhere else.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import AlphabetMismatchError, InvalidWordError, ResourceLimitError

DEFAULT_CAP = 10**7
CAP_ENV_VAR = "PHASELAB_CAP"

_DIGITS = "123456789abcdefghijklmnopqrstuvwxyz"
EMPTY_TEXT = "-"


def enumeration_cap() -> int:
    """Current enumeration cap; the environment variable wins over the default."""
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{CAP_ENV_VAR} must be positive, got {cap}")
    return cap


def check_cap(count: int, what: str = "words", cap: int | None = None) -> None:
    cap = enumeration_cap() if cap is None else cap
    if count > cap:
        raise ResourceLimitError(
            f"request needs {count} {what}, above the enumeration cap of {cap} "
            f"(set {CAP_ENV_VAR} to raise it)"
        )


@dataclass(frozen=True, slots=True)
class Alphabet:
    """The symbol set ``{1..size}``."""

    size: int

    def __post_init__(self):
        if isinstance(self.size, bool) or not isinstance(self.size, int):
            raise TypeError(f"alphabet size must be an int, got {type(self.size).__name__}")
        if self.size < 2:
            raise ValueError(f"an alphabet needs at least two symbols, got size {self.size}")

    @property
    def symbols(self) -> range:
        return range(1, self.size + 1)

    def __str__(self) -> str:
        return f"k={self.size}"

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        body = text.strip()
        if body.startswith("k="):
            body = body[2:]
        try:
            return cls(int(body))
        except ValueError:
            raise ValueError(f"cannot parse alphabet {text!r}; expected 'k=<int>'") from None


@dataclass(frozen=True, slots=True)
class Word:
    """An immutable word over one alphabet. The empty word is allowed."""

    symbols: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self):
        if not isinstance(self.symbols, tuple):
            object.__setattr__(self, "symbols", tuple(self.symbols))
        k = self.alphabet.size
        for s in self.symbols:
            if isinstance(s, bool) or not isinstance(s, int) or not 1 <= s <= k:
                raise InvalidWordError(f"symbol {s!r} is not in {{1..{k}}}")

    @classmethod
    def _trusted(cls, symbols: tuple[int, ...], alphabet: Alphabet) -> "Word":
        # Skips validation; callers guarantee symbols are in range.
        w = object.__new__(cls)
        object.__setattr__(w, "symbols", symbols)
        object.__setattr__(w, "alphabet", alphabet)
        return w

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Word":
        return cls._trusted((), alphabet)

    @classmethod
    def of(cls, alphabet: Alphabet | int, *symbols: int) -> "Word":
        if isinstance(alphabet, int):
            alphabet = Alphabet(alphabet)
        return cls(tuple(symbols), alphabet)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word._trusted(self.symbols[index], self.alphabet)
        return self.symbols[index]

    def __add__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if other.alphabet != self.alphabet:
            raise AlphabetMismatchError(f"cannot concatenate words over {self.alphabet} and {other.alphabet}")
        return Word._trusted(self.symbols + other.symbols, self.alphabet)

    def __str__(self) -> str:
        return encode_word(self)

    def __repr__(self) -> str:
        return f"Word({encode_word(self) if self.alphabet.size <= 35 else self.symbols!r}, {self.alphabet})"

    def __lt__(self, other: "Word") -> bool:
        # canonical order == rank order
        return theta_rank(self) < theta_rank(other)


def _as_alphabet(a: Alphabet | int) -> Alphabet:
    return a if isinstance(a, Alphabet) else Alphabet(a)


def theta_rank(w: Word) -> int:
    """Rank of ``w``: the sum of ``w[j] * k**j``."""
    k = w.alphabet.size
    r = 0
    for s in reversed(w.symbols):
        if not 1 <= s <= k:
            raise InvalidWordError(f"symbol {s!r} is not in {{1..{k}}}")
        r = r * k + s
    return r


def alpha_unrank(rank: int, alphabet: Alphabet | int) -> Word:
    """Inverse of :func:`theta_rank` on the given alphabet."""
    a = _as_alphabet(alphabet)
    if rank < 0:
        raise ValueError(f"ranks are nonnegative, got {rank}")
    k = a.size
    out = []
    n = rank
    while n:
        q, d = divmod(n - 1, k)
        out.append(d + 1)
        n = q
    return Word._trusted(tuple(out), a)


def xi_transcode(w: Word, dst: Alphabet | int) -> Word:
    """Re-spell ``w`` over ``dst`` keeping its rank."""
    return alpha_unrank(theta_rank(w), dst)


def omega_sum(w: Word) -> int:
    """Sum of the symbols of ``w``."""
    return sum(w.symbols)


def length_rank_interval(k: int, n: int) -> tuple[int, int]:
    """Inclusive rank range occupied by the words of length ``n`` over ``k`` symbols."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    lo = (k**n - 1) // (k - 1)
    hi = (k ** (n + 1) - 1) // (k - 1) - 1
    return lo, hi


def length_of_rank(rank: int, k: int) -> int:
    """Length of the word with the given rank, without building it."""
    if rank < 0:
        raise ValueError(f"ranks are nonnegative, got {rank}")
    n = 0
    block = 1
    remaining = rank
    while remaining >= block:
        remaining -= block
        n += 1
        block *= k
    return n


def count_up_to_length(k: int, n: int) -> int:
    """Number of words of length at most ``n``."""
    return (k ** (n + 1) - 1) // (k - 1)


def _successor(symbols: list[int], k: int) -> None:
    # in-place bijective increment, least significant symbol first
    for i, s in enumerate(symbols):
        if s < k:
            symbols[i] = s + 1
            for j in range(i):
                symbols[j] = 1
            return
    for j in range(len(symbols)):
        symbols[j] = 1
    symbols.append(1)


def iter_words(alphabet: Alphabet | int, start: int, stop: int) -> Iterator[Word]:
    """Words with ranks ``start <= r < stop`` in rank order (no cap check)."""
    a = _as_alphabet(alphabet)
    if start >= stop:
        return
    cur = list(alpha_unrank(start, a).symbols)
    k = a.size
    for _ in range(stop - start):
        yield Word._trusted(tuple(cur), a)
        _successor(cur, k)


def enumerate_words(alphabet: Alphabet | int, max_rank: int, *, cap: int | None = None) -> Iterator[Word]:
    """Yield the words of rank ``0..max_rank`` in canonical order."""
    if max_rank < 0:
        raise ValueError(f"max_rank must be nonnegative, got {max_rank}")
    check_cap(max_rank + 1, cap=cap)
    return iter_words(alphabet, 0, max_rank + 1)


def words_of_length(alphabet: Alphabet | int, n: int, *, cap: int | None = None) -> Iterator[Word]:
    a = _as_alphabet(alphabet)
    lo, hi = length_rank_interval(a.size, n)
    check_cap(hi - lo + 1, cap=cap)
    return iter_words(a, lo, hi + 1)


def words_up_to_length(alphabet: Alphabet | int, n: int, *, cap: int | None = None) -> Iterator[Word]:
    a = _as_alphabet(alphabet)
    return enumerate_words(a, count_up_to_length(a.size, n) - 1, cap=cap)


def encode_word(w: Word) -> str:
    """Text form: one base-36 character per symbol, ``-`` for the empty word."""
    if w.alphabet.size > len(_DIGITS):
        raise ValueError(f"text codec supports alphabets up to k={len(_DIGITS)}")
    if not w.symbols:
        return EMPTY_TEXT
    return "".join(_DIGITS[s - 1] for s in w.symbols)


def decode_word(text: str, alphabet: Alphabet | int) -> Word:
    a = _as_alphabet(alphabet)
    if a.size > len(_DIGITS):
        raise ValueError(f"text codec supports alphabets up to k={len(_DIGITS)}")
    body = text.strip()
    if body == EMPTY_TEXT:
        return Word.empty(a)
    if body == "":
        raise InvalidWordError("empty text; the empty word is written '-'")
    symbols = []
    for ch in body.lower():
        idx = _DIGITS.find(ch)
        if idx < 0 or idx + 1 > a.size:
            raise InvalidWordError(f"character {ch!r} is not a symbol of {a}")
        symbols.append(idx + 1)
    return Word._trusted(tuple(symbols), a)


def words_from(alphabet: Alphabet | int, rows: Sequence[Sequence[int]]) -> list[Word]:
    a = _as_alphabet(alphabet)
    return [Word(tuple(r), a) for r in rows]
