"""Languages, the kernel padding scheme, and the built-in demo languages.

Every built-in decides membership from the *kernel* of a word: the prefix
read up to the first unescaped separator ``(1, 2)``, with ``(1, 1)`` standing
for a literal ``1``. Padding writes an escaped kernel, the separator, and then
an arbitrary payload, so membership is untouched by whatever follows.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from typing import Callable, Optional

from .errors import AlphabetMismatchError, UnsupportedOperationError
from .words import Alphabet, Word

Decider = Callable[[Word], bool]


@dataclass(frozen=True)
class Padder:
    pad: Callable[[Word, Word], Word]
    dec: Callable[[Word], Word]


@dataclass(frozen=True)
class LanguageSpec:
    """A total membership decider over one alphabet.

    ``decide`` returns ``True`` for ACCEPT. ``witnesses`` is ``(member,
    non_member)`` when known.
    """

    alphabet: Alphabet
    decide: Decider
    padder: Optional[Padder] = None
    witnesses: Optional[tuple[Word, Word]] = None
    name: str = "language"

    def __contains__(self, w: Word) -> bool:
        return self.decide(w)

    def check_word(self, w: Word) -> None:
        if w.alphabet != self.alphabet:
            raise AlphabetMismatchError(f"{self.name} is over {self.alphabet}, word is over {w.alphabet}")


def _scan(symbols: tuple[int, ...]) -> tuple[tuple[int, ...], int | None]:
    """Return (kernel symbols, index just past the separator or None)."""
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        s = symbols[i]
        if s == 1 and i + 1 < n:
            nxt = symbols[i + 1]
            if nxt == 1:
                out.append(1)
                i += 2
                continue
            if nxt == 2:
                return tuple(out), i + 2
        out.append(s)
        i += 1
    return tuple(out), None


def kernel(w: Word) -> Word:
    """Decoded prefix of ``w`` before the first unescaped ``(1, 2)``."""
    syms, _ = _scan(w.symbols)
    return Word._trusted(syms, w.alphabet)


def escape(w: Word) -> Word:
    out = []
    for s in w.symbols:
        out.append(s)
        if s == 1:
            out.append(1)
    return Word._trusted(tuple(out), w.alphabet)


def kernel_pad(x: Word, y: Word) -> Word:
    if x.alphabet != y.alphabet:
        raise AlphabetMismatchError(f"pad arguments over {x.alphabet} and {y.alphabet}")
    return Word._trusted(escape(kernel(x)).symbols + (1, 2) + y.symbols, x.alphabet)


def kernel_dec(z: Word) -> Word:
    _, cut = _scan(z.symbols)
    if cut is None:
        return Word.empty(z.alphabet)
    return Word._trusted(z.symbols[cut:], z.alphabet)


KERNEL_PADDER = Padder(pad=kernel_pad, dec=kernel_dec)


def pad(lang: LanguageSpec, x: Word, y: Word) -> Word:
    if lang.padder is None:
        raise UnsupportedOperationError(f"{lang.name} has no padding function")
    lang.check_word(x)
    lang.check_word(y)
    return lang.padder.pad(x, y)


def dec(lang: LanguageSpec, z: Word) -> Word:
    if lang.padder is None:
        raise UnsupportedOperationError(f"{lang.name} has no decoding function")
    lang.check_word(z)
    return lang.padder.dec(z)


class Builtin(str, enum.Enum):
    FIRST_SYMBOL = "first-symbol"
    KERNEL_MAJORITY = "kernel-majority"
    OMEGA_PARITY = "omega-parity"
    SIGNED_LENGTH_DEMO = "signed-length-demo"


def _first_symbol(w: Word) -> bool:
    syms, _ = _scan(w.symbols)
    return bool(syms) and syms[0] == 1


def _majority(w: Word) -> bool:
    syms, _ = _scan(w.symbols)
    k = w.alphabet.size
    return syms.count(k) > syms.count(1)


def _omega_parity(w: Word) -> bool:
    syms, _ = _scan(w.symbols)
    return sum(syms) % 2 == 1


def builtin_language(name: Builtin | str, alphabet: Alphabet | int) -> LanguageSpec:
    """One of the built-in paddable languages; all carry the kernel padder and witnesses."""
    a = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    key = _lookup_builtin(name)
    eps = Word.empty(a)
    if key in (Builtin.FIRST_SYMBOL, Builtin.SIGNED_LENGTH_DEMO):
        decide, member = _first_symbol, Word._trusted((1,), a)
    elif key is Builtin.KERNEL_MAJORITY:
        decide, member = _majority, Word._trusted((a.size,), a)
    else:
        decide, member = _omega_parity, Word._trusted((1,), a)
    return LanguageSpec(
        alphabet=a,
        decide=decide,
        padder=KERNEL_PADDER,
        witnesses=(member, eps),
        name=f"{key.value}@{a}",
    )


def _lookup_builtin(name: Builtin | str) -> Builtin:
    if isinstance(name, Builtin):
        return name
    norm = str(name).strip().lower().replace("_", "-")
    for b in Builtin:
        if norm == b.value:
            return b
    raise ValueError(f"unknown built-in language {name!r}; choose from {[b.value for b in Builtin]}")


def complement(lang: LanguageSpec) -> LanguageSpec:
    """Same alphabet and padder, flipped decisions, swapped witnesses."""
    inner = lang.decide

    def decide(w: Word) -> bool:
        return not inner(w)

    witnesses = None if lang.witnesses is None else (lang.witnesses[1], lang.witnesses[0])
    name = lang.name[len("complement(") : -1] if lang.name.startswith("complement(") else f"complement({lang.name})"
    return replace(lang, decide=decide, witnesses=witnesses, name=name)


def always_accept(alphabet: Alphabet | int) -> LanguageSpec:
    a = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    return LanguageSpec(a, lambda w: True, KERNEL_PADDER, None, name=f"all@{a}")


def empty_language(alphabet: Alphabet | int) -> LanguageSpec:
    a = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    return LanguageSpec(a, lambda w: False, KERNEL_PADDER, None, name=f"empty@{a}")


_TOKEN = re.compile(r"^\s*([a-z_\-]+)\s*@\s*k\s*=\s*(\d+)\s*$", re.IGNORECASE)


def parse_language_token(token: str) -> LanguageSpec:
    """Parse CLI tokens such as ``first-symbol@k=3``; ``all`` and ``empty`` are also accepted."""
    m = _TOKEN.match(token)
    if not m:
        raise ValueError(f"cannot parse language token {token!r}; expected '<name>@k=<int>'")
    name, k = m.group(1).lower().replace("_", "-"), int(m.group(2))
    if name == "all":
        return always_accept(k)
    if name == "empty":
        return empty_language(k)
    return builtin_language(name, k)


def builtin_key(lang: LanguageSpec) -> str:
    return lang.name.split("@", 1)[0]


__all__ = [
    "Builtin",
    "KERNEL_PADDER",
    "LanguageSpec",
    "Padder",
    "always_accept",
    "builtin_language",
    "complement",
    "dec",
    "empty_language",
    "escape",
    "kernel",
    "kernel_dec",
    "kernel_pad",
    "pad",
    "parse_language_token",
]
