"""Rank-preserving isomorphisms between neighbouring alphabets.

Conjugation convention: a map ``f`` on the source side becomes
``forward . f . backward`` on the destination side (apply ``backward`` first).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import AlphabetMismatchError, UnsupportedOperationError
from .langs import LanguageSpec, Padder
from .words import Alphabet, Word, xi_transcode

WordMap = Callable[[Word], Word]


@dataclass(frozen=True)
class PreservingIso:
    src: Alphabet
    dst: Alphabet
    forward: WordMap
    backward: WordMap

    def inverse(self) -> "PreservingIso":
        return PreservingIso(self.dst, self.src, self.backward, self.forward)

    def conjugate_map(self, f: WordMap) -> WordMap:
        """Carry ``f: src* -> src*`` over to ``dst* -> dst*``."""
        fwd, bwd = self.forward, self.backward

        def conjugated(v: Word) -> Word:
            return fwd(f(bwd(v)))

        return conjugated


def build_xi(src: Alphabet | int, dst: Alphabet | int | None = None) -> PreservingIso:
    """The transcoding isomorphism from ``src`` to an alphabet one symbol larger (or smaller)."""
    a = src if isinstance(src, Alphabet) else Alphabet(src)
    if dst is None:
        b = Alphabet(a.size + 1)
    else:
        b = dst if isinstance(dst, Alphabet) else Alphabet(dst)
    if abs(b.size - a.size) != 1:
        raise ValueError(f"alphabet sizes must differ by one, got {a} and {b}; compose steps instead")

    def forward(w: Word) -> Word:
        if w.alphabet != a:
            raise AlphabetMismatchError(f"forward expects a word over {a}, got {w.alphabet}")
        return xi_transcode(w, b)

    def backward(v: Word) -> Word:
        if v.alphabet != b:
            raise AlphabetMismatchError(f"backward expects a word over {b}, got {v.alphabet}")
        return xi_transcode(v, a)

    return PreservingIso(a, b, forward, backward)


def transfer_padding(lang: LanguageSpec, iso: PreservingIso) -> Padder:
    """Padding for the image language: pad and decode on the source side, then transcode."""
    if lang.padder is None:
        raise UnsupportedOperationError(f"{lang.name} has no padder to transfer")
    if lang.alphabet != iso.src:
        raise AlphabetMismatchError(f"{lang.name} is over {lang.alphabet}, iso starts at {iso.src}")
    fwd, bwd = iso.forward, iso.backward
    src_pad, src_dec = lang.padder.pad, lang.padder.dec

    def pad_h(y: Word, z: Word) -> Word:
        return fwd(src_pad(bwd(y), bwd(z)))

    def dec_h(z: Word) -> Word:
        return fwd(src_dec(bwd(z)))

    return Padder(pad=pad_h, dec=dec_h)


def conjugate_language(lang: LanguageSpec, iso: PreservingIso) -> LanguageSpec:
    """The image of ``lang`` under ``iso``, decided lazily through ``backward``."""
    if lang.alphabet != iso.src:
        raise AlphabetMismatchError(f"{lang.name} is over {lang.alphabet}, iso starts at {iso.src}")
    inner, bwd = lang.decide, iso.backward

    def decide(v: Word) -> bool:
        return inner(bwd(v))

    witnesses = None
    if lang.witnesses is not None:
        witnesses = (iso.forward(lang.witnesses[0]), iso.forward(lang.witnesses[1]))
    padder = transfer_padding(lang, iso) if lang.padder is not None else None
    return LanguageSpec(iso.dst, decide, padder, witnesses, name=f"xi({lang.name})->{iso.dst}")
