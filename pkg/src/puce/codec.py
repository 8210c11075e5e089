"""Convert between Mandarin text and encoded surface strings.

Two surface forms exist for a code. Meta-symbol (MS) mode renders tone and
character index as dedicated Unicode code points so they cannot be confused
with digits; integer (INT) mode renders them as decimal text:

    (ma, 3, 2)  ->  "ma" + U+2743 + U+A029      (MS)
    (ma, 3, 2)  ->  "ma3#2"                     (INT)

Tones 1..5 occupy code points 10049..10053 (10054 stays reserved) and
character indices 1..900 occupy 41000..41899 (41900 stays reserved). Both
ranges are disjoint from each other and from a-z, so parsing needs no
lookahead.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Union

from .errors import CodecError
from .lexicon import MAX_CHAR_INDEX, DictionaryPair, PuceCode, TonalSyllable

TONE_POINT_BASE = 10048  # tone t -> code point 10048 + t
TONE_POINT_RESERVED = 10054
CI_POINT_BASE = 40999  # ci i -> code point 40999 + i

# Visible stand-in for a literal space inside a passthrough unit, so units
# stay whitespace-free on the wire. Decodes back to a space.
SPACE_SENTINEL = "▁"


class SymbolMode(Enum):
    """Surface rendering for tone and character index."""

    MS = "ms"
    INT = "int"

    @classmethod
    def from_name(cls, name: str) -> SymbolMode:
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown symbol mode: {name!r} (expected ms or int)") from None


@dataclass(frozen=True)
class Passthrough:
    """A run of non-lexicon characters carried verbatim through the codec."""

    text: str


EncodedUnit = Union[PuceCode, Passthrough]


def tone_symbol(tone: int) -> str:
    """Meta symbol for a tone number 1..5."""
    if tone not in (1, 2, 3, 4, 5):
        raise ValueError(f"tone out of range 1..5: {tone}")
    return chr(TONE_POINT_BASE + tone)


def ci_symbol(ci: int) -> str:
    """Meta symbol for a character index 1..900."""
    if not 1 <= ci <= MAX_CHAR_INDEX:
        raise ValueError(f"character index out of range 1..{MAX_CHAR_INDEX}: {ci}")
    return chr(CI_POINT_BASE + ci)


def tone_from_symbol(symbol: str) -> int:
    """Inverse of tone_symbol; CodecError for anything outside the tone range."""
    cp = ord(symbol)
    if not TONE_POINT_BASE + 1 <= cp <= TONE_POINT_BASE + 5:
        raise CodecError(f"not a meta symbol: U+{cp:04X}")
    return cp - TONE_POINT_BASE


def ci_from_symbol(symbol: str) -> int:
    """Inverse of ci_symbol; CodecError for anything outside the ci range."""
    cp = ord(symbol)
    if not CI_POINT_BASE + 1 <= cp <= CI_POINT_BASE + MAX_CHAR_INDEX:
        raise CodecError(f"not a meta symbol: U+{cp:04X}")
    return cp - CI_POINT_BASE


def is_tone_symbol(ch: str) -> bool:
    return TONE_POINT_BASE + 1 <= ord(ch) <= TONE_POINT_BASE + 5


def is_ci_symbol(ch: str) -> bool:
    return CI_POINT_BASE + 1 <= ord(ch) <= CI_POINT_BASE + MAX_CHAR_INDEX


def pronunciation_text(code: PuceCode, mode: SymbolMode) -> str:
    """Surface form of the pronunciation partition (base letters + tone)."""
    if mode is SymbolMode.MS:
        return code.syllable.base + tone_symbol(code.syllable.tone)
    return code.syllable.base + str(code.syllable.tone)


def ci_text(ci: int, mode: SymbolMode) -> str:
    """Surface form of the character-index partition."""
    if mode is SymbolMode.MS:
        return ci_symbol(ci)
    if not 1 <= ci <= MAX_CHAR_INDEX:
        raise ValueError(f"character index out of range 1..{MAX_CHAR_INDEX}: {ci}")
    return f"#{ci}"


def render_unit(code: PuceCode, mode: SymbolMode) -> str:
    """Full surface string of one encoded character."""
    return pronunciation_text(code, mode) + ci_text(code.ci, mode)


def parse_unit(surface: str, mode: SymbolMode) -> PuceCode:
    """Exact inverse of render_unit; CodecError with position on failure."""
    n = len(surface)
    i = 0
    while i < n and "a" <= surface[i] <= "z":
        i += 1
    if i == 0:
        raise CodecError(f"expected letters at position 0 in {surface!r}")
    base = surface[:i]

    if mode is SymbolMode.MS:
        if i >= n or not is_tone_symbol(surface[i]):
            raise CodecError(f"expected tone meta symbol at position {i} in {surface!r}")
        tone = tone_from_symbol(surface[i])
        i += 1
        if i >= n or not is_ci_symbol(surface[i]):
            raise CodecError(f"expected ci meta symbol at position {i} in {surface!r}")
        ci = ci_from_symbol(surface[i])
        i += 1
    else:
        if i >= n or surface[i] not in "12345":
            raise CodecError(f"expected tone digit at position {i} in {surface!r}")
        tone = int(surface[i])
        i += 1
        if i >= n or surface[i] != "#":
            raise CodecError(f"expected '#' at position {i} in {surface!r}")
        i += 1
        start = i
        while i < n and "0" <= surface[i] <= "9":
            i += 1
        digits = surface[start:i]
        if not digits:
            raise CodecError(f"expected ci digits at position {start} in {surface!r}")
        if digits[0] == "0":
            raise CodecError(f"leading zero in ci at position {start} in {surface!r}")
        ci = int(digits)
        if ci > MAX_CHAR_INDEX:
            raise CodecError(f"ci {ci} out of range at position {start} in {surface!r}")
    if i != n:
        raise CodecError(f"trailing characters at position {i} in {surface!r}")
    return PuceCode(TonalSyllable(base, tone), ci)


def _code_for(
    char: str,
    pair: DictionaryPair,
    annotations: Mapping[str, TonalSyllable] | None,
) -> PuceCode:
    codes = pair.encode_map[char]
    if annotations and char in annotations:
        wanted = annotations[char]
        for code in codes:
            if code.syllable == wanted:
                return code
        raise CodecError(
            f"annotation {wanted.label} is not a pronunciation of {char!r}"
        )
    return codes[0]


def encode_text(
    text: str,
    pair: DictionaryPair,
    mode: SymbolMode,
    oov_policy: str = "fail",
    annotations: Mapping[str, TonalSyllable] | None = None,
) -> str:
    """Encode a sentence to space-separated surface units.

    Each lexicon character maps to its canonical code, or to the annotated
    pronunciation when ``annotations`` names one for that character.
    Non-lexicon characters follow ``oov_policy``: "fail" raises, "pass"
    emits them verbatim as passthrough units (consecutive ones grouped,
    spaces shown as U+2581), "skip" drops them.
    """
    if oov_policy not in ("fail", "pass", "skip"):
        raise ValueError(f"unknown oov policy: {oov_policy!r}")
    units: list[str] = []
    buffer: list[str] = []

    def flush() -> None:
        if buffer:
            units.append("".join(buffer).replace(" ", SPACE_SENTINEL))
            buffer.clear()

    for offset, char in enumerate(text):
        if char in pair.encode_map:
            flush()
            units.append(render_unit(_code_for(char, pair, annotations), mode))
        elif oov_policy == "fail":
            raise CodecError(f"unknown character {char!r} at offset {offset}")
        elif oov_policy == "pass":
            buffer.append(char)
    flush()
    return " ".join(units)


def decode_text(surface: str, pair: DictionaryPair, mode: SymbolMode) -> str:
    """Decode a space-separated unit sequence back to characters.

    Units that parse in the given mode go through the decode map (a parsed
    code missing from it is an error); anything else is passthrough text,
    copied verbatim with U+2581 restored to a space. Passthrough text that
    itself matches the unit grammar is indistinguishable on the wire and
    decodes as a unit.
    """
    out: list[str] = []
    for token in surface.split(" "):
        if not token:
            continue
        try:
            code = parse_unit(token, mode)
        except CodecError:
            out.append(token.replace(SPACE_SENTINEL, " "))
            continue
        try:
            out.append(pair.decode_map[code])
        except KeyError:
            raise CodecError(f"unknown code in unit {token!r}") from None
    return "".join(out)
