"""Lexicon ingestion and encode/decode dictionary construction.

A lexicon maps Chinese characters to tonal syllables. Characters sharing a
tonal syllable are disambiguated by a character index (ci), assigned in
lexicon-file order of first appearance, so that every (syllable, tone, ci)
triple resolves to exactly one character.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import LexiconError

# Highest character index representable on the wire (one dedicated code point
# per index; see codec).
MAX_CHAR_INDEX = 900

_CODE_TEXT_RE = re.compile(r"^([a-z]+)([1-5])#([1-9][0-9]*)$")


@dataclass(frozen=True, order=True)
class TonalSyllable:
    """Pinyin base syllable plus tone number (5 = neutral tone)."""

    base: str
    tone: int

    def __post_init__(self) -> None:
        if not self.base or not all("a" <= c <= "z" for c in self.base):
            raise ValueError(f"syllable base must be non-empty a-z letters: {self.base!r}")
        if self.tone not in (1, 2, 3, 4, 5):
            raise ValueError(f"tone out of range: {self.tone}")

    @property
    def label(self) -> str:
        """Compact text form, e.g. ``ma3``."""
        return f"{self.base}{self.tone}"


@dataclass(frozen=True, order=True)
class PuceCode:
    """One character's encoding: tonal syllable plus character index."""

    syllable: TonalSyllable
    ci: int

    def __post_init__(self) -> None:
        if not 1 <= self.ci <= MAX_CHAR_INDEX:
            raise ValueError(f"character index out of range 1..{MAX_CHAR_INDEX}: {self.ci}")

    @property
    def label(self) -> str:
        """Canonical integer text form, e.g. ``ma3#2``."""
        return f"{self.syllable.label}#{self.ci}"

    @classmethod
    def from_label(cls, text: str) -> PuceCode:
        """Parse the ``<base><tone>#<ci>`` text form."""
        m = _CODE_TEXT_RE.match(text)
        if m is None:
            raise ValueError(f"not a valid code label: {text!r}")
        return cls(TonalSyllable(m.group(1), int(m.group(2))), int(m.group(3)))


@dataclass(frozen=True)
class LexiconEntry:
    """A character with its pronunciations; the first one is canonical."""

    character: str
    pronunciations: tuple[TonalSyllable, ...]

    def __post_init__(self) -> None:
        if len(self.character) != 1:
            raise ValueError(f"lexicon key must be a single character: {self.character!r}")
        if not self.pronunciations:
            raise ValueError(f"entry for {self.character!r} has no pronunciations")
        if len(set(self.pronunciations)) != len(self.pronunciations):
            raise ValueError(f"duplicate pronunciation for {self.character!r}")


@dataclass(frozen=True)
class DictionaryPair:
    """Paired character-to-code and code-to-character maps.

    Built once, then treated as immutable; safe for concurrent readers.
    ``encode_map`` preserves pronunciation order (first entry is canonical);
    ``decode_map`` is injective per tonal syllable, and for each syllable the
    assigned ci values are exactly 1..k with no gaps.
    """

    encode_map: dict[str, tuple[PuceCode, ...]] = field(default_factory=dict)
    decode_map: dict[PuceCode, str] = field(default_factory=dict)
    per_syllable_count: dict[TonalSyllable, int] = field(default_factory=dict)

    def canonical_code(self, character: str) -> PuceCode:
        """First-listed code for a character; KeyError if absent."""
        return self.encode_map[character][0]


def parse_lexicon(text: str) -> list[LexiconEntry]:
    """Parse lexicon file content into entries, preserving order.

    One entry per line: ``<char><TAB><base><tone>[;<base><tone>...]``,
    e.g. ``乐\tyue4;le4``. Blank lines and lines starting with ``#`` are
    skipped. Raises LexiconError with the offending line number.
    """
    entries: list[LexiconEntry] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise LexiconError(f"missing tab separator, line {lineno}")
        char, _, pron_field = line.partition("\t")
        if len(char) != 1:
            raise LexiconError(f"key must be a single character, line {lineno}: {char!r}")
        if char in seen:
            raise LexiconError(f"duplicate character {char!r}, line {lineno}")
        prons: list[TonalSyllable] = []
        for piece in pron_field.strip().split(";"):
            piece = piece.strip()
            if not piece:
                raise LexiconError(f"empty pronunciation, line {lineno}")
            base, digit = piece[:-1], piece[-1]
            if digit not in "0123456789":
                raise LexiconError(f"missing tone digit, line {lineno}: {piece!r}")
            if not base or not all("a" <= c <= "z" for c in base):
                raise LexiconError(f"syllable must be a-z letters, line {lineno}: {piece!r}")
            if digit not in "12345":
                raise LexiconError(f"tone out of range, line {lineno}")
            syl = TonalSyllable(base, int(digit))
            if syl in prons:
                raise LexiconError(f"duplicate pronunciation {piece!r}, line {lineno}")
            prons.append(syl)
        entries.append(LexiconEntry(char, tuple(prons)))
        seen.add(char)
    return entries


def build_dictionaries(
    entries: Iterable[LexiconEntry],
    frequencies: Mapping[str, int] | None = None,
) -> DictionaryPair:
    """Assign character indices and build the paired dictionaries.

    Characters receive ci = 1, 2, ... per tonal syllable in entry order of
    first appearance. When ``frequencies`` is given, entries are reordered by
    descending corpus frequency first (ties keep input order), so frequent
    characters get small indices. Polyphonic characters receive one code per
    pronunciation, in the entry's pronunciation order.
    """
    ordered = list(entries)
    if frequencies is not None:
        ordered.sort(key=lambda e: -frequencies.get(e.character, 0))

    encode_map: dict[str, tuple[PuceCode, ...]] = {}
    decode_map: dict[PuceCode, str] = {}
    counts: dict[TonalSyllable, int] = {}
    for entry in ordered:
        if entry.character in encode_map:
            raise LexiconError(f"duplicate character {entry.character!r}")
        codes: list[PuceCode] = []
        for syl in entry.pronunciations:
            nxt = counts.get(syl, 0) + 1
            if nxt > MAX_CHAR_INDEX:
                raise LexiconError(
                    f"tonal syllable {syl.label} exceeds maximum character index {MAX_CHAR_INDEX}"
                )
            counts[syl] = nxt
            code = PuceCode(syl, nxt)
            codes.append(code)
            decode_map[code] = entry.character
        encode_map[entry.character] = tuple(codes)
    return DictionaryPair(encode_map, decode_map, counts)


def serialize_dictionaries(pair: DictionaryPair) -> tuple[str, str]:
    """Render (decode file, encode file) contents.

    Decode file: one ``<base><tone>#<ci><TAB><char>`` per line, sorted by
    (base, tone, ci). Encode file: one ``<char><TAB><code>[;<code>...]`` per
    line, sorted by character code point, code order preserved.
    """
    decode_lines = [
        f"{code.label}\t{char}"
        for code, char in sorted(pair.decode_map.items())
    ]
    encode_lines = [
        f"{char}\t{';'.join(code.label for code in codes)}"
        for char, codes in sorted(pair.encode_map.items())
    ]
    return "\n".join(decode_lines) + "\n", "\n".join(encode_lines) + "\n"


def deserialize_dictionaries(decode_text: str, encode_text: str) -> DictionaryPair:
    """Parse and cross-validate the two dictionary files.

    Rejects anything that violates the pair invariants: ci gaps within a
    tonal syllable, duplicate keys, or encode/decode maps that are not
    mutual inverses.
    """
    decode_map: dict[PuceCode, str] = {}
    for lineno, line in enumerate(decode_text.splitlines(), start=1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise LexiconError(f"decode file: missing tab, line {lineno}")
        code_text, _, char = line.partition("\t")
        if len(char) != 1:
            raise LexiconError(f"decode file: value must be a single character, line {lineno}")
        try:
            code = PuceCode.from_label(code_text)
        except ValueError as exc:
            raise LexiconError(f"decode file: {exc}, line {lineno}") from exc
        if code in decode_map:
            raise LexiconError(f"decode file: duplicate code {code.label}, line {lineno}")
        decode_map[code] = char

    encode_map: dict[str, tuple[PuceCode, ...]] = {}
    for lineno, line in enumerate(encode_text.splitlines(), start=1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise LexiconError(f"encode file: missing tab, line {lineno}")
        char, _, codes_field = line.partition("\t")
        if len(char) != 1:
            raise LexiconError(f"encode file: key must be a single character, line {lineno}")
        if char in encode_map:
            raise LexiconError(f"encode file: duplicate character {char!r}, line {lineno}")
        try:
            codes = tuple(PuceCode.from_label(p) for p in codes_field.split(";"))
        except ValueError as exc:
            raise LexiconError(f"encode file: {exc}, line {lineno}") from exc
        if len(set(codes)) != len(codes):
            raise LexiconError(f"encode file: duplicate code for {char!r}, line {lineno}")
        encode_map[char] = codes

    counts: dict[TonalSyllable, int] = {}
    by_syllable: dict[TonalSyllable, set[int]] = {}
    for code in decode_map:
        by_syllable.setdefault(code.syllable, set()).add(code.ci)
    for syl, cis in by_syllable.items():
        k = len(cis)
        if cis != set(range(1, k + 1)):
            raise LexiconError(f"ci gap for tonal syllable {syl.label}: indices {sorted(cis)}")
        counts[syl] = k

    for char, codes in encode_map.items():
        for code in codes:
            if decode_map.get(code) != char:
                raise LexiconError(
                    f"non-inverse pair: {char!r} encodes to {code.label} "
                    f"but {code.label} decodes to {decode_map.get(code)!r}"
                )
    for code, char in decode_map.items():
        if code not in encode_map.get(char, ()):
            raise LexiconError(
                f"non-inverse pair: {code.label} decodes to {char!r} "
                f"but {char!r} does not encode to it"
            )
    return DictionaryPair(encode_map, decode_map, counts)


def parse_frequency_table(text: str) -> dict[str, int]:
    """Parse a ``<char><TAB><count>`` frequency file (comments allowed)."""
    freq: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        char, _, count = line.partition("\t")
        if len(char) != 1 or not count.strip().isdigit():
            raise LexiconError(f"frequency file: expected <char><TAB><count>, line {lineno}")
        freq[char] = int(count.strip())
    return freq
