"""Sub-character tokenization restricted to the pronunciation partition.

Training is greedy pair merging over each unit's pronunciation text (base
letters plus the tone rendering). Character-index symbols never merge: they
stay standalone tokens, so the index information survives tokenization
untouched and no token spans an encoded-character boundary.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .codec import SymbolMode, ci_symbol, ci_text, parse_unit, pronunciation_text, tone_symbol
from .errors import CodecError, TokenizerError

UNK_TOKEN = "<unk>"
PAD_TOKEN = "<pad>"
SEP_TOKEN = "<sep>"  # unit boundary in the token stream; renders back to a space
SPECIAL_TOKENS = (UNK_TOKEN, PAD_TOKEN, SEP_TOKEN)
UNK_ID, PAD_ID, SEP_ID = 0, 1, 2


@dataclass(frozen=True)
class TokenizerModel:
    """Trained merge table plus vocabulary. Immutable; safe to share."""

    mode: SymbolMode
    vocab: tuple[str, ...]
    merges: tuple[tuple[str, str], ...]

    @cached_property
    def token_to_id(self) -> dict[str, int]:
        return {tok: i for i, tok in enumerate(self.vocab)}

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)


def _unit_atoms(token: str, mode: SymbolMode) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Split one surface unit into (mergeable pronunciation atoms, fixed tail).

    Passthrough units have no mergeable part; every character of theirs is a
    fixed atom.
    """
    try:
        code = parse_unit(token, mode)
    except CodecError:
        return (), tuple(token)
    return tuple(pronunciation_text(code, mode)), tuple(ci_text(code.ci, mode))


def _apply_merges(atoms: Sequence[str], merges: Iterable[tuple[str, str]]) -> list[str]:
    seq = list(atoms)
    for left, right in merges:
        if len(seq) < 2:
            break
        out: list[str] = []
        i = 0
        while i < len(seq):
            if i + 1 < len(seq) and seq[i] == left and seq[i + 1] == right:
                out.append(left + right)
                i += 2
            else:
                out.append(seq[i])
                i += 1
        seq = out
    return seq


def train_tokenizer(
    lines: Iterable[str],
    target_vocab_size: int,
    mode: SymbolMode,
) -> TokenizerModel:
    """Train a merge table on encoded corpus lines.

    ``target_vocab_size`` counts non-special tokens (atoms plus merged
    tokens); the three reserved tokens come on top. Merging stops when the
    target is reached or no adjacent pair occurs at least twice. Frequency
    ties resolve to the lexicographically greatest merged string, so training
    is deterministic.
    """
    windows: Counter[tuple[str, ...]] = Counter()
    atoms: set[str] = set()
    for line in lines:
        for token in line.split(" "):
            if not token:
                continue
            pron, tail = _unit_atoms(token, mode)
            atoms.update(pron)
            atoms.update(tail)
            if len(pron) >= 2:
                windows[pron] += 1

    minimum = len(atoms)
    if target_vocab_size < minimum:
        raise TokenizerError(
            f"target_vocab_size {target_vocab_size} too small: "
            f"minimum inventory is {minimum} (+specials)"
        )

    vocab: list[str] = list(SPECIAL_TOKENS) + sorted(atoms)
    known = set(vocab)
    merges: list[tuple[str, str]] = []
    size = minimum
    while size < target_vocab_size:
        pairs: Counter[tuple[str, str]] = Counter()
        for window, count in windows.items():
            for left, right in zip(window, window[1:]):
                pairs[(left, right)] += count
        if not pairs:
            break
        best_pair, best_count = max(
            pairs.items(), key=lambda item: (item[1], item[0][0] + item[0][1], item[0])
        )
        if best_count < 2:
            break
        merges.append(best_pair)
        merged = best_pair[0] + best_pair[1]
        windows = Counter(
            {tuple(_apply_merges(window, [best_pair])): count for window, count in windows.items()}
        )
        if merged not in known:
            vocab.append(merged)
            known.add(merged)
            size += 1
    return TokenizerModel(mode=mode, vocab=tuple(vocab), merges=tuple(merges))


def tokenize_to_tokens(line: str, model: TokenizerModel) -> list[str]:
    """Token strings for one encoded line, unit boundaries marked by <sep>."""
    tokens: list[str] = []
    first = True
    for unit in line.split(" "):
        if not unit:
            continue
        if not first:
            tokens.append(SEP_TOKEN)
        first = False
        pron, tail = _unit_atoms(unit, model.mode)
        tokens.extend(_apply_merges(pron, model.merges))
        tokens.extend(tail)
    return tokens


def tokenize(line: str, model: TokenizerModel) -> list[int]:
    """Token ids for one encoded line; atoms missing from the vocab map to unknown."""
    table = model.token_to_id
    return [table.get(tok, UNK_ID) for tok in tokenize_to_tokens(line, model)]


def detokenize_tokens(tokens: Iterable[str]) -> str:
    """Rebuild the encoded line from token strings."""
    units: list[str] = []
    current: list[str] = []
    for tok in tokens:
        if tok == SEP_TOKEN:
            units.append("".join(current))
            current = []
        elif tok == PAD_TOKEN:
            continue
        else:
            current.append(tok)
    units.append("".join(current))
    if units == [""]:
        return ""
    return " ".join(units)


def detokenize(ids: Iterable[int], model: TokenizerModel) -> str:
    """Inverse of tokenize. Unknown-token ids render as the literal <unk> marker."""
    tokens: list[str] = []
    for i in ids:
        if not 0 <= i < len(model.vocab):
            raise TokenizerError(f"token id {i} outside vocabulary of size {len(model.vocab)}")
        tokens.append(model.vocab[i])
    return detokenize_tokens(tokens)


@dataclass(frozen=True)
class VocabReport:
    """Distinct-atom inventory of a corpus under one (tone, ci) rendering pair."""

    letters: frozenset[str]
    tone_atoms: frozenset[str]
    ci_atoms: frozenset[str]
    other_atoms: frozenset[str]

    @property
    def minimum(self) -> int:
        """Smallest possible token inventory: all categories unioned."""
        return len(self.letters | self.tone_atoms | self.ci_atoms | self.other_atoms)


def detect_mode(lines: Iterable[str]) -> SymbolMode:
    """Infer the rendering mode of an encoded corpus from its parseable units."""
    ms = 0
    intc = 0
    for line in lines:
        for token in line.split(" "):
            if not token:
                continue
            for candidate in (SymbolMode.MS, SymbolMode.INT):
                try:
                    parse_unit(token, candidate)
                except CodecError:
                    continue
                if candidate is SymbolMode.MS:
                    ms += 1
                else:
                    intc += 1
    if ms and intc:
        raise TokenizerError("cannot detect mode: corpus mixes meta-symbol and integer units")
    if not ms and not intc:
        raise TokenizerError("cannot detect mode: no parseable units in corpus")
    return SymbolMode.MS if ms else SymbolMode.INT


def vocab_report(
    lines: Iterable[str],
    ti_mode: SymbolMode,
    ci_mode: SymbolMode,
    input_mode: SymbolMode,
) -> VocabReport:
    """Count the atom inventory the corpus would need under a rendering pair.

    The corpus is parsed in ``input_mode`` and each unit is re-rendered with
    the tone in ``ti_mode`` and the character index in ``ci_mode``, which
    also covers the mixed combination the pure codec modes do not produce.
    """
    letters: set[str] = set()
    tones: set[str] = set()
    cis: set[str] = set()
    other: set[str] = set()
    for line in lines:
        for token in line.split(" "):
            if not token:
                continue
            try:
                code = parse_unit(token, input_mode)
            except CodecError:
                other.update(token)
                continue
            letters.update(code.syllable.base)
            if ti_mode is SymbolMode.MS:
                tones.add(tone_symbol(code.syllable.tone))
            else:
                tones.add(str(code.syllable.tone))
            if ci_mode is SymbolMode.MS:
                cis.add(ci_symbol(code.ci))
            else:
                cis.add("#")
                cis.update(str(code.ci))
    return VocabReport(frozenset(letters), frozenset(tones), frozenset(cis), frozenset(other))


def save_tokenizer(model: TokenizerModel) -> str:
    """Render the model file: header, vocab tokens, then merges in order."""
    lines = [f"mode={model.mode.name} vocab={len(model.vocab)}"]
    lines.extend(model.vocab)
    lines.append("#MERGES")
    lines.extend(f"{left}\t{right}" for left, right in model.merges)
    return "\n".join(lines) + "\n"


def load_tokenizer(text: str) -> TokenizerModel:
    """Parse a model file, validating header and reserved tokens."""
    lines = text.splitlines()
    if not lines:
        raise TokenizerError("empty tokenizer model file")
    header = lines[0].split()
    if len(header) != 2 or not header[0].startswith("mode=") or not header[1].startswith("vocab="):
        raise TokenizerError(f"bad model header: {lines[0]!r}")
    try:
        mode = SymbolMode[header[0][len("mode="):]]
        count = int(header[1][len("vocab="):])
    except (KeyError, ValueError) as exc:
        raise TokenizerError(f"bad model header: {lines[0]!r}") from exc
    if len(lines) < 1 + count + 1 or lines[1 + count] != "#MERGES":
        raise TokenizerError("model file truncated or #MERGES marker misplaced")
    vocab = tuple(lines[1 : 1 + count])
    if vocab[:3] != SPECIAL_TOKENS:
        raise TokenizerError(f"reserved tokens missing or reordered: {vocab[:3]}")
    if len(set(vocab)) != len(vocab):
        raise TokenizerError("duplicate token in vocabulary")
    merges: list[tuple[str, str]] = []
    for lineno, line in enumerate(lines[2 + count :], start=3 + count):
        if not line:
            continue
        if "\t" not in line:
            raise TokenizerError(f"bad merge line {lineno}: {line!r}")
        left, _, right = line.partition("\t")
        merges.append((left, right))
    return TokenizerModel(mode=mode, vocab=vocab, merges=tuple(merges))
