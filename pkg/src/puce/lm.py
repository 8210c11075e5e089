"""Order-n character language model with additive smoothing.

Serves as the rescoring LM behind a minimal contract: given a character
string, return a finite natural-log probability. Smoothing guarantees
finiteness for any input, including characters never seen in training:

    P(sym | ctx) = (count(ctx, sym) + k) / (total(ctx) + k * |vocab|)

Sentences are padded with order-1 start markers and close with one end
marker; both markers count toward the vocabulary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import LmError

BOS = "<s>"
EOS = "</s>"


@dataclass(frozen=True)
class NGramModel:
    order: int
    k: float
    counts: dict[tuple[str, ...], dict[str, int]] = field(default_factory=dict)
    totals: dict[tuple[str, ...], int] = field(default_factory=dict)
    vocab: frozenset[str] = frozenset()

    def _transitions(self, text: str) -> Iterator[tuple[tuple[str, ...], str]]:
        context = (BOS,) * (self.order - 1)
        for sym in list(text) + [EOS]:
            yield context, sym
            if self.order > 1:
                context = context[1:] + (sym,)

    def conditional_logp(self, context: tuple[str, ...], symbol: str) -> float:
        count = self.counts.get(context, {}).get(symbol, 0)
        total = self.totals.get(context, 0)
        return math.log((count + self.k) / (total + self.k * len(self.vocab)))

    def score(self, text: str) -> float:
        """Natural-log probability of the text, end marker included."""
        return sum(self.conditional_logp(ctx, sym) for ctx, sym in self._transitions(text))


def train_lm(lines: Iterable[str], order: int, k: float) -> NGramModel:
    """Count character n-grams over the corpus lines.

    Each line is one sentence. Raises LmError on an empty corpus; order and
    smoothing constant are validated as preconditions.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1: {order}")
    if k <= 0:
        raise ValueError(f"smoothing constant must be > 0: {k}")
    model = NGramModel(order=order, k=k)
    counts: dict[tuple[str, ...], dict[str, int]] = {}
    totals: dict[tuple[str, ...], int] = {}
    vocab: set[str] = {BOS, EOS}
    empty = True
    for line in lines:
        empty = False
        vocab.update(line)
        for context, sym in model._transitions(line):
            bucket = counts.setdefault(context, {})
            bucket[sym] = bucket.get(sym, 0) + 1
            totals[context] = totals.get(context, 0) + 1
    if empty:
        raise LmError("empty corpus")
    return NGramModel(order=order, k=k, counts=counts, totals=totals, vocab=frozenset(vocab))


def _escape(symbol: str) -> str:
    if symbol in (BOS, EOS):
        return symbol
    return symbol.replace("\\", "\\\\").replace("\t", "\\t").replace("<", "\\<")


def _unescape_symbols(text: str) -> list[str]:
    symbols: list[str] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\\":
            if i + 1 >= len(text):
                raise LmError(f"dangling escape in {text!r}")
            nxt = text[i + 1]
            symbols.append({"t": "\t", "\\": "\\", "<": "<"}.get(nxt, nxt))
            i += 2
        elif c == "<":
            for marker in (BOS, EOS):
                if text.startswith(marker, i):
                    symbols.append(marker)
                    i += len(marker)
                    break
            else:
                raise LmError(f"unknown marker in {text!r}")
        else:
            symbols.append(c)
            i += 1
    return symbols


def save_lm(model: NGramModel) -> str:
    """Render the model file: ``order k vocab_size`` header, sorted count lines."""
    lines = [f"{model.order} {model.k!r} {len(model.vocab)}"]
    rows = []
    for context, bucket in model.counts.items():
        ctx_text = "".join(_escape(s) for s in context)
        for sym, count in bucket.items():
            rows.append((ctx_text, _escape(sym), count))
    rows.sort()
    lines.extend(f"{ctx}\t{sym}\t{count}" for ctx, sym, count in rows)
    return "\n".join(lines) + "\n"


def load_lm(text: str) -> NGramModel:
    """Parse a model file and rebuild totals and vocabulary."""
    lines = text.splitlines()
    if not lines:
        raise LmError("empty model file")
    header = lines[0].split()
    if len(header) != 3:
        raise LmError(f"bad model header: {lines[0]!r}")
    try:
        order = int(header[0])
        k = float(header[1])
        vocab_size = int(header[2])
    except ValueError as exc:
        raise LmError(f"bad model header: {lines[0]!r}") from exc
    if order < 1 or k <= 0:
        raise LmError(f"bad model header: {lines[0]!r}")

    counts: dict[tuple[str, ...], dict[str, int]] = {}
    totals: dict[tuple[str, ...], int] = {}
    vocab: set[str] = {BOS, EOS}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LmError(f"expected context<TAB>symbol<TAB>count, line {lineno}")
        context = tuple(_unescape_symbols(parts[0]))
        symbols = _unescape_symbols(parts[1])
        if len(context) != order - 1 or len(symbols) != 1:
            raise LmError(f"context/symbol arity mismatch, line {lineno}")
        if not parts[2].isdigit() or int(parts[2]) < 1:
            raise LmError(f"count must be a positive integer, line {lineno}")
        sym = symbols[0]
        bucket = counts.setdefault(context, {})
        if sym in bucket:
            raise LmError(f"duplicate entry, line {lineno}")
        bucket[sym] = int(parts[2])
        totals[context] = totals.get(context, 0) + int(parts[2])
        vocab.update(s for s in context if s not in (BOS, EOS))
        if sym not in (BOS, EOS):
            vocab.add(sym)
    if len(vocab) != vocab_size:
        raise LmError(
            f"vocab size mismatch: header says {vocab_size}, file defines {len(vocab)}"
        )
    return NGramModel(order=order, k=k, counts=counts, totals=totals, vocab=frozenset(vocab))
