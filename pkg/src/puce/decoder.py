"""N-best beam search over emission lattices and external-LM rescoring.

A lattice freezes per-step model outputs: the pronunciation token of each
step is fixed (top-1), only the character-index distribution is searched.
Slot choices are independent and scores additive, so a beam at least as wide
as n_best returns the exact top of the full Cartesian product, and there is
no autoregressive state to carry between steps. Rescoring reorders the
finished N-best list with one LM call per hypothesis:

    fused = acoustic_logp + weight * lm_logp
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from operator import itemgetter
from typing import Callable, Sequence, Union

from .codec import SymbolMode, ci_text, decode_text, is_ci_symbol, is_tone_symbol
from .errors import CodecError, LatticeError
from .lexicon import MAX_CHAR_INDEX, DictionaryPair

# Rescoring weights tuned per training corpus, shipped as named presets.
LAMBDA_PRESETS = {
    "aishell-in": 1.16,
    "aishell-cross": 2.08,
    "magic208-in": 0.55,
    "magic208-cross": 1.85,
    "magic1000-in": 0.61,
    "magic1000-cross": 1.50,
}

# Slack allowed when candidate probabilities sum slightly above one; mass
# absorbed by blank/others may legitimately be missing, excess may not.
MASS_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FixedSlot:
    """Top-1 pronunciation token (surface unit without its index) and its logp."""

    token: str
    logp: float


@dataclass(frozen=True)
class ChoiceSlot:
    """Character-index candidates, sorted by descending logp."""

    candidates: tuple[tuple[int, float], ...]


Slot = Union[FixedSlot, ChoiceSlot]


@dataclass(frozen=True)
class EmissionLattice:
    slots: tuple[Slot, ...]
    mode: SymbolMode


@dataclass(frozen=True)
class Hypothesis:
    """One full surface sequence with its scores."""

    units: tuple[str, ...]
    ci_choices: tuple[int, ...]
    acoustic_logp: float
    mode: SymbolMode
    lm_logp: float | None = None
    fused_score: float | None = None


@dataclass(frozen=True)
class RescoreConfig:
    n_best: int
    beam_width: int
    lm_weight: float = 0.0

    def __post_init__(self) -> None:
        if self.n_best < 1:
            raise ValueError(f"n_best must be >= 1: {self.n_best}")
        if self.beam_width < self.n_best:
            raise ValueError(
                f"beam_width {self.beam_width} must be >= n_best {self.n_best}"
            )
        if self.lm_weight < 0:
            raise ValueError(f"lm_weight must be >= 0: {self.lm_weight}")


def _check_logp(value: float, lineno: int) -> float:
    if not math.isfinite(value):
        raise LatticeError(f"non-finite logp, line {lineno}")
    if value > 0:
        raise LatticeError(f"positive logp, line {lineno}")
    return value


def _ascii_int(text: str) -> int | None:
    return int(text) if text and all("0" <= c <= "9" for c in text) else None


def parse_lattice(text: str, mode: SymbolMode | None = None) -> EmissionLattice:
    """Parse the lattice file grammar.

    One slot per line: ``F <token> <logp>`` or ``C <k>`` followed by k
    candidate lines ``<ci> <logp>``. Blank lines are skipped. When ``mode``
    is not given it is inferred from the fixed tokens: any meta symbol means
    MS, otherwise INT.
    """
    numbered = [(i, line) for i, line in enumerate(text.splitlines(), start=1) if line.strip()]
    slots: list[Slot] = []
    pos = 0
    while pos < len(numbered):
        lineno, line = numbered[pos]
        fields = line.split()
        if fields[0] == "F":
            if len(fields) != 3:
                raise LatticeError(f"expected 'F <token> <logp>', line {lineno}")
            try:
                logp = float(fields[2])
            except ValueError:
                raise LatticeError(f"bad logp {fields[2]!r}, line {lineno}") from None
            slots.append(FixedSlot(fields[1], _check_logp(logp, lineno)))
            pos += 1
        elif fields[0] == "C":
            k = _ascii_int(fields[1]) if len(fields) == 2 else None
            if k is None or k < 1:
                raise LatticeError(f"expected 'C <k>' with k >= 1, line {lineno}")
            cands: list[tuple[int, float]] = []
            seen: set[int] = set()
            for off in range(1, k + 1):
                if pos + off >= len(numbered):
                    raise LatticeError(f"choice slot at line {lineno} truncated")
                cl_no, cl = numbered[pos + off]
                parts = cl.split()
                if len(parts) != 2:
                    raise LatticeError(f"expected '<ci> <logp>', line {cl_no}")
                ci = _ascii_int(parts[0])
                if ci is None or not 1 <= ci <= MAX_CHAR_INDEX:
                    raise LatticeError(
                        f"ci must be an integer in 1..{MAX_CHAR_INDEX}, line {cl_no}"
                    )
                if ci in seen:
                    raise LatticeError(f"duplicate ci {ci} in slot, line {cl_no}")
                seen.add(ci)
                try:
                    logp = float(parts[1])
                except ValueError:
                    raise LatticeError(f"bad logp {parts[1]!r}, line {cl_no}") from None
                cands.append((ci, _check_logp(logp, cl_no)))
            peak = max(lp for _, lp in cands)
            mass = peak + math.log(sum(math.exp(lp - peak) for _, lp in cands))
            if mass > MASS_TOLERANCE:
                raise LatticeError(
                    f"candidate mass exceeds 1 (log-sum-exp {mass:.3g}), line {lineno}"
                )
            cands.sort(key=lambda c: (-c[1], c[0]))
            slots.append(ChoiceSlot(tuple(cands)))
            pos += k + 1
        else:
            raise LatticeError(f"expected slot marker 'F' or 'C', line {lineno}")

    if mode is None:
        mode = SymbolMode.INT
        for slot in slots:
            if isinstance(slot, FixedSlot) and any(
                is_tone_symbol(c) or is_ci_symbol(c) for c in slot.token
            ):
                mode = SymbolMode.MS
                break
    return EmissionLattice(tuple(slots), mode)


def _seq_of(node: tuple | None) -> list[int]:
    out: list[int] = []
    while node is not None:
        node, ci = node
        out.append(ci)
    out.reverse()
    return out


def _resolve_ties(exts: list[tuple[float, tuple | None, int]]) -> None:
    # Equal scores are rare; only then is the lexicographic ci-sequence order
    # materialized and enforced.
    i = 0
    n = len(exts)
    while i < n:
        j = i + 1
        while j < n and exts[j][0] == exts[i][0]:
            j += 1
        if j - i > 1:
            exts[i:j] = sorted(exts[i:j], key=lambda e: _seq_of(e[1]) + [e[2]])
        i = j


def _build_units(
    slots: Sequence[Slot], choices: Sequence[int], mode: SymbolMode
) -> tuple[str, ...]:
    units: list[str] = []
    current: str | None = None
    it = iter(choices)
    for slot in slots:
        if isinstance(slot, FixedSlot):
            if current is not None:
                units.append(current)
            current = slot.token
        else:
            rendered = ci_text(next(it), mode)
            current = rendered if current is None else current + rendered
    if current is not None:
        units.append(current)
    return tuple(units)


def ci_beam_search(lattice: EmissionLattice, cfg: RescoreConfig) -> list[Hypothesis]:
    """Exact top-n_best surface sequences by summed logp.

    Fixed slots contribute a constant shared by every hypothesis; choice
    slots expand the frontier, which keeps the best beam_width partial sums.
    Output is sorted by descending acoustic logp, ties broken by the
    lexicographically smaller ci sequence.
    """
    fixed_sum = 0.0
    # A partial is (choice score, node); node chains (parent, ci) pairs.
    frontier: list[tuple[float, tuple | None]] = [(0.0, None)]
    width = cfg.beam_width
    score_of = itemgetter(0)
    for slot in lattice.slots:
        if isinstance(slot, FixedSlot):
            fixed_sum += slot.logp
            continue
        if not slot.candidates:
            raise LatticeError("choice slot with no candidates")
        exts = [
            (score + lp, node, ci)
            for score, node in frontier
            for ci, lp in slot.candidates
        ]
        exts.sort(key=score_of, reverse=True)
        _resolve_ties(exts)
        del exts[width:]
        frontier = [(score, (node, ci)) for score, node, ci in exts]

    hyps: list[Hypothesis] = []
    for score, node in frontier[: cfg.n_best]:
        cis = tuple(_seq_of(node))
        hyps.append(
            Hypothesis(
                units=_build_units(lattice.slots, cis, lattice.mode),
                ci_choices=cis,
                acoustic_logp=fixed_sum + score,
                mode=lattice.mode,
            )
        )
    return hyps


def decode_hypothesis(hyp: Hypothesis, pair: DictionaryPair) -> str:
    """Character string of a hypothesis via the decode dictionary."""
    return decode_text(" ".join(hyp.units), pair, hyp.mode)


def fuse_and_rerank(
    hyps: Sequence[Hypothesis],
    lm_score: Callable[[str], float],
    pair: DictionaryPair,
    lm_weight: float,
) -> list[Hypothesis]:
    """Score each hypothesis once with the LM and re-sort by fused score.

    No length normalization and no token-count penalty apply: all hypotheses
    from one lattice have the same number of units. With weight 0 the input
    (acoustic) order is preserved exactly.
    """
    if lm_weight < 0:
        raise ValueError(f"lm_weight must be >= 0: {lm_weight}")
    scored: list[Hypothesis] = []
    for rank, hyp in enumerate(hyps, start=1):
        try:
            text = decode_hypothesis(hyp, pair)
        except CodecError as exc:
            raise CodecError(f"hypothesis {rank}: {exc}") from exc
        lm_logp = lm_score(text)
        scored.append(
            replace(hyp, lm_logp=lm_logp, fused_score=hyp.acoustic_logp + lm_weight * lm_logp)
        )
    scored.sort(key=lambda h: -h.fused_score)
    return scored


def format_nbest(hyps: Sequence[Hypothesis], pair: DictionaryPair) -> str:
    """TSV report: rank, acoustic, lm, fused, decoded text, surface units."""
    lines = []
    for rank, hyp in enumerate(hyps, start=1):
        lm = f"{hyp.lm_logp:.6f}" if hyp.lm_logp is not None else "-"
        fused = f"{hyp.fused_score:.6f}" if hyp.fused_score is not None else "-"
        lines.append(
            f"{rank}\t{hyp.acoustic_logp:.6f}\t{lm}\t{fused}\t"
            f"{decode_hypothesis(hyp, pair)}\t{' '.join(hyp.units)}"
        )
    return "\n".join(lines) + ("\n" if lines else "")
