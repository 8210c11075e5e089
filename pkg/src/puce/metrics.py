"""Character error rate via Levenshtein alignment with unit costs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import CerError


@dataclass(frozen=True)
class CerReport:
    substitutions: int
    deletions: int
    insertions: int
    reference_length: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def cer(self) -> float:
        return self.errors / self.reference_length


def compute_cer(reference: str, hypothesis: str) -> CerReport:
    """Align hypothesis to reference character by character and count edits.

    Among cost-equal alignments the one with the fewest insertions plus
    deletions wins, i.e. substitutions are preferred over insertion/deletion
    pairs. Given that, the split into S/D/I is unique.
    """
    if not reference:
        raise CerError("empty reference")
    # DP over (total cost, deletions + insertions); both components are
    # additive, so lexicographic minimization is safe.
    prev = [(j, j) for j in range(len(hypothesis) + 1)]
    for i, rc in enumerate(reference, start=1):
        cur = [(i, i)]
        for j, hc in enumerate(hypothesis, start=1):
            sub = 0 if rc == hc else 1
            best = min(
                (prev[j - 1][0] + sub, prev[j - 1][1]),
                (prev[j][0] + 1, prev[j][1] + 1),
                (cur[j - 1][0] + 1, cur[j - 1][1] + 1),
            )
            cur.append(best)
        prev = cur
    cost, shift_ops = prev[-1]
    deletions = (shift_ops + len(reference) - len(hypothesis)) // 2
    insertions = shift_ops - deletions
    substitutions = cost - shift_ops
    return CerReport(
        substitutions=substitutions,
        deletions=deletions,
        insertions=insertions,
        reference_length=len(reference),
    )


def corpus_cer(reports: Iterable[CerReport]) -> float:
    """Micro-averaged rate: total errors over total reference characters."""
    errors = 0
    length = 0
    for report in reports:
        errors += report.errors
        length += report.reference_length
    if length == 0:
        raise CerError("no reference characters")
    return errors / length
