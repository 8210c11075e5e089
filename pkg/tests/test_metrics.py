from __future__ import annotations

import random

import pytest

from puce.errors import CerError
from puce.metrics import compute_cer, corpus_cer


def brute_force_distance(ref: str, hyp: str) -> int:
    # Independent plain cost-only Levenshtein.
    prev = list(range(len(hyp) + 1))
    for i, rc in enumerate(ref, 1):
        cur = [i]
        for j, hc in enumerate(hyp, 1):
            cur.append(min(prev[j - 1] + (rc != hc), prev[j] + 1, cur[-1] + 1))
        prev = cur
    return prev[-1]


class TestComputeCer:
    def test_identity(self):
        report = compute_cer("语音", "语音")
        assert report.cer == 0.0
        assert (report.substitutions, report.deletions, report.insertions) == (0, 0, 0)

    def test_substitution(self):
        report = compute_cer("语音识别", "语音识巴")
        assert (report.substitutions, report.deletions, report.insertions) == (1, 0, 0)
        assert report.cer == 0.25

    def test_deletion(self):
        report = compute_cer("abc", "ab")
        assert (report.substitutions, report.deletions, report.insertions) == (0, 1, 0)
        assert report.cer == pytest.approx(1 / 3)

    def test_insertion(self):
        report = compute_cer("ab", "axb")
        assert (report.substitutions, report.deletions, report.insertions) == (0, 0, 1)

    def test_empty_hypothesis(self):
        report = compute_cer("abc", "")
        assert report.deletions == 3
        assert report.cer == 1.0

    def test_empty_reference_rejected(self):
        with pytest.raises(CerError, match="empty reference"):
            compute_cer("", "abc")

    def test_substitutions_preferred_over_shift_pairs(self):
        # "ab" -> "ba" has a cost-2 alignment with one deletion and one
        # insertion; two substitutions must win.
        report = compute_cer("ab", "ba")
        assert (report.substitutions, report.deletions, report.insertions) == (2, 0, 0)

    def test_total_errors_equal_edit_distance(self):
        rng = random.Random(17)
        alphabet = "语音识别abcde"
        for _ in range(300):
            ref = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 15)))
            hyp = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 15)))
            report = compute_cer(ref, hyp)
            assert report.errors == brute_force_distance(ref, hyp)
            assert report.deletions - report.insertions == len(ref) - len(hyp)


def test_corpus_micro_average():
    reports = [compute_cer("abcd", "abcd"), compute_cer("ab", "ba"), compute_cer("abc", "a")]
    total_errors = sum(r.errors for r in reports)
    total_len = sum(r.reference_length for r in reports)
    assert corpus_cer(reports) == total_errors / total_len
