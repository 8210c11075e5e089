from __future__ import annotations

import pytest

from helpers import fixture_corpus
from puce.codec import SymbolMode, ci_symbol, tone_symbol
from puce.errors import TokenizerError
from puce.tokenizer import (
    SEP_TOKEN,
    SPECIAL_TOKENS,
    detect_mode,
    detokenize,
    detokenize_tokens,
    load_tokenizer,
    save_tokenizer,
    tokenize,
    tokenize_to_tokens,
    train_tokenizer,
    vocab_report,
)

MS = SymbolMode.MS
INT = SymbolMode.INT

T1 = tone_symbol(1)
C1 = ci_symbol(1)


class TestTraining:
    def test_fixture_minimum_inventory(self):
        # 8 letters {a,e,i,l,m,n,u,y} + 5 tone symbols + 2 ci symbols
        model = train_tokenizer(fixture_corpus(MS), 15, MS)
        assert len(model.vocab) - len(SPECIAL_TOKENS) == 15
        assert model.merges == ()
        letters = {t for t in model.vocab if t.isascii() and len(t) == 1 and t.isalpha()}
        assert letters == set("aeilmnuy")

    def test_repeated_unit_merges(self):
        corpus = ["ma" + T1 + C1] * 100
        model = train_tokenizer(corpus, 4 + 2, MS)
        assert model.merges == (("m", "a"), ("ma", T1))
        assert tokenize_to_tokens("ma" + T1 + C1, model) == ["ma" + T1, C1]

    def test_target_below_minimum(self):
        with pytest.raises(TokenizerError, match=r"minimum inventory is 15 \(\+specials\)"):
            train_tokenizer(fixture_corpus(MS), 3, MS)

    def test_ci_never_merges(self):
        corpus = ["ma" + T1 + C1] * 100
        model = train_tokenizer(corpus, 100, MS)
        for left, right in model.merges:
            assert C1 not in left and C1 not in right
        for token in model.vocab[len(SPECIAL_TOKENS):]:
            if C1 in token:
                assert token == C1

    def test_merge_stops_below_two_occurrences(self):
        model = train_tokenizer(["ma" + T1 + C1], 100, MS)
        assert model.merges == ()

    def test_int_mode_tone_digit_merges_but_ci_does_not(self):
        corpus = ["ma1#1"] * 50
        model = train_tokenizer(corpus, 3 + 2, INT)
        assert ("m", "a") in model.merges
        assert tokenize_to_tokens("ma1#1", model)[-2:] == ["#", "1"]


class TestRoundTrip:
    def test_empty_line(self):
        model = train_tokenizer(fixture_corpus(MS), 15, MS)
        assert tokenize("", model) == []
        assert detokenize([], model) == ""

    @pytest.mark.parametrize("mode", [MS, INT])
    def test_fixture_lossless(self, mode):
        corpus = fixture_corpus(mode)
        model = train_tokenizer(corpus, 40, mode)
        for line in corpus:
            assert detokenize(tokenize(line, model), model) == line

    def test_ci_symbols_stay_atomic_in_output(self):
        corpus = fixture_corpus(MS) * 5
        model = train_tokenizer(corpus, 30, MS)
        for line in corpus:
            for token in tokenize_to_tokens(line, model):
                if any(ci_symbol(i) in token for i in (1, 2)):
                    assert len(token) == 1

    def test_multi_unit_line_boundaries(self):
        corpus = fixture_corpus(MS)
        model = train_tokenizer(corpus, 15, MS)
        line = corpus[0] + " " + corpus[1] + " " + corpus[2]
        tokens = tokenize_to_tokens(line, model)
        assert tokens.count(SEP_TOKEN) == 2
        assert detokenize_tokens(tokens) == line

    def test_unknown_atom_maps_to_unk(self):
        model = train_tokenizer(["ma" + T1 + C1], 4, MS)
        ids = tokenize("zu" + T1 + C1, model)
        assert 0 in ids  # unknown id, never a crash

    def test_monotone_coverage(self):
        corpus = fixture_corpus(MS) * 3
        line = " ".join(fixture_corpus(MS))
        sizes = [len(tokenize(line, train_tokenizer(corpus, t, MS))) for t in (15, 17, 20, 25)]
        assert sizes == sorted(sizes, reverse=True)


class TestVocabReport:
    def test_ms_ms(self):
        report = vocab_report(fixture_corpus(MS), MS, MS, MS)
        assert report.minimum == 15

    def test_ms_int(self):
        report = vocab_report(fixture_corpus(MS), MS, INT, MS)
        assert report.minimum == 16
        assert report.ci_atoms == frozenset({"#", "1", "2"})

    def test_int_int_digit_overlap(self):
        report = vocab_report(fixture_corpus(MS), INT, INT, MS)
        assert report.minimum == 14  # tone digits and ci digits share atoms

    def test_large_ci_makes_ms_exceed_int(self):
        # Full coverage of ci 1..12: twelve distinct symbols vs '#' + ten digits
        lines = [f"ma3#{i}" for i in range(1, 13)]
        ms = vocab_report(lines, MS, MS, INT)
        mixed = vocab_report(lines, MS, INT, INT)
        assert ms.minimum > mixed.minimum

    def test_detect_mode(self):
        assert detect_mode(fixture_corpus(MS)) is MS
        assert detect_mode(fixture_corpus(INT)) is INT
        with pytest.raises(TokenizerError, match="mixes"):
            detect_mode([fixture_corpus(MS)[0] + " " + fixture_corpus(INT)[0]])


class TestModelFile:
    @pytest.mark.parametrize("mode", [MS, INT])
    def test_save_load_round_trip(self, mode):
        model = train_tokenizer(fixture_corpus(mode) * 4, 25, mode)
        loaded = load_tokenizer(save_tokenizer(model))
        assert loaded == model
        line = " ".join(fixture_corpus(mode)[:3])
        assert tokenize(line, loaded) == tokenize(line, model)

    def test_header_validated(self):
        with pytest.raises(TokenizerError, match="header"):
            load_tokenizer("vocab=3 mode=MS\n")

    def test_specials_required(self):
        model = train_tokenizer(fixture_corpus(MS), 15, MS)
        text = save_tokenizer(model).replace("<pad>", "<oops>")
        with pytest.raises(TokenizerError, match="reserved"):
            load_tokenizer(text)
