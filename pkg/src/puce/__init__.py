"""Pronunciation-aware unique character encoding for Mandarin ASR.

Each character becomes ((base syllable, tone), character index): homophones
share the pronunciation part and differ only in the index, so model outputs
map back to text through a one-to-one lookup. The package provides the
lexicon-driven dictionaries, the meta-symbol/integer text codec, the
sub-character tokenizer, a character-index beam search with external-LM
rescoring, an n-gram LM, and CER scoring.
"""

from .codec import (
    Passthrough,
    SymbolMode,
    ci_from_symbol,
    ci_symbol,
    decode_text,
    encode_text,
    parse_unit,
    render_unit,
    tone_from_symbol,
    tone_symbol,
)
from .decoder import (
    LAMBDA_PRESETS,
    ChoiceSlot,
    EmissionLattice,
    FixedSlot,
    Hypothesis,
    RescoreConfig,
    ci_beam_search,
    decode_hypothesis,
    format_nbest,
    fuse_and_rerank,
    parse_lattice,
)
from .errors import (
    CerError,
    CodecError,
    LatticeError,
    LexiconError,
    LmError,
    PuceError,
    TokenizerError,
)
from .lexicon import (
    MAX_CHAR_INDEX,
    DictionaryPair,
    LexiconEntry,
    PuceCode,
    TonalSyllable,
    build_dictionaries,
    deserialize_dictionaries,
    parse_lexicon,
    serialize_dictionaries,
)
from .lm import NGramModel, load_lm, save_lm, train_lm
from .metrics import CerReport, compute_cer, corpus_cer
from .tokenizer import (
    TokenizerModel,
    VocabReport,
    detokenize,
    detokenize_tokens,
    load_tokenizer,
    save_tokenizer,
    tokenize,
    tokenize_to_tokens,
    train_tokenizer,
    vocab_report,
)

__version__ = "0.1.0"
