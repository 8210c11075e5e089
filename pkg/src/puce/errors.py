"""Exception hierarchy shared across the package.

Everything data- or format-related derives from PuceError so the CLI can map
it to a single exit code. Programming errors (bad arguments to library
functions) raise ValueError/TypeError as usual.
"""


class PuceError(Exception):
    """Base class for data and format errors."""


class LexiconError(PuceError):
    """Malformed lexicon or dictionary files, capacity overflows."""


class CodecError(PuceError):
    """Encode/decode failures: OOV characters, unparseable units, unknown codes."""


class TokenizerError(PuceError):
    """Tokenizer training or model-file errors."""


class LatticeError(PuceError):
    """Emission-lattice parse or validation errors."""


class LmError(PuceError):
    """Language-model training or model-file errors."""


class CerError(PuceError):
    """Scoring errors, e.g. an empty reference."""
