"""Multi-command entry point: dictionary building, encode/decode, tokenizer
training and application, LM training, beam search with rescoring, and CER
scoring.

Exit codes: 0 success, 1 usage error, 2 data or format error (the message on
standard error names the file and line where possible). encode, decode,
tokenize and detokenize are line-oriented stdin-to-stdout filters so the
stages compose as shell pipelines.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import codec, decoder, lexicon, lm, metrics, tokenizer
from .errors import PuceError


class _UsageError(Exception):
    """Bad flag values or combinations; exits 1 like argparse errors."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; usage errors must exit 1 here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PuceError(f"cannot read {path}: {exc}") from exc


def _write(path: str, content: str) -> None:
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as exc:
        raise PuceError(f"cannot write {path}: {exc}") from exc


def _load_pair(dict_dir: str) -> lexicon.DictionaryPair:
    root = Path(dict_dir)
    return lexicon.deserialize_dictionaries(
        _read(str(root / "decode.dict")), _read(str(root / "encode.dict"))
    )


def _parse_annotations(path: str) -> dict[str, lexicon.TonalSyllable]:
    overrides: dict[str, lexicon.TonalSyllable] = {}
    for lineno, line in enumerate(_read(path).splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        char, _, pron = line.partition("\t")
        pron = pron.strip()
        if len(char) != 1 or not pron:
            raise PuceError(f"{path} line {lineno}: expected <char><TAB><base><tone>")
        base, digit = pron[:-1], pron[-1]
        if digit not in "12345":
            raise PuceError(f"{path} line {lineno}: bad pronunciation {pron!r}")
        try:
            overrides[char] = lexicon.TonalSyllable(base, int(digit))
        except ValueError as exc:
            raise PuceError(f"{path} line {lineno}: {exc}") from exc
    return overrides


def _worker_count() -> int:
    raw = os.environ.get("PUCE_THREADS", "").strip()
    if not raw:
        return 0
    try:
        value = int(raw)
    except ValueError:
        raise PuceError(f"PUCE_THREADS must be an integer: {raw!r}") from None
    return max(value, 0)


def _stdin_lines() -> list[str]:
    return sys.stdin.read().splitlines()


def _cmd_build_dict(args) -> int:
    entries = lexicon.parse_lexicon(_read(args.lexicon))
    frequencies = None
    if args.sort_by_frequency:
        frequencies = lexicon.parse_frequency_table(_read(args.sort_by_frequency))
    pair = lexicon.build_dictionaries(entries, frequencies)
    decode_text, encode_text = lexicon.serialize_dictionaries(pair)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(str(out / "decode.dict"), decode_text)
    _write(str(out / "encode.dict"), encode_text)
    return 0


def _cmd_encode(args) -> int:
    pair = _load_pair(args.dict)
    mode = codec.SymbolMode.from_name(args.mode)
    annotations = _parse_annotations(args.annotations) if args.annotations else None
    for lineno, line in enumerate(_stdin_lines(), start=1):
        try:
            print(codec.encode_text(line, pair, mode, args.oov, annotations))
        except PuceError as exc:
            raise PuceError(f"<stdin> line {lineno}: {exc}") from exc
    return 0


def _cmd_decode(args) -> int:
    pair = _load_pair(args.dict)
    mode = codec.SymbolMode.from_name(args.mode)
    for lineno, line in enumerate(_stdin_lines(), start=1):
        try:
            print(codec.decode_text(line, pair, mode))
        except PuceError as exc:
            raise PuceError(f"<stdin> line {lineno}: {exc}") from exc
    return 0


def _cmd_train_tokenizer(args) -> int:
    lines = _read(args.input).splitlines()
    model = tokenizer.train_tokenizer(lines, args.vocab_size, codec.SymbolMode.from_name(args.mode))
    _write(args.out, tokenizer.save_tokenizer(model))
    return 0


def _cmd_tokenize(args) -> int:
    model = tokenizer.load_tokenizer(_read(args.model))
    for line in _stdin_lines():
        if args.ids:
            print(" ".join(str(i) for i in tokenizer.tokenize(line, model)))
        else:
            print(" ".join(tokenizer.tokenize_to_tokens(line, model)))
    return 0


def _cmd_detokenize(args) -> int:
    model = tokenizer.load_tokenizer(_read(args.model))
    for lineno, line in enumerate(_stdin_lines(), start=1):
        pieces = [p for p in line.split(" ") if p]
        try:
            if args.ids:
                print(tokenizer.detokenize((int(p) for p in pieces), model))
            else:
                print(tokenizer.detokenize_tokens(pieces))
        except (PuceError, ValueError) as exc:
            raise PuceError(f"<stdin> line {lineno}: {exc}") from exc
    return 0


def _cmd_vocab_report(args) -> int:
    lines = _read(args.input).splitlines()
    if args.input_mode:
        input_mode = codec.SymbolMode.from_name(args.input_mode)
    else:
        input_mode = tokenizer.detect_mode(lines)
    report = tokenizer.vocab_report(
        lines,
        codec.SymbolMode.from_name(args.ti),
        codec.SymbolMode.from_name(args.ci),
        input_mode,
    )
    print(f"letters {len(report.letters)}")
    print(f"tones {len(report.tone_atoms)}")
    print(f"ci {len(report.ci_atoms)}")
    print(f"other {len(report.other_atoms)}")
    print(f"minimum {report.minimum}")
    return 0


def _cmd_train_lm(args) -> int:
    if args.order < 1 or args.k <= 0:
        raise _UsageError("need --order >= 1 and --k > 0")
    lines = _read(args.input).splitlines()
    if not lines:
        raise PuceError(f"{args.input}: empty corpus")
    model = lm.train_lm(lines, args.order, args.k)
    _write(args.out, lm.save_lm(model))
    return 0


def _cmd_beam(args) -> int:
    if (args.lm is None) != (args.lambda_ is None and args.lambda_preset is None):
        # --lm and a lambda choice travel together
        raise _UsageError(
            "rescoring needs both an LM (--lm) and a weight (--lambda or --lambda-preset)"
        )
    if args.n_best < 1 or args.beam_width < args.n_best:
        raise _UsageError("need --n-best >= 1 and --beam-width >= --n-best")
    pair = _load_pair(args.dict)
    mode = codec.SymbolMode.from_name(args.mode) if args.mode else None
    lattice = decoder.parse_lattice(_read(args.lattice), mode)
    cfg = decoder.RescoreConfig(n_best=args.n_best, beam_width=args.beam_width)
    hyps = decoder.ci_beam_search(lattice, cfg)
    if args.lm is not None:
        weight = args.lambda_
        if weight is None:
            weight = decoder.LAMBDA_PRESETS[args.lambda_preset]
        model = lm.load_lm(_read(args.lm))
        hyps = decoder.fuse_and_rerank(hyps, model.score, pair, weight)
    sys.stdout.write(decoder.format_nbest(hyps, pair))
    return 0


def _cmd_cer(args) -> int:
    ref_lines = _read(args.ref).splitlines()
    hyp_lines = _read(args.hyp).splitlines()
    if len(ref_lines) != len(hyp_lines):
        raise PuceError(
            f"line count mismatch: {args.ref} has {len(ref_lines)}, "
            f"{args.hyp} has {len(hyp_lines)}"
        )

    def score(pair_: tuple[int, str, str]) -> metrics.CerReport:
        lineno, ref, hyp = pair_
        try:
            return metrics.compute_cer(ref, hyp)
        except PuceError as exc:
            raise PuceError(f"{args.ref} line {lineno}: {exc}") from exc

    jobs = [(i, r, h) for i, (r, h) in enumerate(zip(ref_lines, hyp_lines), start=1)]
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(score, jobs))
    else:
        reports = [score(job) for job in jobs]

    for lineno, report in enumerate(reports, start=1):
        print(
            f"{lineno}\t{report.substitutions}\t{report.deletions}\t"
            f"{report.insertions}\t{report.reference_length}\t{report.cer:.4f}"
        )
    print(
        f"TOTAL\t{sum(r.substitutions for r in reports)}\t"
        f"{sum(r.deletions for r in reports)}\t{sum(r.insertions for r in reports)}\t"
        f"{sum(r.reference_length for r in reports)}\t{metrics.corpus_cer(reports):.4f}"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="puce", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-dict", help="build encode/decode dictionaries from a lexicon")
    p.add_argument("--lexicon", required=True, help="char<TAB>syllable-tone lexicon file")
    p.add_argument("--sort-by-frequency", metavar="COUNTS",
                   help="char<TAB>count file; frequent characters get small indices")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_build_dict)

    p = sub.add_parser("encode", help="encode text lines from stdin")
    p.add_argument("--dict", required=True)
    p.add_argument("--mode", required=True, choices=["ms", "int"])
    p.add_argument("--oov", default="fail", choices=["fail", "pass", "skip"])
    p.add_argument("--annotations", help="char<TAB>pronunciation overrides for polyphones")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="decode encoded lines from stdin")
    p.add_argument("--dict", required=True)
    p.add_argument("--mode", required=True, choices=["ms", "int"])
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("train-tokenizer", help="train the sub-character tokenizer")
    p.add_argument("--input", required=True, help="encoded corpus file")
    p.add_argument("--vocab-size", required=True, type=int)
    p.add_argument("--mode", required=True, choices=["ms", "int"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_tokenizer)

    p = sub.add_parser("tokenize", help="tokenize encoded lines from stdin")
    p.add_argument("--model", required=True)
    p.add_argument("--ids", action="store_true", help="emit token ids instead of strings")
    p.set_defaults(func=_cmd_tokenize)

    p = sub.add_parser("detokenize", help="rebuild encoded lines from stdin tokens")
    p.add_argument("--model", required=True)
    p.add_argument("--ids", action="store_true", help="input is token ids")
    p.set_defaults(func=_cmd_detokenize)

    p = sub.add_parser("vocab-report", help="atom inventory under a tone/ci rendering pair")
    p.add_argument("--input", required=True, help="encoded corpus file")
    p.add_argument("--ti", required=True, choices=["ms", "int"])
    p.add_argument("--ci", required=True, choices=["ms", "int"])
    p.add_argument("--input-mode", choices=["ms", "int"],
                   help="rendering of the input corpus (default: detect)")
    p.set_defaults(func=_cmd_vocab_report)

    p = sub.add_parser("train-lm", help="train the character n-gram LM")
    p.add_argument("--input", required=True, help="text corpus, one sentence per line")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--k", type=float, default=0.1, help="additive smoothing constant")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_lm)

    p = sub.add_parser("beam", help="N-best beam search over an emission lattice")
    p.add_argument("--lattice", required=True)
    p.add_argument("--dict", required=True)
    p.add_argument("--n-best", required=True, type=int)
    p.add_argument("--beam-width", required=True, type=int)
    p.add_argument("--mode", choices=["ms", "int"],
                   help="surface mode of the lattice (default: detect)")
    p.add_argument("--lm", help="LM model file for rescoring")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lambda", dest="lambda_", type=float, help="explicit LM weight")
    group.add_argument("--lambda-preset", choices=sorted(decoder.LAMBDA_PRESETS))
    p.set_defaults(func=_cmd_beam)

    p = sub.add_parser("cer", help="character error rate, per line and corpus")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.set_defaults(func=_cmd_cer)

    return parser


def main(argv: list[str] | None = None) -> int:
    for stream in (sys.stdin, sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"puce: {exc}", file=sys.stderr)
        return 1
    except (PuceError, ValueError) as exc:
        print(f"puce: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
