"""Command-line front end.

    fragcodec encode   --dialect tsis --in mols.smi --out mols.tsis
    fragcodec decode   --dialect tsis --in mols.tsis
    fragcodec validate --dialect safe --in strings.txt
    fragcodec profile  --dialect safe --in strings.txt
    fragcodec sample   --dialect tsis --train corpus.tsis --order 5 --n 1000 --seed 0
    fragcodec bench    --dialect tsis --train train.smi --gen gen.txt --format json
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import ExitStack
from typing import Callable, Iterable, TextIO

from fragcodec.analysis import dependency_profile, validate_pairs
from fragcodec.bench import Corpus, evaluate, read_records, sample, train_ngram
from fragcodec.codecs import decode, encode
from fragcodec.errors import CodecError
from fragcodec.fragmenter import CutSet, find_cut_bonds
from fragcodec.molgraph import canonical_smiles, parse_smiles
from fragcodec.molgraph.tokens import DIALECTS

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fragcodec", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--dialect", required=True, choices=DIALECTS)
        p.add_argument("--in", dest="inp", default="-", metavar="PATH")
        p.add_argument("--out", default="-", metavar="PATH")
        p.add_argument("--keep-going", action="store_true")

    enc = sub.add_parser("encode", help="SMILES -> dialect, one line per input line")
    io_args(enc)
    enc.add_argument("--fragmenter", choices=("exocyclic", "explicit"), default="exocyclic")
    enc.add_argument("--cuts", default=None, help='atom-index pairs "a-b,c-d" (explicit fragmenter)')

    for name, help_text in (
        ("decode", "dialect -> canonical SMILES"),
        ("validate", "paired-symbol report per line (JSON lines)"),
        ("profile", "dependency-span profile per line (JSON lines)"),
    ):
        io_args(sub.add_parser(name, help=help_text))

    smp = sub.add_parser("sample", help="train an n-gram model on --train and sample from it")
    smp.add_argument("--dialect", required=True, choices=DIALECTS)
    smp.add_argument("--train", required=True, metavar="PATH")
    smp.add_argument("--out", default="-", metavar="PATH")
    smp.add_argument("--order", type=int, default=5, metavar="K")
    smp.add_argument("--n", type=int, default=1000, metavar="N")
    smp.add_argument("--max-len", type=int, default=200, metavar="L")
    smp.add_argument("--seed", type=int, default=0, metavar="S")
    smp.add_argument("--smoothing", type=float, default=0.0)

    bench = sub.add_parser("bench", help="score generated strings against a training corpus")
    bench.add_argument("--dialect", required=True, choices=DIALECTS)
    bench.add_argument("--train", required=True, metavar="PATH")
    bench.add_argument("--gen", default=None, metavar="PATH",
                       help="generated strings; sampled from an n-gram model when omitted")
    bench.add_argument("--out", default="-", metavar="PATH")
    bench.add_argument("--format", choices=("json", "tsv"), default="json")
    bench.add_argument("--order", type=int, default=5, metavar="K")
    bench.add_argument("--n", type=int, default=1000, metavar="N")
    bench.add_argument("--max-len", type=int, default=200, metavar="L")
    bench.add_argument("--seed", type=int, default=0, metavar="S")
    return parser


def _open_in(stack: ExitStack, path: str) -> TextIO:
    if path == "-":
        return sys.stdin
    return stack.enter_context(open(path, encoding="utf-8"))


def _open_out(stack: ExitStack, path: str) -> TextIO:
    if path == "-":
        return sys.stdout
    return stack.enter_context(open(path, "w", encoding="utf-8"))


def _records(fh: TextIO) -> Iterable[str]:
    for raw in fh:
        yield raw.rstrip("\r\n").split("\t", 1)[0]


def _stream(args, fn: Callable[[str], str]) -> int:
    """Apply ``fn`` line by line; keeps output aligned with input under --keep-going."""
    status = 0
    with ExitStack() as stack:
        src = _open_in(stack, args.inp)
        dst = _open_out(stack, args.out)
        for lineno, record in enumerate(_records(src), start=1):
            try:
                result = fn(record)
            except CodecError as exc:
                print(f"line {lineno}: {type(exc).__name__}: {exc}", file=sys.stderr)
                if not args.keep_going:
                    return 1
                status = 1
                result = ""
            dst.write(result + "\n")
    return 0 if args.keep_going else status


def _encoder(args, explicit: CutSet | None) -> Callable[[str], str]:
    def run(record: str) -> str:
        g = parse_smiles(record)
        cuts = None
        if explicit is not None:
            cuts = find_cut_bonds(g, "explicit", explicit)
        return encode(g, args.dialect, cuts).text

    return run


def _cmd_sample(args) -> int:
    corpus = Corpus(read_records(args.train), args.dialect)
    if not corpus.lines:
        print(f"fragcodec sample: {args.train}: no records", file=sys.stderr)
        return 1
    model = train_ngram(corpus, args.order, args.smoothing)
    with ExitStack() as stack:
        dst = _open_out(stack, args.out)
        for s in sample(model, args.n, args.max_len, args.seed):
            dst.write(s + "\n")
    return 0


def _cmd_bench(args) -> int:
    train = Corpus.from_lines(read_records(args.train), args.dialect)
    if args.gen is not None:
        gen = read_records(args.gen)
        seed = None
    else:
        model = train_ngram(train, args.order)
        gen = sample(model, args.n, args.max_len, args.seed)
        seed = args.seed
    report = evaluate(gen, train, args.dialect, seed=seed)
    with ExitStack() as stack:
        dst = _open_out(stack, args.out)
        if args.format == "json":
            dst.write(json.dumps(report.to_dict(), sort_keys=True) + "\n")
        else:
            dst.write(report.to_tsv(args.dialect) + "\n")
    return 0


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command in ("sample", "bench") and args.order < 1:
        parser.error("--order must be >= 1")
    if args.command in ("sample", "bench") and (args.n < 1 or args.max_len < 1):
        parser.error("--n and --max-len must be >= 1")
    explicit = None
    if args.command == "encode" and args.fragmenter == "explicit":
        if args.cuts is None:
            parser.error("--fragmenter explicit requires --cuts")
        try:
            explicit = CutSet.parse(args.cuts)
        except ValueError as exc:
            parser.error(f"--cuts: {exc}")
    try:
        if args.command == "encode":
            return _stream(args, _encoder(args, explicit))
        if args.command == "decode":
            return _stream(args, lambda r: canonical_smiles(decode(r, args.dialect)))
        if args.command == "validate":
            return _stream(args, lambda r: json.dumps(validate_pairs(r, args.dialect).to_dict()))
        if args.command == "profile":
            return _stream(args, lambda r: json.dumps(dependency_profile(r, args.dialect).to_dict()))
        if args.command == "sample":
            return _cmd_sample(args)
        return _cmd_bench(args)
    except OSError as exc:
        print(f"fragcodec {args.command}: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return 1
    except CodecError as exc:
        print(f"fragcodec {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
