"""Desk-scale distribution-learning benchmark.

A seeded token n-gram model stands in for a neural generator; generated
strings are scored with Valid / Unique / Novelty / Nov÷Uni and per-descriptor
KL divergence against the training corpus.
"""

from __future__ import annotations

import bisect
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from fragcodec.codecs import decode, encode
from fragcodec.errors import BinningMismatch, CodecError, EmptyCorpus, EmptyGeneration, SmilesError
from fragcodec.fragmenter import CutSet
from fragcodec.molgraph import canonical_smiles, descriptors, parse_smiles, tokenize
from fragcodec.molgraph.props import Descriptors

BOS = "<s>"
EOS = "</s>"
KLD_EPSILON = 1e-9
DESCRIPTOR_NAMES = ("heavy_atoms", "ring_count", "aromatic_fraction", "mol_weight")


# -- corpora --------------------------------------------------------------------

@dataclass
class Corpus:
    lines: list[str]
    dialect: str
    canonical_set: set[str] = field(default_factory=set)
    properties: list[Descriptors] = field(default_factory=list)
    skipped: int = 0

    @classmethod
    def from_lines(cls, lines: list[str], dialect: str) -> Corpus:
        if not lines:
            raise EmptyCorpus("corpus has no records")
        corpus = cls(list(lines), dialect)
        for line in corpus.lines:
            try:
                g = decode(line, dialect)
            except CodecError:
                corpus.skipped += 1
                continue
            corpus.canonical_set.add(canonical_smiles(g))
            corpus.properties.append(descriptors(g))
        return corpus


def read_records(path: str | Path) -> list[str]:
    """One record per line; a tab-separated trailing ID is dropped, blank lines ignored."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            record = raw.rstrip("\r\n").split("\t", 1)[0]
            if record.strip():
                out.append(record)
    return out


def load_corpus(path: str | Path, dialect: str) -> Corpus:
    return Corpus.from_lines(read_records(path), dialect)


def encode_lines(smiles: list[str], dialect: str, cuts: CutSet | None = None) -> list[str]:
    """Encode SMILES records, silently dropping ones that fail to parse or encode."""
    out = []
    for s in smiles:
        try:
            out.append(encode(parse_smiles(s), dialect, cuts).text)
        except CodecError:
            continue
    return out


# -- n-gram generator -------------------------------------------------------------

@dataclass
class NGramModel:
    order: int
    smoothing: float
    dialect: str
    vocab: list[str]
    counts: dict[tuple[str, ...], Counter]
    _rows: dict[tuple[str, ...], tuple[list[str], list[float]]] = field(
        default_factory=dict, repr=False
    )

    def row(self, context: tuple[str, ...]) -> tuple[list[str], list[float]]:
        """Tokens and cumulative weights for the next-token distribution."""
        cached = self._rows.get(context)
        if cached is not None:
            return cached
        seen = self.counts.get(context)
        if self.smoothing > 0 or not seen:
            alpha = self.smoothing if seen else 1.0
            tokens = self.vocab
            weights = [(seen.get(t, 0) if seen else 0) + alpha for t in tokens]
        else:
            tokens = sorted(seen)
            weights = [seen[t] for t in tokens]
        cum = []
        total = 0.0
        for w in weights:
            total += w
            cum.append(total)
        self._rows[context] = (tokens, cum)
        return tokens, cum

    def prob(self, context: tuple[str, ...], token: str) -> float:
        tokens, cum = self.row(context)
        try:
            i = tokens.index(token)
        except ValueError:
            return 0.0
        return (cum[i] - (cum[i - 1] if i else 0.0)) / cum[-1]

    def context_of(self, history: list[str]) -> tuple[str, ...]:
        padded = [BOS] * self.order + history
        return tuple(padded[-self.order:])

    def nll(self, lines: list[str]) -> float:
        """Mean negative log-likelihood per token (EOS included)."""
        total = 0.0
        steps = 0
        for line in lines:
            history: list[str] = []
            for tok in [t.text for t in tokenize(line, self.dialect)] + [EOS]:
                p = self.prob(self.context_of(history), tok)
                total += -math.log(p) if p > 0 else math.inf
                steps += 1
                history.append(tok)
        return total / steps


def train_ngram(c: Corpus, order: int = 5, smoothing: float = 0.0) -> NGramModel:
    """Count next-token frequencies given the ``order`` preceding tokens.

    Contexts are left-padded with BOS, so with ``order=2`` the token after
    the first ``C`` of ``CC`` is conditioned on ``(BOS, C)``, not on ``C``
    alone. Lines that do not tokenize are ignored.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    counts: dict[tuple[str, ...], Counter] = defaultdict(Counter)
    vocab: set[str] = {EOS}
    trained = 0
    for line in c.lines:
        try:
            toks = [t.text for t in tokenize(line, c.dialect)]
        except SmilesError:
            continue
        trained += 1
        vocab.update(toks)
        padded = [BOS] * order + toks + [EOS]
        for i in range(order, len(padded)):
            counts[tuple(padded[i - order:i])][padded[i]] += 1
    if not trained:
        raise EmptyCorpus("no tokenizable lines to train on")
    return NGramModel(order, smoothing, c.dialect, sorted(vocab), dict(counts))


def sample(m: NGramModel, n: int, max_len: int = 200, seed: int = 0) -> list[str]:
    """Draw ``n`` strings; identical arguments give identical output.

    A string that reaches ``max_len`` tokens is cut there.
    """
    if n < 1 or max_len < 1:
        raise ValueError("n and max_len must be >= 1")
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        history: list[str] = []
        while len(history) < max_len:
            tokens, cum = m.row(m.context_of(history))
            tok = tokens[bisect.bisect_right(cum, rng.random() * cum[-1])]
            if tok == EOS:
                break
            history.append(tok)
        out.append("".join(history))
    return out


# -- metrics ------------------------------------------------------------------------

@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


def histogram(values: list[float], edges: tuple[float, ...]) -> Histogram:
    """Bin ``values`` into ``[e_i, e_{i+1})``; out-of-range values go to the end bins."""
    counts = [0] * (len(edges) - 1)
    last = len(counts) - 1
    for v in values:
        i = bisect.bisect_right(edges, v) - 1
        counts[min(max(i, 0), last)] += 1
    return Histogram(tuple(edges), tuple(counts))


def descriptor_edges(name: str, *value_lists: list[float]) -> tuple[float, ...]:
    if name == "mol_weight":
        return tuple(float(x) for x in range(0, 1001, 10))
    if name == "aromatic_fraction":
        return tuple(i / 10 for i in range(11))
    values = [v for vs in value_lists for v in vs]
    lo = int(min(values)) if values else 0
    hi = int(max(values)) if values else 0
    return tuple(float(x) for x in range(lo, hi + 2))


def kld(p: Histogram, q: Histogram, eps: float = KLD_EPSILON) -> float:
    """KL(p || q) in nats after normalizing and adding ``eps`` to every bin."""
    if p.edges != q.edges:
        raise BinningMismatch("histograms use different bin edges")

    def smooth(h: Histogram) -> list[float]:
        total = h.total
        probs = [c / total if total else 0.0 for c in h.counts]
        z = 1.0 + eps * len(probs) if total else eps * len(probs)
        return [(x + eps) / z for x in probs]

    ps, qs = smooth(p), smooth(q)
    return max(0.0, sum(a * math.log(a / b) for a, b in zip(ps, qs)))


@dataclass
class BenchmarkReport:
    valid: float
    unique: float
    novelty: float
    nov_over_uni: float | None
    kld: dict[str, float]
    aggregate_score: float
    sample_count: int
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "unique": self.unique,
            "novelty": self.novelty,
            "nov_over_uni": self.nov_over_uni,
            "kld": dict(self.kld),
            "aggregate_score": self.aggregate_score,
            "sample_count": self.sample_count,
            "seed": self.seed,
        }

    def to_tsv(self, model: str = "") -> str:
        header = "Model\tValid\tUnique\tNovelty\tKLD\tFCD\tNov./Uni."
        nou = "n/a" if self.nov_over_uni is None else f"{self.nov_over_uni:.3f}"
        row = (f"{model}\t{self.valid:.3f}\t{self.unique:.3f}\t{self.novelty:.3f}\t"
               f"{self.aggregate_score:.3f}\tn/a\t{nou}")
        return header + "\n" + row


def decode_outcomes(gen: list[str], dialect: str) -> list[tuple[object, str | None]]:
    """Decode every generated string; returns ``(graph or None, error name or None)``."""
    out = []
    for s in gen:
        try:
            out.append((decode(s, dialect), None))
        except CodecError as exc:
            out.append((None, type(exc).__name__))
    return out


def evaluate(gen: list[str], train: Corpus, dialect: str | None = None,
             seed: int | None = None) -> BenchmarkReport:
    """Score generated strings against a training corpus.

    valid = decodes to one connected molecule; unique and novelty count
    distinct canonical SMILES, and all three are fractions of ``len(gen)``.
    """
    if not gen:
        raise EmptyGeneration("nothing to evaluate")
    dialect = dialect or train.dialect
    n = len(gen)
    valid = 0
    distinct: set[str] = set()
    props: list[Descriptors] = []
    for g, _ in decode_outcomes(gen, dialect):
        if g is None:
            continue
        valid += 1
        distinct.add(canonical_smiles(g))
        props.append(descriptors(g))
    novel = distinct - train.canonical_set
    unique = len(distinct) / n
    novelty = len(novel) / n
    divergences = {}
    for name in DESCRIPTOR_NAMES:
        gv = [getattr(d, name) for d in props]
        tv = [getattr(d, name) for d in train.properties]
        edges = descriptor_edges(name, gv, tv)
        divergences[name] = kld(histogram(gv, edges), histogram(tv, edges))
    mean = sum(divergences.values()) / len(divergences)
    return BenchmarkReport(
        valid=valid / n,
        unique=unique,
        novelty=novelty,
        nov_over_uni=novelty / unique if unique > 0 else None,
        kld=divergences,
        aggregate_score=math.exp(-mean),
        sample_count=n,
        seed=seed,
    )
