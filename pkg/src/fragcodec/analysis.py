"""Paired-symbol validation and dependency-span profiling for each dialect.

A "pair" is anything that must occur twice to be well formed: ring-closure
labels, parentheses, and ``[n*]`` attachment IDs. Spans are measured in
characters between the two occurrences (token distance is kept as well).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field

from fragcodec.errors import SmilesError
from fragcodec.molgraph import tokens as T
from fragcodec.molgraph.tokens import Token, parse_bracket, tokenize

RING = "ring_closure"
PAREN = "parenthesis"
ATTACH = "attach_id"
CATEGORIES = (RING, PAREN, ATTACH)

_SEPARATOR_KINDS = {
    "smiles": {T.DOT},
    "safe": {T.DOT},
    "tsis": {T.DOT, T.CARET_SEP, T.AMP_SEP},
    "tsid": {T.DOT, T.CARET_SEP, T.AMP_SEP},
}


@dataclass
class PairReport:
    balanced: bool
    unpaired_ring_numbers: list[str] = field(default_factory=list)
    unpaired_parens: list[tuple[str, int]] = field(default_factory=list)
    odd_count_labels: list[tuple[str, int]] = field(default_factory=list)
    unpaired_attach_ids: list[int] = field(default_factory=list)
    lexical_error: tuple[int | None, str] | None = None

    @property
    def unpaired_symbols(self) -> set[str]:
        """Flat set of offending symbols, e.g. ``{')', '2', '3'}``."""
        out = set(self.unpaired_ring_numbers)
        out.update(label for label, _ in self.odd_count_labels)
        out.update(sym for sym, _ in self.unpaired_parens)
        out.update(f"[{n}*]" for n in self.unpaired_attach_ids)
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["unpaired_parens"] = [{"symbol": s, "position": p} for s, p in self.unpaired_parens]
        d["odd_count_labels"] = [{"label": s, "count": c} for s, c in self.odd_count_labels]
        d["lexical_error"] = (
            None if self.lexical_error is None
            else {"position": self.lexical_error[0], "message": self.lexical_error[1]}
        )
        d["unpaired_symbols"] = sorted(self.unpaired_symbols)
        return d


@dataclass
class PairStats:
    pair_count: int = 0
    mean_span: float = 0.0
    max_span: int = 0
    mean_token_span: float = 0.0
    max_token_span: int = 0
    cross_fragment: int = 0


@dataclass
class DependencyProfile:
    string_length: int
    stats: dict[str, PairStats] = field(default_factory=dict)
    cross_fragment_pairs: int = 0
    balanced: bool = True

    def to_dict(self) -> dict:
        return {
            "string_length": self.string_length,
            "balanced": self.balanced,
            "cross_fragment_pairs": self.cross_fragment_pairs,
            **{name: asdict(s) for name, s in self.stats.items()},
        }


@dataclass
class _Pair:
    category: str
    label: str
    first: int  # character positions of the paired symbols
    second: int
    first_token: int
    second_token: int


def _label_position(tok: Token) -> int:
    return tok.position + (1 if tok.bond else 0)


def _scan(tokens: list[Token], dialect: str):
    """Pair symbols; returns (pairs, open ring labels, unpaired parens, ring label counts, attach counts)."""
    cross_dot = dialect == "safe"
    separators = _SEPARATOR_KINDS[dialect]
    pairs: list[_Pair] = []
    open_rings: dict[str, tuple[int, int]] = {}
    unpaired_rings: list[str] = []
    parens: list[tuple[int, int]] = []
    bad_parens: list[tuple[str, int]] = []
    label_counts: Counter[str] = Counter()
    attach: dict[int, list[tuple[int, int]]] = {}

    def flush_rings() -> None:
        for label in open_rings:
            unpaired_rings.append(label)
        open_rings.clear()

    for ti, tok in enumerate(tokens):
        kind = tok.kind
        if kind == T.RING_CLOSURE:
            label = _normal_label(tok)
            label_counts[label] += 1
            pos = _label_position(tok)
            if label in open_rings:
                p0, t0 = open_rings.pop(label)
                pairs.append(_Pair(RING, label, p0, pos, t0, ti))
            else:
                open_rings[label] = (pos, ti)
        elif kind == T.OPEN_PAREN:
            parens.append((tok.position, ti))
        elif kind == T.CLOSE_PAREN:
            if parens:
                p0, t0 = parens.pop()
                pairs.append(_Pair(PAREN, "()", p0, tok.position, t0, ti))
            else:
                bad_parens.append((")", tok.position))
        elif kind in separators:
            bad_parens.extend(("(", p) for p, _ in parens)
            parens.clear()
            if not (cross_dot and kind == T.DOT):
                flush_rings()
        elif kind == T.BRACKET_ATOM and dialect in ("tsis", "tsid"):
            info = parse_bracket(tok.text, tok.position)
            if info.element == "*" and info.isotope is not None:
                attach.setdefault(info.isotope, []).append((tok.position, ti))
    flush_rings()
    bad_parens.extend(("(", p) for p, _ in parens)
    for attach_id, seen in attach.items():
        if len(seen) == 2:
            (p0, t0), (p1, t1) = seen
            pairs.append(_Pair(ATTACH, f"[{attach_id}*]", p0, p1, t0, t1))
    return pairs, unpaired_rings, bad_parens, label_counts, attach


def _normal_label(tok: Token) -> str:
    n = tok.number
    return str(n) if n < 10 else f"%{n}"


def _paren_fallback(s: str) -> list[tuple[str, int]]:
    """Character-level parenthesis check used when the string does not tokenize."""
    bad: list[tuple[str, int]] = []
    stack: list[int] = []
    in_bracket = False
    for i, ch in enumerate(s):
        if ch == "[":
            in_bracket = True
        elif ch == "]":
            in_bracket = False
        elif in_bracket:
            continue
        elif ch == "(":
            stack.append(i)
        elif ch == ")":
            if stack:
                stack.pop()
            else:
                bad.append((")", i))
    bad.extend(("(", p) for p in stack)
    return bad


def validate_pairs(s: str, dialect: str) -> PairReport:
    """Report every symbol that fails to pair.

    Ring labels pair first-open/first-close and may be reused afterwards;
    labels still open at the end of their scope are reported, as are labels
    with an odd total count. SAFE lets labels pair across ``.``; every other
    dialect closes the scope at each separator.
    """
    try:
        tokens = tokenize(s, dialect)
    except SmilesError as exc:
        return PairReport(
            balanced=False,
            unpaired_parens=sorted(_paren_fallback(s), key=lambda x: x[1]),
            lexical_error=(exc.position, str(exc)),
        )
    _, open_rings, bad_parens, counts, attach = _scan(tokens, dialect)
    odd = sorted(((label, c) for label, c in counts.items() if c % 2), key=_label_key)
    bad_ids = sorted(n for n, seen in attach.items() if len(seen) != 2)
    report = PairReport(
        balanced=False,
        unpaired_ring_numbers=sorted(dict.fromkeys(open_rings), key=lambda x: _label_key((x, 0))),
        unpaired_parens=sorted(bad_parens, key=lambda x: x[1]),
        odd_count_labels=odd,
        unpaired_attach_ids=bad_ids,
    )
    report.balanced = not (report.unpaired_ring_numbers or report.unpaired_parens
                           or report.odd_count_labels or report.unpaired_attach_ids)
    return report


def _label_key(item: tuple[str, int]) -> int:
    return int(item[0].lstrip("%"))


def dependency_profile(s: str, dialect: str) -> DependencyProfile:
    """Span statistics per pair category; unbalanced input still gets its length."""
    profile = DependencyProfile(string_length=len(s))
    try:
        tokens = tokenize(s, dialect)
    except SmilesError:
        profile.balanced = False
        return profile
    pairs, open_rings, bad_parens, _, attach = _scan(tokens, dialect)
    profile.balanced = not (open_rings or bad_parens
                            or any(len(v) != 2 for v in attach.values()))
    separators = _SEPARATOR_KINDS[dialect]
    # fragment index of every character offset
    fragment_at = [0] * (len(s) + 1)
    seps = sorted(t.position for t in tokens if t.kind in separators)
    f = 0
    j = 0
    for pos in range(len(s) + 1):
        while j < len(seps) and seps[j] < pos:
            f += 1
            j += 1
        fragment_at[pos] = f
    for cat in CATEGORIES:
        chosen = [p for p in pairs if p.category == cat]
        stats = PairStats(pair_count=len(chosen))
        if chosen:
            spans = [p.second - p.first for p in chosen]
            tspans = [p.second_token - p.first_token for p in chosen]
            stats.mean_span = sum(spans) / len(spans)
            stats.max_span = max(spans)
            stats.mean_token_span = sum(tspans) / len(tspans)
            stats.max_token_span = max(tspans)
            stats.cross_fragment = sum(
                fragment_at[p.first] != fragment_at[p.second] for p in chosen
            )
        profile.stats[cat] = stats
        profile.cross_fragment_pairs += stats.cross_fragment
    return profile


def pair_spans(s: str, dialect: str, label: str) -> list[int]:
    """Character spans of every completed pair carrying ``label`` (e.g. ``"6"``)."""
    pairs = _scan(tokenize(s, dialect), dialect)[0]
    return [p.second - p.first for p in pairs if p.label == label]
