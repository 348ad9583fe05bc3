"""Text-logical-unit (TLU) segmentation.

A TLU is the atomic text span a reasoning-graph node carries. Segmentation
splits a component text at boundary separators:

- hard boundaries: ".", "!", "?" immediately followed by whitespace always
  close the pending span (the punctuation token stays in the span);
- soft boundaries: "," followed by whitespace, and the lowercase connective
  words "and" / "then" delimited by whitespace on both sides, close the
  pending span only when it already holds at least MIN_SOFT_TOKENS tokens
  (separator included). A soft split absorbs an immediately following run of
  connective tokens into the closing span, so "..., and then she sold ..."
  breaks after "then".

A trailing remainder becomes a final span, except that a remainder holding
fewer than MIN_SOFT_TOKENS tokens after a soft split rejoins the span the
split closed ("altogether in April and May?" stays one unit). Sentences
closed by hard boundaries always stand alone. Only these ASCII separators
trigger splits; all other text (any script) flows through untouched.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

MIN_SOFT_TOKENS = 5

_HARD_PUNCT = frozenset({".", "!", "?"})
_CONNECTIVES = frozenset({"and", "then"})
_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)

# Zero-width joiner and variation selectors glue grapheme clusters together;
# a token must never end between a base character and one of these.
_ZWJ = "‍"
_VARIATION_SELECTORS = ("︎", "️")


@dataclass(frozen=True, slots=True)
class Token:
    text: str
    start: int  # character offset into the raw text
    end: int  # exclusive


@dataclass(frozen=True, slots=True)
class TokenizedText:
    raw: str
    tokens: tuple[Token, ...]


@dataclass(frozen=True, slots=True)
class TluSpan:
    """Inclusive token-index range [first, last] of one extracted unit."""

    first: int
    last: int


def _is_cluster_extender(ch: str) -> bool:
    if ch == _ZWJ or ch in _VARIATION_SELECTORS:
        return True
    return unicodedata.combining(ch) != 0 or unicodedata.category(ch) in ("Mn", "Me")


def tokenize(text: str) -> TokenizedText:
    """Split text into word and single-punctuation tokens with offsets.

    Word-character runs form one token each; every other non-space character
    is its own token, except that combining marks, variation selectors and
    zero-width joiners are merged into the adjacent preceding token so that
    no token boundary falls inside a grapheme cluster.
    """
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        piece = m.group()
        if tokens:
            prev = tokens[-1]
            adjacent = prev.end == m.start()
            if adjacent and (_is_cluster_extender(piece[0]) or prev.text.endswith(_ZWJ)):
                tokens[-1] = Token(text[prev.start : m.end()], prev.start, m.end())
                continue
        tokens.append(Token(piece, m.start(), m.end()))
    return TokenizedText(text, tuple(tokens))


def _ws_before(tt: TokenizedText, i: int) -> bool:
    start = tt.tokens[i].start
    return start > 0 and tt.raw[start - 1].isspace()


def _ws_after(tt: TokenizedText, i: int) -> bool:
    end = tt.tokens[i].end
    return end < len(tt.raw) and tt.raw[end].isspace()


def _at_text_end(tt: TokenizedText, i: int) -> bool:
    return tt.raw[tt.tokens[i].end :].strip() == ""


def _is_hard_boundary(tt: TokenizedText, i: int) -> bool:
    return tt.tokens[i].text in _HARD_PUNCT and _ws_after(tt, i)


def _is_soft_boundary(tt: TokenizedText, i: int) -> bool:
    tok = tt.tokens[i]
    if tok.text == ",":
        return _ws_after(tt, i)
    if tok.text in _CONNECTIVES:
        return _ws_before(tt, i) and _ws_after(tt, i)
    return False


def _is_absorbable_connective(tt: TokenizedText, i: int) -> bool:
    # A connective right after a soft split joins the closing span. At the
    # very end of the text "followed by whitespace" is satisfied vacuously,
    # which keeps re-segmentation of an extracted span a no-op.
    tok = tt.tokens[i]
    if tok.text not in _CONNECTIVES:
        return False
    return _ws_before(tt, i) and (_ws_after(tt, i) or _at_text_end(tt, i))


def extract_tlus(tt: TokenizedText) -> list[TluSpan]:
    """Segment tokenized text into TLU spans.

    Every token belongs to exactly one span; concatenating the raw slices of
    the spans (plus the whitespace between them) reconstructs the input.
    Empty or whitespace-only input yields no spans.
    """
    n = len(tt.tokens)
    spans: list[TluSpan] = []
    soft_closed = False
    start = 0
    i = 0
    while i < n:
        if _is_hard_boundary(tt, i):
            spans.append(TluSpan(start, i))
            soft_closed = False
            start = i + 1
            i = start
            continue
        if _is_soft_boundary(tt, i) and (i - start + 1) >= MIN_SOFT_TOKENS:
            end = i
            j = i + 1
            while j < n and _is_absorbable_connective(tt, j):
                end = j
                j += 1
            spans.append(TluSpan(start, end))
            soft_closed = True
            start = j
            i = start
            continue
        i += 1
    if start < n:
        if soft_closed and (n - start) < MIN_SOFT_TOKENS:
            # too short to stand alone: rejoin the clause it trailed
            spans[-1] = TluSpan(spans[-1].first, n - 1)
        else:
            spans.append(TluSpan(start, n - 1))
    return spans


def span_text(tt: TokenizedText, span: TluSpan) -> str:
    """The raw text slice a span covers (internal separators included)."""
    return tt.raw[tt.tokens[span.first].start : tt.tokens[span.last].end]


def segment(text: str) -> list[str]:
    """Convenience wrapper: tokenize, extract, and return the span texts."""
    tt = tokenize(text)
    return [span_text(tt, s) for s in extract_tlus(tt)]
