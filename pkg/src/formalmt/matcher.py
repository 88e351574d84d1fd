"""Reference-based formality classification of system hypotheses.

A hypothesis is Formal when it contains at least one phrase marked in the
formal reference and none marked in the informal one, Informal in the
mirrored case, Neutral when neither set matches and Other when both do.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .corpus import AnnotatedReference, Corpus, MarkedPhrase
from .errors import LengthMismatch

# languages written without spaces between words
UNSEGMENTED_LANGUAGES = frozenset({"ja", "zh", "th"})


class FormalityLabel(str, Enum):
    FORMAL = "formal"
    INFORMAL = "informal"
    NEUTRAL = "neutral"
    OTHER = "other"

    @property
    def short(self) -> str:
        return self.value[0].upper()


class BoundaryMode(str, Enum):
    SUBSTRING = "substring"
    TOKEN = "token"


class CaseMode(str, Enum):
    SENSITIVE = "sensitive"
    FOLD = "fold"


class Normalization(str, Enum):
    NONE = "none"
    NFC = "nfc"


@dataclass(frozen=True)
class MatchOptions:
    boundary_mode: BoundaryMode = BoundaryMode.TOKEN
    case_mode: CaseMode = CaseMode.SENSITIVE
    unicode_normalization: Normalization = Normalization.NFC

    @classmethod
    def for_language(cls, language: str, **overrides) -> "MatchOptions":
        lang = language.lower().split("-")[-1]
        boundary = BoundaryMode.SUBSTRING if lang in UNSEGMENTED_LANGUAGES else BoundaryMode.TOKEN
        return cls(**{"boundary_mode": boundary, **overrides})

    def prepare(self, text: str) -> str:
        if self.unicode_normalization is Normalization.NFC:
            text = unicodedata.normalize("NFC", text)
        if self.case_mode is CaseMode.FOLD:
            text = text.casefold()
        return text

    def to_dict(self) -> dict:
        return {
            "boundary_mode": self.boundary_mode.value,
            "case_mode": self.case_mode.value,
            "unicode_normalization": self.unicode_normalization.value,
        }


@dataclass(frozen=True)
class MatchResult:
    label: FormalityLabel
    matched_formal: tuple[MarkedPhrase, ...] = ()
    matched_informal: tuple[MarkedPhrase, ...] = ()

    def evidence(self) -> str:
        f = "|".join(p.text for p in self.matched_formal)
        i = "|".join(p.text for p in self.matched_informal)
        return f"formal={f};informal={i}"


def is_separator(ch: str) -> bool:
    """Whitespace and punctuation delimit tokens."""
    return ch.isspace() or unicodedata.category(ch).startswith("P")


def _at_boundary(text: str, pos: int) -> bool:
    if pos <= 0 or pos >= len(text):
        return True
    return is_separator(text[pos - 1]) or is_separator(text[pos])


def occurs(needle: str, haystack: str, boundary_mode: BoundaryMode) -> bool:
    """True if *needle* occurs in *haystack* under the boundary rule."""
    if not needle:
        return False
    if boundary_mode is BoundaryMode.SUBSTRING:
        return needle in haystack
    start = haystack.find(needle)
    while start >= 0:
        if _at_boundary(haystack, start) and _at_boundary(haystack, start + len(needle)):
            return True
        start = haystack.find(needle, start + 1)
    return False


def _dedupe(phrases: Iterable[MarkedPhrase], options: MatchOptions):
    seen = set()
    for p in phrases:
        key = options.prepare(p.text)
        if key not in seen:
            seen.add(key)
            yield p, key


def count_matches(
    hypothesis: str,
    phrases: Sequence[MarkedPhrase],
    options: MatchOptions = MatchOptions(),
) -> list[MarkedPhrase]:
    """Distinct marked phrases found at least once in *hypothesis*.

    Phrases that are equal after normalization count once; the first one in
    reference order is returned as evidence.
    """
    hyp = options.prepare(hypothesis)
    if not hyp:
        return []
    return [p for p, key in _dedupe(phrases, options) if occurs(key, hyp, options.boundary_mode)]


def label_from_evidence(has_formal: bool, has_informal: bool) -> FormalityLabel:
    if has_formal and not has_informal:
        return FormalityLabel.FORMAL
    if has_informal and not has_formal:
        return FormalityLabel.INFORMAL
    if not has_formal and not has_informal:
        return FormalityLabel.NEUTRAL
    return FormalityLabel.OTHER


def classify(
    hypothesis: str,
    formal: AnnotatedReference,
    informal: AnnotatedReference,
    options: MatchOptions = MatchOptions(),
) -> MatchResult:
    matched_formal = tuple(count_matches(hypothesis, formal.phrases, options))
    matched_informal = tuple(count_matches(hypothesis, informal.phrases, options))
    label = label_from_evidence(bool(matched_formal), bool(matched_informal))
    return MatchResult(label, matched_formal, matched_informal)


def classify_corpus(
    hypotheses: Sequence[str],
    corpus: Corpus,
    options: MatchOptions | None = None,
) -> list[MatchResult]:
    """Classify hypotheses aligned by position with ``corpus.segments``.

    Without explicit *options* the defaults for the corpus' target language
    are used.
    """
    if len(hypotheses) != len(corpus.segments):
        raise LengthMismatch(len(hypotheses), len(corpus.segments), "hypotheses and segments")
    if options is None:
        options = MatchOptions.for_language(corpus.language_pair)
    return [
        classify(hyp, seg.formal, seg.informal, options)
        for hyp, seg in zip(hypotheses, corpus.segments)
    ]
