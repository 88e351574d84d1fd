"""Reference overlap and marked-phrase statistics for a contrastive corpus."""

from __future__ import annotations

import unicodedata
from dataclasses import asdict, dataclass
from enum import Enum

from ..corpus import Corpus, FormalityLevel
from ..errors import EmptyCorpus
from .bleu import BLEUScore, corpus_bleu


class Tokenization(str, Enum):
    WHITESPACE = "whitespace"
    CHARACTER = "character"


def tokenize(text: str, mode: Tokenization | str = Tokenization.WHITESPACE) -> list[str]:
    if Tokenization(mode) is Tokenization.CHARACTER:
        return [ch for ch in text if not ch.isspace()]
    return text.split()


def overlap_report(
    corpus: Corpus,
    tokenization: Tokenization | str = Tokenization.WHITESPACE,
    smooth: str = "none",
) -> BLEUScore:
    """BLEU of the informal references scored against the formal ones."""
    if not corpus.segments:
        raise EmptyCorpus("overlap needs a non-empty corpus")
    hyps = [tokenize(seg.informal.surface, tokenization) for seg in corpus]
    refs = [tokenize(seg.formal.surface, tokenization) for seg in corpus]
    return corpus_bleu(hyps, refs, smooth=smooth)


@dataclass(frozen=True)
class PhraseStats:
    unique_phrases: int
    total_phrases: int
    unique_tokens: int
    total_tokens: int

    def to_dict(self) -> dict:
        return asdict(self)


def phrase_statistics(
    corpus: Corpus,
    level: FormalityLevel | str = FormalityLevel.FORMAL,
    tokenization: Tokenization | str = Tokenization.WHITESPACE,
) -> PhraseStats:
    level = FormalityLevel(level)
    phrases = []
    for seg in corpus:
        ref = seg.reference(level)
        if ref is not None:
            phrases.extend(unicodedata.normalize("NFC", p.text) for p in ref.phrases)
    tokens = [tok for p in phrases for tok in tokenize(p, tokenization)]
    return PhraseStats(
        unique_phrases=len(set(phrases)),
        total_phrases=len(phrases),
        unique_tokens=len(set(tokens)),
        total_tokens=len(tokens),
    )
