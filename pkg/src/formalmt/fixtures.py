"""Small bundled corpora and a synthetic corpus generator for tests and benchmarks."""

from __future__ import annotations

import random
from importlib import resources
from pathlib import Path

from .corpus import (
    AnnotatedReference,
    ContrastiveSegment,
    Corpus,
    FormalityLevel,
    MarkedPhrase,
    Split,
    load_corpus,
)


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture such as ``"en-de.test.tsv"``."""
    res = resources.files("formalmt") / "data" / "fixtures" / name
    if not res.is_file():
        raise FileNotFoundError(name)
    return Path(str(res))


def load_fixture(name: str) -> Corpus:
    split = Split.TRAIN if ".train." in name else Split.TEST
    return load_corpus(fixture_path(name), split=split)


# (formal, informal) verb/pronoun pairs used to assemble synthetic German-like segments
_PAIRS = [
    ("Haben Sie", "Hast du"), ("Können Sie", "Kannst du"), ("Möchten Sie", "Möchtest du"),
    ("Wissen Sie", "Weißt du"), ("Sehen Sie", "Siehst du"), ("Spielen Sie", "Spielst du"),
    ("Ihnen", "dir"), ("Ihr", "dein"), ("Ihre", "deine"), ("Ihren", "deinen"),
]
_FILLER = ("heute morgen bitte noch einmal das Spiel den Film die Karte im Moment "
           "am Montag zu Hause gestern Abend schon wieder").split()


def synthetic_corpus(n_segments: int, seed: int = 0, split: Split = Split.TRAIN,
                     language_pair: str = "en-de") -> Corpus:
    """Deterministic corpus of *n_segments* contrastive segments."""
    rng = random.Random(seed)
    segments = []
    for i in range(n_segments):
        formal_p, informal_p = rng.choice(_PAIRS)
        tail = " ".join(rng.choice(_FILLER) for _ in range(rng.randint(2, 6)))
        refs = []
        for level, phrase in ((FormalityLevel.FORMAL, formal_p), (FormalityLevel.INFORMAL, informal_p)):
            surface = f"{phrase} {tail}?"
            refs.append(AnnotatedReference.from_phrases(
                surface, [MarkedPhrase(phrase, 0, len(phrase))], level))
        segments.append(ContrastiveSegment(
            id=f"syn-{i:05d}", source=f"Could you check request number {i} for me?",
            formal=refs[0], informal=refs[1]))
    return Corpus(language_pair, tuple(segments), split)
