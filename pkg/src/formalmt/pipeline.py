"""Source-segment selection and control-token training data preparation."""

from __future__ import annotations

import hashlib
import json
import random
import re
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .corpus import Corpus, FormalityLevel, Gender, Split
from .errors import (
    ConfigError,
    GenericTooSmall,
    InvalidRegex,
    LineCountMismatch,
    MissingGenderVariant,
)

SECOND_PERSON = ("you", "your", "yours", "yourself", "yourselves")
FIRST_PERSON = ("i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves")

_AUX = (r"(?:are|were|have|had|do|does|did|can|could|will|would|should|shall|may|might|must"
        r"|won't|can't|don't|doesn't|didn't|haven't|aren't|weren't|wouldn't|couldn't|shouldn't)")
_YOU_OBJ = r"(?:you|yourself|yourselves)"

DEFAULT_POSITION_PATTERNS = {
    # inverted auxiliary ("could you"), contraction ("you're") or you + verb
    "subject": (
        rf"\b{_AUX}\s+you\b|\byou(?:'re|'ve|'ll|'d|’re|’ve|’ll|’d)\b"
        r"|\byou\s+(?:\w+ly\s+)?(?:are|were|have|had|do|did|can|could|will|would|should|may"
        r"|might|must|need|want|know|like|think|see|get|go|make|say|feel|look|seem|play|mean"
        r"|love|enjoy|watch|read|live|work|tell|give|take|come|find|use|try|ask|call)\b"
    ),
    "object": (
        r"\b(?:tell|told|give|gave|show|help|thank|see|saw|meet|ask|call|let|send|sent|love|hear"
        r"|bring|take|pay|remind|invite|join|understand|need|want|know|get|got|make|made|owe"
        rf"|teach|taught|follow|transfer|connect|put|keep|email|text)(?:s|ed|ing)?\s+{_YOU_OBJ}\b"
    ),
    "object_of_preposition": (
        r"\b(?:to|for|with|about|of|at|from|by|on|in|without|like|than|after|before|behind|near"
        rf"|around|toward|towards|into|upon|against|between|among|under|over)\s+{_YOU_OBJ}\b"
    ),
}

DEFAULT_VERBS = (
    "be am is are was were been being have has had do does did done can could will would "
    "shall should may might must need want know think see look get got go going went come "
    "make made take took give gave tell told say said ask call play watch read like love "
    "enjoy feel find use try help work live buy pay send provide check spell book wait "
    "hear listen mean remember forget keep let start stop move believe understand learn "
    "teach follow order change open close bring leave meet talk speak visit travel eat "
    "drink cook sleep grow win lose choose plan hope wish happen happened prefer"
).split()

DEFAULT_BLOCKLIST = ("thank you", "thanks", "you're welcome", "you are welcome", "see you",
                     "bless you", "how are you", "nice to meet you")


class BlocklistMode(str, Enum):
    CONTAINS = "contains"
    EXACT = "exact"


def _word_alternation(words: Iterable[str]) -> str:
    return "|".join(re.escape(w) for w in sorted(set(words), key=lambda w: (-len(w), w)))


@dataclass(frozen=True)
class SelectionConfig:
    min_words: int = 7
    max_words: int = 40
    second_person_pronouns: tuple[str, ...] = SECOND_PERSON
    # setting this enables first-person pronouns as an alternative trigger
    first_person_pronouns: tuple[str, ...] | None = None
    position_patterns: dict = field(default_factory=lambda: dict(DEFAULT_POSITION_PATTERNS))
    require_position: bool = False
    verb_list: tuple[str, ...] | None = tuple(DEFAULT_VERBS)
    stock_phrase_blocklist: tuple[str, ...] | None = DEFAULT_BLOCKLIST
    blocklist_mode: BlocklistMode = BlocklistMode.CONTAINS

    def __post_init__(self):
        if self.min_words > self.max_words:
            raise ConfigError("min_words must not exceed max_words")
        if not self.second_person_pronouns:
            raise ConfigError("second_person_pronouns must be non-empty")
        for name, lst in (("first_person_pronouns", self.first_person_pronouns),
                          ("verb_list", self.verb_list),
                          ("stock_phrase_blocklist", self.stock_phrase_blocklist)):
            if lst is not None and not lst:
                raise ConfigError(f"{name} is enabled but empty")
        compiled = {}
        for name, pattern in self.position_patterns.items():
            try:
                compiled[name] = re.compile(pattern, re.IGNORECASE)
            except re.error as exc:
                raise InvalidRegex(f"position pattern {name!r}: {exc}") from exc
        object.__setattr__(self, "_positions", compiled)
        pronouns = list(self.second_person_pronouns) + list(self.first_person_pronouns or ())
        object.__setattr__(self, "_pronoun_re",
                           re.compile(rf"\b(?:{_word_alternation(pronouns)})\b", re.IGNORECASE))
        if self.verb_list:
            object.__setattr__(self, "_verb_re",
                               re.compile(rf"\b(?:{_word_alternation(self.verb_list)})\b", re.IGNORECASE))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["blocklist_mode"] = self.blocklist_mode.value
        return d


@dataclass(frozen=True)
class Criterion:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SelectionDecision:
    segment_id: str
    accepted: bool
    criteria: tuple[Criterion, ...]
    position_tags: frozenset = frozenset()

    def failed(self) -> list[str]:
        return [c.name for c in self.criteria if not c.passed]

    def to_dict(self) -> dict:
        return {
            "segment_id": self.segment_id,
            "accepted": self.accepted,
            "criteria": [asdict(c) for c in self.criteria],
            "position_tags": sorted(self.position_tags),
        }


def _normalize_phrase(text: str) -> str:
    return " ".join(re.findall(r"[\w']+", text.lower().replace("’", "'")))


def _decide(segment_id: str, text: str, config: SelectionConfig) -> SelectionDecision:
    criteria = []
    n_words = len(text.split())
    criteria.append(Criterion(
        "length", config.min_words <= n_words <= config.max_words,
        f"{n_words} words, allowed [{config.min_words}, {config.max_words}]"))

    pronouns = [m.group(0).lower() for m in config._pronoun_re.finditer(text)]
    criteria.append(Criterion("pronoun", bool(pronouns), ",".join(pronouns)))

    if config.verb_list:
        verbs = [m.group(0).lower() for m in config._verb_re.finditer(text)]
        criteria.append(Criterion("verb", bool(verbs), ",".join(verbs)))

    if config.stock_phrase_blocklist:
        norm = _normalize_phrase(text)
        hits = []
        for phrase in config.stock_phrase_blocklist:
            p = _normalize_phrase(phrase)
            if config.blocklist_mode is BlocklistMode.EXACT:
                hit = norm == p
            else:
                hit = re.search(rf"(?<![\w']){re.escape(p)}(?![\w'])", norm) is not None
            if hit:
                hits.append(phrase)
        criteria.append(Criterion("blocklist", not hits, ",".join(hits)))

    tags = frozenset(name for name, rx in config._positions.items() if rx.search(text))
    if config.require_position:
        criteria.append(Criterion("position", bool(tags), ",".join(sorted(tags))))
    accepted = all(c.passed for c in criteria)
    return SelectionDecision(segment_id, accepted, tuple(criteria), tags)


def select_sources(
    segments: Sequence[str],
    config: SelectionConfig | None = None,
    ids: Sequence[str] | None = None,
) -> list[SelectionDecision]:
    """Apply length, pronoun, verb and stock-phrase filters to EN segments.

    Segment ids default to 1-based line numbers.
    """
    config = config or SelectionConfig()
    if ids is None:
        ids = [str(i) for i in range(1, len(segments) + 1)]
    return [_decide(sid, text, config) for sid, text in zip(ids, segments)]


# --- training data preparation ---------------------------------------------

@dataclass(frozen=True)
class PrepConfig:
    seed: int
    upsample_k: int = 5
    formal_token: str = "<formal>"
    informal_token: str = "<informal>"
    generic_mix_ratio: float = 1.0
    gender_choice: str = "as_is"  # "as_is", "masculine" or "feminine"
    strict_gender: bool = False
    shuffle: bool = True

    def __post_init__(self):
        if self.upsample_k < 1:
            raise ConfigError("upsample_k must be >= 1")
        if not self.formal_token or not self.informal_token:
            raise ConfigError("control tokens must be non-empty")
        if self.formal_token == self.informal_token:
            raise ConfigError("control tokens must differ")
        if any(ch.isspace() for ch in self.formal_token + self.informal_token):
            raise ConfigError("control tokens must not contain whitespace")
        if self.generic_mix_ratio != 1.0:
            raise ConfigError("generic data is mixed in at exactly the labeled amount (ratio 1.0)")
        if self.gender_choice not in ("as_is", "masculine", "feminine"):
            raise ConfigError(f"unknown gender choice {self.gender_choice!r}")

    @property
    def gender(self) -> Gender | None:
        return None if self.gender_choice == "as_is" else Gender(self.gender_choice)

    @property
    def tokens(self) -> tuple[str, str]:
        return (self.formal_token, self.informal_token)

    def to_dict(self) -> dict:
        return asdict(self)


def check_token_collisions(sources: Iterable[str], config: PrepConfig) -> None:
    for line_no, text in enumerate(sources, start=1):
        for tok in config.tokens:
            if tok in text:
                raise ConfigError(f"control token {tok!r} occurs in source text (line {line_no})")


def expand_contrastive(corpus: Corpus, config: PrepConfig) -> list[tuple[str, str]]:
    """Two tagged pairs per segment: formal first, then informal.

    With a gender choice the matching gendered reference replaces the
    default one where the segment has it.
    """
    if corpus.split is not Split.TRAIN:
        raise ConfigError("training pairs are built from the train split only")
    check_token_collisions((seg.source for seg in corpus), config)
    gender = config.gender
    pairs = []
    for seg in corpus:
        for level, tok in ((FormalityLevel.FORMAL, config.formal_token),
                           (FormalityLevel.INFORMAL, config.informal_token)):
            if gender is not None and config.strict_gender and seg.gender_variants:
                if level not in seg.gender_variants.get(gender, {}):
                    raise MissingGenderVariant(f"segment {seg.id}: no {gender.value} {level.value} reference")
            ref = seg.reference(level, gender)
            pairs.append((f"{tok} {seg.source}", ref.surface))
    return pairs


def _count_lines(path: Path) -> int:
    with open(path, "rb") as fh:
        return sum(1 for _ in fh)


def _read_selected(path: Path, wanted: Sequence[int]) -> list[str]:
    """Lines at the sorted 0-based positions *wanted*, read in one pass."""
    out = []
    it = iter(wanted)
    nxt = next(it, None)
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            if nxt is None:
                break
            if i == nxt:
                out.append(line.rstrip("\r\n"))
                nxt = next(it, None)
    return out


def sample_generic(src_path, trg_path, n: int, seed: int) -> list[tuple[str, str]]:
    """Uniform sample of *n* line pairs without replacement, in file order."""
    src_path, trg_path = Path(src_path), Path(trg_path)
    n_src, n_trg = _count_lines(src_path), _count_lines(trg_path)
    if n_src != n_trg:
        raise LineCountMismatch(n_src, n_trg)
    if n_src < n:
        raise GenericTooSmall(n, n_src)
    picked = sorted(random.Random(seed).sample(range(n_src), n))
    return list(zip(_read_selected(src_path, picked), _read_selected(trg_path, picked)))


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _write_lines(path: Path, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def prepare_training_data(
    corpus: Corpus,
    generic_src: str | Path,
    generic_trg: str | Path,
    config: PrepConfig,
    out_prefix: str | Path,
) -> dict:
    """Write ``<prefix>.src``, ``<prefix>.trg`` and ``<prefix>.manifest.json``.

    The labeled block is the contrastive expansion repeated ``upsample_k``
    times; an equally large seeded sample of the generic bitext is added
    without control tokens, and the union is shuffled with the same seed
    unless ``config.shuffle`` is off.  Returns the manifest.
    """
    labeled = expand_contrastive(corpus, config) * config.upsample_k
    generic = sample_generic(generic_src, generic_trg, len(labeled), config.seed)
    check_token_collisions((s for s, _ in generic), config)
    rows = labeled + generic
    if config.shuffle:
        random.Random(config.seed).shuffle(rows)

    out_prefix = Path(out_prefix)
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    src_path = out_prefix.with_name(out_prefix.name + ".src")
    trg_path = out_prefix.with_name(out_prefix.name + ".trg")
    _write_lines(src_path, (s for s, _ in rows))
    _write_lines(trg_path, (t for _, t in rows))

    manifest = {
        "tool": "formalmt",
        "version": __version__,
        "language_pair": corpus.language_pair,
        "seed": config.seed,
        "config": config.to_dict(),
        "counts": {
            "segments": len(corpus),
            "upsample_k": config.upsample_k,
            "labeled": len(labeled),
            "generic": len(generic),
            "total": len(rows),
        },
        "files": {
            "src": {"path": src_path.name, "sha256": _sha256(src_path)},
            "trg": {"path": trg_path.name, "sha256": _sha256(trg_path)},
        },
    }
    manifest_path = out_prefix.with_name(out_prefix.name + ".manifest.json")
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    return manifest


def upsample_sweep_manifest(
    corpus: Corpus,
    generic_src: str | Path,
    generic_trg: str | Path,
    k_values: Sequence[int],
    config: PrepConfig,
    out_dir: str | Path,
) -> list[dict]:
    """One prepared dataset per up-sampling factor, all sharing ``config.seed``."""
    if not k_values:
        raise ConfigError("k_values must be non-empty")
    out_dir = Path(out_dir)
    manifests = []
    for k in k_values:
        cfg = PrepConfig(**{**config.to_dict(), "upsample_k": k})
        manifests.append(prepare_training_data(corpus, generic_src, generic_trg, cfg, out_dir / f"k{k}"))
    return manifests
