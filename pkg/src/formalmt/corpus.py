"""Contrastive corpora with inline ``[F]...[/F]`` formality-marker annotations.

A corpus file is UTF-8 TSV with a header line.  Required columns are
``id``, ``source``, ``formal`` and ``informal``; ``respectful``, ``domain``
and the gendered columns ``{formal,informal}_{feminine,masculine}`` are
optional.  Empty cells in optional columns mean "absent".
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    EmptyPhrase,
    FormalMTError,
    MissingColumn,
    NestedTags,
    RowParseError,
    UnbalancedTags,
)

OPEN_TAG = "[F]"
CLOSE_TAG = "[/F]"
TAG_PAIR_LEN = len(OPEN_TAG) + len(CLOSE_TAG)


class FormalityLevel(str, Enum):
    FORMAL = "formal"
    INFORMAL = "informal"
    RESPECTFUL = "respectful"


class Gender(str, Enum):
    FEMININE = "feminine"
    MASCULINE = "masculine"


class Domain(str, Enum):
    TELEPHONY = "telephony"
    TOPICAL_CHAT = "topical_chat"
    CALL_CENTER = "call_center"
    OTHER = "other"


class Split(str, Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class MarkedPhrase:
    """A marked phrase and its half-open span into the stripped sentence."""

    text: str
    start: int
    end: int

    def __post_init__(self):
        if not self.text:
            raise ValueError("marked phrase text must be non-empty")
        if self.end - self.start != len(self.text) or self.start < 0:
            raise ValueError(f"span [{self.start}, {self.end}) does not fit {self.text!r}")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class AnnotatedReference:
    raw: str
    surface: str
    phrases: tuple[MarkedPhrase, ...]
    formality_level: FormalityLevel = FormalityLevel.FORMAL

    @classmethod
    def from_phrases(
        cls,
        surface: str,
        phrases: Iterable[MarkedPhrase],
        formality_level: FormalityLevel = FormalityLevel.FORMAL,
    ) -> "AnnotatedReference":
        """Build a reference from a plain sentence and its phrase spans."""
        phrases = tuple(phrases)
        prev_end = -1
        for p in phrases:
            if surface[p.start:p.end] != p.text:
                raise ValueError(f"phrase {p.text!r} does not match surface at {p.span}")
            # touching spans are allowed; they render as "[/F][F]"
            if p.start < prev_end:
                raise ValueError("phrase spans must be ordered and non-overlapping")
            prev_end = p.end
        if OPEN_TAG in surface or CLOSE_TAG in surface:
            raise ValueError("surface text contains a literal tag")
        raw = _render(surface, phrases)
        return cls(raw, surface, phrases, formality_level)

    @property
    def phrase_texts(self) -> list[str]:
        return [p.text for p in self.phrases]


def _render(surface: str, phrases: tuple[MarkedPhrase, ...]) -> str:
    out = []
    pos = 0
    for p in phrases:
        out.append(surface[pos:p.start])
        out.append(OPEN_TAG + p.text + CLOSE_TAG)
        pos = p.end
    out.append(surface[pos:])
    return "".join(out)


def parse_annotated(
    text: str, formality_level: FormalityLevel = FormalityLevel.FORMAL
) -> AnnotatedReference:
    """Strip formality tags from *text* and record the spans they enclosed.

    Offsets in raised errors point into *text*; offsets in the returned
    phrases point into the stripped surface string.
    """
    surface: list[str] = []
    spans: list[tuple[int, int]] = []
    out_len = 0
    open_at = -1  # offset of the currently open tag in text, -1 when closed
    phrase_start = 0
    i = 0
    n = len(text)
    while i < n:
        if text.startswith(OPEN_TAG, i):
            if open_at >= 0:
                raise NestedTags(i, text)
            open_at = i
            phrase_start = out_len
            i += len(OPEN_TAG)
            continue
        if text.startswith(CLOSE_TAG, i):
            if open_at < 0:
                raise UnbalancedTags(i, text)
            if out_len == phrase_start:
                raise EmptyPhrase(open_at, text)
            spans.append((phrase_start, out_len))
            open_at = -1
            i += len(CLOSE_TAG)
            continue
        j = text.find("[", i + 1)
        if j < 0:
            j = n
        surface.append(text[i:j])
        out_len += j - i
        i = j
    if open_at >= 0:
        raise UnbalancedTags(open_at, text)
    stripped = "".join(surface)
    marked = tuple(MarkedPhrase(stripped[s:e], s, e) for s, e in spans)
    return AnnotatedReference(text, stripped, marked, formality_level)


def render_annotated(ref: AnnotatedReference) -> str:
    return _render(ref.surface, ref.phrases)


@dataclass(frozen=True)
class ContrastiveSegment:
    id: str
    source: str
    formal: AnnotatedReference
    informal: AnnotatedReference
    respectful: AnnotatedReference | None = None
    # gender -> formality level -> reference
    gender_variants: Mapping[Gender, Mapping[FormalityLevel, AnnotatedReference]] | None = None
    domain: Domain = Domain.OTHER

    def reference(self, level: FormalityLevel, gender: Gender | None = None) -> AnnotatedReference | None:
        if gender is not None and self.gender_variants:
            ref = self.gender_variants.get(gender, {}).get(level)
            if ref is not None:
                return ref
        if level is FormalityLevel.FORMAL:
            return self.formal
        if level is FormalityLevel.INFORMAL:
            return self.informal
        return self.respectful


@dataclass(frozen=True)
class Corpus:
    language_pair: str
    segments: tuple[ContrastiveSegment, ...]
    split: Split = Split.TEST

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    @property
    def target_language(self) -> str:
        return self.language_pair.rsplit("-", 1)[-1].lower()


REQUIRED_COLUMNS = ("id", "source", "formal", "informal")
GENDER_COLUMNS = {
    f"{level.value}_{gender.value}": (gender, level)
    for gender in Gender
    for level in (FormalityLevel.FORMAL, FormalityLevel.INFORMAL)
}


def _segment_from_row(row: Mapping[str, str], rownum: int) -> ContrastiveSegment:
    def parse(column: str, level: FormalityLevel) -> AnnotatedReference:
        try:
            return parse_annotated(row[column], level)
        except FormalMTError as exc:
            raise RowParseError(rownum, column, exc) from exc

    formal = parse("formal", FormalityLevel.FORMAL)
    informal = parse("informal", FormalityLevel.INFORMAL)
    respectful = None
    if row.get("respectful"):
        respectful = parse("respectful", FormalityLevel.RESPECTFUL)
    variants: dict[Gender, dict[FormalityLevel, AnnotatedReference]] = {}
    for column, (gender, level) in GENDER_COLUMNS.items():
        if row.get(column):
            variants.setdefault(gender, {})[level] = parse(column, level)
    domain_value = (row.get("domain") or "other").strip().lower()
    try:
        domain = Domain(domain_value)
    except ValueError as exc:
        raise RowParseError(rownum, "domain", exc) from exc
    return ContrastiveSegment(
        id=row["id"],
        source=row["source"],
        formal=formal,
        informal=informal,
        respectful=respectful,
        gender_variants=variants or None,
        domain=domain,
    )


def _guess_language_pair(path: Path) -> str:
    # files are conventionally named like "en-de.test.tsv"
    stem = path.name.split(".", 1)[0]
    return stem if "-" in stem else "und"


def load_corpus(
    path: str | Path,
    format: str = "tsv",
    language_pair: str | None = None,
    split: Split | str = Split.TEST,
) -> Corpus:
    """Read a contrastive corpus from *path*.

    ``format`` is ``"tsv"`` or ``"jsonl"`` (one JSON object per line using
    the TSV column names as keys).  Row numbers in errors are 1-based data
    rows, i.e. the header is not counted.
    """
    path = Path(path)
    split = Split(split)
    language_pair = language_pair or _guess_language_pair(path)
    with open(path, encoding="utf-8", newline="") as fh:
        if format == "tsv":
            rows = _tsv_rows(fh)
        elif format == "jsonl":
            rows = _jsonl_rows(fh)
        else:
            raise ValueError(f"unknown corpus format {format!r}")
        segments = [_segment_from_row(row, i) for i, row in enumerate(rows, start=1)]
    return Corpus(language_pair, tuple(segments), split)


def _tsv_rows(fh):
    reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
    header = next(reader, None)
    if header is None:
        raise MissingColumn("id")
    header = [h.strip() for h in header]
    for col in REQUIRED_COLUMNS:
        if col not in header:
            raise MissingColumn(col)
    for rownum, cells in enumerate(reader, start=1):
        if not cells or cells == [""]:
            continue
        if len(cells) < len(REQUIRED_COLUMNS):
            raise RowParseError(rownum, header[len(cells)] if len(cells) < len(header) else "?",
                                ValueError(f"expected {len(header)} cells, got {len(cells)}"))
        yield dict(zip(header, cells))


def _jsonl_rows(fh):
    for rownum, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        row = json.loads(line)
        for col in REQUIRED_COLUMNS:
            if col not in row:
                raise MissingColumn(col)
        yield row


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write *corpus* as TSV, emitting optional columns only when used."""
    columns = list(REQUIRED_COLUMNS)
    if any(s.respectful is not None for s in corpus):
        columns.append("respectful")
    used_gender = [
        col for col, (g, lvl) in GENDER_COLUMNS.items()
        if any(s.gender_variants and lvl in s.gender_variants.get(g, {}) for s in corpus)
    ]
    columns.extend(used_gender)
    columns.append("domain")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(columns) + "\n")
        for seg in corpus:
            cells = [seg.id, seg.source, seg.formal.raw, seg.informal.raw]
            if "respectful" in columns:
                cells.append(seg.respectful.raw if seg.respectful else "")
            for col in used_gender:
                g, lvl = GENDER_COLUMNS[col]
                ref = (seg.gender_variants or {}).get(g, {}).get(lvl)
                cells.append(ref.raw if ref else "")
            cells.append(seg.domain.value)
            fh.write("\t".join(cells) + "\n")


@dataclass(frozen=True)
class Violation:
    segment_id: str
    kind: str
    message: str
    level: str = field(default="error", compare=False)

    def to_dict(self) -> dict:
        return {"segment_id": self.segment_id, "kind": self.kind, "message": self.message}


def validate_corpus(corpus: Corpus) -> list[Violation]:
    """Report data problems; nothing here raises.

    Identical formal/informal surfaces and references without markers are
    only flagged for the test split, where every segment must be contrastive.
    """
    violations = []
    counts = Counter(seg.id for seg in corpus)
    reported = set()
    for seg in corpus:
        if counts[seg.id] > 1 and seg.id not in reported:
            reported.add(seg.id)
            violations.append(Violation(
                seg.id, "DuplicateId", f"id occurs {counts[seg.id]} times"))
        if corpus.split is not Split.TEST:
            continue
        if seg.formal.surface == seg.informal.surface:
            violations.append(Violation(
                seg.id, "IdenticalReferences", "formal and informal references are identical"))
        for name, ref in (("formal", seg.formal), ("informal", seg.informal)):
            if not ref.phrases:
                violations.append(Violation(
                    seg.id, "NoMarkedPhrases", f"{name} reference has no marked phrases",
                    level="warning"))
    return violations


def write_violations(violations: Iterable[Violation], fh) -> None:
    for v in violations:
        fh.write(json.dumps(v.to_dict(), ensure_ascii=False) + "\n")
