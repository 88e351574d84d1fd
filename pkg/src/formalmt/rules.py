"""Rule-based formality labeling of raw target-language text.

Rule files are plain TSV, one pattern per line::

    polarity<TAB>kind<TAB>text

``polarity`` is ``formal`` or ``informal``; ``kind`` is ``literal``,
``capitalized_mid_sentence`` or ``suffix``.  Lines starting with ``#`` are
comments.  ``option<TAB>name<TAB>value`` lines set ``boundary``
(``token``/``substring``), ``case`` (``sensitive``/``fold``) and ``note``.
"""

from __future__ import annotations

import random
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from itertools import zip_longest
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ConfigError, InsufficientClass, LineCountMismatch
from .matcher import BoundaryMode, CaseMode, _at_boundary, occurs


class PatternKind(str, Enum):
    LITERAL = "literal"
    CAPITALIZED_MID_SENTENCE = "capitalized_mid_sentence"
    SUFFIX = "suffix"


class Polarity(str, Enum):
    FORMAL = "formal"
    INFORMAL = "informal"


class RuleLabelKind(str, Enum):
    FORMAL = "formal"
    INFORMAL = "informal"
    NEUTRAL = "neutral"
    MIXED = "mixed"


@dataclass(frozen=True)
class Pattern:
    kind: PatternKind
    text: str

    def __post_init__(self):
        if not self.text:
            raise ConfigError("empty pattern text")


@dataclass(frozen=True)
class RuleSet:
    language: str
    formal_patterns: tuple[Pattern, ...]
    informal_patterns: tuple[Pattern, ...]
    default_boundary: BoundaryMode = BoundaryMode.TOKEN
    case_mode: CaseMode = CaseMode.SENSITIVE
    note: str = ""

    def __post_init__(self):
        if not self.formal_patterns or not self.informal_patterns:
            raise ConfigError(f"ruleset {self.language!r} needs formal and informal patterns")
        both = set(self.formal_patterns) & set(self.informal_patterns)
        if both:
            raise ConfigError(f"patterns listed under both polarities: {sorted(p.text for p in both)}")

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "boundary": self.default_boundary.value,
            "case": self.case_mode.value,
            "n_formal_patterns": len(self.formal_patterns),
            "n_informal_patterns": len(self.informal_patterns),
            "note": self.note,
        }


@dataclass(frozen=True)
class RuleLabel:
    label: RuleLabelKind
    formal_hits: tuple[Pattern, ...] = ()
    informal_hits: tuple[Pattern, ...] = ()

    def evidence(self) -> str:
        return "formal={};informal={}".format(
            "|".join(p.text for p in self.formal_hits),
            "|".join(p.text for p in self.informal_hits),
        )


def parse_rules(lines: Iterable[str], language: str) -> RuleSet:
    formal, informal = [], []
    options = {"boundary": "token", "case": "sensitive", "note": ""}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = line.split("\t")
        if len(cells) != 3:
            raise ConfigError(f"line {lineno}: expected 3 tab-separated fields, got {len(cells)}")
        head, kind, text = cells
        if head == "option":
            if kind not in options:
                raise ConfigError(f"line {lineno}: unknown option {kind!r}")
            options[kind] = text
            continue
        try:
            polarity = Polarity(head)
            pattern = Pattern(PatternKind(kind), unicodedata.normalize("NFC", text))
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from exc
        (formal if polarity is Polarity.FORMAL else informal).append(pattern)
    try:
        boundary = BoundaryMode(options["boundary"])
        case = CaseMode(options["case"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RuleSet(language, tuple(formal), tuple(informal), boundary, case, options["note"])


def load_rules(path: str | Path, language: str | None = None) -> RuleSet:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh, language or path.stem)


def available_languages() -> list[str]:
    folder = resources.files("formalmt") / "data" / "rules"
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".tsv"))


def default_rules(language: str) -> RuleSet:
    """The shipped ruleset for *language* (``de``, ``es``, ``fr``, ``hi``, ``it``, ``ja``)."""
    lang = language.lower().split("-")[-1]
    res = resources.files("formalmt") / "data" / "rules" / f"{lang}.tsv"
    if not res.is_file():
        raise ConfigError(f"no default ruleset for {language!r}; have {available_languages()}")
    return parse_rules(res.read_text(encoding="utf-8").splitlines(), lang)


_SENTENCE_END = ".!?"
# opening marks that may sit between a sentence break and its first word
_OPENERS = "\"'„“”‚‘’«»¿¡([{"
_WORD = re.compile(r"\w+")


def is_sentence_initial(text: str, pos: int) -> bool:
    before = text[:pos].rstrip(_OPENERS)
    stripped = before.rstrip()
    if not stripped:
        return True
    # a sentence mark must be followed by whitespace to count as a break
    return stripped[-1] in _SENTENCE_END and len(stripped) < len(before)


def _capitalized_mid_sentence(word: str, text: str, boundary: BoundaryMode) -> bool:
    start = text.find(word)
    while start >= 0:
        end = start + len(word)
        bounded = boundary is BoundaryMode.SUBSTRING or (
            _at_boundary(text, start) and _at_boundary(text, end))
        if bounded and not is_sentence_initial(text, start):
            return True
        start = text.find(word, start + 1)
    return False


def _pattern_fires(pattern: Pattern, text: str, folded: str, rules: RuleSet) -> bool:
    if pattern.kind is PatternKind.CAPITALIZED_MID_SENTENCE:
        # case is the whole signal here, so never fold
        return _capitalized_mid_sentence(pattern.text, text, rules.default_boundary)
    needle = pattern.text.casefold() if rules.case_mode is CaseMode.FOLD else pattern.text
    if pattern.kind is PatternKind.LITERAL:
        return occurs(needle, folded, rules.default_boundary)
    return any(
        tok.endswith(needle) and len(tok) > len(needle)
        for tok in _WORD.findall(folded)
    )


def label_with_rules(text: str, rules: RuleSet) -> RuleLabel:
    text = unicodedata.normalize("NFC", text)
    folded = text.casefold() if rules.case_mode is CaseMode.FOLD else text
    formal = tuple(p for p in rules.formal_patterns if _pattern_fires(p, text, folded, rules))
    informal = tuple(p for p in rules.informal_patterns if _pattern_fires(p, text, folded, rules))
    if formal and informal:
        kind = RuleLabelKind.MIXED
    elif formal:
        kind = RuleLabelKind.FORMAL
    elif informal:
        kind = RuleLabelKind.INFORMAL
    else:
        kind = RuleLabelKind.NEUTRAL
    return RuleLabel(kind, formal, informal)


@dataclass(frozen=True)
class SentencePair:
    source: str
    target: str


def label_bitext(
    source_path: str | Path, target_path: str | Path, rules: RuleSet
) -> Iterator[tuple[SentencePair, RuleLabel]]:
    """Stream labels for a line-aligned bitext; only the target side is inspected.

    :class:`LineCountMismatch` is raised as soon as one file runs out.
    """
    with open(source_path, encoding="utf-8") as src, open(target_path, encoding="utf-8") as trg:
        n = 0
        for s, t in zip_longest(src, trg):
            if s is None or t is None:
                n_src = n + (s is not None) + sum(1 for _ in src)
                n_trg = n + (t is not None) + sum(1 for _ in trg)
                raise LineCountMismatch(n_src, n_trg)
            n += 1
            pair = SentencePair(s.rstrip("\r\n"), t.rstrip("\r\n"))
            yield pair, label_with_rules(pair.target, rules)


def format_labeled(pair: SentencePair, label: RuleLabel | RuleLabelKind) -> str:
    kind = label.label if isinstance(label, RuleLabel) else label
    return f"{kind.value}\t{pair.source}\t{pair.target}\n"


def balanced_sample(
    labeled: Iterable[tuple[SentencePair, RuleLabel]],
    n_per_class: int,
    seed: int,
) -> list[tuple[SentencePair, RuleLabelKind]]:
    """Pick exactly *n_per_class* formal and informal pairs by reservoir sampling.

    Neutral and mixed pairs are skipped.  Each class has its own reservoir
    and RNG, so the result depends only on the input order and *seed*.
    Formal pairs come first, each class in input order.
    """
    if n_per_class < 0:
        raise ValueError("n_per_class must be non-negative")
    classes = (RuleLabelKind.FORMAL, RuleLabelKind.INFORMAL)
    rngs = {c: random.Random(f"{seed}:{c.value}") for c in classes}
    reservoirs: dict = {c: [] for c in classes}
    seen = dict.fromkeys(classes, 0)
    for index, (pair, label) in enumerate(labeled):
        kind = label.label if isinstance(label, RuleLabel) else RuleLabelKind(label)
        if kind not in reservoirs:
            continue
        reservoir = reservoirs[kind]
        seen[kind] += 1
        if len(reservoir) < n_per_class:
            reservoir.append((index, pair))
        else:
            j = rngs[kind].randrange(seen[kind])
            if j < n_per_class:
                reservoir[j] = (index, pair)
    out = []
    for c in classes:
        if seen[c] < n_per_class:
            raise InsufficientClass(c.value, seen[c], n_per_class)
        out.extend((pair, c) for _, pair in sorted(reservoirs[c], key=lambda item: item[0]))
    return out
