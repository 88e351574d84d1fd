"""Matched accuracy and classifier precision/recall."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import AllUndefined, LengthMismatch, NoMatchedSegments
from ..matcher import FormalityLabel, MatchResult

F = FormalityLabel.FORMAL
I = FormalityLabel.INFORMAL


def _ratio(num: int, den: int) -> Fraction | None:
    return Fraction(num, den) if den else None


def _as_float(x: Fraction | None) -> float | None:
    return None if x is None else float(x)


@dataclass(frozen=True)
class MAccReport:
    n_formal: int
    n_informal: int
    n_neutral: int
    n_other: int
    desired: FormalityLabel

    @property
    def n_matched(self) -> int:
        return self.n_formal + self.n_informal

    @property
    def n_total(self) -> int:
        return self.n_matched + self.n_neutral + self.n_other

    @property
    def formal_acc(self) -> Fraction | None:
        return _ratio(self.n_formal, self.n_matched)

    @property
    def informal_acc(self) -> Fraction | None:
        return _ratio(self.n_informal, self.n_matched)

    @property
    def m_acc(self) -> Fraction | None:
        return self.formal_acc if self.desired is F else self.informal_acc

    def to_dict(self) -> dict:
        return {
            "desired": self.desired.value,
            "n_formal": self.n_formal,
            "n_informal": self.n_informal,
            "n_matched": self.n_matched,
            "n_neutral": self.n_neutral,
            "n_other": self.n_other,
            "n_total": self.n_total,
            "formal_acc": _as_float(self.formal_acc),
            "informal_acc": _as_float(self.informal_acc),
            "m_acc": _as_float(self.m_acc),
        }


def tally(labels: Iterable[FormalityLabel], desired: FormalityLabel) -> MAccReport:
    counts = Counter(labels)
    return MAccReport(
        n_formal=counts[F],
        n_informal=counts[I],
        n_neutral=counts[FormalityLabel.NEUTRAL],
        n_other=counts[FormalityLabel.OTHER],
        desired=FormalityLabel(desired),
    )


def matched_accuracy(
    results: Iterable[MatchResult | FormalityLabel], desired: FormalityLabel | str
) -> MAccReport:
    """Corpus-level matched accuracy for the *desired* formality level.

    Neutral and Other hypotheses are counted but left out of the
    denominator.  Raises :class:`NoMatchedSegments` (carrying the report)
    when nothing was classified as formal or informal.
    """
    desired = FormalityLabel(desired)
    if desired not in (F, I):
        raise ValueError("desired formality must be formal or informal")
    labels = (r.label if isinstance(r, MatchResult) else FormalityLabel(r) for r in results)
    report = tally(labels, desired)
    if report.n_matched == 0:
        raise NoMatchedSegments(report)
    return report


@dataclass(frozen=True)
class PRReport:
    # confusion[(gold, predicted)] = count
    confusion: dict = field(repr=False)
    labels: tuple[FormalityLabel, ...] = tuple(FormalityLabel)
    macro_labels: tuple[FormalityLabel, ...] = (F, I)

    @property
    def n(self) -> int:
        return sum(self.confusion.values())

    def _tp(self, label):
        return self.confusion.get((label, label), 0)

    def precision(self, label: FormalityLabel) -> Fraction | None:
        predicted = sum(c for (g, p), c in self.confusion.items() if p == label)
        return _ratio(self._tp(label), predicted)

    def recall(self, label: FormalityLabel) -> Fraction | None:
        gold = sum(c for (g, p), c in self.confusion.items() if g == label)
        return _ratio(self._tp(label), gold)

    def _macro(self, fn) -> Fraction | None:
        values = [fn(label) for label in self.macro_labels]
        # an undefined component makes the average undefined
        if any(v is None for v in values):
            return None
        return sum(values, Fraction(0)) / len(values)

    @property
    def macro_precision(self) -> Fraction | None:
        return self._macro(self.precision)

    @property
    def macro_recall(self) -> Fraction | None:
        return self._macro(self.recall)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "per_label": {
                label.value: {
                    "precision": _as_float(self.precision(label)),
                    "recall": _as_float(self.recall(label)),
                }
                for label in self.labels
            },
            "macro_labels": [label.value for label in self.macro_labels],
            "macro_precision": _as_float(self.macro_precision),
            "macro_recall": _as_float(self.macro_recall),
            "confusion": [
                {"gold": g.value, "predicted": p.value, "count": c}
                for (g, p), c in sorted(self.confusion.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value))
            ],
        }


def precision_recall(
    predicted: Sequence[FormalityLabel | str], gold: Sequence[FormalityLabel | str]
) -> PRReport:
    """Per-label precision/recall with the macro average over formal/informal.

    Ratios with a zero denominator are ``None``.  If neither formal nor
    informal appears in either list every macro component is undefined and
    :class:`AllUndefined` is raised.
    """
    if len(predicted) != len(gold):
        raise LengthMismatch(len(predicted), len(gold), "predicted and gold labels")
    pred = [FormalityLabel(x) for x in predicted]
    ref = [FormalityLabel(x) for x in gold]
    present = set(pred) | set(ref)
    if not present & {F, I}:
        raise AllUndefined("neither formal nor informal occurs in predicted or gold labels")
    return PRReport(confusion=dict(Counter(zip(ref, pred))))
