"""Corpus BLEU over pre-tokenized text with a single reference per segment."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .._accel import clipped_matches
from ..errors import EmptyCorpus, LengthMismatch

MAX_ORDER = 4
SMOOTH_METHODS = ("none", "floor", "add-k", "exp")


@dataclass(frozen=True)
class BLEUScore:
    score: float
    counts: tuple[int, ...]
    totals: tuple[int, ...]
    precisions: tuple[float, ...]
    bp: float
    sys_len: int
    ref_len: int
    smooth: str = "none"
    smooth_value: float | None = field(default=None)

    def __float__(self):
        return self.score

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "counts": list(self.counts),
            "totals": list(self.totals),
            "precisions": list(self.precisions),
            "bp": self.bp,
            "sys_len": self.sys_len,
            "ref_len": self.ref_len,
            "smooth": self.smooth,
            "smooth_value": self.smooth_value,
            "max_order": len(self.counts),
        }


def _flatten(segments: Sequence[Sequence[str]], vocab: dict) -> tuple[np.ndarray, np.ndarray]:
    ids = [vocab.setdefault(tok, len(vocab)) for seg in segments for tok in seg]
    offsets = np.zeros(len(segments) + 1, dtype=np.int64)
    np.cumsum([len(seg) for seg in segments], out=offsets[1:])
    return np.asarray(ids, dtype=np.int64), offsets


def _ngram_ids(tokens: np.ndarray, offsets: np.ndarray, max_order: int):
    """Yield ``(keys, key_offsets)`` per order with corpus-wide dense n-gram ids.

    The id of an n-gram is the dense id of the pair (id of its (n-1)-prefix,
    last token), so equal n-grams anywhere in the input share an id.
    """
    lengths = np.diff(offsets)
    vocab_size = int(tokens.max()) + 1 if len(tokens) else 1
    prev_ids = tokens
    for n in range(1, max_order + 1):
        counts = np.maximum(lengths - n + 1, 0)
        key_offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
        np.cumsum(counts, out=key_offsets[1:])
        if n == 1:
            keys = tokens
        else:
            # positions of n-gram starts in the flat token array
            starts = np.repeat(offsets[:-1], counts) + (
                np.arange(key_offsets[-1]) - np.repeat(key_offsets[:-1], counts))
            prev_counts = np.maximum(lengths - n + 2, 0)
            prev_offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
            np.cumsum(prev_counts, out=prev_offsets[1:])
            seg = np.repeat(np.arange(len(lengths)), counts)
            prev_index = prev_offsets[seg] + (starts - offsets[seg])
            pairs = prev_ids[prev_index] * vocab_size + tokens[starts + n - 1]
            _, keys = np.unique(pairs, return_inverse=True)
            keys = keys.astype(np.int64).ravel()
        yield keys, key_offsets
        prev_ids = keys


def _ngram_keys_joint(hyps, refs, max_order):
    vocab: dict = {}
    h_tok, h_off = _flatten(hyps, vocab)
    r_tok, r_off = _flatten(refs, vocab)
    # shared id space: run the encoder on the concatenation, then split
    tokens = np.concatenate([h_tok, r_tok])
    offsets = np.concatenate([h_off, h_off[-1] + r_off[1:]])
    n_h = len(hyps)
    for keys, key_offsets in _ngram_ids(tokens, offsets, max_order):
        cut = key_offsets[n_h]
        yield (keys[:cut], key_offsets[:n_h + 1],
               keys[cut:], key_offsets[n_h:] - cut)


def compute_bleu(
    counts: Sequence[int],
    totals: Sequence[int],
    sys_len: int,
    ref_len: int,
    smooth: str = "none",
    smooth_value: float | None = None,
) -> BLEUScore:
    """BLEU from sufficient statistics.

    ``none`` returns 0 as soon as one n-gram precision is 0.  ``floor``
    replaces zero matches by *smooth_value* (default 0.1), ``add-k`` adds
    *smooth_value* (default 1) to matches and totals for n > 1, and ``exp``
    halves the pseudo-count for each further zero-match order.  Smoothed
    variants skip orders with no hypothesis n-grams at all.
    """
    if smooth not in SMOOTH_METHODS:
        raise ValueError(f"unknown smoothing {smooth!r}")
    precisions = [0.0] * len(counts)
    # smoothed variants average only over orders the hypotheses can reach
    used = [True] * len(counts)
    pseudo = 1.0
    for n, (c, t) in enumerate(zip(counts, totals)):
        if smooth == "add-k" and n > 0:
            k = 1.0 if smooth_value is None else smooth_value
            c, t = c + k, t + k
        if t == 0:
            used[n] = smooth == "none"
            continue
        if c == 0 and smooth == "floor":
            c = 0.1 if smooth_value is None else smooth_value
        elif c == 0 and smooth == "exp":
            pseudo /= 2
            c = pseudo
        precisions[n] = c / t

    bp = 0.0
    if sys_len > 0:
        bp = 1.0 if sys_len >= ref_len else math.exp(1.0 - ref_len / sys_len)
    active = [p for p, u in zip(precisions, used) if u]
    if bp == 0.0 or not active or min(active) <= 0.0:
        score = 0.0
    else:
        log_mean = sum(math.log(p) for p in active) / len(active)
        score = 100.0 * bp * math.exp(log_mean)
    return BLEUScore(
        score=score,
        counts=tuple(int(c) for c in counts),
        totals=tuple(int(t) for t in totals),
        precisions=tuple(precisions),
        bp=bp,
        sys_len=sys_len,
        ref_len=ref_len,
        smooth=smooth,
        smooth_value=smooth_value,
    )


def corpus_statistics(
    hypotheses: Sequence[Sequence[str]],
    references: Sequence[Sequence[str]],
    max_order: int = MAX_ORDER,
) -> tuple[list[int], list[int], int, int]:
    """Clipped n-gram matches and hypothesis n-gram totals per order."""
    if len(hypotheses) != len(references):
        raise LengthMismatch(len(hypotheses), len(references), "hypotheses and references")
    if not hypotheses:
        raise EmptyCorpus("BLEU needs at least one segment")
    sys_len = sum(len(h) for h in hypotheses)
    ref_len = sum(len(r) for r in references)
    counts, totals = [], []
    for h_keys, h_off, r_keys, r_off in _ngram_keys_joint(hypotheses, references, max_order):
        counts.append(clipped_matches(h_keys, h_off, r_keys, r_off))
        totals.append(int(h_off[-1]))
    return counts, totals, sys_len, ref_len


def corpus_bleu(
    hypotheses: Sequence[Sequence[str]],
    references: Sequence[Sequence[str]],
    smooth: str = "none",
    smooth_value: float | None = None,
    max_order: int = MAX_ORDER,
) -> BLEUScore:
    """Corpus-level BLEU of token lists against one reference each.

    With the default (unsmoothed) setting a corpus without any 4-gram
    scores 0, even when hypotheses equal references.
    """
    counts, totals, sys_len, ref_len = corpus_statistics(hypotheses, references, max_order)
    return compute_bleu(counts, totals, sys_len, ref_len, smooth, smooth_value)
