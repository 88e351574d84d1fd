from .accuracy import MAccReport, PRReport, matched_accuracy, precision_recall, tally
from .agreement import (
    RatingsMatrix,
    alpha_from_coincidences,
    coincidence_matrix,
    krippendorff_alpha,
    read_ratings_tsv,
)
from .bleu import BLEUScore, compute_bleu, corpus_bleu, corpus_statistics
from .corpus_stats import PhraseStats, Tokenization, overlap_report, phrase_statistics, tokenize

__all__ = [
    "BLEUScore",
    "MAccReport",
    "PRReport",
    "PhraseStats",
    "RatingsMatrix",
    "Tokenization",
    "alpha_from_coincidences",
    "coincidence_matrix",
    "compute_bleu",
    "corpus_bleu",
    "corpus_statistics",
    "krippendorff_alpha",
    "matched_accuracy",
    "overlap_report",
    "phrase_statistics",
    "precision_recall",
    "read_ratings_tsv",
    "tally",
    "tokenize",
]
