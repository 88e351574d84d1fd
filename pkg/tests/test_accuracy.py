import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from formalmt.errors import AllUndefined, LengthMismatch, NoMatchedSegments
from formalmt.matcher import FormalityLabel, classify_corpus
from formalmt.metrics import matched_accuracy, precision_recall

F, I, N, O = (FormalityLabel.FORMAL, FormalityLabel.INFORMAL,
              FormalityLabel.NEUTRAL, FormalityLabel.OTHER)

labels_st = st.lists(st.sampled_from([F, I, N, O]), max_size=40)


def test_all_formal():
    assert matched_accuracy([F, F, F], F).m_acc == 1


def test_five_segment_trace():
    r = matched_accuracy([F, F, I, N, O], F)
    assert r.n_matched == 3
    assert r.formal_acc == Fraction(2, 3)
    assert r.informal_acc == Fraction(1, 3)
    assert r.m_acc == Fraction(2, 3)
    assert (r.n_neutral, r.n_other, r.n_total) == (1, 1, 5)


def test_desired_informal_and_strings():
    assert matched_accuracy(["formal", "informal", "informal"], "informal").m_acc == Fraction(2, 3)
    with pytest.raises(ValueError):
        matched_accuracy([F], N)


def test_no_matched_segments_keeps_counters():
    with pytest.raises(NoMatchedSegments) as info:
        matched_accuracy([N, N, O], F)
    report = info.value.report
    assert (report.n_neutral, report.n_other, report.n_matched) == (2, 1, 0)
    assert report.m_acc is None


@given(labels_st)
def test_accuracies_sum_to_one(labels):
    if not {F, I} & set(labels):
        return
    r = matched_accuracy(labels, F)
    assert r.formal_acc + r.informal_acc == 1
    assert r.n_matched == r.n_formal + r.n_informal
    d = r.to_dict()
    assert abs(d["formal_acc"] + d["informal_acc"] - 1) <= 1e-12


@given(labels_st, labels_st)
def test_tallies_merge(a, b):
    # partial tallies add up to the tally of the concatenation
    if not {F, I} & set(a) or not {F, I} & set(b):
        return
    ra, rb, rab = (matched_accuracy(x, F) for x in (a, b, a + b))
    assert rab.n_formal == ra.n_formal + rb.n_formal
    assert rab.n_other == ra.n_other + rb.n_other


def test_self_evaluation_on_fixture(de_corpus):
    formal = classify_corpus([s.formal.surface for s in de_corpus], de_corpus)
    informal = classify_corpus([s.informal.surface for s in de_corpus], de_corpus)
    assert matched_accuracy(formal, F).m_acc == 1
    assert matched_accuracy(informal, I).m_acc == 1


def test_precision_recall_example():
    r = precision_recall([F, F, I, I], [F, I, I, I])
    assert r.precision(F) == Fraction(1, 2)
    assert r.recall(F) == 1
    assert r.precision(I) == 1
    assert r.recall(I) == Fraction(2, 3)
    assert r.macro_precision == Fraction(3, 4)
    assert r.macro_recall == Fraction(5, 6)
    assert r.n == 4


def test_precision_recall_identity():
    labels = [F, I, N, O, F]
    r = precision_recall(labels, labels)
    for lab in FormalityLabel:
        assert r.precision(lab) in (None, 1)
        assert r.recall(lab) in (None, 1)
    assert r.macro_precision == r.macro_recall == 1


def test_undefined_ratios():
    r = precision_recall([F, F], [F, F])
    assert r.recall(I) is None
    assert r.precision(I) is None
    assert r.macro_recall is None
    assert r.to_dict()["per_label"]["informal"]["recall"] is None


def test_precision_recall_errors():
    with pytest.raises(LengthMismatch):
        precision_recall([F], [F, I])
    with pytest.raises(AllUndefined):
        precision_recall([N, O], [O, N])


@given(st.lists(st.tuples(st.sampled_from([F, I, N, O]), st.sampled_from([F, I])), min_size=1, max_size=40))
def test_swap_transposes(pairs):
    pred = [p for p, _ in pairs]
    gold = [g for _, g in pairs]
    a, b = precision_recall(pred, gold), precision_recall(gold, pred)
    assert sum(a.confusion.values()) == len(pairs)
    assert a.confusion == {(p, g): c for (g, p), c in b.confusion.items()}
    for lab in FormalityLabel:
        assert a.precision(lab) == b.recall(lab)


def test_large_random_counts():
    rng = random.Random(3)
    pred = [rng.choice([F, I, N, O]) for _ in range(2000)]
    gold = [rng.choice([F, I]) for _ in range(2000)]
    r = precision_recall(pred, gold)
    assert sum(r.confusion.values()) == 2000
