import dataclasses
import hashlib
import json
import time

import pytest
from hypothesis import given, settings, strategies as st

from formalmt.corpus import Corpus, Gender, Split
from formalmt.errors import ConfigError, GenericTooSmall, InvalidRegex, LineCountMismatch, MissingGenderVariant
from formalmt.fixtures import synthetic_corpus
from formalmt.pipeline import (
    BlocklistMode,
    PrepConfig,
    SelectionConfig,
    check_token_collisions,
    expand_contrastive,
    prepare_training_data,
    sample_generic,
    select_sources,
    upsample_sweep_manifest,
)
from conftest import write_lines

NAME_REQUEST = "Could you provide your first name please?"


@pytest.fixture(scope="module")
def generic(tmp_path_factory):
    folder = tmp_path_factory.mktemp("generic")
    src = write_lines(folder / "g.en", [f"generic source {i}" for i in range(20000)])
    trg = write_lines(folder / "g.de", [f"generische Quelle {i}" for i in range(20000)])
    return src, trg


def _criteria(decision):
    return {c.name: c for c in decision.criteria}


def test_name_request_accepted():
    d = select_sources([NAME_REQUEST])[0]
    assert d.accepted
    assert _criteria(d)["pronoun"].detail == "you,your"
    assert "7 words" in _criteria(d)["length"].detail
    assert d.segment_id == "1"


def test_thank_you_rejected_on_length_and_blocklist():
    d = select_sources(["Thank you"])[0]
    assert not d.accepted
    assert set(d.failed()) >= {"length", "blocklist"}
    assert _criteria(d)["blocklist"].detail == "thank you"


def test_41_words_rejected():
    text = "Could you " + " ".join(["please"] * 39)
    assert len(text.split()) == 41
    d = select_sources([text])[0]
    assert d.failed() == ["length"]
    assert select_sources([" ".join(text.split()[:40])])[0].accepted


def test_other_rejections():
    no_pronoun = "The weather will be very nice again tomorrow afternoon."
    assert select_sources([no_pronoun])[0].failed() == ["pronoun"]
    # the pronoun filter looks for whole tokens
    assert "pronoun" in select_sources(["The youthful young people were all here today."])[0].failed()
    blocked = "Thank you so much, you have been very helpful today."
    assert select_sources([blocked])[0].failed() == ["blocklist"]
    exact = SelectionConfig(blocklist_mode=BlocklistMode.EXACT)
    assert select_sources([blocked], exact)[0].accepted


def test_position_tags():
    d = select_sources(["Would you like me to send it to you tomorrow morning?"])[0]
    assert "object_of_preposition" in d.position_tags
    assert "position" not in _criteria(d)
    cfg = SelectionConfig(require_position=True)
    assert "position" in _criteria(select_sources([NAME_REQUEST], cfg)[0])


def test_selection_config_errors():
    with pytest.raises(ConfigError):
        SelectionConfig(min_words=10, max_words=5)
    with pytest.raises(InvalidRegex):
        SelectionConfig(position_patterns={"subject": "(unclosed"})


def test_decision_serializes():
    d = select_sources([NAME_REQUEST], ids=["t1"])[0].to_dict()
    assert d["segment_id"] == "t1" and d["accepted"] is True
    json.dumps(d)


words = st.lists(st.sampled_from(["you", "your", "is", "have", "the", "cat", "thank"]), min_size=1, max_size=50)


@settings(max_examples=100)
@given(words, st.integers(1, 20), st.integers(20, 45), st.integers(0, 5), st.integers(0, 5))
def test_widening_length_never_rejects(tokens, lo, hi, dlo, dhi):
    text = " ".join(tokens)
    narrow = SelectionConfig(min_words=lo, max_words=hi)
    wide = SelectionConfig(min_words=max(1, lo - dlo), max_words=hi + dhi)
    if select_sources([text], narrow)[0].accepted:
        assert select_sources([text], wide)[0].accepted


def test_expand_one_segment(es_train):
    one = Corpus(es_train.language_pair, es_train.segments[:1], Split.TRAIN)
    pairs = expand_contrastive(one, PrepConfig(seed=1))
    assert pairs == [
        ("<formal> Did you play with Legos growing up?", "¿De pequeño jugaba con piezas de Lego?"),
        ("<informal> Did you play with Legos growing up?", "¿De pequeño jugabas con piezas de Lego?"),
    ]


def test_expand_400_segments():
    pairs = expand_contrastive(synthetic_corpus(400), PrepConfig(seed=1))
    assert len(pairs) == 800
    assert all("[F]" not in t for _, t in pairs)


def test_expand_feminine(es_train):
    pairs = expand_contrastive(es_train, PrepConfig(seed=1, gender_choice="feminine"))
    assert pairs[0][1] == "¿De pequeña jugaba con piezas de Lego?"
    assert pairs[1][1] == "¿De pequeña jugabas con piezas de Lego?"
    # segments without variants fall back to the default reference
    assert pairs[2][1] == es_train.segments[1].formal.surface
    # strict mode only concerns gender-marked segments
    strict = PrepConfig(seed=1, gender_choice="masculine", strict_gender=True)
    assert len(expand_contrastive(es_train, strict)) == 6
    seg = es_train.segments[0]
    partial = {Gender.FEMININE: seg.gender_variants[Gender.FEMININE]}
    broken = Corpus("en-es", (dataclasses.replace(seg, gender_variants=partial),), Split.TRAIN)
    with pytest.raises(MissingGenderVariant):
        expand_contrastive(broken, strict)


def test_expand_requires_train_split(de_corpus):
    with pytest.raises(ConfigError):
        expand_contrastive(de_corpus, PrepConfig(seed=1))


def test_prep_config_validation():
    for bad in ({"upsample_k": 0}, {"formal_token": ""}, {"informal_token": "<formal>"},
                {"formal_token": "<a b>"}, {"generic_mix_ratio": 0.5}, {"gender_choice": "x"}):
        with pytest.raises(ConfigError):
            PrepConfig(seed=1, **bad)
    with pytest.raises(ConfigError):
        check_token_collisions(["hello <formal> world"], PrepConfig(seed=1))


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_prepare_400_k5(tmp_path, generic):
    corpus = synthetic_corpus(400)
    cfg = PrepConfig(seed=42, upsample_k=5)
    start = time.perf_counter()
    m1 = prepare_training_data(corpus, *generic, cfg, tmp_path / "a" / "run")
    elapsed = time.perf_counter() - start
    m2 = prepare_training_data(corpus, *generic, cfg, tmp_path / "b" / "run")
    assert m1["counts"] == {"segments": 400, "upsample_k": 5, "labeled": 4000, "generic": 4000, "total": 8000}
    assert elapsed < 2.0
    for ext in ("src", "trg", "manifest.json"):
        a, b = tmp_path / "a" / f"run.{ext}", tmp_path / "b" / f"run.{ext}"
        assert a.read_bytes() == b.read_bytes()
    assert m1 == m2
    src = (tmp_path / "a" / "run.src").read_text(encoding="utf-8").splitlines()
    trg = (tmp_path / "a" / "run.trg").read_text(encoding="utf-8").splitlines()
    assert len(src) == len(trg) == 8000
    assert m1["files"]["src"]["sha256"] == _sha(tmp_path / "a" / "run.src")
    tagged = [s for s in src if s.split(" ", 1)[0] in ("<formal>", "<informal>")]
    assert len(tagged) == 4000
    assert sum(s.startswith("generic source") for s in src) == 4000
    assert len({s for s in src if s.startswith("generic")}) == 4000


def test_prepare_smallest_case(tmp_path, es_train):
    one = Corpus("en-es", es_train.segments[:1], Split.TRAIN)
    g_src = write_lines(tmp_path / "g.en", ["a", "b"])
    g_trg = write_lines(tmp_path / "g.es", ["x", "y"])
    m = prepare_training_data(one, g_src, g_trg, PrepConfig(seed=0, upsample_k=1), tmp_path / "out")
    assert m["counts"]["total"] == 4
    assert len((tmp_path / "out.src").read_text(encoding="utf-8").splitlines()) == 4


def test_prepare_without_shuffle_keeps_blocks(tmp_path, generic):
    corpus = synthetic_corpus(3)
    prepare_training_data(corpus, *generic, PrepConfig(seed=3, upsample_k=2, shuffle=False), tmp_path / "o")
    src = (tmp_path / "o.src").read_text(encoding="utf-8").splitlines()
    assert all(s.startswith("<") for s in src[:12])
    assert not any(s.startswith("<") for s in src[12:])


def test_seed_changes_output(tmp_path, generic):
    corpus = synthetic_corpus(20)
    a = prepare_training_data(corpus, *generic, PrepConfig(seed=1), tmp_path / "s1")
    b = prepare_training_data(corpus, *generic, PrepConfig(seed=2), tmp_path / "s2")
    assert a["files"]["src"]["sha256"] != b["files"]["src"]["sha256"]


def test_generic_errors(tmp_path):
    src = write_lines(tmp_path / "g.en", ["a", "b", "c"])
    trg = write_lines(tmp_path / "g.de", ["a", "b"])
    with pytest.raises(LineCountMismatch):
        sample_generic(src, trg, 1, 0)
    with pytest.raises(GenericTooSmall) as info:
        sample_generic(src, src, 5, 0)
    assert (info.value.needed, info.value.available) == (5, 3)


def test_generic_sample_is_without_replacement(generic):
    picked = sample_generic(*generic, 500, seed=9)
    assert len(set(picked)) == 500
    assert picked == sample_generic(*generic, 500, seed=9)


def test_sweep(tmp_path, generic):
    corpus = synthetic_corpus(400)
    manifests = upsample_sweep_manifest(corpus, *generic, [1, 2, 3, 4, 5], PrepConfig(seed=42), tmp_path)
    assert [m["counts"]["labeled"] for m in manifests] == [800, 1600, 2400, 3200, 4000]
    assert (tmp_path / "k3.src").exists()
    with pytest.raises(ConfigError):
        upsample_sweep_manifest(corpus, *generic, [], PrepConfig(seed=42), tmp_path)


def test_sweep_k8_on_1000_segments(tmp_path, generic):
    corpus = synthetic_corpus(1000, language_pair="en-ja")
    m = upsample_sweep_manifest(corpus, *generic, [8], PrepConfig(seed=42), tmp_path)[0]
    assert m["counts"]["labeled"] == 16000
    assert m["counts"]["total"] == 32000
