import json

import pytest

from formalmt import __version__
from formalmt.cli import main
from formalmt.corpus import write_corpus
from formalmt.fixtures import fixture_path, synthetic_corpus
from conftest import write_lines

DE = str(fixture_path("en-de.test.tsv"))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    report = json.loads(capsys.readouterr().out)
    assert report["exit_code"] == code
    assert report["version"] == __version__
    assert "wall_time" in report
    return code, report


def _surfaces(tmp_path, level):
    from formalmt.fixtures import load_fixture
    corpus = load_fixture("en-de.test.tsv")
    return write_lines(tmp_path / f"{level}.hyp", [getattr(s, level).surface for s in corpus])


def test_validate(capsys, tmp_path):
    code, report = run(capsys, "validate", DE)
    assert code == 0 and report["result"]["violations"] == []
    dup = write_lines(tmp_path / "en-de.dup.tsv", [
        "id\tsource\tformal\tinformal",
        "a\ts\t[F]Sie[/F]\t[F]du[/F]",
        "a\ts\t[F]Ihnen[/F]\t[F]dir[/F]",
    ])
    out = tmp_path / "v.jsonl"
    code, report = run(capsys, "validate", dup, "--violations", out)
    assert code == 1
    assert [v["kind"] for v in report["result"]["violations"]] == ["DuplicateId"]
    assert len(out.read_text(encoding="utf-8").splitlines()) == 1
    bad = write_lines(tmp_path / "en-de.bad.tsv", ["id\tsource\tformal\tinformal", "a\ts\t[F]Sie\tdu"])
    code, report = run(capsys, "validate", bad)
    assert code == 2 and report["error"]["type"] == "RowParseError"


def test_evaluate_self(capsys, tmp_path):
    code, report = run(capsys, "evaluate", _surfaces(tmp_path, "formal"), DE, "--formality", "formal")
    assert code == 0 and report["result"]["m_acc"] == 1.0
    code, report = run(capsys, "evaluate", _surfaces(tmp_path, "informal"), DE, "--formality", "informal")
    assert report["result"]["m_acc"] == 1.0
    assert report["options"]["formality"] == "informal"


def test_evaluate_per_segment_other(capsys, tmp_path):
    from formalmt.fixtures import load_fixture
    corpus = load_fixture("en-de.test.tsv")
    lines = [s.formal.surface for s in corpus]
    idx = [s.id for s in corpus].index("de-002")
    lines[idx] = "Du weißt, was ich meine. Sie möchten, dass sie Ihnen etwas Neues beibringen."
    hyp = write_lines(tmp_path / "mixed.hyp", lines)
    per = tmp_path / "per.tsv"
    code, report = run(capsys, "evaluate", hyp, DE, "--formality", "formal", "--per-segment", per)
    assert code == 0
    rows = [r.split("\t") for r in per.read_text(encoding="utf-8").splitlines()]
    assert rows[idx][:2] == ["de-002", "other"]
    assert report["result"]["n_other"] == 1


def test_evaluate_errors(capsys, tmp_path):
    empty = write_lines(tmp_path / "empty.hyp", [])
    assert run(capsys, "evaluate", empty, DE, "--formality", "formal")[0] == 2
    neutral = write_lines(tmp_path / "n.hyp", ["Guten Tag."] * 20)
    code, report = run(capsys, "evaluate", neutral, DE, "--formality", "formal")
    assert code == 1 and report["result"]["n_neutral"] == 20
    assert report["result"]["m_acc"] is None


def test_agreement(capsys, tmp_path):
    same = write_lines(tmp_path / "same.tsv", ["a\tb", "F\tF", "I\tI"])
    assert run(capsys, "agreement", same)[1]["result"]["alpha"] == 1.0
    four = write_lines(tmp_path / "four.tsv", ["a\tb", "F\tF", "F\tF", "I\tI", "F\tI"])
    code, report = run(capsys, "agreement", four)
    assert abs(report["result"]["alpha"] - 8 / 15) <= 1e-12
    assert report["result"]["coincidence_matrix"] == [[4.0, 1.0], [1.0, 2.0]]
    single = write_lines(tmp_path / "one.tsv", ["a", "F", "I"])
    code, report = run(capsys, "agreement", single)
    assert code == 2 and report["error"]["type"] == "InsufficientData"


def test_overlap_and_stats(capsys, tmp_path):
    code, report = run(capsys, "overlap", DE)
    assert code == 0 and 0 < report["result"]["bleu"]["score"] < 100
    code, report = run(capsys, "overlap", fixture_path("en-ja.test.tsv"))
    assert report["options"]["tokenize"] == "auto" and report["result"]["tokenization"] == "character"
    one = write_lines(tmp_path / "en-de.one.tsv", [
        "id\tsource\tformal\tinformal",
        "1\ts\t[F]Könnten Sie[/F] bitte [F]Ihren[/F] Vornamen angeben?\t[F]Könntest du[/F] bitte [F]deinen[/F] Vornamen angeben?",
    ])
    code, report = run(capsys, "stats", one)
    stats = report["result"]
    assert (stats["unique_phrases"], stats["total_phrases"], stats["total_tokens"]) == (2, 2, 3)


def test_rules_label(capsys, tmp_path):
    src = write_lines(tmp_path / "a.en", ["What do you think of the goatees?"])
    trg = write_lines(tmp_path / "a.es", ["¿qué piensas de las barbas de chivo que se dejan crecer algunos jugadores?"])
    code, report = run(capsys, "rules-label", src, trg, "--lang", "es", "--show-labels")
    assert code == 0
    assert report["result"]["counts"]["formal"] == 1
    assert report["result"]["labels"] == ["formal"]
    assert run(capsys, "rules-label", src, trg, "--lang", "es", "--balanced", "1")[0] == 2
    code, report = run(capsys, "rules-label", src, trg, "--lang", "es", "--balanced", "1", "--seed", "1")
    assert code == 2 and report["error"]["type"] == "InsufficientClass"
    short = write_lines(tmp_path / "b.es", [])
    assert run(capsys, "rules-label", src, short, "--lang", "es")[0] == 2


def test_rules_label_balanced_output(capsys, tmp_path):
    src = write_lines(tmp_path / "b.en", ["x"] * 6)
    trg = write_lines(tmp_path / "b.de", ["Haben Sie Zeit?", "Hast du Zeit?"] * 3)
    out = tmp_path / "out.tsv"
    code, _ = run(capsys, "rules-label", src, trg, "--lang", "de", "--balanced", "2", "--seed", "7", "--output", out)
    assert code == 0
    first = out.read_bytes()
    run(capsys, "rules-label", src, trg, "--lang", "de", "--balanced", "2", "--seed", "7", "--output", out)
    assert out.read_bytes() == first
    assert [line.split("\t")[0] for line in first.decode().splitlines()] == ["formal", "formal", "informal", "informal"]


def test_select(capsys, tmp_path):
    seg = write_lines(tmp_path / "s.txt", ["Could you provide your first name please?", "Thank you"])
    acc = tmp_path / "acc.txt"
    dec = tmp_path / "dec.jsonl"
    code, report = run(capsys, "select", seg, "--accepted", acc, "--decisions", dec)
    assert code == 0
    assert report["result"]["n_accepted"] == 1
    assert acc.read_text(encoding="utf-8") == "Could you provide your first name please?\n"
    decisions = [json.loads(x) for x in dec.read_text(encoding="utf-8").splitlines()]
    assert decisions[1]["accepted"] is False
    assert run(capsys, "select", seg, "--min-words", "9", "--max-words", "3")[0] == 2


def test_prepare_and_sweep(capsys, tmp_path):
    corpus_path = tmp_path / "en-de.train.tsv"
    write_corpus(synthetic_corpus(400), corpus_path)
    g_src = write_lines(tmp_path / "g.en", [f"s{i}" for i in range(5000)])
    g_trg = write_lines(tmp_path / "g.de", [f"t{i}" for i in range(5000)])
    code, report = run(capsys, "prepare", corpus_path, g_src, g_trg, "--seed", "42", "--out-prefix", tmp_path / "run")
    assert code == 0 and report["result"]["manifest"]["counts"]["total"] == 8000
    code, report = run(capsys, "sweep", corpus_path, g_src, g_trg, "--seed", "42",
                       "--k-values", "1,2", "--out-dir", tmp_path / "sw")
    assert [m["counts"]["labeled"] for m in report["result"]["manifests"]] == [800, 1600]
    assert run(capsys, "prepare", corpus_path, g_src, g_trg, "--seed", "1", "-k", "7",
               "--out-prefix", tmp_path / "big")[0] == 2


def test_seed_is_required():
    with pytest.raises(SystemExit) as info:
        main(["prepare", "c", "s", "t", "--out-prefix", "x"])
    assert info.value.code == 2
