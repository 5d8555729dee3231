import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from montee.corpus import RelationRecord
from montee.errors import EvalError
from montee.evalkit import (
    cohens_kappa,
    confusion_matrix,
    labels_from_records,
    read_labels,
    relation_id,
    sample_dense,
    score,
    write_labels,
)
from montee.modtag import ModalTag
from montee.relex import Argument, EventRelation


def as_dict(labels):
    return {f"r{i:03d}": v for i, v in enumerate(labels)}


# -- independent brute-force oracles --------------------------------------------

def oracle_scores(gold, pred):
    """Per-class and averaged P/R/F1 by counting items one by one."""
    n = len(gold)
    per = {}
    for k in (0, 1, 2):
        tp = sum(1 for i in range(n) if gold[i] == k and pred[i] == k)
        fp = sum(1 for i in range(n) if gold[i] != k and pred[i] == k)
        fn = sum(1 for i in range(n) if gold[i] == k and pred[i] != k)
        p = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
        r = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
        f = 2 * p * r / (p + r) if p + r else Fraction(0)
        per[k] = (p, r, f, tp, fp, fn)
    tp = sum(v[3] for v in per.values())
    fp = sum(v[4] for v in per.values())
    fn = sum(v[5] for v in per.values())
    mp, mr = Fraction(tp, tp + fp), Fraction(tp, tp + fn)
    micro = (mp, mr, 2 * mp * mr / (mp + mr) if mp + mr else Fraction(0))
    macro = tuple(sum(per[k][j] for k in per) / 3 for j in range(3))
    return per, micro, macro


def oracle_kappa(a, b):
    n = len(a)
    p_o = Fraction(sum(1 for x, y in zip(a, b) if x == y), n)
    p_e = sum(Fraction(a.count(k), n) * Fraction(b.count(k), n) for k in (0, 1, 2))
    if p_e == 1:
        return Fraction(1) if p_o == 1 else Fraction(0)
    return (p_o - p_e) / (1 - p_e)


def assert_matches_oracle(gold, pred, tol=1e-12):
    report = score(as_dict(gold), as_dict(pred))
    per, micro, macro = oracle_scores(gold, pred)
    for k in (0, 1, 2):
        got = report.per_class[k]
        for x, y in zip((got.precision, got.recall, got.f1), per[k][:3]):
            assert abs(x - float(y)) <= tol
    for got, want in ((report.micro, micro), (report.macro, macro)):
        for x, y in zip((got.precision, got.recall, got.f1), want):
            assert abs(x - float(y)) <= tol
    accuracy = sum(g == p for g, p in zip(gold, pred)) / len(gold)
    assert abs(report.micro.precision - accuracy) <= tol
    assert abs(report.micro.recall - accuracy) <= tol
    assert abs(report.micro.f1 - accuracy) <= tol
    assert sum(map(sum, report.matrix)) == len(gold)
    return report


# -- examples ------------------------------------------------------------

def test_perfect_predictions():
    gold = as_dict([0, 1, 2, 2, 1])
    report = score(gold, gold)
    assert all(getattr(m, f) == 1.0 for m in list(report.per_class.values()) + [report.micro, report.macro]
               for f in ("precision", "recall", "f1"))


def test_81_of_100_correct():
    gold = [i % 3 for i in range(100)]
    pred = [g if i < 81 else (g + 1) % 3 for i, g in enumerate(gold)]
    report = assert_matches_oracle(gold, pred)
    assert round(report.micro.f1, 10) == 0.81 == round(report.accuracy, 10)


def test_small_hand_example():
    report = assert_matches_oracle([0, 0, 1, 2], [0, 1, 1, 2])
    assert report.micro.f1 == 0.75
    assert report.matrix == [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    assert report.per_class[0].precision == 1.0 and report.per_class[0].recall == 0.5
    assert report.per_class[1].precision == 0.5 and report.per_class[1].recall == 1.0
    assert report.per_class[0].f1 == pytest.approx(2 / 3) and report.per_class[1].f1 == pytest.approx(2 / 3)
    assert report.macro.f1 == pytest.approx((2 / 3 + 2 / 3 + 1) / 3)


def test_empty_class_uses_zero_convention():
    report = score(as_dict([0, 0]), as_dict([0, 1]))
    assert report.per_class[2].precision == report.per_class[2].recall == report.per_class[2].f1 == 0.0
    assert report.per_class[1].precision == 0.0


def test_id_mismatch_lists_ids():
    with pytest.raises(EvalError, match=r"missing \['b'\], extra \['c'\]"):
        score({"a": 1, "b": 2}, {"a": 1, "c": 2})


def test_kappa_hand_example():
    assert cohens_kappa([2, 2, 1, 1], [2, 1, 1, 1]) == pytest.approx(0.5, abs=1e-12)


def test_kappa_identical_and_degenerate():
    assert cohens_kappa([0, 1, 2, 1], [0, 1, 2, 1]) == 1.0
    assert cohens_kappa([1, 1, 1], [1, 1, 1]) == 1.0


def test_kappa_length_mismatch():
    with pytest.raises(EvalError):
        cohens_kappa([1, 2], [1])


def test_report_format_has_averages_and_matrix():
    text = score(as_dict([0, 1, 2]), as_dict([0, 1, 1])).format()
    assert "Micro-average" in text and "Macro-average" in text and "n=3" in text


def rec(doc, head, tag=None):
    rel = EventRelation((head,), "p", (1,), (Argument(0, "x"),), "unary", head, "p")
    return RelationRecord(doc, 0, rel, ModalTag(tag, head) if tag else None)


def test_sample_dense_boundaries():
    recs = [rec("a", i, "MOD" if i < 2 else None) for i in range(10)]
    recs += [rec("b", i, "NEG" if i == 0 else None) for i in range(10)]
    assert sample_dense(recs, 0.2) == ["a"]
    assert sample_dense(recs, 0) == ["a", "b"]
    assert sample_dense([], 0) == []


def test_sample_dense_oracle():
    rng = random.Random(5)
    recs = [rec(f"d{rng.randrange(10)}", i, rng.choice([None, "MOD", "NEG"])) for i in range(300)]
    for f in (0, 0.1, 0.2, 0.25, 1 / 3, 0.5, 1):
        want = []
        for d in sorted({r.doc_id for r in recs}):
            mine = [r for r in recs if r.doc_id == d]
            if Fraction(sum(r.tag is not None for r in mine), len(mine)) >= Fraction(str(f)):
                want.append(d)
        assert sample_dense(recs, f) == want


def test_labels_files_round_trip(tmp_path):
    labels = {relation_id("d", 0, 3): 2, relation_id("d", 1, 0): 0}
    path = tmp_path / "l.tsv"
    write_labels(labels, path)
    assert read_labels(path) == labels
    assert path.read_text() == "d:0:3\t2\nd:1:0\t0\n"


@pytest.mark.parametrize("body, message", [
    ("a\t3\n", "label 3"),
    ("a\tx\n", "non-integer"),
    ("a\n", "expected"),
    ("a\t1\na\t2\n", "conflicting"),
])
def test_bad_label_files(tmp_path, body, message):
    path = tmp_path / "l.tsv"
    path.write_text(body)
    with pytest.raises(EvalError, match=message):
        read_labels(path)


def test_labels_from_records_uses_certainty_mapping():
    labels = labels_from_records([rec("a", 1, "NEG"), rec("a", 2), rec("a", 3, "COUNT")])
    assert labels == {"a:0:1": 0, "a:0:2": 2, "a:0:3": 1}


# -- properties ------------------------------------------------------------

label_lists = st.integers(1, 50).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 2), min_size=n, max_size=n),
                        st.lists(st.integers(0, 2), min_size=n, max_size=n)))


@given(label_lists)
def test_score_and_kappa_match_oracle(pair):
    gold, pred = pair
    assert_matches_oracle(gold, pred)
    assert abs(cohens_kappa(gold, pred) - float(oracle_kappa(gold, pred))) <= 1e-12


@given(label_lists)
def test_kappa_symmetric_and_bounded(pair):
    a, b = pair
    assert cohens_kappa(a, b) == pytest.approx(cohens_kappa(b, a), abs=1e-12)
    assert cohens_kappa(a, b) <= 1 + 1e-12


@given(st.integers(1, 16), st.data())
def test_uniform_marginals_kappa(m, data):
    a = [0, 1, 2] * m
    b = data.draw(st.permutations(a))
    p_o = sum(x == y for x, y in zip(a, b)) / len(a)
    # with both marginals uniform, p_e = 1/3
    assert cohens_kappa(a, b) == pytest.approx((p_o - 1 / 3) / (2 / 3), abs=1e-12)


@given(label_lists, st.randoms())
def test_score_permutation_invariant(pair, rnd):
    gold, pred = pair
    d_gold, d_pred = as_dict(gold), as_dict(pred)
    keys = list(d_gold)
    rnd.shuffle(keys)
    shuffled = score({k: d_gold[k] for k in keys}, {k: d_pred[k] for k in reversed(keys)})
    assert shuffled == score(d_gold, d_pred)


@given(label_lists)
def test_confusion_matrix_counts(pair):
    gold, pred = pair
    m = confusion_matrix(gold, pred)
    for g in range(3):
        for p in range(3):
            assert m[g][p] == sum(1 for x, y in zip(gold, pred) if (x, y) == (g, p))
