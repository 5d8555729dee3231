"""Certainty-label evaluation and inter-annotator agreement.

Labels are 0 (didn't happen), 1 (uncertain), 2 (happened). Per-class
precision or recall with an empty denominator is 0, and so is F1 when both
are 0. The macro average is the unweighted mean of the per-class values
(macro F1 = mean of per-class F1).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from montee.corpus import RelationRecord, open_text
from montee.errors import EvalError
from montee.modtag import map_certainty

LABELS = (0, 1, 2)
LABEL_NAMES = {0: "didn't happen", 1: "uncertain", 2: "happened"}


def relation_id(doc_id: str, sent: int, head: int) -> str:
    return f"{doc_id}:{sent}:{head}"


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float


@dataclass
class ScoreReport:
    per_class: dict[int, PRF]
    micro: PRF
    macro: PRF
    matrix: list[list[int]]    # matrix[gold][pred]
    n: int

    @property
    def accuracy(self) -> float:
        return sum(self.matrix[k][k] for k in LABELS) / self.n if self.n else 0.0

    def format(self) -> str:
        lines = [
            f"{'':16}{'Precision':>10}{'Recall':>10}{'F1':>10}",
            _row("Micro-average", self.micro),
            _row("Macro-average", self.macro),
            "",
        ]
        for k in LABELS:
            lines.append(_row(f"{k} {LABEL_NAMES[k]}", self.per_class[k]))
        lines += ["", f"confusion (rows gold, cols pred), n={self.n}", "      " + "".join(f"{k:>6}" for k in LABELS)]
        for k in LABELS:
            lines.append(f"{k:>6}" + "".join(f"{c:>6}" for c in self.matrix[k]))
        return "\n".join(lines) + "\n"


def _row(name: str, m: PRF) -> str:
    return f"{name:16}{m.precision:>10.2f}{m.recall:>10.2f}{m.f1:>10.2f}"


# Metrics are computed exactly and rounded to float once, so algebraically
# equal quantities (micro P, R, F1 and accuracy) are also equal as floats.

def _safe_div(a, b) -> Fraction:
    return Fraction(a) / b if b else Fraction(0)


def _f1(p: Fraction, r: Fraction) -> Fraction:
    return _safe_div(2 * p * r, p + r)


def _prf(p: Fraction, r: Fraction, f: Fraction) -> PRF:
    return PRF(float(p), float(r), float(f))


def confusion_matrix(gold: Sequence[int], pred: Sequence[int]) -> list[list[int]]:
    matrix = [[0] * len(LABELS) for _ in LABELS]
    for g, p in zip(gold, pred):
        matrix[g][p] += 1
    return matrix


def _check_labels(labels: Mapping[str, int], name: str):
    bad = {k: v for k, v in labels.items() if v not in LABELS}
    if bad:
        raise EvalError(f"{name}: labels outside {{0,1,2}}: {sorted(bad.items())[:5]}")


def score(gold: Mapping[str, int], pred: Mapping[str, int]) -> ScoreReport:
    """Score predicted certainty labels against gold ones, keyed by relation id."""
    missing = sorted(set(gold) - set(pred))
    extra = sorted(set(pred) - set(gold))
    if missing or extra:
        raise EvalError(f"relation id mismatch: missing {missing}, extra {extra}")
    _check_labels(gold, "gold")
    _check_labels(pred, "pred")
    ids = sorted(gold)
    matrix = confusion_matrix([gold[i] for i in ids], [pred[i] for i in ids])

    exact = {}
    tp_sum = fp_sum = fn_sum = 0
    for k in LABELS:
        tp = matrix[k][k]
        fp = sum(matrix[g][k] for g in LABELS) - tp
        fn = sum(matrix[k]) - tp
        p, r = _safe_div(tp, tp + fp), _safe_div(tp, tp + fn)
        exact[k] = (p, r, _f1(p, r))
        tp_sum, fp_sum, fn_sum = tp_sum + tp, fp_sum + fp, fn_sum + fn
    micro_p = _safe_div(tp_sum, tp_sum + fp_sum)
    micro_r = _safe_div(tp_sum, tp_sum + fn_sum)
    micro = _prf(micro_p, micro_r, _f1(micro_p, micro_r))
    macro = _prf(*(sum(exact[k][j] for k in LABELS) / len(LABELS) for j in range(3)))
    per_class = {k: _prf(*v) for k, v in exact.items()}
    return ScoreReport(per_class, micro, macro, matrix, len(ids))


def cohens_kappa(a: Sequence[int], b: Sequence[int]) -> float:
    if len(a) != len(b):
        raise EvalError(f"label sequences differ in length: {len(a)} vs {len(b)}")
    if not a:
        raise EvalError("kappa needs at least one item")
    n = len(a)
    p_o = Fraction(sum(x == y for x, y in zip(a, b)), n)
    ca, cb = Counter(a), Counter(b)
    p_e = Fraction(sum(ca[k] * cb[k] for k in set(ca) | set(cb)), n * n)
    if p_e == 1:
        return 1.0 if p_o == 1 else 0.0
    return float((p_o - p_e) / (1 - p_e))


def disagreements(a: Mapping[str, int], b: Mapping[str, int]) -> list[tuple[str, int, int]]:
    return [(k, a[k], b[k]) for k in sorted(a) if k in b and a[k] != b[k]]


def sample_dense(records: Iterable[RelationRecord], min_tagged_fraction: float) -> list[str]:
    """Doc ids whose fraction of tagged relations is at least the threshold."""
    if not 0 <= min_tagged_fraction <= 1:
        raise ValueError("min_tagged_fraction must be in [0, 1]")
    totals: dict[str, int] = defaultdict(int)
    tagged: dict[str, int] = defaultdict(int)
    for rec in records:
        totals[rec.doc_id] += 1
        if rec.tag is not None:
            tagged[rec.doc_id] += 1
    threshold = Fraction(str(min_tagged_fraction))
    return sorted(d for d, n in totals.items() if n and Fraction(tagged[d], n) >= threshold)


# -- TSV label files -------------------------------------------------------------

def read_labels(path) -> dict[str, int]:
    """Read ``relation-id <TAB> label`` lines. Lines starting with '#' are skipped."""
    labels: dict[str, int] = {}
    with open_text(path) as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.rstrip("\r\n").split("\t")
            if len(cols) < 2:
                raise EvalError(f"{path}, line {lineno}: expected relation-id and label")
            rid, raw = cols[0].strip(), cols[1].strip()
            try:
                label = int(raw)
            except ValueError:
                raise EvalError(f"{path}, line {lineno}: non-integer label {raw!r}") from None
            if label not in LABELS:
                raise EvalError(f"{path}, line {lineno}: label {label} not in 0/1/2")
            if rid in labels and labels[rid] != label:
                raise EvalError(f"{path}, line {lineno}: conflicting labels for {rid}")
            labels[rid] = label
    return labels


def labels_from_records(records: Iterable[RelationRecord]) -> dict[str, int]:
    labels: dict[str, int] = {}
    for rec in records:
        rid = relation_id(rec.doc_id, rec.sent, rec.relation.head)
        label = rec.certainty
        if label is None:
            label = map_certainty(rec.tag.category if rec.tag else None)
        if labels.get(rid, label) != label:
            raise EvalError(f"conflicting labels for relation {rid}")
        labels[rid] = label
    return labels


def write_labels(labels: Mapping[str, int], path) -> None:
    with open_text(path, "w") as f:
        for rid in sorted(labels):
            f.write(f"{rid}\t{labels[rid]}\n")
