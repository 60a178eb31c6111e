"""Attachment and agreement scoring: UAS, LAS, Cohen's Kappa.

UAS is the fraction of EDUs assigned the same head in both tree sets;
LAS additionally requires the relation label to match.  Both are
micro-averaged: all EDUs are pooled across documents and every EDU,
including the one attached to the virtual root, contributes one
attachment decision.

Kappa measures relation-label agreement on the EDUs whose heads match
in both annotations, chance-corrected with each side's own marginal
label distribution on that restricted set (Cohen's definition).
"""

from collections import Counter
from dataclasses import dataclass

from .relations import coarse_of


class AlignmentError(ValueError):
    """Tree sets do not pair up document-by-document."""


class DegenerateError(ValueError):
    """Kappa is undefined: chance agreement is exactly 1."""


@dataclass
class EvalReport:
    uas: float
    las: float
    kappa: float
    n_edus: int
    n_docs: int


def _aligned(pred, gold):
    """Pair documents by doc_id; raises AlignmentError on mismatch."""
    pred_by_id = {t.doc_id: t for t in pred}
    gold_by_id = {t.doc_id: t for t in gold}
    if set(pred_by_id) != set(gold_by_id):
        missing = set(gold_by_id) ^ set(pred_by_id)
        raise AlignmentError(
            "tree sets cover different documents: %s" % sorted(missing)[:5]
        )
    pairs = []
    for doc_id in sorted(pred_by_id):
        a, b = pred_by_id[doc_id], gold_by_id[doc_id]
        if len(a) != len(b):
            raise AlignmentError(
                "doc %s: %d EDUs vs %d EDUs" % (doc_id, len(a), len(b))
            )
        pairs.append((a, b))
    return pairs


def _label(edu, granularity):
    return coarse_of(edu.relation) if granularity == "coarse" else edu.relation


def uas(pred, gold):
    """Micro-averaged fraction of EDUs with matching heads."""
    matched = total = 0
    for a, b in _aligned(pred, gold):
        total += len(a)
        matched += sum(x.head == y.head for x, y in zip(a.edus, b.edus))
    return matched / total if total else 0.0


def las(pred, gold, labels="fine"):
    """Micro-averaged fraction of EDUs with matching head and label."""
    matched = total = 0
    for a, b in _aligned(pred, gold):
        total += len(a)
        matched += sum(
            x.head == y.head and _label(x, labels) == _label(y, labels)
            for x, y in zip(a.edus, b.edus)
        )
    return matched / total if total else 0.0


def kappa(pred, gold, labels="fine"):
    """Cohen's Kappa over relation labels, restricted to EDUs whose
    heads match in both annotations.

    kappa = (p_o - p_e) / (1 - p_e), where p_o is observed label
    agreement and p_e the product of the two sides' marginal label
    distributions.  When p_e is exactly 1 (one label on both sides),
    returns 1.0 on full agreement and raises DegenerateError otherwise.
    """
    marg_a = Counter()
    marg_b = Counter()
    agree = total = 0
    for a, b in _aligned(pred, gold):
        for x, y in zip(a.edus, b.edus):
            if x.head != y.head:
                continue
            la, lb = _label(x, labels), _label(y, labels)
            marg_a[la] += 1
            marg_b[lb] += 1
            agree += la == lb
            total += 1
    if total == 0:
        raise DegenerateError("no head-matched EDUs to compare labels on")
    p_o = agree / total
    p_e = sum(
        (marg_a[label] / total) * (marg_b[label] / total) for label in marg_a
    )
    if p_e >= 1.0 - 1e-12:
        if p_o >= 1.0 - 1e-12:
            return 1.0
        raise DegenerateError(
            "single label on both sides but disagreement present"
        )
    return (p_o - p_e) / (1.0 - p_e)


def evaluate(pred, gold, labels="fine"):
    """Full attachment/agreement report for two aligned tree sets."""
    pairs = _aligned(pred, gold)
    return EvalReport(
        uas=uas(pred, gold),
        las=las(pred, gold, labels=labels),
        kappa=kappa(pred, gold, labels=labels),
        n_edus=sum(len(a) for a, _ in pairs),
        n_docs=len(pairs),
    )


@dataclass
class AgreementRow:
    pair: str
    n_docs: int
    report: EvalReport | None
    error: str | None = None


def agreement_report(pairs, labels="fine"):
    """One row per annotator pair: doc count, UAS, LAS, Kappa.

    ``pairs`` maps a pair name to a list of (annotation_a, annotation_b)
    tree pairs.  Alignment failures are recorded per row and do not
    affect other pairs.
    """
    rows = []
    for name in sorted(pairs):
        doc_pairs = pairs[name]
        first = [a for a, _ in doc_pairs]
        second = [b for _, b in doc_pairs]
        try:
            report = evaluate(first, second, labels=labels)
            rows.append(AgreementRow(name, len(doc_pairs), report))
        except (AlignmentError, DegenerateError) as exc:
            rows.append(AgreementRow(name, len(doc_pairs), None, error=str(exc)))
    return rows
