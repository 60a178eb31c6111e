"""Structural corpus statistics: projectivity, dependency distances.

Dependency distance is the number of EDUs strictly between head and
dependent, so adjacent EDUs are at distance 0.  ROOT attachments have
no distance (the virtual root is not an EDU) and the Same-unit
pseudo-relation joins fragments of a single unit, so both are left out
of the distance analysis.
"""

from collections import Counter
from dataclasses import dataclass

from .relations import ROOT

SAME_UNIT = "Same-unit"

# Bucket boundaries of the distance distribution, inclusive on both
# ends; None means unbounded.
DISTANCE_BUCKETS = (
    ("0", 0, 0),
    ("1", 1, 1),
    ("2", 2, 2),
    ("3-5", 3, 5),
    ("6-10", 6, 10),
    ("11-15", 11, 15),
    (">15", 16, None),
)


class RootArcError(ValueError):
    """ROOT attachments carry no dependency distance."""


def dependency_distance(head, dep):
    """EDUs strictly between head and dependent: abs(head - dep) - 1."""
    if head == 0:
        raise RootArcError("no distance defined for ROOT arc to %d" % dep)
    if head == dep:
        raise ValueError("head and dependent coincide at %d" % head)
    return abs(head - dep) - 1


def distance_bucket(distance):
    for label, lo, hi in DISTANCE_BUCKETS:
        if distance >= lo and (hi is None or distance <= hi):
            return label
    raise ValueError("negative distance %d" % distance)


def is_projective(tree):
    """True iff no arcs cross when EDUs are laid out in document order.

    Equivalently: for every arc (h, d), every EDU strictly between h
    and d belongs to the subtree of h.  The ROOT arc participates with
    the virtual root at position 0.
    """
    descendants = {}
    for head, dep, _rel in tree.arcs():
        lo, hi = (head, dep) if head < dep else (dep, head)
        if hi - lo <= 1:
            continue
        if head not in descendants:
            descendants[head] = tree.descendants(head)
        inside = descendants[head]
        for between in range(lo + 1, hi):
            if between not in inside:
                return False
    return True


def count_non_projective(corpus):
    return sum(1 for tree in corpus if not is_projective(tree))


def _distance_arcs(corpus):
    """(distance, relation) for every arc in the distance analysis:
    ROOT and Same-unit attachments are omitted."""
    for tree in corpus:
        for head, dep, rel in tree.arcs():
            if head == 0 or rel == SAME_UNIT:
                continue
            yield dependency_distance(head, dep), rel


@dataclass
class DistanceHistogram:
    """Counts and fractions per distance bucket."""

    buckets: dict  # label -> (count, fraction)
    total: int

    def count(self, label):
        return self.buckets[label][0]

    def fraction(self, label):
        return self.buckets[label][1]

    def fraction_beyond(self, distance=5):
        """Share of arcs with dependency distance > ``distance``.
        ``distance`` must fall on a bucket boundary."""
        tail = 0
        for label, lo, hi in DISTANCE_BUCKETS:
            if lo > distance:
                tail += self.count(label)
            elif hi is None or hi > distance:
                raise ValueError("%d is not a bucket boundary" % distance)
        return tail / self.total if self.total else 0.0


def distance_histogram(corpus):
    counts = Counter()
    total = 0
    for distance, _rel in _distance_arcs(corpus):
        counts[distance_bucket(distance)] += 1
        total += 1
    buckets = {}
    for label, _lo, _hi in DISTANCE_BUCKETS:
        count = counts[label]
        buckets[label] = (count, count / total if total else 0.0)
    return DistanceHistogram(buckets=buckets, total=total)


def long_range_relation_profile(corpus, min_distance):
    """Fine-label frequencies among arcs with distance > min_distance,
    sorted by descending count, ties broken by label name."""
    counts = Counter()
    for distance, rel in _distance_arcs(corpus):
        if distance > min_distance:
            counts[rel] += 1
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))
