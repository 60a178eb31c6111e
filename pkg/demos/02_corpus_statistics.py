"""
Structural statistics over a corpus
===================================

Dependency distance counts the EDUs strictly between head and
dependent; ROOT and Same-unit attachments stay out of the analysis.
Projectivity is the no-crossing-arcs property, checked per tree.
"""

from pathlib import Path

from disdep import (
    count_relations,
    dependency_distance,
    distance_histogram,
    is_projective,
    long_range_relation_profile,
)
from disdep.corpus import load_directory

corpus = load_directory(Path(__file__).parent / "data")

print("attachments:", count_relations(corpus))
print("adjacent EDUs 3,4 are at distance", dependency_distance(3, 4))
print("EDUs 10 and 2 are at distance", dependency_distance(10, 2))

hist = distance_histogram(corpus)
print("\ndistance histogram over", hist.total, "arcs:")
for label in ("0", "1", "2", "3-5", "6-10", "11-15", ">15"):
    count, frac = hist.buckets[label]
    print("  %-6s %3d  %5.1f%%" % (label, count, 100 * frac))
print("share beyond distance 5: %.1f%%" % (100 * hist.fraction_beyond(5)))

print("\nprojectivity per document:")
for tree in corpus:
    print("  %-12s %s" % (tree.doc_id, is_projective(tree)))

print("\nmost frequent relations at distance > 1:")
for label, count in long_range_relation_profile(corpus, min_distance=1)[:5]:
    print("  %-14s %d" % (label, count))
