"""
Graph-based parsing
===================

Every candidate arc is scored per relation label; decoding finds the
maximum spanning arborescence (single root child, non-projective trees
allowed) with Chu-Liu/Edmonds.  Training is a structured averaged
perceptron: decode with current weights, push toward the gold tree's
features on mistakes.
"""

from pathlib import Path

import numpy as np

from disdep.corpus import load_directory
from disdep.graph import ArcScoreMatrix, ROOT_IDX, ARC_LABEL_IDX, decode_mst, score_arcs, train_graph
from disdep.metrics import las, uas

corpus = load_directory(Path(__file__).parent / "data")

# Decoding is exact for any score matrix, including ones whose optimum
# crosses arcs: force the non-projective structure 0->2, 2->4, 4->1, 2->3.
n = 4
scores = np.zeros((n + 1, n + 1))
np.fill_diagonal(scores, -np.inf)
scores[:, 0] = -np.inf
for h, d in ((0, 2), (2, 4), (4, 1), (2, 3)):
    scores[h, d] = 5.0
labels = np.full((n + 1, n + 1), int(ARC_LABEL_IDX[0]), dtype=np.int64)
labels[0, :] = ROOT_IDX
matrix = ArcScoreMatrix(n=n, scores=scores, label_idx=labels, texts=["u%d" % i for i in range(n)])
crossed = decode_mst(matrix)
print("forced optimum:", sorted((e.head, e.id) for e in crossed.edus))

# Train on the bundled samples until they decode back exactly.
parser = train_graph(corpus, epochs=12)
pred = [parser.parse(t.texts, doc_id=t.doc_id) for t in corpus]
print("train UAS %.2f  LAS %.2f" % (uas(pred, corpus), las(pred, corpus)))

# The score matrix of a trained model, peeked at for one document.
doc = corpus[0]
m = score_arcs(doc.texts, parser)
print("best arcs into each EDU of %s:" % doc.doc_id)
for d in range(1, len(doc) + 1):
    h = int(np.argmax(m.scores[:, d]))
    print("  e%-2d best head e%-2d label %-12s score %.2f" % (d, h, m.best_label(h, d), m.best_score(h, d)))
