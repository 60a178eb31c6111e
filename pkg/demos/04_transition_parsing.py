"""
Transition-based parsing
========================

The arc-standard system derives a projective tree in exactly 2n
actions.  A static oracle converts gold trees into action sequences;
a margin classifier trained on those sequences drives greedy decoding.
The two-stage variant first parses without labels, then assigns
relations in pre-order with tree-context features.
"""

from pathlib import Path

from disdep.corpus import load_directory
from disdep.metrics import las, uas
from disdep.transition import (
    oracle_actions,
    train_two_stage,
    train_vanilla,
)

corpus = load_directory(Path(__file__).parent / "data")

# The oracle's action sequence for the first document.
doc = corpus[0]
actions = oracle_actions(doc)
print("doc %s (%d EDUs) derives in %d actions:" % (doc.doc_id, len(doc), len(actions)))
print(" ", " ".join(a.name for a in actions[:6]), "...")

# Overfit both parsers on this tiny corpus: with enough margin-training
# epochs the training documents parse back exactly.
vanilla, _skipped = train_vanilla(corpus, C=10.0, epochs=60, seed=0)
two_stage, _skipped = train_two_stage(corpus, c1=10.0, c2=10.0, epochs=60, seed=0)

for name, parser in (("vanilla", vanilla), ("two-stage", two_stage)):
    pred = [parser.parse(t.texts, doc_id=t.doc_id) for t in corpus]
    print(
        "%-10s train UAS %.2f  LAS %.2f"
        % (name, uas(pred, corpus), las(pred, corpus))
    )

# The decoded tree of the first document, arc by arc.
pred = vanilla.parse(doc.texts, doc_id=doc.doc_id)
for edu in pred.edus:
    print("  e%-2d <- e%-2d %s" % (edu.id, edu.head, edu.relation))
