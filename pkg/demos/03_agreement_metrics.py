"""
Attachment scores and annotator agreement
=========================================

UAS counts EDUs with matching heads, LAS additionally requires the
relation label to match, and Cohen's Kappa chance-corrects the label
agreement on head-matched EDUs.  Here a second "annotator" view of the
sample document is simulated by reattaching one EDU and flipping one
label.
"""

from pathlib import Path

from disdep import agreement_report, kappa, las, load_document, uas
from disdep.corpus import DiscourseTree, EduNode

gold = load_document(Path(__file__).parent / "data" / "sample_one.dep")

# Second annotation: e9 hangs under e4 instead of e10, and e2 becomes
# an Aspect elaboration.
edited = []
for edu in gold.edus:
    head, rel = edu.head, edu.relation
    if edu.id == 9:
        head = 4
    if edu.id == 2:
        rel = "Aspect"
    edited.append(EduNode(edu.id, edu.text, head, rel))
second = DiscourseTree(gold.doc_id, edited, source="anno2")

print("UAS :", uas([second], [gold]))          # 10/11 heads agree
print("LAS :", las([second], [gold]))          # one matched head has a new label
print("LAS (coarse):", las([second], [gold], labels="coarse"))
print("Kappa:", round(kappa([second], [gold]), 3))

# The report form used for annotator pairs: identical annotations give
# the 1.0 sanity row.
rows = agreement_report({"self": [(gold, gold)], "anno2": [(gold, second)]})
print("\npair        docs   UAS    LAS    Kappa")
for row in rows:
    r = row.report
    print("%-10s %4d  %.3f  %.3f  %.3f" % (row.pair, row.n_docs, r.uas, r.las, r.kappa))
