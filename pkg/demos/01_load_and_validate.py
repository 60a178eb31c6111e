"""
Loading and validating treebank documents
==========================================

Every document file holds one dependency tree over the EDUs of an
abstract.  Loading validates the tree invariants (contiguous ids,
single root, no cycles, ROOT label exactly on the root attachment), so
code downstream never sees a malformed tree.
"""

from pathlib import Path

from disdep import load_document, save_document
from disdep.corpus import InvariantError, load_directory

DATA = Path(__file__).parent / "data"

# Load one document and poke at it.
tree = load_document(DATA / "sample_one.dep")
print("doc:", tree.doc_id, "with", len(tree), "EDUs")
print("root EDU:", tree.root_id, "->", tree.edu(tree.root_id).text)
for edu in tree.edus[:3]:
    print("  e%d <- e%d (%s)" % (edu.id, edu.head, edu.relation))

# A whole directory loads in one call.
corpus = load_directory(DATA)
print("loaded", len(corpus), "documents from", DATA.name)

# Saving normalizes the file (fixed key order, canonical relation
# strings); a reload reproduces the tree exactly.  The document id
# comes from the file name, so round-trip under the same name.
out = Path("/tmp") / "sample_one.dep"
save_document(tree, out)
assert load_document(out) == tree
print("round-trip identity holds")

# Broken trees are refused with the offending node named.
from disdep.corpus import EduNode, DiscourseTree

try:
    DiscourseTree("bad", [EduNode(1, "a", 1, "Joint")])
except InvariantError as exc:
    print("rejected:", exc)
