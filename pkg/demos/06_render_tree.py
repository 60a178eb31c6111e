"""
Rendering a tree as a text arc diagram
======================================

EDUs are listed vertically with the virtual root on top; labeled arcs
are drawn in the left margin with the arrow at the dependent.  The same
diagram is available from the command line as ``disdep render FILE``.
"""

from pathlib import Path

from disdep import load_document
from disdep.render import render_tree

for name in ("sample_two.dep", "sample_one.dep"):
    tree = load_document(Path(__file__).parent / "data" / name)
    print(render_tree(tree))
