"""Static text rendering of a discourse dependency tree.

EDUs are listed vertically (the virtual root on top) and labeled arcs
are drawn in the left margin, nested by span, with the arrow pointing
at the dependent row.  Output is deterministic byte-for-byte.
"""


def _arc_depths(arcs):
    """Nesting depth per arc: innermost spans get depth 1."""
    spans = sorted(
        ((min(h, d), max(h, d), h, d) for h, d, _r in arcs),
        key=lambda s: (s[1] - s[0], s[0]),
    )
    depths = {}
    for lo, hi, h, d in spans:
        inner = [
            depth
            for (lo2, hi2), depth in depths.items()
            if lo <= lo2 and hi2 <= hi and (lo2, hi2) != (lo, hi)
        ]
        depths[(lo, hi)] = 1 + max(inner, default=0)
    return depths


def render_tree(tree):
    """Arc-diagram text for a validated tree: one line per node
    (virtual root included), each dependent row naming its relation."""
    arcs = tree.arcs()
    n = len(tree)
    depths = _arc_depths(arcs)
    max_depth = max(depths.values())
    margin = 2 * max_depth

    corner = set()
    vertical = set()
    horizontal = set()
    arrow_rows = set()
    for h, d, _r in arcs:
        lo, hi = min(h, d), max(h, d)
        col = 2 * (max_depth - depths[(lo, hi)])
        for row in (h, d):
            corner.add((row, col))
            for x in range(col + 1, margin):
                horizontal.add((row, x))
        for row in range(lo + 1, hi):
            vertical.add((row, col))
        arrow_rows.add(d)

    node_width = len("e%d" % n)
    label_width = max(len(e.relation) for e in tree.edus)
    lines = []
    for row in range(n + 1):
        cells = []
        for x in range(margin):
            if row in arrow_rows and x == margin - 1:
                cells.append(">")
            elif (row, x) in corner:
                cells.append("+")
            elif (row, x) in horizontal and (row, x) in vertical:
                cells.append("+")
            elif (row, x) in horizontal:
                cells.append("-")
            elif (row, x) in vertical:
                cells.append("|")
            else:
                cells.append(" ")
        node = ("e%d" % row).ljust(node_width)
        if row == 0:
            label = "".ljust(label_width)
            text = "ROOT"
        else:
            edu = tree.edu(row)
            label = edu.relation.ljust(label_width)
            text = edu.text
        lines.append("%s %s %s %s" % ("".join(cells), node, label, text))
    return "\n".join(lines) + "\n"
