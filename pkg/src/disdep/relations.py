"""Inventory of discourse relation labels used in SciDTB-style treebanks.

The treebank distinguishes a fine-grained label set (26 labels counting
ROOT) and a coarse-grained set (17 labels counting ROOT).  Every fine
label belongs to exactly one coarse class.  Coarse class names are
themselves accepted wherever a label is expected, so a tree that has
already been collapsed to coarse labels can be processed by the same
code paths (``coarse_of`` is the identity on coarse names).

On disk the labels appear as lower-cased, hyphenated strings with a
class prefix for the multi-member classes (``elab-addition``,
``bg-goal``, ``exp-evidence``).  ``parse_relation`` normalizes and maps
those strings to canonical names; ``file_string`` is its inverse for
the canonical emission form.  Annotation-tool variants (underscores,
case differences, historical spellings) are tolerated through
``FILE_ALIASES``, which is the single table to adjust if a release uses
different strings.
"""

ROOT = "ROOT"

# Virtual-root records in treebank files carry a "null" relation; the
# loader consumes the record, so NULL never appears inside a tree.
NULL = "null"

# Coarse class -> fine members.  The single source of truth for both
# label sets and for the fine -> coarse mapping.
RELATION_TAXONOMY = {
    "ROOT": ["ROOT"],
    "Attribution": ["Attribution"],
    "Background": ["Related", "Goal", "General"],
    "Cause-effect": ["Cause", "Result"],
    "Comparison": ["Comparison"],
    "Condition": ["Condition"],
    "Contrast": ["Contrast"],
    "Elaboration": [
        "Addition",
        "Aspect",
        "Process-step",
        "Definition",
        "Enumerate",
        "Example",
    ],
    "Enablement": ["Enablement"],
    "Evaluation": ["Evaluation"],
    "Explain": ["Evidence", "Reason"],
    "Joint": ["Joint"],
    "Manner-means": ["Manner-means"],
    "Progression": ["Progression"],
    "Same-unit": ["Same-unit"],
    "Summary": ["Summary"],
    "Temporal": ["Temporal"],
}

COARSE_LABELS = tuple(RELATION_TAXONOMY)

FINE_LABELS = tuple(
    fine for members in RELATION_TAXONOMY.values() for fine in members
)

# Fine labels that may appear on a real arc (everything but ROOT).
ARC_LABELS = tuple(label for label in FINE_LABELS if label != ROOT)

COARSE_OF = {
    fine: coarse
    for coarse, members in RELATION_TAXONOMY.items()
    for fine in members
}
# Identity on coarse names, so collapsing labels twice is a no-op.
for _coarse in COARSE_LABELS:
    COARSE_OF.setdefault(_coarse, _coarse)

# Canonical on-disk string per fine label.  Multi-member coarse classes
# use a short class prefix, mirroring the released annotation files.
FILE_STRINGS = {
    "ROOT": "ROOT",
    "Attribution": "attribution",
    "Related": "bg-related",
    "Goal": "bg-goal",
    "General": "bg-general",
    "Cause": "cause",
    "Result": "result",
    "Comparison": "comparison",
    "Condition": "condition",
    "Contrast": "contrast",
    "Addition": "elab-addition",
    "Aspect": "elab-aspect",
    "Process-step": "elab-process-step",
    "Definition": "elab-definition",
    "Enumerate": "elab-enumerate",
    "Example": "elab-example",
    "Enablement": "enablement",
    "Evaluation": "evaluation",
    "Evidence": "exp-evidence",
    "Reason": "exp-reason",
    "Joint": "joint",
    "Manner-means": "manner-means",
    "Progression": "progression",
    "Same-unit": "same-unit",
    "Summary": "summary",
    "Temporal": "temporal",
}

# Accepted input spellings beyond the canonical file strings.  Keys are
# compared after normalization (lower case, underscores to hyphens).
FILE_ALIASES = {
    "bg-compare": "Related",
    "elab-enum-member": "Enumerate",
    "manner-mean": "Manner-means",
    "sameunit": "Same-unit",
}

_LOOKUP = {}
for _fine, _raw in FILE_STRINGS.items():
    _LOOKUP[_raw.lower()] = _fine
for _fine in FINE_LABELS:
    _LOOKUP.setdefault(_fine.lower(), _fine)
# Coarse names parse back to themselves, so coarse-collapsed trees
# survive a save/load cycle.
for _coarse in COARSE_LABELS:
    _LOOKUP.setdefault(_coarse.lower(), _coarse)
for _raw, _fine in FILE_ALIASES.items():
    _LOOKUP.setdefault(_raw, _fine)
_LOOKUP[NULL] = NULL
_LOOKUP["none"] = NULL


class UnknownRelationError(ValueError):
    """Raised for relation strings not covered by the inventory."""


def normalize_relation_string(raw):
    return raw.strip().lower().replace("_", "-")


def parse_relation(raw):
    """Map a raw relation string from a treebank file to its canonical
    fine label.  Raises UnknownRelationError for unrecognized strings.
    """
    if not isinstance(raw, str):
        raise UnknownRelationError("relation must be a string, got %r" % (raw,))
    label = _LOOKUP.get(normalize_relation_string(raw))
    if label is None:
        raise UnknownRelationError("unknown relation string %r" % (raw,))
    return label


def file_string(label):
    """Canonical on-disk form of a label (inverse of parse_relation)."""
    form = FILE_STRINGS.get(label)
    if form is not None:
        return form
    if label in RELATION_TAXONOMY:
        return label.lower()
    raise UnknownRelationError("not a relation label: %r" % (label,))


def coarse_of(label):
    """Coarse class of a label; total over fine and coarse names."""
    try:
        return COARSE_OF[label]
    except KeyError:
        raise UnknownRelationError("unknown label %r" % (label,)) from None


def is_fine(label):
    return label in FILE_STRINGS


def is_coarse(label):
    return label in RELATION_TAXONOMY
