"""Domain types and file I/O for discourse dependency treebanks.

A document is a sequence of elementary discourse units (EDUs), each
attached to exactly one head EDU with a labeled relation; head 0 is the
virtual root.  Files hold one document each, as JSON::

    {"root": [
        {"id": 0, "parent": -1, "text": "ROOT", "relation": "null"},
        {"id": 1, "parent": 2, "text": "...",  "relation": "elab-addition"},
        {"id": 2, "parent": 0, "text": "...",  "relation": "ROOT"}
    ]}

The id-0 record denotes the virtual root; it is consumed on load and
re-emitted on save, never stored as an EDU.  Trees are immutable after
construction and every constructor validates the tree invariants, so a
``DiscourseTree`` in hand is always well formed.
"""

import json
from dataclasses import dataclass
from pathlib import Path

from . import relations
from .relations import NULL, ROOT, UnknownRelationError


class TreebankError(Exception):
    """Base class for treebank ingestion and validation failures."""


class ParseError(TreebankError):
    """File is not parseable as a treebank document."""


class SchemaError(TreebankError):
    """File parses but violates the document schema."""


class InvariantError(TreebankError):
    """Document violates a tree invariant (cycle, multi-root, ...)."""


# Extensions recognized when scanning corpus directories.
DOCUMENT_SUFFIXES = (".dep", ".json")


@dataclass(frozen=True)
class EduNode:
    """One EDU: 1-based position, raw text, head attachment, relation."""

    id: int
    text: str
    head: int
    relation: str


class DiscourseTree:
    """A validated single-rooted dependency tree over a document's EDUs.

    ``source`` records where an annotation copy came from (directory
    provenance such as ``"dev/gold"``); it does not take part in
    equality, which is structural over ``doc_id`` and the EDUs.
    """

    def __init__(self, doc_id, edus, source="gold"):
        self.doc_id = doc_id
        self.edus = tuple(edus)
        self.source = source
        validate_edus(doc_id, self.edus)
        self._children = {h: [] for h in range(len(self.edus) + 1)}
        for edu in self.edus:
            self._children[edu.head].append(edu.id)

    def __len__(self):
        return len(self.edus)

    def __eq__(self, other):
        if not isinstance(other, DiscourseTree):
            return NotImplemented
        return self.doc_id == other.doc_id and self.edus == other.edus

    def __hash__(self):
        return hash((self.doc_id, self.edus))

    def __repr__(self):
        return "DiscourseTree(%r, %d EDUs)" % (self.doc_id, len(self.edus))

    def edu(self, i):
        """EDU with id i (1-based)."""
        if not 1 <= i <= len(self.edus):
            raise IndexError("EDU id %d out of range 1..%d" % (i, len(self.edus)))
        return self.edus[i - 1]

    def head_of(self, i):
        return self.edu(i).head

    def relation_of(self, i):
        return self.edu(i).relation

    def children_of(self, i):
        """Dependents of node i (0 = virtual root), in document order."""
        return tuple(self._children[i])

    @property
    def root_id(self):
        return self._children[0][0]

    @property
    def texts(self):
        return [e.text for e in self.edus]

    def arcs(self):
        """All (head, dependent, relation) attachments, one per EDU."""
        return [(e.head, e.id, e.relation) for e in self.edus]

    def descendants(self, i):
        """Set of all EDU ids in the subtree below node i (exclusive)."""
        out = set()
        stack = list(self._children[i])
        while stack:
            node = stack.pop()
            out.add(node)
            stack.extend(self._children[node])
        return out

    def depth_of(self, i):
        """Arc count from node i up to the virtual root."""
        depth = 0
        while i != 0:
            i = self.head_of(i)
            depth += 1
        return depth


@dataclass
class CorpusSplit:
    """Train/dev/test partitions with disjoint document ids."""

    train: list
    dev: list
    test: list

    def __post_init__(self):
        seen = {}
        for part in ("train", "dev", "test"):
            for tree in getattr(self, part):
                if tree.doc_id in seen and seen[tree.doc_id] != part:
                    raise InvariantError(
                        "doc %s appears in both %s and %s partitions"
                        % (tree.doc_id, seen[tree.doc_id], part)
                    )
                seen[tree.doc_id] = part

    def __iter__(self):
        yield from self.train
        yield from self.dev
        yield from self.test


def validate_edus(doc_id, edus):
    """Check all tree invariants, raising InvariantError with the doc id
    and offending node id on the first violation."""
    n = len(edus)
    if n == 0:
        raise InvariantError("doc %s: document has no EDUs" % doc_id)
    seen_ids = set()
    for edu in edus:
        if edu.id in seen_ids:
            raise InvariantError("doc %s: duplicate EDU id %d" % (doc_id, edu.id))
        seen_ids.add(edu.id)
    if seen_ids != set(range(1, n + 1)):
        raise InvariantError(
            "doc %s: EDU ids %s are not contiguous 1..%d"
            % (doc_id, sorted(seen_ids), n)
        )
    by_id = {e.id: e for e in edus}
    roots = []
    for edu in edus:
        if edu.head == edu.id:
            raise InvariantError(
                "doc %s: node %d attaches to itself" % (doc_id, edu.id)
            )
        if not 0 <= edu.head <= n:
            raise InvariantError(
                "doc %s: node %d has head %d outside 0..%d"
                % (doc_id, edu.id, edu.head, n)
            )
        if edu.relation == NULL or edu.relation not in relations.COARSE_OF:
            raise InvariantError(
                "doc %s: node %d carries invalid relation %r"
                % (doc_id, edu.id, edu.relation)
            )
        if (edu.relation == ROOT) != (edu.head == 0):
            raise InvariantError(
                "doc %s: node %d relation %s inconsistent with head %d "
                "(ROOT label iff head 0)" % (doc_id, edu.id, edu.relation, edu.head)
            )
        if edu.head == 0:
            roots.append(edu.id)
    if not roots:
        raise InvariantError("doc %s: no node attaches to the root" % doc_id)
    if len(roots) > 1:
        raise InvariantError(
            "doc %s: multiple root attachments at nodes %s" % (doc_id, roots)
        )
    # Every head chain must reach the virtual root without revisiting.
    for edu in edus:
        slow = edu.id
        path = set()
        while slow != 0:
            if slow in path:
                raise InvariantError(
                    "doc %s: cycle through node %d" % (doc_id, edu.id)
                )
            path.add(slow)
            slow = by_id[slow].head


def document_id(path):
    """Document id for a file: the name with the treebank suffix removed."""
    name = Path(path).name
    for suffix in DOCUMENT_SUFFIXES:
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return name


def load_document(path, source="gold"):
    """Load and validate one document file.

    Raises ParseError for non-JSON content, SchemaError for missing
    fields or unknown relation strings, InvariantError for structurally
    broken trees.
    """
    path = Path(path)
    doc_id = document_id(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError("doc %s: not valid JSON (%s)" % (doc_id, exc)) from exc

    if not isinstance(payload, dict) or "root" not in payload:
        raise SchemaError("doc %s: expected top-level object with 'root'" % doc_id)
    records = payload["root"]
    if not isinstance(records, list):
        raise SchemaError("doc %s: 'root' must hold a list of nodes" % doc_id)

    edus = []
    for record in records:
        if not isinstance(record, dict):
            raise SchemaError("doc %s: node record is not an object" % doc_id)
        try:
            node_id = record["id"]
            parent = record["parent"]
            relation_raw = record["relation"]
        except KeyError as exc:
            raise SchemaError(
                "doc %s: node %r missing field %s"
                % (doc_id, record.get("id", "?"), exc)
            ) from exc
        if not isinstance(node_id, int) or not isinstance(parent, int):
            raise SchemaError(
                "doc %s: node %r has non-integer id/parent" % (doc_id, node_id)
            )
        if node_id == 0:
            # Virtual-root record: consumed, never stored.
            continue
        try:
            relation = relations.parse_relation(relation_raw)
        except UnknownRelationError as exc:
            raise SchemaError("doc %s: node %d: %s" % (doc_id, node_id, exc)) from exc
        text = record.get("text", "")
        if not isinstance(text, str):
            raise SchemaError("doc %s: node %d text is not a string" % (doc_id, node_id))
        edus.append(EduNode(id=node_id, text=text, head=parent, relation=relation))

    edus.sort(key=lambda e: e.id)
    return DiscourseTree(doc_id, edus, source=source)


def save_document(tree, path):
    """Write a tree in the document schema; refuses invalid trees.

    Keys are emitted in a fixed order (id, parent, text, relation) and
    the virtual-root record is included, so output is diff-stable and
    ``load_document(save_document(t))`` reproduces ``t``.
    """
    validate_edus(tree.doc_id, tree.edus)
    records = [{"id": 0, "parent": -1, "text": "ROOT", "relation": "null"}]
    for edu in tree.edus:
        records.append(
            {
                "id": edu.id,
                "parent": edu.head,
                "text": edu.text,
                "relation": relations.file_string(edu.relation),
            }
        )
    payload = json.dumps({"root": records}, ensure_ascii=False, indent=2)
    Path(path).write_text(payload + "\n", encoding="utf-8")


def map_to_coarse(tree):
    """Same structure with every relation collapsed to its coarse class."""
    edus = [
        EduNode(e.id, e.text, e.head, relations.coarse_of(e.relation))
        for e in tree.edus
    ]
    return DiscourseTree(tree.doc_id, edus, source=tree.source)


def count_relations(corpus, unique_only=False):
    """Total number of (head, dependent, relation) attachments.

    Every EDU contributes exactly one attachment (ROOT attachments
    included).  With unique_only, annotation copies of the same
    document collapse to the designated gold copy.
    """
    trees = designated_gold(corpus) if unique_only else list(corpus)
    return sum(len(t) for t in trees)


def designated_gold(corpus):
    """One tree per doc_id, preferring copies from a gold directory."""
    chosen = {}
    for tree in corpus:
        current = chosen.get(tree.doc_id)
        if current is None:
            chosen[tree.doc_id] = tree
            continue
        if _gold_rank(tree) < _gold_rank(current):
            chosen[tree.doc_id] = tree
    return [chosen[doc_id] for doc_id in sorted(chosen)]


def _gold_rank(tree):
    source = tree.source or ""
    is_gold = source == "gold" or source.endswith("/gold") or "/" not in source
    return (0 if is_gold else 1, source)


def iter_document_paths(directory):
    directory = Path(directory)
    paths = []
    for suffix in DOCUMENT_SUFFIXES:
        paths.extend(directory.glob("*" + suffix))
    return sorted(set(paths))


def load_directory(directory, source=None):
    """Load every document file directly inside a directory."""
    directory = Path(directory)
    if source is None:
        source = directory.name
    return [load_document(p, source=source) for p in iter_document_paths(directory)]


PARTITIONS = ("train", "dev", "test")


def _partition_dirs(root, part):
    """Annotation directories of one partition: gold first, then the
    second-annotator copies."""
    base = Path(root) / part
    if not base.is_dir():
        return []
    subdirs = sorted(d for d in base.iterdir() if d.is_dir())
    if not subdirs:
        return [(part, base)]
    gold = [d for d in subdirs if d.name == "gold"]
    rest = [d for d in subdirs if d.name != "gold"]
    ordered = gold + rest
    if not gold and iter_document_paths(base):
        # Loose files beside annotator subdirs act as the gold copy.
        ordered = [base] + rest
    return [("%s/%s" % (part, d.name) if d != base else part, d) for d in ordered]


def load_split(root):
    """Load the gold train/dev/test partitions from a corpus root."""
    parts = {}
    for part in PARTITIONS:
        dirs = _partition_dirs(root, part)
        if not dirs:
            parts[part] = []
            continue
        source, directory = dirs[0]
        parts[part] = load_directory(directory, source=source)
    return CorpusSplit(train=parts["train"], dev=parts["dev"], test=parts["test"])


def load_all_annotations(root):
    """Every annotation copy under a corpus root, gold and otherwise."""
    trees = []
    for part in PARTITIONS:
        for source, directory in _partition_dirs(root, part):
            trees.extend(load_directory(directory, source=source))
    return trees


def discover_double_annotations(root):
    """Pairs of (gold tree, second-annotation tree) keyed by the
    second annotation's directory, for agreement analysis."""
    pairs = {}
    for part in PARTITIONS:
        dirs = _partition_dirs(root, part)
        if len(dirs) < 2:
            continue
        gold_source, gold_dir = dirs[0]
        gold = {t.doc_id: t for t in load_directory(gold_dir, source=gold_source)}
        for source, directory in dirs[1:]:
            matched = []
            for tree in load_directory(directory, source=source):
                if tree.doc_id in gold:
                    matched.append((gold[tree.doc_id], tree))
            if matched:
                pairs[source] = matched
    return pairs
