"""Shared fixtures: hand-built trees, random tree generators, and a
synthetic on-disk corpus.  Corpus-exact tests locate the released
treebank through the SCIDTB_HOME environment variable and skip when it
is absent.
"""

import json
import os
from pathlib import Path

import numpy as np
import pytest

from disdep.corpus import DiscourseTree, EduNode, save_document
from disdep.relations import ARC_LABELS, ROOT
from disdep.transition import (
    Action,
    LEFT_ARC,
    RIGHT_ARC,
    SHIFT,
    apply,
    arcs_to_tree,
    initial_config,
    is_legal,
    is_terminal,
)

RELEASE_ENV = "SCIDTB_HOME"

_VOCAB = (
    "the model data results method baseline corpus parser training accuracy "
    "improves evaluation shows system feature weights score tree relation "
    "analysis annotation segment unit score structure experiments large small"
).split()

_CUE_STARTS = (
    "for example ,",
    "despite earlier findings ,",
    "because of this ,",
    "in this paper",
    "compared with prior work ,",
    "however ,",
)


def make_tree(heads, relations=None, texts=None, doc_id="doc", source="gold"):
    """Tree from a head list (index 0 = EDU 1).  Relations default to
    ROOT for the root arc and Addition elsewhere."""
    n = len(heads)
    if relations is None:
        relations = [ROOT if h == 0 else "Addition" for h in heads]
    if texts is None:
        texts = ["edu %d text" % (i + 1) for i in range(n)]
    edus = [
        EduNode(id=i + 1, text=texts[i], head=heads[i], relation=relations[i])
        for i in range(n)
    ]
    return DiscourseTree(doc_id, edus, source=source)


def random_text(rng, lead_cue=False):
    words = list(rng.choice(_VOCAB, size=int(rng.integers(3, 9))))
    text = " ".join(words) + " ."
    if lead_cue:
        text = str(rng.choice(_CUE_STARTS)) + " " + text
    return text


def random_texts(rng, n):
    return [random_text(rng, lead_cue=bool(rng.random() < 0.3)) for _ in range(n)]


def random_projective_tree(rng, n, doc_id="doc"):
    """Uniformly sampled legal arc-standard derivation; the resulting
    tree is projective by construction."""
    texts = random_texts(rng, n)
    config = initial_config(texts)
    while not is_terminal(config):
        options = []
        if is_legal(config, Action(SHIFT)):
            options.append(Action(SHIFT))
        if len(config.stack) >= 2:
            rel = str(rng.choice(ARC_LABELS))
            if is_legal(config, Action(LEFT_ARC, rel)):
                options.append(Action(LEFT_ARC, rel))
            if config.stack[-2] == 0:
                if is_legal(config, Action(RIGHT_ARC, ROOT)):
                    options.append(Action(RIGHT_ARC, ROOT))
            elif is_legal(config, Action(RIGHT_ARC, rel)):
                options.append(Action(RIGHT_ARC, rel))
        config = apply(config, options[int(rng.integers(len(options)))])
    return arcs_to_tree(doc_id, texts, config.arcs)


def random_tree(rng, n, doc_id="doc"):
    """Arbitrary single-rooted tree (non-projective allowed): each node
    attaches to a uniformly chosen already-connected node."""
    order = list(rng.permutation(np.arange(1, n + 1)))
    heads = [0] * n
    relations = [None] * n
    root = order[0]
    heads[root - 1] = 0
    relations[root - 1] = ROOT
    connected = [root]
    for node in order[1:]:
        head = int(connected[int(rng.integers(len(connected)))])
        heads[node - 1] = head
        relations[node - 1] = str(rng.choice(ARC_LABELS))
        connected.append(node)
    return make_tree(heads, relations, texts=random_texts(rng, n), doc_id=doc_id)


def perturb_tree(rng, tree, n_head_flips=1, n_label_flips=1):
    """A second-annotator view: reattach a few leaves, flip a few labels."""
    heads = [e.head for e in tree.edus]
    rels = [e.relation for e in tree.edus]
    n = len(heads)
    for _ in range(n_head_flips):
        # Recomputed each flip: an earlier flip may have given a former
        # leaf a child, and only childless nodes reattach cycle-free.
        leaves = [i for i in range(1, n + 1) if i not in set(heads)]
        if not leaves:
            break
        leaf = int(rng.choice(leaves))
        if heads[leaf - 1] == 0:
            continue  # the root attachment must stay unique
        candidates = [j for j in range(1, n + 1) if j != leaf]
        new_head = int(rng.choice(candidates))
        if new_head != heads[leaf - 1]:
            heads[leaf - 1] = new_head
            rels[leaf - 1] = str(rng.choice(ARC_LABELS))
    for _ in range(n_label_flips):
        i = int(rng.integers(1, n + 1))
        if heads[i - 1] != 0:
            rels[i - 1] = str(rng.choice(ARC_LABELS))
    return make_tree(heads, rels, texts=tree.texts, doc_id=tree.doc_id, source="anno2")


@pytest.fixture
def ten_edu_tree():
    """A 10-EDU document with the layered structure typical of an
    abstract: background (with elaborations), a central contribution
    EDU, enablement, a two-level aspect chain, and an evaluation with a
    means attachment."""
    heads = [4, 1, 1, 0, 4, 4, 6, 7, 10, 4]
    relations = [
        "Goal",
        "Addition",
        "Example",
        ROOT,
        "Enablement",
        "Aspect",
        "Addition",
        "Addition",
        "Manner-means",
        "Evaluation",
    ]
    texts = [
        "Sequence labels carry useful signal",
        "that current pipelines rarely exploit .",
        "For example , span markers often align with unit boundaries .",
        "In this paper we train a margin-based labeler",
        "to reuse that signal for low-resource segmentation .",
        "The core of the approach is a constrained objective",
        "that pools probability mass over compatible label paths",
        "that respect the boundary signal .",
        "By adding a light adaptation step ,",
        "the labeler reaches an f-score of 91.07 % on the held-out set .",
    ]
    return make_tree(heads, relations, texts, doc_id="ten")


def write_corpus_tree(directory, tree):
    directory.mkdir(parents=True, exist_ok=True)
    save_document(tree, directory / (tree.doc_id + ".dep"))


@pytest.fixture
def synth_corpus(tmp_path):
    """Small on-disk corpus: 8 train / 4 dev / 4 test gold documents
    plus a second-annotator copy of dev and test (one dev copy is kept
    identical for self-agreement sanity)."""
    rng = np.random.default_rng(1234)
    root = tmp_path / "corpus"
    split = {"train": 8, "dev": 4, "test": 4}
    trees = {}
    counter = 0
    for part, count in split.items():
        part_trees = []
        for _ in range(count):
            counter += 1
            n = int(rng.integers(3, 9))
            tree = random_projective_tree(rng, n, doc_id="d%03d" % counter)
            part_trees.append(tree)
            write_corpus_tree(root / part / "gold", tree)
        trees[part] = part_trees
    for part in ("dev", "test"):
        for i, tree in enumerate(trees[part]):
            copy = tree if i == 0 else perturb_tree(rng, tree)
            copy = DiscourseTree(tree.doc_id, copy.edus, source="anno2")
            write_corpus_tree(root / part / "second_annotate", copy)
    return root, trees


@pytest.fixture(scope="session")
def release_root():
    """Root of the released treebank (train/dev/test layout), located
    through SCIDTB_HOME; corpus-exact tests skip without it."""
    path = os.environ.get(RELEASE_ENV)
    if not path:
        pytest.skip("released treebank not available (set %s)" % RELEASE_ENV)
    root = Path(path)
    if (root / "dataset").is_dir() and not (root / "train").is_dir():
        root = root / "dataset"
    if not any((root / part).is_dir() for part in ("train", "dev", "test")):
        pytest.skip("%s=%s has no train/dev/test directories" % (RELEASE_ENV, path))
    return root


def write_document_json(path, records):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"root": records}), encoding="utf-8")
