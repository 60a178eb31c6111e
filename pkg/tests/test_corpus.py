import json
from types import SimpleNamespace

import numpy as np
import pytest

from disdep import corpus
from disdep.corpus import (
    CorpusSplit,
    DiscourseTree,
    EduNode,
    InvariantError,
    ParseError,
    SchemaError,
    count_relations,
    load_document,
    map_to_coarse,
    save_document,
)

from conftest import make_tree, random_tree, write_document_json


def test_load_minimal_two_node_document(tmp_path):
    path = tmp_path / "two.dep"
    write_document_json(
        path,
        [
            {"id": 1, "parent": 2, "text": "a", "relation": "elab-addition"},
            {"id": 2, "parent": 0, "text": "b", "relation": "ROOT"},
        ],
    )
    tree = load_document(path)
    assert tree.root_id == 2
    assert tree.head_of(1) == 2
    assert tree.relation_of(1) == "Addition"
    assert tree.relation_of(2) == "ROOT"


def test_virtual_root_record_consumed(tmp_path):
    path = tmp_path / "doc.dep"
    write_document_json(
        path,
        [
            {"id": 0, "parent": -1, "text": "ROOT", "relation": "null"},
            {"id": 1, "parent": 0, "text": "only", "relation": "ROOT"},
        ],
    )
    tree = load_document(path)
    assert len(tree) == 1
    assert tree.edus[0].id == 1


def test_self_attachment_rejected(tmp_path):
    path = tmp_path / "selfloop.dep"
    write_document_json(
        path,
        [
            {"id": 1, "parent": 1, "text": "x", "relation": "elab-addition"},
            {"id": 2, "parent": 0, "text": "y", "relation": "ROOT"},
        ],
    )
    with pytest.raises(InvariantError, match="node 1"):
        load_document(path)


@pytest.mark.parametrize(
    "records,match",
    [
        # cycle 1 <-> 2 with a separate root
        (
            [
                {"id": 1, "parent": 2, "text": "a", "relation": "joint"},
                {"id": 2, "parent": 1, "text": "b", "relation": "joint"},
                {"id": 3, "parent": 0, "text": "c", "relation": "ROOT"},
            ],
            "cycle",
        ),
        # two roots
        (
            [
                {"id": 1, "parent": 0, "text": "a", "relation": "ROOT"},
                {"id": 2, "parent": 0, "text": "b", "relation": "ROOT"},
            ],
            "multiple root",
        ),
        # no root
        (
            [
                {"id": 1, "parent": 2, "text": "a", "relation": "joint"},
                {"id": 2, "parent": 1, "text": "b", "relation": "joint"},
            ],
            "cycle|no node",
        ),
        # non-contiguous ids
        (
            [
                {"id": 1, "parent": 3, "text": "a", "relation": "joint"},
                {"id": 3, "parent": 0, "text": "b", "relation": "ROOT"},
            ],
            "not contiguous",
        ),
        # ROOT label off the root arc
        (
            [
                {"id": 1, "parent": 2, "text": "a", "relation": "ROOT"},
                {"id": 2, "parent": 0, "text": "b", "relation": "ROOT"},
            ],
            "inconsistent",
        ),
    ],
)
def test_invariant_violations(tmp_path, records, match):
    path = tmp_path / "bad.dep"
    write_document_json(path, records)
    with pytest.raises(InvariantError, match=match):
        load_document(path)


def test_schema_errors(tmp_path):
    missing = tmp_path / "missing.dep"
    write_document_json(missing, [{"id": 1, "text": "a", "relation": "joint"}])
    with pytest.raises(SchemaError, match="missing field"):
        load_document(missing)

    unknown = tmp_path / "unknown.dep"
    write_document_json(
        unknown, [{"id": 1, "parent": 0, "text": "a", "relation": "nonsense"}]
    )
    with pytest.raises(SchemaError, match="nonsense"):
        load_document(unknown)

    not_list = tmp_path / "shape.dep"
    not_list.write_text(json.dumps({"root": {"id": 1}}), encoding="utf-8")
    with pytest.raises(SchemaError, match="list"):
        load_document(not_list)


def test_parse_error(tmp_path):
    path = tmp_path / "broken.dep"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_document(path)


def test_round_trip_identity(tmp_path):
    rng = np.random.default_rng(11)
    for k in range(25):
        tree = random_tree(rng, int(rng.integers(1, 12)), doc_id="rt%02d" % k)
        path = tmp_path / (tree.doc_id + ".dep")
        save_document(tree, path)
        again = load_document(path)
        assert again == tree


def test_round_trip_byte_stable(tmp_path):
    rng = np.random.default_rng(12)
    tree = random_tree(rng, 7, doc_id="stable")
    first = tmp_path / "stable.dep"
    save_document(tree, first)
    second = tmp_path / "stable2.dep"
    save_document(load_document(first), second)
    assert first.read_bytes() == second.read_bytes()


def test_saved_key_order_fixed(tmp_path):
    tree = make_tree([0, 1], doc_id="order")
    path = tmp_path / "order.dep"
    save_document(tree, path)
    payload = json.loads(path.read_text(encoding="utf-8"))
    for record in payload["root"]:
        assert list(record) == ["id", "parent", "text", "relation"]


def test_save_refuses_invalid_tree(tmp_path):
    sham = SimpleNamespace(
        doc_id="bad",
        edus=(
            EduNode(1, "a", 0, "ROOT"),
            EduNode(2, "b", 0, "ROOT"),
        ),
    )
    with pytest.raises(InvariantError, match="multiple root"):
        save_document(sham, tmp_path / "never.dep")


def test_map_to_coarse():
    tree = make_tree([0, 1, 1], relations=["ROOT", "Goal", "Joint"])
    coarse = map_to_coarse(tree)
    assert [e.relation for e in coarse.edus] == ["ROOT", "Background", "Joint"]
    assert [e.head for e in coarse.edus] == [e.head for e in tree.edus]
    assert map_to_coarse(coarse) == coarse  # idempotent


def test_count_relations():
    assert count_relations([]) == 0
    two = make_tree([0, 1], doc_id="a")
    assert count_relations([two]) == 2
    copy = DiscourseTree("a", two.edus, source="dev/second")
    gold = DiscourseTree("a", two.edus, source="dev/gold")
    assert count_relations([gold, copy]) == 4
    assert count_relations([gold, copy], unique_only=True) == 2


def test_split_loading_and_disjointness(synth_corpus):
    root, trees = synth_corpus
    split = corpus.load_split(root)
    assert [t.doc_id for t in split.train] == sorted(t.doc_id for t in trees["train"])
    assert len(split.dev) == 4 and len(split.test) == 4
    with pytest.raises(InvariantError, match="partitions"):
        CorpusSplit(train=split.train, dev=split.train[:1], test=[])


def test_load_all_annotations_and_gold_designation(synth_corpus):
    root, trees = synth_corpus
    all_copies = corpus.load_all_annotations(root)
    assert len(all_copies) == 16 + 8  # every gold doc plus dev/test copies
    unique = corpus.designated_gold(all_copies)
    assert len(unique) == 16
    assert all(t.source.endswith("gold") for t in unique)


def test_discover_double_annotations(synth_corpus):
    root, _ = synth_corpus
    pairs = corpus.discover_double_annotations(root)
    assert set(pairs) == {"dev/second_annotate", "test/second_annotate"}
    assert all(len(v) == 4 for v in pairs.values())
    for gold_tree, other in pairs["dev/second_annotate"]:
        assert gold_tree.doc_id == other.doc_id


def test_validation_pass_over_corpus(synth_corpus):
    root, _ = synth_corpus
    for tree in corpus.load_all_annotations(root):
        corpus.validate_edus(tree.doc_id, tree.edus)  # must not raise
        assert sum(1 for e in tree.edus if e.head == 0) == 1


def test_release_style_layout(tmp_path):
    # train files sit directly in train/, dev and test carry gold/ plus
    # a second-annotator directory
    root = tmp_path / "release"
    for i, part_dir in enumerate((root / "train", root / "dev" / "gold",
                                  root / "test" / "gold")):
        part_dir.mkdir(parents=True)
        save_document(make_tree([0, 1], doc_id="r%d" % i), part_dir / ("r%d.dep" % i))
    second = root / "dev" / "second_annotate"
    second.mkdir()
    save_document(make_tree([2, 0], relations=["Joint", "ROOT"], doc_id="r1"),
                  second / "r1.dep")

    split = corpus.load_split(root)
    assert [t.doc_id for t in split.train] == ["r0"]
    assert [t.doc_id for t in split.dev] == ["r1"]
    assert split.train[0].source == "train"
    assert split.dev[0].source == "dev/gold"

    all_copies = corpus.load_all_annotations(root)
    assert len(all_copies) == 4
    assert len(corpus.designated_gold(all_copies)) == 3

    pairs = corpus.discover_double_annotations(root)
    assert set(pairs) == {"dev/second_annotate"}
    gold_tree, other = pairs["dev/second_annotate"][0]
    assert gold_tree.source == "dev/gold" and other.source == "dev/second_annotate"
