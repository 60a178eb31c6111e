import numpy as np
import pytest

from disdep.analysis import is_projective
from disdep.corpus import validate_edus
from disdep.metrics import las, uas
from disdep.transition import (
    Action,
    IllegalActionError,
    LEFT_ARC,
    NonProjectiveError,
    RIGHT_ARC,
    SHIFT,
    VANILLA_ACTIONS,
    apply,
    arcs_to_tree,
    decode_actions,
    initial_config,
    is_terminal,
    oracle_actions,
    preorder,
    replay,
    train_two_stage,
    train_vanilla,
)

from conftest import make_tree, random_projective_tree


def test_two_edu_derivation():
    config = initial_config(["a", "b"])
    for action in (
        Action(SHIFT),
        Action(SHIFT),
        Action(RIGHT_ARC, "Joint"),
        Action(RIGHT_ARC, "ROOT"),
    ):
        config = apply(config, action)
    assert is_terminal(config)
    assert set(config.arcs) == {(1, 2, "Joint"), (0, 1, "ROOT")}


def test_left_arc_root_guard():
    config = apply(initial_config(["a", "b"]), Action(SHIFT))
    with pytest.raises(IllegalActionError, match="virtual root"):
        apply(config, Action(LEFT_ARC, "Joint"))


def test_shift_requires_buffer():
    config = initial_config(["a"])
    config = apply(config, Action(SHIFT))
    with pytest.raises(IllegalActionError, match="empty buffer"):
        apply(config, Action(SHIFT))


def test_premature_root_attachment_illegal():
    config = apply(initial_config(["a", "b"]), Action(SHIFT))
    with pytest.raises(IllegalActionError, match="root attachment"):
        apply(config, Action(RIGHT_ARC, "ROOT"))


def test_arc_requires_two_stack_items():
    config = initial_config(["a", "b"])
    with pytest.raises(IllegalActionError, match="fewer than two"):
        apply(config, Action(RIGHT_ARC, "Joint"))


def test_oracle_single_edu():
    tree = make_tree([0], doc_id="one")
    assert [a.name for a in oracle_actions(tree)] == ["Shift", "RightArc:ROOT"]


def test_oracle_replays_layered_tree(ten_edu_tree):
    actions = oracle_actions(ten_edu_tree)
    assert len(actions) == 2 * len(ten_edu_tree)
    arcs = replay(ten_edu_tree.texts, actions)
    rebuilt = arcs_to_tree("ten", ten_edu_tree.texts, arcs)
    assert rebuilt == ten_edu_tree


def test_oracle_rejects_non_projective():
    # arcs (1,3) and (4,2) cross
    tree = make_tree([0, 4, 1, 1], relations=["ROOT", "Joint", "Joint", "Joint"])
    assert not is_projective(tree)
    with pytest.raises(NonProjectiveError):
        oracle_actions(tree)


def test_oracle_round_trip_on_random_projective_trees():
    rng = np.random.default_rng(2024)
    for k in range(200):
        n = int(rng.integers(1, 13))
        tree = random_projective_tree(rng, n, doc_id="r%03d" % k)
        actions = oracle_actions(tree)
        shifts = sum(1 for a in actions if a.kind == SHIFT)
        assert len(actions) == 2 * n and shifts == n
        rebuilt = arcs_to_tree(tree.doc_id, tree.texts, replay(tree.texts, actions))
        assert rebuilt == tree


def test_action_inventory_size():
    # Shift + 25 LeftArc labels + 25 RightArc labels + RightArc:ROOT
    assert len(VANILLA_ACTIONS) == 52
    assert VANILLA_ACTIONS[0].kind == SHIFT


def _tiny_training_set(rng, n_docs=4):
    return [
        random_projective_tree(rng, int(rng.integers(2, 6)), doc_id="t%d" % i)
        for i in range(n_docs)
    ]


def test_vanilla_overfits_tiny_corpus():
    rng = np.random.default_rng(77)
    trees = _tiny_training_set(rng)
    parser, skipped = train_vanilla(trees, C=10.0, epochs=60, seed=0)
    assert skipped == []
    for tree in trees:
        pred = parser.parse(tree.texts, doc_id=tree.doc_id)
        assert pred == tree


def test_decode_takes_2n_steps_and_validates():
    rng = np.random.default_rng(78)
    trees = _tiny_training_set(rng)
    parser, _ = train_vanilla(trees, C=1.5, epochs=5, seed=0)
    for n in (1, 2, 5, 9):
        texts = ["edu %d words" % i for i in range(n)]
        actions = decode_actions(texts, parser.model, parser.dictionary, VANILLA_ACTIONS)
        assert len(actions) == 2 * n
        tree = arcs_to_tree("d%d" % n, texts, replay(texts, actions))
        validate_edus(tree.doc_id, tree.edus)


def test_untrained_model_still_yields_valid_trees():
    from disdep.learners import LinearMulticlassModel

    model = LinearMulticlassModel(
        classes=tuple(a.name for a in VANILLA_ACTIONS),
        weights=np.zeros((len(VANILLA_ACTIONS), 1)),
        bias=np.zeros(len(VANILLA_ACTIONS)),
    )
    from disdep.features import FeatureDictionary

    dictionary = FeatureDictionary().freeze()
    for n in (1, 3, 6):
        texts = ["text %d" % i for i in range(n)]
        actions = decode_actions(texts, model, dictionary, VANILLA_ACTIONS)
        tree = arcs_to_tree("z", texts, replay(texts, actions))
        validate_edus(tree.doc_id, tree.edus)


def test_preorder_heads_before_dependents():
    children = {0: [4], 4: [1, 5, 6, 10], 1: [2, 3], 6: [7], 7: [8], 10: [9]}
    order = preorder(children, 4)
    position = {node: i for i, node in enumerate(order)}
    assert order[0] == 4
    for head, deps in children.items():
        for dep in deps:
            if head != 0:
                assert position[head] < position[dep]
    assert position[1] < position[5] < position[6]  # document order among siblings


def test_two_stage_structure_matches_stage_one(ten_edu_tree):
    rng = np.random.default_rng(79)
    trees = _tiny_training_set(rng) + [ten_edu_tree]
    parser, _ = train_two_stage(trees, c1=10.0, c2=10.0, epochs=40, seed=0)
    pred = parser.parse(ten_edu_tree.texts, doc_id="ten")
    from disdep.transition import UNLABELED_ACTIONS

    actions = decode_actions(
        ten_edu_tree.texts, parser.structure_model, parser.dictionary, UNLABELED_ACTIONS
    )
    stage1_heads = {d: h for h, d, _r in replay(ten_edu_tree.texts, actions)}
    assert {e.id: e.head for e in pred.edus} == stage1_heads


def test_two_stage_overfits_labels(ten_edu_tree):
    rng = np.random.default_rng(80)
    trees = _tiny_training_set(rng) + [ten_edu_tree]
    parser, _ = train_two_stage(trees, c1=10.0, c2=10.0, epochs=60, seed=0)
    pred = parser.parse(ten_edu_tree.texts, doc_id="ten")
    assert pred == ten_edu_tree
    assert uas([pred], [ten_edu_tree]) == 1.0
    assert las([pred], [ten_edu_tree]) == 1.0


def test_non_projective_training_docs_are_skipped():
    crossing = make_tree([0, 4, 1, 1], relations=["ROOT", "Joint", "Joint", "Joint"])
    rng = np.random.default_rng(81)
    trees = _tiny_training_set(rng) + [crossing]
    parser, skipped = train_vanilla(trees, C=1.5, epochs=3, seed=0)
    assert skipped == [crossing.doc_id]
    assert parser is not None
