"""Arc-standard transition system and the two transition-based parsers.

A configuration is (stack, buffer, arcs); the stack bottom holds the
virtual root 0 and the buffer feeds EDUs in document order.  Shift
moves the buffer front onto the stack; LeftArc(r) attaches the second
stack item under the top and pops it; RightArc(r) attaches the top
under the second item and pops the top.  Every derivation of an n-EDU
document takes exactly 2n actions: n shifts and n attachments.

Attaching to the virtual root is only allowed as the very last action
(buffer empty, one EDU left on the stack), which guarantees every
decoded tree is single-rooted.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import DiscourseTree, EduNode
from .features import FeatureDictionary, FeatureVector, config_features, labeler_features
from .learners import train_multiclass
from .relations import ARC_LABELS, ROOT

SHIFT = "Shift"
LEFT_ARC = "LeftArc"
RIGHT_ARC = "RightArc"


class IllegalActionError(ValueError):
    pass


class NonProjectiveError(ValueError):
    """The arc-standard system cannot derive this gold tree."""


@dataclass(frozen=True)
class Action:
    kind: str
    relation: str | None = None

    @property
    def name(self):
        return self.kind if self.relation is None else "%s:%s" % (self.kind, self.relation)

    @classmethod
    def parse(cls, name):
        kind, _sep, relation = name.partition(":")
        return cls(kind, relation or None)


# Fixed tie-break priority: Shift, then LeftArc by label index, then
# RightArc by label index, then the final root attachment.
VANILLA_ACTIONS = (
    (Action(SHIFT),)
    + tuple(Action(LEFT_ARC, rel) for rel in ARC_LABELS)
    + tuple(Action(RIGHT_ARC, rel) for rel in ARC_LABELS)
    + (Action(RIGHT_ARC, ROOT),)
)
VANILLA_ACTION_NAMES = tuple(a.name for a in VANILLA_ACTIONS)

UNLABELED_ACTIONS = (Action(SHIFT), Action(LEFT_ARC), Action(RIGHT_ARC))
UNLABELED_ACTION_NAMES = tuple(a.name for a in UNLABELED_ACTIONS)


@dataclass
class Configuration:
    stack: tuple
    buffer: tuple
    arcs: tuple  # (head, dep, relation-or-None), in creation order
    texts: list

    @property
    def n(self):
        return len(self.texts)


def initial_config(texts):
    return Configuration(
        stack=(0,), buffer=tuple(range(1, len(texts) + 1)), arcs=(), texts=list(texts)
    )


def is_terminal(config):
    return not config.buffer and config.stack == (0,)


def illegal_reason(config, action):
    """Why the action is illegal here, or None if it is legal."""
    if action.kind == SHIFT:
        if not config.buffer:
            return "Shift with empty buffer"
        return None
    if action.kind not in (LEFT_ARC, RIGHT_ARC):
        return "unknown action kind %r" % action.kind
    if len(config.stack) < 2:
        return "%s with fewer than two stack items" % action.kind
    s1 = config.stack[-2]
    if action.kind == LEFT_ARC:
        if s1 == 0:
            return "LeftArc would make the virtual root a dependent"
        if action.relation == ROOT:
            return "ROOT label outside a root attachment"
        return None
    # RightArc
    if s1 == 0:
        if config.buffer or len(config.stack) != 2:
            return "root attachment before all other EDUs are attached"
        if action.relation is not None and action.relation != ROOT:
            return "root attachment must carry the ROOT label"
    elif action.relation == ROOT:
        return "ROOT label outside a root attachment"
    return None


def is_legal(config, action):
    return illegal_reason(config, action) is None


def apply(config, action):
    """The successor configuration; raises IllegalActionError naming
    the violated rule."""
    reason = illegal_reason(config, action)
    if reason is not None:
        raise IllegalActionError(reason)
    if action.kind == SHIFT:
        return Configuration(
            stack=config.stack + (config.buffer[0],),
            buffer=config.buffer[1:],
            arcs=config.arcs,
            texts=config.texts,
        )
    s0, s1 = config.stack[-1], config.stack[-2]
    if action.kind == LEFT_ARC:
        arc = (s0, s1, action.relation)
        stack = config.stack[:-2] + (s0,)
    else:
        arc = (s1, s0, action.relation)
        stack = config.stack[:-1]
    return Configuration(
        stack=stack, buffer=config.buffer, arcs=config.arcs + (arc,), texts=config.texts
    )


def oracle_actions(gold):
    """Static oracle: the unique arc-standard action sequence that
    rebuilds a projective gold tree, attaching each subtree bottom-up.

    LeftArc fires when the second stack item has found all its
    dependents and its gold head is the stack top; RightArc mirrors it;
    otherwise Shift.  Raises NonProjectiveError when no action can make
    progress, which happens exactly for non-projective trees.
    """
    head = {e.id: e.head for e in gold.edus}
    relation = {e.id: e.relation for e in gold.edus}
    n_deps = Counter(head.values())
    attached = Counter()

    config = initial_config(gold.texts)
    actions = []
    while not is_terminal(config):
        action = None
        if len(config.stack) >= 2:
            s0, s1 = config.stack[-1], config.stack[-2]
            if s1 != 0 and head[s1] == s0 and attached[s1] == n_deps[s1]:
                action = Action(LEFT_ARC, relation[s1])
                attached[s0] += 1
            elif head[s0] == s1 and attached[s0] == n_deps[s0]:
                action = Action(RIGHT_ARC, relation[s0])
                attached[s1] += 1
        if action is None:
            if not config.buffer:
                raise NonProjectiveError(
                    "doc %s: gold tree is not derivable (non-projective)" % gold.doc_id
                )
            action = Action(SHIFT)
        actions.append(action)
        config = apply(config, action)
    return actions


def arcs_to_tree(doc_id, texts, arcs, relations=None):
    """Build a validated tree from (head, dep, relation) arcs; an
    optional relations map overrides arc labels (two-stage labeling)."""
    head = {}
    rel = {}
    for h, d, r in arcs:
        head[d] = h
        rel[d] = r
    if relations is not None:
        rel.update(relations)
    edus = [
        EduNode(id=i, text=texts[i - 1], head=head[i], relation=rel[i])
        for i in range(1, len(texts) + 1)
    ]
    return DiscourseTree(doc_id, edus)


def replay(texts, actions):
    """Run an action sequence from the initial configuration and return
    the terminal configuration's arcs."""
    config = initial_config(texts)
    for action in actions:
        config = apply(config, action)
    if not is_terminal(config):
        raise IllegalActionError("action sequence does not reach a terminal state")
    return config.arcs


def oracle_examples(tree, dictionary, labeled=True):
    """(FeatureVector, action name) training pairs along the oracle
    path.  With labeled=False the replayed arcs drop their relations so
    configurations look exactly as they will at stage-one decode time."""
    examples = []
    config = initial_config(tree.texts)
    for action in oracle_actions(tree):
        fv = FeatureVector.from_names(config_features(config), dictionary)
        taken = action if labeled else Action(action.kind)
        examples.append((fv, taken.name))
        config = apply(config, taken)
    return examples


def transition_training_data(trees, dictionary, labeled=True):
    """Oracle examples over all derivable trees; non-projective gold
    trees are skipped (they remain in evaluation data)."""
    examples = []
    skipped = []
    for tree in trees:
        try:
            examples.extend(oracle_examples(tree, dictionary, labeled=labeled))
        except NonProjectiveError:
            skipped.append(tree.doc_id)
    return examples, skipped


def decode_actions(texts, model, dictionary, actions):
    """Greedy decode: highest-scoring legal action at each step, taken
    from the fixed action inventory ``actions`` (the model's classes)."""
    config = initial_config(texts)
    sequence = []
    while not is_terminal(config):
        fv = FeatureVector.from_names(config_features(config), dictionary)
        scores = model.scores(fv)
        masked = np.where(
            [is_legal(config, action) for action in actions], scores, -np.inf
        )
        best = actions[int(np.argmax(masked))]
        sequence.append(best)
        config = apply(config, best)
    return sequence


def preorder(children_of, root_id):
    """Node ids in pre-order: each head before its dependents, children
    in document order."""
    out = []
    stack = [root_id]
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(reversed(children_of.get(node, ())))
    return out


@dataclass
class VanillaParser:
    """One-pass transition parser over fully labeled actions."""

    model: object
    dictionary: FeatureDictionary

    def parse(self, texts, doc_id="doc"):
        actions = decode_actions(texts, self.model, self.dictionary, VANILLA_ACTIONS)
        return arcs_to_tree(doc_id, texts, replay(texts, actions))


@dataclass
class TwoStageParser:
    """Unlabeled transition parse, then pre-order relation labeling."""

    structure_model: object
    labeler: object
    dictionary: FeatureDictionary

    def parse(self, texts, doc_id="doc"):
        actions = decode_actions(
            texts, self.structure_model, self.dictionary, UNLABELED_ACTIONS
        )
        arcs = replay(texts, actions)
        head = {d: h for h, d, _r in arcs}
        children = {}
        for d in sorted(head):
            children.setdefault(head[d], []).append(d)
        root_id = children[0][0]

        relations = {root_id: ROOT}
        depth = {root_id: 1}
        for node in preorder(children, root_id):
            if node == root_id:
                continue
            h = head[node]
            depth[node] = depth[h] + 1
            fv = FeatureVector.from_names(
                labeler_features(texts, h, node, depth[h], relations[h]),
                self.dictionary,
            )
            scores = self.labeler.scores(fv)
            relations[node] = self.labeler.classes[int(np.argmax(scores))]
        return arcs_to_tree(doc_id, texts, arcs, relations=relations)


def labeler_examples(tree, dictionary):
    """Relation-labeling examples off the gold structure, visited in
    pre-order so the head's own (gold) relation is available."""
    examples = []
    children = {h: list(tree.children_of(h)) for h in range(len(tree) + 1)}
    for node in preorder(children, tree.root_id):
        if node == tree.root_id:
            continue
        h = tree.head_of(node)
        gp_rel = tree.relation_of(h)
        fv = FeatureVector.from_names(
            labeler_features(texts=tree.texts, head=h, dep=node,
                             head_depth=tree.depth_of(h),
                             grandparent_relation=gp_rel),
            dictionary,
        )
        examples.append((fv, tree.relation_of(node)))
    return examples


def train_vanilla(trees, C=1.5, epochs=20, seed=0):
    """Train the one-pass labeled-action parser."""
    dictionary = FeatureDictionary()
    examples, skipped = transition_training_data(trees, dictionary, labeled=True)
    model = train_multiclass(
        examples,
        C=C,
        epochs=epochs,
        seed=seed,
        classes=VANILLA_ACTION_NAMES,
        dim=len(dictionary),
    )
    dictionary.freeze()
    return VanillaParser(model=model, dictionary=dictionary), skipped


def train_two_stage(trees, c1=1.5, c2=0.5, epochs=20, seed=0):
    """Train the unlabeled-structure model and the relation labeler."""
    dictionary = FeatureDictionary()
    stage1_examples, skipped = transition_training_data(trees, dictionary, labeled=False)
    stage1 = train_multiclass(
        stage1_examples,
        C=c1,
        epochs=epochs,
        seed=seed,
        classes=UNLABELED_ACTION_NAMES,
        dim=len(dictionary),
    )
    label_examples = []
    for tree in trees:
        label_examples.extend(labeler_examples(tree, dictionary))
    labeler = train_multiclass(
        label_examples,
        C=c2,
        epochs=epochs,
        seed=seed,
        classes=ARC_LABELS,
        dim=len(dictionary),
    )
    dictionary.freeze()
    return (
        TwoStageParser(structure_model=stage1, labeler=labeler, dictionary=dictionary),
        skipped,
    )
