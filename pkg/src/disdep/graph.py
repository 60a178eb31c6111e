"""Graph-based parser: label-factored arc scoring, maximum spanning
arborescence decoding, structured averaged-perceptron training.

Every candidate arc (h, d) is scored per relation label through
label-conjoined features; the weight vector is laid out so that the
entry for (base feature b, label l) lives at index b * L + l, which
lets one numpy gather produce the scores of all labels of an arc at
once.  Decoding finds the maximum-score arborescence rooted at the
virtual node 0 under the constraint that the root has exactly one
child, via Chu-Liu/Edmonds with cycle contraction plus a sweep over
the forced root child (exact, not heuristic).  Non-projective trees
are in the decoder's search space by construction.
"""

from dataclasses import dataclass, field

import numpy as np

from .corpus import DiscourseTree, EduNode
from .features import FeatureDictionary, FeatureVector, arc_base_features
from .learners import AveragedPerceptronModel, perceptron_update
from .relations import FINE_LABELS, ROOT

LABELS = FINE_LABELS
N_LABELS = len(LABELS)
ROOT_IDX = LABELS.index(ROOT)
# Ascending label indices for real (non-ROOT) arcs; argmax over this
# order realizes the lowest-label-index tie-break.
ARC_LABEL_IDX = np.array([i for i, l in enumerate(LABELS) if l != ROOT], dtype=np.int64)


@dataclass
class GraphParser:
    perceptron: AveragedPerceptronModel = field(default_factory=AveragedPerceptronModel)
    dictionary: FeatureDictionary = field(default_factory=FeatureDictionary)
    labels: tuple = LABELS

    def parse(self, texts, doc_id="doc"):
        matrix = score_arcs(texts, self, doc_id=doc_id)
        return decode_mst(matrix)


@dataclass
class ArcScoreMatrix:
    """Best label and best score per candidate arc.

    scores[h, d] is the maximum over labels of the model score of arc
    (h, d); label_idx[h, d] is the label attaining it (ROOT exactly for
    h = 0).  Invalid cells (h = d, d = 0) hold -inf.
    """

    n: int
    scores: np.ndarray  # (n+1, n+1)
    label_idx: np.ndarray  # (n+1, n+1) ints
    texts: list
    doc_id: str = "doc"
    labels: tuple = LABELS

    def best_score(self, head, dep):
        return float(self.scores[head, dep])

    def best_label(self, head, dep):
        return self.labels[int(self.label_idx[head, dep])]


def pair_feature_ids(texts, dictionary):
    """Interned label-free feature ids for every candidate (h, d)."""
    n = len(texts)
    ids = {}
    for d in range(1, n + 1):
        for h in range(0, n + 1):
            if h != d:
                ids[(h, d)] = dictionary.to_ids(arc_base_features(texts, h, d))
    return ids

def combined_fv(pair_ids, head, dep, label_index):
    """FeatureVector of an arc with its label folded into the ids."""
    fv = FeatureVector()
    for base_id in pair_ids[(head, dep)]:
        fv[int(base_id) * N_LABELS + label_index] = 1.0
    return fv


def tree_feature_vector(tree, pair_ids, labels=LABELS):
    """Summed arc features of a whole tree (the structured
    perceptron's update unit)."""
    total = FeatureVector()
    for head, dep, rel in tree.arcs():
        total.add(combined_fv(pair_ids, head, dep, labels.index(rel)))
    return total


def score_arcs(texts, parser, averaged=True, doc_id="doc", pair_ids=None):
    """Dense best-label score matrix over all candidate arcs."""
    n = len(texts)
    if pair_ids is None:
        pair_ids = pair_feature_ids(texts, parser.dictionary)
    parser.perceptron.ensure_dim(len(parser.dictionary) * N_LABELS)
    weights = parser.perceptron.averaged_weights if averaged else parser.perceptron.weights
    W = weights.reshape(-1, N_LABELS)

    scores = np.full((n + 1, n + 1), -np.inf)
    label_idx = np.zeros((n + 1, n + 1), dtype=np.int64)
    for (h, d), ids in pair_ids.items():
        per_label = W[ids].sum(axis=0)
        if h == 0:
            scores[h, d] = per_label[ROOT_IDX]
            label_idx[h, d] = ROOT_IDX
        else:
            sub = per_label[ARC_LABEL_IDX]
            k = int(np.argmax(sub))
            scores[h, d] = sub[k]
            label_idx[h, d] = ARC_LABEL_IDX[k]
    return ArcScoreMatrix(
        n=n, scores=scores, label_idx=label_idx, texts=list(texts), doc_id=doc_id
    )


def _find_cycle(heads):
    """A cycle in the head function (node list), or None."""
    m = len(heads)
    color = [0] * m
    color[0] = 2
    for start in range(1, m):
        if color[start]:
            continue
        path = []
        v = start
        while v != 0 and color[v] == 0:
            color[v] = 1
            path.append(v)
            v = heads[v]
        if v != 0 and color[v] == 1:
            cycle = [v]
            u = heads[v]
            while u != v:
                cycle.append(u)
                u = heads[u]
            return cycle
        for u in path:
            color[u] = 2
    return None


def _max_arborescence(scores):
    """Chu-Liu/Edmonds on a dense (m, m) score matrix with node 0 as
    the root; returns the head of every node 1..m-1.

    Greedy best-incoming choice, then recursive cycle contraction: an
    arc h -> cycle is rescored by the gain of redirecting the cycle
    node it enters, arcs leaving the cycle keep their best member, and
    the chosen entry point breaks the cycle on expansion.
    """
    m = scores.shape[0]
    best_head = np.zeros(m, dtype=np.int64)
    for d in range(1, m):
        col = scores[:, d].copy()
        col[d] = -np.inf
        best_head[d] = int(np.argmax(col))

    cycle = _find_cycle(best_head)
    if cycle is None:
        return best_head

    in_cycle = set(cycle)
    rest = [v for v in range(m) if v not in in_cycle]
    new_of = {v: i for i, v in enumerate(rest)}
    c_new = len(rest)
    m2 = len(rest) + 1

    S2 = np.full((m2, m2), -np.inf)
    for h in rest:
        for d in rest:
            if h != d and d != 0:
                S2[new_of[h], new_of[d]] = scores[h, d]
    # entry_of[h2]: cycle node whose incoming arc gets replaced if the
    # contracted node hangs under h2; exit_of[d2]: cycle node that
    # heads d if d hangs under the contracted node.
    entry_of = np.full(m2, -1, dtype=np.int64)
    exit_of = np.full(m2, -1, dtype=np.int64)
    for h in rest:
        best_gain, best_v = -np.inf, -1
        for v in sorted(in_cycle):
            if scores[h, v] == -np.inf:
                continue
            gain = scores[h, v] - scores[best_head[v], v]
            if gain > best_gain:
                best_gain, best_v = gain, v
        if best_v >= 0:
            S2[new_of[h], c_new] = best_gain
            entry_of[new_of[h]] = best_v
    for d in rest:
        if d == 0:
            continue
        best_s, best_v = -np.inf, -1
        for v in sorted(in_cycle):
            if scores[v, d] > best_s:
                best_s, best_v = scores[v, d], v
        if best_v >= 0:
            S2[c_new, new_of[d]] = best_s
            exit_of[new_of[d]] = best_v

    heads2 = _max_arborescence(S2)

    heads = best_head.copy()
    for d2 in range(1, m2):
        h2 = int(heads2[d2])
        if d2 == c_new:
            heads[entry_of[h2]] = rest[h2]
        elif h2 == c_new:
            heads[rest[d2]] = exit_of[d2]
        else:
            heads[rest[d2]] = rest[h2]
    return heads


def decode_mst(matrix):
    """Maximum-score spanning arborescence with exactly one root child.

    Sweeps the forced root child over all positions, running the
    contraction algorithm with the other root arcs disabled; ties go to
    the lower root-child id.
    """
    n = matrix.n
    best_total, best_heads = None, None
    for root_child in range(1, n + 1):
        S = matrix.scores.copy()
        root_row = S[0].copy()
        S[0, :] = -np.inf
        S[0, root_child] = root_row[root_child]
        heads = _max_arborescence(S)
        total = float(sum(S[heads[d], d] for d in range(1, n + 1)))
        if best_total is None or total > best_total:
            best_total, best_heads = total, heads

    edus = []
    for d in range(1, n + 1):
        h = int(best_heads[d])
        text = matrix.texts[d - 1] if matrix.texts else ""
        edus.append(
            EduNode(id=d, text=text, head=h, relation=matrix.best_label(h, d))
        )
    return DiscourseTree(matrix.doc_id, edus)


def train_graph(trees, epochs=10, learning_rate=1.0, after_epoch=None):
    """Structured averaged-perceptron training.

    Per document and epoch: decode with the raw (unaveraged) weights
    and, when the prediction differs from gold, push weights toward the
    gold tree's summed arc features and away from the prediction's.
    The averaging step advances once per document regardless.
    """
    parser = GraphParser()
    trees = list(trees)
    pair_cache = {}
    gold_cache = {}
    empty = FeatureVector()
    for epoch in range(epochs):
        for tree in trees:
            key = (tree.doc_id, tree.source)
            if key not in pair_cache:
                pair_cache[key] = pair_feature_ids(tree.texts, parser.dictionary)
            pair_ids = pair_cache[key]
            matrix = score_arcs(
                tree.texts, parser, averaged=False, doc_id=tree.doc_id, pair_ids=pair_ids
            )
            predicted = decode_mst(matrix)
            if set(predicted.arcs()) != set(tree.arcs()):
                if key not in gold_cache:
                    gold_cache[key] = tree_feature_vector(tree, pair_ids)
                pred_fv = tree_feature_vector(predicted, pair_ids)
                parser.perceptron.ensure_dim(len(parser.dictionary) * N_LABELS)
                perceptron_update(
                    parser.perceptron, gold_cache[key], pred_fv, learning_rate
                )
            else:
                perceptron_update(parser.perceptron, empty, empty, learning_rate)
        if after_epoch is not None:
            after_epoch(epoch, parser)
    parser.dictionary.freeze()
    return parser
