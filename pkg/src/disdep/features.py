"""Tokenization and sparse feature extraction for the parsers.

Feature ids are plain strings ("s0.first=for", "dist=3-5", ...) until a
FeatureDictionary interns them to dense integers.  Extraction is
deterministic; counts are implicit 1.0.
"""

import string
from functools import lru_cache
from importlib import resources

import numpy as np

from .analysis import distance_bucket

# Characters stripped from chunk edges into separate tokens.  Internal
# punctuation (hyphens, apostrophes, decimal points) is kept.
_PUNCT = set(string.punctuation) | set("‘’“”–—…")

EMPTY = "EMPTY"
NONE = "NONE"


@lru_cache(maxsize=65536)
def tokenize(edu_text):
    """Lower-cased whitespace tokens with leading/trailing punctuation
    split off as separate tokens."""
    tokens = []
    for chunk in edu_text.split():
        head = []
        while chunk and chunk[0] in _PUNCT:
            head.append(chunk[0])
            chunk = chunk[1:]
        tail = []
        while chunk and chunk[-1] in _PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(head)
        if chunk:
            tokens.append(chunk.lower())
        tokens.extend(reversed(tail))
    return tuple(tokens)


def _load_cues():
    text = resources.files("disdep").joinpath("data/cues.txt").read_text("utf-8")
    cues = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            cues.append(tuple(line.split()))
    # Longest first so the most specific cue wins.
    return tuple(sorted(cues, key=lambda c: (-len(c), c)))


CUES = _load_cues()


def leading_cue(tokens):
    """The longest cue the token sequence starts with, or None."""
    for cue in CUES:
        if tokens[: len(cue)] == cue:
            return " ".join(cue)
    return None


def _length_bucket(n_tokens):
    if n_tokens <= 2:
        return "1-2"
    if n_tokens <= 5:
        return "3-5"
    if n_tokens <= 10:
        return "6-10"
    return ">10"


def edu_features(texts, i, prefix):
    """Surface features of EDU i (1-based), each carrying ``prefix``:
    first/last token, first bigram, length bucket, position bucket,
    position quartile, and the leading discourse cue if any."""
    n = len(texts)
    tokens = tokenize(texts[i - 1])
    first = tokens[0] if tokens else NONE
    last = tokens[-1] if tokens else NONE
    second = tokens[1] if len(tokens) > 1 else NONE
    if i == 1:
        position = "first"
    elif i == n:
        position = "last"
    else:
        position = "body"
    quartile = min(3, (i - 1) * 4 // n)
    feats = [
        "%s.first=%s" % (prefix, first),
        "%s.last=%s" % (prefix, last),
        "%s.big=%s_%s" % (prefix, first, second),
        "%s.len=%s" % (prefix, _length_bucket(len(tokens))),
        "%s.pos=%s" % (prefix, position),
        "%s.quart=%d" % (prefix, quartile),
    ]
    cue = leading_cue(tokens)
    if cue is not None:
        feats.append("%s.cue=%s" % (prefix, cue))
    return feats


def first_token(texts, i):
    tokens = tokenize(texts[i - 1])
    return tokens[0] if tokens else NONE


def config_features(state):
    """Features of a transition configuration: s0/s1/b0 surface
    features, pairwise distance buckets, attached-children counts, the
    relation of s0's most recent dependent, and first-token
    conjunctions.  Absent positions emit EMPTY sentinels."""
    texts = state.texts
    s0 = state.stack[-1] if len(state.stack) > 1 else None
    s1 = state.stack[-2] if len(state.stack) > 2 else None
    b0 = state.buffer[0] if state.buffer else None

    feats = []
    for name, idx in (("s0", s0), ("s1", s1), ("b0", b0)):
        if idx is None:
            feats.append("%s=%s" % (name, EMPTY))
        else:
            feats.extend(edu_features(texts, idx, name))

    if s0 is not None and s1 is not None:
        feats.append("dist(s0,s1)=%s" % distance_bucket(abs(s0 - s1) - 1))
    if s0 is not None and b0 is not None:
        feats.append("dist(s0,b0)=%s" % distance_bucket(abs(s0 - b0) - 1))

    for name, idx in (("s0", s0), ("s1", s1)):
        if idx is None:
            continue
        left = sum(1 for h, d, _r in state.arcs if h == idx and d < idx)
        right = sum(1 for h, d, _r in state.arcs if h == idx and d > idx)
        feats.append("%s.nl=%d" % (name, left))
        feats.append("%s.nr=%d" % (name, right))

    recent = NONE
    if s0 is not None:
        for h, _d, r in reversed(state.arcs):
            if h == s0:
                recent = r if r is not None else "UNLABELED"
                break
    feats.append("s0.rc.rel=%s" % recent)

    tok0 = first_token(texts, s0) if s0 is not None else EMPTY
    tok1 = first_token(texts, s1) if s1 is not None else EMPTY
    tokb = first_token(texts, b0) if b0 is not None else EMPTY
    feats.append("s0s1.first=%s_%s" % (tok0, tok1))
    feats.append("s0b0.first=%s_%s" % (tok0, tokb))
    return feats


def arc_base_features(texts, head, dep):
    """Label-free features of a candidate arc: surface features of both
    endpoints (ROOT sentinel for the virtual root), direction, and the
    distance bucket."""
    if head == dep:
        raise ValueError("head and dependent coincide at %d" % head)
    if head == 0:
        feats = ["h.root"]
        dist = "ROOT"
    else:
        feats = edu_features(texts, head, "h")
        dist = distance_bucket(abs(head - dep) - 1)
    feats.extend(edu_features(texts, dep, "d"))
    feats.append("dir=%s" % ("right" if head < dep else "left"))
    feats.append("dist=%s" % dist)
    return feats


def arc_features(texts, head, dep, relation):
    """Arc features conjoined with the relation label; feature sets for
    different labels on the same arc are disjoint."""
    return [
        "%s&rel=%s" % (feat, relation)
        for feat in arc_base_features(texts, head, dep)
    ]


def labeler_features(texts, head, dep, head_depth, grandparent_relation):
    """Stage-two relation-labeling features: the label-free arc
    features plus tree context (depths and the relation already
    assigned between the head and its own head)."""
    feats = arc_base_features(texts, head, dep)
    feats.append("hdepth=%d" % head_depth)
    feats.append("ddepth=%d" % (head_depth + 1))
    feats.append("gp.rel=%s" % grandparent_relation)
    return feats


class FeatureDictionary:
    """Bijection between feature strings and dense integer ids.

    Id 0 is reserved for out-of-vocabulary strings; a frozen dictionary
    never grows and maps unseen strings to it, counting them so the OOV
    rate can be reported.
    """

    OOV = "<OOV>"

    def __init__(self, names=None):
        self._index = {self.OOV: 0}
        self._names = [self.OOV]
        if names is not None:
            for name in names:
                if name != self.OOV:
                    self._index[name] = len(self._names)
                    self._names.append(name)
        self.frozen = False
        self.lookups = 0
        self.oov_lookups = 0

    def __len__(self):
        return len(self._names)

    @property
    def names(self):
        return tuple(self._names)

    def freeze(self):
        self.frozen = True
        return self

    def intern(self, name):
        idx = self._index.get(name)
        if idx is not None:
            if self.frozen:
                self.lookups += 1
            return idx
        if self.frozen:
            self.lookups += 1
            self.oov_lookups += 1
            return 0
        idx = len(self._names)
        self._index[name] = idx
        self._names.append(name)
        return idx

    def to_ids(self, feature_names):
        """Sorted unique ids for a feature-string list (fixed order
        keeps float accumulation reproducible)."""
        return np.array(sorted({self.intern(f) for f in feature_names}), dtype=np.int64)

    @property
    def oov_rate(self):
        return self.oov_lookups / self.lookups if self.lookups else 0.0


class FeatureVector(dict):
    """Sparse feature map: interned id -> weight, no zero entries."""

    @classmethod
    def from_names(cls, feature_names, dictionary):
        fv = cls()
        for name in feature_names:
            fv[dictionary.intern(name)] = 1.0
        return fv

    def add(self, other, scale=1.0):
        for idx, value in other.items():
            updated = self.get(idx, 0.0) + scale * value
            if updated == 0.0:
                self.pop(idx, None)
            else:
                self[idx] = updated
        return self

    def minus(self, other):
        diff = FeatureVector(self)
        return diff.add(other, scale=-1.0)
