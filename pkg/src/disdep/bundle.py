"""Versioned model-bundle files.

A bundle is one JSON document (gzip-compressed when the path ends in
.gz) holding the parser kind, the feature dictionary, and per-class
(feature id, weight) pairs, so trained models are text-inspectable and
byte-stable across identical runs.
"""

import gzip
import json
from pathlib import Path

import numpy as np

from .features import FeatureDictionary
from .graph import GraphParser, LABELS as GRAPH_LABELS
from .learners import AveragedPerceptronModel, LinearMulticlassModel
from .transition import TwoStageParser, VanillaParser

FORMAT = "disdep-model"
VERSION = 1


class BundleError(ValueError):
    pass


def _encode_multiclass(model):
    per_class = []
    for row in model.weights:
        nz = np.nonzero(row)[0]
        per_class.append([[int(i), float(row[i])] for i in nz])
    return {
        "classes": list(model.classes),
        "weights": per_class,
        "bias": [float(b) for b in model.bias],
        "C": model.C,
    }


def _decode_multiclass(payload, dim):
    classes = tuple(payload["classes"])
    weights = np.zeros((len(classes), dim))
    for c, pairs in enumerate(payload["weights"]):
        for idx, value in pairs:
            weights[c, idx] = value
    bias = np.array(payload["bias"], dtype=float)
    return LinearMulticlassModel(
        classes=classes, weights=weights, bias=bias, C=payload.get("C", 1.0)
    )


def _encode_perceptron(model):
    averaged = model.averaged_weights
    nz = np.nonzero(averaged)[0]
    return {
        "averaged": [[int(i), float(averaged[i])] for i in nz],
        "dim": len(averaged),
        "update_count": model.update_count,
    }


def _decode_perceptron(payload):
    weights = np.zeros(payload["dim"])
    for idx, value in payload["averaged"]:
        weights[idx] = value
    # Loading the averaged vector as a single snapshot makes the
    # averaged view reproduce it exactly.
    model = AveragedPerceptronModel(weights=weights, update_count=1)
    model._accum = weights.copy()
    return model


def save_bundle(parser, path, hyper=None):
    """Serialize a trained parser (vanilla, two-stage, or graph)."""
    doc = {"format": FORMAT, "version": VERSION, "hyper": hyper or {}}
    if isinstance(parser, VanillaParser):
        doc["parser"] = "vanilla"
        doc["dictionary"] = list(parser.dictionary.names)
        doc["action_model"] = _encode_multiclass(parser.model)
    elif isinstance(parser, TwoStageParser):
        doc["parser"] = "two-stage"
        doc["dictionary"] = list(parser.dictionary.names)
        doc["structure_model"] = _encode_multiclass(parser.structure_model)
        doc["labeler"] = _encode_multiclass(parser.labeler)
    elif isinstance(parser, GraphParser):
        doc["parser"] = "graph"
        doc["dictionary"] = list(parser.dictionary.names)
        doc["labels"] = list(parser.labels)
        doc["perceptron"] = _encode_perceptron(parser.perceptron)
    else:
        raise BundleError("cannot serialize parser of type %r" % type(parser).__name__)

    payload = json.dumps(doc, sort_keys=True, ensure_ascii=False)
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.GzipFile(path, "wb", mtime=0) as fh:
            fh.write(payload.encode("utf-8"))
    else:
        path.write_text(payload, encoding="utf-8")


def load_bundle(path):
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = json.loads(path.read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT:
        raise BundleError("%s is not a %s file" % (path, FORMAT))
    if doc.get("version") != VERSION:
        raise BundleError(
            "%s has version %r, expected %d" % (path, doc.get("version"), VERSION)
        )

    names = doc["dictionary"][1:]  # index 0 is the reserved OOV slot
    dictionary = FeatureDictionary(names=names).freeze()
    dim = len(dictionary)
    kind = doc["parser"]
    if kind == "vanilla":
        return VanillaParser(
            model=_decode_multiclass(doc["action_model"], dim), dictionary=dictionary
        )
    if kind == "two-stage":
        return TwoStageParser(
            structure_model=_decode_multiclass(doc["structure_model"], dim),
            labeler=_decode_multiclass(doc["labeler"], dim),
            dictionary=dictionary,
        )
    if kind == "graph":
        labels = tuple(doc.get("labels", GRAPH_LABELS))
        parser = GraphParser(
            perceptron=_decode_perceptron(doc["perceptron"]),
            dictionary=dictionary,
            labels=labels,
        )
        return parser
    raise BundleError("unknown parser kind %r in %s" % (kind, path))
