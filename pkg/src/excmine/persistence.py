"""
Model files.

A model file is UTF-8 text:

    excm-1
    {"kind": ..., "template": ..., "embeddings": ..., "metadata": ...}
    weights <name> <rows> <cols>
    <rows lines of space-separated values, 17 significant digits>
    ...
    checksum <sha256 of everything above this line>

Embedding vectors are not stored; the file records the table fingerprint and the
table passed at load time must match it.
"""
import json
import re
from typing import Dict, Optional, Union

import numpy as np

from excmine import logger
from excmine.config import MODEL_FORMAT_VERSION
from excmine.dataset import Category, KeywordIndex
from excmine.errors import ChecksumMismatch, EmbeddingMismatch, ModelFileError, VersionMismatch
from excmine.features.embeddings import EmbeddingTable
from excmine.features.template import FeatureTemplate
from excmine.trainers.crf.model import CrfModel, CrfWeights
from excmine.trainers.phrase_clf.model import SoftmaxModel
from excmine.utils import atomic_write, sha256_text


CRF_KIND = "crf"
SOFTMAX_KIND = "softmax"

Model = Union[CrfModel, SoftmaxModel]


def _format_array(name: str, array: np.ndarray) -> str:
    matrix = np.atleast_2d(array)
    lines = [f"weights {name} {matrix.shape[0]} {matrix.shape[1]}"]
    lines.extend(" ".join(f"{v:.17g}" for v in row) for row in matrix)
    return "\n".join(lines) + "\n"


def _embedding_info(embeddings: Optional[EmbeddingTable]) -> Optional[dict]:
    if embeddings is None:
        return None
    return {"dim": embeddings.dim, "size": len(embeddings), "sha256": embeddings.fingerprint()}


def dumps_model(model: Model, metadata: Optional[dict] = None) -> str:
    if isinstance(model, CrfModel):
        header = {"kind": CRF_KIND, "template": model.template.to_dict()}
        arrays = dict(zip(("dense", "sparse", "transitions", "start"), model.weights.arrays()))
    elif isinstance(model, SoftmaxModel):
        header = {"kind": SOFTMAX_KIND, "keywords": model.keyword_index.to_dict(), "dim": model.dim}
        arrays = {"weights": model.weights, "bias": model.bias}
    else:
        raise TypeError(f"cannot save {type(model).__name__}")
    header["embeddings"] = _embedding_info(model.embeddings)
    header["metadata"] = metadata or {}

    body = MODEL_FORMAT_VERSION + "\n" + json.dumps(header, sort_keys=True) + "\n"
    body += "".join(_format_array(name, array) for name, array in arrays.items())
    return body + f"checksum {sha256_text(body)}\n"


def save_model(model: Model, path: str, metadata: Optional[dict] = None):
    atomic_write(path, dumps_model(model, metadata))


def _parse_arrays(lines) -> Dict[str, np.ndarray]:
    arrays = {}
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        if len(parts) != 4 or parts[0] != "weights":
            raise ModelFileError(f"unexpected line in weights section: {lines[i][:40]!r}")
        name, rows, cols = parts[1], int(parts[2]), int(parts[3])
        values = [np.asarray(line.split(), dtype=np.float64) for line in lines[i + 1 : i + 1 + rows]]
        arrays[name] = np.vstack(values).reshape(rows, cols) if rows else np.zeros((0, cols))
        i += 1 + rows
    return arrays


def loads_model(text: str, embeddings: Optional[EmbeddingTable] = None) -> Model:
    lines = text.split("\n")
    version = lines[0].strip()
    if re.fullmatch(r"excm-\d+", version) and version != MODEL_FORMAT_VERSION:
        raise VersionMismatch(f"unsupported model format {version!r}, expected {MODEL_FORMAT_VERSION!r}")

    body, sep, trailer = text.rpartition("checksum ")
    if not sep or trailer.strip() != sha256_text(body) or not body.endswith("\n"):
        raise ChecksumMismatch("model file is truncated or corrupted")
    if version != MODEL_FORMAT_VERSION:
        raise VersionMismatch(f"unsupported model format {version!r}")

    body_lines = body.rstrip("\n").split("\n")
    header = json.loads(body_lines[1])
    arrays = _parse_arrays(body_lines[2:])

    recorded = header.get("embeddings")
    if embeddings is not None and recorded is not None:
        if embeddings.dim != recorded["dim"] or embeddings.fingerprint() != recorded["sha256"]:
            raise EmbeddingMismatch("embedding table differs from the one the model was trained with")

    if header["kind"] == CRF_KIND:
        template = FeatureTemplate.from_dict(header["template"])
        weights = CrfWeights(
            dense=arrays["dense"],
            sparse=arrays["sparse"],
            transitions=arrays["transitions"],
            start=arrays["start"].reshape(-1),
        )
        model = CrfModel(template, weights, embeddings)
    elif header["kind"] == SOFTMAX_KIND:
        keywords = KeywordIndex({Category(k): frozenset(v) for k, v in header["keywords"].items()})
        model = SoftmaxModel(arrays["weights"], arrays["bias"].reshape(-1), keywords, embeddings)
    else:
        raise ModelFileError(f"unknown model kind {header['kind']!r}")
    model.metadata = header.get("metadata", {})
    return model


def load_model(path: str, embeddings: Optional[EmbeddingTable] = None) -> Model:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    model = loads_model(text, embeddings)
    logger.info(f"Loaded {type(model).__name__} from {path}")
    return model
