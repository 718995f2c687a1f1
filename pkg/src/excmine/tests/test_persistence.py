import numpy as np
import pytest

from excmine.dataset import NUM_CATEGORIES, NUM_TAGS, Category, Sentence
from excmine.errors import ChecksumMismatch, EmbeddingMismatch, ModelFileError, VersionMismatch
from excmine.features.embeddings import EmbeddingTable
from excmine.features.template import FeatureTemplate
from excmine.persistence import dumps_model, load_model, loads_model, save_model
from excmine.trainers.crf.model import CrfModel, CrfWeights, tag
from excmine.trainers.phrase_clf.model import SoftmaxModel, classify_phrases


@pytest.fixture
def crf_model(embeddings, toy_dataset):
    rng = np.random.default_rng(5)
    template = FeatureTemplate.build(toy_dataset.sentences, embeddings, min_count=1)
    weights = CrfWeights(
        dense=rng.normal(size=(NUM_TAGS, template.dense_width)),
        sparse=rng.normal(size=(NUM_TAGS, template.num_sparse)),
        transitions=rng.normal(size=(NUM_TAGS, NUM_TAGS)),
        start=rng.normal(size=NUM_TAGS),
    )
    return CrfModel(template, weights, embeddings)


@pytest.fixture
def softmax_model(embeddings, keyword_index):
    rng = np.random.default_rng(6)
    return SoftmaxModel(
        rng.normal(size=(NUM_CATEGORIES, embeddings.dim + 12)), rng.normal(size=NUM_CATEGORIES), keyword_index, embeddings
    )


def test_crf_round_trip(tmp_path, crf_model, embeddings, toy_dataset):
    path = str(tmp_path / "crf.model")
    save_model(crf_model, path, metadata={"seed": 13})
    loaded = load_model(path, embeddings)
    assert isinstance(loaded, CrfModel)
    assert loaded.metadata == {"seed": 13}
    for before, after in zip(crf_model.weights.arrays(), loaded.weights.arrays()):
        np.testing.assert_array_equal(before, after)
    assert loaded.template.feature_names == crf_model.template.feature_names
    sentences = list(toy_dataset.sentences) + [Sentence.from_words("x", ["Unseen", "words", "42"])]
    assert tag(loaded, sentences) == tag(crf_model, sentences)


def test_softmax_round_trip(tmp_path, softmax_model, embeddings, toy_dataset):
    path = str(tmp_path / "clf.model")
    save_model(softmax_model, path)
    loaded = load_model(path, embeddings)
    assert isinstance(loaded, SoftmaxModel)
    np.testing.assert_array_equal(loaded.weights, softmax_model.weights)
    np.testing.assert_array_equal(loaded.bias, softmax_model.bias)
    assert loaded.keyword_index.categories_for("wheelchair") == {Category.Handicap}
    phrases = list(toy_dataset.phrases)
    assert classify_phrases(loaded, toy_dataset.by_id, phrases) == classify_phrases(
        softmax_model, toy_dataset.by_id, phrases
    )


def test_saving_is_deterministic(tmp_path, crf_model):
    first, second = tmp_path / "a.model", tmp_path / "b.model"
    save_model(crf_model, str(first), metadata={"seed": 1})
    save_model(crf_model, str(second), metadata={"seed": 1})
    assert first.read_bytes() == second.read_bytes()


def test_file_layout(softmax_model):
    lines = dumps_model(softmax_model).splitlines()
    assert lines[0] == "excm-1"
    assert lines[2] == f"weights weights {NUM_CATEGORIES} {softmax_model.width}"
    assert lines[-1].startswith("checksum ")


def test_truncated_file(crf_model, embeddings):
    text = dumps_model(crf_model)
    with pytest.raises(ChecksumMismatch):
        loads_model(text[: len(text) // 2], embeddings)
    tampered = text.replace("weights dense", "weights dense ", 1)
    with pytest.raises(ChecksumMismatch):
        loads_model(tampered, embeddings)
    with pytest.raises(ModelFileError):
        loads_model("", embeddings)


def test_unknown_version(crf_model, embeddings):
    text = dumps_model(crf_model).replace("excm-1", "excm-9", 1)
    with pytest.raises(VersionMismatch):
        loads_model(text, embeddings)


def test_other_embedding_table(crf_model, embeddings):
    text = dumps_model(crf_model)
    other = EmbeddingTable.from_dict({w: embeddings.matrix[i] + 1.0 for w, i in embeddings.vocab.items()})
    with pytest.raises(EmbeddingMismatch):
        loads_model(text, other)
    assert isinstance(loads_model(text, embeddings), CrfModel)
