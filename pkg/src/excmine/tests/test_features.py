import io

import numpy as np
import pytest

from excmine.dataset import Category, KeywordIndex, Sentence
from excmine.errors import DimMismatch, EmbeddingMismatch, EmptySpan, IndexOutOfRange, NonNumeric, SpanOutOfRange
from excmine.features.embeddings import EmbeddingTable, load_embeddings
from excmine.features.template import (
    ALL_CAPS,
    CAPITALIZED,
    OOV,
    FeatureTemplate,
    phrase_feature_width,
    phrase_features,
    sentence_features,
    token_features,
    word_shape,
)


def test_load_embeddings_basic():
    table = load_embeddings("a 0.1 0.2\nb 0.3 0.4")
    assert table.dim == 2
    assert len(table) == 2
    np.testing.assert_array_equal(table.lookup("b")[0], [0.3, 0.4])


def test_load_embeddings_header_and_duplicates():
    table = load_embeddings("2 3\na 1 2 3\na 4 5 6\n")
    assert table.dim == 3
    assert len(table) == 1
    np.testing.assert_array_equal(table.lookup("a")[0], [4, 5, 6])


def test_load_embeddings_errors():
    with pytest.raises(DimMismatch) as err:
        load_embeddings("a 0.1 0.2\nb 0.3")
    assert err.value.line_no == 2
    with pytest.raises(NonNumeric) as err:
        load_embeddings("a 0.1 0.2\nb 0.3 zz")
    assert err.value.line_no == 2


def test_embedding_text_round_trip():
    rng = np.random.default_rng(3)
    table = EmbeddingTable.from_dict({w: rng.normal(size=4) for w in ["x", "y", "Zed"]})
    again = load_embeddings(io.StringIO(table.to_text()))
    assert again.vocab == table.vocab
    np.testing.assert_array_equal(again.matrix, table.matrix)
    assert again.fingerprint() == table.fingerprint()


def test_lookup_oov_and_lowercase_fallback(embeddings):
    vector, is_oov = embeddings.lookup("unknownword")
    assert is_oov
    np.testing.assert_array_equal(vector, np.zeros(3))
    vector, is_oov = embeddings.lookup("Park")
    assert not is_oov
    np.testing.assert_array_equal(vector, embeddings.lookup("park")[0])


@pytest.mark.parametrize(
    "text, shape",
    [("Paris", "Xxxxx"), ("Disneyland", "Xxxxx"), ("1999", "9999"), ("A-10", "X-99"), ("$5", "$9")],
)
def test_word_shape(text, shape):
    assert word_shape(text) == shape


def test_token_features_boundaries(embeddings, toy_dataset):
    sentence = toy_dataset.sentences[0]
    template = FeatureTemplate.build(toy_dataset.sentences, embeddings, min_count=1)
    first = token_features(template, embeddings, sentence, 0)
    assert first.dense.shape == (9,)
    np.testing.assert_array_equal(first.dense[:3], np.zeros(3))
    np.testing.assert_array_equal(first.dense[3:6], embeddings.lookup("the")[0])
    assert template.feature_id(CAPITALIZED) in first.sparse
    last = token_features(template, embeddings, sentence, len(sentence) - 1)
    np.testing.assert_array_equal(last.dense[6:], np.zeros(3))
    with pytest.raises(IndexOutOfRange):
        token_features(template, embeddings, sentence, len(sentence))


def test_oov_token_features(embeddings):
    train = [Sentence.from_words("0", ["park", "park"])]
    template = FeatureTemplate.build(train, embeddings)
    sentence = Sentence.from_words("1", ["PARIS"])
    features = token_features(template, embeddings, sentence, 0)
    np.testing.assert_array_equal(features.dense[3:6], np.zeros(3))
    assert template.feature_id(OOV) in features.sparse
    assert template.feature_id("w=paris") is None
    # ALL_CAPS never occurred in training, so it has no id
    assert template.feature_id(ALL_CAPS) is None


def test_identity_features_need_min_count(embeddings, toy_dataset):
    template = FeatureTemplate.build(toy_dataset.sentences, embeddings, min_count=2)
    assert template.feature_id("w=cheap") is not None
    assert template.feature_id("w=is") is not None
    assert template.feature_id("w=park") is None


def test_frozen_template_never_grows(embeddings, toy_dataset):
    template = FeatureTemplate.build(toy_dataset.sentences, embeddings, min_count=1)
    size = template.num_sparse
    unseen = Sentence.from_words("x", ["Totally", "NEW", "words", "42", "!?"])
    features = sentence_features(template, embeddings, unseen)
    assert template.num_sparse == size
    assert template.add("w=totally") is None
    assert all(int(i) < size for ids in features.sparse for i in ids)
    assert features.dense.shape == (5, template.dense_width)


def test_template_rejects_other_dim(embeddings, toy_dataset):
    template = FeatureTemplate.build(toy_dataset.sentences, embeddings)
    other = EmbeddingTable.from_dict({"a": [1.0, 2.0]})
    with pytest.raises(EmbeddingMismatch):
        sentence_features(template, other, toy_dataset.sentences[0])


def test_template_dict_round_trip(embeddings, toy_dataset):
    template = FeatureTemplate.build(toy_dataset.sentences, embeddings)
    again = FeatureTemplate.from_dict(template.to_dict())
    assert again.frozen
    assert again.feature_names == template.feature_names


def test_phrase_features_mean_and_keywords():
    table = EmbeddingTable.from_dict({"wheelchair": [0.2, 0.0], "ramp": [0.4, 0.2]})
    index = KeywordIndex({Category.Handicap: {"wheelchair"}})
    sentence = Sentence.from_words("0", ["a", "wheelchair", "ramp"])
    x = phrase_features(table, index, sentence, (1, 3))
    assert x.shape == (phrase_feature_width(2),)
    np.testing.assert_allclose(x[:2], [0.3, 0.1])
    assert x[2] == pytest.approx(0.2)
    indicators = x[3:]
    assert indicators[Category.Handicap.index] == 1.0
    assert indicators.sum() == 1.0


def test_phrase_features_length_is_capped(embeddings):
    sentence = Sentence.from_words("0", ["w"] * 12)
    index = KeywordIndex({})
    assert phrase_features(embeddings, index, sentence, (0, 12))[3] == 1.0


def test_phrase_features_ignore_context(embeddings, keyword_index):
    a = Sentence.from_words("a", ["xx", "cheap", "tickets", "yy"])
    b = Sentence.from_words("b", ["yy", "cheap", "tickets", "xx"])
    np.testing.assert_array_equal(
        phrase_features(embeddings, keyword_index, a, (1, 3)), phrase_features(embeddings, keyword_index, b, (1, 3))
    )


def test_phrase_features_errors(embeddings, keyword_index):
    sentence = Sentence.from_words("0", ["a", "b", "c", "d"])
    with pytest.raises(EmptySpan):
        phrase_features(embeddings, keyword_index, sentence, (3, 3))
    with pytest.raises(SpanOutOfRange):
        phrase_features(embeddings, keyword_index, sentence, (2, 6))
