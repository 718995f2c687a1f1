import os

import numpy as np
import pytest

from excmine.dataset import BioTag, Category, Coarse, Dataset, KeywordIndex, Phrase, Sentence
from excmine.features.embeddings import EmbeddingTable


B, I, O = BioTag.B_INC, BioTag.INC, BioTag.O
BE, IE = BioTag.B_EXC, BioTag.EXC


@pytest.fixture
def embeddings():
    rng = np.random.default_rng(0)
    words = ["the", "park", "is", "cheap", "tickets", "very", "crowded", "wheelchair", "access", "food", "."]
    return EmbeddingTable.from_dict({w: rng.uniform(-1, 1, size=3) for w in words})


@pytest.fixture
def keyword_index():
    return KeywordIndex(
        {
            Category.Price: {"cheap", "expensive", "tickets"},
            Category.Crowd: {"crowded", "busy"},
            Category.Handicap: {"wheelchair"},
            Category.Food: {"food"},
        }
    )


@pytest.fixture
def toy_dataset():
    sentences = (
        Sentence.from_words("r1:0", ["The", "park", "is", "very", "crowded", "."], [O, O, O, BE, IE, O], spot_id="s1"),
        Sentence.from_words("r1:1", ["cheap", "tickets", "!"], [B, I, O], spot_id="s1"),
        Sentence.from_words("r2:0", ["wheelchair", "access", "is", "cheap"], [B, I, O, B], spot_id="s2"),
    )
    phrases = (
        Phrase("r1:0", 3, 5, Coarse.EXC, Category.Crowd),
        Phrase("r1:1", 0, 2, Coarse.INC, Category.Price),
        Phrase("r2:0", 0, 2, Coarse.INC, Category.Handicap),
        Phrase("r2:0", 3, 4, Coarse.INC, Category.Price),
    )
    return Dataset(sentences=sentences, phrases=phrases)


@pytest.fixture
def data_dir():
    path = os.getenv("EXCMINE_DATA_DIR")
    if not path:
        pytest.skip("EXCMINE_DATA_DIR is not set")
    return path
