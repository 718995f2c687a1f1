import io
import json

import numpy as np
import pytest

from excmine.dataset import BioTag, Category, Coarse, Dataset, KeywordIndex, Phrase, Sentence, Token
from excmine.errors import BadRatios, EmptyInput, InvalidBio, LengthMismatch, MissingTags, ParseError, SpanOutOfRange
from excmine.preprocessor.bio import extract_phrases, phrases_to_tags, repair_bio, validate_bio
from excmine.preprocessor.conll import parse_conll, write_conll
from excmine.preprocessor.phrases import read_phrases, write_phrases
from excmine.preprocessor.reviews import filter_candidate_sentences, load_keywords, load_reviews, tokenize
from excmine.preprocessor.stats import cohen_kappa, label_distribution
from excmine.splits import split_dataset


O, B_INC, INC, B_EXC, EXC = BioTag


def test_token_lower_is_casefold():
    assert Token("Straße").lower == "strasse"
    with pytest.raises(ValueError):
        Token("two words")
    with pytest.raises(ValueError):
        Token("")


def test_enums_are_canonical():
    assert [t.value for t in BioTag] == [0, 1, 2, 3, 4]
    assert len(Category) == 11
    assert Category.parse("Age/Height") is Category.AgeHeight
    assert Category.Time.index == 10


def test_parse_conll_basic():
    dataset = parse_conll("wheelchair\tB_EXC\nramp\tEXC\n\n")
    assert len(dataset) == 1
    assert dataset.sentences[0].tags == (B_EXC, EXC)
    assert dataset.sentences[0].id == "0"


def test_parse_conll_empty():
    assert parse_conll("") == Dataset()


def test_parse_conll_unknown_tag():
    with pytest.raises(ParseError) as err:
        parse_conll("word\tB_FOO\n")
    assert err.value.line_no == 1


def test_parse_conll_missing_column_and_empty_token():
    with pytest.raises(ParseError) as err:
        parse_conll("a\tO\nb\n")
    assert err.value.line_no == 2
    with pytest.raises(ParseError):
        parse_conll("\tO\n")


def test_parse_conll_headers_and_comments():
    text = "# a free comment\n# id = r7:2\n# spot_id = louvre\nBusy\tB_EXC\n\n# id = r7:3\nok\tO\n"
    dataset = parse_conll(text)
    assert [s.id for s in dataset.sentences] == ["r7:2", "r7:3"]
    assert dataset.sentences[0].spot_id == "louvre"
    assert dataset.sentences[1].spot_id is None


def test_write_conll_exact_format():
    dataset = Dataset(sentences=(Sentence.from_words("0", ["wheelchair", "ramp"], [B_EXC, EXC]),))
    assert write_conll(dataset) == "wheelchair\tB_EXC\nramp\tEXC\n\n"


def test_conll_round_trip(toy_dataset):
    sentences = Dataset(sentences=toy_dataset.sentences)
    assert parse_conll(write_conll(sentences)) == sentences


def test_write_conll_requires_tags():
    with pytest.raises(MissingTags):
        write_conll(Dataset(sentences=(Sentence.from_words("0", ["a"]),)))


@pytest.mark.parametrize(
    "tags, violations",
    [
        ([O, O, O], []),
        ([O] * 7 + [INC] * 5, [7]),
        ([B_EXC, INC], [1]),
        ([EXC], [0]),
    ],
)
def test_validate_bio(tags, violations):
    assert validate_bio(tags) == violations


@pytest.mark.parametrize(
    "tags, repaired",
    [
        ([O, INC, INC], [O, B_INC, INC]),
        ([B_EXC, INC], [B_EXC, B_INC]),
        ([B_INC, INC, O], [B_INC, INC, O]),
    ],
)
def test_repair_bio(tags, repaired):
    assert repair_bio(tags) == repaired


def test_extract_phrases():
    phrases = extract_phrases("s", [B_EXC] + [EXC] * 6 + [O] * 3)
    assert [(p.start, p.end, p.coarse) for p in phrases] == [(0, 7, Coarse.EXC)]
    assert extract_phrases("s", [O, O]) == []
    phrases = extract_phrases("s", [B_INC, INC, B_INC])
    assert [p.span for p in phrases] == [(0, 2), (2, 3)]
    with pytest.raises(InvalidBio):
        extract_phrases("s", [O, INC])


def test_bio_laws_on_random_sequences():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        tags = [BioTag(int(t)) for t in rng.integers(0, 5, size=rng.integers(1, 12))]
        repaired = repair_bio(tags)
        assert repair_bio(repaired) == repaired
        assert validate_bio(repaired) == []
        phrases = extract_phrases("s", repaired)
        assert phrases_to_tags(len(tags), phrases) == repaired
        assert sum(len(p) for p in phrases) == sum(t != O for t in repaired)
        for left, right in zip(phrases, phrases[1:]):
            assert left.end <= right.start


def test_phrase_rejects_bad_spans():
    with pytest.raises(SpanOutOfRange):
        Phrase("s", 3, 3, Coarse.INC)
    with pytest.raises(SpanOutOfRange):
        Dataset(
            sentences=(Sentence.from_words("s", ["a", "b"]),),
            phrases=(Phrase("s", 1, 3, Coarse.INC),),
        )


def test_phrase_tsv_round_trip(toy_dataset):
    text = write_phrases(toy_dataset.phrases, toy_dataset)
    assert text.splitlines()[0] == "sentence_id\tstart\tend\tcoarse\tcategory\ttext"
    assert "r1:1\t0\t2\tINC\tPrice\tcheap tickets" in text.splitlines()
    assert read_phrases(io.StringIO(text)) == list(toy_dataset.phrases)


def test_read_phrases_empty_category_and_errors():
    phrases = read_phrases(io.StringIO("sentence_id\tstart\tend\tcoarse\tcategory\ttext\n3\t0\t1\tEXC\t\tx\n"))
    assert phrases == [Phrase("3", 0, 1, Coarse.EXC)]
    with pytest.raises(ParseError) as err:
        read_phrases(io.StringIO("sentence_id\tstart\tend\tcoarse\tcategory\ttext\n3\t0\t1\tBAD\t\tx\n"))
    assert err.value.line_no == 2


def test_tokenize_detaches_punctuation():
    assert [t.text for t in tokenize('"Great," she said (really)!')] == [
        '"', "Great", ",", '"', "she", "said", "(", "really", ")", "!",
    ]


def test_load_reviews_ids_and_errors():
    stream = io.StringIO(
        json.dumps({"spot_id": "s1", "review_id": "r9", "text": "Too crowded. Cheap tickets!"}) + "\n\n"
    )
    sentences = load_reviews(stream)
    assert [s.id for s in sentences] == ["r9:0", "r9:1"]
    assert sentences[1].words == ["Cheap", "tickets", "!"]
    assert all(s.spot_id == "s1" for s in sentences)
    with pytest.raises(ParseError) as err:
        load_reviews(io.StringIO('{"spot_id": "s"}\n{not json}\n'))
    assert err.value.line_no == 1


def test_load_keywords():
    index = load_keywords(io.StringIO(json.dumps({"Handicap": ["wheelchair", "ramp"]})))
    assert index.categories_for("ramp") == {Category.Handicap}
    with pytest.raises(ParseError):
        load_keywords(io.StringIO(json.dumps({"Weather": ["rain"]})))
    with pytest.raises(ParseError):
        load_keywords(io.StringIO(json.dumps({"Food": ["Pizza"]})))


def test_filter_candidate_sentences(keyword_index):
    sentences = [
        Sentence.from_words("a", ["great", "Wheelchair", "ramp"]),
        Sentence.from_words("b", ["nothing", "here"]),
        Sentence.from_words("c", ["busy", "and", "expensive"]),
    ]
    kept = filter_candidate_sentences(sentences, keyword_index)
    assert [(s.id, hits) for s, hits in kept] == [
        ("a", {Category.Handicap}),
        ("c", {Category.Crowd, Category.Price}),
    ]


def test_keyword_index_rejects_uppercase():
    with pytest.raises(ValueError):
        KeywordIndex({Category.Food: {"Pizza"}})


def _numbered(n):
    return Dataset(sentences=tuple(Sentence.from_words(str(i), ["w"], [O]) for i in range(n)))


def test_split_sizes_and_determinism():
    dataset = _numbered(10)
    train, valid, test = split_dataset(dataset, (0.7, 0.1, 0.2), 13)
    assert (len(train), len(valid), len(test)) == (7, 1, 2)
    again = split_dataset(dataset, (0.7, 0.1, 0.2), 13)
    assert (train, valid, test) == again
    ids = [s.id for part in (train, valid, test) for s in part.sentences]
    assert sorted(ids, key=int) == [str(i) for i in range(10)]


def test_split_keeps_phrases_with_sentences(toy_dataset):
    parts = split_dataset(toy_dataset, (0.4, 0.3, 0.3), 1)
    assert sum(len(p.phrases) for p in parts) == len(toy_dataset.phrases)
    for part in parts:
        assert all(p.sentence_id in part.by_id for p in part.phrases)


def test_split_bad_ratios():
    with pytest.raises(BadRatios):
        split_dataset(_numbered(3), (0.5, 0.5, 0.5), 13)
    with pytest.raises(BadRatios):
        split_dataset(_numbered(3), (1.0, 0.0), 13)


def test_cohen_kappa():
    assert cohen_kappa(["A", "B", "A"], ["A", "B", "A"]) == 1.0
    assert cohen_kappa(["A", "A"], ["A", "A"]) == 1.0
    assert cohen_kappa(list("AABB"), list("ABAB")) == pytest.approx(0.0)
    a, b = list("AABBCAB"), list("ABBBCAA")
    assert cohen_kappa(a, b) == pytest.approx(cohen_kappa(b, a))
    relabel = {"A": "x", "B": "y", "C": "z"}
    assert cohen_kappa(a, b) == pytest.approx(cohen_kappa([relabel[x] for x in a], [relabel[x] for x in b]))
    with pytest.raises(LengthMismatch):
        cohen_kappa(["A"], ["A", "B"])
    with pytest.raises(EmptyInput):
        cohen_kappa([], [])


def test_label_distribution(toy_dataset):
    empty = label_distribution(Dataset())
    assert set(empty.tags.values()) == {0}
    assert empty.num_sentences == 0

    single = label_distribution(Dataset(sentences=(Sentence.from_words("0", ["a", "b"], [B_INC, INC]),)))
    assert single.tags == {O: 0, B_INC: 1, INC: 1, B_EXC: 0, EXC: 0}

    dist = label_distribution(toy_dataset)
    assert sum(dist.tags.values()) == dist.num_tokens == 13
    assert sum(dist.categories.values()) == dist.num_phrases == 4
    assert dist.categories["Price"] == 2
    assert dist.coarse == {"INC": 3, "EXC": 1}


def test_conll_round_trip_keeps_padded_ids():
    dataset = Dataset(
        sentences=(
            Sentence.from_words(" r1:0 ", ["Busy"], [B_EXC], spot_id="s 1 "),
            Sentence.from_words("r1:1", ["ok"], [O], spot_id=""),
        )
    )
    again = parse_conll(write_conll(dataset))
    assert again == dataset
    assert again.sentences[0].id == " r1:0 "
    assert again.sentences[0].spot_id == "s 1 "


@pytest.mark.parametrize("sentence_id", ["r1\t0", "r1\n0", "r1:0\r"])
def test_sentence_rejects_ids_that_break_headers(sentence_id):
    with pytest.raises(ValueError):
        Sentence.from_words(sentence_id, ["a"])
    with pytest.raises(ValueError):
        Sentence.from_words("ok", ["a"], spot_id=sentence_id)


def test_keywords_match_casefolded_tokens():
    index = KeywordIndex({Category.Price: {"straße"}, Category.Crowd: {"όχλος"}})
    sentences = [
        Sentence.from_words("a", ["Straße", "fee"]),
        Sentence.from_words("b", ["STRASSE"]),
        Sentence.from_words("c", ["ΌΧΛΟΣ"]),
    ]
    kept = filter_candidate_sentences(sentences, index)
    assert [(s.id, hits) for s, hits in kept] == [
        ("a", {Category.Price}),
        ("b", {Category.Price}),
        ("c", {Category.Crowd}),
    ]
    loaded = load_keywords(io.StringIO(json.dumps({"Price": ["straße"]})))
    assert loaded.categories_for(Token("Straße").lower) == {Category.Price}


def test_load_reviews_keeps_punctuation_runs_in_one_sentence():
    stream = io.StringIO(
        json.dumps({"spot_id": "s1", "review_id": "r3", "text": "Great view... really crowded?! Go early."}) + "\n"
    )
    sentences = load_reviews(stream)
    assert [s.id for s in sentences] == ["r3:0", "r3:1", "r3:2"]
    assert [s.words for s in sentences] == [
        ["Great", "view", ".", ".", "."],
        ["really", "crowded", "?", "!"],
        ["Go", "early", "."],
    ]
