import io
import json
import unicodedata
from typing import FrozenSet, Iterable, List, Tuple, Union

from excmine import logger
from excmine.dataset import Category, KeywordIndex, Sentence, Token
from excmine.errors import ParseError


SENTENCE_END = {".", "!", "?"}


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> List[Token]:
    """Whitespace split, then peel leading and trailing punctuation off as one token per character."""
    tokens = []
    for chunk in text.split():
        lead = []
        while chunk and _is_punct(chunk[0]):
            lead.append(chunk[0])
            chunk = chunk[1:]
        trail = []
        while chunk and _is_punct(chunk[-1]):
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(Token(ch) for ch in lead)
        if chunk:
            tokens.append(Token(chunk))
        tokens.extend(Token(ch) for ch in reversed(trail))
    return tokens


def split_sentences(tokens: List[Token]) -> List[List[Token]]:
    """Cut after sentence-final punctuation; a run like `...` or `?!` stays with the sentence it ends."""
    sentences, current = [], []
    for token in tokens:
        if token.text in SENTENCE_END and not current and sentences and sentences[-1][-1].text in SENTENCE_END:
            sentences[-1].append(token)
            continue
        current.append(token)
        if token.text in SENTENCE_END:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


def review_sentences(spot_id: str, review_id: str, text: str) -> List[Sentence]:
    return [
        Sentence(id=f"{review_id}:{index}", tokens=tuple(tokens), spot_id=spot_id)
        for index, tokens in enumerate(split_sentences(tokenize(text)))
    ]


def load_reviews(stream: Union[str, Iterable[str]]) -> List[Sentence]:
    """JSON Lines reviews (`spot_id`, `review_id`, `text`) to untagged sentences."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    sentences = []
    num_reviews = 0
    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            raise ParseError(line_no, f"invalid JSON: {err.msg}") from None
        if not isinstance(record, dict):
            raise ParseError(line_no, "review must be a JSON object")
        for key in ("spot_id", "review_id", "text"):
            if not isinstance(record.get(key), str):
                raise ParseError(line_no, f"field {key!r} missing or not a string")
        try:
            sentences.extend(review_sentences(record["spot_id"], record["review_id"], record["text"]))
        except ValueError as err:
            raise ParseError(line_no, str(err)) from None
        num_reviews += 1
    logger.info(f"Loaded {num_reviews} reviews, {len(sentences)} sentences")
    return sentences


def load_keywords(stream: Union[str, io.TextIOBase]) -> KeywordIndex:
    text = stream if isinstance(stream, str) else stream.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.lineno, f"invalid JSON: {err.msg}") from None
    if not isinstance(raw, dict):
        raise ParseError(1, "keyword file must be a JSON object")
    keywords = {}
    for name, words in raw.items():
        try:
            category = Category(name)
        except ValueError:
            raise ParseError(1, f"unknown category {name!r}") from None
        if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
            raise ParseError(1, f"keywords for {name!r} must be a list of strings")
        keywords[category] = frozenset(words)
    try:
        return KeywordIndex(keywords)
    except ValueError as err:
        raise ParseError(1, str(err)) from None


def filter_candidate_sentences(
    sentences: Iterable[Sentence], keyword_index: KeywordIndex
) -> List[Tuple[Sentence, FrozenSet[Category]]]:
    kept = []
    for sentence in sentences:
        hits = keyword_index.hits(sentence.tokens)
        if hits:
            kept.append((sentence, hits))
    return kept
