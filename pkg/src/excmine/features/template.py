import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from excmine.dataset import CATEGORIES, KeywordIndex, Sentence, Token
from excmine.errors import EmbeddingMismatch, EmptySpan, IndexOutOfRange, SpanOutOfRange
from excmine.features.embeddings import EmbeddingTable


BIAS = "bias"
OOV = "oov"
CAPITALIZED = "cap"
ALL_CAPS = "allcaps"
DIGIT = "digit"
PUNCT = "punct"

# phrase length is normalised by this many tokens and clipped at 1
PHRASE_LENGTH_SCALE = 10.0


def word_shape(text: str, max_run: int = 4) -> str:
    """Map characters to X / x / 9 / the character itself and cut runs longer than `max_run`."""
    out: List[str] = []
    run = 0
    for ch in text:
        if ch.isdigit():
            mapped = "9"
        elif ch.isupper():
            mapped = "X"
        elif ch.isalpha():
            mapped = "x"
        else:
            mapped = ch
        if out and out[-1] == mapped:
            run += 1
            if run > max_run:
                continue
        else:
            run = 1
        out.append(mapped)
    return "".join(out)


def is_punct(text: str) -> bool:
    return all(unicodedata.category(ch).startswith("P") for ch in text)


def token_feature_names(token: Token, is_oov: bool) -> List[str]:
    """Every candidate sparse feature for one token, before vocabulary filtering."""
    text = token.text
    names = [BIAS, f"w={token.lower}", f"shape={word_shape(text)}"]
    if text[0].isupper():
        names.append(CAPITALIZED)
    if text.isupper():
        names.append(ALL_CAPS)
    if text.isdigit():
        names.append(DIGIT)
    if is_punct(text):
        names.append(PUNCT)
    if is_oov:
        names.append(OOV)
    return names


@dataclass(frozen=True, eq=False)
class FeatureVector:
    dense: np.ndarray
    sparse: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SentenceFeatures:
    """Featurized sentence: `dense` is L x width, `sparse[t]` the active feature ids at t."""

    dense: np.ndarray
    sparse: Tuple[np.ndarray, ...]

    def __len__(self):
        return self.dense.shape[0]


class FeatureTemplate:
    def __init__(self, dim: int, window: int = 1, features: Optional[Iterable[str]] = None, frozen: bool = False):
        if dim <= 0:
            raise ValueError("embedding dim must be positive")
        if window < 0:
            raise ValueError("window radius must be non-negative")
        self.dim = dim
        self.window = window
        self._ids: Dict[str, int] = {}
        self._frozen = False
        for name in features or ():
            self.add(name)
        self._frozen = frozen

    @classmethod
    def build(
        cls, sentences: Iterable[Sentence], table: EmbeddingTable, window: int = 1, min_count: int = 2
    ) -> "FeatureTemplate":
        """
        Collect the sparse vocabulary from training sentences and freeze it.

        Word identity features are kept only for lowercased words seen at least `min_count` times.
        """
        template = cls(dim=table.dim, window=window)
        template.add(BIAS)
        template.add(OOV)
        counts: Counter = Counter()
        for sentence in sentences:
            for token in sentence.tokens:
                counts[token.lower] += 1
                for name in token_feature_names(token, is_oov=table.row(token.text) is None):
                    if not name.startswith("w="):
                        template.add(name)
        for word in sorted(w for w, c in counts.items() if c >= min_count):
            template.add(f"w={word}")
        template.freeze()
        return template

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def num_sparse(self) -> int:
        return len(self._ids)

    @property
    def dense_width(self) -> int:
        return (2 * self.window + 1) * self.dim

    @property
    def feature_names(self) -> List[str]:
        return sorted(self._ids, key=self._ids.get)

    def freeze(self):
        self._frozen = True

    def add(self, name: str) -> Optional[int]:
        index = self._ids.get(name)
        if index is None and not self._frozen:
            index = self._ids[name] = len(self._ids)
        return index

    def feature_id(self, name: str) -> Optional[int]:
        return self._ids.get(name)

    def sparse_ids(self, token: Token, is_oov: bool) -> Tuple[int, ...]:
        ids = (self._ids.get(name) for name in token_feature_names(token, is_oov))
        return tuple(sorted(i for i in ids if i is not None))

    def check_table(self, table: EmbeddingTable):
        if table.dim != self.dim:
            raise EmbeddingMismatch(f"template expects dim {self.dim}, embeddings have dim {table.dim}")

    def to_dict(self) -> dict:
        return {"dim": self.dim, "window": self.window, "features": self.feature_names}

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureTemplate":
        return cls(dim=int(data["dim"]), window=int(data["window"]), features=data["features"], frozen=True)


def _token_rows(table: EmbeddingTable, sentence: Sentence) -> Tuple[np.ndarray, List[bool]]:
    vectors = np.zeros((len(sentence), table.dim), dtype=np.float64)
    oov = []
    for i, token in enumerate(sentence.tokens):
        vector, is_oov = table.lookup(token.text)
        vectors[i] = vector
        oov.append(is_oov)
    return vectors, oov


def sentence_features(template: FeatureTemplate, table: EmbeddingTable, sentence: Sentence) -> SentenceFeatures:
    template.check_table(table)
    vectors, oov = _token_rows(table, sentence)
    w = template.window
    padded = np.zeros((len(sentence) + 2 * w, table.dim), dtype=np.float64)
    padded[w : w + len(sentence)] = vectors
    # row t holds the embeddings of tokens t-w .. t+w, zero beyond sentence boundaries
    dense = np.hstack([padded[offset : offset + len(sentence)] for offset in range(2 * w + 1)])
    sparse = tuple(
        np.asarray(template.sparse_ids(token, is_oov), dtype=np.int64) for token, is_oov in zip(sentence.tokens, oov)
    )
    return SentenceFeatures(dense=dense, sparse=sparse)


def token_features(template: FeatureTemplate, table: EmbeddingTable, sentence: Sentence, t: int) -> FeatureVector:
    if not 0 <= t < len(sentence):
        raise IndexOutOfRange(f"position {t} outside sentence of length {len(sentence)}")
    template.check_table(table)
    blocks = []
    for offset in range(-template.window, template.window + 1):
        position = t + offset
        if 0 <= position < len(sentence):
            blocks.append(table.lookup(sentence.tokens[position].text)[0])
        else:
            blocks.append(np.zeros(table.dim, dtype=np.float64))
    _, is_oov = table.lookup(sentence.tokens[t].text)
    return FeatureVector(dense=np.concatenate(blocks), sparse=template.sparse_ids(sentence.tokens[t], is_oov))


def phrase_feature_width(dim: int) -> int:
    return dim + 1 + len(CATEGORIES)


def phrase_features(
    table: EmbeddingTable, keyword_index: KeywordIndex, sentence: Sentence, span: Sequence[int]
) -> np.ndarray:
    """Mean span embedding, normalised span length, and one keyword-hit indicator per category."""
    start, end = span
    if end <= start:
        raise EmptySpan(f"span [{start},{end}) is empty")
    if start < 0 or end > len(sentence):
        raise SpanOutOfRange(f"span [{start},{end}) outside sentence of length {len(sentence)}")
    tokens = sentence.tokens[start:end]
    mean = np.mean([table.lookup(token.text)[0] for token in tokens], axis=0)
    length = min(len(tokens) / PHRASE_LENGTH_SCALE, 1.0)
    hits = keyword_index.hits(tokens)
    indicators = np.array([1.0 if c in hits else 0.0 for c in CATEGORIES], dtype=np.float64)
    return np.concatenate([mean, [length], indicators])
