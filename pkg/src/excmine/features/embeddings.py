import hashlib
import io
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from excmine import logger
from excmine.errors import DimMismatch, EmptyInput, NonNumeric


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    dim: int
    vocab: Dict[str, int]
    matrix: np.ndarray

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("embedding dim must be positive")
        matrix = np.array(self.matrix, dtype=np.float64).reshape(len(self.vocab), self.dim)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_dict(cls, vectors: Mapping[str, Sequence[float]], dim: Optional[int] = None) -> "EmbeddingTable":
        words = list(vectors)
        if dim is None:
            if not words:
                raise EmptyInput("cannot infer dim of an empty table")
            dim = len(vectors[words[0]])
        matrix = np.zeros((len(words), dim), dtype=np.float64)
        for i, word in enumerate(words):
            matrix[i] = vectors[word]
        return cls(dim=dim, vocab={w: i for i, w in enumerate(words)}, matrix=matrix)

    def __len__(self):
        return len(self.vocab)

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def row(self, word: str) -> Optional[int]:
        """Row for `word`, falling back to its lowercased form."""
        index = self.vocab.get(word)
        if index is None:
            index = self.vocab.get(word.lower())
        return index

    def lookup(self, word: str) -> Tuple[np.ndarray, bool]:
        """(vector, is_oov). Unknown words get a zero vector."""
        index = self.row(word)
        if index is None:
            return np.zeros(self.dim, dtype=np.float64), True
        return self.matrix[index], False

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(str(self.dim).encode("utf-8"))
        for word in sorted(self.vocab):
            digest.update(word.encode("utf-8") + b"\0")
            digest.update(self.matrix[self.vocab[word]].tobytes())
        return digest.hexdigest()

    def to_text(self) -> str:
        rows = sorted(self.vocab.items(), key=lambda kv: kv[1])
        return "".join(
            word + " " + " ".join(f"{v:.17g}" for v in self.matrix[index]) + "\n" for word, index in rows
        )


def _is_header(parts: List[str]) -> bool:
    return len(parts) == 2 and all(p.isdigit() for p in parts)


def load_embeddings(text_stream: Union[str, Iterable[str]]) -> EmbeddingTable:
    """
    Parse a GloVe / word2vec text file: `word v1 ... vD` per line, optional `N D` header.

    Later duplicates overwrite earlier rows.
    """
    if isinstance(text_stream, str):
        text_stream = io.StringIO(text_stream)

    vocab: Dict[str, int] = {}
    rows: List[np.ndarray] = []
    dim = None
    for line_no, line in enumerate(text_stream, start=1):
        parts = line.rstrip("\r\n").rstrip().split(" ")
        if parts == [""]:
            continue
        if line_no == 1 and _is_header(parts):
            dim = int(parts[1])
            continue
        word, values = parts[0], parts[1:]
        if dim is None:
            dim = len(values)
        if len(values) != dim or dim == 0:
            raise DimMismatch(line_no, expected=dim, found=len(values))
        try:
            vector = np.asarray(values, dtype=np.float64)
        except ValueError:
            raise NonNumeric(line_no) from None
        if word in vocab:
            rows[vocab[word]] = vector
        else:
            vocab[word] = len(rows)
            rows.append(vector)

    if dim is None or not rows:
        raise EmptyInput("no vectors found")
    logger.info(f"Loaded {len(vocab)} vectors of dim {dim}")
    return EmbeddingTable(dim=dim, vocab=vocab, matrix=np.vstack(rows))


def load_embeddings_file(path: str) -> EmbeddingTable:
    with open(path, encoding="utf-8") as f:
        return load_embeddings(f)
