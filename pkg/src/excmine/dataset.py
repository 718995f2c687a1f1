from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from excmine.errors import SpanOutOfRange


class BioTag(IntEnum):
    """Token labels. The integer value is the canonical index used for tie-breaking."""

    O = 0  # noqa: E741
    B_INC = 1
    INC = 2
    B_EXC = 3
    EXC = 4

    @classmethod
    def parse(cls, value: str) -> "BioTag":
        try:
            return cls[value]
        except KeyError:
            raise ValueError(f"unknown tag {value!r}") from None

    @property
    def is_begin(self) -> bool:
        return self in (BioTag.B_INC, BioTag.B_EXC)

    @property
    def is_inside(self) -> bool:
        return self in (BioTag.INC, BioTag.EXC)

    @property
    def coarse(self) -> Optional["Coarse"]:
        if self in (BioTag.B_INC, BioTag.INC):
            return Coarse.INC
        if self in (BioTag.B_EXC, BioTag.EXC):
            return Coarse.EXC
        return None


NUM_TAGS = len(BioTag)


class Coarse(str, Enum):
    INC = "INC"
    EXC = "EXC"

    @property
    def begin_tag(self) -> BioTag:
        return BioTag.B_INC if self is Coarse.INC else BioTag.B_EXC

    @property
    def inside_tag(self) -> BioTag:
        return BioTag.INC if self is Coarse.INC else BioTag.EXC


class Category(str, Enum):
    AgeHeight = "AgeHeight"
    Claustrophobia = "Claustrophobia"
    CouplesFamily = "CouplesFamily"
    Crowd = "Crowd"
    Food = "Food"
    Handicap = "Handicap"
    Hygiene = "Hygiene"
    Parking = "Parking"
    Price = "Price"
    Queues = "Queues"
    Time = "Time"

    @classmethod
    def parse(cls, value: str) -> "Category":
        # "Age/Height" and "Couples/Family" are the spellings used in the released annotations
        try:
            return cls(value.replace("/", "").strip())
        except ValueError:
            raise ValueError(f"unknown category {value!r}") from None

    @property
    def index(self) -> int:
        return CATEGORIES.index(self)


CATEGORIES: Tuple[Category, ...] = tuple(Category)
NUM_CATEGORIES = len(CATEGORIES)


@dataclass(frozen=True)
class Token:
    text: str
    lower: str = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not self.text:
            raise ValueError("token text must be non-empty")
        if any(ch.isspace() for ch in self.text):
            raise ValueError(f"token {self.text!r} contains whitespace")
        object.__setattr__(self, "lower", self.text.casefold())


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: Tuple[Token, ...]
    tags: Optional[Tuple[BioTag, ...]] = None
    spot_id: Optional[str] = None

    def __post_init__(self):
        for name, value in (("id", self.id), ("spot_id", self.spot_id)):
            if value is not None and any(ch in value for ch in "\t\r\n"):
                raise ValueError(f"sentence {name} {value!r} contains a tab or line break")
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if len(self.tokens) == 0:
            raise ValueError(f"sentence {self.id!r} has no tokens")
        if self.tags is not None:
            object.__setattr__(self, "tags", tuple(BioTag(t) for t in self.tags))
            if len(self.tags) != len(self.tokens):
                raise ValueError(
                    f"sentence {self.id!r} has {len(self.tokens)} tokens but {len(self.tags)} tags"
                )

    @classmethod
    def from_words(cls, sentence_id: str, words: Sequence[str], tags=None, spot_id=None) -> "Sentence":
        return cls(
            id=sentence_id,
            tokens=tuple(Token(w) for w in words),
            tags=None if tags is None else tuple(tags),
            spot_id=spot_id,
        )

    def __len__(self):
        return len(self.tokens)

    @property
    def words(self) -> List[str]:
        return [t.text for t in self.tokens]

    def with_tags(self, tags) -> "Sentence":
        return Sentence(id=self.id, tokens=self.tokens, tags=tuple(tags), spot_id=self.spot_id)


@dataclass(frozen=True)
class Phrase:
    sentence_id: str
    start: int
    end: int
    coarse: Coarse
    category: Optional[Category] = None

    def __post_init__(self):
        object.__setattr__(self, "coarse", Coarse(self.coarse))
        if self.category is not None:
            object.__setattr__(self, "category", Category(self.category))
        if not 0 <= self.start < self.end:
            raise SpanOutOfRange(f"invalid span [{self.start},{self.end}) in sentence {self.sentence_id!r}")

    @property
    def span(self) -> Tuple[int, int]:
        return self.start, self.end

    def __len__(self):
        return self.end - self.start

    def overlap(self, other: "Phrase") -> int:
        return max(0, min(self.end, other.end) - max(self.start, other.start))

    def text(self, sentence: Sentence) -> str:
        return " ".join(sentence.words[self.start : self.end])

    def with_category(self, category: Optional[Category]) -> "Phrase":
        return Phrase(self.sentence_id, self.start, self.end, self.coarse, category)


@dataclass(frozen=True)
class Dataset:
    sentences: Tuple[Sentence, ...] = ()
    phrases: Tuple[Phrase, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        object.__setattr__(self, "phrases", tuple(self.phrases))
        ids = self.by_id
        if len(ids) != len(self.sentences):
            raise ValueError("duplicate sentence ids in dataset")
        for phrase in self.phrases:
            sentence = ids.get(phrase.sentence_id)
            if sentence is None:
                raise ValueError(f"phrase refers to unknown sentence {phrase.sentence_id!r}")
            if phrase.end > len(sentence):
                raise SpanOutOfRange(
                    f"span [{phrase.start},{phrase.end}) exceeds sentence {sentence.id!r} of length {len(sentence)}"
                )

    @cached_property
    def by_id(self) -> Dict[str, Sentence]:
        return {s.id: s for s in self.sentences}

    def __len__(self):
        return len(self.sentences)

    def with_phrases(self, phrases) -> "Dataset":
        return Dataset(sentences=self.sentences, phrases=tuple(phrases))


@dataclass(frozen=True)
class KeywordIndex:
    keywords: Mapping[Category, FrozenSet[str]]

    def __post_init__(self):
        cleaned = {}
        for category, words in self.keywords.items():
            category = Category(category)
            words = frozenset(words)
            for word in words:
                if not word or word != word.lower() or any(ch.isspace() for ch in word):
                    raise ValueError(f"keyword {word!r} for {category.value} must be a lowercase single token")
            # matched against Token.lower, which is casefolded
            cleaned[category] = frozenset(word.casefold() for word in words)
        object.__setattr__(self, "keywords", cleaned)

    @cached_property
    def _reverse(self) -> Dict[str, FrozenSet[Category]]:
        reverse: Dict[str, set] = {}
        for category, words in self.keywords.items():
            for word in words:
                reverse.setdefault(word, set()).add(category)
        return {word: frozenset(cats) for word, cats in reverse.items()}

    def categories_for(self, lower: str) -> FrozenSet[Category]:
        return self._reverse.get(lower, frozenset())

    def hits(self, tokens: Sequence[Token]) -> FrozenSet[Category]:
        found = set()
        for token in tokens:
            found.update(self.categories_for(token.lower))
        return frozenset(found)

    def to_dict(self) -> Dict[str, List[str]]:
        return {c.value: sorted(self.keywords.get(c, ())) for c in CATEGORIES if c in self.keywords}
