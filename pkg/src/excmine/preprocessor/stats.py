from collections import Counter
from dataclasses import dataclass
from typing import Dict, Sequence

from sklearn import metrics as skmetrics

from excmine.dataset import CATEGORIES, BioTag, Coarse, Dataset
from excmine.errors import EmptyInput, LengthMismatch


@dataclass(frozen=True)
class LabelDistribution:
    tags: Dict[BioTag, int]
    categories: Dict[str, int]
    coarse: Dict[str, int]
    num_sentences: int
    num_tokens: int
    num_phrases: int

    def to_dict(self):
        return {
            "sentences": self.num_sentences,
            "tokens": self.num_tokens,
            "phrases": self.num_phrases,
            "tags": {tag.name: count for tag, count in self.tags.items()},
            "categories": dict(self.categories),
            "coarse": dict(self.coarse),
        }


def label_distribution(dataset: Dataset) -> LabelDistribution:
    tag_counts = Counter()
    num_tokens = 0
    for sentence in dataset.sentences:
        num_tokens += len(sentence)
        if sentence.tags is not None:
            tag_counts.update(sentence.tags)
    category_counts = Counter(p.category.value for p in dataset.phrases if p.category is not None)
    coarse_counts = Counter(p.coarse.value for p in dataset.phrases)
    return LabelDistribution(
        tags={tag: tag_counts.get(tag, 0) for tag in BioTag},
        categories={c.value: category_counts.get(c.value, 0) for c in CATEGORIES},
        coarse={c.value: coarse_counts.get(c.value, 0) for c in Coarse},
        num_sentences=len(dataset.sentences),
        num_tokens=num_tokens,
        num_phrases=len(dataset.phrases),
    )


def cohen_kappa(labels_a: Sequence, labels_b: Sequence) -> float:
    if len(labels_a) != len(labels_b):
        raise LengthMismatch(f"{len(labels_a)} labels vs {len(labels_b)} labels")
    if len(labels_a) == 0:
        raise EmptyInput("kappa needs at least one label pair")
    a = [str(x) for x in labels_a]
    b = [str(x) for x in labels_b]
    # chance agreement is 1 only when both annotators used one and the same label
    if len(set(a) | set(b)) == 1:
        return 1.0
    return float(skmetrics.cohen_kappa_score(a, b))
