from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from excmine.dataset import Coarse, Phrase
from excmine.metrics.overlap import Scores, check_spans


@dataclass(frozen=True)
class Assignment:
    pred: Phrase
    gold: Optional[Phrase]  # None means the sink class
    overlap: int
    correct: bool


@dataclass(frozen=True)
class E2EReport:
    overall: Scores
    inclusion: Scores
    exclusion: Scores
    num_sink: int
    num_undetected: int
    assignments: Tuple[Assignment, ...] = ()

    def to_dict(self) -> dict:
        return {
            "overall": self.overall.to_dict(),
            "inclusion": self.inclusion.to_dict(),
            "exclusion": self.exclusion.to_dict(),
            "num_sink": self.num_sink,
            "num_undetected": self.num_undetected,
        }


def assign(pred: Phrase, gold_in_sentence: Sequence[Phrase]) -> Assignment:
    """Match a prediction to the gold phrase it overlaps most; ties go to the earliest gold start."""
    best, best_overlap = None, 0
    for candidate in sorted(gold_in_sentence, key=lambda g: (g.start, g.end)):
        overlap = pred.overlap(candidate)
        if overlap > best_overlap:
            best, best_overlap = candidate, overlap
    correct = best is not None and pred.category is not None and pred.category == best.category
    return Assignment(pred=pred, gold=best, overlap=best_overlap, correct=correct)


def end_to_end(
    pred: Sequence[Phrase], gold: Sequence[Phrase], lengths: Optional[Mapping[str, int]] = None
) -> E2EReport:
    """
    Score mined and categorised phrases against gold phrases.

    A prediction is correct when it intersects its assigned gold phrase and carries the same
    category; predictions without any intersection go to the sink class. Precision buckets use
    predicted coarse labels, recall buckets use gold coarse labels.
    """
    check_spans(pred, lengths)
    check_spans(gold, lengths)
    by_sentence: Dict[str, List[Phrase]] = defaultdict(list)
    for phrase in gold:
        by_sentence[phrase.sentence_id].append(phrase)

    assignments = [assign(p, by_sentence.get(p.sentence_id, ())) for p in pred]
    # gold phrases are frozen dataclasses, equal spans with equal labels count once
    recalled = {a.gold for a in assignments if a.correct}

    def bucket(coarse: Optional[Coarse]) -> Scores:
        preds = [a for a in assignments if coarse is None or a.pred.coarse == coarse]
        golds = [g for g in gold if coarse is None or g.coarse == coarse]
        return Scores.from_credits(
            float(sum(a.correct for a in preds)),
            len(preds),
            float(sum(g in recalled for g in golds)),
            len(golds),
        )

    return E2EReport(
        overall=bucket(None),
        inclusion=bucket(Coarse.INC),
        exclusion=bucket(Coarse.EXC),
        num_sink=sum(a.gold is None for a in assignments),
        num_undetected=sum(g not in recalled for g in gold),
        assignments=tuple(assignments),
    )
