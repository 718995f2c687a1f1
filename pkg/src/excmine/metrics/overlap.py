from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from excmine.dataset import Coarse, Phrase
from excmine.errors import SpanOutOfRange


BINARY = "binary"
PROPORTIONAL = "proportional"
MODES = (BINARY, PROPORTIONAL)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float
    pred_credit: float
    num_pred: int
    gold_credit: float
    num_gold: int

    @classmethod
    def from_credits(cls, pred_credit: float, num_pred: int, gold_credit: float, num_gold: int) -> "Scores":
        # an empty denominator scores 0
        precision = pred_credit / num_pred if num_pred else 0.0
        recall = gold_credit / num_gold if num_gold else 0.0
        return cls(
            precision=precision,
            recall=recall,
            f1=f1_score(precision, recall),
            pred_credit=pred_credit,
            num_pred=num_pred,
            gold_credit=gold_credit,
            num_gold=num_gold,
        )

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "pred_credit": self.pred_credit,
            "num_pred": self.num_pred,
            "gold_credit": self.gold_credit,
            "num_gold": self.num_gold,
        }


@dataclass(frozen=True)
class OverlapReport:
    scores: Dict[Tuple[Coarse, str], Scores]

    def get(self, coarse: Coarse, mode: str) -> Scores:
        return self.scores[(Coarse(coarse), mode)]

    def average_f1(self, mode: str = BINARY) -> float:
        """Mean of the INC and EXC F1 for one mode."""
        return (self.get(Coarse.INC, mode).f1 + self.get(Coarse.EXC, mode).f1) / 2

    def to_dict(self) -> dict:
        return {
            coarse.value: {mode: self.get(coarse, mode).to_dict() for mode in MODES} for coarse in Coarse
        }


def check_spans(phrases: Iterable[Phrase], lengths: Optional[Mapping[str, int]]):
    if lengths is None:
        return
    for phrase in phrases:
        length = lengths.get(phrase.sentence_id)
        if length is None:
            raise SpanOutOfRange(f"unknown sentence {phrase.sentence_id!r}")
        if phrase.end > length:
            raise SpanOutOfRange(
                f"span [{phrase.start},{phrase.end}) exceeds sentence {phrase.sentence_id!r} of length {length}"
            )


def _group(phrases: Iterable[Phrase]) -> Dict[Tuple[str, Coarse], List[Phrase]]:
    groups = defaultdict(list)
    for phrase in phrases:
        groups[(phrase.sentence_id, phrase.coarse)].append(phrase)
    return groups


def _credits(spans: Sequence[Phrase], others: Dict[Tuple[str, Coarse], List[Phrase]]) -> Tuple[float, float]:
    """(binary, proportional) credit sums of `spans` against same-sentence, same-class `others`."""
    binary = 0.0
    proportional = 0.0
    for span in spans:
        overlap = sum(span.overlap(other) for other in others.get((span.sentence_id, span.coarse), ()))
        if overlap > 0:
            binary += 1.0
            proportional += min(overlap, len(span)) / len(span)
    return binary, proportional


def overlap_scores(
    pred: Sequence[Phrase], gold: Sequence[Phrase], lengths: Optional[Mapping[str, int]] = None
) -> OverlapReport:
    """
    Binary and proportional span overlap per coarse class.

    Binary gives a span full credit if it overlaps any same-class span on the other side;
    proportional gives it the overlapped share of its own length (overlaps summed, capped at 1).
    """
    check_spans(pred, lengths)
    check_spans(gold, lengths)
    pred_groups = _group(pred)
    gold_groups = _group(gold)

    scores = {}
    for coarse in Coarse:
        pred_c = [p for p in pred if p.coarse == coarse]
        gold_c = [g for g in gold if g.coarse == coarse]
        pred_binary, pred_prop = _credits(pred_c, gold_groups)
        gold_binary, gold_prop = _credits(gold_c, pred_groups)
        scores[(coarse, BINARY)] = Scores.from_credits(pred_binary, len(pred_c), gold_binary, len(gold_c))
        scores[(coarse, PROPORTIONAL)] = Scores.from_credits(pred_prop, len(pred_c), gold_prop, len(gold_c))
    return OverlapReport(scores=scores)
