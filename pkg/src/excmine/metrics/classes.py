from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np
from sklearn import metrics as skmetrics

from excmine.dataset import CATEGORIES, Category
from excmine.errors import EmptyInput, LengthMismatch


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1, "support": self.support}


@dataclass(frozen=True, eq=False)
class ClassReport:
    per_class: Dict[Category, ClassScores]
    weighted: ClassScores
    macro: ClassScores
    accuracy: float
    confusion: np.ndarray  # gold rows x predicted columns, canonical category order

    def to_dict(self) -> dict:
        return {
            "per_class": {c.value: s.to_dict() for c, s in self.per_class.items()},
            "weighted": self.weighted.to_dict(),
            "macro": self.macro.to_dict(),
            "accuracy": self.accuracy,
            "confusion": self.confusion.tolist(),
            "labels": [c.value for c in CATEGORIES],
        }


def multiclass_report(pred: Sequence[Category], gold: Sequence[Category]) -> ClassReport:
    """
    Per-category precision/recall/F1 with weighted (headline) and macro aggregates.

    Aggregates run over categories seen in gold or predictions; undefined ratios score 0.
    """
    if len(pred) != len(gold):
        raise LengthMismatch(f"{len(pred)} predictions vs {len(gold)} gold labels")
    if not gold:
        raise EmptyInput("no labels to evaluate")

    y_pred = [Category(c).index for c in pred]
    y_true = [Category(c).index for c in gold]
    observed = sorted(set(y_true) | set(y_pred))

    confusion = skmetrics.confusion_matrix(y_true, y_pred, labels=list(range(len(CATEGORIES))))
    precision, recall, f1, support = skmetrics.precision_recall_fscore_support(
        y_true, y_pred, labels=observed, zero_division=0
    )
    per_class = {
        CATEGORIES[label]: ClassScores(float(p), float(r), float(f), int(s))
        for label, p, r, f, s in zip(observed, precision, recall, f1, support)
    }

    def aggregate(average: str) -> ClassScores:
        p, r, f, _ = skmetrics.precision_recall_fscore_support(
            y_true, y_pred, labels=observed, average=average, zero_division=0
        )
        return ClassScores(float(p), float(r), float(f), len(y_true))

    return ClassReport(
        per_class=per_class,
        weighted=aggregate("weighted"),
        macro=aggregate("macro"),
        accuracy=float(skmetrics.accuracy_score(y_true, y_pred)),
        confusion=confusion,
    )
