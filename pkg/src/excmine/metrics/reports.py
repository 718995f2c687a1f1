import json
from typing import Mapping, Union

import pandas as pd

from excmine.dataset import CATEGORIES, Coarse
from excmine.metrics.classes import ClassReport
from excmine.metrics.e2e import E2EReport
from excmine.metrics.overlap import MODES, OverlapReport
from excmine.preprocessor.stats import LabelDistribution


def _tsv(rows, columns) -> str:
    return pd.DataFrame(rows, columns=columns).to_csv(sep="\t", index=False, lineterminator="\n")


def overlap_report_tsv(report: OverlapReport) -> str:
    rows = []
    for coarse in Coarse:
        for mode in MODES:
            s = report.get(coarse, mode)
            rows.append([coarse.value, mode, s.precision, s.recall, s.f1, s.pred_credit, s.num_pred, s.gold_credit, s.num_gold])
    for mode in MODES:
        rows.append(["AVG", mode, None, None, report.average_f1(mode), None, None, None, None])
    columns = ["class", "mode", "precision", "recall", "f1", "pred_credit", "num_pred", "gold_credit", "num_gold"]
    return _tsv(rows, columns)


def _class_rows(report: ClassReport, subset: str) -> list:
    rows = [[subset, category.value, s.precision, s.recall, s.f1, s.support] for category, s in report.per_class.items()]
    for name, s in (("weighted", report.weighted), ("macro", report.macro)):
        rows.append([subset, name, s.precision, s.recall, s.f1, s.support])
    rows.append([subset, "accuracy", None, None, report.accuracy, report.weighted.support])
    return rows


def class_report_tsv(reports: Union[ClassReport, Mapping[str, ClassReport]], subset: str = "all") -> str:
    """One block of rows per subset; a single report is written under `subset`."""
    if isinstance(reports, ClassReport):
        reports = {subset: reports}
    rows = [row for name, report in reports.items() for row in _class_rows(report, name)]
    return _tsv(rows, ["subset", "class", "precision", "recall", "f1", "support"])


def confusion_tsv(report: ClassReport) -> str:
    """11 x 11 integer block, gold categories as rows and predictions as columns."""
    labels = [c.value for c in CATEGORIES]
    df = pd.DataFrame(report.confusion, index=labels, columns=labels)
    df.index.name = "gold\\pred"
    return df.to_csv(sep="\t", lineterminator="\n")


def e2e_report_tsv(report: E2EReport) -> str:
    rows = []
    for name, s in (("overall", report.overall), ("inclusion", report.inclusion), ("exclusion", report.exclusion)):
        rows.append([name, s.precision, s.recall, s.f1, s.pred_credit, s.num_pred, s.gold_credit, s.num_gold])
    columns = ["bucket", "precision", "recall", "f1", "correct_pred", "num_pred", "recalled_gold", "num_gold"]
    return _tsv(rows, columns)


def distribution_tsv(distribution: LabelDistribution) -> str:
    data = distribution.to_dict()
    rows = [["corpus", name, data[name]] for name in ("sentences", "tokens", "phrases")]
    for group in ("tags", "coarse", "categories"):
        rows.extend([group, label, count] for label, count in data[group].items())
    return _tsv(rows, ["group", "label", "count"])


def keyword_hits_tsv(kept) -> str:
    """One row per candidate sentence with its matched categories, comma-joined in canonical order."""
    rows = [[sentence.id, ",".join(c.value for c in CATEGORIES if c in hits)] for sentence, hits in kept]
    return _tsv(rows, ["sentence_id", "categories"])


def kappa_tsv(level: str, items: int, kappa: float) -> str:
    return _tsv([[level, items, kappa]], ["level", "items", "kappa"])


def to_json(data: dict) -> str:
    return json.dumps(data, indent=4, sort_keys=True) + "\n"
