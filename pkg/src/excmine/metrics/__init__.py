from excmine.metrics.classes import ClassReport, multiclass_report
from excmine.metrics.e2e import E2EReport, end_to_end
from excmine.metrics.overlap import BINARY, PROPORTIONAL, OverlapReport, Scores, overlap_scores
