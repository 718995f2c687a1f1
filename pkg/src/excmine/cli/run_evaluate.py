from argparse import ArgumentParser
from typing import Dict, List, Optional, Sequence, Tuple

from excmine import logger
from excmine.dataset import Coarse, Dataset, Phrase
from excmine.errors import EmptyInput, LengthMismatch, MissingTags
from excmine.metrics import end_to_end, multiclass_report, overlap_scores
from excmine.metrics.reports import class_report_tsv, confusion_tsv, e2e_report_tsv, overlap_report_tsv, to_json
from excmine.preprocessor.bio import extract_phrases, repair_bio
from excmine.preprocessor.conll import read_conll_file
from excmine.preprocessor.phrases import read_phrases

from . import BaseExcmineCommand, add_arguments, emit


def run_eval_spans_command_factory(args):
    return RunEvalSpansCommand(args)


def run_eval_classes_command_factory(args):
    return RunEvalClassesCommand(args)


def run_eval_e2e_command_factory(args):
    return RunEvalE2ECommand(args)


def conll_phrases(dataset: Dataset, name: str) -> List[Phrase]:
    """Phrases decoded from the tag columns of a CoNLL file, orphan inside tags repaired first."""
    phrases = []
    for sentence in dataset.sentences:
        if sentence.tags is None:
            raise MissingTags(f"{name} sentence {sentence.id!r} has no tags")
        phrases.extend(extract_phrases(sentence.id, repair_bio(sentence.tags)))
    return phrases


def sentence_lengths(dataset: Dataset) -> Dict[str, int]:
    return {s.id: len(s) for s in dataset.sentences}


def align_phrases(pred: Sequence[Phrase], gold: Sequence[Phrase]) -> List[Tuple[Phrase, Phrase]]:
    """Pair rows by (sentence_id, start, end). Both sides must cover the same spans."""
    pred_by_key = {(p.sentence_id, p.start, p.end): p for p in pred}
    gold_by_key = {(g.sentence_id, g.start, g.end): g for g in gold}
    if pred_by_key.keys() != gold_by_key.keys():
        missing = len(gold_by_key.keys() - pred_by_key.keys())
        extra = len(pred_by_key.keys() - gold_by_key.keys())
        raise LengthMismatch(f"phrase files differ: {missing} gold spans without prediction, {extra} extra predictions")
    pairs = []
    for key, g in gold_by_key.items():
        p = pred_by_key[key]
        if g.category is None or p.category is None:
            raise EmptyInput(f"phrase {key} has no category")
        pairs.append((p, g))
    return pairs


def emit_report(text: str, data: dict, out: Optional[str], command: str, inputs: dict):
    emit(text, out, command, inputs=inputs)
    if out is not None:
        emit(to_json(data), f"{out}.json", command, inputs=inputs)


class RunEvalSpansCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--pred",
                "help": "Predicted CoNLL file",
                "required": True,
                "type": str,
            },
            {
                "arg": "--gold",
                "help": "Gold CoNLL file",
                "required": True,
                "type": str,
            },
            {
                "arg": "--out",
                "help": "Output TSV report, stdout when omitted",
                "required": False,
                "type": str,
            },
        ]
        eval_parser = parser.add_parser("eval-spans", description="Binary and proportional span overlap")
        add_arguments(eval_parser, arg_list)
        eval_parser.set_defaults(func=run_eval_spans_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        gold_set = read_conll_file(self.args.gold)
        pred = conll_phrases(read_conll_file(self.args.pred), "predicted")
        gold = conll_phrases(gold_set, "gold")
        report = overlap_scores(pred, gold, sentence_lengths(gold_set))
        logger.info(f"Average binary F1 {report.average_f1():.4f}")

        data = report.to_dict()
        data["average_f1"] = {mode: report.average_f1(mode) for mode in ("binary", "proportional")}
        inputs = {"pred": self.args.pred, "gold": self.args.gold}
        emit_report(overlap_report_tsv(report), data, self.args.out, "eval-spans", inputs)


class RunEvalClassesCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--pred",
                "help": "Phrase TSV with predicted categories",
                "required": True,
                "type": str,
            },
            {
                "arg": "--gold",
                "help": "Phrase TSV with gold categories over the same spans",
                "required": True,
                "type": str,
            },
            {
                "arg": "--out",
                "help": "Output TSV report, stdout when omitted",
                "required": False,
                "type": str,
            },
        ]
        eval_parser = parser.add_parser("eval-classes", description="Multi-class phrase categorisation report")
        add_arguments(eval_parser, arg_list)
        eval_parser.set_defaults(func=run_eval_classes_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        pairs = align_phrases(read_phrases(self.args.pred), read_phrases(self.args.gold))
        if not pairs:
            raise EmptyInput("no phrases to evaluate")

        reports = {}
        for name, coarse in (("all", None), ("inclusion", Coarse.INC), ("exclusion", Coarse.EXC)):
            subset = [(p, g) for p, g in pairs if coarse is None or g.coarse == coarse]
            if subset:
                reports[name] = multiclass_report([p.category for p, _ in subset], [g.category for _, g in subset])
        logger.info(f"Weighted F1 {reports['all'].weighted.f1:.4f} over {len(pairs)} phrases")

        inputs = {"pred": self.args.pred, "gold": self.args.gold}
        data = {name: report.to_dict() for name, report in reports.items()}
        emit_report(class_report_tsv(reports), data, self.args.out, "eval-classes", inputs)
        if self.args.out is not None:
            emit(confusion_tsv(reports["all"]), f"{self.args.out}.confusion.tsv", "eval-classes", inputs=inputs)


class RunEvalE2ECommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--pred",
                "help": "Mined phrase TSV with predicted categories",
                "required": True,
                "type": str,
            },
            {
                "arg": "--gold",
                "help": "Gold phrase TSV",
                "required": True,
                "type": str,
            },
            {
                "arg": "--data",
                "help": "CoNLL file used to check spans against sentence lengths",
                "required": False,
                "type": str,
            },
            {
                "arg": "--out",
                "help": "Output TSV report, stdout when omitted",
                "required": False,
                "type": str,
            },
        ]
        eval_parser = parser.add_parser("eval-e2e", description="End-to-end mining and categorisation score")
        add_arguments(eval_parser, arg_list)
        eval_parser.set_defaults(func=run_eval_e2e_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        lengths = sentence_lengths(read_conll_file(self.args.data)) if self.args.data else None
        report = end_to_end(read_phrases(self.args.pred), read_phrases(self.args.gold), lengths)
        logger.info(f"End-to-end F1 {report.overall.f1:.4f}, {report.num_sink} predictions in the sink class")

        inputs = {"pred": self.args.pred, "gold": self.args.gold, "data": self.args.data}
        emit_report(e2e_report_tsv(report), report.to_dict(), self.args.out, "eval-e2e", inputs)
