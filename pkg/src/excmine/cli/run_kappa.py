from argparse import ArgumentParser

from excmine import logger
from excmine.errors import LengthMismatch, MissingTags
from excmine.metrics.reports import kappa_tsv
from excmine.preprocessor.conll import read_conll_file
from excmine.preprocessor.phrases import read_phrases
from excmine.preprocessor.stats import cohen_kappa

from . import BaseExcmineCommand, add_arguments, emit
from .run_evaluate import align_phrases


TAGS_LEVEL = "tags"
CATEGORIES_LEVEL = "categories"


def run_kappa_command_factory(args):
    return RunKappaCommand(args)


def tag_pairs(path_a: str, path_b: str):
    """Token-aligned tag lists from two annotations of the same sentences."""
    first = read_conll_file(path_a)
    second = read_conll_file(path_b).by_id
    labels_a, labels_b = [], []
    for sentence in first.sentences:
        other = second.get(sentence.id)
        if other is None or len(other) != len(sentence):
            raise LengthMismatch(f"sentence {sentence.id!r} is not annotated identically in both files")
        if sentence.tags is None or other.tags is None:
            raise MissingTags(f"sentence {sentence.id!r} lacks tags")
        labels_a.extend(t.name for t in sentence.tags)
        labels_b.extend(t.name for t in other.tags)
    if len(second) != len(first.sentences):
        raise LengthMismatch(f"{len(first.sentences)} vs {len(second)} sentences")
    return labels_a, labels_b


def category_pairs(path_a: str, path_b: str):
    pairs = align_phrases(read_phrases(path_a), read_phrases(path_b))
    return [a.category.value for a, _ in pairs], [b.category.value for _, b in pairs]


class RunKappaCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--a",
                "help": "First annotator's file",
                "required": True,
                "type": str,
            },
            {
                "arg": "--b",
                "help": "Second annotator's file",
                "required": True,
                "type": str,
            },
            {
                "arg": "--level",
                "help": "tags (CoNLL files) or categories (phrase TSV files)",
                "required": False,
                "type": str,
                "default": TAGS_LEVEL,
                "choices": [TAGS_LEVEL, CATEGORIES_LEVEL],
            },
            {
                "arg": "--out",
                "help": "Output TSV, stdout when omitted",
                "required": False,
                "type": str,
            },
        ]
        run_kappa_parser = parser.add_parser("kappa", description="Cohen's kappa between two annotations")
        add_arguments(run_kappa_parser, arg_list)
        run_kappa_parser.set_defaults(func=run_kappa_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        if self.args.level == TAGS_LEVEL:
            labels_a, labels_b = tag_pairs(self.args.a, self.args.b)
        else:
            labels_a, labels_b = category_pairs(self.args.a, self.args.b)
        kappa = cohen_kappa(labels_a, labels_b)
        logger.info(f"Cohen's kappa over {len(labels_a)} {self.args.level}: {kappa:.4f}")

        text = kappa_tsv(self.args.level, len(labels_a), kappa)
        inputs = {"a": self.args.a, "b": self.args.b}
        emit(text, self.args.out, "kappa", config={"level": self.args.level}, inputs=inputs)
