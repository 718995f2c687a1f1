from argparse import ArgumentParser

from excmine import logger
from excmine.dataset import BioTag, Dataset
from excmine.metrics.reports import keyword_hits_tsv
from excmine.preprocessor.conll import write_conll
from excmine.preprocessor.reviews import filter_candidate_sentences, load_keywords, load_reviews

from . import BaseExcmineCommand, add_arguments, emit


def run_prepare_command_factory(args):
    return RunPrepareCommand(args)


class RunPrepareCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--reviews",
                "help": "Reviews as JSON Lines with spot_id, review_id and text",
                "required": True,
                "type": str,
            },
            {
                "arg": "--keywords",
                "help": "Keyword list JSON (category -> keywords)",
                "required": True,
                "type": str,
            },
            {
                "arg": "--out",
                "help": "Output CoNLL file of candidate sentences (all tags O)",
                "required": True,
                "type": str,
            },
        ]
        run_prepare_parser = parser.add_parser(
            "prepare", description="Tokenize reviews and keep sentences with a keyword hit"
        )
        add_arguments(run_prepare_parser, arg_list)
        run_prepare_parser.set_defaults(func=run_prepare_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        with open(self.args.reviews, encoding="utf-8") as f:
            sentences = load_reviews(f)
        with open(self.args.keywords, encoding="utf-8") as f:
            keyword_index = load_keywords(f)

        kept = filter_candidate_sentences(sentences, keyword_index)
        logger.info(f"Kept {len(kept)} of {len(sentences)} sentences with keyword hits")

        dataset = Dataset(sentences=tuple(s.with_tags([BioTag.O] * len(s)) for s, _ in kept))
        inputs = {"reviews": self.args.reviews, "keywords": self.args.keywords}
        emit(write_conll(dataset), self.args.out, "prepare", inputs=inputs)

        emit(keyword_hits_tsv(kept), f"{self.args.out}.categories.tsv", "prepare", inputs=inputs)
