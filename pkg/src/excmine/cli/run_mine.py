from argparse import ArgumentParser

from excmine import logger
from excmine.dataset import Dataset
from excmine.errors import ModelFileError
from excmine.features.embeddings import load_embeddings_file
from excmine.persistence import load_model
from excmine.preprocessor.conll import write_conll
from excmine.preprocessor.phrases import write_phrases
from excmine.preprocessor.reviews import filter_candidate_sentences, load_keywords, load_reviews
from excmine.trainers.crf.model import CrfModel
from excmine.trainers.phrase_clf.model import SoftmaxModel, classify_phrases

from . import BaseExcmineCommand, add_arguments, emit
from .run_tag import tag_dataset


def run_mine_command_factory(args):
    return RunMineCommand(args)


class RunMineCommand(BaseExcmineCommand):
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
                "help": "Keyword list JSON used to select candidate sentences",
                "required": True,
                "type": str,
            },
            {
                "arg": "--crf-model",
                "help": "CRF tagger model file",
                "required": True,
                "type": str,
            },
            {
                "arg": "--clf-model",
                "help": "Phrase classifier model file",
                "required": True,
                "type": str,
            },
            {
                "arg": "--embeddings",
                "help": "Word vectors both models were trained with",
                "required": True,
                "type": str,
            },
            {
                "arg": "--out",
                "help": "Output phrase TSV, stdout when omitted",
                "required": False,
                "type": str,
            },
            {
                "arg": "--conll-out",
                "help": "Optional CoNLL file of the tagged candidate sentences",
                "required": False,
                "type": str,
            },
        ]
        run_mine_parser = parser.add_parser(
            "mine", description="Extract and categorise inclusion/exclusion phrases from raw reviews"
        )
        add_arguments(run_mine_parser, arg_list)
        run_mine_parser.set_defaults(func=run_mine_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        embeddings = load_embeddings_file(self.args.embeddings)
        tagger = load_model(self.args.crf_model, embeddings)
        classifier = load_model(self.args.clf_model, embeddings)
        if not isinstance(tagger, CrfModel) or not isinstance(classifier, SoftmaxModel):
            raise ModelFileError("--crf-model must hold a CRF tagger and --clf-model a phrase classifier")

        with open(self.args.reviews, encoding="utf-8") as f:
            sentences = load_reviews(f)
        with open(self.args.keywords, encoding="utf-8") as f:
            keyword_index = load_keywords(f)
        candidates = Dataset(sentences=tuple(s for s, _ in filter_candidate_sentences(sentences, keyword_index)))
        logger.info(f"Tagging {len(candidates)} of {len(sentences)} sentences with keyword hits")

        tagged = tag_dataset(tagger, candidates)
        mined = classify_phrases(classifier, tagged.by_id, tagged.phrases)
        logger.info(f"Mined {len(mined)} phrases")

        inputs = {
            "reviews": self.args.reviews,
            "keywords": self.args.keywords,
            "crf_model": self.args.crf_model,
            "clf_model": self.args.clf_model,
            "embeddings": self.args.embeddings,
        }
        emit(write_phrases(mined, tagged), self.args.out, "mine", inputs=inputs)
        if self.args.conll_out:
            emit(write_conll(tagged), self.args.conll_out, "mine", inputs=inputs)
