from argparse import ArgumentParser

from excmine import logger
from excmine.dataset import Dataset
from excmine.errors import ModelFileError
from excmine.features.embeddings import load_embeddings_file
from excmine.persistence import load_model
from excmine.preprocessor.bio import extract_phrases
from excmine.preprocessor.conll import read_conll_file, write_conll
from excmine.preprocessor.phrases import write_phrases
from excmine.trainers.crf.model import CrfModel, tag

from . import BaseExcmineCommand, add_arguments, emit


def run_tag_command_factory(args):
    return RunTagCommand(args)


def load_crf(model_path: str, embeddings_path: str) -> CrfModel:
    model = load_model(model_path, load_embeddings_file(embeddings_path))
    if not isinstance(model, CrfModel):
        raise ModelFileError(f"{model_path} holds a {type(model).__name__}, expected a CRF tagger")
    return model


def tag_dataset(model: CrfModel, dataset: Dataset) -> Dataset:
    """Replace every sentence's tags with Viterbi predictions and attach the extracted phrases."""
    sentences = tuple(s.with_tags(t) for s, t in zip(dataset.sentences, tag(model, dataset.sentences)))
    phrases = [p for s in sentences for p in extract_phrases(s.id, s.tags)]
    return Dataset(sentences=sentences, phrases=tuple(phrases))


class RunTagCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--model",
                "help": "CRF model file",
                "required": True,
                "type": str,
            },
            {
                "arg": "--embeddings",
                "help": "Word vectors the model was trained with",
                "required": True,
                "type": str,
            },
            {
                "arg": "--in",
                "help": "CoNLL file to tag; existing tags are ignored",
                "required": True,
                "type": str,
                "alias": ["--data"],
            },
            {
                "arg": "--out",
                "help": "Output CoNLL file, stdout when omitted",
                "required": False,
                "type": str,
            },
            {
                "arg": "--phrases-out",
                "help": "Optional phrase TSV of the predicted spans",
                "required": False,
                "type": str,
            },
        ]
        run_tag_parser = parser.add_parser("tag", description="Tag sentences with a trained CRF")
        add_arguments(run_tag_parser, arg_list)
        run_tag_parser.set_defaults(func=run_tag_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        data_path = getattr(self.args, "in")
        model = load_crf(self.args.model, self.args.embeddings)
        tagged = tag_dataset(model, read_conll_file(data_path))
        logger.info(f"Tagged {len(tagged.sentences)} sentences, found {len(tagged.phrases)} phrases")

        inputs = {"model": self.args.model, "embeddings": self.args.embeddings, "data": data_path}
        seed = model.metadata.get("seed")
        emit(write_conll(tagged), self.args.out, "tag", inputs=inputs, seed=seed)
        if self.args.phrases_out:
            emit(write_phrases(tagged.phrases, tagged), self.args.phrases_out, "tag", inputs=inputs, seed=seed)
