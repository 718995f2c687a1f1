from argparse import ArgumentParser

from excmine import logger
from excmine.errors import ModelFileError
from excmine.features.embeddings import load_embeddings_file
from excmine.persistence import load_model
from excmine.preprocessor.conll import read_conll_file
from excmine.preprocessor.phrases import read_phrases, write_phrases
from excmine.trainers.phrase_clf.model import SoftmaxModel, classify_phrases

from . import BaseExcmineCommand, add_arguments, emit


def run_classify_command_factory(args):
    return RunClassifyCommand(args)


def load_classifier(model_path: str, embeddings_path: str) -> SoftmaxModel:
    model = load_model(model_path, load_embeddings_file(embeddings_path))
    if not isinstance(model, SoftmaxModel):
        raise ModelFileError(f"{model_path} holds a {type(model).__name__}, expected a phrase classifier")
    return model


class RunClassifyCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--model",
                "help": "Phrase classifier model file",
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
                "arg": "--data",
                "help": "CoNLL file with the sentences the phrases point into",
                "required": True,
                "type": str,
            },
            {
                "arg": "--phrases",
                "help": "Phrase TSV to categorise; existing categories are replaced",
                "required": True,
                "type": str,
            },
            {
                "arg": "--out",
                "help": "Output phrase TSV, stdout when omitted",
                "required": False,
                "type": str,
            },
        ]
        run_classify_parser = parser.add_parser("classify", description="Assign a category to each phrase")
        add_arguments(run_classify_parser, arg_list)
        run_classify_parser.set_defaults(func=run_classify_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        model = load_classifier(self.args.model, self.args.embeddings)
        dataset = read_conll_file(self.args.data).with_phrases(read_phrases(self.args.phrases))
        classified = classify_phrases(model, dataset.by_id, dataset.phrases)
        logger.info(f"Classified {len(classified)} phrases")

        inputs = {
            "model": self.args.model,
            "embeddings": self.args.embeddings,
            "data": self.args.data,
            "phrases": self.args.phrases,
        }
        emit(write_phrases(classified, dataset), self.args.out, "classify", inputs=inputs, seed=model.metadata.get("seed"))
