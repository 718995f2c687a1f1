from argparse import ArgumentParser

from excmine import logger
from excmine.config import EXCMINE_SEED
from excmine.utils import write_run_metadata

from . import BaseExcmineCommand, add_arguments


def run_train_clf_command_factory(args):
    return RunTrainClfCommand(args)


class RunTrainClfCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--data",
                "help": "CoNLL file with the sentences the phrases point into",
                "required": True,
                "type": str,
            },
            {
                "arg": "--phrases",
                "help": "Phrase TSV with gold categories",
                "required": True,
                "type": str,
            },
            {
                "arg": "--embeddings",
                "help": "Word vectors in GloVe text format",
                "required": True,
                "type": str,
            },
            {
                "arg": "--keywords",
                "help": "Keyword list JSON",
                "required": True,
                "type": str,
            },
            {
                "arg": "--model-out",
                "help": "Output model file",
                "required": True,
                "type": str,
                "alias": ["--model"],
            },
            {
                "arg": "--lr",
                "help": "Learning rate",
                "required": False,
                "type": float,
                "default": 0.1,
            },
            {
                "arg": "--epochs",
                "help": "Number of training epochs",
                "required": False,
                "type": int,
                "default": 200,
            },
            {
                "arg": "--l2",
                "help": "L2 regularization strength",
                "required": False,
                "type": float,
                "default": 1e-3,
            },
            {
                "arg": "--batch-size",
                "help": "Training batch size, full batch when omitted",
                "required": False,
                "type": int,
            },
            {
                "arg": "--class-weight",
                "help": "none or balanced",
                "required": False,
                "type": str,
                "default": "none",
                "choices": ["none", "balanced"],
            },
            {
                "arg": "--seed",
                "help": "Seed",
                "required": False,
                "type": int,
                "default": EXCMINE_SEED,
            },
        ]
        run_train_clf_parser = parser.add_parser("train-clf", description="Train the 11-way phrase classifier")
        add_arguments(run_train_clf_parser, arg_list)
        run_train_clf_parser.set_defaults(func=run_train_clf_command_factory)

    def __init__(self, args):
        from excmine.trainers.phrase_clf.params import ClfParams

        self.args = args
        self.params = ClfParams(
            data_path=self.args.data,
            phrases_path=self.args.phrases,
            embeddings_path=self.args.embeddings,
            keywords_path=self.args.keywords,
            model_path=self.args.model_out,
            learning_rate=self.args.lr,
            epochs=self.args.epochs,
            l2_lambda=self.args.l2,
            batch_size=self.args.batch_size,
            class_weight=self.args.class_weight,
            seed=self.args.seed,
        )

    def run(self):
        from excmine.trainers.phrase_clf.__main__ import train as train_clf

        logger.info("Running phrase classifier training...")
        train_clf(self.params)
        write_run_metadata(
            self.params.model_path,
            "train-clf",
            config=self.params.to_metadata(),
            inputs={
                "data": self.params.data_path,
                "phrases": self.params.phrases_path,
                "keywords": self.params.keywords_path,
                "embeddings": self.params.embeddings_path,
            },
            seed=self.params.seed,
        )
