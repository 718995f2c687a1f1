from argparse import ArgumentParser

from excmine import logger
from excmine.config import EXCMINE_SEED
from excmine.utils import write_run_metadata

from . import BaseExcmineCommand, add_arguments


def run_train_crf_command_factory(args):
    return RunTrainCrfCommand(args)


class RunTrainCrfCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--train",
                "help": "Training CoNLL file",
                "required": True,
                "type": str,
            },
            {
                "arg": "--valid",
                "help": "Validation CoNLL file used for model selection",
                "required": False,
                "type": str,
            },
            {
                "arg": "--embeddings",
                "help": "Word vectors in GloVe text format",
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
                "default": 1e-5,
            },
            {
                "arg": "--momentum",
                "help": "SGD momentum",
                "required": False,
                "type": float,
                "default": 0.7,
            },
            {
                "arg": "--batch-size",
                "help": "Training batch size",
                "required": False,
                "type": int,
                "default": 8,
            },
            {
                "arg": "--epochs",
                "help": "Number of training epochs",
                "required": False,
                "type": int,
                "default": 50,
            },
            {
                "arg": "--l2",
                "help": "L2 regularization strength",
                "required": False,
                "type": float,
                "default": 1e-4,
            },
            {
                "arg": "--window",
                "help": "Embedding context radius",
                "required": False,
                "type": int,
                "default": 1,
            },
            {
                "arg": "--min-count",
                "help": "Minimum training count for word identity features",
                "required": False,
                "type": int,
                "default": 2,
            },
            {
                "arg": "--seed",
                "help": "Seed",
                "required": False,
                "type": int,
                "default": EXCMINE_SEED,
            },
        ]
        run_train_crf_parser = parser.add_parser("train-crf", description="Train the BIO phrase tagger")
        add_arguments(run_train_crf_parser, arg_list)
        run_train_crf_parser.set_defaults(func=run_train_crf_command_factory)

    def __init__(self, args):
        from excmine.trainers.crf.params import CrfParams

        self.args = args
        self.params = CrfParams(
            train_path=self.args.train,
            valid_path=self.args.valid,
            embeddings_path=self.args.embeddings,
            model_path=self.args.model_out,
            learning_rate=self.args.lr,
            momentum=self.args.momentum,
            batch_size=self.args.batch_size,
            epochs=self.args.epochs,
            l2_lambda=self.args.l2,
            window=self.args.window,
            min_count=self.args.min_count,
            seed=self.args.seed,
        )

    def run(self):
        from excmine.trainers.crf.__main__ import train as train_crf

        logger.info("Running CRF training...")
        model, history = train_crf(self.params)
        write_run_metadata(
            self.params.model_path,
            "train-crf",
            config=self.params.to_metadata(),
            inputs={"train": self.params.train_path, "valid": self.params.valid_path, "embeddings": self.params.embeddings_path},
            seed=self.params.seed,
            extra={"best_valid_f1": max((h["valid_f1"] for h in history), default=0.0)},
        )
