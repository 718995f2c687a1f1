import os
from argparse import ArgumentParser

from excmine import logger
from excmine.config import DEFAULT_SPLIT_RATIOS, EXCMINE_SEED
from excmine.errors import BadRatios
from excmine.preprocessor.conll import read_conll_file, write_conll
from excmine.preprocessor.phrases import read_phrases, write_phrases
from excmine.splits import SPLITS, split_dataset

from . import BaseExcmineCommand, add_arguments, emit


def run_split_command_factory(args):
    return RunSplitCommand(args)


def parse_ratios(text: str):
    try:
        return tuple(float(r) for r in text.split(","))
    except ValueError:
        raise BadRatios(f"cannot parse ratios {text!r}") from None


class RunSplitCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--in",
                "help": "Labeled CoNLL file",
                "required": True,
                "type": str,
                "alias": ["--data"],
            },
            {
                "arg": "--phrases",
                "help": "Phrase TSV to split alongside the sentences",
                "required": False,
                "type": str,
            },
            {
                "arg": "--out-dir",
                "help": "Directory for train/valid/test files",
                "required": True,
                "type": str,
            },
            {
                "arg": "--ratios",
                "help": "train,valid,test ratios",
                "required": False,
                "type": str,
                "default": ",".join(str(r) for r in DEFAULT_SPLIT_RATIOS),
            },
            {
                "arg": "--seed",
                "help": "Shuffle seed",
                "required": False,
                "type": int,
                "default": EXCMINE_SEED,
            },
        ]
        run_split_parser = parser.add_parser("split", description="Seeded train/valid/test split")
        add_arguments(run_split_parser, arg_list)
        run_split_parser.set_defaults(func=run_split_command_factory)

    def __init__(self, args):
        self.args = args
        self.ratios = parse_ratios(self.args.ratios)

    def run(self):
        dataset = read_conll_file(getattr(self.args, "in"))
        if self.args.phrases:
            dataset = dataset.with_phrases(read_phrases(self.args.phrases))

        parts = split_dataset(dataset, self.ratios, self.args.seed)
        config = {"ratios": list(self.ratios)}
        inputs = {"data": getattr(self.args, "in"), "phrases": self.args.phrases}
        for name, part in zip(SPLITS, parts):
            logger.info(f"{name}: {len(part.sentences)} sentences, {len(part.phrases)} phrases")
            out = os.path.join(self.args.out_dir, f"{name}.conll")
            emit(write_conll(part), out, "split", config=config, inputs=inputs, seed=self.args.seed)
            if self.args.phrases:
                out = os.path.join(self.args.out_dir, f"{name}.tsv")
                emit(write_phrases(part.phrases, part), out, "split", config=config, inputs=inputs, seed=self.args.seed)
