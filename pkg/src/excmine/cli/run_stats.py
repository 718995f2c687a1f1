from argparse import ArgumentParser

from excmine.metrics.reports import distribution_tsv
from excmine.preprocessor.conll import read_conll_file
from excmine.preprocessor.phrases import read_phrases
from excmine.preprocessor.stats import label_distribution

from . import BaseExcmineCommand, add_arguments, emit


def run_stats_command_factory(args):
    return RunStatsCommand(args)


class RunStatsCommand(BaseExcmineCommand):
    @staticmethod
    def register_subcommand(parser: ArgumentParser):
        arg_list = [
            {
                "arg": "--in",
                "help": "CoNLL file",
                "required": True,
                "type": str,
                "alias": ["--data"],
            },
            {
                "arg": "--phrases",
                "help": "Phrase TSV for category counts",
                "required": False,
                "type": str,
            },
            {
                "arg": "--out",
                "help": "Output TSV, stdout when omitted",
                "required": False,
                "type": str,
            },
        ]
        run_stats_parser = parser.add_parser("stats", description="Tag, phrase and category counts")
        add_arguments(run_stats_parser, arg_list)
        run_stats_parser.set_defaults(func=run_stats_command_factory)

    def __init__(self, args):
        self.args = args

    def run(self):
        data_path = getattr(self.args, "in")
        dataset = read_conll_file(data_path)
        if self.args.phrases:
            dataset = dataset.with_phrases(read_phrases(self.args.phrases))
        inputs = {"data": data_path, "phrases": self.args.phrases}
        emit(distribution_tsv(label_distribution(dataset)), self.args.out, "stats", inputs=inputs)
