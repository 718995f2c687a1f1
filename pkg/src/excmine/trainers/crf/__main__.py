import argparse
from typing import List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from excmine import logger
from excmine.dataset import Dataset, Sentence
from excmine.errors import EmptyTrainSet, MissingTags
from excmine.features.embeddings import EmbeddingTable, load_embeddings_file
from excmine.features.template import FeatureTemplate, sentence_features
from excmine.metrics.overlap import BINARY, overlap_scores
from excmine.persistence import save_model
from excmine.preprocessor.bio import extract_phrases, repair_bio
from excmine.preprocessor.conll import read_conll_file
from excmine.trainers.crf.model import CrfModel, CrfWeights, batch_nll_and_gradient, check_gold, tag
from excmine.trainers.crf.params import CrfParams
from excmine.utils import monitor, sha256_file


def parse_args():
    # get training_config.json from the end user
    parser = argparse.ArgumentParser()
    parser.add_argument("--training_config", type=str, required=True)
    return parser.parse_args()


def dev_f1(model: CrfModel, features, sentences: Sequence[Sentence]) -> float:
    """Binary-overlap F1 averaged over INC and EXC."""
    if not sentences:
        return 0.0
    pred, gold = [], []
    for sentence, predicted in zip(sentences, tag(model, features)):
        pred.extend(extract_phrases(sentence.id, predicted))
        gold.extend(extract_phrases(sentence.id, repair_bio(sentence.tags)))
    return overlap_scores(pred, gold).average_f1(BINARY)


def _require_tags(dataset: Dataset, name: str):
    for sentence in dataset.sentences:
        if sentence.tags is None:
            raise MissingTags(f"{name} sentence {sentence.id!r} has no tags")


def train_crf(
    config: CrfParams,
    train_set: Dataset,
    valid_set: Optional[Dataset],
    template: FeatureTemplate,
    embeddings: EmbeddingTable,
) -> Tuple[CrfModel, List[dict]]:
    """
    Minibatch SGD with classical momentum on the summed sentence NLL plus L2.

    Returns the snapshot with the best validation F1 (latest epoch on ties) and the per-epoch history.
    """
    if len(train_set.sentences) == 0:
        raise EmptyTrainSet("training set has no sentences")
    if not template.frozen:
        raise ValueError("feature template must be frozen before training")
    valid_set = valid_set if valid_set is not None else Dataset()
    _require_tags(train_set, "training")
    _require_tags(valid_set, "validation")

    # orphan inside tags in annotation files are repaired before training
    train_examples = []
    for sentence in train_set.sentences:
        gold = repair_bio(sentence.tags)
        check_gold(gold, len(sentence))
        train_examples.append((sentence_features(template, embeddings, sentence), gold))
    valid_features = [sentence_features(template, embeddings, s) for s in valid_set.sentences]

    weights = CrfWeights.zeros(template.dense_width, template.num_sparse)
    velocity = weights.zeros_like()
    model = CrfModel(template, weights, embeddings)
    rng = np.random.default_rng(config.seed)

    best_model, best_f1 = model, -1.0
    history = []
    for epoch in tqdm(range(1, config.epochs + 1), desc="crf epochs", disable=None):
        order = rng.permutation(len(train_examples))
        epoch_loss = 0.0
        for begin in range(0, len(order), config.batch_size):
            batch = [train_examples[i] for i in order[begin : begin + config.batch_size]]
            loss, gradient = batch_nll_and_gradient(model, weights, batch, config.l2_lambda)
            epoch_loss += loss
            for v, w, g in zip(velocity.arrays(), weights.arrays(), gradient.arrays()):
                v *= config.momentum
                v -= config.learning_rate * g
                w += v

        model = CrfModel(template, weights, embeddings)
        f1 = dev_f1(model, valid_features, valid_set.sentences)
        history.append({"epoch": epoch, "train_loss": epoch_loss, "valid_f1": f1})
        logger.info(f"epoch {epoch}: train loss {epoch_loss:.6f}, valid binary F1 {f1:.4f}")
        if f1 >= best_f1:
            best_model, best_f1 = model, f1

    logger.info(f"Best valid binary F1: {best_f1:.4f}")
    return best_model, history


@monitor
def train(config):
    if isinstance(config, dict):
        config = CrfParams(**config)

    logger.info("Starting CRF training...")
    logger.info(f"Training config: {config}")

    embeddings = load_embeddings_file(config.embeddings_path)
    train_set = read_conll_file(config.train_path)
    valid_set = read_conll_file(config.valid_path) if config.valid_path else None
    template = FeatureTemplate.build(train_set.sentences, embeddings, window=config.window, min_count=config.min_count)
    logger.info(f"Feature template: {template.num_sparse} sparse features, dense width {template.dense_width}")

    model, history = train_crf(config, train_set, valid_set, template, embeddings)
    metadata = {
        "config": config.to_metadata(),
        "seed": config.seed,
        "history": history,
        "best_valid_f1": max((h["valid_f1"] for h in history), default=0.0),
        "datasets": {
            "train": sha256_file(config.train_path),
            "valid": sha256_file(config.valid_path) if config.valid_path else None,
        },
    }
    if config.model_path:
        save_model(model, config.model_path, metadata=metadata)
    return model, history


if __name__ == "__main__":
    args = parse_args()
    config = CrfParams.from_json_file(args.training_config)
    train(config)
