import argparse
from typing import Optional, Sequence

import numpy as np
from tqdm import tqdm

from excmine import logger
from excmine.dataset import NUM_CATEGORIES, Category, KeywordIndex
from excmine.errors import EmptyInput, LengthMismatch, WidthMismatch
from excmine.features.embeddings import EmbeddingTable, load_embeddings_file
from excmine.features.template import phrase_features
from excmine.persistence import save_model
from excmine.preprocessor.conll import read_conll_file
from excmine.preprocessor.phrases import read_phrases
from excmine.preprocessor.reviews import load_keywords
from excmine.trainers.phrase_clf.model import SoftmaxModel, balanced_sample_weights, softmax_cross_entropy
from excmine.trainers.phrase_clf.params import ClfParams
from excmine.utils import monitor, sha256_file


def parse_args():
    # get training_config.json from the end user
    parser = argparse.ArgumentParser()
    parser.add_argument("--training_config", type=str, required=True)
    return parser.parse_args()


def train_softmax(
    config: ClfParams,
    features: Sequence[Sequence[float]],
    labels: Sequence[Category],
    keyword_index: Optional[KeywordIndex] = None,
    embeddings: Optional[EmbeddingTable] = None,
) -> SoftmaxModel:
    """Gradient descent on mean cross-entropy + (l2/2)|W|^2, starting from zero weights."""
    if len(features) == 0:
        raise EmptyInput("no training phrases")
    if len(features) != len(labels):
        raise LengthMismatch(f"{len(features)} feature vectors vs {len(labels)} labels")
    widths = {len(x) for x in features}
    if len(widths) != 1:
        raise WidthMismatch(f"feature vectors have differing widths {sorted(widths)}")

    x = np.asarray(features, dtype=np.float64)
    y = np.asarray([Category(c).index for c in labels], dtype=np.int64)
    sample_weight = balanced_sample_weights(y) if config.class_weight == "balanced" else np.ones(len(y))

    weights = np.zeros((NUM_CATEGORIES, x.shape[1]), dtype=np.float64)
    bias = np.zeros(NUM_CATEGORIES, dtype=np.float64)
    batch_size = config.batch_size or len(y)
    rng = np.random.default_rng(config.seed)

    history = []
    for epoch in tqdm(range(1, config.epochs + 1), desc="softmax epochs", disable=None):
        order = rng.permutation(len(y)) if batch_size < len(y) else np.arange(len(y))
        epoch_loss = 0.0
        for begin in range(0, len(y), batch_size):
            rows = order[begin : begin + batch_size]
            loss, grad_w, grad_b = softmax_cross_entropy(weights, bias, x[rows], y[rows], config.l2_lambda, sample_weight[rows])
            epoch_loss += loss * len(rows) / len(y)
            weights -= config.learning_rate * grad_w
            bias -= config.learning_rate * grad_b
        history.append(epoch_loss)
        logger.debug(f"epoch {epoch}: loss {epoch_loss:.6f}")

    logger.info(f"Final training loss: {history[-1]:.6f}")
    model = SoftmaxModel(weights, bias, keyword_index, embeddings)
    model.history = tuple(history)
    return model


@monitor
def train(config):
    if isinstance(config, dict):
        config = ClfParams(**config)

    logger.info("Starting phrase classifier training...")
    logger.info(f"Training config: {config}")

    embeddings = load_embeddings_file(config.embeddings_path)
    with open(config.keywords_path, encoding="utf-8") as f:
        keyword_index = load_keywords(f)
    dataset = read_conll_file(config.data_path).with_phrases(read_phrases(config.phrases_path))
    labelled = [p for p in dataset.phrases if p.category is not None]
    if len(labelled) < len(dataset.phrases):
        logger.warning(f"Skipping {len(dataset.phrases) - len(labelled)} phrases without a category")

    features = [phrase_features(embeddings, keyword_index, dataset.by_id[p.sentence_id], p.span) for p in labelled]
    model = train_softmax(config, features, [p.category for p in labelled], keyword_index, embeddings)

    metadata = {
        "config": config.to_metadata(),
        "seed": config.seed,
        "history": list(model.history),
        "datasets": {
            "data": sha256_file(config.data_path),
            "phrases": sha256_file(config.phrases_path),
            "keywords": sha256_file(config.keywords_path),
        },
    }
    if config.model_path:
        save_model(model, config.model_path, metadata=metadata)
    return model


if __name__ == "__main__":
    args = parse_args()
    config = ClfParams.from_json_file(args.training_config)
    train(config)
