import math
from typing import Sequence, Tuple

import numpy as np

from excmine.dataset import Dataset
from excmine.errors import BadRatios


TRAIN_SPLIT = "train"
VALID_SPLIT = "valid"
TEST_SPLIT = "test"

SPLITS = (TRAIN_SPLIT, VALID_SPLIT, TEST_SPLIT)


def split_dataset(dataset: Dataset, ratios: Sequence[float], seed: int) -> Tuple[Dataset, Dataset, Dataset]:
    """
    Seeded shuffle followed by a contiguous partition into (train, valid, test).

    Valid and test sizes are floor(n * ratio); the remainder goes to train.
    Phrases follow their sentences.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0 or not math.isfinite(r) for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise BadRatios(f"expected three non-negative ratios summing to 1, got {ratios}")
    if not isinstance(seed, (int, np.integer)):
        raise BadRatios(f"seed must be an integer, got {seed!r}")

    n = len(dataset.sentences)
    order = np.random.default_rng(int(seed)).permutation(n)
    shuffled = [dataset.sentences[i] for i in order]

    # guard against 0.3 * 10 == 2.9999999999999996
    n_valid = int(math.floor(n * ratios[1] + 1e-9))
    n_test = int(math.floor(n * ratios[2] + 1e-9))
    n_train = n - n_valid - n_test

    parts = (shuffled[:n_train], shuffled[n_train : n_train + n_valid], shuffled[n_train + n_valid :])
    splits = []
    for part in parts:
        ids = {s.id for s in part}
        splits.append(Dataset(sentences=tuple(part), phrases=tuple(p for p in dataset.phrases if p.sentence_id in ids)))
    return tuple(splits)
