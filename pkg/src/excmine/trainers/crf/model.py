from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from excmine.dataset import NUM_TAGS, BioTag, Sentence
from excmine.errors import InvalidGold
from excmine.features.embeddings import EmbeddingTable
from excmine.features.template import FeatureTemplate, SentenceFeatures, sentence_features


def _allowed_transitions() -> np.ndarray:
    allowed = np.ones((NUM_TAGS, NUM_TAGS), dtype=bool)
    for prev in BioTag:
        for tag in (BioTag.INC, BioTag.EXC):
            allowed[prev, tag] = prev.coarse == tag.coarse
    return allowed


# [prev, next]; an inside tag may only follow a tag of its own class
TRANSITION_MASK = _allowed_transitions()
TRANSITION_MASK.setflags(write=False)

START_MASK = np.array([not tag.is_inside for tag in BioTag], dtype=bool)
START_MASK.setflags(write=False)


@dataclass
class CrfWeights:
    """Trainable parameters. Masked transition/start entries stay at zero."""

    dense: np.ndarray  # tags x dense width
    sparse: np.ndarray  # tags x sparse vocabulary
    transitions: np.ndarray  # tags x tags, [prev, next]
    start: np.ndarray  # tags

    @classmethod
    def zeros(cls, dense_width: int, num_sparse: int) -> "CrfWeights":
        return cls(
            dense=np.zeros((NUM_TAGS, dense_width), dtype=np.float64),
            sparse=np.zeros((NUM_TAGS, num_sparse), dtype=np.float64),
            transitions=np.zeros((NUM_TAGS, NUM_TAGS), dtype=np.float64),
            start=np.zeros(NUM_TAGS, dtype=np.float64),
        )

    def arrays(self) -> Tuple[np.ndarray, ...]:
        return self.dense, self.sparse, self.transitions, self.start

    def copy(self) -> "CrfWeights":
        return CrfWeights(*(a.copy() for a in self.arrays()))

    def zeros_like(self) -> "CrfWeights":
        return CrfWeights(*(np.zeros_like(a) for a in self.arrays()))

    def squared_norm(self) -> float:
        return float(sum(np.sum(a * a) for a in self.arrays()))

    def apply_masks(self):
        self.transitions[~TRANSITION_MASK] = 0.0
        self.start[~START_MASK] = 0.0


class CrfModel:
    """
    Linear-chain CRF over the five BIO tags.

    Emission scores are `dense . W_dense[y] + sum(W_sparse[y, active ids])`. Forbidden
    transitions and inside tags at position 0 score -inf and are never trained.
    """

    def __init__(self, template: FeatureTemplate, weights: CrfWeights, embeddings: Optional[EmbeddingTable] = None):
        if not template.frozen:
            raise ValueError("CRF models need a frozen feature template")
        if weights.dense.shape != (NUM_TAGS, template.dense_width):
            raise ValueError(f"dense weights have shape {weights.dense.shape}, expected {(NUM_TAGS, template.dense_width)}")
        if weights.sparse.shape != (NUM_TAGS, template.num_sparse):
            raise ValueError(f"sparse weights have shape {weights.sparse.shape}, expected {(NUM_TAGS, template.num_sparse)}")
        self.template = template
        self.weights = weights.copy()
        self.weights.apply_masks()
        for array in self.weights.arrays():
            array.setflags(write=False)
        self.embeddings = embeddings
        self.metadata: dict = {}

    @property
    def transitions(self) -> np.ndarray:
        return np.where(TRANSITION_MASK, self.weights.transitions, -np.inf)

    @property
    def start(self) -> np.ndarray:
        return np.where(START_MASK, self.weights.start, -np.inf)

    def with_embeddings(self, embeddings: EmbeddingTable) -> "CrfModel":
        self.template.check_table(embeddings)
        return CrfModel(self.template, self.weights, embeddings)

    def featurize(self, sentence: Sentence) -> SentenceFeatures:
        if self.embeddings is None:
            raise ValueError("model has no embedding table attached")
        return sentence_features(self.template, self.embeddings, sentence)


@dataclass(frozen=True, eq=False)
class Lattice:
    emissions: np.ndarray  # L x tags
    transitions: np.ndarray  # tags x tags, -inf where forbidden
    start: np.ndarray  # tags, -inf where forbidden

    def __len__(self):
        return self.emissions.shape[0]


@dataclass(frozen=True, eq=False)
class Marginals:
    nodes: np.ndarray  # L x tags
    edges: np.ndarray  # (L - 1) x tags x tags


def emission_scores(weights: CrfWeights, features: SentenceFeatures) -> np.ndarray:
    scores = features.dense @ weights.dense.T
    lengths = [len(ids) for ids in features.sparse]
    if sum(lengths):
        rows = np.repeat(np.arange(len(features)), lengths)
        ids = np.concatenate(features.sparse)
        np.add.at(scores, rows, weights.sparse[:, ids].T)
    return scores


def lattice_from_features(model: CrfModel, features: SentenceFeatures, weights: Optional[CrfWeights] = None) -> Lattice:
    weights = weights if weights is not None else model.weights
    emissions = emission_scores(weights, features)
    emissions[0, ~START_MASK] = -np.inf
    return Lattice(
        emissions=emissions,
        transitions=np.where(TRANSITION_MASK, weights.transitions, -np.inf),
        start=np.where(START_MASK, weights.start, -np.inf),
    )


def build_lattice(model: CrfModel, sentence: Sentence) -> Lattice:
    if len(sentence) == 0:
        raise ValueError("cannot build a lattice for an empty sentence")
    return lattice_from_features(model, model.featurize(sentence))


def _forward(lattice: Lattice) -> np.ndarray:
    alphas = np.empty_like(lattice.emissions)
    alphas[0] = lattice.start + lattice.emissions[0]
    for t in range(1, len(lattice)):
        alphas[t] = logsumexp(alphas[t - 1][:, None] + lattice.transitions, axis=0) + lattice.emissions[t]
    return alphas


def _backward(lattice: Lattice) -> np.ndarray:
    betas = np.zeros_like(lattice.emissions)
    for t in range(len(lattice) - 2, -1, -1):
        betas[t] = logsumexp(lattice.transitions + (lattice.emissions[t + 1] + betas[t + 1])[None, :], axis=1)
    return betas


def forward_logz(lattice: Lattice) -> float:
    return float(logsumexp(_forward(lattice)[-1]))


def marginals(lattice: Lattice) -> Marginals:
    alphas = _forward(lattice)
    betas = _backward(lattice)
    logz = logsumexp(alphas[-1])
    nodes = np.exp(alphas + betas - logz)
    edges = np.exp(
        alphas[:-1, :, None]
        + lattice.transitions[None, :, :]
        + (lattice.emissions[1:] + betas[1:])[:, None, :]
        - logz
    )
    return Marginals(nodes=nodes, edges=edges)


def sequence_score(lattice: Lattice, tags: Sequence[BioTag]) -> float:
    """Unnormalised score of one tag sequence, summed in the same order as `viterbi`."""
    tags = [int(t) for t in tags]
    score = lattice.start[tags[0]] + lattice.emissions[0, tags[0]]
    for t in range(1, len(tags)):
        score = score + lattice.transitions[tags[t - 1], tags[t]]
        score = score + lattice.emissions[t, tags[t]]
    return float(score)


def viterbi(lattice: Lattice) -> Tuple[List[BioTag], float]:
    """Best valid tag sequence. Ties go to the lowest tag index, both at the end and in every backpointer."""
    length = len(lattice)
    backpointers = np.zeros((length, NUM_TAGS), dtype=np.int64)
    delta = lattice.start + lattice.emissions[0]
    for t in range(1, length):
        candidates = delta[:, None] + lattice.transitions
        backpointers[t] = np.argmax(candidates, axis=0)
        delta = candidates[backpointers[t], np.arange(NUM_TAGS)] + lattice.emissions[t]
    best = int(np.argmax(delta))
    score = float(delta[best])
    path = [best]
    for t in range(length - 1, 0, -1):
        path.append(int(backpointers[t, path[-1]]))
    path.reverse()
    return [BioTag(i) for i in path], score


def check_gold(tags: Sequence[BioTag], length: int):
    if len(tags) != length:
        raise InvalidGold(f"{len(tags)} gold tags for a sentence of length {length}")
    if not START_MASK[int(tags[0])]:
        raise InvalidGold(f"gold sequence starts with {BioTag(tags[0]).name}")
    for t in range(1, len(tags)):
        if not TRANSITION_MASK[int(tags[t - 1]), int(tags[t])]:
            raise InvalidGold(f"forbidden transition {BioTag(tags[t - 1]).name} -> {BioTag(tags[t]).name} at {t}")


def example_nll(
    model: CrfModel, weights: CrfWeights, features: SentenceFeatures, gold: Sequence[BioTag], gradient: CrfWeights
) -> float:
    """Negative log-likelihood of one sentence; expected minus empirical counts are added into `gradient`."""
    check_gold(gold, len(features))
    gold = np.asarray([int(t) for t in gold], dtype=np.int64)
    lattice = lattice_from_features(model, features, weights)
    probs = marginals(lattice)
    loss = forward_logz(lattice) - sequence_score(lattice, gold)

    diff = probs.nodes.copy()
    diff[np.arange(len(gold)), gold] -= 1.0
    gradient.dense += diff.T @ features.dense
    lengths = [len(ids) for ids in features.sparse]
    if sum(lengths):
        rows = np.repeat(np.arange(len(gold)), lengths)
        ids = np.concatenate(features.sparse)
        np.add.at(gradient.sparse.T, ids, diff[rows])
    gradient.transitions += probs.edges.sum(axis=0)
    np.add.at(gradient.transitions, (gold[:-1], gold[1:]), -1.0)
    gradient.start += probs.nodes[0]
    gradient.start[gold[0]] -= 1.0
    return loss


def batch_nll_and_gradient(
    model: CrfModel,
    weights: CrfWeights,
    batch: Sequence[Tuple[SentenceFeatures, Sequence[BioTag]]],
    l2_lambda: float,
) -> Tuple[float, CrfWeights]:
    gradient = weights.zeros_like()
    loss = 0.0
    for features, gold in batch:
        loss += example_nll(model, weights, features, gold, gradient)
    loss += 0.5 * l2_lambda * weights.squared_norm()
    for grad, weight in zip(gradient.arrays(), weights.arrays()):
        grad += l2_lambda * weight
    gradient.apply_masks()
    return float(loss), gradient


def nll_and_gradient(
    model: CrfModel, batch: Sequence[Tuple[Sentence, Sequence[BioTag]]], l2_lambda: float = 1e-4
) -> Tuple[float, CrfWeights]:
    featurized = [(model.featurize(sentence), gold) for sentence, gold in batch]
    return batch_nll_and_gradient(model, model.weights, featurized, l2_lambda)


def tag(model: CrfModel, sentences: Sequence[Union[Sentence, SentenceFeatures]]) -> List[List[BioTag]]:
    outputs = []
    for sentence in sentences:
        features = sentence if isinstance(sentence, SentenceFeatures) else model.featurize(sentence)
        outputs.append(viterbi(lattice_from_features(model, features))[0])
    return outputs
