from typing import Optional

from pydantic import Field

from excmine.config import EXCMINE_SEED
from excmine.trainers.common import ExcmineParams


class CrfParams(ExcmineParams):
    train_path: Optional[str] = Field(None, title="Training CoNLL file")
    valid_path: Optional[str] = Field(None, title="Validation CoNLL file")
    embeddings_path: Optional[str] = Field(None, title="Word vector text file")
    model_path: Optional[str] = Field(None, title="Output model file")
    learning_rate: float = Field(1e-5, title="Learning rate", gt=0)
    momentum: float = Field(0.7, title="SGD momentum", ge=0, lt=1)
    batch_size: int = Field(8, title="Training batch size", gt=0)
    epochs: int = Field(50, title="Number of training epochs", ge=1)
    l2_lambda: float = Field(1e-4, title="L2 regularization strength", ge=0)
    seed: int = Field(EXCMINE_SEED, title="Seed")
    window: int = Field(1, title="Embedding context radius", ge=0)
    min_count: int = Field(2, title="Minimum count for word identity features", ge=1)
