from typing import Literal, Optional

from pydantic import Field

from excmine.config import EXCMINE_SEED
from excmine.trainers.common import ExcmineParams


class ClfParams(ExcmineParams):
    data_path: Optional[str] = Field(None, title="CoNLL file holding the phrase sentences")
    phrases_path: Optional[str] = Field(None, title="Phrase TSV with gold categories")
    embeddings_path: Optional[str] = Field(None, title="Word vector text file")
    keywords_path: Optional[str] = Field(None, title="Keyword list JSON")
    model_path: Optional[str] = Field(None, title="Output model file")
    learning_rate: float = Field(0.1, title="Learning rate", gt=0)
    epochs: int = Field(200, title="Number of training epochs", ge=1)
    l2_lambda: float = Field(1e-3, title="L2 regularization strength", ge=0)
    batch_size: Optional[int] = Field(None, title="Training batch size, full batch when unset", gt=0)
    seed: int = Field(EXCMINE_SEED, title="Seed")
    class_weight: Literal["none", "balanced"] = Field("none", title="Per-class loss weighting")
