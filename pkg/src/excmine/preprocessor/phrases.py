import csv
import io
from typing import List, Optional, Sequence, Union

import pandas as pd

from excmine.dataset import Category, Coarse, Dataset, Phrase
from excmine.errors import ParseError


PHRASE_COLUMNS = ["sentence_id", "start", "end", "coarse", "category", "text"]


def read_phrases(source: Union[str, io.TextIOBase]) -> List[Phrase]:
    """Read a phrase TSV (path or open stream). The `category` column may be empty."""
    try:
        df = pd.read_csv(source, sep="\t", dtype=str, keep_default_na=False, quoting=csv.QUOTE_MINIMAL)
    except pd.errors.EmptyDataError:
        return []
    missing = [c for c in PHRASE_COLUMNS[:4] if c not in df.columns]
    if missing:
        raise ParseError(1, f"missing columns {missing}")

    phrases = []
    for row_no, row in enumerate(df.itertuples(index=False), start=2):
        row = row._asdict()
        try:
            category = row.get("category", "")
            phrases.append(
                Phrase(
                    sentence_id=row["sentence_id"],
                    start=int(row["start"]),
                    end=int(row["end"]),
                    coarse=Coarse(row["coarse"].strip()),
                    category=Category.parse(category) if category else None,
                )
            )
        except ValueError as err:
            raise ParseError(row_no, str(err)) from None
    return phrases


def write_phrases(phrases: Sequence[Phrase], dataset: Optional[Dataset] = None) -> str:
    """Serialize phrases as TSV; `text` is filled from `dataset` when the sentence is known."""
    sentences = dataset.by_id if dataset is not None else {}
    rows = []
    for phrase in phrases:
        sentence = sentences.get(phrase.sentence_id)
        rows.append(
            {
                "sentence_id": phrase.sentence_id,
                "start": phrase.start,
                "end": phrase.end,
                "coarse": phrase.coarse.value,
                "category": phrase.category.value if phrase.category is not None else "",
                "text": phrase.text(sentence) if sentence is not None else "",
            }
        )
    df = pd.DataFrame(rows, columns=PHRASE_COLUMNS)
    return df.to_csv(sep="\t", index=False, lineterminator="\n")
