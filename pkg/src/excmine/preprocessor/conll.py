import io
from typing import Iterable, List, Optional, Union

from excmine.dataset import BioTag, Dataset, Sentence, Token
from excmine.errors import MissingTags, ParseError


ID_HEADER = "# id = "
SPOT_HEADER = "# spot_id = "


def default_sentence_id(index: int) -> str:
    return str(index)


def _lines(text_stream: Union[str, Iterable[str]]) -> Iterable[str]:
    if isinstance(text_stream, str):
        return io.StringIO(text_stream)
    return text_stream


def parse_conll(text_stream: Union[str, Iterable[str]]) -> Dataset:
    """
    Read `token<TAB>tag` lines into a Dataset.

    Blank lines end a sentence. Lines starting with `#` and holding no TAB are comments;
    `# id = ...` and `# spot_id = ...` set the header of the next sentence.
    """
    sentences: List[Sentence] = []
    words: List[str] = []
    tags: List[BioTag] = []
    sentence_id: Optional[str] = None
    spot_id: Optional[str] = None

    def flush():
        nonlocal words, tags, sentence_id, spot_id
        if words:
            sid = sentence_id if sentence_id is not None else default_sentence_id(len(sentences))
            sentences.append(
                Sentence(id=sid, tokens=tuple(Token(w) for w in words), tags=tuple(tags), spot_id=spot_id)
            )
        words, tags, sentence_id, spot_id = [], [], None, None

    for line_no, raw in enumerate(_lines(text_stream), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#") and "\t" not in line:
            if line.startswith(ID_HEADER):
                sentence_id = line[len(ID_HEADER) :]
            elif line.startswith(SPOT_HEADER):
                spot_id = line[len(SPOT_HEADER) :]
            continue

        columns = line.split("\t")
        if len(columns) < 2:
            raise ParseError(line_no, "missing tag column")
        word, tag = columns[0], columns[-1].strip()
        if not word or any(ch.isspace() for ch in word):
            raise ParseError(line_no, f"empty or whitespace token {word!r}")
        try:
            tags.append(BioTag.parse(tag))
        except ValueError:
            raise ParseError(line_no, f"unknown tag {tag!r}") from None
        words.append(word)
    flush()
    return Dataset(sentences=tuple(sentences))


def write_conll(dataset: Dataset) -> str:
    out = []
    for index, sentence in enumerate(dataset.sentences):
        if sentence.tags is None:
            raise MissingTags(f"sentence {sentence.id!r} has no tags")
        if sentence.id != default_sentence_id(index):
            out.append(f"{ID_HEADER}{sentence.id}\n")
        if sentence.spot_id is not None:
            out.append(f"{SPOT_HEADER}{sentence.spot_id}\n")
        for token, tag in zip(sentence.tokens, sentence.tags):
            out.append(f"{token.text}\t{tag.name}\n")
        out.append("\n")
    return "".join(out)


def read_conll_file(path: str) -> Dataset:
    with open(path, encoding="utf-8") as f:
        return parse_conll(f)
