from typing import List, Optional, Sequence

from excmine.dataset import BioTag, Coarse, Phrase
from excmine.errors import InvalidBio


def _continues(prev: Optional[BioTag], tag: BioTag) -> bool:
    """True if inside-tag `tag` may follow `prev` (None at sentence start)."""
    return prev is not None and prev.coarse is not None and prev.coarse == tag.coarse


def validate_bio(tags: Sequence[BioTag]) -> List[int]:
    """Indices of inside tags that do not continue a same-class run. Empty list means valid."""
    violations = []
    prev = None
    for i, tag in enumerate(tags):
        tag = BioTag(tag)
        if tag.is_inside and not _continues(prev, tag):
            violations.append(i)
        prev = tag
    return violations


def repair_bio(tags: Sequence[BioTag]) -> List[BioTag]:
    """Rewrite every orphan inside tag to the begin tag of its class."""
    repaired = []
    prev = None
    for tag in tags:
        tag = BioTag(tag)
        if tag.is_inside and not _continues(prev, tag):
            tag = tag.coarse.begin_tag
        repaired.append(tag)
        prev = tag
    return repaired


def extract_phrases(sentence_id: str, tags: Sequence[BioTag]) -> List[Phrase]:
    violations = validate_bio(tags)
    if violations:
        raise InvalidBio(violations)

    phrases = []
    start = None
    coarse = None
    for i, tag in enumerate(tags):
        tag = BioTag(tag)
        if tag.is_inside:
            continue
        if start is not None:
            phrases.append(Phrase(sentence_id, start, i, coarse))
            start = None
        if tag.is_begin:
            start, coarse = i, tag.coarse
    if start is not None:
        phrases.append(Phrase(sentence_id, start, len(tags), coarse))
    return phrases


def phrases_to_tags(length: int, phrases: Sequence[Phrase]) -> List[BioTag]:
    """Inverse of extract_phrases: B at each span start, I inside, O elsewhere."""
    tags = [BioTag.O] * length
    for phrase in phrases:
        if phrase.end > length:
            raise ValueError(f"span [{phrase.start},{phrase.end}) exceeds length {length}")
        coarse = Coarse(phrase.coarse)
        tags[phrase.start] = coarse.begin_tag
        for i in range(phrase.start + 1, phrase.end):
            tags[i] = coarse.inside_tag
    return tags
