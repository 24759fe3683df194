"""Concreteness and emotion norm lexicons.

Both lexicons are delimited text files keyed by lowercase lemma; the
delimiter is auto-detected between tab and comma from the header line.
Tokens absent from a lexicon are skipped by the scoring code, never
zero-filled, so per-lexicon coverage is reported alongside every score.
"""

import math
from dataclasses import dataclass

from .corpus import UPOS_TAGS
from .errors import InputError

EMOTION_COLUMNS = ("joy", "anger", "sadness", "fear", "surprise")


@dataclass(frozen=True)
class ConcretenessEntry:
    lemma: str
    rating: float  # 1 = most abstract, 5 = most concrete
    dominant_pos: str | None = None

    def __post_init__(self):
        if not 1.0 <= self.rating <= 5.0:
            raise ValueError(
                f"{self.lemma}: concreteness rating {self.rating} outside [1, 5]")
        if self.dominant_pos is not None and self.dominant_pos not in UPOS_TAGS:
            raise ValueError(f"{self.lemma}: unknown pos tag {self.dominant_pos!r}")


@dataclass(frozen=True)
class EmotionEntry:
    lemma: str
    joy: float
    anger: float
    sadness: float
    fear: float
    surprise: float

    def __post_init__(self):
        for name in EMOTION_COLUMNS:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{self.lemma}: {name} score {value} invalid")

    @property
    def scores(self):
        return (self.joy, self.anger, self.sadness, self.fear, self.surprise)


@dataclass(frozen=True)
class CoverageStat:
    tokens_considered: int
    tokens_matched: int

    @property
    def fraction(self):
        if self.tokens_considered == 0:
            return 0.0
        return self.tokens_matched / self.tokens_considered


def _read_table(path, required, optional=()):
    """Yield (line_no, row_dict) for a delimited file with a header line."""
    with open(path, encoding="utf-8") as handle:
        header_line = handle.readline()
        if not header_line.strip():
            return
        delim = "\t" if "\t" in header_line else ","
        header = [c.strip().lower() for c in header_line.strip().split(delim)]
        missing = [c for c in required if c not in header]
        if missing:
            raise InputError(f"missing column(s): {', '.join(missing)}", path, 1)
        columns = list(required) + [c for c in optional if c in header]
        index = {name: header.index(name) for name in columns}
        for line_no, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            cells = [c.strip() for c in line.rstrip("\n").split(delim)]
            if len(cells) < len(header):
                raise InputError(
                    f"expected {len(header)} columns, got {len(cells)}", path, line_no)
            yield line_no, {name: cells[i] for name, i in index.items()}


def load_concreteness(path):
    """Load concreteness norms: columns lemma, rating, optional pos."""
    lexicon = {}
    for line_no, row in _read_table(path, ("lemma", "rating"), optional=("pos",)):
        lemma = row["lemma"].lower()
        if lemma in lexicon:
            raise InputError(f"duplicate lemma {lemma!r}", path, line_no)
        pos = row.get("pos") or None
        try:
            lexicon[lemma] = ConcretenessEntry(
                lemma=lemma, rating=float(row["rating"]),
                dominant_pos=pos.upper() if pos else None)
        except ValueError as exc:
            raise InputError(str(exc), path, line_no) from None
    return lexicon


def load_emotion(path):
    """Load the five-emotion lexicon: columns lemma, joy, anger, sadness, fear, surprise."""
    lexicon = {}
    for line_no, row in _read_table(path, ("lemma",) + EMOTION_COLUMNS):
        lemma = row["lemma"].lower()
        if lemma in lexicon:
            raise InputError(f"duplicate lemma {lemma!r}", path, line_no)
        try:
            lexicon[lemma] = EmotionEntry(
                lemma=lemma,
                **{name: float(row[name]) for name in EMOTION_COLUMNS})
        except ValueError as exc:
            raise InputError(str(exc), path, line_no) from None
    return lexicon


def emotional_load(entry):
    """The emotional load of a term: the highest of its five emotion scores."""
    return max(entry.scores)


def coverage(lexicon, tokens):
    """How many of the given tokens have a lexicon entry (lookup by lemma)."""
    tokens = list(tokens)
    matched = sum(1 for t in tokens if t.lemma in lexicon)
    return CoverageStat(tokens_considered=len(tokens), tokens_matched=matched)
