"""Discourse corpus, expression-pair table, and annotation records.

The corpus arrives pre-tokenized with lemma and universal POS tag per token
(one JSON object per line).  Expression pairs live in a small delimited
table, human judgments in a JSON-lines annotation file.  Everything loaded
here is immutable afterwards and safe to share across workers.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass

from .errors import InputError

log = logging.getLogger(__name__)

UPOS_TAGS = frozenset({
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ",
    "PART", "PUNCT", "X", "INTJ", "PROPN", "AUX", "SCONJ", "CCONJ", "SYM",
})

METAPHORICAL = "metaphorical"
LITERAL = "literal"
LABELS = (METAPHORICAL, LITERAL)

PAIR_KINDS = ("SV", "VO")

PAIR_COLUMNS = (
    "pair_id", "kind", "argument_lemma", "metaphorical_verb",
    "literal_verb", "metaphorical_count", "literal_count",
)


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    upos: str

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if not self.lemma:
            raise ValueError("token lemma must be non-empty")
        if self.lemma != self.lemma.lower():
            raise ValueError(f"token lemma must be lowercase: {self.lemma!r}")
        if self.upos not in UPOS_TAGS:
            raise ValueError(f"unknown upos tag {self.upos!r}")


@dataclass(frozen=True)
class ExpressionPair:
    pair_id: str
    kind: str
    argument_lemma: str
    metaphorical_verb: str
    literal_verb: str
    metaphorical_count: int
    literal_count: int

    def __post_init__(self):
        if self.kind not in PAIR_KINDS:
            raise ValueError(f"pair kind must be SV or VO, got {self.kind!r}")
        if self.metaphorical_verb == self.literal_verb:
            raise ValueError(
                f"pair {self.pair_id}: metaphorical and literal verb are identical")
        if self.metaphorical_count < 0 or self.literal_count < 0:
            raise ValueError(f"pair {self.pair_id}: counts must be >= 0")


@dataclass(frozen=True)
class Discourse:
    discourse_id: str
    pair_id: str
    sentences: tuple  # tuple of tuples of Token
    final_sentence_index: int
    slot_token_index: int
    original_label: str

    def __post_init__(self):
        if not self.sentences:
            raise ValueError(f"discourse {self.discourse_id}: no sentences")
        if self.final_sentence_index != len(self.sentences) - 1:
            raise ValueError(
                f"discourse {self.discourse_id}: final_sentence_index "
                f"{self.final_sentence_index} is not the last sentence")
        final = self.sentences[self.final_sentence_index]
        if not 0 <= self.slot_token_index < len(final):
            raise ValueError(
                f"discourse {self.discourse_id}: slot_token_index "
                f"{self.slot_token_index} outside final sentence")
        if self.original_label not in LABELS:
            raise ValueError(
                f"discourse {self.discourse_id}: original_label must be "
                f"metaphorical or literal, got {self.original_label!r}")

    def preceding_tokens(self, include_preslot=False):
        """Tokens of the discourse preceding the expression slot.

        By default this is every token of the sentences strictly before the
        final one.  With ``include_preslot`` the final-sentence tokens left
        of the slot are appended as well.
        """
        tokens = []
        for sentence in self.sentences[:self.final_sentence_index]:
            tokens.extend(sentence)
        if include_preslot:
            final = self.sentences[self.final_sentence_index]
            tokens.extend(final[:self.slot_token_index])
        return tuple(tokens)

    @property
    def slot_token(self):
        return self.sentences[self.final_sentence_index][self.slot_token_index]


@dataclass(frozen=True)
class AnnotationRecord:
    discourse_id: str
    n_annotators: int
    n_favoring_metaphorical: int

    def __post_init__(self):
        if self.n_annotators <= 0:
            raise ValueError(
                f"annotation {self.discourse_id}: n_annotators must be positive")
        if not 0 <= self.n_favoring_metaphorical <= self.n_annotators:
            raise ValueError(
                f"annotation {self.discourse_id}: n_favoring_metaphorical "
                f"{self.n_favoring_metaphorical} outside [0, {self.n_annotators}]")

    @property
    def metaphorical_fraction(self):
        return self.n_favoring_metaphorical / self.n_annotators


@dataclass(frozen=True)
class GoldLabel:
    discourse_id: str
    label: str
    source: str  # "original" or "annotated"

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"gold label must be metaphorical or literal: {self.label!r}")
        if self.source not in ("original", "annotated"):
            raise ValueError(f"gold source must be original or annotated: {self.source!r}")


def _parse_token(obj, where):
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: token must be an object")
    try:
        surface = obj["surface"]
        lemma = obj["lemma"]
        upos = obj["upos"]
    except KeyError as exc:
        raise ValueError(f"{where}: token missing field {exc.args[0]}") from None
    if not isinstance(surface, str) or not isinstance(lemma, str) or not isinstance(upos, str):
        raise ValueError(f"{where}: token fields must be strings")
    # lemmas are stored lowercase; normalize here so lookups are uniform
    return Token(surface=surface, lemma=lemma.lower(), upos=upos)


def _parse_discourse(obj):
    for field in ("id", "pair_id", "sentences", "final_sentence_index",
                  "slot_token_index", "original_label"):
        if field not in obj:
            raise ValueError(f"record missing field {field!r}")
    discourse_id = str(obj["id"])
    raw_sentences = obj["sentences"]
    if not isinstance(raw_sentences, list) or not raw_sentences:
        raise ValueError(f"discourse {discourse_id}: sentences must be a non-empty list")
    sentences = []
    for s_idx, raw in enumerate(raw_sentences):
        if not isinstance(raw, list) or not raw:
            raise ValueError(
                f"discourse {discourse_id}: sentence {s_idx} must be a non-empty list")
        sentences.append(tuple(
            _parse_token(tok, f"discourse {discourse_id}, sentence {s_idx}")
            for tok in raw))
    return Discourse(
        discourse_id=discourse_id,
        pair_id=str(obj["pair_id"]),
        sentences=tuple(sentences),
        final_sentence_index=int(obj["final_sentence_index"]),
        slot_token_index=int(obj["slot_token_index"]),
        original_label=obj["original_label"],
    )


def load_corpus(path, pairs=None):
    """Load a JSON-lines corpus file into a list of Discourse records.

    When ``pairs`` (a pair table from load_pairs) is given, every
    discourse's pair_id must resolve in it.  Label balance within a pair is
    checked but only warned about, so fixtures of any shape load.
    """
    discourses = []
    seen = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON ({exc.msg})", path, line_no) from None
            try:
                discourse = _parse_discourse(obj)
            except (ValueError, TypeError) as exc:
                raise InputError(str(exc), path, line_no) from None
            if discourse.discourse_id in seen:
                raise InputError(
                    f"duplicate discourse id {discourse.discourse_id}", path, line_no)
            seen.add(discourse.discourse_id)
            if pairs is not None and discourse.pair_id not in pairs:
                raise InputError(
                    f"discourse {discourse.discourse_id}: unresolvable pair_id "
                    f"{discourse.pair_id}", path, line_no)
            discourses.append(discourse)
    _warn_on_imbalance(discourses)
    return discourses


def _warn_on_imbalance(discourses):
    per_pair = Counter((d.pair_id, d.original_label) for d in discourses)
    pair_ids = sorted({d.pair_id for d in discourses})
    for pair_id in pair_ids:
        n_met = per_pair[(pair_id, METAPHORICAL)]
        n_lit = per_pair[(pair_id, LITERAL)]
        if n_met != n_lit:
            log.warning(
                "pair %s is unbalanced: %d metaphorical vs %d literal discourses",
                pair_id, n_met, n_lit)


def serialize_corpus(discourses, path):
    """Write discourses back out in the corpus line format."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for d in discourses:
            obj = {
                "id": d.discourse_id,
                "pair_id": d.pair_id,
                "sentences": [
                    [{"surface": t.surface, "lemma": t.lemma, "upos": t.upos}
                     for t in sentence]
                    for sentence in d.sentences
                ],
                "final_sentence_index": d.final_sentence_index,
                "slot_token_index": d.slot_token_index,
                "original_label": d.original_label,
            }
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _detect_delimiter(header_line):
    return "\t" if "\t" in header_line else ","


def load_pairs(path):
    """Load the expression-pair table, returning a dict pair_id -> ExpressionPair."""
    pairs = {}
    with open(path, encoding="utf-8") as handle:
        header_line = handle.readline()
        if not header_line.strip():
            return pairs
        delim = _detect_delimiter(header_line)
        header = [c.strip().lower() for c in header_line.strip().split(delim)]
        missing = [c for c in PAIR_COLUMNS if c not in header]
        if missing:
            raise InputError(f"missing column(s): {', '.join(missing)}", path, 1)
        index = {name: header.index(name) for name in PAIR_COLUMNS}
        for line_no, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            cells = [c.strip() for c in line.rstrip("\n").split(delim)]
            if len(cells) < len(header):
                raise InputError(
                    f"expected {len(header)} columns, got {len(cells)}", path, line_no)
            try:
                pair = ExpressionPair(
                    pair_id=cells[index["pair_id"]],
                    kind=cells[index["kind"]],
                    argument_lemma=cells[index["argument_lemma"]].lower(),
                    metaphorical_verb=cells[index["metaphorical_verb"]].lower(),
                    literal_verb=cells[index["literal_verb"]].lower(),
                    metaphorical_count=int(cells[index["metaphorical_count"]]),
                    literal_count=int(cells[index["literal_count"]]),
                )
            except ValueError as exc:
                raise InputError(str(exc), path, line_no) from None
            if pair.pair_id in pairs:
                raise InputError(f"duplicate pair_id {pair.pair_id}", path, line_no)
            pairs[pair.pair_id] = pair
    return pairs


def load_annotations(path, corpus=None):
    """Load annotation records; with ``corpus`` given, ids must resolve in it."""
    known = {d.discourse_id for d in corpus} if corpus is not None else None
    records = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON ({exc.msg})", path, line_no) from None
            try:
                record = AnnotationRecord(
                    discourse_id=str(obj["discourse_id"]),
                    n_annotators=int(obj["n_annotators"]),
                    n_favoring_metaphorical=int(obj["n_favoring_metaphorical"]),
                )
            except KeyError as exc:
                raise InputError(f"record missing field {exc.args[0]}", path, line_no) from None
            except (ValueError, TypeError) as exc:
                raise InputError(str(exc), path, line_no) from None
            if known is not None and record.discourse_id not in known:
                raise InputError(
                    f"unknown discourse_id {record.discourse_id}", path, line_no)
            records.append(record)
    return records


def filter_by_agreement(annotations, threshold):
    """Keep annotations where one side reaches the agreement threshold.

    A record is retained iff max(p, 1-p) >= threshold, where p is the
    fraction of annotators favoring the metaphorical variant; the label is
    the side that reached the threshold.  For thresholds at or below 0.5
    both sides can qualify; the strict majority wins and an exact 50/50
    split is excluded.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"agreement threshold must be in [0, 1], got {threshold}")
    labels = []
    for record in annotations:
        p = record.metaphorical_fraction
        met_ok = p >= threshold
        lit_ok = (1.0 - p) >= threshold
        if met_ok and lit_ok:
            if p == 0.5:
                continue
            label = METAPHORICAL if p > 0.5 else LITERAL
        elif met_ok:
            label = METAPHORICAL
        elif lit_ok:
            label = LITERAL
        else:
            continue
        labels.append(GoldLabel(record.discourse_id, label, source="annotated"))
    return labels


def original_gold_labels(discourses):
    """Gold labels taken directly from each discourse's original usage."""
    return [GoldLabel(d.discourse_id, d.original_label, source="original")
            for d in discourses]
