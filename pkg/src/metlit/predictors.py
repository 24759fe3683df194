"""The five discourse-property prediction models.

Every model maps a discourse (plus its side inputs) to a choice between the
metaphorical and the literal variant of its expression pair:

* ``freq``       most frequent variant by reference-corpus counts
* ``abstr_*``    discourse abstractness (median concreteness of the
                 preceding discourse, four POS settings) against a
                 calibrated threshold; low concreteness picks metaphorical
* ``emo``        discourse emotionality (median emotional load) against a
                 threshold; high emotionality picks metaphorical
* ``lcg``        lexical coherence: average cosine between preceding-context
                 vectors and each variant's (verb, argument) vectors; the
                 larger average wins
* ``cloze``      length-normalized masked log-probabilities from a language
                 model; the more probable variant wins

All exact ties resolve to literal, the unmarked usage.  Models abstain
(rather than fail) when their discourse score is undefined, e.g. when no
token of the required POS class is covered by the lexicon.

All functions here are pure; per-discourse prediction is safe to run in
parallel over immutable inputs.
"""

import math
from dataclasses import dataclass

from .corpus import LITERAL, METAPHORICAL
from .lexicons import emotional_load

MODEL_IDS = ("freq", "abstr_all", "abstr_n", "abstr_v", "abstr_adj",
             "emo", "lcg", "cloze")

POS_SETTINGS = ("all", "nouns", "verbs", "adjectives")

EMOTIONALITY_SETTING = "emotionality"

LEXICON_MEDIAN = "lexicon_median"
DATASET_MEDIAN = "dataset_median"
THRESHOLD_MODES = (LEXICON_MEDIAN, DATASET_MEDIAN)

# coarse POS classes; punctuation-like tags are never scored
_EXCLUDED_FROM_ALL = frozenset({"PUNCT", "SYM"})
_SETTING_TAGS = {
    "nouns": frozenset({"NOUN", "PROPN"}),
    "verbs": frozenset({"VERB", "AUX"}),
    "adjectives": frozenset({"ADJ"}),
}
_CONTENT_TAGS = frozenset({"NOUN", "VERB", "ADJ", "ADV"})

ABSTRACTNESS_MODEL_IDS = {
    "all": "abstr_all",
    "nouns": "abstr_n",
    "verbs": "abstr_v",
    "adjectives": "abstr_adj",
}


@dataclass(frozen=True)
class Threshold:
    setting: str  # a POS setting or "emotionality"
    value: float
    mode: str

    def __post_init__(self):
        if self.setting not in POS_SETTINGS and self.setting != EMOTIONALITY_SETTING:
            raise ValueError(f"unknown threshold setting {self.setting!r}")
        if self.mode not in THRESHOLD_MODES:
            raise ValueError(f"unknown threshold mode {self.mode!r}")
        if not math.isfinite(self.value):
            raise ValueError(f"threshold value must be finite, got {self.value}")


@dataclass(frozen=True)
class Prediction:
    discourse_id: str
    model_id: str
    choice: str | None  # None means the model abstained
    score_metaphorical: float | None = None
    score_literal: float | None = None
    detail: str = ""

    def __post_init__(self):
        if self.model_id not in MODEL_IDS:
            raise ValueError(f"unknown model_id {self.model_id!r}")
        if self.choice not in (METAPHORICAL, LITERAL, None):
            raise ValueError(f"invalid choice {self.choice!r}")
        both = self.score_metaphorical is not None and self.score_literal is not None
        if both and self.choice is not None and self.score_metaphorical != self.score_literal:
            expected = (METAPHORICAL if self.score_metaphorical > self.score_literal
                        else LITERAL)
            if self.choice != expected:
                raise ValueError(
                    f"{self.model_id} choice {self.choice} contradicts scores "
                    f"({self.score_metaphorical} vs {self.score_literal})")

    @property
    def abstained(self):
        return self.choice is None


def filter_tokens(tokens, setting):
    """Restrict tokens to a POS setting; 'all' means every non-punctuation token."""
    if setting == "all":
        return [t for t in tokens if t.upos not in _EXCLUDED_FROM_ALL]
    try:
        tags = _SETTING_TAGS[setting]
    except KeyError:
        raise ValueError(f"unknown POS setting {setting!r}") from None
    return [t for t in tokens if t.upos in tags]


def median(values):
    """Median of a nonempty list: middle element, or mean of the two middles."""
    values = sorted(values)
    if not values:
        raise ValueError("median of empty list is undefined")
    n = len(values)
    mid = n // 2
    if n % 2 == 1:
        return values[mid]
    return (values[mid - 1] + values[mid]) / 2.0


def predict_frequency(discourse, pair):
    """Choose the more frequent variant of the pair; ties go to literal."""
    if pair.metaphorical_count > pair.literal_count:
        choice = METAPHORICAL
    else:
        choice = LITERAL
    return Prediction(
        discourse_id=discourse.discourse_id,
        model_id="freq",
        choice=choice,
        score_metaphorical=float(pair.metaphorical_count),
        score_literal=float(pair.literal_count),
        detail=f"pair={pair.pair_id}",
    )


def _matched_ratings(discourse, lexicon, setting, include_preslot):
    tokens = filter_tokens(discourse.preceding_tokens(include_preslot), setting)
    ratings = [lexicon[t.lemma].rating for t in tokens if t.lemma in lexicon]
    return tokens, ratings


def discourse_abstractness(discourse, lexicon, setting, include_preslot=False):
    """Median concreteness rating of the matched preceding-discourse tokens.

    Returns None when no token of the setting's POS class is in the lexicon;
    that is a distinguished outcome, not a failure.
    """
    _, ratings = _matched_ratings(discourse, lexicon, setting, include_preslot)
    if not ratings:
        return None
    return median(ratings)


def calibrate_threshold(corpus, lexicon, setting, mode, include_preslot=False):
    """Abstractness decision threshold for one POS setting.

    ``lexicon_median`` takes the median rating over the lexicon entries of
    the setting's POS class (every entry for 'all'); ``dataset_median``
    takes the median of the defined per-discourse abstractness scores.
    """
    if setting not in POS_SETTINGS:
        raise ValueError(f"unknown POS setting {setting!r}")
    if mode == LEXICON_MEDIAN:
        if setting == "all":
            ratings = [e.rating for e in lexicon.values()]
        else:
            tags = _SETTING_TAGS[setting]
            ratings = [e.rating for e in lexicon.values()
                       if e.dominant_pos in tags]
        if not ratings:
            raise ValueError(f"no lexicon entries for setting {setting!r}")
        return Threshold(setting=setting, value=median(ratings), mode=mode)
    if mode == DATASET_MEDIAN:
        scores = []
        for d in corpus:
            score = discourse_abstractness(d, lexicon, setting, include_preslot)
            if score is not None:
                scores.append(score)
        if not scores:
            raise ValueError(
                f"no discourse has a defined abstractness score for {setting!r}")
        return Threshold(setting=setting, value=median(scores), mode=mode)
    raise ValueError(f"unknown threshold mode {mode!r}")


def predict_abstractness(discourse, lexicon, setting, threshold,
                         include_preslot=False):
    """Below the threshold (more abstract) picks metaphorical; at or above, literal."""
    if threshold.setting != setting:
        raise ValueError(
            f"threshold calibrated for {threshold.setting!r}, called with {setting!r}")
    model_id = ABSTRACTNESS_MODEL_IDS[setting]
    tokens, ratings = _matched_ratings(discourse, lexicon, setting, include_preslot)
    if not ratings:
        return Prediction(
            discourse_id=discourse.discourse_id, model_id=model_id, choice=None,
            detail=f"no scored tokens (considered={len(tokens)})")
    score = median(ratings)
    choice = METAPHORICAL if score < threshold.value else LITERAL
    return Prediction(
        discourse_id=discourse.discourse_id, model_id=model_id, choice=choice,
        detail=(f"score={score!r} threshold={threshold.value!r} "
                f"mode={threshold.mode} matched={len(ratings)}/{len(tokens)}"),
    )


def discourse_emotionality(discourse, emotion_lexicon, include_preslot=False):
    """Median emotional load over matched non-punctuation preceding tokens."""
    tokens = filter_tokens(discourse.preceding_tokens(include_preslot), "all")
    loads = [emotional_load(emotion_lexicon[t.lemma])
             for t in tokens if t.lemma in emotion_lexicon]
    if not loads:
        return None
    return median(loads)


def calibrate_emotionality(corpus, emotion_lexicon, mode, include_preslot=False):
    """Emotionality threshold: median load over the lexicon, or over the dataset."""
    if mode == LEXICON_MEDIAN:
        loads = [emotional_load(e) for e in emotion_lexicon.values()]
        if not loads:
            raise ValueError("emotion lexicon is empty")
        return Threshold(setting=EMOTIONALITY_SETTING, value=median(loads), mode=mode)
    if mode == DATASET_MEDIAN:
        scores = []
        for d in corpus:
            score = discourse_emotionality(d, emotion_lexicon, include_preslot)
            if score is not None:
                scores.append(score)
        if not scores:
            raise ValueError("no discourse has a defined emotionality score")
        return Threshold(setting=EMOTIONALITY_SETTING, value=median(scores), mode=mode)
    raise ValueError(f"unknown threshold mode {mode!r}")


def predict_emotionality(discourse, emotion_lexicon, threshold,
                         include_preslot=False):
    """Above the threshold (more emotionally loaded) picks metaphorical."""
    if threshold.setting != EMOTIONALITY_SETTING:
        raise ValueError(
            f"threshold calibrated for {threshold.setting!r}, not emotionality")
    tokens = filter_tokens(discourse.preceding_tokens(include_preslot), "all")
    loads = [emotional_load(emotion_lexicon[t.lemma])
             for t in tokens if t.lemma in emotion_lexicon]
    if not loads:
        return Prediction(
            discourse_id=discourse.discourse_id, model_id="emo", choice=None,
            detail=f"no scored tokens (considered={len(tokens)})")
    score = median(loads)
    choice = METAPHORICAL if score > threshold.value else LITERAL
    return Prediction(
        discourse_id=discourse.discourse_id, model_id="emo", choice=choice,
        detail=(f"score={score!r} threshold={threshold.value!r} "
                f"mode={threshold.mode} matched={len(loads)}/{len(tokens)}"),
    )


def cosine(a, b):
    """Cosine of two equal-dimension vectors; rejects zero-norm input."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    dot = 0.0
    norm_a = 0.0
    norm_b = 0.0
    for x, y in zip(a, b):
        dot += x * y
        norm_a += x * x
        norm_b += y * y
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine undefined for zero-norm vector")
    return dot / math.sqrt(norm_a * norm_b)


def lcg_weight(context_vectors, expression_vectors):
    """Average cosine between every context vector and every expression vector.

    This is the edge weight of the coherence graph connecting the preceding
    discourse to one candidate expression; the result lies in [-1, 1].
    """
    context_vectors = list(context_vectors)
    expression_vectors = list(expression_vectors)
    if not context_vectors:
        raise ValueError("lcg_weight needs at least one context vector")
    if not expression_vectors:
        raise ValueError("lcg_weight needs at least one expression vector")
    total = 0.0
    for ctx in context_vectors:
        for expr in expression_vectors:
            total += cosine(ctx, expr)
    return total / (len(context_vectors) * len(expression_vectors))


def _lcg_context(discourse, artifact, content_only, include_preslot):
    refs = []
    for s_idx, sentence in enumerate(discourse.sentences[:discourse.final_sentence_index]):
        for t_idx, token in enumerate(sentence):
            refs.append((s_idx, t_idx, token))
    if include_preslot:
        final = discourse.sentences[discourse.final_sentence_index]
        for t_idx, token in enumerate(final[:discourse.slot_token_index]):
            refs.append((discourse.final_sentence_index, t_idx, token))
    wanted = _CONTENT_TAGS if content_only else None
    vectors = []
    for s_idx, t_idx, token in refs:
        if token.upos in _EXCLUDED_FROM_ALL:
            continue
        if wanted is not None and token.upos not in wanted:
            continue
        vector = artifact.context_vector(discourse.discourse_id, s_idx, t_idx)
        if vector is None:
            raise ValueError(
                f"discourse {discourse.discourse_id}: missing context embedding "
                f"for sentence {s_idx}, token {t_idx}")
        vectors.append(vector)
    return vectors


def predict_lcg(discourse, artifact, content_only=False, include_preslot=False):
    """Pick the variant whose expression components cohere more with the context.

    Computes the average cosine weight for the metaphorical and the literal
    (verb, argument) component vectors against the preceding-discourse token
    vectors; the larger weight wins, exact ties go to literal.
    """
    context = _lcg_context(discourse, artifact, content_only, include_preslot)
    if not context:
        raise ValueError(
            f"discourse {discourse.discourse_id}: no context tokens for the LCG")
    weights = {}
    for variant in (METAPHORICAL, LITERAL):
        components = artifact.component_vectors(discourse.discourse_id, variant)
        if components is None:
            raise ValueError(
                f"discourse {discourse.discourse_id}: missing {variant} "
                f"component embeddings")
        weights[variant] = lcg_weight(context, components)
    choice = (METAPHORICAL if weights[METAPHORICAL] > weights[LITERAL]
              else LITERAL)
    return Prediction(
        discourse_id=discourse.discourse_id, model_id="lcg", choice=choice,
        score_metaphorical=weights[METAPHORICAL],
        score_literal=weights[LITERAL],
        detail=f"context_tokens={len(context)}",
    )


def predict_cloze(discourse, scores):
    """Pick the variant with the higher length-normalized log-probability.

    ``scores`` maps each candidate tag to its ClozeScore; multi-subtoken
    candidates are compared by mean subtoken log-probability.
    """
    normalized = {}
    for variant in (METAPHORICAL, LITERAL):
        if variant not in scores:
            raise ValueError(
                f"discourse {discourse.discourse_id}: missing cloze score "
                f"for the {variant} candidate")
        record = scores[variant]
        if not math.isfinite(record.logprob):
            raise ValueError(
                f"discourse {discourse.discourse_id}: non-finite logprob "
                f"for the {variant} candidate")
        normalized[variant] = record.logprob / record.n_subtokens
    choice = (METAPHORICAL if normalized[METAPHORICAL] > normalized[LITERAL]
              else LITERAL)
    return Prediction(
        discourse_id=discourse.discourse_id, model_id="cloze", choice=choice,
        score_metaphorical=normalized[METAPHORICAL],
        score_literal=normalized[LITERAL],
        detail=(f"subtokens_met={scores[METAPHORICAL].n_subtokens} "
                f"subtokens_lit={scores[LITERAL].n_subtokens}"),
    )
