"""Discourse-level choice between a metaphorical verb and its literal synonym.

The package predicts, for discourses ending in a verb slot with two
candidate fillers (a metaphorical verb and a synonymous literal one), which
variant the discourse calls for, and evaluates those predictions against
the originally used verb and against annotator preferences.
"""

from .artifacts import (ClozeArtifact, ClozeScore, EmbeddingArtifact,
                        Manifest, load_cloze, load_embeddings, sha256_file)
from .corpus import (LITERAL, METAPHORICAL, AnnotationRecord, Discourse,
                     ExpressionPair, GoldLabel, Token, filter_by_agreement,
                     load_annotations, load_corpus, load_pairs,
                     original_gold_labels, serialize_corpus)
from .errors import InputError
from .evaluation import (EvaluationReport, OverlapMatrix, PairProportion,
                         RegressionLine, accuracy, build_report,
                         fit_regression, metaphor_rate, overlap,
                         overlap_matrix, per_pair_proportions)
from .lexicons import (ConcretenessEntry, CoverageStat, EmotionEntry,
                       coverage, emotional_load, load_concreteness,
                       load_emotion)
from .predictors import (MODEL_IDS, POS_SETTINGS, Prediction, Threshold,
                         calibrate_emotionality, calibrate_threshold,
                         cosine, discourse_abstractness,
                         discourse_emotionality, lcg_weight, median,
                         predict_abstractness, predict_cloze,
                         predict_emotionality, predict_frequency,
                         predict_lcg)

__version__ = "0.1.0"
