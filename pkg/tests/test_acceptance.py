"""Acceptance checks for the package's core guarantees.

One test per guarantee, sized and tolerance-pinned:

* chance-level frequency accuracy on pair-balanced corpora (exact)
* emotional load as the peak emotion score (exact)
* coherence weights against a brute-force oracle (1e-9, choices exact)
* median and regression against reference formulas (exact / 1e-9)
* order, scale, and tie invariants across the models (exact choices)
* byte-identical reruns matching the frozen fixture outputs
* the agreement filter against its closed-form rule (exact)

The last two tests cover optional full-size data and provider-built
artifacts; they skip when those inputs are absent.
"""

import json
import math
import os
import random
import shutil
import statistics
import subprocess
from pathlib import Path

import pytest

from metlit import (AnnotationRecord, ClozeScore, ConcretenessEntry,
                    Discourse, EmotionEntry, ExpressionPair, Prediction,
                    Threshold, Token, accuracy, emotional_load,
                    filter_by_agreement, fit_regression, load_annotations,
                    load_cloze, load_corpus, load_embeddings, load_emotion,
                    load_pairs, median, original_gold_labels, overlap_matrix,
                    predict_abstractness, predict_cloze, predict_emotionality,
                    predict_frequency, predict_lcg, sha256_file)
from metlit.cli import load_calibration, load_predictions
from metlit.cli import main as cli_main

MET = "metaphorical"
LIT = "literal"


def bare_discourse(discourse_id, pair_id="p0", label=LIT, n_context=0):
    context = tuple(Token(f"w{i}", f"w{i}", "NOUN") for i in range(n_context))
    final = (Token("it", "it", "PRON"), Token("took", "take", "VERB"),
             Token("shape", "shape", "NOUN"))
    sentences = ((context,) if context else ()) + (final,)
    return Discourse(discourse_id=discourse_id, pair_id=pair_id,
                     sentences=sentences,
                     final_sentence_index=len(sentences) - 1,
                     slot_token_index=1, original_label=label)


def lemma_discourse(discourse_id, *lemmas):
    context = tuple(Token(lemma, lemma, "NOUN") for lemma in lemmas)
    final = (Token("it", "it", "PRON"), Token("took", "take", "VERB"),
             Token("shape", "shape", "NOUN"))
    return Discourse(discourse_id=discourse_id, pair_id="p0",
                     sentences=(context, final), final_sentence_index=1,
                     slot_token_index=1, original_label=LIT)


class StubEmbeddings:
    def __init__(self, context, components):
        self._context = context
        self._components = components

    def context_vector(self, discourse_id, sentence, token):
        return self._context.get((discourse_id, sentence, token))

    def component_vectors(self, discourse_id, variant):
        return self._components.get((discourse_id, variant))


def rand_vector(rng, dim):
    while True:
        vector = tuple(rng.uniform(-1.0, 1.0) for _ in range(dim))
        if max(abs(x) for x in vector) > 1e-6:
            return vector


def brute_mean_cosine(context, components):
    """All-pairs cosine average, written independently of the library."""
    total = 0.0
    for c in context:
        for e in components:
            dot = sum(x * y for x, y in zip(c, e))
            norm_c = math.sqrt(sum(x * x for x in c))
            norm_e = math.sqrt(sum(y * y for y in e))
            total += dot / (norm_c * norm_e)
    return total / (len(context) * len(components))


def test_balanced_corpus_frequency_accuracy_is_exactly_half():
    rng = random.Random(20260401)
    for trial in range(200):
        corpus = []
        predictions = []
        for i in range(rng.randint(1, 4)):
            pair = ExpressionPair(
                pair_id=f"p{i}", kind=rng.choice(["SV", "VO"]),
                argument_lemma="thing", metaphorical_verb="devour",
                literal_verb="eat",
                metaphorical_count=rng.randint(0, 1000),
                literal_count=rng.randint(0, 1000))
            k = rng.randint(1, 4)
            labels = [MET] * k + [LIT] * k
            rng.shuffle(labels)
            for j, label in enumerate(labels):
                d = bare_discourse(f"t{trial}-{i}-{j}", pair.pair_id, label)
                corpus.append(d)
                predictions.append(predict_frequency(d, pair))
        assert accuracy(predictions, original_gold_labels(corpus)) == 0.5


def test_emotional_load_is_the_peak_emotion_score(fixture_inputs):
    entry = EmotionEntry("truth", 2.24, 1.46, 1.4, 1.49, 1.46)
    assert emotional_load(entry) == 2.24
    loaded = load_emotion(fixture_inputs["emotion"])
    assert emotional_load(loaded["truth"]) == 2.24


def test_lcg_weights_match_the_brute_force_oracle():
    rng = random.Random(987201)
    for trial in range(1000):
        dim = rng.randint(2, 8)
        n_ctx = rng.randint(1, 6)
        discourse_id = f"t{trial}"
        context = [rand_vector(rng, dim) for _ in range(n_ctx)]
        met = (rand_vector(rng, dim), rand_vector(rng, dim))
        lit = (rand_vector(rng, dim), rand_vector(rng, dim))
        artifact = StubEmbeddings(
            context={(discourse_id, 0, i): v for i, v in enumerate(context)},
            components={(discourse_id, MET): met, (discourse_id, LIT): lit})
        p = predict_lcg(bare_discourse(discourse_id, n_context=n_ctx), artifact)
        w_met = brute_mean_cosine(context, met)
        w_lit = brute_mean_cosine(context, lit)
        assert abs(p.score_metaphorical - w_met) <= 1e-9
        assert abs(p.score_literal - w_lit) <= 1e-9
        assert p.choice == (MET if w_met > w_lit else LIT)


def test_median_and_regression_match_reference_formulas():
    rng = random.Random(551)
    for _ in range(1000):
        values = [rng.uniform(-100.0, 100.0) for _ in range(rng.randint(1, 15))]
        assert median(values) == statistics.median(values)
    checked = 0
    while checked < 1000:
        n = rng.randint(2, 20)
        points = [(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0))
                  for _ in range(n)]
        xs = [x for x, _ in points]
        if max(xs) == min(xs):
            continue
        checked += 1
        line = fit_regression(points)
        # normal-equation form, unlike the library's centered sums
        sx = sum(xs)
        sy = sum(y for _, y in points)
        sxx = sum(x * x for x in xs)
        sxy = sum(x * y for x, y in points)
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
        intercept = (sy - slope * sx) / n
        assert abs(line.slope - slope) <= 1e-9
        assert abs(line.intercept - intercept) <= 1e-9


def test_order_scale_and_tie_invariants():
    rng = random.Random(77003)

    # cloze: candidate insertion order never matters
    for i in range(1000):
        d = bare_discourse(f"o{i}")
        met = ClozeScore(d.discourse_id, MET, rng.uniform(-9.0, -0.1),
                         rng.randint(1, 4))
        lit = ClozeScore(d.discourse_id, LIT, rng.uniform(-9.0, -0.1),
                         rng.randint(1, 4))
        forward = predict_cloze(d, {MET: met, LIT: lit})
        backward = predict_cloze(d, {LIT: lit, MET: met})
        assert forward.choice == backward.choice

    # lcg: component order within a variant never matters, and scaling
    # every embedding by one positive factor never flips a choice
    for i in range(1000):
        discourse_id = f"s{i}"
        dim = rng.randint(2, 6)
        n_ctx = rng.randint(1, 4)
        d = bare_discourse(discourse_id, n_context=n_ctx)
        context = {(discourse_id, 0, j): rand_vector(rng, dim)
                   for j in range(n_ctx)}
        met = (rand_vector(rng, dim), rand_vector(rng, dim))
        lit = (rand_vector(rng, dim), rand_vector(rng, dim))
        base = predict_lcg(d, StubEmbeddings(
            context, {(discourse_id, MET): met, (discourse_id, LIT): lit}))
        swapped = predict_lcg(d, StubEmbeddings(
            context, {(discourse_id, MET): met[::-1],
                      (discourse_id, LIT): lit[::-1]}))
        assert swapped.choice == base.choice
        factor = rng.uniform(0.01, 100.0)
        scale = lambda v: tuple(factor * x for x in v)
        scaled = predict_lcg(d, StubEmbeddings(
            {k: scale(v) for k, v in context.items()},
            {(discourse_id, MET): tuple(scale(v) for v in met),
             (discourse_id, LIT): tuple(scale(v) for v in lit)}))
        assert scaled.choice == base.choice
        assert abs(scaled.score_metaphorical - base.score_metaphorical) <= 1e-9
        assert abs(scaled.score_literal - base.score_literal) <= 1e-9

    # overlap matrices are symmetric with an exact unit diagonal
    model_ids = ("freq", "emo", "lcg", "cloze")
    for i in range(1000):
        by_model = {}
        for m in model_ids:
            predictions = [Prediction(f"d{j}", m,
                                      rng.choice((MET, LIT, LIT, None)))
                           for j in range(10)]
            predictions.append(Prediction("shared", m, MET))
            by_model[m] = predictions
        matrix = overlap_matrix(by_model, model_ids)
        for r in range(len(model_ids)):
            assert matrix.cells[r][r] == 1.0
            for c in range(len(model_ids)):
                assert matrix.cells[r][c] == matrix.cells[c][r]
                assert 0.0 <= matrix.cells[r][c] <= 1.0

    # every exact tie resolves to literal
    for i in range(1000):
        pair = ExpressionPair("p0", "VO", "thing", "devour", "eat",
                              rng.randint(0, 500), 0)
        tied = ExpressionPair("p0", "VO", "thing", "devour", "eat",
                              pair.metaphorical_count, pair.metaphorical_count)
        assert predict_frequency(bare_discourse(f"f{i}"), tied).choice == LIT

        rating = rng.uniform(1.0, 5.0)
        lexicon = {"w": ConcretenessEntry("w", rating)}
        d = lemma_discourse(f"a{i}", "w")
        threshold = Threshold("all", rating, "lexicon_median")
        assert predict_abstractness(d, lexicon, "all", threshold).choice == LIT

        load = rng.uniform(0.5, 5.0)
        emolex = {"w": EmotionEntry("w", load, 0.0, 0.0, 0.0, 0.0)}
        threshold = Threshold("emotionality", load, "lexicon_median")
        assert predict_emotionality(d, emolex, threshold).choice == LIT

        logprob = rng.uniform(-9.0, -0.1)
        if i % 2:
            scores = {MET: ClozeScore(f"f{i}", MET, logprob, 1),
                      LIT: ClozeScore(f"f{i}", LIT, logprob, 1)}
        else:  # same per-subtoken value at different lengths
            scores = {MET: ClozeScore(f"f{i}", MET, 2.0 * logprob, 2),
                      LIT: ClozeScore(f"f{i}", LIT, logprob, 1)}
        assert predict_cloze(bare_discourse(f"f{i}"), scores).choice == LIT

        dim = rng.randint(2, 6)
        components = (rand_vector(rng, dim), rand_vector(rng, dim))
        d = bare_discourse(f"l{i}", n_context=2)
        artifact = StubEmbeddings(
            {(f"l{i}", 0, 0): rand_vector(rng, dim),
             (f"l{i}", 0, 1): rand_vector(rng, dim)},
            {(f"l{i}", MET): components, (f"l{i}", LIT): components})
        assert predict_lcg(d, artifact).choice == LIT


def test_fixture_pipeline_reproduces_the_frozen_outputs(
        fixture_inputs, fixturegen, golden_dir, tmp_path):
    outs = []
    for name in ("first", "second"):
        out = tmp_path / name
        status = cli_main([
            "run",
            "--corpus", str(fixture_inputs["corpus"]),
            "--pairs", str(fixture_inputs["pairs"]),
            "--concreteness", str(fixture_inputs["concreteness"]),
            "--emotion", str(fixture_inputs["emotion"]),
            "--embeddings", str(fixture_inputs["embeddings"]),
            "--cloze", str(fixture_inputs["cloze"]),
            "--annotations", str(fixture_inputs["annotations"]),
            "--out", str(out), "--no-figures",
        ])
        assert status == 0
        outs.append(out)

    frozen = sorted(p.relative_to(golden_dir)
                    for p in golden_dir.rglob("*") if p.is_file())
    assert len(frozen) == 19  # calibration, report x2, 8 predictions, 8 scatter
    for rel in frozen:
        produced = (outs[0] / rel).read_bytes()
        assert produced == (outs[1] / rel).read_bytes(), rel
        assert produced == (golden_dir / rel).read_bytes(), rel

    # the frozen files encode the hand-worked design
    for column, model_id in enumerate(fixturegen.EXPECTED_MODEL_ORDER):
        _, records = load_predictions(
            outs[0] / "predictions" / f"{model_id}.jsonl", model_id)
        choices = {p.discourse_id: p.choice for p in records}
        expected = {d: row[column]
                    for d, row in fixturegen.EXPECTED_CHOICES.items()}
        assert choices == expected, model_id
    thresholds = load_calibration(outs[0] / "calibration.json")
    assert ({m: t.value for m, t in thresholds.items()}
            == fixturegen.EXPECTED_THRESHOLDS)
    report = json.loads((outs[0] / "report.json").read_text())
    assert report["accuracy_original"]["freq"] == 0.5
    regression = report["regressions"]["freq"]
    slope, intercept = fixturegen.EXPECTED_FREQ_REGRESSION
    assert abs(regression["slope"] - slope) <= 1e-9
    assert abs(regression["intercept"] - intercept) <= 1e-9
    assert (report["overlap"]["cells"][0][1]
            == fixturegen.EXPECTED_FREQ_OVERLAP_ABSTR_ALL)


def test_agreement_filter_retains_exactly_the_qualifying_records(
        fixture_inputs, fixturegen):
    records = load_annotations(fixture_inputs["annotations"])
    retained = filter_by_agreement(records, 0.7)
    assert ({l.discourse_id: l.label for l in retained}
            == fixturegen.EXPECTED_RETAINED_AT_07)
    unanimous = filter_by_agreement(records, 1.0)
    assert ({l.discourse_id: l.label for l in unanimous}
            == fixturegen.EXPECTED_RETAINED_AT_10)

    rng = random.Random(90125)
    for i in range(1000):
        n = rng.randint(1, 12)
        record = AnnotationRecord(f"r{i}", n, rng.randint(0, n))
        threshold = rng.choice([0.5, 0.6, 0.7, 0.75, 0.9, 1.0])
        p = record.metaphorical_fraction
        kept = [(l.discourse_id, l.label)
                for l in filter_by_agreement([record], threshold)]
        if max(p, 1.0 - p) >= threshold and p != 0.5:
            assert kept == [(record.discourse_id, MET if p > 0.5 else LIT)]
        else:
            assert kept == []


DATA_DIR = os.environ.get("METLIT_DATA_DIR")


@pytest.mark.skipif(not DATA_DIR,
                    reason="set METLIT_DATA_DIR to run the full-data check")
def test_released_data_accuracies_sit_in_the_reported_band(tmp_path):
    data = Path(DATA_DIR)
    argv = ["run", "--corpus", str(data / "corpus.jsonl"),
            "--pairs", str(data / "pairs.csv"),
            "--out", str(tmp_path), "--no-figures"]
    for flag, name in (("--concreteness", "concreteness.tsv"),
                       ("--emotion", "emotion.csv"),
                       ("--embeddings", "embeddings.jsonl"),
                       ("--cloze", "cloze.jsonl"),
                       ("--annotations", "annotations.jsonl")):
        if (data / name).exists():
            argv.extend([flag, str(data / name)])
    assert cli_main(argv) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    for model_id, value in report["accuracy_original"].items():
        assert 0.40 <= value <= 0.60, model_id
    pairs = load_pairs(data / "pairs.csv")
    literal_majority = sum(1 for p in pairs.values()
                           if p.literal_count >= p.metaphorical_count)
    if (literal_majority, len(pairs)) == (37, 50):
        assert abs((1.0 - report["metaphor_rate"]["freq"]) - 0.74) <= 0.05


PROVIDER_DIR = Path(__file__).resolve().parent.parent / "provider"
PROVIDER_CLI = PROVIDER_DIR / "dist" / "cli.js"


@pytest.mark.skipif(shutil.which("node") is None or not PROVIDER_CLI.exists(),
                    reason="provider bundle not built")
def test_provider_artifacts_validate_load_and_repeat(tmp_path):
    runs = []
    for name in ("first", "second"):
        out = tmp_path / name
        subprocess.run(
            ["node", str(PROVIDER_CLI), "pipeline",
             "--raw", str(PROVIDER_DIR / "sample" / "raw.jsonl"),
             "--pairs", str(PROVIDER_DIR / "sample" / "pairs.csv"),
             "--out", str(out)],
            check=True, cwd=PROVIDER_DIR, timeout=110)
        runs.append(out)
    for name in ("corpus.jsonl", "embeddings.jsonl", "cloze.jsonl"):
        assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes()

    out = runs[0]
    pairs = load_pairs(PROVIDER_DIR / "sample" / "pairs.csv")
    discourses = load_corpus(out / "corpus.jsonl", pairs)
    assert len(discourses) == 10
    digest = sha256_file(out / "corpus.jsonl")
    embeddings = load_embeddings(out / "embeddings.jsonl", digest)
    cloze = load_cloze(out / "cloze.jsonl", digest)
    for d in discourses:
        scores = cloze.scores_for(d.discourse_id)
        assert scores is not None and set(scores) == {MET, LIT}
        assert all(math.isfinite(s.logprob) for s in scores.values())
        assert embeddings.component_vectors(d.discourse_id, MET) is not None
        assert embeddings.component_vectors(d.discourse_id, LIT) is not None

    status = cli_main(["predict", "--corpus", str(out / "corpus.jsonl"),
                       "--pairs", str(PROVIDER_DIR / "sample" / "pairs.csv"),
                       "--embeddings", str(out / "embeddings.jsonl"),
                       "--cloze", str(out / "cloze.jsonl"),
                       "--models", "lcg,cloze",
                       "--out", str(tmp_path / "core")])
    assert status == 0
