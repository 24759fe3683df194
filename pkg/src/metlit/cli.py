"""Command-line pipeline around the library.

Four subcommands: ``calibrate`` computes and stores decision thresholds,
``predict`` runs a model subset over a corpus and writes one prediction
file per model, ``evaluate`` scores stored predictions against the
original-usage and annotator gold standards, and ``run`` chains predict
and evaluate.

Outputs under --out:

* calibration.json            thresholds (when calibrated in this run)
* predictions/<model>.jsonl   provenance line, then one record per discourse
* report.json, report.txt     the evaluation report
* scatter/<model>.csv         per-pair human vs model metaphor fractions
* figures/*.png               rendered report figures

Every delimited or JSON output embeds the sha256 of its inputs and no
timestamps, so reruns over identical inputs are byte-identical.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import figures
from .artifacts import load_cloze, load_embeddings, sha256_file
from .corpus import (filter_by_agreement, load_annotations, load_corpus,
                     load_pairs, original_gold_labels)
from .errors import InputError
from .evaluation import (build_report, canonical_model_order,
                         render_report_text, write_report_json,
                         write_report_text, write_scatter_files)
from .lexicons import coverage, load_concreteness, load_emotion
from .predictors import (ABSTRACTNESS_MODEL_IDS, DATASET_MEDIAN,
                         EMOTIONALITY_SETTING, LEXICON_MEDIAN, MODEL_IDS,
                         POS_SETTINGS, Prediction, Threshold,
                         calibrate_emotionality, calibrate_threshold,
                         predict_abstractness, predict_cloze,
                         predict_emotionality, predict_frequency, predict_lcg)

log = logging.getLogger(__name__)

_MODE_BY_FLAG = {"lexicon": LEXICON_MEDIAN, "dataset": DATASET_MEDIAN}

_MODEL_INPUTS = {
    "freq": (),
    "abstr_all": ("concreteness",),
    "abstr_n": ("concreteness",),
    "abstr_v": ("concreteness",),
    "abstr_adj": ("concreteness",),
    "emo": ("emotion",),
    "lcg": ("embeddings",),
    "cloze": ("cloze",),
}

_SETTING_BY_MODEL = {m: s for s, m in ABSTRACTNESS_MODEL_IDS.items()}

# calibration file slots, in write order
_THRESHOLD_IDS = ("abstr_all", "abstr_n", "abstr_v", "abstr_adj", "emo")

_CONFIG_KEYS = frozenset({
    "corpus", "pairs", "out", "annotations", "concreteness", "emotion",
    "embeddings", "cloze", "calibration", "predictions", "models",
    "threshold_mode", "agreement", "lcg_content_only",
    "include_preslot_tokens", "figures", "all_discourse_proportions",
})

_DEFAULTS = {
    "threshold_mode": "lexicon",
    "include_preslot_tokens": False,
    "lcg_content_only": False,
    "agreement": 0.7,
    "figures": True,
    "all_discourse_proportions": False,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="metlit",
        description="Predict and evaluate metaphorical vs synonymous literal "
                    "verb choice per discourse.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", metavar="FILE",
                       help="JSON file supplying defaults for any option")
        p.add_argument("--corpus", metavar="FILE",
                       help="discourse corpus (JSON lines)")
        p.add_argument("--pairs", metavar="FILE",
                       help="expression pair table (comma or tab delimited)")
        p.add_argument("--out", metavar="DIR", help="output directory")

    def add_lexicon_options(p):
        p.add_argument("--concreteness", metavar="FILE",
                       help="concreteness norms: lemma, rating, optional pos")
        p.add_argument("--emotion", metavar="FILE",
                       help="five-emotion lexicon: lemma, joy, anger, sadness, "
                            "fear, surprise")
        p.add_argument("--threshold-mode", choices=sorted(_MODE_BY_FLAG),
                       help="calibrate thresholds from the lexicon median "
                            "(default) or the dataset score median")
        p.add_argument("--include-preslot-tokens", action="store_const",
                       const=True, default=None,
                       help="also score final-sentence tokens left of the slot")

    def add_model_options(p):
        p.add_argument("--embeddings", metavar="FILE",
                       help="context and component embedding artifact")
        p.add_argument("--cloze", metavar="FILE",
                       help="cloze log-probability artifact")
        p.add_argument("--calibration", metavar="FILE",
                       help="reuse thresholds from an earlier calibrate run")
        p.add_argument("--models", metavar="LIST",
                       help="comma-separated subset of: "
                            + ", ".join(MODEL_IDS)
                            + "; or 'all' (default: every model whose inputs "
                              "were given)")
        p.add_argument("--lcg-content-only", action="store_const",
                       const=True, default=None,
                       help="restrict the coherence context to content words")

    def add_eval_options(p, with_predictions):
        p.add_argument("--annotations", metavar="FILE",
                       help="annotator preference records (JSON lines)")
        p.add_argument("--agreement", type=float, metavar="T",
                       help="annotator agreement threshold (default 0.7)")
        if with_predictions:
            p.add_argument("--predictions", metavar="DIR",
                           help="prediction directory (default OUT/predictions)")
        p.add_argument("--no-figures", dest="figures", action="store_const",
                       const=False, default=None,
                       help="skip figure rendering")
        p.add_argument("--all-discourse-proportions", action="store_const",
                       const=True, default=None,
                       help="per-pair model proportions over every decided "
                            "discourse, not only the annotated subset")

    p = sub.add_parser("calibrate", help="compute and store decision thresholds")
    add_common(p)
    add_lexicon_options(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("predict", help="run the models over a corpus")
    add_common(p)
    add_lexicon_options(p)
    add_model_options(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate",
                       help="score stored predictions against the gold labels")
    add_common(p)
    add_eval_options(p, with_predictions=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="predict and evaluate in one pass")
    add_common(p)
    add_lexicon_options(p)
    add_model_options(p)
    add_eval_options(p, with_predictions=False)
    p.set_defaults(func=cmd_run)
    return parser


def apply_config(args):
    """Fill unset options from --config, then from the built-in defaults."""
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as handle:
            try:
                config = json.load(handle)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON ({exc.msg})", args.config) from None
        if not isinstance(config, dict):
            raise InputError("config must be a JSON object", args.config)
        unknown = sorted(set(config) - _CONFIG_KEYS)
        if unknown:
            raise InputError(f"unknown config key(s): {', '.join(unknown)}",
                             args.config)
        for key, value in config.items():
            # keys for other subcommands are legal in a shared config file
            if hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, value)
    args.mode_was_explicit = getattr(args, "threshold_mode", None) is not None
    for key, value in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def _require(args, *keys):
    missing = [key for key in keys if getattr(args, key, None) is None]
    if missing:
        flags = ", ".join("--" + key.replace("_", "-") for key in missing)
        raise InputError(f"missing required option(s): {flags}")


def _threshold_mode(args):
    mode = args.threshold_mode
    if mode not in _MODE_BY_FLAG:
        raise InputError(f"threshold-mode must be one of "
                         f"{', '.join(sorted(_MODE_BY_FLAG))}; got {mode!r}")
    return _MODE_BY_FLAG[mode]


def _input_stamp(path):
    return f"{os.path.basename(path)} {sha256_file(path)}"


def _write_calibration(path, thresholds, provenance):
    obj = {"provenance": provenance, "thresholds": {}}
    for model_id in _THRESHOLD_IDS:
        if model_id in thresholds:
            t = thresholds[model_id]
            obj["thresholds"][model_id] = {
                "setting": t.setting, "value": t.value, "mode": t.mode}
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(obj, handle, indent=2, ensure_ascii=False)
        handle.write("\n")


def load_calibration(path):
    """Read a calibration file back into Threshold objects keyed by model id."""
    with open(path, encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON ({exc.msg})", path) from None
    raw = obj.get("thresholds") if isinstance(obj, dict) else None
    if not isinstance(raw, dict):
        raise InputError("calibration file has no 'thresholds' object", path)
    thresholds = {}
    for model_id, entry in raw.items():
        if model_id not in _THRESHOLD_IDS:
            raise InputError(f"unknown threshold slot {model_id!r}", path)
        try:
            threshold = Threshold(setting=str(entry["setting"]),
                                  value=float(entry["value"]),
                                  mode=str(entry["mode"]))
        except KeyError as exc:
            raise InputError(f"threshold {model_id}: missing field {exc.args[0]}",
                             path) from None
        except (TypeError, ValueError) as exc:
            raise InputError(f"threshold {model_id}: {exc}", path) from None
        expected = (EMOTIONALITY_SETTING if model_id == "emo"
                    else _SETTING_BY_MODEL[model_id])
        if threshold.setting != expected:
            raise InputError(
                f"threshold {model_id} is calibrated for setting "
                f"{threshold.setting!r}, expected {expected!r}", path)
        thresholds[model_id] = threshold
    return thresholds


def _prediction_to_obj(p):
    return {
        "discourse_id": p.discourse_id,
        "model_id": p.model_id,
        "choice": p.choice,
        "score_metaphorical": p.score_metaphorical,
        "score_literal": p.score_literal,
        "abstained": p.abstained,
        "detail": p.detail,
    }


def load_predictions(path, expected_model=None):
    """Read one model's prediction file; returns (provenance or None, records)."""
    provenance = None
    predictions = []
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
            if obj.get("kind") == "provenance":
                if predictions or provenance is not None:
                    raise InputError("provenance must be the first record",
                                     path, line_no)
                provenance = obj
                continue
            try:
                p = Prediction(
                    discourse_id=str(obj["discourse_id"]),
                    model_id=str(obj["model_id"]),
                    choice=obj["choice"],
                    score_metaphorical=(None if obj.get("score_metaphorical") is None
                                        else float(obj["score_metaphorical"])),
                    score_literal=(None if obj.get("score_literal") is None
                                   else float(obj["score_literal"])),
                    detail=str(obj.get("detail", "")),
                )
            except KeyError as exc:
                raise InputError(f"record missing field {exc.args[0]}",
                                 path, line_no) from None
            except (TypeError, ValueError) as exc:
                raise InputError(str(exc), path, line_no) from None
            if expected_model is not None and p.model_id != expected_model:
                raise InputError(
                    f"model_id {p.model_id!r} inside a {expected_model} file",
                    path, line_no)
            if "abstained" in obj and bool(obj["abstained"]) != p.abstained:
                raise InputError("abstained flag contradicts the choice",
                                 path, line_no)
            if p.discourse_id in seen:
                raise InputError(f"duplicate discourse {p.discourse_id}",
                                 path, line_no)
            seen.add(p.discourse_id)
            predictions.append(p)
    if not predictions:
        raise InputError("no prediction records", path)
    return provenance, predictions


def _resolve_models(args):
    spec = args.models
    if spec is None:
        names = None
    elif isinstance(spec, str):
        names = [n.strip() for n in spec.split(",") if n.strip()]
    else:
        names = [str(n) for n in spec]
    if names is None:
        selected = [m for m in MODEL_IDS
                    if all(getattr(args, dep) is not None
                           for dep in _MODEL_INPUTS[m])]
    elif names == ["all"]:
        selected = list(MODEL_IDS)
    else:
        unknown = sorted(set(names) - set(MODEL_IDS))
        if unknown:
            raise InputError(f"unknown model(s): {', '.join(unknown)}")
        wanted = set(names)
        selected = [m for m in MODEL_IDS if m in wanted]
    for m in selected:
        for dep in _MODEL_INPUTS[m]:
            if getattr(args, dep) is None:
                raise InputError(f"model {m} needs --{dep}")
    return selected


def _log_coverage(name, lexicon, discourses, include_preslot):
    tokens = [t for d in discourses for t in d.preceding_tokens(include_preslot)]
    stat = coverage(lexicon, tokens)
    log.info("%s lexicon covers %d/%d preceding tokens (%.1f%%)",
             name, stat.tokens_matched, stat.tokens_considered,
             100.0 * stat.fraction)


def cmd_calibrate(args):
    _require(args, "out")
    mode = _threshold_mode(args)
    if args.concreteness is None and args.emotion is None:
        raise InputError("nothing to calibrate: give --concreteness and/or --emotion")
    if mode == DATASET_MEDIAN:
        _require(args, "corpus", "pairs")
    include_preslot = bool(args.include_preslot_tokens)

    inputs = {}
    discourses = ()
    if args.corpus is not None:
        pairs = load_pairs(args.pairs) if args.pairs is not None else None
        discourses = load_corpus(args.corpus, pairs)
        inputs["corpus"] = _input_stamp(args.corpus)
        if args.pairs is not None:
            inputs["pairs"] = _input_stamp(args.pairs)

    thresholds = {}
    if args.concreteness is not None:
        conc = load_concreteness(args.concreteness)
        inputs["concreteness"] = _input_stamp(args.concreteness)
        for setting in POS_SETTINGS:
            thresholds[ABSTRACTNESS_MODEL_IDS[setting]] = calibrate_threshold(
                discourses, conc, setting, mode, include_preslot)
    if args.emotion is not None:
        emolex = load_emotion(args.emotion)
        inputs["emotion"] = _input_stamp(args.emotion)
        thresholds["emo"] = calibrate_emotionality(
            discourses, emolex, mode, include_preslot)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    provenance = {"inputs": inputs,
                  "settings": {"threshold_mode": mode,
                               "include_preslot_tokens": include_preslot}}
    path = out / "calibration.json"
    _write_calibration(path, thresholds, provenance)
    log.info("wrote %s", path)
    for model_id in _THRESHOLD_IDS:
        if model_id in thresholds:
            t = thresholds[model_id]
            print(f"{model_id}: {t.value!r} ({t.mode}, {t.setting})")
    return 0


def cmd_predict(args):
    _require(args, "corpus", "pairs", "out")
    mode = _threshold_mode(args)
    include_preslot = bool(args.include_preslot_tokens)
    content_only = bool(args.lcg_content_only)

    pairs = load_pairs(args.pairs)
    discourses = load_corpus(args.corpus, pairs)
    corpus_digest = sha256_file(args.corpus)
    models = _resolve_models(args)
    abstr_models = [m for m in models if m in _SETTING_BY_MODEL]
    need_emo = "emo" in models

    conc = None
    conc_stamp = None
    if abstr_models:
        conc = load_concreteness(args.concreteness)
        conc_stamp = _input_stamp(args.concreteness)
        _log_coverage("concreteness", conc, discourses, include_preslot)
    emolex = None
    emo_stamp = None
    if need_emo:
        emolex = load_emotion(args.emotion)
        emo_stamp = _input_stamp(args.emotion)
        _log_coverage("emotion", emolex, discourses, include_preslot)

    # thresholds come from an earlier calibrate run or are computed here
    thresholds = {}
    calibration_stamp = None
    calibrated_here = False
    needed = abstr_models + (["emo"] if need_emo else [])
    if needed and args.calibration is not None:
        stored = load_calibration(args.calibration)
        calibration_stamp = _input_stamp(args.calibration)
        for m in needed:
            if m not in stored:
                raise InputError(f"calibration file lacks a threshold for {m}",
                                 args.calibration)
            if args.mode_was_explicit and stored[m].mode != mode:
                raise InputError(
                    f"calibration file mode {stored[m].mode} conflicts with "
                    f"the requested {mode}", args.calibration)
            thresholds[m] = stored[m]
    elif needed:
        for m in abstr_models:
            thresholds[m] = calibrate_threshold(
                discourses, conc, _SETTING_BY_MODEL[m], mode, include_preslot)
        if need_emo:
            thresholds["emo"] = calibrate_emotionality(
                discourses, emolex, mode, include_preslot)
        calibrated_here = True

    embeddings = None
    if "lcg" in models:
        embeddings = load_embeddings(args.embeddings, corpus_digest)
    cloze_artifact = None
    if "cloze" in models:
        cloze_artifact = load_cloze(args.cloze, corpus_digest)

    predictions = {m: [] for m in models}
    for d in discourses:
        if "freq" in models:
            predictions["freq"].append(predict_frequency(d, pairs[d.pair_id]))
        for m in abstr_models:
            predictions[m].append(predict_abstractness(
                d, conc, _SETTING_BY_MODEL[m], thresholds[m], include_preslot))
        if need_emo:
            predictions["emo"].append(predict_emotionality(
                d, emolex, thresholds["emo"], include_preslot))
        if "lcg" in models:
            predictions["lcg"].append(predict_lcg(
                d, embeddings, content_only, include_preslot))
        if "cloze" in models:
            scores = cloze_artifact.scores_for(d.discourse_id)
            if scores is None:
                raise InputError(
                    f"no cloze scores for discourse {d.discourse_id}", args.cloze)
            predictions["cloze"].append(predict_cloze(d, scores))

    out = Path(args.out)
    predictions_dir = out / "predictions"
    predictions_dir.mkdir(parents=True, exist_ok=True)
    inputs_common = {"corpus": _input_stamp(args.corpus),
                     "pairs": _input_stamp(args.pairs)}

    if calibrated_here and thresholds:
        inputs = dict(inputs_common)
        if conc_stamp is not None:
            inputs["concreteness"] = conc_stamp
        if emo_stamp is not None:
            inputs["emotion"] = emo_stamp
        provenance = {"inputs": inputs,
                      "settings": {"threshold_mode": mode,
                                   "include_preslot_tokens": include_preslot}}
        _write_calibration(out / "calibration.json", thresholds, provenance)
        log.info("wrote %s", out / "calibration.json")

    for m in models:
        inputs = dict(inputs_common)
        settings = {}
        if m in _SETTING_BY_MODEL:
            inputs["concreteness"] = conc_stamp
            if calibration_stamp is not None:
                inputs["calibration"] = calibration_stamp
            settings = {"pos_setting": _SETTING_BY_MODEL[m],
                        "threshold": thresholds[m].value,
                        "threshold_mode": thresholds[m].mode,
                        "include_preslot_tokens": include_preslot}
        elif m == "emo":
            inputs["emotion"] = emo_stamp
            if calibration_stamp is not None:
                inputs["calibration"] = calibration_stamp
            settings = {"threshold": thresholds["emo"].value,
                        "threshold_mode": thresholds["emo"].mode,
                        "include_preslot_tokens": include_preslot}
        elif m == "lcg":
            inputs["embeddings"] = _input_stamp(args.embeddings)
            settings = {"content_only": content_only,
                        "include_preslot_tokens": include_preslot,
                        "embedding_model": embeddings.manifest.model,
                        "embedding_version": embeddings.manifest.version}
        elif m == "cloze":
            inputs["cloze"] = _input_stamp(args.cloze)
            settings = {"cloze_model": cloze_artifact.manifest.model,
                        "cloze_version": cloze_artifact.manifest.version}
        path = predictions_dir / f"{m}.jsonl"
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            header = {"kind": "provenance", "model_id": m,
                      "inputs": inputs, "settings": settings}
            handle.write(json.dumps(header, ensure_ascii=False) + "\n")
            for p in predictions[m]:
                handle.write(json.dumps(_prediction_to_obj(p),
                                        ensure_ascii=False) + "\n")
        log.info("wrote %s", path)

    for m in models:
        abstained = sum(1 for p in predictions[m] if p.abstained)
        print(f"{m}: {len(predictions[m]) - abstained} decided, "
              f"{abstained} abstained")
    return 0


def cmd_evaluate(args):
    _require(args, "corpus", "pairs", "out")
    pairs = load_pairs(args.pairs)
    discourses = load_corpus(args.corpus, pairs)
    corpus_digest = sha256_file(args.corpus)
    out = Path(args.out)
    predictions_dir = (Path(args.predictions)
                       if getattr(args, "predictions", None) is not None
                       else out / "predictions")
    if not predictions_dir.is_dir():
        raise InputError(f"no prediction directory at {predictions_dir}")
    files = sorted(predictions_dir.glob("*.jsonl"))
    if not files:
        raise InputError(f"no prediction files in {predictions_dir}")

    predictions_by_model = {}
    prediction_stamps = {}
    for path in files:
        model_id = path.stem
        if model_id not in MODEL_IDS:
            raise InputError(f"unrecognized prediction file name {path.name}")
        provenance, records = load_predictions(path, expected_model=model_id)
        if provenance is not None:
            stamp = provenance.get("inputs", {}).get("corpus", "")
            digest = stamp.rsplit(" ", 1)[-1]
            if digest.startswith("sha256:") and digest != corpus_digest:
                raise InputError(
                    f"predictions were made on a different corpus "
                    f"({digest} vs {corpus_digest})", str(path))
        predictions_by_model[model_id] = records
        prediction_stamps[model_id] = _input_stamp(path)

    agreement = float(args.agreement)
    gold_original = original_gold_labels(discourses)
    gold_annotated = None
    annotations_stamp = None
    if args.annotations is not None:
        records = load_annotations(args.annotations, discourses)
        gold_annotated = filter_by_agreement(records, agreement)
        annotations_stamp = _input_stamp(args.annotations)
        log.info("agreement >= %s keeps %d of %d annotated discourses",
                 agreement, len(gold_annotated), len(records))

    restrict = not bool(args.all_discourse_proportions)
    report = build_report(predictions_by_model, discourses, gold_original,
                          gold_annotated, restrict_to_annotated=restrict)

    inputs = {"corpus": _input_stamp(args.corpus),
              "pairs": _input_stamp(args.pairs)}
    if annotations_stamp is not None:
        inputs["annotations"] = annotations_stamp
    for model_id in canonical_model_order(list(predictions_by_model)):
        inputs[f"predictions/{model_id}"] = prediction_stamps[model_id]
    provenance = {"inputs": inputs,
                  "settings": {"agreement": agreement,
                               "proportions": ("annotated" if restrict
                                               else "all")}}

    out.mkdir(parents=True, exist_ok=True)
    write_report_json(report, out / "report.json", provenance)
    write_report_text(report, out / "report.txt", provenance)
    log.info("wrote %s and %s", out / "report.json", out / "report.txt")
    if report.proportions is not None:
        scatter_dir = out / "scatter"
        scatter_dir.mkdir(parents=True, exist_ok=True)
        for path in write_scatter_files(report, scatter_dir, provenance):
            log.info("wrote %s", path)
    if args.figures:
        for path in figures.render_all(report, out / "figures"):
            log.info("wrote %s", path)

    sys.stdout.write(render_report_text(report))
    return 0


def cmd_run(args):
    status = cmd_predict(args)
    if status:
        return status
    args.predictions = None  # evaluate what predict just wrote under --out
    return cmd_evaluate(args)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        apply_config(args)
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return 2
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
