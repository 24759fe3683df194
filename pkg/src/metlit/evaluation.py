"""Evaluation statistics: accuracies, overlaps, rates, and proportions.

Accuracy is measured against two gold standards (original corpus usage and
annotator preference at an agreement threshold).  Abstentions are excluded
from every denominator and reported as counts.  The report also holds the
inter-model overlap matrix, per-model metaphor-prediction rates, and the
per-pair human-vs-model proportion tables with a least-squares line, which
the scatter files and figures reproduce.
"""

import json
from dataclasses import dataclass

from .corpus import METAPHORICAL
from .predictors import MODEL_IDS


@dataclass(frozen=True)
class OverlapMatrix:
    model_ids: tuple
    cells: tuple  # tuple of tuples, fractions in [0, 1]


@dataclass(frozen=True)
class PairProportion:
    pair_id: str
    model_fraction: float
    human_fraction: float


@dataclass(frozen=True)
class RegressionLine:
    slope: float
    intercept: float
    n_points: int


@dataclass(frozen=True)
class EvaluationReport:
    model_ids: tuple
    accuracy_original: dict       # model_id -> fraction
    accuracy_annotated: dict | None
    metaphor_rate: dict           # model_id -> fraction
    abstain_counts: dict          # model_id -> int
    evaluated_counts: dict        # model_id -> {gold source -> int}
    overlap: OverlapMatrix
    proportions: dict | None      # model_id -> list of PairProportion
    regressions: dict | None      # model_id -> RegressionLine or None


def _gold_map(gold_labels):
    gold = {}
    for label in gold_labels:
        if label.discourse_id in gold:
            raise ValueError(f"duplicate gold label for {label.discourse_id}")
        gold[label.discourse_id] = label.label
    return gold


def _choice_map(predictions):
    choices = {}
    for p in predictions:
        if p.discourse_id in choices:
            raise ValueError(
                f"duplicate prediction for {p.discourse_id} ({p.model_id})")
        choices[p.discourse_id] = p.choice
    return choices


def accuracy(predictions, gold_labels):
    """Fraction of non-abstaining predictions matching the gold label."""
    gold = gold_labels if isinstance(gold_labels, dict) else _gold_map(gold_labels)
    correct = 0
    evaluated = 0
    for p in predictions:
        if p.abstained or p.discourse_id not in gold:
            continue
        evaluated += 1
        if p.choice == gold[p.discourse_id]:
            correct += 1
    if evaluated == 0:
        raise ValueError("no prediction shares a discourse_id with the gold set")
    return correct / evaluated


def overlap(predictions_a, predictions_b):
    """Fraction of shared non-abstaining discourses with the same choice."""
    choices_a = _choice_map(predictions_a)
    choices_b = _choice_map(predictions_b)
    shared = [i for i in choices_a
              if i in choices_b
              and choices_a[i] is not None and choices_b[i] is not None]
    if not shared:
        raise ValueError("models share no non-abstaining discourse")
    agree = sum(1 for i in shared if choices_a[i] == choices_b[i])
    return agree / len(shared)


def overlap_matrix(predictions_by_model, model_ids):
    """Symmetric overlap matrix with an exact unit diagonal."""
    n = len(model_ids)
    cells = [[1.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            value = overlap(predictions_by_model[model_ids[i]],
                            predictions_by_model[model_ids[j]])
            cells[i][j] = value
            cells[j][i] = value
    return OverlapMatrix(model_ids=tuple(model_ids),
                         cells=tuple(tuple(row) for row in cells))


def metaphor_rate(predictions):
    """Fraction of non-abstaining predictions choosing the metaphorical variant."""
    decided = [p for p in predictions if not p.abstained]
    if not decided:
        raise ValueError("no non-abstaining predictions")
    return sum(1 for p in decided if p.choice == METAPHORICAL) / len(decided)


def per_pair_proportions(predictions, corpus, gold_annotated,
                         restrict_to_annotated=True):
    """Per-pair metaphor proportions: model predictions vs annotator gold.

    The human fraction for a pair is the share of its annotated-gold
    discourses labeled metaphorical.  The model fraction is computed over
    that pair's non-abstaining predictions, by default restricted to the
    annotated discourses (the same set the human side uses); pass
    ``restrict_to_annotated=False`` to use every evaluated discourse.
    Pairs without either side are skipped.
    """
    pair_of = {d.discourse_id: d.pair_id for d in corpus}
    gold = _gold_map(gold_annotated)
    human = {}
    for discourse_id, label in gold.items():
        if discourse_id not in pair_of:
            raise ValueError(f"gold label for unknown discourse {discourse_id}")
        counts = human.setdefault(pair_of[discourse_id], [0, 0])
        counts[0] += 1
        if label == METAPHORICAL:
            counts[1] += 1
    model = {}
    for p in predictions:
        if p.abstained:
            continue
        if p.discourse_id not in pair_of:
            raise ValueError(f"prediction for unknown discourse {p.discourse_id}")
        if restrict_to_annotated and p.discourse_id not in gold:
            continue
        counts = model.setdefault(pair_of[p.discourse_id], [0, 0])
        counts[0] += 1
        if p.choice == METAPHORICAL:
            counts[1] += 1
    proportions = []
    for pair_id in sorted(set(human) & set(model)):
        h_total, h_met = human[pair_id]
        m_total, m_met = model[pair_id]
        proportions.append(PairProportion(
            pair_id=pair_id,
            model_fraction=m_met / m_total,
            human_fraction=h_met / h_total,
        ))
    return proportions


def fit_regression(points):
    """Ordinary least squares line through (x, y) points."""
    points = list(points)
    if len(points) < 2:
        raise ValueError("regression needs at least two points")
    n = len(points)
    mean_x = sum(x for x, _ in points) / n
    mean_y = sum(y for _, y in points) / n
    sxx = sum((x - mean_x) ** 2 for x, _ in points)
    if sxx == 0.0:
        raise ValueError("regression undefined: no variance in x")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in points)
    slope = sxy / sxx
    return RegressionLine(slope=slope, intercept=mean_y - slope * mean_x,
                          n_points=n)


def canonical_model_order(model_ids):
    known = [m for m in MODEL_IDS if m in model_ids]
    unknown = sorted(set(model_ids) - set(MODEL_IDS))
    if unknown:
        raise ValueError(f"unknown model id(s): {', '.join(unknown)}")
    return tuple(known)


def build_report(predictions_by_model, corpus, gold_original,
                 gold_annotated=None, restrict_to_annotated=True):
    """Assemble the full evaluation report; deterministic for fixed inputs."""
    if not predictions_by_model:
        raise ValueError("no predictions to report on")
    model_ids = canonical_model_order(list(predictions_by_model))
    known_ids = {d.discourse_id for d in corpus}
    for model_id in model_ids:
        for p in predictions_by_model[model_id]:
            if p.discourse_id not in known_ids:
                raise ValueError(
                    f"{model_id} prediction references unknown discourse "
                    f"{p.discourse_id}")

    gold_orig = _gold_map(gold_original)
    gold_anno = _gold_map(gold_annotated) if gold_annotated else None

    accuracy_original = {}
    accuracy_annotated = {} if gold_anno else None
    rates = {}
    abstains = {}
    evaluated = {}
    for model_id in model_ids:
        predictions = predictions_by_model[model_id]
        decided = [p for p in predictions if not p.abstained]
        abstains[model_id] = len(predictions) - len(decided)
        accuracy_original[model_id] = accuracy(predictions, gold_orig)
        counts = {"original": sum(1 for p in decided if p.discourse_id in gold_orig)}
        if gold_anno is not None:
            accuracy_annotated[model_id] = accuracy(predictions, gold_anno)
            counts["annotated"] = sum(1 for p in decided if p.discourse_id in gold_anno)
        evaluated[model_id] = counts
        rates[model_id] = metaphor_rate(predictions)

    proportions = None
    regressions = None
    if gold_annotated:
        proportions = {}
        regressions = {}
        for model_id in model_ids:
            table = per_pair_proportions(
                predictions_by_model[model_id], corpus, gold_annotated,
                restrict_to_annotated=restrict_to_annotated)
            proportions[model_id] = table
            points = [(p.human_fraction, p.model_fraction) for p in table]
            try:
                regressions[model_id] = fit_regression(points)
            except ValueError:
                regressions[model_id] = None

    return EvaluationReport(
        model_ids=model_ids,
        accuracy_original=accuracy_original,
        accuracy_annotated=accuracy_annotated,
        metaphor_rate=rates,
        abstain_counts=abstains,
        evaluated_counts=evaluated,
        overlap=overlap_matrix(predictions_by_model, model_ids),
        proportions=proportions,
        regressions=regressions,
    )


def report_to_dict(report, provenance=None):
    """Plain-dict form of the report with a stable key order."""
    out = {}
    if provenance is not None:
        out["provenance"] = provenance
    out["models"] = list(report.model_ids)
    out["accuracy_original"] = {m: report.accuracy_original[m]
                                for m in report.model_ids}
    if report.accuracy_annotated is not None:
        out["accuracy_annotated"] = {m: report.accuracy_annotated[m]
                                     for m in report.model_ids}
    out["metaphor_rate"] = {m: report.metaphor_rate[m] for m in report.model_ids}
    out["abstain_counts"] = {m: report.abstain_counts[m] for m in report.model_ids}
    out["evaluated_counts"] = {m: report.evaluated_counts[m]
                               for m in report.model_ids}
    out["overlap"] = {
        "models": list(report.overlap.model_ids),
        "cells": [list(row) for row in report.overlap.cells],
    }
    if report.proportions is not None:
        out["proportions"] = {
            m: [{"pair_id": p.pair_id,
                 "human_fraction": p.human_fraction,
                 "model_fraction": p.model_fraction}
                for p in report.proportions[m]]
            for m in report.model_ids
        }
        out["regressions"] = {
            m: (None if report.regressions[m] is None else
                {"slope": report.regressions[m].slope,
                 "intercept": report.regressions[m].intercept,
                 "n_points": report.regressions[m].n_points})
            for m in report.model_ids
        }
    return out


def write_report_json(report, path, provenance=None):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(report_to_dict(report, provenance), handle,
                  indent=2, ensure_ascii=False)
        handle.write("\n")


def render_report_text(report, provenance=None):
    """Human-readable report; the same numbers the JSON carries."""
    lines = ["evaluation report", "================="]
    if provenance:
        for key in sorted(provenance.get("inputs", {})):
            lines.append(f"input {key}: {provenance['inputs'][key]}")
        lines.append("")
    header = f"{'model':<10} {'acc.orig':>9}"
    has_anno = report.accuracy_annotated is not None
    if has_anno:
        header += f" {'acc.anno':>9}"
    header += f" {'met.rate':>9} {'abstain':>8}"
    lines.append(header)
    for m in report.model_ids:
        row = f"{m:<10} {report.accuracy_original[m]:>9.4f}"
        if has_anno:
            row += f" {report.accuracy_annotated[m]:>9.4f}"
        row += f" {report.metaphor_rate[m]:>9.4f} {report.abstain_counts[m]:>8d}"
        lines.append(row)
    lines.append("")
    lines.append("overlap matrix (fraction of shared decisions)")
    label_width = max(len(m) for m in report.overlap.model_ids)
    lines.append(" " * (label_width + 1)
                 + " ".join(f"{m:>9}" for m in report.overlap.model_ids))
    for m, row in zip(report.overlap.model_ids, report.overlap.cells):
        lines.append(f"{m:<{label_width}} "
                     + " ".join(f"{value:>9.4f}" for value in row))
    if report.proportions is not None:
        lines.append("")
        lines.append("per-pair metaphor proportions (human vs model)")
        for m in report.model_ids:
            regression = report.regressions[m]
            if regression is None:
                fit = "regression undefined"
            else:
                fit = (f"fit slope={regression.slope:.4f} "
                       f"intercept={regression.intercept:.4f} "
                       f"n={regression.n_points}")
            lines.append(f"  {m}: {fit}")
            for p in report.proportions[m]:
                lines.append(f"    {p.pair_id}: human={p.human_fraction:.4f} "
                             f"model={p.model_fraction:.4f}")
    lines.append("")
    return "\n".join(lines)


def write_report_text(report, path, provenance=None):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(render_report_text(report, provenance))


def write_scatter_files(report, directory, provenance=None):
    """One delimited scatter file per model: human vs model metaphor fractions."""
    if report.proportions is None:
        return []
    written = []
    for m in report.model_ids:
        path = directory / f"{m}.csv"
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            if provenance:
                for key in sorted(provenance.get("inputs", {})):
                    handle.write(f"# input {key}: {provenance['inputs'][key]}\n")
                handle.write(f"# model: {m}\n")
            handle.write("human_fraction,model_fraction,pair_id\n")
            for p in report.proportions[m]:
                handle.write(f"{p.human_fraction:.6f},{p.model_fraction:.6f},"
                             f"{p.pair_id}\n")
        written.append(path)
    return written
