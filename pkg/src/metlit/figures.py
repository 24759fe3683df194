"""Figure rendering for evaluation reports.

Everything here consumes a finished EvaluationReport; no statistics are
computed in this module.  PNGs are written with empty metadata so reruns
produce identical bytes.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# identical bytes across reruns: no creation-time header in the PNG
_SAVE_OPTS = {"dpi": 150, "metadata": {"Software": None}}


def _save(fig, path):
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path


def accuracy_bars(report, path):
    models = list(report.model_ids)
    positions = range(len(models))
    fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(models)), 4))
    width = 0.38 if report.accuracy_annotated is not None else 0.6
    orig = [report.accuracy_original[m] for m in models]
    if report.accuracy_annotated is not None:
        anno = [report.accuracy_annotated[m] for m in models]
        ax.bar([p - width / 2 for p in positions], orig, width,
               label="original usage", color="#4878d0")
        ax.bar([p + width / 2 for p in positions], anno, width,
               label="annotators", color="#ee854a")
        ax.legend(frameon=False)
    else:
        ax.bar(list(positions), orig, width, color="#4878d0")
    ax.axhline(0.5, color="grey", linewidth=0.8, linestyle="--")
    ax.set_xticks(list(positions))
    ax.set_xticklabels(models, rotation=30, ha="right")
    ax.set_ylim(0, 1)
    ax.set_ylabel("accuracy")
    fig.tight_layout()
    return _save(fig, path)


def overlap_heatmap(report, path):
    matrix = report.overlap
    n = len(matrix.model_ids)
    fig, ax = plt.subplots(figsize=(1 + 0.7 * n, 1 + 0.7 * n))
    image = ax.imshow([list(row) for row in matrix.cells],
                      vmin=0, vmax=1, cmap="viridis")
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xticklabels(matrix.model_ids, rotation=45, ha="right")
    ax.set_yticklabels(matrix.model_ids)
    for i in range(n):
        for j in range(n):
            value = matrix.cells[i][j]
            ax.text(j, i, f"{value:.2f}", ha="center", va="center",
                    color="white" if value < 0.6 else "black", fontsize=8)
    fig.colorbar(image, ax=ax, shrink=0.8, label="overlap")
    fig.tight_layout()
    return _save(fig, path)


def metaphor_rate_bars(report, path):
    models = list(report.model_ids)
    fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(models)), 4))
    ax.bar(range(len(models)),
           [report.metaphor_rate[m] for m in models], 0.6, color="#6acc64")
    ax.set_xticks(range(len(models)))
    ax.set_xticklabels(models, rotation=30, ha="right")
    ax.set_ylim(0, 1)
    ax.set_ylabel("fraction predicted metaphorical")
    fig.tight_layout()
    return _save(fig, path)


def proportion_scatter(report, model_id, path):
    """Human vs model per-pair metaphor fractions with the fitted line."""
    table = report.proportions[model_id]
    regression = report.regressions[model_id]
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.scatter([p.human_fraction for p in table],
               [p.model_fraction for p in table],
               s=18, color="#4878d0", alpha=0.8)
    ax.plot([0, 1], [0, 1], color="grey", linewidth=0.8, linestyle="--")
    if regression is not None:
        xs = [0.0, 1.0]
        ax.plot(xs, [regression.intercept + regression.slope * x for x in xs],
                color="#d65f5f",
                label=f"y = {regression.slope:.2f}x + {regression.intercept:.2f}")
        ax.legend(frameon=False, loc="upper left")
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(-0.05, 1.05)
    ax.set_xlabel("human metaphor fraction")
    ax.set_ylabel("model metaphor fraction")
    ax.set_title(model_id)
    fig.tight_layout()
    return _save(fig, path)


def render_all(report, directory):
    """Write every figure the report supports; returns the paths written."""
    directory.mkdir(parents=True, exist_ok=True)
    written = [
        accuracy_bars(report, directory / "accuracy.png"),
        metaphor_rate_bars(report, directory / "metaphor_rate.png"),
    ]
    if len(report.model_ids) > 1:
        written.append(overlap_heatmap(report, directory / "overlap.png"))
    if report.proportions is not None:
        for model_id in report.model_ids:
            if report.proportions[model_id]:
                written.append(proportion_scatter(
                    report, model_id, directory / f"scatter_{model_id}.png"))
    return written
