from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

from src.evolution import GenerationReport


def reports_frame(reports: Sequence[GenerationReport]) -> pd.DataFrame:
    rows = [
        {"generation": r.generation_index, "best": r.best_score, "median": r.median_score, "mean": r.mean_score}
        for r in reports
    ]
    return pd.DataFrame(rows).melt(id_vars="generation", var_name="statistic", value_name="cv_score")


def plot_fitness_curve(
    reports: Sequence[GenerationReport],
    title: str,
    out_png: str,
    out_svg: Optional[str] = None,
):
    sns.set(style="whitegrid", context="talk")
    df = reports_frame(reports)

    plt.figure(figsize=(10, 6))
    ax = sns.lineplot(data=df, x="generation", y="cv_score", hue="statistic", marker="o")
    ax.set_title(title, fontsize=14)
    ax.set_ylim(0.0, 1.02)
    ax.set_xlabel("Generation")
    ax.set_ylabel("CV balanced accuracy")
    ax.set_xticks(sorted(df["generation"].unique()))
    plt.tight_layout()
    plt.savefig(out_png, dpi=150)
    if out_svg:
        plt.savefig(out_svg)
    plt.close()
