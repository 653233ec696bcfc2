"""Run artifacts: the regret CSV, its SVG figure and the YAML manifest.

All three are byte-for-byte reproducible for the same input.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402
import yaml  # noqa: E402
from loguru import logger  # noqa: E402

from ..errors import DimensionError, EmptyInputError  # noqa: E402
from ..regret import SUMMARY_COLUMNS, RegretTable  # noqa: E402

SUMMARY_DTYPES = {
    "algorithm": str,
    "round": "int64",
    "mean_cum_regret": "float64",
    "std_cum_regret": "float64",
    "n_instances": "int64",
}
SVG_HASH_SALT = "banditselect"


def write_csv(table: RegretTable, path: str | Path) -> Path:
    """Write the per-round summary, sorted by (algorithm, round), floats with 17 significant digits.

    Raises:
        EmptyInputError: If the table is empty; no file is created.
        OSError: If ``path`` cannot be written.
    """
    if table.is_empty:
        raise EmptyInputError("refusing to write an empty regret table")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    summary = table.summary.sort_values(["algorithm", "round"], kind="mergesort")[SUMMARY_COLUMNS]
    summary.to_csv(path, index=False, float_format="%.17g", lineterminator="\n", encoding="utf-8")
    logger.info(f"✅ wrote {len(summary)} rows to {path}")
    return path


def read_csv(path: str | Path) -> RegretTable:
    """Read a summary CSV written by :func:`write_csv` back into a summary-only table."""
    summary = pd.read_csv(path, dtype=SUMMARY_DTYPES, encoding="utf-8")
    if list(summary.columns) != SUMMARY_COLUMNS:
        raise DimensionError(f"{path} has columns {list(summary.columns)}, expected {SUMMARY_COLUMNS}")
    return RegretTable(summary)


def emit_plot(table: RegretTable, path: str | Path, title: str | None = None) -> Path:
    """Plot mean cumulative regret per algorithm with a shaded one-std band."""
    if table.is_empty:
        raise EmptyInputError("nothing to plot in an empty regret table")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2), constrained_layout=True)
        for algorithm in table.algorithms:
            curve = table.curve(algorithm)
            rounds = curve["round"].to_numpy()
            mean = curve["mean_cum_regret"].to_numpy()
            std = curve["std_cum_regret"].to_numpy()
            ax.plot(rounds, mean, label=algorithm)
            ax.fill_between(rounds, mean - std, mean + std, alpha=0.2)
        ax.set_xlabel("Round")
        ax.set_ylabel("Cumulative regret")
        if title:
            ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

    logger.info(f"✅ wrote figure {path}")
    return path


def write_manifest(manifest: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        yaml.safe_dump(manifest, f, sort_keys=False, allow_unicode=True)
    return path
