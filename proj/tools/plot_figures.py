"""Render the tab-separated figure files written by daaca_cli as PNGs.

usage: python tools/plot_figures.py RESULTS_DIR
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def render(path: Path) -> Path:
    df = pd.read_csv(path, sep="\t")
    first = df.columns[0]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if first == "algorithm":
        df.set_index(first).T.plot.bar(ax=ax)
        ax.set_xlabel("network")
    else:
        df.set_index(first).plot(ax=ax, marker="o")
        ax.set_xlabel(first)
    ax.set_title(path.stem)
    ax.legend(fontsize=7, ncol=3)
    fig.tight_layout()
    out = path.with_suffix(".png")
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def main() -> int:
    if len(sys.argv) != 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    files = sorted(Path(sys.argv[1]).glob("*.dat"))
    if not files:
        print(f"no .dat files in {sys.argv[1]}", file=sys.stderr)
        return 1
    for f in files:
        print(render(f))
    return 0


if __name__ == "__main__":
    sys.exit(main())
