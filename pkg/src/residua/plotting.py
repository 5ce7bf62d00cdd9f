"""Report figures: Hilbert functions and Betti tables, written to files."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "figure.figsize": (5.0, 3.2),
    "savefig.dpi": 150,
}


def hilbert_function_plot(functions, path, title="Hilbert functions"):
    """Bar-style plot of H(M, n) for each labelled module; ``functions`` maps label -> {n: value}."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        width = 0.8 / max(len(functions), 1)
        nonzero = [n for values in functions.values() for n, v in values.items() if v]
        start = min(nonzero, default=0)
        for i, (label, values) in enumerate(sorted(functions.items())):
            ns = [n for n in sorted(values) if n >= start]
            ax.bar([n + i * width for n in ns], [values[n] for n in ns], width=width, label=label)
        ax.set_xlabel("internal degree n")
        ax.set_ylabel("H(n)")
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def betti_plot(betti, path, title="Betti table"):
    """Heat map of a Betti table: rows j, columns i, cell beta_{i, i+j}."""
    rows = betti.rows()
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        if not rows:
            ax.text(0.5, 0.5, "zero module", ha="center", va="center")
            ax.set_axis_off()
        else:
            shifts = list(range(min(rows), max(rows) + 1))
            width = max(len(r) for r in rows.values())
            grid = [[rows.get(j, [])[i] if i < len(rows.get(j, [])) else 0 for i in range(width)]
                    for j in shifts]
            ax.imshow(grid, cmap="Greys", aspect="auto", vmin=0)
            for a, j in enumerate(shifts):
                for i in range(width):
                    v = grid[a][i]
                    if v:
                        ax.text(i, a, str(v), ha="center", va="center",
                                color="white" if v > max(max(g) for g in grid) / 2 else "black")
            ax.set_xticks(range(width))
            ax.set_yticks(range(len(shifts)), [str(j) for j in shifts])
            ax.set_xlabel("homological degree i")
            ax.set_ylabel("row j")
        ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def write_figures(directory, functions, betti, invariants):
    """Hilbert-function and Betti figures plus a TSV of invariants; returns the written paths."""
    os.makedirs(directory, exist_ok=True)
    paths = [
        hilbert_function_plot(functions, os.path.join(directory, "hilbert_function.png")),
        betti_plot(betti, os.path.join(directory, "betti_table.png"), "Betti table of R/J"),
    ]
    tsv = os.path.join(directory, "invariants.tsv")
    with open(tsv, "w") as fh:
        fh.write("invariant\tvalue\n")
        for key in sorted(invariants):
            fh.write(f"{key}\t{invariants[key]}\n")
    paths.append(tsv)
    return paths
