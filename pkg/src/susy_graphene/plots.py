"""Render the computed quantities to PNG files alongside the delimited output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .chain import field_k, potential_k, schrodinger_level
from .runner import RunResult

_LEVEL_COLORS = ("tab:blue", "tab:red", "tab:green", "tab:purple",
                 "tab:orange", "tab:brown")


def render(result: RunResult, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    xs = result.config.grid.xs
    chain = result.chain
    written: list[Path] = []

    if "potential" in result.fields:
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        ax.plot(xs, result.fields["potential"].values, "-", color="black",
                label="deformed")
        if chain.depth >= 1:
            eps = chain.steps[-1].epsilon
            undeformed = [potential_k(chain.parent, x) - eps for x in xs]
            ax.plot(xs, undeformed, "--", color="gray", label="undeformed")
        for n in sorted(set(result.config.levels)):
            try:
                energy = schrodinger_level(chain, n)
            except ValueError:
                continue
            ax.axhline(energy, lw=0.6, ls=":", color="gray")
        vmax = np.percentile(result.fields["potential"].values, 98)
        ax.set_ylim(top=min(vmax, ax.get_ylim()[1]))
        ax.set_xlabel("x")
        ax.set_ylabel("V(x)")
        ax.legend(frameon=False)
        fig.tight_layout()
        path = out / "potential.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    if "field" in result.fields:
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        ax.plot(xs, result.fields["field"].values, "-", color="tab:blue",
                label="deformed")
        if chain.depth >= 1:
            ax.plot(xs, [field_k(chain.parent, x) for x in xs], "--",
                    color="gray", label="undeformed")
        ax.set_xlabel("x")
        ax.set_ylabel("B(x)")
        ax.legend(frameon=False)
        fig.tight_layout()
        path = out / "field.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    for kind, ylabel in (("density", "probability density"),
                         ("current", "current density")):
        cols = result.columns.get(kind)
        if not cols:
            continue
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for i, n in enumerate(sorted(cols)):
            label = "ground state" if n == 0 else f"level {n}"
            ax.plot(xs, cols[n], color=_LEVEL_COLORS[i % len(_LEVEL_COLORS)],
                    label=label)
        ax.set_xlabel("x")
        ax.set_ylabel(ylabel)
        ax.legend(frameon=False)
        fig.tight_layout()
        path = out / f"{kind}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    return written
