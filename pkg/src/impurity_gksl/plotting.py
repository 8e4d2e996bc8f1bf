"""Figure rendering for the CLI report path.

Figures go to files next to the CSV output; nothing is shown interactively.
``plot_script`` builds a standalone script that redraws a figure from the
CSV files alone.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .regimes import RegimeLabel  # noqa: E402

__all__ = ["plot_coherence", "plot_regime_diagram", "plot_script"]

REGIME_COLORS = {
    RegimeLabel.GlobalOnly: "#4a6fd1",
    RegimeLabel.LocalOnly: "#d1524a",
    RegimeLabel.Neither: "#f2d24b",
    RegimeLabel.Both: "#8b5fbf",
}
_REGIME_ORDER = (RegimeLabel.GlobalOnly, RegimeLabel.LocalOnly, RegimeLabel.Neither, RegimeLabel.Both)


def _figure(width=6.0, aspect=1.5):
    return plt.subplots(figsize=(width, width / aspect), dpi=150)


def plot_coherence(curves, path, gamma=1.0, title=None):
    """Overlay |Lambda(t)| curves.

    ``curves`` is a list of ``(label, times, values, style)`` with ``style``
    a matplotlib format string (may be empty).
    """
    fig, ax = _figure()
    for label, t, y, style in curves:
        ax.plot(np.asarray(t) * gamma, y, style or "-", label=label, lw=1.2)
    ax.set_xlabel(r"$\gamma t$")
    ax.set_ylabel(r"$|\Lambda(t)|$")
    ax.set_ylim(bottom=0)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def plot_regime_diagram(diagram, path, title=None):
    codes = np.array(
        [[_REGIME_ORDER.index(lab) for lab in row] for row in diagram.labels], dtype=float
    )
    cmap = ListedColormap([REGIME_COLORS[lab] for lab in _REGIME_ORDER])
    fig, ax = _figure(aspect=1.25)
    ax.pcolormesh(diagram.v, diagram.gamma, codes.T, cmap=cmap, vmin=-0.5, vmax=3.5, shading="nearest")
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=REGIME_COLORS[lab]) for lab in _REGIME_ORDER
    ]
    ax.legend(handles, [lab.name for lab in _REGIME_ORDER], loc="upper left", fontsize=8, framealpha=0.8)
    ax.set_xlabel(r"$v$")
    ax.set_ylabel(r"$\gamma$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


_COHERENCE_SCRIPT = '''\
"""Redraw |Lambda(t)| from trajectory CSV files written by impurity-gksl."""
import csv
import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
FILES = {files!r}

fig, ax = plt.subplots(figsize=(6, 4), dpi=150)
for name in FILES:
    with open(HERE / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    t = [float(r["t"]) for r in rows]
    c0 = float(rows[0]["abs_coh_num"]) or 1.0
    ax.plot(t, [float(r["abs_coh_num"]) / c0 for r in rows], label=name)
    if rows[0]["abs_coh_ana"]:
        ax.plot(t, [float(r["abs_coh_ana"]) / c0 for r in rows], ":", color="k", lw=0.8)
ax.set_xlabel("t")
ax.set_ylabel("|Lambda(t)|")
ax.legend(frameon=False, fontsize=7)
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else str(HERE / {png!r})
fig.savefig(out)
'''

_DIAGRAM_SCRIPT = '''\
"""Redraw the regime diagram from the CSV written by impurity-gksl."""
import csv
import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
COLORS = {colors!r}

with open(HERE / {csv_name!r}, newline="") as fh:
    rows = list(csv.DictReader(fh))
fig, ax = plt.subplots(figsize=(6, 4.8), dpi=150)
for label, color in COLORS.items():
    pts = [(float(r["v"]), float(r["gamma"])) for r in rows if r["label"] == label]
    if pts:
        ax.scatter(*zip(*pts), s=6, marker="s", color=color, label=label)
ax.set_xlabel("v")
ax.set_ylabel("gamma")
ax.legend(fontsize=7)
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else str(HERE / {png!r})
fig.savefig(out)
'''


def plot_script(kind, **kw):
    """Source of a standalone plotting script: ``kind`` is 'coherence' or 'diagram'."""
    if kind == "coherence":
        return _COHERENCE_SCRIPT.format(files=list(kw["files"]), png=kw.get("png", "coherence_from_script.png"))
    if kind == "diagram":
        colors = {lab.value: REGIME_COLORS[lab] for lab in _REGIME_ORDER}
        return _DIAGRAM_SCRIPT.format(colors=colors, csv_name=kw["csv_name"], png=kw.get("png", "diagram_from_script.png"))
    raise ValueError(f"unknown plot kind {kind!r}")
