"""Figure rendering for sweep results.

Renders the same aggregates that go to CSV: acceptance ratio and
normalized bound per swept value, plus a tuples-vs-paths scatter for
state-space reports. Files only; no interactive backends.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .experiments import ALL_BOUNDS, SweepRow  # noqa: E402

_STYLES = {
    "old_b": dict(color="tab:gray", marker="s", label="OLD-B"),
    "new_b_1": dict(color="tab:blue", marker="o", label="NEW-B-1"),
    "new_b_2": dict(color="tab:red", marker="^", label="NEW-B-2"),
}


def plot_sweep(rows: list[SweepRow], out_prefix: str) -> list[str]:
    """Write acceptance / normalized-bound / analysis-time figures.

    Returns the list of files written (skips figures with no data).
    """
    if not rows:
        return []
    written = []
    xs = [row.value for row in rows]
    parameter = rows[0].parameter

    panels = [
        ("acceptance", "Acceptance ratio", lambda r, b: r.acceptance.get(b)),
        ("normalized", "Normalized bound (%)", lambda r, b: r.normalized.get(b)),
        ("time", "Mean analysis time (ns)", lambda r, b: r.mean_time_ns.get(b)),
    ]
    for suffix, ylabel, extract in panels:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        any_data = False
        for b in ALL_BOUNDS:
            ys = [extract(r, b) for r in rows]
            if all(y is None for y in ys):
                continue
            any_data = True
            ax.plot(xs, ys, **_STYLES[b])
        if not any_data:
            plt.close(fig)
            continue
        ax.set_xlabel(parameter)
        ax.set_ylabel(ylabel)
        if suffix == "time":
            ax.set_yscale("log")
        ax.legend()
        fig.tight_layout()
        path = f"{out_prefix}_{suffix}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written


def plot_state_space(rows: list[dict], out_path: str) -> str | None:
    """Scatter of tuples generated vs complete-path count, log-log."""
    points = [(r["paths"], r["tuples"]) for r in rows
              if r.get("paths") and r.get("tuples")]
    if not points:
        return None
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.scatter([p for p, _ in points], [t for _, t in points],
               s=12, color="tab:red")
    lo = min(min(p for p, _ in points), min(t for _, t in points))
    hi = max(max(p for p, _ in points), max(t for _, t in points))
    ax.plot([lo, hi], [lo, hi], color="tab:gray", linestyle="--", linewidth=1)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("complete paths")
    ax.set_ylabel("tuples generated")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
