"""Figure and CSV rendering for analysis reports.

Renders matplotlib figures to files alongside delimited (CSV) summaries; all
outputs are deterministic for identical inputs (fixed ordering, no
timestamps).
"""
from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from wildtower.tower import Tower, leaf_addresses, s_value  # noqa: E402

_PNG_METADATA = {"Software": "wildtower"}


def _save(fig, path: str) -> None:
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)


def render_rank_profile(t: Tower, path: str) -> None:
    """Per-level component counts and total ranks, one marker per level."""
    levels = list(range(t.n_levels))
    counts = [len(level) for level in t.levels]
    ranks = t.level_ranks()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(levels, counts, "o-", label="components")
    if not any(r is None for r in ranks):
        ax.plot(levels, ranks, "s--", label="total rank")
    ax.set_xlabel("level")
    ax.set_ylabel("count")
    ax.set_xticks(levels)
    if max(counts, default=1) > 10:
        ax.set_yscale("log")
    ax.legend()
    ax.set_title("tower level profile")
    fig.tight_layout()
    _save(fig, path)


def render_branch_values(t: Tower, path: str) -> bool:
    """Histogram of branch limit values across deepest-level components.
    Returns False (nothing written) when the tower is unannotated."""
    if any(r is None for r in t.level_ranks()):
        return False
    try:
        values = [s_value(t, p)[0] for p in leaf_addresses(t)]
    except ValueError:
        return False
    if not values:
        return False
    buckets: dict[int, int] = {}
    for v in values:
        buckets[v] = buckets.get(v, 0) + 1
    xs = sorted(buckets)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([str(x) for x in xs], [buckets[x] for x in xs])
    ax.set_xlabel("branch limit value")
    ax.set_ylabel("branches")
    ax.set_title("branch limit distribution")
    fig.tight_layout()
    _save(fig, path)
    return True


def render_mesh_projection(t: Tower, path: str) -> bool:
    """XY-projection scatter of every component's vertices, colored by level.
    Returns False when no component has geometry."""
    if not any(c.mesh is not None for level in t.levels for c in level):
        return False
    fig, ax = plt.subplots(figsize=(6, 6))
    cmap = plt.get_cmap("viridis")
    denom = max(t.n_levels - 1, 1)
    for k, level in enumerate(t.levels):
        color = cmap(k / denom)
        labeled = False
        for c in level:
            if c.mesh is None or c.mesh.n_vertices == 0:
                continue
            scale = c.mesh.scale
            xs = c.mesh.vertices[:, 0] / scale
            ys = c.mesh.vertices[:, 1] / scale
            ax.scatter(
                xs,
                ys,
                s=2,
                color=color,
                label=f"level {k}" if not labeled else None,
            )
            labeled = True
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(markerscale=4)
    ax.set_title("component meshes, xy projection")
    fig.tight_layout()
    _save(fig, path)
    return True


def write_level_csv(t: Tower, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "component", "rank", "is_cell", "parent"])
        for k, level in enumerate(t.levels):
            for i, c in enumerate(level):
                writer.writerow(
                    [
                        k,
                        i,
                        "" if c.rank is None else c.rank,
                        int(c.is_cell),
                        "" if c.parent is None else c.parent,
                    ]
                )


def write_checks_csv(report: dict, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "status"])
        for check in report["checks"]:
            writer.writerow([check["name"], check["status"]])
        writer.writerow(["verdict", report["verdict"]])


def render_all(t: Tower, report: dict, out_dir: str) -> list[str]:
    """All figures and CSV summaries for one analysis; returns the relative
    names of the files written, in a fixed order."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def emit(name: str, fn, *args) -> None:
        target = os.path.join(out_dir, name)
        result = fn(*args, target)
        if result is not False:
            written.append(name)

    emit("rank_profile.png", render_rank_profile, t)
    emit("branch_values.png", render_branch_values, t)
    emit("mesh_projection.png", render_mesh_projection, t)
    emit("levels.csv", write_level_csv, t)
    emit("checks.csv", write_checks_csv, report)
    return written
