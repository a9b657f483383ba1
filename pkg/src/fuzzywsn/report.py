"""CSV output for runs, comparisons and fuzzy surfaces.

Floats are written with ``repr`` so they read back to the same double and
never depend on the locale. Every file is written to a temporary sibling
first and renamed into place, so a reader never sees half a file.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from pathlib import Path

ROUNDS_HEADER = ("round", "alive", "residual_j", "ch_count", "relay_count")
SUMMARY_HEADER = ("protocol", "seed", "fnd", "final_alive")
TRACE_HEADER = ("round", "head", "cluster_size", "dist_bs", "score", "route")
COMPARE_HEADER = ("protocol", "seeds", "median_fnd", "min_fnd", "max_fnd", "median_final_alive")
SNAPSHOT_HEADER = ("id", "x", "y", "class", "energy", "alive")
SURFACE_HEADER = ("x1", "x2", "output")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path, header, rows) -> Path:
    return atomic_write(path, render_csv(header, rows))


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def rounds_rows(summary):
    for m in summary.metrics:
        yield (m.round, m.alive, float(m.residual_j), m.ch_count, m.relay_count)


def summary_row(summary):
    return (summary.protocol, summary.seed, summary.fnd, summary.final_alive)


def trace_rows(summary):
    for t in summary.traces:
        for i, h in enumerate(t.heads):
            route = ";".join(str(r) for r in t.routes.get(h, ()))
            yield (t.round, h, t.sizes[i], float(t.dist_bs[i]), float(t.head_scores[i]), route)


def compare_rows(comparison):
    for row in comparison.table():
        yield tuple(row[c] for c in COMPARE_HEADER)


def write_rounds(summary, path) -> Path:
    return write_csv(path, ROUNDS_HEADER, rounds_rows(summary))


def write_summary(summaries, path) -> Path:
    return write_csv(path, SUMMARY_HEADER, (summary_row(s) for s in summaries))


def write_trace(summary, path) -> Path:
    return write_csv(path, TRACE_HEADER, trace_rows(summary))


def write_compare(comparison, path) -> Path:
    return write_csv(path, COMPARE_HEADER, compare_rows(comparison))


def write_snapshot(pop, path) -> Path:
    return write_csv(path, SNAPSHOT_HEADER, pop.snapshot_rows())


def write_surface(rows, path) -> Path:
    """Surface grid rows ``(x1, x2, output)`` with ``x1`` varying slowest."""
    return write_csv(path, SURFACE_HEADER, rows)


def run_filename(protocol: str, seed: int) -> str:
    return f"rounds_{protocol}_seed{seed}.csv"
