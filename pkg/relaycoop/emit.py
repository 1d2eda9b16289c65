# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Writes sweep results as CSV, JSON and SVG. Output is byte-identical across runs with the same
configuration: floats use repr, JSON keys are sorted and SVGs carry a fixed hash salt and no
date.
"""
import csv
import json
import math
import os
from typing import Dict, Iterable, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from relaycoop.cgras import scheme_features  # noqa: E402
from relaycoop.log import info  # noqa: E402
from relaycoop.sweep import DifferenceCell, PhaseMap  # noqa: E402

FORMATS = ("csv", "json", "svg")
INFEASIBLE = "infeasible"
INFEASIBLE_COLOR = "#d9d9d9"
SVG_SALT = "relaycoop"

plt.rcParams["svg.hashsalt"] = SVG_SALT


def fmt(value):
    if value is None:
        return ""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def _json_number(value):
    return None if value is None or not math.isfinite(value) else float(value)


def rate_tag(rate):
    return "R%g" % rate


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    info("wrote %s", path)
    return path


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    info("wrote %s", path)
    return path


def _features_row(c):
    f = scheme_features(c)
    return [f.cooperation, f.superposition_steps, f.interference_decoding,
            "".join(str(z) for z in f.split_messages)]


def legend_entries(pm: PhaseMap) -> List[Dict]:
    entries = []
    for key, ident in pm.legend().items():
        f = scheme_features(pm.schemes[key])
        entries.append({"id": ident, "key": key, "cooperation": f.cooperation,
                        "superposition_steps": f.superposition_steps,
                        "interference_decoding": f.interference_decoding,
                        "split_messages": list(f.split_messages)})
    return entries


def write_phase_csv(pm: PhaseMap, path):
    rows = [[fmt(cell.a), fmt(cell.b), cell.key or INFEASIBLE, fmt(cell.energy),
             fmt(cell.margin)] for cell in pm]
    return _write_rows(path, ["a", "b", "scheme_key", "E_TOT", "margin"], rows)


def write_phase_json(pm: PhaseMap, path, config: Optional[Dict] = None):
    ids = pm.legend()
    document = {
        "mode": pm.mode,
        "rate": pm.rate,
        "grid": pm.grid.to_dict(),
        "config": config or {},
        "legend": legend_entries(pm),
        "cells": [{"a": cell.a, "b": cell.b, "id": ids.get(cell.key, 0),
                   "energy": _json_number(cell.energy), "margin": _json_number(cell.margin),
                   "candidates": [key for key, _ in cell.candidates],
                   "diagnostics": list(cell.diagnostics)} for cell in pm],
    }
    with open(path, "w") as f:
        json.dump(document, f, sort_keys=True, indent=1)
        f.write("\n")
    info("wrote %s", path)
    return path


def _extent(pm: PhaseMap):
    a, b = pm.grid.a_values, pm.grid.b_values
    da = (a[1] - a[0]) / 2 if len(a) > 1 else 0.5
    db = (b[1] - b[0]) / 2 if len(b) > 1 else 0.5
    return [a[0] - da, a[-1] + da, b[0] - db, b[-1] + db]


def write_phase_svg(pm: PhaseMap, path):
    ids = pm.legend()
    image = np.array([[ids.get(cell.key, 0) for cell in row] for row in pm.cells])
    base = plt.get_cmap("tab20")
    colors = [INFEASIBLE_COLOR] + [base(k % base.N) for k in range(len(ids))]
    fig, ax = plt.subplots(figsize=(7, 6))
    # rows are a, columns b: transpose so a runs along x
    ax.imshow(image.T, origin="lower", extent=_extent(pm), aspect="auto",
              cmap=ListedColormap(colors), vmin=-0.5, vmax=len(colors) - 0.5,
              interpolation="nearest")
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_title("minimum-energy scheme, %s, R=%g" % (pm.mode, pm.rate))
    handles = [Patch(color=colors[ident], label="%d: %s" % (ident, key))
               for key, ident in ids.items()]
    if np.any(image == 0):
        handles.append(Patch(color=INFEASIBLE_COLOR, label=INFEASIBLE))
    ax.legend(handles=handles, loc="upper left", bbox_to_anchor=(1.02, 1.0), fontsize=6)
    return _save(fig, path)


def write_power_csv(pm: PhaseMap, path):
    rows = [[fmt(cell.a), fmt(cell.b), fmt(cell.best_energy)] for cell in pm]
    return _write_rows(path, ["a", "b", "E_TOT"], rows)


def _heatmap(pm: PhaseMap, values, title, label, path):
    fig, ax = plt.subplots(figsize=(6, 5))
    masked = np.ma.masked_invalid(np.where(np.isinf(values), np.nan, values))
    mesh = ax.imshow(masked.T, origin="lower", extent=_extent(pm), aspect="auto",
                     interpolation="nearest")
    fig.colorbar(mesh, ax=ax, label=label)
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_title(title)
    return _save(fig, path)


def write_power_svg(pm: PhaseMap, path):
    return _heatmap(pm, pm.energies(), "minimum energy, %s, R=%g" % (pm.mode, pm.rate),
                    "E_TOT", path)


def write_features_csv(pm: PhaseMap, path):
    rows = []
    for cell in pm:
        if cell.key is None:
            rows.append([fmt(cell.a), fmt(cell.b), INFEASIBLE, "", "", "", ""])
        else:
            rows.append([fmt(cell.a), fmt(cell.b), cell.key] + _features_row(pm.schemes[cell.key]))
    return _write_rows(path, ["a", "b", "scheme_key", "cooperation", "superposition_steps",
                              "interference_decoding", "split_messages"], rows)


def write_difference_csv(cells: Sequence[DifferenceCell], path):
    rows = [[fmt(c.a), fmt(c.b), fmt(c.nosplit), fmt(c.split), fmt(c.gain)] for c in cells]
    return _write_rows(path, ["a", "b", "E_nosplit", "E_split", "gain"], rows)


def write_difference_svg(nosplit: PhaseMap, cells: Sequence[DifferenceCell], path):
    gains = np.array([c.gain for c in cells], dtype=float).reshape(nosplit.grid.shape)
    return _heatmap(nosplit, gains, "energy saved by rate splitting, R=%g" % nosplit.rate,
                    "E_nosplit - E_split", path)


def write_bounds_csv(rows: Iterable, path):
    """
    :param rows: ComparisonRow-like objects with rate, lower, nosplit and split
    """
    body = [[fmt(r.rate), fmt(r.lower), fmt(r.nosplit), fmt(r.split)] for r in rows]
    return _write_rows(path, ["R_sym", "E_lower", "E_best_nosplit", "E_best_split"], body)


def write_compare_csv(rows: Iterable, path):
    body = [[fmt(v) for v in r.as_tuple()] for r in rows]
    return _write_rows(path, ["R_sym", "E_lower", "E_best_nosplit", "E_best_split",
                              "E_relay_selection", "E_uncoordinated"], body)


def write_compare_svg(rows: Sequence, path):
    rates = [r.rate for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    series = (("lower bound", "lower", "k--"), ("best, no splitting", "nosplit", "b-o"),
              ("best, splitting", "split", "g-s"), ("relay selection", "relay_selection", "r-^"),
              ("uncoordinated", "uncoordinated", "m-v"))
    for label, attr, style in series:
        values = [getattr(r, attr) for r in rows]
        ax.plot(rates, [v if math.isfinite(v) else np.nan for v in values], style, label=label)
    ax.set_xlabel("R_sym")
    ax.set_ylabel("E_TOT")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, path)


def emit_phase_map(pm: PhaseMap, out_dir, formats=FORMATS, config=None) -> List[str]:
    """
    Phase map, power surface and features of one sweep.

    :return: written paths
    """
    os.makedirs(out_dir, exist_ok=True)
    stem = "%s_%s" % (pm.mode, rate_tag(pm.rate))
    written = []
    if "csv" in formats:
        written.append(write_phase_csv(pm, os.path.join(out_dir, "phase_%s.csv" % stem)))
        written.append(write_power_csv(pm, os.path.join(out_dir, "power_%s.csv" % stem)))
        written.append(write_features_csv(pm, os.path.join(out_dir, "features_%s.csv" % stem)))
    if "json" in formats:
        written.append(write_phase_json(pm, os.path.join(out_dir, "phase_%s.json" % stem),
                                        config))
    if "svg" in formats and pm.cells:
        written.append(write_phase_svg(pm, os.path.join(out_dir, "phase_%s.svg" % stem)))
        written.append(write_power_svg(pm, os.path.join(out_dir, "power_%s.svg" % stem)))
    return written


def emit_difference(nosplit: PhaseMap, cells: Sequence[DifferenceCell], out_dir,
                    formats=FORMATS) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, "difference_%s" % rate_tag(nosplit.rate))
    written = []
    if "csv" in formats:
        written.append(write_difference_csv(cells, stem + ".csv"))
    if "svg" in formats and cells:
        written.append(write_difference_svg(nosplit, cells, stem + ".svg"))
    return written
