"""Compare run directories against each other and against a reference solution."""
from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .diagnostics import advection_exact, grid_norms, sod_exact
from .runner import read_csv
from .scenarios import get_scenario

SNAPSHOT_RE = re.compile(r"^solution_t(.+)\.csv$")
JUMP_FRACTION = 0.1
WINDOW_CELLS = 3.0


class CompareError(ValueError):
    pass


def load_run(path):
    path = Path(path)
    meta_path = path / "meta.json"
    if not meta_path.is_file():
        raise CompareError(f"{path} is not a run directory (no meta.json)")
    meta = json.loads(meta_path.read_text())
    snaps = []
    for f in path.iterdir():
        m = SNAPSHOT_RE.match(f.name)
        if m:
            snaps.append((float(m.group(1)), f))
    if not snaps:
        raise CompareError(f"{path} holds no solution snapshots")
    t, f = max(snaps)
    return {"dir": str(path), "meta": meta, "t": t, "data": read_csv(f)}


def _cell_width(meta):
    mesh = meta["config"]["mesh"]
    return (mesh["domain"][1] - mesh["domain"][0]) / mesh["elements"]


def primary_variable(data):
    return "rho" if "rho" in data else "u"


def exact_reference(meta, t, x):
    """Columns of the exact solution at ``x``; only advection and Sod have one."""
    cfg = meta["config"]
    sc = get_scenario(cfg["scenario"], cfg["preset_variant"])
    if sc.law.name == "advection":
        x_left, x_right = cfg["mesh"]["domain"]
        return {"u": advection_exact(lambda s: sc.initial(s)[0], t, x, x_left, x_right, sc.law.speed)}
    if sc.name == "sod":
        st = sod_exact(x, t, sc.extra["left"], sc.extra["right"], sc.law.gamma, sc.split_point)
        return {"rho": st.rho, "m": st.m, "E": st.E, "v": st.v, "P": st.P}
    raise CompareError(f"no exact solution for scenario {sc.name!r}; pass a reference run or CSV")


def _interp_columns(ref_data, x):
    xr = ref_data["x"]
    return {k: np.interp(x, xr, v) for k, v in ref_data.items() if k not in ("x", "eps")}


def reference_columns(reference, run):
    x = run["data"]["x"]
    if reference == "exact":
        return exact_reference(run["meta"], run["t"], x)
    path = Path(reference)
    if path.is_dir():
        return _interp_columns(load_run(path)["data"], x)
    if path.is_file():
        return _interp_columns(read_csv(path), x)
    raise CompareError(f"reference {reference!r} is neither 'exact' nor an existing path")


def find_jumps(x, ref, h, fraction=JUMP_FRACTION):
    """Jump locations in a reference profile: runs of sample steps above ``fraction`` of its range."""
    span = float(np.max(ref) - np.min(ref))
    if span == 0.0:
        return []
    big = np.abs(np.diff(ref)) > fraction * span
    jumps, i = [], 0
    while i < big.size:
        if big[i]:
            j = i
            while j + 1 < big.size and big[j + 1]:
                j += 1
            jumps.append(0.5 * (x[i] + x[j + 1]))
            i = j + 1
        else:
            i += 1
    return jumps


def transition_width(x, u, left, right, h):
    """Cells between the 10% and 90% crossings of a monotone transition from ``left`` to ``right``."""
    phi = (np.asarray(u) - left) / (right - left)
    above = np.nonzero(phi >= 0.9)[0]
    if above.size == 0:
        return None
    i90 = above[0]
    below = np.nonzero(phi[:i90] <= 0.1)[0]
    if below.size == 0:
        return None
    return float((x[i90] - x[below[-1]]) / h)


def jump_metrics(x, u, ref, h, window_cells=WINDOW_CELLS):
    out = []
    for xj in find_jumps(x, ref, h):
        win = (x > xj - window_cells * h) & (x < xj + window_cells * h)
        if not np.any(win):
            continue
        idx = np.nonzero(win)[0]
        left, right = float(ref[idx[0]]), float(ref[idx[-1]])
        hi, lo = max(left, right), min(left, right)
        out.append({
            "x": float(xj),
            "left": left,
            "right": right,
            "overshoot": max(0.0, float(np.max(u[win])) - hi),
            "undershoot": max(0.0, lo - float(np.min(u[win]))),
            "width_cells": transition_width(x[win], u[win], left, right, h),
        })
    return out


def _norm_dict(diff, dx):
    n = grid_norms(diff, dx)
    return {"L1": float(n.l1[0]), "L2": float(n.l2[0]), "Linf": float(n.linf[0])}


def _mask(x, window):
    if window is None:
        return np.ones_like(x, dtype=bool)
    return (x >= window[0]) & (x <= window[1])


def run_metrics(run, ref_cols, window=None):
    data = run["data"]
    x = data["x"]
    h = _cell_width(run["meta"])
    dx = float(x[1] - x[0]) if x.size > 1 else h
    m = _mask(x, window)
    norms = {k: _norm_dict(data[k][m] - ref_cols[k][m], dx) for k in ref_cols if k in data}
    var = primary_variable(data)
    jumps = [j for j in jump_metrics(x, data[var], ref_cols[var], h)
             if window is None or window[0] <= j["x"] <= window[1]]
    return {
        "dir": run["dir"],
        "t": run["t"],
        "viscosity": run["meta"]["config"]["viscosity"]["kind"],
        "norms": norms,
        "jump_variable": var,
        "jumps": jumps,
        "max_overshoot": max((j["overshoot"] for j in jumps), default=0.0),
        "max_undershoot": max((j["undershoot"] for j in jumps), default=0.0),
    }


def compare(dir_a, dir_b, reference="exact", window=None):
    """JSON-ready report for two runs of the same scenario."""
    a, b = load_run(dir_a), load_run(dir_b)
    sa, sb = a["meta"]["config"]["scenario"], b["meta"]["config"]["scenario"]
    if sa != sb:
        raise CompareError(f"scenario mismatch: {sa!r} vs {sb!r}")
    report = {"scenario": sa, "reference": str(reference),
              "window": list(window) if window is not None else None, "runs": {}}
    for key, run in (("a", a), ("b", b)):
        report["runs"][key] = run_metrics(run, reference_columns(reference, run), window)
    if a["data"]["x"].shape == b["data"]["x"].shape and np.array_equal(a["data"]["x"], b["data"]["x"]):
        x = a["data"]["x"]
        m = _mask(x, window)
        dx = float(x[1] - x[0]) if x.size > 1 else 1.0
        report["difference"] = {
            k: _norm_dict(a["data"][k][m] - b["data"][k][m], dx)
            for k in a["data"] if k != "x" and k in b["data"]
        }
    else:
        report["difference"] = None
    return report
