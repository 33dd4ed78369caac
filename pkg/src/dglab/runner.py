"""Build a simulation from a :class:`RunConfig`, run it and write the output directory."""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import time
from pathlib import Path

import numpy as np

from . import __version__
from .basis import build_reference_element
from .diagnostics import RunTrace
from .equations import InadmissibleStateError
from .mesh import Mesh, project, sample_field, sample_reference_points
from .sensor import SensorConfig
from .solver import Simulation
from .timeint import BlowUpError, StepControl
from .viscosity import ViscosityDistribution

log = logging.getLogger(__name__)

EXIT_OK, EXIT_BLOWUP, EXIT_CONFIG = 0, 1, 2


def format_time(t):
    return f"{t:.10g}"


def snapshot_name(t):
    return f"solution_t{format_time(t)}.csv"


def build_simulation(cfg):
    """Return ``(simulation, initial nodal state, scenario)`` for a validated config."""
    sc = cfg.scenario_object()
    x_left, x_right = cfg.mesh.domain
    mesh = Mesh(cfg.mesh.elements, x_left, x_right, cfg.mesh.boundary)
    elem = build_reference_element(cfg.degree)
    dist = ViscosityDistribution(cfg.viscosity.kind, cfg.viscosity.lam)
    s = cfg.sensor
    sim = Simulation(
        law=sc.law, mesh=mesh, elem=elem, flux=cfg.flux, dist=dist,
        sensor=SensorConfig(mode=s.mode, c=s.c, kappa=s.kappa,
                            eps_max_scale=s.eps_max_scale, per_stage=s.per_stage),
        control=StepControl(cfl=cfg.time.cfl, fixed_dt=cfg.time.fixed_dt),
        integrator=cfg.time.integrator, mode=cfg.time.mode,
        ghost=None if mesh.periodic else sc.ghost_states(),
    )
    return sim, project(sc.initial, mesh, elem), sc


def snapshot_columns(sim, u):
    """Ordered column dict for one snapshot on the oversampled grid."""
    x, vals = sample_field(u, sim.mesh, sim.elem)
    cols = {"x": x}
    for name, v in zip(sim.law.variables, vals):
        cols[name] = v
    if sim.law.name == "euler":
        _, vel, P = sim.law.primitives(vals, check=False)
        cols["v"], cols["P"] = vel, P
    try:
        _, visc = sim.viscosity(u)
    except InadmissibleStateError:
        # last good state of a failed run may not admit a wave speed
        cols["eps"] = np.full_like(x, np.nan)
        return cols
    r = sample_reference_points(sim.elem.degree)
    cols["eps"] = visc.sample(r).ravel() if visc is not None else np.zeros_like(x)
    return cols


def write_csv(path, cols):
    names = list(cols)
    data = np.column_stack([np.asarray(cols[n], dtype=float) for n in names])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in data:
            w.writerow([f"{v:.17g}" for v in row])


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_trace(path, trace: RunTrace):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(trace.columns)
        for row in trace.rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else str(v) for v in row])


def run_id(cfg_dump):
    canonical = json.dumps(cfg_dump, sort_keys=True, separators=(",", ":"))
    return hashlib.sha1(canonical.encode()).hexdigest()


def output_directory(cfg):
    return Path(os.environ.get("DGLAB_OUT") or cfg.output.directory)


def run(cfg):
    """Execute a run and write its outputs; returns the process exit code."""
    out_dir = output_directory(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    dump = cfg.model_dump(mode="json")
    sim, u0, sc = build_simulation(cfg)
    trace = RunTrace(tuple(sim.law.variables))
    last = {"t": 0.0, "u": u0, "steps": 0}
    written = []

    def snapshot(t, u):
        name = snapshot_name(t)
        write_csv(out_dir / name, snapshot_columns(sim, u))
        written.append(name)

    def remember(t, u):
        last["t"], last["u"] = t, u
        last["steps"] += 1

    started = time.perf_counter()
    status, message, code = "ok", "", EXIT_OK
    try:
        snapshot(0.0, u0)
        sim.run(u0, cfg.time.final_time, cfg.output.snapshot_times, snapshot,
                cfg.output.series_every, on_step=remember, trace=trace)
    except (BlowUpError, InadmissibleStateError) as err:
        status, message, code = "blow_up", str(err), EXIT_BLOWUP
        log.error("run stopped at t=%s: %s", format_time(last["t"]), err)
        if last["t"] > 0:
            snapshot(last["t"], last["u"])
    wall = time.perf_counter() - started
    write_trace(out_dir / "trace.csv", trace)
    meta = {
        "run_id": run_id(dump),
        "version": __version__,
        "config": dump,
        "scenario_description": sc.description,
        "status": status,
        "message": message,
        "t_reached": last["t"],
        "steps": last["steps"],
        "snapshots": written,
        "wall_time_s": wall,
    }
    (out_dir / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return code
