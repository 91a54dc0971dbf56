"""Figure datasets: plot-ready CSV/JSON files for every figure id.

Column layouts are gnuplot friendly: sweeps are one row per point, number
distributions and Wigner grids are long format with one row per cell.
"""

from __future__ import annotations

from pathlib import Path


from omtele.cli import io
from omtele.cli.config import UNITS, RunConfig
from omtele.errors import ConfigError
from omtele.cli.sweep import CONVENTIONS, RECORD_SCHEMA_VERSION, describe_input, run_sweep, write_sweep
from omtele.entanglement import resource_state
from omtele.params import derive_params
from omtele.states import input_state, joint_number_distribution
from omtele.teleport.chi import chi_teleported
from omtele.wigner import figure_bounds, wigner_map, wigner_negativity

SWEEP_FIGURES = ("fig2a", "fig3a", "fig3b", "fig3c", "fig3d", "fig5a")
WIGNER_CONVENTION = "W(x, p) with x = sqrt(2) Re(beta), p = sqrt(2) Im(beta); integrates to 1 over dx dp"


def _base_header(config: RunConfig, title: str, with_input: bool = False) -> list[str]:
    lines = [title, f"schema_version: {RECORD_SCHEMA_VERSION}"]
    if with_input:
        lines.append(f"input: {describe_input(config)}")
    return lines + io.parameter_header(config.lab_params(), UNITS) + [CONVENTIONS[0]]


def _write(out_dir: Path, stem: str, formats: list[str], csv_text: str, payload: dict) -> list[Path]:
    written = []
    if "csv" in formats:
        written.append(io.write_text(out_dir / f"{stem}.csv", csv_text))
    if "json" in formats:
        written.append(io.write_text(out_dir / f"{stem}.json", io.render_json(payload)))
    return written


def _distribution_files(config: RunConfig, out_dir: Path, threads: int) -> list[Path]:
    derived = derive_params(config.physical(), check=False)
    limit = config.raw.get("figure", {}).get("max_number", 10)
    written = []
    for resource, stem, role in (("nongaussian", "fig2b", "main"), ("tmsv", "fig2b_inset", "inset")):
        probs = joint_number_distribution(resource_state(resource, derived, config.cutoff))[: limit + 1, : limit + 1]
        rows = [(m, n, float(probs[m, n])) for m in range(limit + 1) for n in range(limit + 1)]
        header = _base_header(config, f"omtele figure fig2b ({role}): joint magnon-photon number distribution")
        header += [f"resource: {resource}", f"cutoff: {config.cutoff}",
                   "columns: n_magnon [1], n_photon [1], P [probability]"]
        payload = {
            "schema_version": RECORD_SCHEMA_VERSION, "kind": "figure", "figure": "fig2b", "role": role,
            "resource": resource, "cutoff": config.cutoff, "max_number": limit,
            "parameters": config.lab_params(), "units": {k: UNITS[k] for k in config.lab_params()},
            "probabilities": probs.tolist(),
        }
        written += _write(out_dir, stem, config.formats,
                          io.render_csv(header, ["n_magnon", "n_photon", "P"], rows), payload)
    return written


def _wigner_files(config: RunConfig, out_dir: Path, threads: int) -> list[Path]:
    spec = config.input_spec()
    if spec.kind != "cat":
        raise ConfigError("fig4 needs a cat input", "$.input.kind")
    derived = derive_params(config.physical(), check=False)
    resolution = config.raw.get("figure", {}).get("resolution", 161)
    bounds = figure_bounds(spec.alpha0)
    grids = {"input": wigner_map(input_state(spec, config.cutoff), bounds, bounds, resolution, threads)}
    for resource in config.resources:
        grids[resource] = wigner_map(chi_teleported(spec, derived, resource), bounds, bounds, resolution, threads)
    written = []
    for role, grid in grids.items():
        stem = f"fig4_{role}"
        minimum, volume = wigner_negativity(grid, "xp")
        header = _base_header(config, f"omtele figure fig4 ({role}): Wigner function", with_input=True)
        header += [WIGNER_CONVENTION, f"grid: {resolution} x {resolution} on [{bounds[0]!r}, {bounds[1]!r}]^2",
                   f"min W = {minimum!r}; negative volume = {volume!r}",
                   "columns: x [1], p [1], W [1/(dx dp)]"]
        xs, ps = grid.xs, grid.ps
        rows = [(float(xs[j]), float(ps[i]), float(grid.values[i, j]))
                for i in range(resolution) for j in range(resolution)]
        payload = {
            "schema_version": RECORD_SCHEMA_VERSION, "kind": "figure", "figure": "fig4", "role": role,
            "input": describe_input(config), "parameters": config.lab_params(),
            "units": {k: UNITS[k] for k in config.lab_params()}, "convention": WIGNER_CONVENTION,
            "x": xs.tolist(), "p": ps.tolist(), "W": grid.values.tolist(),
            "min_W": minimum, "negative_volume": volume,
        }
        written += _write(out_dir, stem, config.formats, io.render_csv(header, ["x", "p", "W"], rows), payload)
    return written


def emit_figure(figure_id: str, config: RunConfig, out_dir: Path, threads: int | None = None) -> list[Path]:
    """Write every file for ``figure_id`` into ``out_dir``; returns the paths."""
    threads = threads or config.threads
    io.ensure_dir(out_dir)
    if figure_id in SWEEP_FIGURES:
        records = run_sweep(config, threads=threads)
        return write_sweep(config, records, out_dir, config.formats, stem=figure_id, kind="figure")
    if figure_id == "fig2b":
        return _distribution_files(config, out_dir, threads)
    if figure_id == "fig4":
        return _wigner_files(config, out_dir, threads)
    if figure_id == "fig5b":
        main = run_sweep(config, threads=threads)
        inset_sweep = config.raw["figure"]["inset"]
        inset = run_sweep(config, inset_sweep, threads=threads)
        return write_sweep(config, main, out_dir, config.formats, stem="fig5b", kind="figure") + write_sweep(
            config, inset, out_dir, config.formats, sweep=inset_sweep, stem="fig5b_inset", kind="figure"
        )
    raise ConfigError(f"unknown figure id {figure_id!r}", "figure")


def figure_summary(figure_id: str, paths: list[Path]) -> str:
    return f"{figure_id}: " + ", ".join(str(p) for p in paths)


__all__ = ["emit_figure", "figure_summary", "SWEEP_FIGURES"]
