"""``omtele`` command line.

Exit codes: 0 success, 1 configuration error, 2 numerical guard violation,
3 unexpected discrepancy between a closed form and its oracle.
"""

from __future__ import annotations

import functools
import math
import sys
import warnings
from pathlib import Path

import click

from omtele import __version__, kernels
from omtele.cli import io
from omtele.cli.config import FIGURE_IDS, UNITS, RunConfig, read_config_file
from omtele.cli.figures import emit_figure
from omtele.cli.sweep import run_sweep, write_sweep
from omtele.cli.validate import render_report, run_validation
from omtele.errors import (
    ConfigError,
    ConvergenceError,
    GuardError,
    GuardWarning,
    InstabilityError,
    QuadratureError,
    UnsupportedFormulaError,
    ZeroNormError,
)
from omtele.params import derive_params, p_sub_message, solve_displacement_pulse
from omtele.states import heralding_report

EXIT_OK, EXIT_CONFIG, EXIT_GUARD, EXIT_DISCREPANCY = 0, 1, 2, 3
NUMERICAL_ERRORS = (GuardError, ConvergenceError, QuadratureError, InstabilityError, ZeroNormError,
                    UnsupportedFormulaError)


class DiscrepancyExit(Exception):
    """Raised after the report is written when it holds unexpected flags."""


def common_options(fn):
    @click.option("--config", "config_path", type=click.Path(dir_okay=False), help="JSON config merged over the defaults.")
    @click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory (default: $OMTELE_OUT or ./out).")
    @click.option("--cutoff", type=int, help="Fock cutoff per mode.")
    @click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Write only this format.")
    @click.option("--threads", type=int, help="Worker threads; results do not depend on it.")
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return fn(*args, **kwargs)

    return wrapper


def load_config(config_path, cutoff, fmt, threads, figure: str | None = None) -> RunConfig:
    user = read_config_file(config_path) if config_path else None
    config = RunConfig.build(user, figure)
    overrides = {}
    if cutoff is not None:
        overrides["cutoff"] = cutoff
    if threads is not None:
        overrides["threads"] = threads
    if fmt is not None:
        overrides["output"] = {"formats": [fmt]}
    return config.with_overrides(**overrides) if overrides else config


def out_dir_for(config: RunConfig, out_dir) -> Path:
    return io.ensure_dir(io.resolve_out_dir(out_dir, config.raw["output"].get("dir")))


def _report_warnings(messages) -> None:
    for message in dict.fromkeys(messages):
        click.echo(f"warning: {message}", err=True)


def _report_paths(paths) -> None:
    for path in paths:
        click.echo(str(path))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="omtele")
def cli():
    """Optomagnonic teleportation: figure data, sweeps and oracle validation."""


@cli.command()
@common_options
def params(config_path, out_dir, cutoff, fmt, threads):
    """Print resolved physical and derived parameters.

    Writes params.<format> as well when --out is given.
    """
    config = load_config(config_path, cutoff, fmt, threads)
    physical = config.physical()
    messages = physical.guard_messages()
    derived = derive_params(physical, check=False)
    extra = p_sub_message(derived.p_sub)
    if extra:
        messages.append(extra)
    payload = {
        "lab_units": physical.to_lab_units(),
        "units": {k: UNITS[k] for k in physical.to_lab_units()},
        "internal_si": {k: getattr(physical, k) for k in physical.to_lab_units()},
        "derived": {
            "script_G1_tau_e": derived.script_G1 * physical.tau_e,
            "script_Gc_tau_s": derived.script_Gc * physical.tau_s,
            "script_Gc_tau_d": derived.script_Gc * physical.tau_d,
            "r": derived.r, "lambda": derived.lam, "theta": derived.theta,
            "lambda_prime": derived.lam_prime, "gamma": derived.gamma, "p_sub": derived.p_sub,
            "sinh2_r": math.sinh(derived.r) ** 2,
        },
        "heralding": heralding_report(derived, config.raw["reflectivity"]),
        "guard_warnings": messages,
        "kernel_backend": kernels.BACKEND,
    }
    if physical.tau_d > 0 and physical.g_c > 0:
        pulse = solve_displacement_pulse(1.0, physical)
        payload["unit_displacement_pulse"] = {"E_d_per_s": pulse.E_d, "phi_rad": pulse.phi}
    fmt = fmt or "json"
    if fmt == "json":
        text = io.render_json(payload)
    else:
        rows = []
        for section in ("lab_units", "derived", "heralding"):
            for key, value in sorted(payload[section].items()):
                unit = UNITS.get(key, "1") if section == "lab_units" else "1"
                rows.append((section, key, value, unit))
        header = ["omtele params", "columns: section, name, value, unit", *(f"warning: {m}" for m in messages)]
        text = io.render_csv(header, ["section", "name", "value", "unit"], rows)
    click.echo(text, nl=False)
    if out_dir:
        target = io.ensure_dir(Path(out_dir)) / f"params.{fmt}"
        io.write_text(target, text)
    _report_warnings(messages)


@cli.command()
@common_options
def sweep(config_path, out_dir, cutoff, fmt, threads):
    """Evaluate fidelity or log-negativity along the configured sweep axis."""
    config = load_config(config_path, cutoff, fmt, threads)
    records = run_sweep(config)
    paths = write_sweep(config, records, out_dir_for(config, out_dir), config.formats)
    _report_warnings(m for rec in records for m in rec.guard_warnings)
    _report_paths(paths)


@cli.command()
@click.argument("figure_id", type=click.Choice(FIGURE_IDS + ("all",)))
@common_options
def figure(figure_id, config_path, out_dir, cutoff, fmt, threads):
    """Write the dataset for FIGURE_ID (or every figure with "all")."""
    ids = FIGURE_IDS if figure_id == "all" else (figure_id,)
    for fid in ids:
        config = load_config(config_path, cutoff, fmt, threads, figure=fid)
        _report_warnings(config.physical().guard_messages())
        _report_paths(emit_figure(fid, config, out_dir_for(config, out_dir)))


@cli.command()
@common_options
def validate(config_path, out_dir, cutoff, fmt, threads):
    """Compare every closed form with its oracle and write validation_report.json.

    Exits with status 3 when a discrepancy outside the whitelist appears.
    """
    config = load_config(config_path, cutoff, fmt, threads)
    if fmt == "csv":
        raise ConfigError("the validation report is JSON only", "--format")
    report = run_validation(config)
    path = io.write_text(out_dir_for(config, out_dir) / "validation_report.json", render_report(config, report))
    _report_paths([path])
    for key, entry in report.summary().items():
        state = "expected" if entry["whitelisted"] else "UNEXPECTED"
        click.echo(f"{state}: {key} flagged at {entry['count']} point(s), max |difference| {entry['max_difference']:.3g}",
                   err=True)
    for key, entry in report.variant_verdicts().items():
        click.echo(f"variant {key}: {entry['verdict']} (max |difference| {entry['max_difference']:.3g})", err=True)
    if not report.ok:
        raise DiscrepancyExit()


def main(argv=None) -> int:
    """Entry point; returns the process exit code."""
    warnings.simplefilter("ignore", GuardWarning)
    try:
        cli.main(args=argv, prog_name="omtele", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return EXIT_CONFIG
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as exc:
        click.echo(f"numerical guard: {exc}", err=True)
        return EXIT_GUARD
    except DiscrepancyExit:
        return EXIT_DISCREPANCY
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
