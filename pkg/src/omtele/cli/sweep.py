"""Parameter sweeps of teleportation fidelity or log-negativity."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from omtele.cli import io
from omtele.cli.config import UNITS, RunConfig, point_objects, sweep_values
from omtele.entanglement import adequate_cutoff, entanglement
from omtele.errors import GuardError
from omtele.params import derive_params, p_sub_message
from omtele.parallel import ordered_map
from omtele.teleport.fidelity import FLAG_TOL, fidelity_analytic, fidelity_quadrature

RECORD_SCHEMA_VERSION = 1
DERIVED_FIELDS = (("r", "r"), ("lambda", "lam"), ("theta", "theta"), ("lambda_prime", "lam_prime"),
                  ("gamma", "gamma"), ("p_sub", "p_sub"))
CONVENTIONS = (
    "rates are angular frequencies quoted as value/2pi in MHz; durations in ns",
    "fidelity F = (1/pi) Int chi_in(alpha) chi_tel(-alpha) d^2alpha; log-negativity uses the natural log",
    "value columns hold the closed form unless it is flagged against the oracle, then the oracle",
)


@dataclass(frozen=True)
class OutputRecord:
    index: int
    axis: str
    value: float
    derived: dict
    results: dict
    oracle: dict
    methods: dict
    flags: tuple[str, ...] = ()
    guard_warnings: tuple[str, ...] = ()
    schema_version: int = field(default=RECORD_SCHEMA_VERSION)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "index": self.index,
            "axis": self.axis,
            "value": self.value,
            "derived": dict(self.derived),
            "results": dict(self.results),
            "oracle": dict(self.oracle),
            "methods": dict(self.methods),
            "flags": list(self.flags),
            "guard_warnings": list(self.guard_warnings),
        }


def _fidelity(config: RunConfig, spec, derived, resource):
    quad = config.quadrature
    reduced = config.raw["use_reduced_tmsv"]
    if spec.kind == "cat":
        res = fidelity_quadrature(spec, derived, resource, reduced, **quad)
        return res.fidelity, res.fidelity, "quadrature", ()
    res = fidelity_analytic(spec, derived, resource, use_reduced=reduced, **quad)
    printed = res.diagnostics[0]
    if printed.flagged:
        return printed.oracle, printed.oracle, "quadrature", (printed.formula,)
    return res.fidelity, printed.oracle, "analytic", ()


def _logneg(config: RunConfig, derived, resource):
    cutoff = adequate_cutoff(resource, derived, minimum=config.cutoff)
    res = entanglement(resource, derived, cutoff)
    flags = (f"logneg_{resource}",) if res.discrepancy > FLAG_TOL else ()
    return res.E_N_analytic, res.E_N_numeric, "analytic", flags


def evaluate_point(config: RunConfig, index: int, axis: str, value: float) -> OutputRecord:
    try:
        physical, spec = point_objects(config, axis, value)
        warnings_ = list(physical.guard_messages())
    except GuardError as exc:
        raise GuardError(f"sweep point {index} ({axis} = {value!r}): {exc}") from exc
    derived = derive_params(physical, check=False)
    extra = p_sub_message(derived.p_sub)
    if extra:
        warnings_.append(extra)
    results, oracle, methods, flags = {}, {}, {}, []
    for resource in config.resources:
        if config.raw["quantity"] == "logneg":
            v, o, m, f = _logneg(config, derived, resource)
        else:
            v, o, m, f = _fidelity(config, spec, derived, resource)
        results[resource], oracle[resource], methods[resource] = v, o, m
        flags.extend(f)
    return OutputRecord(
        index, axis, value, {name: getattr(derived, attr) for name, attr in DERIVED_FIELDS},
        results, oracle, methods, tuple(flags), tuple(warnings_),
    )


def run_sweep(config: RunConfig, sweep: dict | None = None, threads: int | None = None) -> list[OutputRecord]:
    """One record per sweep point, in sweep order, whatever the thread count."""
    sweep = sweep or config.raw["sweep"]
    axis = sweep["name"]
    values = sweep_values(sweep)
    return ordered_map(
        lambda item: evaluate_point(config, item[0], axis, item[1]),
        list(enumerate(values)),
        threads or config.threads,
    )


def quantity_symbol(config: RunConfig) -> str:
    return "E_N" if config.raw["quantity"] == "logneg" else "F"


def describe_input(config: RunConfig) -> str:
    spec = config.input_spec()
    fields_ = {"coherent": f"beta={spec.beta!r}", "single_photon": "", "squeezed_vacuum": f"xi={spec.xi!r}",
               "cat": f"alpha0={spec.alpha0!r} varphi={spec.varphi!r}"}[spec.kind]
    return f"{spec.kind} {fields_}".strip()


def sweep_payload(config: RunConfig, records: list[OutputRecord], sweep: dict, kind: str = "sweep") -> dict:
    return {
        "schema_version": RECORD_SCHEMA_VERSION,
        "kind": kind,
        "name": config.name,
        "quantity": config.raw["quantity"],
        "input": describe_input(config),
        "sweep": dict(sweep, unit=UNITS[sweep["name"]]),
        "parameters": config.lab_params(),
        "units": {k: UNITS[k] for k in config.lab_params()},
        "use_reduced_tmsv": config.raw["use_reduced_tmsv"],
        "conventions": list(CONVENTIONS),
        "records": [rec.to_dict() for rec in records],
    }


def sweep_csv(config: RunConfig, records: list[OutputRecord], sweep: dict, title: str) -> str:
    sym = quantity_symbol(config)
    axis = sweep["name"]
    header = [
        title,
        f"schema_version: {RECORD_SCHEMA_VERSION}",
        f"quantity: {config.raw['quantity']} ({sym}, dimensionless)",
        f"input: {describe_input(config)}",
        f"sweep: {axis} from {sweep['start']!r} to {sweep['stop']!r}, {sweep['points']} points [{UNITS[axis]}]",
        *io.parameter_header(config.lab_params(), UNITS),
        *CONVENTIONS,
        f"columns: {axis} [{UNITS[axis]}]; derived parameters [dimensionless, theta in rad]; "
        f"{sym}_<resource> and oracle_<resource> [dimensionless]; flags",
    ]
    columns = [axis] + [name for name, _ in DERIVED_FIELDS]
    columns += [f"{sym}_{r}" for r in config.resources] + [f"oracle_{r}" for r in config.resources] + ["flags"]
    rows = []
    for rec in records:
        row = [rec.value] + [rec.derived[name] for name, _ in DERIVED_FIELDS]
        row += [rec.results[r] for r in config.resources] + [rec.oracle[r] for r in config.resources]
        row.append(";".join(rec.flags))
        rows.append(row)
    return io.render_csv(header, columns, rows)


def write_sweep(
    config: RunConfig, records: list[OutputRecord], out_dir: Path, formats: list[str],
    sweep: dict | None = None, stem: str | None = None, kind: str = "sweep",
) -> list[Path]:
    sweep = sweep or config.raw["sweep"]
    stem = stem or config.name
    written = []
    if "csv" in formats:
        written.append(io.write_text(out_dir / f"{stem}.csv", sweep_csv(config, records, sweep, f"omtele {kind} {stem}")))
    if "json" in formats:
        written.append(io.write_text(out_dir / f"{stem}.json", io.render_json(sweep_payload(config, records, sweep, kind))))
    return written
