"""Acceptance criteria 1-11, each at its stated tolerance.

Every test records one PASS/FAIL line (shown in the pytest terminal summary)
and then asserts the same verdict, so a failing criterion fails its test.
"""

import json
import math
import time

import numpy as np
import pytest

from omtele import entanglement as ent
from omtele.cli.config import FIGURE_IDS, RunConfig
from omtele.cli.main import EXIT_OK, main
from omtele.cli.sweep import run_sweep
from omtele.params import DerivedParams, PhysicalParams, covariance_ode_oracle, derive_params, displacement_ode_oracle
from omtele.states import InputStateSpec
from omtele.teleport import formulas
from omtele.teleport.chi import chi_input, chi_teleported
from omtele.teleport.fidelity import fidelity_quadrature
from omtele.teleport.reconstruct import fidelity_fock, teleported_density
from omtele.wigner import figure_bounds, wigner_map, wigner_negativity, wigner_parity
from tests.acceptance_log import record


def checks_line(checks):
    return "; ".join(f"{name} {'ok' if ok else 'FAILED'} ({detail})" for name, ok, detail in checks)


def conclude(number, checks):
    ok = all(c[1] for c in checks)
    record(number, ok, checks_line(checks))
    assert ok, checks_line([c for c in checks if not c[1]])


def test_criterion_01_reference_parameters():
    p = PhysicalParams.paper()
    start = time.perf_counter()
    d = derive_params(p, check=False)
    elapsed = time.perf_counter() - start
    value = d.script_Gc * p.tau_s
    conclude(1, [
        ("Gc*tau_s = 0.01005 +- 1e-4", abs(value - 0.01005) <= 1e-4, f"{value:.6f}"),
        ("runtime < 1 ms", elapsed < 1e-3, f"{elapsed * 1e6:.0f} us"),
    ])


def test_criterion_02_classical_boundary():
    vac = DerivedParams.from_channel(0.0, 1.0)
    closed = formulas.coherent_tmsv(0.0, 1.0)
    quad = fidelity_quadrature(InputStateSpec.coherent(0j), vac, "tmsv").fidelity
    worst = max(abs(formulas.squeezed_tmsv(lam, 1.0, 0.0) - (1 + lam) / 2) for lam in (0.0, 0.3, 0.683, 0.9))
    conclude(2, [
        ("closed form = 0.5 exactly", closed == 0.5, repr(closed)),
        ("quadrature 0.5 +- 1e-6", abs(quad - 0.5) <= 1e-6, f"{quad:.12f}"),
        ("squeezed xi=0 -> (1+lambda)/2 within 1e-12", worst <= 1e-12, f"max dev {worst:.1e}"),
    ])


def test_criterion_03_unit_gain_identity():
    grid = np.linspace(0.0, 0.9, 50)
    worst = max(abs(formulas.coherent_nongaussian(lp, 1.0) - formulas.coherent_nongaussian_unit_gain(lp)) for lp in grid)
    value = formulas.coherent_nongaussian_unit_gain(0.67618)
    conclude(3, [
        ("gamma=1 limit equals unit-gain form within 1e-12", worst <= 1e-12, f"max dev {worst:.1e}"),
        ("unit-gain form at 0.67618 = 0.89270 +- 1e-5", abs(value - 0.89270) <= 1e-5, f"{value:.7f}"),
    ])


def test_criterion_04_entanglement_oracle():
    theta = derive_params(PhysicalParams.paper(), check=False).theta
    start = time.perf_counter()
    worst = {"tmsv": 0.0, "nongaussian": 0.0}
    worst_r = {}
    for r in np.linspace(0.1, 1.2, 12):
        lam = math.tanh(r)
        d = DerivedParams.from_channel(lam, 1.0, lam * math.cos(theta))
        # Literal cutoff 40; the tail tolerance is lifted so the truncation error is measured, not refused.
        for resource in worst:
            res = ent.entanglement(resource, d, cutoff=40, tol=1.0)
            if res.discrepancy > worst[resource]:
                worst[resource], worst_r[resource] = res.discrepancy, r
    elapsed = time.perf_counter() - start
    conclude(4, [
        ("subtracted state within 1e-6 at cutoff 40", worst["nongaussian"] <= 1e-6,
         f"max dev {worst['nongaussian']:.2e} at r={worst_r['nongaussian']:.2f}"),
        ("TMSV within 1e-6 at cutoff 40", worst["tmsv"] <= 1e-6,
         f"max dev {worst['tmsv']:.2e} at r={worst_r['tmsv']:.2f}"),
        ("runtime < 10 s", elapsed < 10.0, f"{elapsed:.2f} s"),
    ])


def test_criterion_05_distillation_advantage():
    checks = []
    logneg = run_sweep(RunConfig.build(figure="fig2a"))
    checks.append(("E_N(nongaussian) > E_N(tmsv) on all 19 points",
                    all(r.results["nongaussian"] > r.results["tmsv"] for r in logneg), f"{len(logneg)} points"))
    for fig, label in (("fig3a", "coherent"), ("fig3b", "single photon (oracle)"), ("fig3c", "squeezed xi=1")):
        recs = run_sweep(RunConfig.build(figure=fig))
        checks.append((f"F(nongaussian) > F(tmsv), {label}",
                        all(r.results["nongaussian"] > r.results["tmsv"] for r in recs), f"{len(recs)} points"))
    d = derive_params(PhysicalParams.paper(), check=False)
    spots = [
        ("E_N(tmsv)", ent.logneg_tmsv_analytic(d.r), 1.6702),
        ("E_N(nongaussian)", ent.logneg_subtracted_analytic(d.lam_prime), 2.3006),
        ("F coherent tmsv", formulas.coherent_tmsv(d.lam, d.gamma), 0.84423),
        ("F coherent nongaussian", formulas.coherent_nongaussian(d.lam_prime, d.gamma), 0.8962),
    ]
    for name, value, target in spots:
        checks.append((f"{name} = {target} +- 1e-4", abs(value - target) <= 1e-4, f"{value:.6f}"))
    conclude(5, checks)


def test_criterion_06_vacuum_resource_oracle():
    vac = DerivedParams.from_channel(0.0, 1.0)
    spec = InputStateSpec.single_photon()
    quad = fidelity_quadrature(spec, vac, "tmsv").fidelity
    fock_value = fidelity_fock(spec, teleported_density(spec, vac, "tmsv", cutoff=40))
    conclude(6, [
        ("quadrature 0.25 +- 1e-4", abs(quad - 0.25) <= 1e-4, f"{quad:.10f}"),
        ("Fock reconstruction 0.25 +- 1e-4", abs(fock_value - 0.25) <= 1e-4, f"{fock_value:.10f}"),
    ])


def test_criterion_07_appendix_adjudication(tmp_path, capsys):
    code = main(["validate", "--out", str(tmp_path)])
    report = json.loads((tmp_path / "validation_report.json").read_text(encoding="utf-8"))
    at_vacuum = [r for r in report["records"] if r["formula"] == "single_photon_tmsv"
                 and r["parameters"].get("point") == "vacuum_resource"]
    rec = at_vacuum[0]
    verdict = report["variant_verdicts"]["single_photon_tmsv:cubed_denominator"]
    fig3b = run_sweep(RunConfig.build(figure="fig3b"))
    tmsv = [r.results["tmsv"] for r in fig3b]
    ng = [r.results["nongaussian"] for r in fig3b]
    conclude(7, [
        ("printed single-photon/tmsv form gives 4 at lambda=0, gamma=1", rec["analytic"] == 4.0, repr(rec["analytic"])),
        ("flagged against oracle 0.25", rec["flagged"] and abs(rec["oracle"] - 0.25) <= 1e-6, f"{rec['oracle']:.8f}"),
        ("cubed-denominator variant adjudicated over the sweep", verdict["verdict"] in ("verified", "refuted"),
         f"{verdict['verdict']}, max dev {verdict['max_difference']:.1e}"),
        ("exit status 0 with whitelisted flags", code == EXIT_OK and report["status"] == "ok", f"exit {code}"),
        ("oracle curve rises past 0.5, nongaussian above tmsv",
         all(np.diff(tmsv) > 0) and all(np.diff(ng) > 0) and max(tmsv) > 0.5 and min(tmsv) < 0.5
         and all(n > t for n, t in zip(ng, tmsv)), f"tmsv {tmsv[0]:.3f}->{tmsv[-1]:.3f}"),
    ])


def test_criterion_08_monotonicity():
    xi_recs = run_sweep(RunConfig.build(figure="fig3d"))
    cfg = RunConfig.build(figure="fig5b")
    alpha_recs = run_sweep(cfg)
    phi_recs = run_sweep(cfg, cfg.raw["figure"]["inset"])
    checks = []
    for resource in ("tmsv", "nongaussian"):
        f_xi = np.array([r.results[resource] for r in xi_recs])
        f_a = np.array([r.results[resource] for r in alpha_recs])
        checks.append((f"F decreasing in xi ({resource})", bool(np.all(np.diff(f_xi) < 0)), f"{f_xi[0]:.3f}->{f_xi[-1]:.3f}"))
        checks.append((f"F decreasing in alpha0 ({resource})", bool(np.all(np.diff(f_a) < 0)), f"{f_a[0]:.3f}->{f_a[-1]:.3f}"))
    f_t = np.array([r.results["tmsv"] for r in alpha_recs])
    f_n = np.array([r.results["nongaussian"] for r in alpha_recs])
    checks.append(("tmsv cat curve crosses 0.5", f_t.max() > 0.5 > f_t.min(), f"{f_t.max():.3f}..{f_t.min():.3f}"))
    # Smoother decline: smaller steepest slope along the alpha0 sweep.
    slope_t, slope_n = np.abs(np.diff(f_t)).max(), np.abs(np.diff(f_n)).max()
    checks.append(("nongaussian steepest step below tmsv's", slope_n < slope_t, f"{slope_n:.4f} vs {slope_t:.4f}"))
    values = {r.value: r for r in alpha_recs}
    for resource in ("tmsv", "nongaussian"):
        spread = np.ptp([r.results[resource] for r in phi_recs])
        drop = values[1.0].results[resource] - values[2.0].results[resource]
        checks.append((f"phase spread < alpha0 1->2 drop ({resource})", spread < drop, f"{spread:.4f} vs {drop:.4f}"))
    conclude(8, checks)


def test_criterion_09_wigner_negativity():
    spec = InputStateSpec.cat(1.5)
    d = derive_params(PhysicalParams.paper(), check=False)
    bounds = figure_bounds(1.5)
    start = time.perf_counter()
    from omtele.states import input_state

    cat_grid = wigner_map(input_state(spec, 40), bounds, bounds, 161)
    cat_fourier = wigner_map(chi_input(spec), bounds, bounds, 161)
    minima, path_dev = {}, [float(np.max(np.abs(cat_grid.values - cat_fourier.values)))]
    for resource in ("tmsv", "nongaussian"):
        fourier = wigner_map(chi_teleported(spec, d, resource), bounds, bounds, 161)
        rho = teleported_density(spec, d, resource, cutoff=40)
        parity = wigner_parity(rho.matrix, (fourier.xs[None, :] + 1j * fourier.ps[:, None]) / math.sqrt(2))
        path_dev.append(float(np.max(np.abs(0.5 * parity - fourier.values))))
        minima[resource] = wigner_negativity(fourier, "beta")[0]
    elapsed = time.perf_counter() - start
    cat_min = wigner_negativity(cat_grid, "beta")[0]
    conclude(9, [
        ("input cat min W_beta = -0.36 +- 0.02", abs(cat_min + 0.36) <= 0.02, f"{cat_min:.5f}"),
        ("teleported via tmsv min W < 0", minima["tmsv"] < 0, f"{minima['tmsv']:.4f}"),
        ("teleported via nongaussian min W < 0", minima["nongaussian"] < 0, f"{minima['nongaussian']:.4f}"),
        ("parity vs Fourier within 1e-4", max(path_dev) <= 1e-4, f"max dev {max(path_dev):.1e}"),
        ("runtime < 60 s at 161x161", elapsed < 60, f"{elapsed:.1f} s"),
    ])


def _displacement_case(ratio):
    # Fixed Gc = g_c^2/kappa_c while g_c/kappa_c takes the requested value.
    base = PhysicalParams.paper()
    gc_script = base.g_c**2 / base.kappa_c
    kappa_c = gc_script / ratio**2
    return base.replace(g_c=ratio * kappa_c, kappa_c=kappa_c)


def _covariance_case(ratio):
    base = PhysicalParams.paper()
    g1_script = base.G1**2 / base.kappa1
    kappa1 = g1_script / ratio**2
    return base.replace(G1=ratio * kappa1, kappa1=kappa1)


def test_criterion_10_dynamics_oracles():
    disp = {}
    for ratio in (0.1, 0.05):
        m = displacement_ode_oracle(1.0, 0.0, _displacement_case(ratio))
        disp[ratio] = abs(m - 1.0)
    cov = {}
    for ratio in (0.1, 0.05, 0.025):
        p = _covariance_case(ratio)
        target = math.sinh(derive_params(p, check=False).r) ** 2
        cov[ratio] = abs(covariance_ode_oracle(p) - target) / target
    at_ref = covariance_ode_oracle(PhysicalParams.paper())
    conclude(10, [
        ("displacement within 5% at g_c/kappa_c = 0.1", disp[0.1] <= 0.05, f"{100 * disp[0.1]:.1f}%"),
        ("displacement within 1.5% at g_c/kappa_c = 0.05", disp[0.05] < 0.015, f"{100 * disp[0.05]:.1f}%"),
        ("occupancy within 10% of 0.87537 at G1/kappa1 = 0.1", abs(at_ref - 0.87537) / 0.87537 <= 0.10,
         f"{at_ref:.4f}"),
        ("occupancy error shrinks as the ratio halves", cov[0.1] > cov[0.05] > cov[0.025],
         " > ".join(f"{100 * v:.2f}%" for v in cov.values())),
    ])


@pytest.mark.slow
def test_criterion_11_determinism(tmp_path, capsys):
    runs = {}
    for label, threads in (("first", "1"), ("second", "1"), ("threaded", "4")):
        out = tmp_path / label
        for fid in FIGURE_IDS:
            assert main(["figure", fid, "--out", str(out), "--threads", threads]) == EXIT_OK
        assert main(["validate", "--out", str(out), "--threads", threads]) == EXIT_OK
        runs[label] = {p.name: p.read_bytes() for p in sorted(out.iterdir())}
    same_runs = runs["first"] == runs["second"]
    same_threads = runs["first"] == runs["threaded"]
    conclude(11, [
        ("two runs byte-identical", same_runs, f"{len(runs['first'])} files"),
        ("1 vs 4 threads byte-identical", same_threads, f"{len(runs['threaded'])} files"),
    ])
