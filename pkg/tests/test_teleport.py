import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from omtele.errors import UnsupportedFormulaError
from omtele.params import DerivedParams
from omtele.states import InputStateSpec
from omtele.teleport import chi, formulas, reconstruct
from omtele.teleport.fidelity import fidelity_analytic, fidelity_quadrature, overlap_quadrature

# tests/oracles/mp_reference.py: mpmath integrals of the same slice forms.
MP = {
    ("coherent", "tmsv"): 0.84422781410595289,
    ("coherent", "nongaussian"): 0.89623008067663177,
    ("single_photon", "tmsv"): 0.62218372186112475,
    ("single_photon", "nongaussian"): 0.75413110370310015,
    ("squeezed1", "tmsv"): 0.64250528383453753,
    ("squeezed1", "nongaussian"): 0.75129093779210174,
    ("squeezed2", "tmsv"): 0.29999380813113772,
    ("squeezed2", "nongaussian"): 0.39799146384852564,
    ("cat1.5", "tmsv"): 0.53311346509121638,
    ("cat1.5", "nongaussian"): 0.66875193707070935,
}
SPECS = {
    "coherent": InputStateSpec.coherent(0j),
    "single_photon": InputStateSpec.single_photon(),
    "squeezed1": InputStateSpec.squeezed(1.0),
    "squeezed2": InputStateSpec.squeezed(2.0),
    "cat1.5": InputStateSpec.cat(1.5),
}


@pytest.mark.parametrize("key", list(MP))
def test_quadrature_matches_mpmath(reference_derived, key):
    name, resource = key
    res = fidelity_quadrature(SPECS[name], reference_derived, resource)
    assert res.fidelity == pytest.approx(MP[key], abs=1e-8)
    assert res.error <= 1e-6


@pytest.mark.parametrize("resource", ["tmsv", "nongaussian"])
def test_printed_coherent_forms_match_oracle(reference_derived, resource):
    res = fidelity_analytic(SPECS["coherent"], reference_derived, resource)
    assert not res.flagged
    assert res.fidelity == pytest.approx(MP[("coherent", resource)], abs=1e-12)


def test_printed_squeezed_tmsv_matches_oracle(reference_derived):
    for name in ("squeezed1", "squeezed2"):
        assert formulas.printed_fidelity(SPECS[name], reference_derived, "tmsv") == pytest.approx(
            MP[(name, "tmsv")], abs=1e-12)


@pytest.mark.parametrize("key", ["single_photon_tmsv", "single_photon_nongaussian", "squeezed_nongaussian"])
def test_known_printed_discrepancies_are_flagged(reference_derived, key):
    spec = {"single_photon_tmsv": SPECS["single_photon"], "single_photon_nongaussian": SPECS["single_photon"],
            "squeezed_nongaussian": SPECS["squeezed1"]}[key]
    resource = key.rsplit("_", 1)[1]
    res = fidelity_analytic(spec, reference_derived, resource)
    printed = res.diagnostics[0]
    assert printed.formula == key and printed.flagged


def test_variant_readings(reference_derived):
    res = fidelity_analytic(SPECS["single_photon"], reference_derived, "tmsv")
    variants = {r.formula: r for r in res.diagnostics if r.kind == "variant"}
    assert not variants["single_photon_tmsv:cubed_denominator"].flagged
    res = fidelity_analytic(SPECS["single_photon"], reference_derived, "nongaussian")
    variants = {r.formula: r for r in res.diagnostics if r.kind == "variant"}
    assert variants["single_photon_nongaussian:cubed_bracket"].flagged
    assert not variants["single_photon_nongaussian:fifth_power_bracket"].flagged


def test_cat_has_no_closed_form(reference_derived):
    with pytest.raises(UnsupportedFormulaError):
        formulas.printed_fidelity(SPECS["cat1.5"], reference_derived, "tmsv")


@given(st.floats(0.0, 0.9))
def test_unit_gain_identity(lp):
    assert formulas.coherent_nongaussian(lp, 1.0) == pytest.approx(formulas.coherent_nongaussian_unit_gain(lp), abs=1e-12)


@given(st.floats(0.0, 0.9))
def test_squeezed_zero_reduces_to_coherent_limit(lam):
    d = DerivedParams.from_channel(lam)
    val = formulas.printed_fidelity(InputStateSpec.squeezed(0.0), d, "tmsv")
    assert val == pytest.approx((1 + lam) / 2, abs=1e-12)


@given(st.floats(0.0, 0.85), st.floats(0.3, 1.0))
def test_coherent_fidelity_is_bounded(lam, gamma):
    f = formulas.coherent_tmsv(lam, gamma)
    assert 0.0 < f <= 1.0 + 1e-12


@given(st.floats(0.0, 0.8), st.floats(0.5, 1.0))
def test_coherent_fidelity_independent_of_amplitude_at_unit_gain(lam, gamma):
    # At gamma = 1 the channel is displacement covariant; beta drops out.
    d = DerivedParams.from_channel(lam, 1.0)
    a = fidelity_quadrature(InputStateSpec.coherent(0j), d, "tmsv", points=101).fidelity
    b = fidelity_quadrature(InputStateSpec.coherent(0.7 - 0.4j), d, "tmsv", points=101).fidelity
    assert a == pytest.approx(b, abs=1e-8)


def test_vacuum_resource_bounds():
    vac = DerivedParams.from_channel(0.0)
    assert fidelity_quadrature(SPECS["coherent"], vac, "tmsv").fidelity == pytest.approx(0.5, abs=1e-10)
    assert fidelity_quadrature(SPECS["single_photon"], vac, "tmsv").fidelity == pytest.approx(0.25, abs=1e-10)
    assert formulas.coherent_tmsv(0.0, 1.0) == 0.5


@pytest.mark.parametrize("name", ["coherent", "single_photon", "squeezed1", "cat1.5"])
def test_input_chi_matches_fock_trace(name):
    from omtele.states import input_state

    spec = SPECS[name]
    cutoff = 80
    psi = input_state(spec, cutoff).amplitudes
    rho = np.outer(psi, psi.conj())
    alphas = np.array([0.2, 0.5 - 0.3j, 1.1j, -0.8 + 0.6j])
    assert np.allclose(chi.chi_input(spec)(alphas), chi.chi_fock(rho, alphas), atol=1e-10)


def test_chi_is_one_at_origin(reference_derived):
    for name, spec in SPECS.items():
        assert chi.chi_input(spec)(np.array([0j]))[0] == pytest.approx(1.0)
    for resource in ("tmsv", "nongaussian"):
        assert chi.chi_shared(reference_derived, resource, np.array([0j]))[0] == pytest.approx(1.0)


@pytest.mark.parametrize("resource", ["tmsv", "nongaussian"])
def test_shared_slice_against_fock_at_unit_gain(resource):
    d = DerivedParams.from_channel(0.6, 1.0, 0.55)
    alphas = np.array([0.3, 0.7 + 0.2j, 1.1j])
    assert np.allclose(chi.chi_shared(d, resource, alphas), chi.chi_shared_fock(d, resource, alphas, 60), atol=1e-9)


def test_tmsv_slice_against_fock_below_unit_gain(reference_derived):
    alphas = np.array([0.3, 0.7 + 0.2j, 1.1j])
    assert np.allclose(chi.chi_shared(reference_derived, "tmsv", alphas),
                       chi.chi_shared_fock(reference_derived, "tmsv", alphas), atol=1e-9)


def test_overlap_quadrature_error_bar():
    one = chi.chi_input(SPECS["coherent"])
    value, err = overlap_quadrature(one, one)
    # (1/pi) Int exp(-|a|^2) d^2a = 1: a pure state overlaps itself fully.
    assert value == pytest.approx(1.0, abs=1e-12) and err < 1e-10


@pytest.mark.parametrize("spec, expected", [(SPECS["coherent"], 0.5), (SPECS["single_photon"], 0.25)])
def test_reconstruction_of_vacuum_channel(spec, expected):
    vac = DerivedParams.from_channel(0.0)
    rho = reconstruct.teleported_density(spec, vac, "tmsv", cutoff=30)
    assert rho.is_physical(1e-7)
    assert reconstruct.fidelity_fock(spec, rho) == pytest.approx(expected, abs=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("resource", ["tmsv", "nongaussian"])
def test_cat_fidelity_with_reconstruction(reference_derived, resource):
    res = reconstruct.fidelity_cat(SPECS["cat1.5"], reference_derived, resource)
    assert res.fidelity == pytest.approx(MP[("cat1.5", resource)], abs=1e-8)
    overlap = res.diagnostics[0]
    assert overlap.formula == "cat_fock_overlap" and not overlap.flagged


def test_input_reconstruction_round_trip():
    rho = reconstruct.input_density(SPECS["single_photon"], cutoff=20)
    assert rho.matrix[1, 1].real == pytest.approx(1.0, abs=1e-6)


def test_fidelity_cat_rejects_other_inputs(reference_derived):
    with pytest.raises(ValueError):
        reconstruct.fidelity_cat(SPECS["coherent"], reference_derived, "tmsv")


@pytest.mark.parametrize("threads", [1, 3])
def test_quadrature_is_thread_independent(reference_derived, threads):
    a = fidelity_quadrature(SPECS["cat1.5"], reference_derived, "nongaussian", threads=1).fidelity
    b = fidelity_quadrature(SPECS["cat1.5"], reference_derived, "nongaussian", threads=threads).fidelity
    assert a == b


def test_reduced_tmsv_option(reference_derived):
    full = fidelity_quadrature(SPECS["coherent"], reference_derived, "tmsv").fidelity
    reduced = fidelity_quadrature(SPECS["coherent"], reference_derived, "tmsv", use_reduced=True).fidelity
    assert reduced < full
    assert reduced == pytest.approx(formulas.coherent_tmsv(reference_derived.lam_prime, reference_derived.gamma),
                                    abs=1e-10)
    assert math.isfinite(reduced)
