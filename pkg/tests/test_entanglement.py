import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omtele import entanglement as ent
from omtele import states
from omtele.params import DerivedParams

# mpmath Schmidt sums, tests/oracles/mp_reference.py
E_N_TMSV_REF = 1.6694942904373656
E_N_NONGAUSSIAN_REF = 2.3006082710827714


def test_reference_values(reference_derived):
    assert ent.logneg_tmsv_analytic(reference_derived.r) == pytest.approx(E_N_TMSV_REF, abs=1e-12)
    assert ent.logneg_subtracted_analytic(reference_derived.lam_prime) == pytest.approx(E_N_NONGAUSSIAN_REF, abs=1e-12)


@pytest.mark.parametrize("resource", ["tmsv", "nongaussian"])
def test_numeric_matches_analytic_at_reference(reference_derived, resource):
    res = ent.entanglement(resource, reference_derived)
    assert res.discrepancy < 1e-7
    assert res.cutoff_used >= 40


@given(st.floats(0.05, 1.2))
def test_subtracted_closed_form_equals_schmidt_sum(r):
    lp = math.tanh(r) * 0.99
    d = DerivedParams.from_channel(math.tanh(r), 1.0, lp)
    cutoff = ent.adequate_cutoff("nongaussian", d, logneg_tol=1e-11)
    assert ent.truncated_logneg("nongaussian", d, cutoff) == pytest.approx(ent.logneg_subtracted_analytic(lp), abs=1e-10)


@given(st.floats(0.05, 0.8))
def test_partial_transpose_equals_schmidt(r):
    d = DerivedParams.from_channel(math.tanh(r))
    s = ent.resource_state("tmsv", d, ent.adequate_cutoff("tmsv", d))
    assert ent.logneg_numeric(s) == pytest.approx(ent.logneg_schmidt(s), abs=1e-10)


@given(st.floats(0.05, 1.0))
def test_subtraction_increases_entanglement(r):
    d = DerivedParams.from_channel(math.tanh(r), 1.0, math.tanh(r) * math.cos(0.14))
    assert ent.logneg_subtracted_analytic(d.lam_prime) > ent.logneg_tmsv_analytic(d.r)


def test_adequate_cutoff_grows_with_squeezing():
    small = DerivedParams.from_channel(math.tanh(0.4))
    large = DerivedParams.from_channel(math.tanh(1.2))
    assert ent.adequate_cutoff("tmsv", small) == 40
    assert ent.adequate_cutoff("tmsv", large) > 100


def test_vacuum_limits():
    assert ent.logneg_tmsv_analytic(0.0) == 0.0
    assert ent.logneg_subtracted_analytic(0.0) == 0.0
    with pytest.raises(ValueError):
        ent.logneg_tmsv_analytic(-0.1)
    with pytest.raises(ValueError):
        ent.logneg_subtracted_analytic(1.0)


def test_schmidt_rejects_off_diagonal():
    from omtele.fock import TruncatedState

    with pytest.raises(ValueError):
        ent.logneg_schmidt(TruncatedState([[0.6, 0.8], [0, 0]]))


def test_numeric_rejects_single_mode():
    with pytest.raises(ValueError):
        ent.logneg_numeric(states.input_state(states.InputStateSpec.single_photon(), 10))
