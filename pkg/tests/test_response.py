import numpy as np
import pytest

from hedsense.matops import symplectic_form
from hedsense.model import InputSpec, build_couplings, build_perturbation, fig3_params
from hedsense.response import (GaussianState, SingularEvaluationError, default_step,
                               heterodyne_statistics, laurent_state_derivatives,
                               output_amplitude, output_covariance, output_state,
                               response_direct, response_from_expansion, state_builder,
                               theta_derivatives)

SF = symplectic_form(4)


def test_response_direct_definition(regular_gen, pert):
    r = response_direct(regular_gen, pert, 0.1)
    np.testing.assert_allclose(r.G, SF @ np.linalg.inv(0.1 * np.eye(8) - regular_gen.sH))
    assert r.source == "direct_inverse"


def test_response_with_detuning(regular_gen, pert):
    r = response_direct(regular_gen, pert, 0.1, omega=0.3, omega0=0.1)
    np.testing.assert_allclose(r.G, SF @ np.linalg.inv(0.3 * np.eye(8) - regular_gen.sH))


def test_response_on_singularity_raises(hed_gen, pert):
    with pytest.raises(SingularEvaluationError):
        response_direct(hed_gen, pert, 0.0)


@pytest.mark.parametrize("theta", np.logspace(-4, -1, 7))
def test_series_and_direct_response_agree(nonhed_gen, nonhed_exp, pert, theta):
    d = response_direct(nonhed_gen, pert, theta).G
    s = response_from_expansion(nonhed_exp, theta).G
    assert np.linalg.norm(s - d) <= 1e-6 * np.linalg.norm(d)


def test_covariance_symmetric_positive(hed_gen, nonhed_gen, regular_gen, pert, inp, couplings):
    for gen in (hed_gen, nonhed_gen, regular_gen):
        for theta in (1e-3, 1e-2, 1e-1):
            V = output_covariance(response_direct(gen, pert, theta), inp, couplings)
            np.testing.assert_array_equal(V, V.T)
            assert np.linalg.eigvalsh(V).min() > 0


def test_decoupled_probe_passes_input_through(regular_gen, pert, inp):
    cpl = build_couplings(fig3_params().replace(kappa=0.0))
    st = output_state(response_direct(regular_gen, pert, 0.05), inp, cpl)
    np.testing.assert_array_equal(st.amplitude, inp.S_in)
    np.testing.assert_allclose(st.covariance, inp.V_in_A)


def test_amplitude_formula(nonhed_gen, pert, inp, couplings):
    r = response_direct(nonhed_gen, pert, 0.01)
    np.testing.assert_allclose(output_amplitude(r, inp, couplings),
                               (np.eye(8) - r.G) @ inp.S_in)


def test_heterodyne_adds_vacuum():
    st = GaussianState(np.ones(8), 3 * np.eye(8))
    het = heterodyne_statistics(st)
    np.testing.assert_array_equal(het.covariance, 4 * np.eye(8))
    np.testing.assert_array_equal(het.amplitude, st.amplitude)


def test_default_step():
    assert default_step(1e-3) == 1e-6
    assert default_step(1.0) == 1e-4


def test_derivatives_of_quadratic_builder_are_exact():
    def build(t):
        return GaussianState(np.array([t * t, 3 * t]), np.diag([t ** 3, 1.0]))
    dS, dV = theta_derivatives(build, 0.5)
    np.testing.assert_allclose(dS, [1.0, 3.0], atol=1e-10)
    np.testing.assert_allclose(dV, np.diag([0.75, 0.0]), atol=1e-9)


def test_richardson_step_is_stable(nonhed_gen, pert, inp, couplings):
    b = state_builder(nonhed_gen, pert, inp, couplings)
    theta = 1e-2
    dS1, dV1 = theta_derivatives(b, theta, 1e-6)
    dS2, dV2 = theta_derivatives(b, theta, 5e-7)
    assert np.linalg.norm(dS1 - dS2) <= 1e-6 * np.linalg.norm(dS1)
    assert np.linalg.norm(dV1 - dV2) <= 1e-6 * np.linalg.norm(dV1)


@pytest.mark.parametrize("theta", [1e-3, 1e-2])
def test_analytic_and_numeric_state_derivatives(hed_gen, nonhed_gen, hed_exp, nonhed_exp,
                                                pert, inp, couplings, theta):
    for gen, exp in ((hed_gen, hed_exp), (nonhed_gen, nonhed_exp)):
        b = state_builder(gen, pert, inp, couplings)
        dS, dV = theta_derivatives(b, theta)
        aS, aV = laurent_state_derivatives(exp, theta, inp, couplings)
        assert np.linalg.norm(aS - dS) <= 1e-5 * np.linalg.norm(aS)
        assert np.linalg.norm(aV - dV) <= 1e-5 * np.linalg.norm(aV)


def test_series_builder_matches_direct_builder(nonhed_gen, nonhed_exp, pert, inp, couplings):
    a = state_builder(nonhed_gen, pert, inp, couplings)(1e-3)
    b = state_builder(nonhed_gen, pert, inp, couplings, expansion=nonhed_exp)(1e-3)
    assert np.linalg.norm(b.amplitude - a.amplitude) <= 1e-7 * np.linalg.norm(a.amplitude)
    assert np.linalg.norm(b.covariance - a.covariance) <= 1e-7 * np.linalg.norm(a.covariance)


def test_thermal_input_raises_noise(regular_gen, pert, couplings):
    r = response_direct(regular_gen, pert, 0.01)
    cold = output_covariance(r, InputSpec(n_A=0.0, n_B=0.0), couplings)
    hot = output_covariance(r, InputSpec(n_A=2.0, n_B=2.0), couplings)
    assert np.linalg.eigvalsh(hot - cold).min() > 0
