import numpy as np
import pytest

from hedsense.fisher import (FisherSample, asymptotic_a0, asymptotic_b0, fisher_curve,
                             gaussian_cfi_heterodyne, gaussian_qfi, response_coefficients)
from hedsense.laurent import expand_generator
from hedsense.model import (InputSpec, build_couplings, build_generator, build_perturbation,
                            fig3_params)
from hedsense.response import SingularEvaluationError, response_direct
from hedsense.survey import theta_grid

GRID = theta_grid(1e-3, 1e-2, 20)


def test_qfi_reductions(rng):
    v = rng.normal(size=8)
    assert gaussian_qfi(np.zeros(8), np.eye(8), np.zeros(8), np.zeros((8, 8))) == 0.0
    assert gaussian_qfi(np.zeros(8), np.eye(8), v, np.zeros((8, 8))) == pytest.approx(2 * v @ v)


def test_cfi_reductions(rng):
    v = rng.normal(size=8)
    assert gaussian_cfi_heterodyne(np.zeros(8), 2 * np.eye(8), np.zeros(8), np.zeros((8, 8))) == 0.0
    assert gaussian_cfi_heterodyne(np.zeros(8), 2 * np.eye(8), v, np.zeros((8, 8))) == \
        pytest.approx(v @ v)


def test_qfi_covariance_term():
    # V = exp(t) I: trace term is n/2
    assert gaussian_qfi(np.zeros(4), np.eye(4), np.zeros(4), np.eye(4)) == pytest.approx(2.0)


def test_fisher_rejects_non_positive_definite():
    with pytest.raises(ValueError):
        gaussian_qfi(np.zeros(2), np.diag([1.0, -1.0]), np.zeros(2), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        gaussian_cfi_heterodyne(np.zeros(2), np.zeros((2, 2)), np.zeros(2), np.zeros((2, 2)))


def test_sample_error_bounds():
    s = FisherSample(0.1, 4.0, 1.0)
    assert s.dq_error == 0.5 and s.dc_error == 1.0
    assert FisherSample(0.1, 0.0, 0.0).dq_error == np.inf


@pytest.mark.parametrize("gen_name", ["hed_gen", "nonhed_gen", "regular_gen"])
def test_quantum_bound_dominates(request, gen_name, pert, inp, couplings):
    gen = request.getfixturevalue(gen_name)
    for s in fisher_curve(gen, pert, inp, couplings, theta_grid(1e-4, 1e-1, 13)):
        assert 0 <= s.cfi <= s.qfi * (1 + 1e-9)
        assert s.dq_error <= s.dc_error


def test_curve_skips_singular_samples(hed_gen, pert, inp, couplings):
    diag = []
    # a vanishing grid point is rejected before any evaluation
    with pytest.raises(ValueError):
        fisher_curve(hed_gen, pert, inp, couplings, [0.0, 1e-2])
    gen = build_generator(fig3_params(g=2.0, J=0.5))
    # n = H / t0 makes the pencil vanish at theta = t0
    t0 = 0.5
    custom = build_perturbation("custom", gen.H / t0)
    samples = fisher_curve(gen, custom, inp, couplings, [0.1, t0, 0.9], diagnostics=diag)
    assert [s.theta for s in samples] == [0.1, 0.9]
    assert len(diag) == 1 and "skipped" in diag[0]


def test_curve_validates_grid(regular_gen, pert, inp, couplings):
    with pytest.raises(ValueError):
        fisher_curve(regular_gen, pert, inp, couplings, [1e-2, 1e-3])
    with pytest.raises(ValueError):
        fisher_curve(regular_gen, pert, inp, couplings, [1e-2], analytic=True)


def test_analytic_curve_matches_numeric(nonhed_gen, nonhed_exp, pert, inp, couplings):
    a = fisher_curve(nonhed_gen, pert, inp, couplings, GRID[::5])
    b = fisher_curve(nonhed_gen, pert, inp, couplings, GRID[::5], expansion=nonhed_exp,
                     analytic=True)
    for x, y in zip(a, b):
        assert y.qfi == pytest.approx(x.qfi, rel=1e-5)
        assert y.cfi == pytest.approx(x.cfi, rel=1e-5)


def test_neumann_coefficients_match_response(regular_gen, pert):
    g0, g1 = response_coefficients(regular_gen.sH, pert.sn)
    t = 1e-4
    G = response_direct(regular_gen, pert, t).G
    assert np.linalg.norm(G - (g0 + t * g1)) <= 1e-6 * np.linalg.norm(G)
    with pytest.raises(ValueError):
        response_coefficients(regular_gen.sH, pert.sn, "bogus")


def _qfi_at(gen, pert, inp, cpl, theta):
    return fisher_curve(gen, pert, inp, cpl, [theta])[0].qfi


def test_a0_matches_small_theta_limit(regular_gen, pert, inp, couplings):
    a0 = asymptotic_a0(regular_gen, pert, inp, couplings).a0
    assert a0 > 0
    assert abs(a0 - _qfi_at(regular_gen, pert, inp, couplings, 1e-4)) / a0 <= 1e-2


def test_a0_printed_leading_factor_misses_limit(regular_gen, pert, inp, couplings):
    a0 = asymptotic_a0(regular_gen, pert, inp, couplings, variant="literal").a0
    assert abs(a0 - _qfi_at(regular_gen, pert, inp, couplings, 1e-4)) / a0 > 0.5


@pytest.mark.parametrize("kappa", [0.25, 0.5, 2.0])
def test_a0_limit_for_other_probe_rates(regular_gen, pert, inp, kappa):
    cpl = build_couplings(fig3_params().replace(kappa=kappa))
    a0 = asymptotic_a0(regular_gen, pert, inp, cpl).a0
    assert abs(a0 - _qfi_at(regular_gen, pert, inp, cpl, 1e-4)) / a0 <= 1e-2


def test_a0_decoupled_probe(regular_gen, pert, inp):
    cpl = build_couplings(fig3_params().replace(kappa=0.0))
    res = asymptotic_a0(regular_gen, pert, inp, cpl)
    # with no probe coupling Y = V_A and Z = 0
    np.testing.assert_allclose(res.Y, inp.V_in_A)
    assert res.a0 == 0.0


def test_a0_without_drive_is_trace_term(regular_gen, pert, couplings):
    inp0 = InputSpec(S_in=np.zeros(8))
    res = asymptotic_a0(regular_gen, pert, inp0, couplings)
    YiZ = np.linalg.solve(res.Y, res.Z)
    assert res.a0 == pytest.approx(0.5 * np.trace(YiZ @ YiZ))
    assert res.a0 == pytest.approx(_qfi_at(regular_gen, pert, inp0, couplings, 1e-4), rel=1e-2)


def test_a0_rejects_singular_generator(hed_gen, pert, inp, couplings):
    with pytest.raises(SingularEvaluationError):
        asymptotic_a0(hed_gen, pert, inp, couplings)


@pytest.mark.parametrize("gen_name,exp_name", [("hed_gen", "hed_exp"),
                                               ("nonhed_gen", "nonhed_exp")])
def test_b0_and_c0_match_scaled_limits(request, gen_name, exp_name, pert, inp, couplings):
    gen = request.getfixturevalue(gen_name)
    exp = request.getfixturevalue(exp_name)
    res = asymptotic_b0(exp, pert, inp, couplings)
    assert res.b0 > 0 and res.c0 > 0
    s = exp.pole_order
    # below ~5e-4 the HED covariance (~theta^-4) loses the derivative to roundoff
    t = 1e-3
    sample = fisher_curve(gen, pert, inp, couplings, [t])[0]
    assert sample.qfi * t ** (2 * s) == pytest.approx(res.b0, rel=1e-2)
    assert sample.cfi * t ** (2 * s) == pytest.approx(res.c0, rel=1e-2)


def test_b0_zero_perturbation(hed_exp, inp, couplings):
    zero = build_perturbation("custom", np.zeros((4, 4)))
    assert asymptotic_b0(hed_exp, zero, inp, couplings).b0 == 0.0


def test_b0_decoupled_probe(hed_exp, pert, inp):
    cpl = build_couplings(fig3_params().replace(kappa=0.0))
    assert asymptotic_b0(hed_exp, pert, inp, cpl).b0 == 0.0


def test_b0_printed_trace_form_misses_limit(hed_exp, pert, inp, couplings):
    lead = asymptotic_b0(hed_exp, pert, inp, couplings).b0
    printed = asymptotic_b0(hed_exp, pert, inp, couplings, variant="literal").b0
    assert abs(printed - lead) / lead > 0.2


def test_b0_needs_pole(regular_gen, pert, inp, couplings):
    exp = expand_generator(regular_gen.sH, pert.sn, K=2)
    with pytest.raises(ValueError):
        asymptotic_b0(exp, pert, inp, couplings)
    with pytest.raises(ValueError):
        asymptotic_b0(expand_generator(build_generator(fig3_params()).sH, pert.sn), pert, inp,
                      couplings, variant="bogus")
