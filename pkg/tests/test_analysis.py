import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cubli import analysis, control, plant, rotor
from cubli.control import DesignSpec
from cubli.errors import DegenerateInputError, DivergenceError, ValidationError
from cubli.plant import CubliParams, Fidelity, FrictionParams, GravityModel

SQ2 = math.sqrt(2.0) / 2.0


@pytest.fixture(scope="module")
def dp():
    return plant.derive(CubliParams(), FrictionParams())


def test_char_poly_identity():
    assert_allclose(analysis.char_poly(np.eye(2)), [1.0, -2.0, 1.0], atol=1e-15)


def test_char_poly_companion_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(50):
        coeffs = np.concatenate([[1.0], rng.uniform(-3, 3, 4)])
        assert_allclose(analysis.char_poly(analysis.companion_matrix(coeffs)), coeffs, atol=1e-9)


def test_char_poly_input_validation():
    with pytest.raises(ValidationError):
        analysis.char_poly(np.zeros((2, 3)))
    with pytest.raises(ValidationError):
        analysis.char_poly(np.zeros((9, 9)))


def test_poly_roots_quadratic():
    zeta, wn = 0.5, 3.0
    roots = np.sort_complex(analysis.poly_roots([1.0, 2 * zeta * wn, wn**2]))
    expected = np.sort_complex(
        np.array([-zeta * wn - 1j * wn * math.sqrt(1 - zeta**2), -zeta * wn + 1j * wn * math.sqrt(1 - zeta**2)])
    )
    assert_allclose(roots, expected, atol=1e-12)


def test_poly_roots_with_exact_zero_roots():
    # (s - 1)(s + 1) s^2
    roots = np.sort_complex(analysis.poly_roots([1.0, 0.0, -1.0, 0.0, 0.0]))
    assert_allclose(roots, [-1.0, 0.0, 0.0, 1.0], atol=1e-12)


def test_poly_roots_residuals():
    rng = np.random.default_rng(1)
    for _ in range(50):
        coeffs = np.concatenate([[1.0], rng.uniform(-2, 2, 5)])
        for root in analysis.poly_roots(coeffs):
            value = np.polyval(coeffs, root)
            scale = np.sum(np.abs(coeffs) * np.abs(root) ** np.arange(len(coeffs) - 1, -1, -1))
            assert abs(value) < 1e-8 * max(scale, 1.0)


def test_poly_roots_degenerate():
    with pytest.raises(DegenerateInputError):
        analysis.poly_roots([0.0, 0.0])
    assert len(analysis.poly_roots([3.0])) == 0


def test_controllability_trivial_cases():
    assert analysis.controllability_rank(np.zeros((3, 3)), np.array([[1.0], [0.0], [0.0]])) == 1
    # double integrator
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[0.0], [1.0]])
    assert analysis.controllability_rank(a, b) == 2


@pytest.mark.parametrize("model", list(GravityModel))
def test_open_loop_controllability_rank_is_four(model):
    fp = FrictionParams()
    dp = plant.derive(CubliParams(), fp, model)
    a, b = plant.linearize(dp, fp, model)
    assert analysis.controllability_rank(a, b, tol=1e-9) == 4


def test_controllability_rank_invariant_under_state_rescaling(dp):
    fp = FrictionParams()
    a, b = plant.linearize(dp, fp)
    rng = np.random.default_rng(2)
    for _ in range(20):
        scale = np.diag(rng.uniform(0.1, 10.0, 5))
        inv = np.linalg.inv(scale)
        assert analysis.controllability_rank(scale @ a @ inv, scale @ b) == 4


def test_fd_jacobian_on_linear_map():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4))
    x0 = rng.normal(size=4)
    assert np.max(np.abs(analysis.fd_jacobian(lambda x: a @ x, x0) - a)) < 1e-9


def test_fd_jacobian_rejects_non_finite():
    def bad(x):
        with np.errstate(invalid="ignore"):
            return np.sqrt(x)  # nan when probed below zero

    with pytest.raises(DivergenceError):
        analysis.fd_jacobian(bad, np.array([0.0]))


def test_closed_loop_matrix_zero_gains_structure(dp):
    m = analysis.closed_loop_matrix(control.Gains(0.0, 0.0, 0.0, 0.0), dp)
    expected = np.zeros((4, 4))
    expected[0, 2] = -1.0
    expected[1, 3] = 1.0
    expected[3, 0] = -dp.delta
    assert_allclose(m, expected)


def test_closed_loop_char_poly_identity(dp):
    # coefficient pattern in terms of the gains and the plant ratios
    g = control.Gains(k_p=2.0, k_d=5.0, k_pw=3.0, k_dw=7.0)
    coeffs = analysis.char_poly(analysis.closed_loop_matrix(g, dp))
    expected = [
        1.0,
        g.k_d - dp.gamma * g.k_dw,
        g.k_p - dp.gamma * g.k_pw,
        dp.delta * g.k_dw,
        dp.delta * g.k_pw,
    ]
    assert_allclose(coeffs, expected, rtol=1e-12)


def test_gain_synthesis_identity_random_specs(dp):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        spec = DesignSpec(
            zeta=rng.uniform(0.3, 1.0), omega_n=rng.uniform(2, 20), alpha=rng.uniform(0.0, 0.5)
        )
        coeffs = analysis.char_poly(analysis.closed_loop_matrix(control.full_gains(spec, dp), dp))
        target = analysis.design_poly(spec)
        worst = max(worst, np.max(np.abs(coeffs - target)) / np.max(np.abs(target)))
    assert worst < 1e-9


def test_closed_loop_eigenvalues_reference_case(dp):
    dp_lit = plant.derive(CubliParams(), FrictionParams(), GravityModel.PAPER_LITERAL)
    spec = DesignSpec(zeta=SQ2, omega_n=1.5 * dp_lit.omega_0, alpha=0.1)
    eigs = np.linalg.eigvals(analysis.closed_loop_matrix(control.full_gains(spec, dp_lit), dp_lit))
    expected = analysis.designed_poles(spec)
    assert analysis.spectrum_mismatch(eigs, expected) < 1e-6
    # the textbook numbers: -7.27 +/- 7.27j and a double pole at -0.727
    assert sorted(expected.real)[0] == pytest.approx(-7.27, rel=1e-2)
    assert max(expected.real) == pytest.approx(-0.727, rel=1e-2)


def test_closed_loop_matrix_matches_end_to_end_finite_differences(dp):
    # drive regulator + feedback linearization + reduced plant through the
    # (sigma_e, theta_w, omega_c, omega_w) coordinates and differentiate
    fp = FrictionParams()
    spec = DesignSpec(zeta=SQ2, omega_n=1.5 * dp.omega_0, alpha=0.1)
    gains = control.full_gains(spec, dp)
    q_r = rotor.UPRIGHT
    theta_r = rotor.to_angle(q_r)

    def closed_loop_rate(z):
        sigma_e, theta_w, omega_c, omega_w = z
        theta = theta_r - math.atan(sigma_e)
        q = rotor.from_angle(theta)
        state = plant.State(q, theta_w, omega_c, omega_w)
        u = control.regulator_full(state, q_r, gains)
        tau = control.feedback_linearize(u, q, omega_w, dp, fp, GravityModel.CONSISTENT)
        rate = plant.dynamics_rate(
            state.as_array(), tau, dp, fp, GravityModel.CONSISTENT, Fidelity.PAPER_APPROX
        )
        sigma_dot = -(1.0 + sigma_e**2) * omega_c
        return np.array([sigma_dot, rate[2], rate[3], rate[4]])

    jac = analysis.fd_jacobian(closed_loop_rate, np.zeros(4))
    assert np.max(np.abs(jac - analysis.closed_loop_matrix(gains, dp))) < 1e-5


def test_spectrum_mismatch():
    expected = np.array([-1.0, -1.0, -2.0 + 1j, -2.0 - 1j])
    computed = np.array([-1.0 + 1e-8, -1.0 - 1e-8, -2.0 + 1j, -2.0 - 1j])
    # the split double root matches through its cluster mean
    assert analysis.spectrum_mismatch(computed, expected) < 1e-12
    shifted = computed + 0.01
    assert analysis.spectrum_mismatch(shifted, expected) > 1e-3
    with pytest.raises(ValidationError):
        analysis.spectrum_mismatch(computed[:3], expected)


def test_design_poly_expansion():
    spec = DesignSpec(zeta=0.5, omega_n=2.0, alpha=0.25)
    z, wn, a = spec.zeta, spec.omega_n, spec.alpha
    expected = [
        1.0,
        2 * z * wn * (1 + a),
        wn**2 * (1 + a * z**2 * (4 + a)),
        2 * a * z * wn**3 * (1 + a * z**2),
        a**2 * z**2 * wn**4,
    ]
    assert_allclose(analysis.design_poly(spec), expected, rtol=1e-14)
