import numpy as np
import pytest

from src.errors import DomainError, PoleError
from src.felder import FelderParams, felder_rmatrix, felder_sample_filter
from src.gauge import (MultiplicativeForm, closedness_residual, constant_form, d_gamma,
                       default_nome, delta_s, exactness_witness, form_deviation, gauge_reparam,
                       gauge_scale, gauge_twist, inversion_residual, is_closed, is_exact_witness,
                       is_gl_type, one_form, paper_two_form, random_diagonal_one_form,
                       random_two_form, reconstruct_twisted_rmatrix, sigma, sigma_two_form,
                       staircase_rho, twist_equivalence, xi_form)
from src.qdybe import (basic_rep, morphism_residual, qdybe_residual, qdybe_sides, rep_residual,
                       tensor_reps, twist_rep)
from src.sampling import SampleStream, all_of, evaluation_probe
from src.special_functions import qgamma, theta1
from src.weight_core import DynamicalMorphism

GAMMA = 0.31 + 0.07j
TOL = 1e-9


def _params(n):
    return FelderParams(n, 2j, GAMMA)


def _qdybe_samples(params, R, count, seed=41, stagger=0.0):
    stream = SampleStream(seed, 2, lam_real=0.4, lam_imag=0.1, stagger=stagger)
    accept = all_of(felder_sample_filter(params),
                    evaluation_probe(lambda s: qdybe_sides(R, *s.u, s.lam)))
    return stream.draw(count, 3, params.n, accept=accept)


def _form_samples(n, count=10, seed=43, stagger=0.3):
    return SampleStream(seed, 2, lam_real=0.4, lam_imag=0.1, stagger=stagger).draw(count, 1, n)


def test_form_evaluation_checks_tuples():
    phi = constant_form(2, 3)
    assert phi((0, 2), np.zeros(3)) == 1
    with pytest.raises(DomainError):
        phi((1, 1), np.zeros(3))
    with pytest.raises(DomainError):
        phi((0,), np.zeros(3))
    zero = MultiplicativeForm(1, 2, lambda idx, lam: 0.0)
    with pytest.raises(PoleError):
        zero((0,), np.zeros(2))


def test_d_gamma_squares_to_one():
    rng = np.random.default_rng(3)
    psi = random_diagonal_one_form(rng, 4)
    samples = _form_samples(4, stagger=0.0)
    assert closedness_residual(d_gamma(psi, GAMMA), GAMMA, samples) <= 1e-10
    assert inversion_residual(d_gamma(psi, GAMMA), samples) <= 1e-12


def test_d_gamma_of_one_form_by_hand():
    psi = one_form([lambda lam: np.exp(lam[0] * lam[1]), lambda lam: 2 + lam[0]])
    lam = np.array([0.3, 0.2j])
    phi = d_gamma(psi, GAMMA)
    # (dψ)_{0,1} = δ₀ψ₁ / δ₁ψ₀
    delta0_psi1 = (2 + lam[0]) / (2 + lam[0] - GAMMA)
    delta1_psi0 = np.exp(lam[0] * lam[1]) / np.exp(lam[0] * (lam[1] - GAMMA))
    assert phi((0, 1), lam) == pytest.approx(delta0_psi1 / delta1_psi0)


def test_d_gamma_requires_rank():
    with pytest.raises(DomainError):
        d_gamma(constant_form(2, 2), GAMMA)


def test_random_two_form_is_not_closed():
    phi = random_two_form(np.random.default_rng(5), 3)
    samples = _form_samples(3, stagger=0.0)
    assert inversion_residual(phi, samples) <= 1e-12
    assert not is_closed(phi, GAMMA, samples)


def test_sigma_form_is_exact():
    for n, gamma in [(2, 1.0), (3, 1.0), (2, GAMMA)]:
        phi = sigma_two_form(0.6, 3, n, gamma)
        psi = exactness_witness(0.6, 3, n, gamma)
        samples = _form_samples(n)
        assert form_deviation(phi, d_gamma(psi, gamma), samples) <= 1e-10
        assert is_exact_witness(phi, psi, gamma, samples)
        assert closedness_residual(phi, gamma, samples) <= 1e-10
        assert inversion_residual(phi, samples) <= 1e-10


def test_sigma_antisymmetry():
    lam = np.array([0.2 + 0.1j, -0.3 + 0.4j, 0.05 + 0.7j])
    p = default_nome(0.6, 3)
    assert abs(p) < 1
    value = sigma(2, 0, lam, 0.6, 3, p, staircase_rho(3))
    assert value * sigma(0, 2, lam, 0.6, 3, p, staircase_rho(3)) == pytest.approx(1)
    with pytest.raises(DomainError):
        sigma(1, 1, lam, 0.6, 3, p)


def test_staircase_rho():
    assert np.allclose(staircase_rho(3), [1, 0, -1])
    assert np.allclose(staircase_rho(2), [0.5, -0.5])


def test_twist_by_exact_form_keeps_qdybe():
    params = _params(3)
    R = felder_rmatrix(params)
    psi = random_diagonal_one_form(np.random.default_rng(7), 3)
    twisted = gauge_twist(R, d_gamma(psi, GAMMA))
    samples = _qdybe_samples(params, twisted, 4)
    assert is_gl_type(twisted, samples)
    assert qdybe_residual(twisted, samples) <= TOL


def test_twist_by_sigma_form_keeps_qdybe():
    params = _params(2)
    R = felder_rmatrix(params)
    twisted = gauge_twist(R, sigma_two_form(0.6, 3, 2, GAMMA))
    assert qdybe_residual(twisted, _qdybe_samples(params, twisted, 6)) <= TOL


def test_twist_rejects_non_closed_form():
    R = felder_rmatrix(_params(3))
    phi = random_two_form(np.random.default_rng(5), 3)
    with pytest.raises(DomainError):
        gauge_twist(R, phi, closed_check_samples=_form_samples(3, stagger=0.0))


def test_twist_rejects_wrong_rank():
    R = felder_rmatrix(_params(2))
    with pytest.raises(DomainError):
        gauge_twist(R, constant_form(2, 3))


def test_twist_only_scales_alpha_entries():
    params = _params(2)
    R = felder_rmatrix(params)
    phi = MultiplicativeForm(2, 2, lambda idx, lam: 3.0 if idx == (0, 1) else 1 / 3)
    lam = np.array([0.2, -0.15])
    M, T = R(0.4, lam), gauge_twist(R, phi)(0.4, lam)
    assert T[1, 1] == pytest.approx(3 * M[1, 1])
    assert T[2, 2] == pytest.approx(M[2, 2] / 3)
    assert T[2, 1] == pytest.approx(M[2, 1])
    assert T[1, 2] == pytest.approx(M[1, 2])


def test_reparam_halves_step():
    params = _params(2)
    R = felder_rmatrix(params)
    moved = gauge_reparam(R, 1.0, 2.0, [0.05, -0.02])
    assert moved.step == pytest.approx(GAMMA / 2)
    stream = SampleStream(47, 2, lam_real=0.2, lam_imag=0.05)
    samples = stream.draw(5, 3, 2, accept=evaluation_probe(lambda s: qdybe_sides(moved, *s.u, s.lam)))
    assert qdybe_residual(moved, samples) <= TOL


def test_reparam_rejects_zero():
    R = felder_rmatrix(_params(2))
    with pytest.raises(DomainError):
        gauge_reparam(R, 0, 1)
    with pytest.raises(DomainError):
        gauge_reparam(R, 1, 2, [0.0])


def test_scale_keeps_qdybe():
    params = _params(2)
    R = felder_rmatrix(params)
    scaled = gauge_scale(R, lambda u: 1.7 * np.exp(0.8 * u))
    assert qdybe_residual(scaled, _qdybe_samples(params, scaled, 5)) <= TOL


def test_reconstructed_rmatrix_is_the_twist():
    params = _params(3)
    R = felder_rmatrix(params)
    zeta = random_diagonal_one_form(np.random.default_rng(9), 3)
    rebuilt = reconstruct_twisted_rmatrix(R, zeta)
    twisted = gauge_twist(R, d_gamma(zeta, GAMMA))
    for sample in _qdybe_samples(params, twisted, 3):
        u = sample.u[0] - sample.u[1]
        assert np.allclose(rebuilt(u, sample.lam), twisted(u, sample.lam), atol=1e-12)


def test_equivalence_maps_representations():
    params = _params(2)
    R = felder_rmatrix(params)
    zeta = random_diagonal_one_form(np.random.default_rng(11), 2)
    twisted = gauge_twist(R, d_gamma(zeta, GAMMA))
    rep = twist_equivalence(basic_rep(R), zeta)
    assert rep_residual(rep, twisted, _qdybe_samples(params, twisted, 5)) <= TOL


def test_equivalence_rejects_wrong_degree():
    R = felder_rmatrix(_params(2))
    with pytest.raises(DomainError):
        twist_equivalence(basic_rep(R), constant_form(2, 2))


def test_equivalence_commutes_with_tensor_product():
    params = _params(2)
    R = felder_rmatrix(params)
    zeta = random_diagonal_one_form(np.random.default_rng(13), 2)
    rep = basic_rep(R)
    image_of_product = twist_equivalence(tensor_reps(rep, rep), zeta)
    product_of_images = tensor_reps(twist_equivalence(rep, zeta), twist_equivalence(rep, zeta))
    for sample in _qdybe_samples(params, R, 3):
        u = sample.u[0]
        assert np.allclose(image_of_product.L(u, sample.lam), product_of_images.L(u, sample.lam), atol=1e-9)


def test_scale_by_theta_ratio_keeps_qdybe():
    params = _params(2)
    R = felder_rmatrix(params)
    scaled = gauge_scale(R, lambda u: theta1(u - GAMMA, params.tau) / theta1(u, params.tau))
    assert qdybe_residual(scaled, _qdybe_samples(params, scaled, 5, seed=53)) <= TOL


def test_delta_s_examples():
    lam = np.array([0.4 - 0.1j, 0.25 + 0.3j])
    assert delta_s(lambda point: 7.0, 1, GAMMA)(lam) == pytest.approx(1)
    power = delta_s(lambda point: np.exp(np.log(0.5) * point[1]), 1, 0.3)
    assert power(lam) == pytest.approx(0.5 ** 0.3, rel=1e-12)
    # f(λ) = Γ_p(λ₁/κ) com κ = 2, p = 0.3, γ = 1
    ratio = delta_s(lambda point: qgamma(point[0] / 2, 0.3), 0, 1.0)
    expected = qgamma(1.4 / 2, 0.3) / qgamma(0.4 / 2, 0.3)
    assert ratio(np.array([1.4, 0.2])) == pytest.approx(expected, rel=1e-12)


def test_d_of_xi_form():
    q = 0.6
    dxi = d_gamma(xi_form(q, 3), 1.0)
    for sample in _form_samples(3, count=5):
        for m in range(3):
            for l in range(3):
                if m < l:
                    assert dxi((m, l), sample.lam) == pytest.approx(q, rel=1e-12)
                elif m > l:
                    assert dxi((m, l), sample.lam) == pytest.approx(1 / q, rel=1e-12)
    assert closedness_residual(dxi, 1.0, _form_samples(3, count=20)) <= 1e-10


def test_public_two_form_name():
    lam = np.array([0.2 + 0.1j, -0.3 + 0.2j])
    phi, psi = paper_two_form(0.6, 3, 2, GAMMA), sigma_two_form(0.6, 3, 2, GAMMA)
    assert phi((0, 1), lam) == psi((0, 1), lam)


def test_equivalence_preserves_morphisms():
    params = _params(2)
    R = felder_rmatrix(params)
    zeta = random_diagonal_one_form(np.random.default_rng(17), 2)
    twisted = gauge_twist(R, d_gamma(zeta, GAMMA))
    rep = basic_rep(R)
    f = DynamicalMorphism(lambda lam: np.diag([np.exp(lam[0]), 2 + lam[1] ** 2]),
                          rep.space, rep.space, name='f')
    source, target = twist_rep(rep, f), rep
    samples = _qdybe_samples(params, twisted, 5)
    assert morphism_residual(f, source, target, samples) <= TOL
    image_source = twist_equivalence(source, zeta)
    image_target = twist_equivalence(target, zeta)
    assert rep_residual(image_source, twisted, samples) <= TOL
    assert morphism_residual(f, image_source, image_target, samples) <= TOL
