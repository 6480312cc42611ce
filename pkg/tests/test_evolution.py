import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kaoncp.evolution import (
    EvolutionMap,
    TauClosedForm,
    expm,
    expm_evolution,
    generator_family,
    tau_closed_form,
    trotter_compose,
)
from kaoncp.generators import (
    DissipativeParams,
    EffectiveHamiltonian,
    dissipator_matrix,
    weisskopf_wigner_generator,
)
from oracles import literal_abc, random_hermitian, scipy_expm

rates = st.floats(0.0, 3.0)


def dissipator(alpha, beta, gamma):
    return dissipator_matrix(DissipativeParams(alpha=alpha, beta=beta, gamma=gamma))


def test_tau_at_zero_is_identity():
    m = tau_closed_form(0.7, 0.2, 0.4, 0.0)
    np.testing.assert_array_equal(m.bloch_matrix, np.eye(4))
    assert m.provenance == "closed-form"


@pytest.mark.parametrize("alpha,gamma", [(1.0, 2.0), (2.0, 1.0), (0.0, 0.5)])
def test_tau_diagonal_limit(alpha, gamma):
    tau = TauClosedForm(alpha, 0.0, gamma)
    assert tau.lambda_plus == pytest.approx(-2 * min(alpha, gamma))
    assert tau.lambda_minus == pytest.approx(-2 * max(alpha, gamma))
    for t in (0.1, 1.0, 5.0):
        a, b, c = tau.abc(t)
        assert a == pytest.approx(np.exp(-2 * alpha * t), rel=1e-14)
        assert b == 0
        assert c == pytest.approx(np.exp(-2 * gamma * t), rel=1e-14)


def test_tau_matches_exponential_example():
    m = tau_closed_form(2.0, 1.0, 3.0, 0.1).bloch_matrix
    assert np.linalg.norm(m - scipy_expm(0.1 * dissipator(2.0, 1.0, 3.0))) < 1e-10
    assert np.linalg.norm(m - expm_evolution(dissipator(2.0, 1.0, 3.0), 0.1).bloch_matrix) < 1e-10


@settings(max_examples=300, deadline=None)
@given(rates, st.floats(-1.5, 1.5), rates, st.floats(0.0, 5.0))
def test_tau_matches_difference_quotient_formula(alpha, beta, gamma, t):
    assume(alpha * gamma >= beta**2)
    assume(np.hypot(alpha - gamma, 2 * beta) > 1e-3)
    tau = TauClosedForm(alpha, beta, gamma)
    assert tau.lambda_plus <= 1e-15 and tau.lambda_minus <= 0
    np.testing.assert_allclose(tau.abc(t), literal_abc(alpha, beta, gamma, t), atol=1e-11)


def test_tau_initial_values():
    tau = TauClosedForm(0.3, 0.1, 0.9)
    assert tau.abc(0.0) == (1.0, 0.0, 1.0)


def test_tau_rejections():
    with pytest.raises(ValueError, match="not positive"):
        TauClosedForm(1.0, 1.5, 1.0)
    with pytest.raises(ValueError):
        TauClosedForm(-1.0, 0.0, 1.0)
    with pytest.raises(ValueError, match="non-negative"):
        tau_closed_form(1.0, 0.0, 1.0, -0.1)


def test_tau_semigroup_and_trace_preservation(rng):
    for _ in range(200):
        alpha, gamma = rng.uniform(0, 3, 2)
        beta = rng.uniform(-1, 1) * np.sqrt(alpha * gamma)
        s, t = rng.uniform(0, 3, 2)
        tau = TauClosedForm(alpha, beta, gamma)
        np.testing.assert_allclose(tau.matrix(s) @ tau.matrix(t), tau.matrix(s + t), atol=1e-10)
        m = tau.matrix(t)
        np.testing.assert_array_equal(m[0], [1.0, 0.0, 0.0, 0.0])
        np.testing.assert_array_equal(m[:, 0], [1.0, 0.0, 0.0, 0.0])


def test_degenerate_branch_continuity():
    alpha, t = 0.8, 1.3
    limit = TauClosedForm(alpha, 0.0, alpha).matrix(t)
    assert TauClosedForm(alpha, 0.0, alpha).degenerate
    for eps in np.logspace(-16, -4, 49):
        for beta, gamma in ((eps, alpha), (0.0, alpha + eps), (eps, alpha + eps)):
            m = TauClosedForm(alpha, beta, gamma).matrix(t)
            ref = scipy_expm(t * dissipator(alpha, beta, gamma))
            assert np.abs(m - ref).max() < 1e-12
            if eps < 1e-8:
                assert np.abs(m - limit).max() < 1e-8


def test_expm_zero_and_scalar():
    np.testing.assert_array_equal(expm(np.zeros((4, 4))), np.eye(4))
    assert expm(np.array([[-0.7]]))[0, 0] == pytest.approx(np.exp(-0.7), rel=1e-15)
    np.testing.assert_array_equal(expm_evolution(np.zeros((4, 4)), 3.0).bloch_matrix, np.eye(4))


@pytest.mark.parametrize("n", [2, 4, 16])
def test_expm_against_scipy(rng, n):
    for scale in (1e-3, 0.3, 3.0, 30.0):
        for _ in range(20):
            g = rng.normal(size=(n, n)) * scale / np.sqrt(n)
            ref = scipy_expm(g)
            assert np.linalg.norm(expm(g) - ref) <= 1e-12 * np.linalg.norm(ref) * max(1, scale)
            sym = g + g.T
            ref = scipy_expm(sym)
            assert np.linalg.norm(expm(sym) - ref) <= 1e-12 * np.linalg.norm(ref) * max(1, scale)


def test_expm_physical_generators(rng):
    h = EffectiveHamiltonian.from_masses_widths(0.0, 0.47, 1.0, 0.002)
    g = weisskopf_wigner_generator(h) + dissipator(1.0, 0.3, 2.0)
    for t in (0.01, 0.1, 1.0, 5.0, 10.0):
        ref = scipy_expm(t * g)
        assert np.linalg.norm(expm(t * g) - ref) <= 1e-12 * np.linalg.norm(ref)


def test_expm_semigroup(rng):
    for _ in range(50):
        g = rng.normal(size=(4, 4))
        s, t = rng.uniform(0, 2, 2)
        lhs = expm_evolution(g, s + t).bloch_matrix
        rhs = expm_evolution(g, s).bloch_matrix @ expm_evolution(g, t).bloch_matrix
        assert np.linalg.norm(lhs - rhs) < 1e-10 * np.linalg.norm(lhs)


def test_expm_evolution_rejects_negative_time():
    with pytest.raises(ValueError):
        expm_evolution(np.eye(4), -1.0)


@settings(max_examples=100, deadline=None)
@given(rates, st.floats(-1.5, 1.5), rates, st.sampled_from([0.1, 1.0, 5.0]))
def test_closed_form_is_exponential_of_dissipator(alpha, beta, gamma, t):
    assume(alpha * gamma >= beta**2)
    a = tau_closed_form(alpha, beta, gamma, t).bloch_matrix
    b = expm_evolution(dissipator(alpha, beta, gamma), t).bloch_matrix
    assert np.linalg.norm(a - b) < 1e-10


# -- Trotter -----------------------------------------------------------------


def _pair(rng, scale=1.0):
    m = random_hermitian(rng, 2, scale)
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    h = EffectiveHamiltonian(m - 0.25j * scale * (x @ x.conj().T))
    y = rng.normal(size=(3, 3)) * np.sqrt(scale / 3)
    k = y @ y.T
    d = np.trace(k) * np.eye(3) - k
    p = DissipativeParams(d[0, 0], d[0, 1], d[0, 2], d[1, 1], d[1, 2], d[2, 2])
    return weisskopf_wigner_generator(h), dissipator_matrix(p)


def test_trotter_single_step_identity_factor(rng):
    w, _ = _pair(rng)
    out = trotter_compose(generator_family(w), lambda s: np.eye(4), 0.7, 1)
    np.testing.assert_allclose(out.bloch_matrix, expm(0.7 * w), atol=1e-14)
    assert out.provenance == "trotter(1)"


def test_trotter_ordering():
    # one step applies tau first: (W o T) = W @ T
    w = np.diag([1.0, 2.0, 3.0, 4.0])
    t = np.eye(4)[[1, 0, 2, 3]]
    out = trotter_compose(lambda s: w, lambda s: t, 1.0, 1).bloch_matrix
    np.testing.assert_array_equal(out, w @ t)


def test_trotter_exact_for_commuting_factors():
    # isotropic dissipator vs. a rotation with uniform decay: the factors commute
    iso = dissipator_matrix(DissipativeParams(a=0.5, alpha=0.5, gamma=0.5))
    h = EffectiveHamiltonian(np.array([[0.1, 0.3 - 0.2j], [0.3 + 0.2j, 0.5]]) - 0.4j * np.eye(2))
    w = generator_family(weisskopf_wigner_generator(h))
    exact = expm(2.0 * (weisskopf_wigner_generator(h) + iso))
    for n in (1, 3, 8, 100):
        out = trotter_compose(w, generator_family(iso), 2.0, n).bloch_matrix
        np.testing.assert_allclose(out, exact, atol=1e-13)


def test_trotter_first_order_convergence(rng):
    w, d = _pair(rng)
    exact = expm(w + d)
    ns = [2**k for k in range(1, 11)]
    errs = [
        np.linalg.norm(trotter_compose(generator_family(w), generator_family(d), 1.0, n).bloch_matrix - exact)
        for n in ns
    ]
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    np.testing.assert_allclose(ratios[-4:], 2.0, atol=0.02)


def test_trotter_argument_checks():
    with pytest.raises(ValueError):
        trotter_compose(lambda s: np.eye(4), lambda s: np.eye(4), 1.0, 0)
    with pytest.raises(ValueError):
        trotter_compose(lambda s: np.eye(4), lambda s: np.eye(4), -1.0, 2)


def test_evolution_map_apply_two_kaon():
    m = EvolutionMap(np.eye(16))
    rho = np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex)
    np.testing.assert_allclose(m.apply(rho), rho, atol=1e-15)
    assert m.n_kaons == 2
