import numpy as np
import pytest

from conftest import random_curl_free
from wtbouss.evolve import InitialData, make_initial
from wtbouss.spectral import GridSpec
from wtbouss.systems import ModelParams, State
from wtbouss.verify import (
    LEMMAS, data_scale, dispersion_check, equivalence_check, fit_frequency, lemma_sampler,
    nonlinear_terms, predicted_frequency, ptheta_residual, tilde_residual,
)


def test_predicted_frequency_examples():
    assert predicted_frequency("Case2", ModelParams.case2(0.3), 1.0, 0.0) == pytest.approx(
        np.sqrt(1.05 / 1.15), rel=1e-14)
    assert predicted_frequency("Case1", ModelParams.case1(0.3), 0.0, 3.0) == 3.0


def test_fit_frequency_exact_sinusoid():
    t = np.linspace(0, 10, 2001)
    c = 0.3 * np.cos(1.7 * t) - 0.2 * np.sin(1.7 * t)
    assert fit_frequency(t, c) == pytest.approx(1.7, rel=1e-12)


def test_dispersion_single_mode():
    r = dispersion_check("Case1", ModelParams.case1(0.12), GridSpec(32, 32), [(2, 1)], T=2.0,
                         dt=1e-3)
    assert r[0].predicted == pytest.approx(2.04730, abs=5e-6)
    assert r[0].rel_err < 1e-6


def test_dispersion_nonlinear_small_amplitude():
    r = dispersion_check("Case2", ModelParams.case2(0.3), GridSpec(32, 32), [(1, 0), (1, 2)],
                         T=3.0, dt=1e-3, linear=False)
    assert max(x.rel_err for x in r) < 1e-6


def test_dispersion_rejects_unresolved():
    g = GridSpec(32, 32)
    with pytest.raises(ValueError):
        dispersion_check("Case1", ModelParams.case1(0.1), g, [(15, 0)], T=0.01)
    with pytest.raises(ValueError):
        dispersion_check("Case1", ModelParams.case1(0.1), g, [(1, 1), (-1, -1)], T=0.01)


@pytest.mark.parametrize("case", ["Case1", "Case2"])
def test_nonlinear_terms_bilinear(case, grid32):
    s = random_curl_free(case, grid32, 0.1, 0.1, 3)
    z = nonlinear_terms(case, State.zeros(grid32), 0.1, grid32)
    assert not z[0].any() and not z[1].any()
    a = 1.7
    sa = State(a * s.v, a * s.w, a * s.zeta)
    for x, y in zip(nonlinear_terms(case, s, 0.1, grid32), nonlinear_terms(case, sa, 0.1, grid32)):
        assert np.allclose(a ** 2 * x, y, atol=1e-14)


@pytest.mark.parametrize("case", ["Case1", "Case2"])
def test_zero_residuals(case, grid32):
    for rep in (*ptheta_residual(case, State.zeros(grid32), 0.1, grid32),
                *tilde_residual(case, State.zeros(grid32), 0.1, grid32)):
        assert rep.l2 == 0.0


@pytest.mark.parametrize("case", ["Case1", "Case2"])
def test_ptheta_identity(case, grid64):
    s = random_curl_free(case, grid64, 0.1, 0.3, 11)
    scale = data_scale(s, grid64)
    for rep in ptheta_residual(case, s, 0.1, grid64):
        assert rep.l2 / (2 * np.pi) <= 1e-10 * max(scale, scale ** 3)


def test_equivalence_single_mode(grid32):
    g, eps = grid32, 0.1
    # p = cos(x + 2y) with theta = 0: v = -A^-2 J p_x and the ratio is per-mode arithmetic
    p = np.cos(g.x + 2 * g.y)
    from wtbouss.unknowns import from_ptheta
    s = from_ptheta("Case1", p, np.zeros(g.shape), eps, g)
    r = equivalence_check("Case1", s, 0.0, eps, g)
    J, A2 = 1 + eps / 3, (1 + eps / 3) + 4
    v_amp, w_amp = J / A2, 2 * J / A2
    rhs = np.sqrt(J * v_amp ** 2 + 4 * v_amp ** 2) + np.sqrt(w_amp ** 2 + 4 * w_amp ** 2 / J)
    assert r.ratio == pytest.approx(np.sqrt(J) / rhs, rel=1e-12)


def test_equivalence_zero_state(grid32):
    r = equivalence_check("Case2", State.zeros(grid32), 4.0, 0.1, grid32)
    assert r.lhs == r.rhs == 0.0 and np.isnan(r.ratio)


def test_lemma_sampler_small_run(grid32):
    for lem in LEMMAS:
        rep = lemma_sampler(lem, 3, [0.1], grid32, seed=1)
        assert rep.count[0.1] == 3 and np.isfinite(rep.max_ratio[0.1])
    with pytest.raises(ValueError):
        lemma_sampler("L9", 1, [0.1], grid32)


def test_lemma_translation_and_scaling_invariance(grid32):
    """Both sides are homogeneous of equal degree and translation invariant."""
    from wtbouss.verify import _lemma_ratio
    from wtbouss.spectral import random_bandlimited
    from wtbouss.unknowns import ResolventConfig
    rng = np.random.default_rng(0)
    f, h = random_bandlimited(grid32, rng), random_bandlimited(grid32, rng)
    shift = lambda u: np.roll(np.roll(u, 5, 0), 2, 1)  # noqa: E731
    for lem in LEMMAS[:9]:
        base = _lemma_ratio(lem, grid32, 0.1, grid32.rfft(f), grid32.rfft(h), 4.0, ResolventConfig())
        moved = _lemma_ratio(lem, grid32, 0.1, grid32.rfft(shift(f)), grid32.rfft(shift(h)), 4.0,
                             ResolventConfig())
        scaled = _lemma_ratio(lem, grid32, 0.1, grid32.rfft(3 * f), grid32.rfft(0.5 * h), 4.0,
                              ResolventConfig())
        r = base[0] / base[1]
        assert moved[0] / moved[1] == pytest.approx(r, rel=1e-10)
        assert scaled[0] / scaled[1] == pytest.approx(r, rel=1e-10)
