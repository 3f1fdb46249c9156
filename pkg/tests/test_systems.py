import numpy as np
import pytest

from conftest import random_state
from wtbouss.evolve import InitialData, make_initial
from wtbouss.spectral import GridSpec
from wtbouss.systems import (
    ModelParams, ParamError, State, consistency_residual, curl_residual, resolve_system, rhs,
    validate_params, wtb1_grid, zeta_tilde,
)


def test_validate_case_sets():
    r1 = validate_params(ModelParams.case1(0.1))
    assert r1.constraint_residuals == pytest.approx((0.0, 0.0), abs=1e-15)
    assert r1.curl_free and r1.boundary and r1.case_consistent
    # computed families for (0, 1/3, -1/3, 1/3, 1/3, 0, 0): a != c rules out (iii) and (iv)
    assert r1.families == {"i": True, "ii": True, "iii": False, "iv": False}
    r2 = validate_params(ModelParams.case2(0.1))
    assert r2.families["i"] and r2.curl_free and not r2.boundary


def test_validate_rejects_zero_coefficients():
    with pytest.raises(ParamError) as err:
        validate_params(ModelParams(0, 0, 0, 0, 0, 0, 0, eps=0.1))
    assert "-0.333" in str(err.value) and "-0.666" in str(err.value)


def test_eps_range_and_case_check():
    with pytest.raises(ParamError):
        ModelParams.case1(1.0)
    with pytest.raises(ParamError):
        resolve_system("Case1", ModelParams.case2(0.1))
    with pytest.raises(ValueError):
        resolve_system("WTB9", ModelParams.case1(0.1))


@pytest.mark.parametrize("system", ["WTB1", "WTB2", "Case1", "Case2"])
def test_zero_state_zero_tendency(system, grid32):
    p = ModelParams.general(0.1) if system.startswith("WTB") else getattr(ModelParams, system.lower())(0.1)
    t = rhs(system, State.zeros(grid32), p, grid32)
    assert all(np.all(x == 0) for x in (t.dv, t.dw, t.dzeta))


def test_linear_symbol_case1(grid32):
    eps, k, l, delta = 0.1, 2, 1, 1e-7
    g = grid32
    arg = k * g.x + l * g.y
    s = State(np.zeros(g.shape), np.zeros(g.shape), delta * np.cos(arg))
    t = rhs("Case1", s, ModelParams.case1(eps), g)
    J = 1 + eps * k ** 2 / 3
    # b = e = 1/3: v_t = -zeta_x / J, w_t = -zeta_y / J, zeta_t = 0 for v = w = 0
    assert np.allclose(t.dv, delta * k * np.sin(arg) / J, atol=1e-20)
    assert np.allclose(t.dw, delta * l * np.sin(arg) / J, atol=1e-20)
    assert np.max(np.abs(t.dzeta)) < 1e-20


def test_single_mode_quadratic_term(grid32):
    g, eps = grid32, 0.1
    s = State(np.cos(g.x) * np.ones(g.shape), np.zeros(g.shape), np.zeros(g.shape))
    t = rhs("Case1", s, ModelParams.case1(eps), g)
    coef = g.rfft(t.dv)[2, 0] / (g.nx * g.ny / 2)
    assert coef.real == pytest.approx(0.0, abs=1e-15)
    assert -coef.imag == pytest.approx(0.05 / (1 + 0.4 / 3), rel=1e-13)


def test_zeta_tilde(grid32):
    g = grid32
    assert np.all(zeta_tilde(np.zeros(g.shape), 0.1, g) == 0)
    assert np.allclose(zeta_tilde(2 * np.ones(g.shape), 0.1, g), 1.9, atol=1e-14)
    z = 0.5 * np.cos(g.x) * np.cos(g.y)
    zt = zeta_tilde(z, 0.1, g)
    # invert z = zt + (eps/4) z^2 by fixed-point iteration on the band-limited data
    it = zt.copy()
    for _ in range(60):
        it = zt + 0.025 * it ** 2
    assert np.max(np.abs(it - z)) < 1e-12


def test_curl_residual_examples(grid32):
    g = grid32
    u = np.sin(g.x + g.y)
    assert curl_residual(State(u, u, np.zeros(g.shape)), 0.1, g) < 1e-13
    s = State(np.cos(g.y) * np.ones(g.shape), np.zeros(g.shape), np.zeros(g.shape))
    assert curl_residual(s, 0.1, g) == pytest.approx(np.sqrt(2 * np.pi ** 2), rel=1e-13)
    assert curl_residual(State.zeros(g), 0.1, g) == 0.0


def test_consistency_zero_and_rate():
    p = ModelParams.general(0.1)
    g = wtb1_grid(32, 32, 0.1)
    assert consistency_residual(State.zeros(g), p, g).total == 0.0
    vals = []
    for eps in (0.1, 0.05):
        pe = ModelParams.general(eps)
        ge = wtb1_grid(32, 32, eps)
        s = make_initial("WTB1", pe, ge, InitialData("gaussian", 0.5))
        vals.append(consistency_residual(s, pe, ge).total)
    assert 3.4 <= vals[0] / vals[1] <= 4.6


def test_rhs_rejects_nonfinite(grid32):
    s = random_state(grid32, 0.1, 0)
    s.zeta[0, 0] = np.nan
    with pytest.raises(FloatingPointError):
        rhs("Case1", s, ModelParams.case1(0.1), grid32)
