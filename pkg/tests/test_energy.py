import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_curl_free
from wtbouss.energy import energy, sobolev_norm, tilde_energy
from wtbouss.spectral import GridSpec
from wtbouss.systems import State


def test_sobolev_examples(grid32):
    g = grid32
    assert sobolev_norm(np.zeros(g.shape), 2, g) == 0.0
    c = np.cos(g.x) * np.ones(g.shape)
    assert sobolev_norm(c, 1, g) == pytest.approx(np.sqrt(2) * np.sqrt(2 * np.pi ** 2), rel=1e-14)
    assert sobolev_norm(1 + c, 1, g, "homogeneous") == pytest.approx(np.sqrt(2 * np.pi ** 2))
    with pytest.raises(ValueError):
        sobolev_norm(c, 1, g, "bogus")


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.floats(-5, 5), st.floats(0, 4))
def test_sobolev_homogeneous_and_equivalence(seed, alpha, s):
    g = GridSpec(16, 16)
    f = np.random.default_rng(seed).standard_normal(g.shape)
    n = sobolev_norm(f, s, g)
    assert sobolev_norm(alpha * f, s, g) == pytest.approx(abs(alpha) * n, rel=1e-12)
    both = sobolev_norm(f, s, g, "homogeneous") ** 2 + sobolev_norm(f, 0, g) ** 2
    # <xi>^2s lies between (|xi|^2s + 1)/2 and 2^max(s-1,0) (|xi|^2s + 1)
    assert 0.5 * both <= n ** 2 * (1 + 1e-12)
    assert n ** 2 <= 2 ** max(s - 1, 0) * both * (1 + 1e-12)


@pytest.mark.parametrize("case", ["Case1", "Case2", "General"])
def test_zero_state_energy(case, grid32):
    r = energy(case, State.zeros(grid32), 4, 0.1, grid32)
    assert (r.e_total, r.e_low, r.e_high, r.e_tilde_high) == (0.0, 0.0, 0.0, 0.0)


def test_case1_cos_small_eps(grid32):
    g = grid32
    s = State(np.cos(g.x) * np.ones(g.shape), np.zeros(g.shape), np.zeros(g.shape))
    r = energy("Case1", s, 0, 1e-14, g, with_tilde=False)
    assert r.e_low == pytest.approx(2 * np.pi ** 2, rel=1e-12)
    assert r.e_high == pytest.approx(2 * np.pi ** 2, rel=1e-12)


@pytest.mark.parametrize("case", ["Case1", "Case2"])
def test_energy_monotone_in_eps(case, grid32):
    s = random_curl_free(case, grid32, 0.1, 0.1, 1)
    lo = energy(case, s, 2, 0.05, grid32, with_tilde=False)
    hi = energy(case, s, 2, 0.2, grid32, with_tilde=False)
    assert hi.e_low > lo.e_low


@pytest.mark.parametrize("case", ["Case1", "Case2"])
def test_energy_translation_invariant(case, grid32):
    s = random_curl_free(case, grid32, 0.1, 0.01, 2)
    sh = State(*(np.roll(np.roll(f, 3, 0), 5, 1) for f in (s.v, s.w, s.zeta)))
    a, b = energy(case, s, 4, 0.1, grid32), energy(case, sh, 4, 0.1, grid32)
    for x, y in ((a.e_total, b.e_total), (a.e_tilde_high, b.e_tilde_high)):
        assert x == pytest.approx(y, rel=1e-12)


def test_tilde_energy_examples(grid32):
    g = grid32
    z = np.zeros(g.shape)
    assert tilde_energy(z, z, 0, 0.1, g) == 0.0
    c = np.cos(g.x) * np.ones(g.shape)
    assert tilde_energy(c, z, 0, 0.1, g) == pytest.approx((1 + 0.1 / 3) * 2 * np.pi ** 2, rel=1e-14)
    with pytest.raises(ValueError):
        tilde_energy(1 + c, z, 0, 0.1, g)
