import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wtbouss.spectral import (
    GridSpec, SymbolSpec, apply_symbol, dealiased_product, inverse_transform, random_bandlimited,
    resample, transform,
)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(15, 16)
    with pytest.raises(ValueError):
        GridSpec(16, 16, lx=-1.0)
    with pytest.raises(ValueError):
        GridSpec(16, 16, dealias_fraction=0.0)


def test_shape_mismatch_rejected(grid32):
    with pytest.raises(ValueError):
        grid32.rfft(np.zeros((16, 16)))


def test_constant_transform(grid32):
    c = transform(np.ones(grid32.shape), grid32).coeffs
    assert c[0, 0] == pytest.approx(32 * 32)
    c[0, 0] = 0.0
    assert np.max(np.abs(c)) < 1e-12


def test_cos_transform_single_mode(grid64):
    c = transform(np.cos(grid64.x) * np.ones(grid64.shape), grid64).coeffs
    big = np.argwhere(np.abs(c) > 1e-9)
    assert sorted(map(tuple, big)) == [(1, 0), (63, 0)]


def test_round_trip(grid64):
    f = random_bandlimited(grid64, np.random.default_rng(0), kmax_fraction=0.5)
    back = inverse_transform(transform(f, grid64))
    assert np.max(np.abs(back - f)) < 1e-12 * np.max(np.abs(f))


def test_parseval(grid32):
    f = np.random.default_rng(1).standard_normal(grid32.shape)
    direct = np.sum(f ** 2) * grid32.cell_area
    assert grid32.l2_sq_hat(grid32.rfft(f)) == pytest.approx(direct, rel=1e-13)


def test_symbol_examples(grid64):
    ones = np.ones(grid64.shape)
    J = SymbolSpec("J", eps=0.1)
    assert np.allclose(apply_symbol(J, ones, grid64), ones, atol=1e-14)
    f = np.cos(2 * grid64.x) * ones
    assert np.allclose(apply_symbol(J, f, grid64), (1 + 0.4 / 3) * f, atol=1e-13)
    lam = SymbolSpec("Lambda1", eps=0.12).at(2.0, 1.0)
    assert lam == pytest.approx(np.sqrt(4 / 1.16 + 1 / 1.16 ** 2), rel=1e-14)
    assert lam == pytest.approx(2.04730, abs=5e-6)


def test_negative_power_zero_mode(grid32):
    w = SymbolSpec("A", power=-1, eps=0.1).evaluate(grid32)
    assert w[0, 0] == 0.0 and np.all(np.isfinite(w))
    f = 1.0 + np.cos(grid32.x) * np.ones(grid32.shape)
    out = apply_symbol(SymbolSpec("AbsD", power=-2), f, grid32)
    assert abs(out.mean()) < 1e-15


def test_dealiased_product_trig_identity(grid32):
    c = np.cos(grid32.x) * np.ones(grid32.shape)
    assert np.allclose(dealiased_product(c, c, grid32), 0.5 * (1 + np.cos(2 * grid32.x)), atol=1e-14)
    assert np.all(dealiased_product(c, np.zeros(grid32.shape), grid32) == 0)


def _direct_truncated_product(f, g, grid):
    """Direct convolution of full spectra followed by the dealiasing mask."""
    F = np.fft.fft2(f) / f.size
    G = np.fft.fft2(g) / g.size
    nx, ny = grid.shape
    kx = np.fft.fftfreq(nx, 1 / nx).astype(int)
    ky = np.fft.fftfreq(ny, 1 / ny).astype(int)
    out = np.zeros((nx, ny), complex)
    # Nyquist modes are split into their two signed images
    for i1, a in enumerate(kx):
        for j1, b in enumerate(ky):
            if F[i1, j1] == 0:
                continue
            for i2, c in enumerate(kx):
                for j2, d in enumerate(ky):
                    if G[i2, j2] == 0:
                        continue
                    k, l = a + c, b + d
                    if abs(k) <= grid.dealias_fraction * nx / 2 and abs(l) <= grid.dealias_fraction * ny / 2:
                        out[k % nx, l % ny] += F[i1, j1] * G[i2, j2]
    return np.fft.ifft2(out * f.size).real


def test_alias_free_against_direct_convolution():
    g = GridSpec(16, 16)
    f = np.cos(7 * g.x) * np.ones(g.shape) + 0.3 * np.sin(3 * g.x + 2 * g.y)
    got = dealiased_product(f, f, g)
    want = _direct_truncated_product(f, f, g)
    assert np.max(np.abs(got - want)) < 1e-13
    # cos(7x)^2 = 1/2 + cos(14x)/2 and mode 14 lies beyond the cutoff
    c = np.cos(7 * g.x) * np.ones(g.shape)
    assert np.allclose(dealiased_product(c, c, g), 0.5, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.floats(-3, 3))
def test_product_bilinear_symmetric(seed, alpha):
    g = GridSpec(16, 16)
    rng = np.random.default_rng(seed)
    f, h = rng.standard_normal((2, 16, 16))
    a = dealiased_product(f, h, g)
    assert np.allclose(a, dealiased_product(h, f, g), atol=1e-12)
    assert np.allclose(dealiased_product(alpha * f, h, g), alpha * a, atol=1e-11)


def test_resample_preserves_bandlimited(grid32, grid64):
    f = random_bandlimited(grid32, np.random.default_rng(2))
    up = resample(f, grid32, grid64)
    assert np.allclose(up[::2, ::2], f, atol=1e-13)
    assert np.allclose(resample(up, grid64, grid32), f, atol=1e-13)


def test_random_bandlimited_normalized(grid32):
    f = random_bandlimited(grid32, np.random.default_rng(3))
    assert abs(f.mean()) < 1e-14
    assert np.sqrt(np.mean(f ** 2)) == pytest.approx(1.0)
    fh = grid32.rfft(f)
    assert np.max(np.abs(fh[~np.broadcast_to(grid32.mask, grid32.half_shape)])) < 1e-10
