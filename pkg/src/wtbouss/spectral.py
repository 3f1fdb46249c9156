"""Periodic 2-D spectral infrastructure.

Fields are real numpy arrays of shape ``(nx, ny)`` with ``x`` along axis 0.
Internally most work happens on half spectra produced by ``numpy.fft.rfft2``
(shape ``(nx, ny // 2 + 1)``), which is what every symbol evaluates to.

Normalization: the forward transform is unnormalized and the inverse divides
by ``nx * ny``. With coefficients ``F_k`` of a field ``f`` the discrete L2 norm
is ``||f||^2 = lx * ly / (nx * ny)**2 * sum_k |F_k|^2`` over the full lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

SYMBOL_KINDS = ("J", "Y", "K", "A", "B", "Lambda1", "Lambda2", "Lambda",
                "Dx", "Dy", "AbsD", "BracketD")

# default coefficient sets used when a symbol is evaluated without explicit params
_CASE1 = (0.0, 1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0, 0.0)
_CASE2 = (-1.0 / 6.0, 0.5, -0.5, 0.5, 0.5, -1.0 / 6.0, -1.0 / 6.0)


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on ``[0, lx) x [0, ly)``.

    Parameters
    ----------
    nx, ny : int
        Number of collocation points (even, at least 16).
    lx, ly : float
        Domain periods.
    dealias_fraction : float
        Products keep modes with ``|k_i| <= dealias_fraction * n_i / 2``.
    """

    nx: int
    ny: int
    lx: float = 2.0 * np.pi
    ly: float = 2.0 * np.pi
    dealias_fraction: float = 2.0 / 3.0

    def __post_init__(self):
        for name in ("nx", "ny"):
            n = getattr(self, name)
            if int(n) != n or n < 16 or n % 2:
                raise ValueError(f"{name} must be an even integer >= 16, got {n}")
        if not (self.lx > 0 and self.ly > 0):
            raise ValueError("domain periods must be positive")
        if not (0.0 < self.dealias_fraction <= 1.0):
            raise ValueError("dealias_fraction must lie in (0, 1]")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def half_shape(self) -> tuple[int, int]:
        return (self.nx, self.ny // 2 + 1)

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.nx)[:, None] * (self.lx / self.nx) + np.zeros((1, self.ny))

    @cached_property
    def y(self) -> np.ndarray:
        return np.zeros((self.nx, 1)) + np.arange(self.ny)[None, :] * (self.ly / self.ny)

    @cached_property
    def kx_int(self) -> np.ndarray:
        return np.fft.fftfreq(self.nx, 1.0 / self.nx)[:, None]

    @cached_property
    def ky_int(self) -> np.ndarray:
        return np.fft.rfftfreq(self.ny, 1.0 / self.ny)[None, :]

    @cached_property
    def kx(self) -> np.ndarray:
        """Angular wavenumbers along x, shape ``(nx, 1)``."""
        return 2.0 * np.pi / self.lx * self.kx_int

    @cached_property
    def ky(self) -> np.ndarray:
        """Angular wavenumbers along y on the half spectrum, shape ``(1, ny//2+1)``."""
        return 2.0 * np.pi / self.ly * self.ky_int

    @cached_property
    def mask(self) -> np.ndarray:
        """Boolean dealiasing mask on the half spectrum."""
        cx = self.dealias_fraction * self.nx / 2
        cy = self.dealias_fraction * self.ny / 2
        return (np.abs(self.kx_int) <= cx) & (np.abs(self.ky_int) <= cy)

    @cached_property
    def half_weights(self) -> np.ndarray:
        """Multiplicity of each half-spectrum column in the full lattice."""
        w = np.full((1, self.ny // 2 + 1), 2.0)
        w[0, 0] = 1.0
        w[0, -1] = 1.0
        return w

    @property
    def cell_area(self) -> float:
        return self.lx * self.ly / (self.nx * self.ny)

    @cached_property
    def _padded(self) -> tuple[int, int]:
        # 3/2 rule, rounded up to an even size
        mx = 3 * self.nx // 2
        my = 3 * self.ny // 2
        return (mx + mx % 2, my + my % 2)

    # --- transforms -------------------------------------------------------
    def check(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f)
        if f.shape != self.shape:
            raise ValueError(f"field shape {f.shape} does not match grid {self.shape}")
        return f

    def rfft(self, f: np.ndarray) -> np.ndarray:
        return np.fft.rfft2(self.check(f))

    def irfft(self, fh: np.ndarray) -> np.ndarray:
        return np.fft.irfft2(fh, s=self.shape)

    def l2_sq_hat(self, fh: np.ndarray, weight=1.0) -> float:
        """Weighted squared L2 norm from a half spectrum."""
        scale = self.lx * self.ly / (self.nx * self.ny) ** 2
        return float(scale * np.sum(self.half_weights * weight * np.abs(fh) ** 2))

    def inner_hat(self, fh: np.ndarray, gh: np.ndarray) -> float:
        """L2 inner product of two real fields given by half spectra."""
        scale = self.lx * self.ly / (self.nx * self.ny) ** 2
        return float(scale * np.sum(self.half_weights * (fh * np.conj(gh)).real))

    # --- products ---------------------------------------------------------
    def _pad(self, fh: np.ndarray) -> np.ndarray:
        mx, my = self._padded
        hx, hy = self.nx // 2, self.ny // 2
        out = np.zeros((mx, my // 2 + 1), dtype=complex)
        out[:hx, :hy] = fh[:hx, :hy]
        out[mx - hx + 1:, :hy] = fh[hx + 1:, :hy]
        # Nyquist row and column are split evenly between +n/2 and -n/2
        out[hx, :hy] = 0.5 * fh[hx, :hy]
        out[mx - hx, :hy] = 0.5 * fh[hx, :hy]
        out[:hx, hy] = 0.5 * fh[:hx, hy]
        out[mx - hx + 1:, hy] = 0.5 * fh[hx + 1:, hy]
        out[hx, hy] = 0.25 * fh[hx, hy]
        out[mx - hx, hy] = 0.25 * fh[hx, hy]
        return out

    def _unpad(self, gh: np.ndarray) -> np.ndarray:
        mx, my = self._padded
        hx, hy = self.nx // 2, self.ny // 2
        out = np.zeros(self.half_shape, dtype=complex)
        out[:hx, :hy] = gh[:hx, :hy]
        out[hx + 1:, :hy] = gh[mx - hx + 1:, :hy]
        return out

    def product_hat(self, fh: np.ndarray, gh: np.ndarray) -> np.ndarray:
        """Dealiased product of two fields given and returned as half spectra.

        The exact product of the trigonometric interpolants is formed on a
        3/2-padded grid and then truncated to the dealiasing mask, so the
        result equals the truncated convolution of the two spectra.
        """
        return self.from_padded(self.to_padded(fh) * self.to_padded(gh))

    def to_padded(self, fh: np.ndarray) -> np.ndarray:
        """Values of the trigonometric interpolant on the 3/2-padded grid."""
        mx, my = self._padded
        return np.fft.irfft2(self._pad(fh), s=(mx, my)) * ((mx * my) / (self.nx * self.ny))

    def from_padded(self, fp: np.ndarray) -> np.ndarray:
        """Dealiased half spectrum of a padded-grid field (products of padded factors)."""
        mx, my = self._padded
        return self._unpad(np.fft.rfft2(fp)) * ((self.nx * self.ny) / (mx * my)) * self.mask


@dataclass(frozen=True)
class SpectralField:
    """Full-lattice Fourier coefficients of a field, ``numpy.fft.fft2`` layout."""

    grid: GridSpec
    coeffs: np.ndarray = field(repr=False)


def transform(f: np.ndarray, grid: GridSpec) -> SpectralField:
    """Unnormalized forward transform of a real field."""
    return SpectralField(grid, np.fft.fft2(grid.check(f)))


def inverse_transform(sf: SpectralField) -> np.ndarray:
    """Inverse of :func:`transform`; the imaginary round-off is discarded."""
    if sf.coeffs.shape != sf.grid.shape:
        raise ValueError("coefficient array does not match grid")
    return np.fft.ifft2(sf.coeffs).real


@dataclass(frozen=True)
class SymbolSpec:
    """Named anisotropic Fourier multiplier.

    Parameters
    ----------
    kind : str
        One of ``J, Y, K, A, B, Lambda1, Lambda2, Lambda, Dx, Dy, AbsD,
        BracketD``. ``J = 1 + b eps xi1^2``, ``Y = 1 - g eps xi1^2``,
        ``K = (1 - c eps xi1^2) / Y``, ``A = (J xi1^2 + xi2^2)^(1/2)``,
        ``B = (K xi1^2 + xi2^2)^(1/2)``, ``Lambda1 = A / J`` with the case-one
        ``J``, ``Lambda2 = B / K`` with the case-two ``K``, and ``Lambda`` is the
        general linear frequency of the anisotropic system.
    power : float
        Real exponent. Negative powers of symbols vanishing at the origin are
        set to zero on the zero mode.
    eps : float
        Small parameter.
    coeffs : tuple of 7 floats, optional
        Coefficients ``(a, b, c, d, e, f, g)``. Defaults to the case-one set for
        ``J, A, Lambda1`` and the case-two set for ``Y, K, B, Lambda2``.
    """

    kind: str
    power: float = 1.0
    eps: float = 0.0
    coeffs: tuple | None = None

    def __post_init__(self):
        if self.kind not in SYMBOL_KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind in ("Dx", "Dy") and float(self.power) != int(self.power):
            raise ValueError("derivative symbols take integer powers")

    def _coeffs(self):
        if self.coeffs is not None:
            return tuple(float(c) for c in self.coeffs)
        return _CASE2 if self.kind in ("Y", "K", "B", "Lambda2") else _CASE1

    def base(self, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        """Symbol value at power one on arbitrary wavenumber arrays."""
        a, b, c, d, e, f, g = self._coeffs()
        eps = self.eps
        q1 = eps * xi1 ** 2
        xi1, xi2 = np.broadcast_arrays(xi1, xi2)
        if self.kind == "J":
            return 1.0 + b * q1
        if self.kind == "Y":
            return 1.0 - g * q1
        if self.kind == "K":
            return (1.0 - c * q1) / (1.0 - g * q1)
        if self.kind == "A":
            return np.sqrt((1.0 + b * q1) * xi1 ** 2 + xi2 ** 2)
        if self.kind == "B":
            return np.sqrt((1.0 - c * q1) / (1.0 - g * q1) * xi1 ** 2 + xi2 ** 2)
        if self.kind == "Lambda1":
            jj = 1.0 + q1 / 3.0
            return np.sqrt(xi1 ** 2 / jj + xi2 ** 2 / jj ** 2)
        if self.kind == "Lambda2":
            kk = (1.0 + q1 / 2.0) / (1.0 + q1 / 6.0)
            return np.sqrt(xi1 ** 2 / kk + xi2 ** 2 / kk ** 2)
        if self.kind == "Lambda":
            lam2 = (xi1 ** 2 * (1 - a * q1) * (1 - c * q1) / ((1 + b * q1) * (1 + d * q1))
                    + eps * xi2 ** 2 * (1 - f * q1) * (1 - g * q1) / ((1 + e * q1) * (1 + d * q1)))
            return np.sqrt(lam2)
        if self.kind == "Dx":
            return 1j * xi1
        if self.kind == "Dy":
            return 1j * xi2
        if self.kind == "AbsD":
            return np.sqrt(xi1 ** 2 + xi2 ** 2)
        return np.sqrt(1.0 + xi1 ** 2 + xi2 ** 2)

    def at(self, xi1, xi2) -> np.ndarray:
        """Symbol value raised to ``power`` at given wavenumbers."""
        base = np.asarray(self.base(np.asarray(xi1, float), np.asarray(xi2, float)))
        if self.kind in ("Dx", "Dy"):
            return base ** int(self.power)
        if self.power >= 0:
            return base ** self.power
        out = np.zeros(base.shape)
        nz = base != 0
        out[nz] = base[nz] ** self.power
        return out

    def evaluate(self, grid: GridSpec) -> np.ndarray:
        """Symbol values on the half-spectrum lattice of ``grid``."""
        vals = self.at(grid.kx, grid.ky)
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError(f"non-finite values in symbol {self.kind}")
        return np.broadcast_to(vals, grid.half_shape)


def apply_symbol(sym: SymbolSpec, f: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Apply a Fourier multiplier to a real field."""
    return grid.irfft(sym.evaluate(grid) * grid.rfft(f))


def dealiased_product(f: np.ndarray, g: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Product of two real fields truncated to the dealiasing mask."""
    f = grid.check(f)
    g = grid.check(g)
    return grid.irfft(grid.product_hat(grid.rfft(f), grid.rfft(g)))


def resample(f: np.ndarray, src: GridSpec, dst: GridSpec) -> np.ndarray:
    """Spectral interpolation of a field between grids with equal periods.

    Modes that do not fit the destination grid are dropped; Nyquist modes of
    the source are discarded.
    """
    if (src.lx, src.ly) != (dst.lx, dst.ly):
        raise ValueError("grids must share the domain periods")
    fh = src.rfft(f)
    out = np.zeros(dst.half_shape, dtype=complex)
    hx = min(src.nx, dst.nx) // 2
    hy = min(src.ny, dst.ny) // 2
    out[:hx, :hy] = fh[:hx, :hy]
    out[dst.nx - hx + 1:, :hy] = fh[src.nx - hx + 1:, :hy]
    return dst.irfft(out * (dst.nx * dst.ny) / (src.nx * src.ny))


def random_bandlimited(grid: GridSpec, rng: np.random.Generator,
                       kmax_fraction: float = 1.0 / 6.0) -> np.ndarray:
    """Zero-mean random field with unit RMS and modes ``|k_i| <= kmax_fraction * n_i``.

    Coefficients are i.i.d. complex Gaussians; the real inverse transform
    Hermitian-symmetrizes them.
    """
    sel = ((np.abs(grid.kx_int) <= kmax_fraction * grid.nx)
           & (np.abs(grid.ky_int) <= kmax_fraction * grid.ny))
    sel = np.broadcast_to(sel, grid.half_shape)
    fh = np.zeros(grid.half_shape, dtype=complex)
    n = int(sel.sum())
    fh[sel] = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    fh[0, 0] = 0.0
    f = grid.irfft(fh)
    return f / np.sqrt(np.mean(f ** 2))
