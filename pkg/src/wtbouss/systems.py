"""Boussinesq systems: parameters, right-hand sides and residual probes.

Four evolution systems are available:

``WTB1``
    The anisotropic system in original variables, with y derivatives
    carrying a factor ``eps**0.5``. Runs use a y-period stretched by
    ``eps**0.5`` so that profiles keep an O(1) shape in the slow variable.
``WTB2``
    The rescaled curl-free system for a general coefficient set.
``Case1``, ``Case2``
    ``WTB2`` restricted to the two symmetrizable coefficient sets.

All quadratic terms are dealiased products; the elliptic factors
``1 - b eps dx^2`` etc. are inverted exactly per Fourier mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spectral import GridSpec

SYSTEMS = ("WTB1", "WTB2", "Case1", "Case2")

CASE1_COEFFS = (0.0, 1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0, 0.0)
CASE2_COEFFS = (-1.0 / 6.0, 0.5, -0.5, 0.5, 0.5, -1.0 / 6.0, -1.0 / 6.0)
# admissible non-case set (family i) used as the default general example
GENERAL_COEFFS = (-0.1, 0.2, -0.1, 1.0 / 3.0, 0.5, -0.1, -1.0 / 15.0)


class ParamError(ValueError):
    """Raised for coefficient sets violating the modeling constraint."""


@dataclass(frozen=True)
class ModelParams:
    """Coefficients ``a..g``, the small parameter and the case tag."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    g: float
    eps: float
    case_tag: str = "General"

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0):
            raise ParamError(f"eps must lie in (0, 1), got {self.eps}")
        if self.case_tag not in ("General", "Case1", "Case2"):
            raise ParamError(f"unknown case tag {self.case_tag!r}")

    @classmethod
    def case1(cls, eps: float) -> "ModelParams":
        return cls(*CASE1_COEFFS, eps=eps, case_tag="Case1")

    @classmethod
    def case2(cls, eps: float) -> "ModelParams":
        return cls(*CASE2_COEFFS, eps=eps, case_tag="Case2")

    @classmethod
    def general(cls, eps: float) -> "ModelParams":
        return cls(*GENERAL_COEFFS, eps=eps)

    @property
    def coeffs(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e, self.f, self.g)


@dataclass(frozen=True)
class ParamReport:
    """Outcome of :func:`validate_params`."""

    constraint_residuals: tuple
    families: dict
    boundary: bool
    curl_free: bool
    case_consistent: bool


def validate_params(p: ModelParams, tol: float = 1e-14) -> ParamReport:
    """Check the constraint, the well-posedness families and curl-free propagation.

    Raises
    ------
    ParamError
        If ``a+b+c+d = 1/3`` or ``d+e+f+g = 2/3`` fails.
    """
    a, b, c, d, e, f, g = p.coeffs
    res = (a + b + c + d - 1.0 / 3.0, d + e + f + g - 2.0 / 3.0)
    if max(abs(r) for r in res) > tol:
        raise ParamError(f"constraint violated, residuals {res[0]!r}, {res[1]!r}")
    base = b >= 0 and d >= 0 and e >= 0
    families = {
        "i": base and max(a, c, f, g) <= 0,
        "ii": base and max(a, c) <= 0 and f == g,
        "iii": base and a == c and max(f, g) <= 0,
        "iv": base and a == c and f == g,
    }
    boundary = any(x == 0 for x in (a, c, f, g))
    if p.case_tag == "Case1":
        consistent = np.allclose(p.coeffs, CASE1_COEFFS, rtol=0, atol=tol)
    elif p.case_tag == "Case2":
        consistent = np.allclose(p.coeffs, CASE2_COEFFS, rtol=0, atol=tol)
    else:
        consistent = True
    return ParamReport(res, families, boundary, bool(b == e and b >= 0 and a == f),
                       bool(consistent))


@dataclass(frozen=True)
class State:
    """Physical unknowns on the grid."""

    v: np.ndarray
    w: np.ndarray
    zeta: np.ndarray
    time: float = 0.0

    @classmethod
    def zeros(cls, grid: GridSpec) -> "State":
        z = np.zeros(grid.shape)
        return cls(z, z.copy(), z.copy())


@dataclass(frozen=True)
class Tendency:
    """Time derivatives of the unknowns."""

    dv: np.ndarray
    dw: np.ndarray
    dzeta: np.ndarray


@dataclass(frozen=True)
class _Multipliers:
    ikx: np.ndarray
    iky: np.ndarray
    inv_b: np.ndarray
    inv_e: np.ndarray
    inv_d: np.ndarray
    lin_a: np.ndarray
    lin_c: np.ndarray
    lin_f: np.ndarray
    lin_g: np.ndarray


@lru_cache(maxsize=64)
def _multipliers(grid: GridSpec, coeffs: tuple, eps: float) -> _Multipliers:
    a, b, c, d, e, f, g = coeffs
    q = eps * grid.kx ** 2
    ones = np.ones(grid.half_shape)
    return _Multipliers(
        ikx=1j * grid.kx * ones, iky=1j * grid.ky * ones,
        inv_b=ones / (1 + b * q), inv_e=ones / (1 + e * q), inv_d=ones / (1 + d * q),
        lin_a=(1 - a * q) * ones, lin_c=(1 - c * q) * ones,
        lin_f=(1 - f * q) * ones, lin_g=(1 - g * q) * ones,
    )


def resolve_system(system: str, p: ModelParams) -> str:
    """Normalize a system name and check it against the parameters."""
    names = {s.lower(): s for s in SYSTEMS}
    key = str(system).lower()
    if key not in names:
        raise ValueError(f"unknown system {system!r}; expected one of {SYSTEMS}")
    name = names[key]
    expected = {"Case1": CASE1_COEFFS, "Case2": CASE2_COEFFS}.get(name)
    if expected is not None and not np.allclose(p.coeffs, expected, rtol=0, atol=1e-14):
        raise ParamError(f"{name} requires coefficients {expected}")
    return name


def rhs_hat(system: str, u: np.ndarray, p: ModelParams, grid: GridSpec,
            linear: bool = False) -> np.ndarray:
    """Tendency of a stacked half-spectrum state ``u = (v, w, zeta)``.

    Parameters
    ----------
    system : str
        One of ``WTB1, WTB2, Case1, Case2``.
    u : ndarray, shape (3, nx, ny//2+1)
        Half spectra of ``v, w, zeta``.
    linear : bool
        Drop all quadratic terms.
    """
    name = resolve_system(system, p)
    eps = p.eps
    m = _multipliers(grid, p.coeffs, eps)
    vh, wh, zh = u
    sy = np.sqrt(eps) if name == "WTB1" else 1.0
    nv = -m.lin_a * m.ikx * zh
    nw = -sy * m.lin_f * m.iky * zh
    nz = -m.lin_c * m.ikx * vh - sy * m.lin_g * m.iky * wh
    if not linear:
        P = grid.to_padded
        v, w, z = P(vh), P(wh), P(zh)
        vx, vy = P(m.ikx * vh), P(m.iky * vh)
        wx, wy = P(m.ikx * wh), P(m.iky * wh)
        zx, zy = P(m.ikx * zh), P(m.iky * zh)
        Q = grid.from_padded
        if name == "WTB1":
            s3 = eps * sy
            nv = nv - Q(eps * (v * vx + 0.5 * w * wx) + 0.5 * s3 * w * vy)
            nw = nw - Q(0.5 * eps * v * wx + s3 * (w * wy + 0.5 * v * vy))
            nz = nz - Q(eps * (z * vx + v * zx) + s3 * (z * wy + w * zy))
        else:
            nv = nv - Q(eps * (v * vx + w * vy + 0.5 * z * zx))
            nw = nw - Q(eps * (v * wx + w * wy + 0.5 * z * zy))
            nz = nz - Q(eps * (v * zx + w * zy + 0.5 * z * (vx + wy)))
    return np.stack([m.inv_b * nv, m.inv_e * nw, m.inv_d * nz])


def state_hat(s: State, grid: GridSpec) -> np.ndarray:
    return np.stack([grid.rfft(s.v), grid.rfft(s.w), grid.rfft(s.zeta)])


def rhs(system: str, s: State, p: ModelParams, grid: GridSpec,
        linear: bool = False) -> Tendency:
    """Time derivative of ``s`` under the chosen system."""
    for f in (s.v, s.w, s.zeta):
        if not np.all(np.isfinite(grid.check(f))):
            raise FloatingPointError("non-finite field passed to rhs")
    t = rhs_hat(system, state_hat(s, grid), p, grid, linear)
    return Tendency(grid.irfft(t[0]), grid.irfft(t[1]), grid.irfft(t[2]))


def zeta_tilde(zeta: np.ndarray, eps: float, grid: GridSpec) -> np.ndarray:
    """Nonlinear change of variable ``zeta - (eps/4) zeta^2``."""
    zh = grid.rfft(zeta)
    return grid.irfft(zh - 0.25 * eps * grid.product_hat(zh, zh))


def hs_eps_weight(grid: GridSpec, eps: float, n: float) -> np.ndarray:
    """Weight ``eps**-0.5 (xi1^2 + eps xi2^2)**n`` of the anisotropic norm."""
    return eps ** -0.5 * (grid.kx ** 2 + eps * grid.ky ** 2) ** n


@dataclass(frozen=True)
class ConsistencyReport:
    """Anisotropic Sobolev norms of the three consistency residuals."""

    v: float
    w: float
    zeta: float

    @property
    def total(self) -> float:
        return float(np.sqrt(self.v ** 2 + self.w ** 2 + self.zeta ** 2))


def consistency_residual(s: State, p: ModelParams, grid: GridSpec,
                         n: float = 2.0) -> ConsistencyReport:
    """Defect of the transformed-variable system on a state of ``WTB1``.

    Time derivatives come from the ``WTB1`` right-hand side. The elevation is
    replaced by ``zeta - (eps/4) zeta^2`` and substituted into the system
    obtained by dropping O(eps^2) terms.
    """
    eps = p.eps
    a, b, c, d, e, f, g = p.coeffs
    m = _multipliers(grid, p.coeffs, eps)
    u = state_hat(s, grid)
    ut = rhs_hat("WTB1", u, p, grid)
    vh, wh, zh = u
    zth = zh - 0.25 * eps * grid.product_hat(zh, zh)
    zth_t = ut[2] - 0.5 * eps * grid.product_hat(zh, ut[2])
    sy = np.sqrt(eps)
    s3 = eps * sy
    P = grid.to_padded
    v, w, z = P(vh), P(wh), P(zth)
    vx, vy = P(m.ikx * vh), P(m.iky * vh)
    wx, wy = P(m.ikx * wh), P(m.iky * wh)
    zx, zy = P(m.ikx * zth), P(m.iky * zth)
    Q = grid.from_padded
    rv = (ut[0] / m.inv_b + m.lin_a * m.ikx * zth
          + Q(eps * (v * vx + 0.5 * w * wx) + 0.5 * s3 * w * vy + 0.5 * eps * z * zx))
    rw = (ut[1] / m.inv_e + sy * m.lin_f * m.iky * zth
          + Q(0.5 * eps * v * wx + s3 * (w * wy + 0.5 * v * vy + 0.5 * z * zy)))
    rz = (zth_t / m.inv_d + m.lin_c * m.ikx * vh + sy * m.lin_g * m.iky * wh
          + Q(eps * v * zx + s3 * w * zy + 0.5 * eps * z * vx + 0.5 * s3 * z * wy))
    wgt = hs_eps_weight(grid, eps, n)
    return ConsistencyReport(*(np.sqrt(grid.l2_sq_hat(r, wgt)) for r in (rv, rw, rz)))


def curl_residual(s: State, eps: float, grid: GridSpec, scaled: bool = False) -> float:
    """L2 norm of ``eps**0.5 v_y - w_x`` (``scaled``) or ``v_y - w_x``."""
    fac = np.sqrt(eps) if scaled else 1.0
    r = fac * 1j * grid.ky * grid.rfft(s.v) - 1j * grid.kx * grid.rfft(s.w)
    return float(np.sqrt(grid.l2_sq_hat(r)))


def wtb1_grid(nx: int, ny: int, eps: float, lx: float = 2 * np.pi,
              ly_ref: float = 2 * np.pi, dealias_fraction: float = 2.0 / 3.0) -> GridSpec:
    """Grid for ``WTB1`` runs: the y-period is ``eps**0.5 * ly_ref``."""
    return GridSpec(nx, ny, lx, np.sqrt(eps) * ly_ref, dealias_fraction)
