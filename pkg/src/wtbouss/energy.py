"""Discrete Sobolev norms and the energy functionals of the two cases.

All norms are lattice sums with the physical normalization of
:mod:`wtbouss.spectral`; energies are squared norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import GridSpec
from .systems import State, hs_eps_weight, state_hat
from .unknowns import ResolventConfig, _tilde_parts, case_ops

FLAVORS = ("inhomogeneous", "homogeneous", "hs_eps")


def sobolev_weight(grid: GridSpec, s: float, flavor: str = "inhomogeneous",
                   eps: float | None = None) -> np.ndarray:
    """Squared Sobolev weight on the half spectrum."""
    k2 = grid.kx ** 2 + grid.ky ** 2
    if flavor == "inhomogeneous":
        return (1.0 + k2) ** s
    if flavor == "homogeneous":
        w = k2 ** s * np.ones(grid.half_shape)
        w[0, 0] = 0.0
        return w
    if flavor == "hs_eps":
        if eps is None or eps <= 0:
            raise ValueError("hs_eps flavor needs eps > 0")
        return hs_eps_weight(grid, eps, s) * np.ones(grid.half_shape)
    raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")


def sobolev_norm(f: np.ndarray, s: float, grid: GridSpec, flavor: str = "inhomogeneous",
                 eps: float | None = None) -> float:
    """Sobolev norm of a real field.

    Parameters
    ----------
    flavor : {'inhomogeneous', 'homogeneous', 'hs_eps'}
        Weight ``<xi>^2s``, ``|xi|^2s`` (zero mode ignored) or
        ``eps^-1/2 (xi1^2 + eps xi2^2)^s``.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    return float(np.sqrt(grid.l2_sq_hat(grid.rfft(f), sobolev_weight(grid, s, flavor, eps))))


@dataclass(frozen=True)
class EnergyReport:
    """Energy functionals at one time."""

    e_total: float
    e_low: float
    e_high: float
    e_tilde_high: float
    s: float
    eps: float
    case_tag: str
    time: float = 0.0


def _case_symbols(case: str, grid: GridSpec, eps: float):
    q = eps * grid.kx ** 2 * np.ones(grid.half_shape)
    if case == "Case1":
        J = 1.0 + q / 3.0
        return J, J
    J = 1.0 + q / 2.0
    return J, J / (1.0 + q / 6.0)


def energy(case: str, s: State, sobolev_s: float, eps: float, grid: GridSpec,
           with_tilde: bool = True, cfg: ResolventConfig = ResolventConfig()) -> EnergyReport:
    """Energy functionals of ``s``.

    ``case`` is ``Case1``, ``Case2`` or ``General``. The general report uses
    unweighted norms, ``e_low = sum ||f||_{H^s}^2`` and
    ``e_high = sum ||grad f||_{dot H^s}^2``, and no good-unknown energy.
    """
    vh, wh, zh = state_hat(s, grid)
    hs = sobolev_weight(grid, sobolev_s)
    hs1 = sobolev_weight(grid, sobolev_s + 1)
    hd = sobolev_weight(grid, sobolev_s, "homogeneous")
    n2 = grid.l2_sq_hat
    kx2, ky2 = grid.kx ** 2, grid.ky ** 2
    e_tilde = 0.0
    if case == "General":
        low = sum(n2(f, hs) for f in (vh, wh, zh))
        high = sum(n2(f, hd * (kx2 + ky2)) for f in (vh, wh, zh))
        total = low + high
    elif case in ("Case1", "Case2"):
        J, K = _case_symbols(case, grid, eps)
        if case == "Case1":
            low = n2(vh, hs * J ** 2) + n2(wh, hs * J) + n2(zh, hs * J)
            high = (n2(vh, hd * (J * kx2 + ky2)) + n2(wh, hd * (kx2 + ky2 / J))
                    + n2(zh, hd * (kx2 + ky2 / J)))
            total = low + high
        else:
            low = n2(vh, hs * J * K) + n2(wh, hs * J) + n2(zh, hs * J)
            grad = hd * J * (kx2 + ky2)
            high = n2(vh, grad) + n2(wh, grad) + n2(zh, grad)
            total = n2(zh, hs1 * J) + n2(vh, hs1 * J) + n2(wh, hs1 * J)
        if with_tilde:
            tp = _tilde_parts(case, (vh, wh, zh), None, eps, grid, cfg)
            Jc = case_ops(case, grid, eps).J
            e_tilde = n2(tp.p_tilde.h, hd * Jc) + n2(tp.theta_tilde.h, hd * Jc)
    else:
        raise ValueError(f"unknown case {case!r}")
    return EnergyReport(float(total), float(low), float(high), float(e_tilde),
                        float(sobolev_s), float(eps), case, float(s.time))


def tilde_energy(p_tilde: np.ndarray, theta_tilde: np.ndarray, sobolev_s: float, eps: float,
                 grid: GridSpec, case: str = "Case1", mean_tol: float = 1e-12) -> float:
    """``||J^1/2 p~||^2 + ||J^1/2 theta~||^2`` in the homogeneous norm.

    Raises
    ------
    ValueError
        If an input has a nonzero mean.
    """
    J = case_ops(case, grid, eps).J
    hd = sobolev_weight(grid, sobolev_s, "homogeneous")
    out = 0.0
    for name, f in (("p_tilde", p_tilde), ("theta_tilde", theta_tilde)):
        fh = grid.rfft(f)
        mean = abs(fh[0, 0]) / (grid.nx * grid.ny)
        if mean > mean_tol * max(1.0, float(np.max(np.abs(f)))):
            raise ValueError(f"{name} must have zero mean")
        out += grid.l2_sq_hat(fh, hd * J)
    return float(out)
