"""Symmetrizing unknowns for the two special cases.

Both cases share one structure once written with

    J = 1 + b eps xi1^2,  Y = 1 - g eps xi1^2,  K = J / Y,
    S = (K xi1^2 + xi2^2)^(1/2),  Lam = S / K,

where case one has ``Y = 1`` (so ``K = J`` and ``S = A``) and case two has
``S = B``. Then

    p = v_x + K^-1 w_y,  theta = Lam zeta,
    V = -grad S^-2 K p,  zeta = K S^-1 theta.

Good unknowns are built with a small forward-mode differentiation layer
(:class:`Jet`): every quantity carries its value and its time derivative
along a supplied tendency, so exact time derivatives of ``p~, theta~`` come
from the same code that builds them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spectral import GridSpec
from .systems import State, state_hat

CASES = ("Case1", "Case2")


class GuardViolation(RuntimeError):
    """Neumann-series contraction guard exceeded."""

    def __init__(self, factor: float, threshold: float):
        super().__init__(f"resolvent contraction factor {factor:.6g} exceeds {threshold:.6g}")
        self.factor = factor


class ConvergenceError(RuntimeError):
    """Neumann series did not reach tolerance."""


@dataclass(frozen=True)
class ResolventConfig:
    """Truncation policy of the Neumann series."""

    max_terms: int = 64
    tol: float = 1e-13
    norm_guard: float = 0.5

    def __post_init__(self):
        if self.tol <= 0 or self.max_terms < 1:
            raise ValueError("need tol > 0 and max_terms >= 1")
        if not (0 < self.norm_guard < 1):
            raise ValueError("norm_guard must lie in (0, 1)")


@dataclass(frozen=True)
class CaseOps:
    """Fourier multipliers of one case on one grid (half-spectrum layout)."""

    case: str
    eps: float
    grid: GridSpec
    J: np.ndarray
    Y: np.ndarray
    K: np.ndarray
    S: np.ndarray
    S_inv: np.ndarray
    Lam: np.ndarray
    ikx: np.ndarray
    iky: np.ndarray
    dx4: np.ndarray


def normalize_case(case: str) -> str:
    key = str(case).lower()
    for c in CASES:
        if c.lower() == key:
            return c
    raise ValueError(f"unknown case {case!r}; expected one of {CASES}")


@lru_cache(maxsize=64)
def case_ops(case: str, grid: GridSpec, eps: float) -> CaseOps:
    case = normalize_case(case)
    q = eps * grid.kx ** 2 * np.ones(grid.half_shape)
    if case == "Case1":
        J = 1.0 + q / 3.0
        Y = np.ones_like(q)
    else:
        J = 1.0 + q / 2.0
        Y = 1.0 + q / 6.0
    K = J / Y
    S = np.sqrt(K * grid.kx ** 2 + grid.ky ** 2)
    S_inv = np.zeros_like(S)
    nz = S > 0
    S_inv[nz] = 1.0 / S[nz]
    ones = np.ones(grid.half_shape)
    return CaseOps(case, eps, grid, J, Y, K, S, S_inv, S / K,
                   1j * grid.kx * ones, 1j * grid.ky * ones, q ** 2 / eps ** 2)


# --- (p, theta) ------------------------------------------------------------

def ptheta_hat(ops: CaseOps, vh, wh, zh):
    return ops.ikx * vh + ops.iky * wh / ops.K, ops.Lam * zh


def velocity_hat(ops: CaseOps, ph):
    phi = ops.S_inv ** 2 * ops.K * ph
    return -ops.ikx * phi, -ops.iky * phi


def to_ptheta(case: str, s: State, eps: float, grid: GridSpec):
    """``p = v_x + K^-1 w_y`` and ``theta = Lam zeta`` as real fields."""
    ops = case_ops(case, grid, eps)
    ph, th = ptheta_hat(ops, *state_hat(s, grid))
    return grid.irfft(ph), grid.irfft(th)


def from_ptheta(case: str, p: np.ndarray, theta: np.ndarray, eps: float,
                grid: GridSpec, mean_tol: float = 1e-12) -> State:
    """Curl-free state with ``V = -grad S^-2 K p`` and ``zeta = K S^-1 theta``."""
    ops = case_ops(case, grid, eps)
    ph, th = grid.rfft(p), grid.rfft(theta)
    for name, fh in (("p", ph), ("theta", th)):
        scale = np.sqrt(grid.l2_sq_hat(fh))
        if abs(fh[0, 0]) / (grid.nx * grid.ny) > mean_tol * max(scale, 1.0):
            raise ValueError(f"{name} must have zero mean")
    vh, wh = velocity_hat(ops, ph)
    return State(grid.irfft(vh), grid.irfft(wh), grid.irfft(ops.K * ops.S_inv * th))


# --- forward-mode layer ----------------------------------------------------

class Jet:
    """Half spectrum with an optional time derivative."""

    __slots__ = ("h", "t")

    def __init__(self, h, t=None):
        self.h = h
        self.t = t

    def lin(self, sym) -> "Jet":
        return Jet(sym * self.h, None if self.t is None else sym * self.t)

    def __add__(self, other: "Jet") -> "Jet":
        t = None if self.t is None else self.t + other.t
        return Jet(self.h + other.h, t)

    def __sub__(self, other: "Jet") -> "Jet":
        t = None if self.t is None else self.t - other.t
        return Jet(self.h - other.h, t)

    def __rmul__(self, c: float) -> "Jet":
        return Jet(c * self.h, None if self.t is None else c * self.t)

    def __neg__(self) -> "Jet":
        return (-1.0) * self


def jmul(grid: GridSpec, a: Jet, b: Jet) -> Jet:
    """Dealiased product with the product rule on the tangent."""
    h = grid.product_hat(a.h, b.h)
    if a.t is None:
        return Jet(h)
    return Jet(h, grid.product_hat(a.t, b.h) + grid.product_hat(a.h, b.t))


def jdot_grad(grid: GridSpec, ops: CaseOps, V: tuple, f: Jet) -> Jet:
    """``V . grad f`` with dealiased products."""
    return jmul(grid, V[0], f.lin(ops.ikx)) + jmul(grid, V[1], f.lin(ops.iky))


def jpointwise(grid: GridSpec, z: Jet, func, dfunc) -> Jet:
    """Apply a smooth map pointwise on collocation values."""
    zv = grid.irfft(z.h)
    h = grid.rfft(func(zv))
    if z.t is None:
        return Jet(h)
    return Jet(h, grid.rfft(dfunc(zv) * grid.irfft(z.t)))


# --- resolvent and Gamma/gamma --------------------------------------------

def _mult(grid: GridSpec, zh, fh):
    return grid.product_hat(zh, fh * grid.mask)


def _resolvent_hat(grid: GridSpec, ops: CaseOps, zh, fh, cfg: ResolventConfig):
    """``(2 + (eps/2) zeta Y^-1)^-1 f`` by Neumann series; returns (result, factor)."""
    eps = ops.eps
    fnorm = np.sqrt(grid.l2_sq_hat(fh))
    if fnorm == 0.0:
        return np.zeros_like(fh), 0.0
    term = 0.5 * fh
    total = term.copy()
    prev = np.sqrt(grid.l2_sq_hat(term))
    factor = 0.0
    for _ in range(cfg.max_terms):
        term = -0.25 * eps * _mult(grid, zh, term / ops.Y)
        tn = np.sqrt(grid.l2_sq_hat(term))
        if prev > 0:
            factor = max(factor, tn / prev)
            if factor >= cfg.norm_guard:
                raise GuardViolation(factor, cfg.norm_guard)
        total += term
        if tn < cfg.tol * fnorm:
            return total, factor
        prev = tn
    raise ConvergenceError(f"Neumann series not converged after {cfg.max_terms} terms, "
                           f"last term norm {tn:.3e}")


def resolvent_apply(zeta: np.ndarray, f: np.ndarray, eps: float, grid: GridSpec,
                    cfg: ResolventConfig = ResolventConfig()) -> np.ndarray:
    """Apply ``(2 + (eps/2) zeta Y^-1)^-1`` with ``Y = 1 + (eps/6) xi1^2``.

    Multiplication by ``zeta`` is the dealiased product applied to the
    dealiased input. Raises :class:`GuardViolation` if the measured ratio of
    consecutive series terms reaches ``cfg.norm_guard``.
    """
    ops = case_ops("Case2", grid, eps)
    out, _ = _resolvent_hat(grid, ops, grid.rfft(zeta), grid.rfft(f), cfg)
    return grid.irfft(out)


def resolvent_forward(zeta: np.ndarray, f: np.ndarray, eps: float, grid: GridSpec) -> np.ndarray:
    """Apply ``2 + (eps/2) zeta Y^-1``, the inverse of :func:`resolvent_apply`."""
    ops = case_ops("Case2", grid, eps)
    fh = grid.rfft(f)
    return grid.irfft(2.0 * fh + 0.5 * eps * _mult(grid, grid.rfft(zeta), fh / ops.Y))


def _gamma_hat(grid, ops, zh, fh, cfg):
    Gf, _ = _resolvent_hat(grid, ops, zh, _mult(grid, zh, fh), cfg)
    gf = Gf + 0.5 * ops.eps * _mult(grid, zh, Gf / ops.Y)
    return Gf, gf


def jgamma(grid: GridSpec, ops: CaseOps, z: Jet, f: Jet, cfg: ResolventConfig):
    """``Gamma f`` and ``gamma f`` with exact time derivatives.

    With ``R = (2 + (eps/2) zeta Y^-1)^-1`` one has
    ``d(Gamma) f = R zeta_t (f - (eps/2) Y^-1 Gamma f)`` and
    ``d(gamma) f = (eps/2) zeta_t Y^-1 Gamma f + (1 + (eps/2) zeta Y^-1) d(Gamma) f``.
    """
    eps = ops.eps
    Gf, gf = _gamma_hat(grid, ops, z.h, f.h, cfg)
    if z.t is None:
        return Jet(Gf), Jet(gf)
    dG, _ = _resolvent_hat(grid, ops, z.h, _mult(grid, z.t, f.h - 0.5 * eps * Gf / ops.Y), cfg)
    dg = 0.5 * eps * _mult(grid, z.t, Gf / ops.Y) + dG + 0.5 * eps * _mult(grid, z.h, dG / ops.Y)
    Gft, gft = _gamma_hat(grid, ops, z.h, f.t, cfg)
    return Jet(Gf, dG + Gft), Jet(gf, dg + gft)


def gamma_apply(zeta: np.ndarray, f: np.ndarray, eps: float, grid: GridSpec,
                cfg: ResolventConfig = ResolventConfig()):
    """Return ``(Gamma f, gamma f)`` for the case-two operators."""
    ops = case_ops("Case2", grid, eps)
    Gf, gf = _gamma_hat(grid, ops, grid.rfft(zeta), grid.rfft(f), cfg)
    return grid.irfft(Gf), grid.irfft(gf)


def guard_factor(zeta: np.ndarray, eps: float) -> float:
    """A priori bound ``(eps/4) max|zeta|`` on the per-term contraction."""
    return 0.25 * eps * float(np.max(np.abs(zeta))) if np.size(zeta) else 0.0


# --- good unknowns ---------------------------------------------------------

def _G(eps):
    def func(z):
        return (1 + 0.5 * eps * z) * z / (2 + 0.5 * eps * z)

    def dfunc(z):
        q = 2 + 0.5 * eps * z
        return ((1 + eps * z) * q - 0.5 * eps * (1 + 0.5 * eps * z) * z) / q ** 2
    return func, dfunc


@dataclass
class TildeParts:
    """Intermediate quantities of the good-unknown construction (as jets)."""

    p: Jet
    theta: Jet
    zeta: Jet
    V: tuple
    p_tilde: Jet
    theta_tilde: Jet
    X: Jet
    G: Jet | None = None
    Gamma_X: Jet | None = None
    gamma_X: Jet | None = None


def _tilde_parts(case: str, u, ut, eps: float, grid: GridSpec, cfg: ResolventConfig) -> TildeParts:
    ops = case_ops(case, grid, eps)
    tangent = ut is not None
    vh, wh, zh = u
    ph, th = ptheta_hat(ops, vh, wh, zh)
    if tangent:
        pth, tth = ptheta_hat(ops, *ut)
        V = (Jet(vh, ut[0]), Jet(wh, ut[1]))
        z = Jet(zh, ut[2])
    else:
        pth = tth = None
        V = (Jet(vh), Jet(wh))
        z = Jet(zh)
    p, th_ = Jet(ph, pth), Jet(th, tth)
    m = lambda a, b: jmul(grid, a, b)  # noqa: E731
    X = p.lin(ops.S_inv ** 2 * ops.dx4 / ops.Y ** 2)
    if ops.case == "Case1":
        Jp = p.lin(ops.J)
        Gz = jpointwise(grid, z, *_G(eps))
        pt = (p + (0.5 * eps) * m(z, Jp).lin(1 / ops.J)
              + eps * jdot_grad(grid, ops, V, th_.lin(ops.S_inv * ops.J)).lin(1 / ops.J)
              - (eps ** 2 / 6) * m(Gz, X))
        tt = (th_ + (0.5 * eps) * m(z, th_.lin(ops.S * ops.J)).lin(ops.S_inv / ops.J)
              - eps * jdot_grad(grid, ops, V, Jp).lin(ops.S_inv / ops.J))
        return TildeParts(p, th_, z, V, pt, tt, X, G=Gz)
    GX, gX = jgamma(grid, ops, z, X, cfg)
    Kp = p.lin(ops.K)
    pt = (p + eps * (jdot_grad(grid, ops, V, th_.lin(ops.S_inv * ops.K)) + 0.5 * m(z, Kp)).lin(1 / ops.J)
          - (eps ** 2 / 6) * gX)
    tt = th_ - eps * (jdot_grad(grid, ops, V, Kp)
                      - 0.5 * m(z, th_.lin(ops.S * ops.K))).lin(ops.S_inv / ops.J)
    return TildeParts(p, th_, z, V, pt, tt, X, Gamma_X=GX, gamma_X=gX)


def to_tilde(case: str, s: State, eps: float, grid: GridSpec,
             cfg: ResolventConfig = ResolventConfig()):
    """Good unknowns ``(p~, theta~)`` of a curl-free state."""
    parts = _tilde_parts(case, state_hat(s, grid), None, eps, grid, cfg)
    return grid.irfft(parts.p_tilde.h), grid.irfft(parts.theta_tilde.h)


def tilde_rates(case: str, s: State, ds, eps: float, grid: GridSpec,
                cfg: ResolventConfig = ResolventConfig()):
    """Good unknowns and their exact time derivatives along the tendency ``ds``.

    Returns ``(p~, theta~, p~_t, theta~_t)`` as real fields.
    """
    ut = np.stack([grid.rfft(ds.dv), grid.rfft(ds.dw), grid.rfft(ds.dzeta)])
    parts = _tilde_parts(case, state_hat(s, grid), ut, eps, grid, cfg)
    f = grid.irfft
    return (f(parts.p_tilde.h), f(parts.theta_tilde.h),
            f(parts.p_tilde.t), f(parts.theta_tilde.t))
