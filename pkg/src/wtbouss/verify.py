"""Oracles: nonlinear-term builders, identity residuals, dispersion and lemma sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import GridSpec, SymbolSpec
from .systems import ModelParams, State, resolve_system, rhs_hat, state_hat
from .unknowns import (
    Jet, ResolventConfig, _gamma_hat, _resolvent_hat, _tilde_parts, case_ops, jgamma,
    normalize_case, ptheta_hat,
)


@dataclass(frozen=True)
class ResidualReport:
    """Defect of one equation of a derived system."""

    equation: str
    l2: float
    hs: float
    level: int
    expected_order: float | None = None
    measured_order: float | None = None


def case_params(case: str, eps: float) -> ModelParams:
    case = normalize_case(case)
    return ModelParams.case1(eps) if case == "Case1" else ModelParams.case2(eps)


def data_scale(s: State, grid: GridSpec) -> float:
    """Root-mean-square amplitude of ``(v, w, zeta)``."""
    tot = sum(np.sum(f ** 2) for f in (s.v, s.w, s.zeta))
    return float(np.sqrt(tot / (3 * grid.nx * grid.ny)))


def _nonlinear_hat(ops, grid, vh, wh, zh, ph):
    """``N_p`` and ``N_theta`` as half spectra."""
    mul = grid.product_hat
    Ki = 1.0 / ops.K
    vx, vy = ops.ikx * vh, ops.iky * vh
    wx, wy = ops.ikx * wh, ops.iky * wh
    zx, zy = ops.ikx * zh, ops.iky * zh
    n1 = (mul(vx, vx) + mul(wx, vy) + 0.5 * mul(zx, zx)
          + Ki * (mul(vy, wx) + mul(wy, wy) + 0.5 * mul(zy, zy)))

    def comm_Kinv(fh, gh):
        # [K^-1, f] g
        return Ki * mul(fh, gh) - mul(fh, Ki * gh)

    dxx = ops.ikx ** 2
    n2 = -(comm_Kinv(vh, ops.K * dxx * vh) + comm_Kinv(wh, ops.K * dxx * wh)
           + 0.5 * comm_Kinv(zh, ops.K * dxx * zh))
    X = ops.S_inv ** 2 * ops.dx4 / ops.Y ** 2 * ph
    if ops.case == "Case1":
        comm = ops.J * mul(zh, X) - mul(zh, ops.J * X)
        nth = -(ops.eps / 6.0) * ops.Lam * comm
    else:
        comm = dxx * mul(zh, X) - mul(zh, dxx * X)
        nth = (ops.eps ** 2 / 12.0) * ops.Lam * comm
    return -(n1 + n2), nth


def nonlinear_terms(case: str, s: State, eps: float, grid: GridSpec):
    """Quadratic remainders ``(N_p, N_theta)`` of the (p, theta) system."""
    ops = case_ops(case, grid, eps)
    vh, wh, zh = state_hat(s, grid)
    ph, _ = ptheta_hat(ops, vh, wh, zh)
    npp, nth = _nonlinear_hat(ops, grid, vh, wh, zh, ph)
    return grid.irfft(npp), grid.irfft(nth)


def _mean(grid: GridSpec, fh) -> float:
    return float(fh[0, 0].real) / (grid.nx * grid.ny)


def _hs_weight(grid: GridSpec, s: float):
    w = (grid.kx ** 2 + grid.ky ** 2) ** s * np.ones(grid.half_shape)
    w[0, 0] = 0.0
    return w


def _report(name, rh, grid, sobolev_s):
    rh = rh.copy()
    rh[0, 0] = 0.0  # mean-free comparison, see module notes
    return ResidualReport(name, float(np.sqrt(grid.l2_sq_hat(rh))),
                          float(np.sqrt(grid.l2_sq_hat(rh, _hs_weight(grid, sobolev_s)))),
                          grid.nx)


def ptheta_residual(case: str, s: State, eps: float, grid: GridSpec, sobolev_s: float = 0.0):
    """Defects of the (p, theta) evolution system.

    ``p_t, theta_t`` are the images of the case right-hand side; the right
    sides of the system are assembled independently from ``N_p, N_theta``.
    Zero modes are excluded because ``S S^-1 = 1`` fails only there.
    """
    ops = case_ops(case, grid, eps)
    u = state_hat(s, grid)
    ut = rhs_hat(ops.case, u, case_params(case, eps), grid)
    vh, wh, zh = u
    ph, th = ptheta_hat(ops, vh, wh, zh)
    pth, tth = ptheta_hat(ops, *ut)
    npp, nth = _nonlinear_hat(ops, grid, vh, wh, zh, ph)
    mul = grid.product_hat

    def vgrad(fh):
        return mul(vh, ops.ikx * fh) + mul(wh, ops.iky * fh)

    YS = ops.Y * ops.S
    X = ops.S_inv ** 2 * ops.dx4 / ops.Y ** 2 * ph
    rp = (ops.J * pth - YS * th + eps * vgrad(ops.K * ph) / ops.K
          - 0.5 * eps * mul(zh, ops.S * ops.K * th) / ops.K - eps * npp)
    rt = (ops.J * tth + YS * ph + eps * ops.Lam * vgrad(ops.S_inv * ops.K * th)
          + 0.5 * eps * ops.Lam * mul(zh, ops.K * ph)
          - (eps ** 2 / 6.0) * YS * mul(zh, X) - eps * nth)
    return _report("p", rp, grid, sobolev_s), _report("theta", rt, grid, sobolev_s)


def tilde_residual(case: str, s: State, eps: float, grid: GridSpec,
                   cfg: ResolventConfig = ResolventConfig(), sobolev_s: float = 0.0):
    """Defects of the symmetric system for the good unknowns.

    All time derivatives are exact: the case right-hand side supplies
    ``(v, w, zeta)_t`` and the good unknowns are differentiated along it.
    """
    ops = case_ops(case, grid, eps)
    u = state_hat(s, grid)
    ut = rhs_hat(ops.case, u, case_params(case, eps), grid)
    tp = _tilde_parts(ops.case, u, ut, eps, grid, cfg)
    mul = grid.product_hat
    p, th, z, V = tp.p, tp.theta, tp.zeta, tp.V
    pt, tt = tp.p_tilde, tp.theta_tilde
    vh, wh, zh = u
    npp, nth = _nonlinear_hat(ops, grid, vh, wh, zh, p.h)
    S, Si, J, K, Y = ops.S, ops.S_inv, ops.J, ops.K, ops.Y
    d4 = ops.dx4

    def vgrad(Vh, fh):
        return mul(Vh[0], ops.ikx * fh) + mul(Vh[1], ops.iky * fh)

    def vgrad_comm(sym, Vh, fh):
        # [sym, V] . grad f
        return sym * vgrad(Vh, fh) - vgrad(Vh, sym * fh)

    Vv = (V[0].h, V[1].h)
    Vt = (V[0].t, V[1].t)
    X = tp.X
    if ops.case == "Case1":
        G = tp.G
        zv = grid.irfft(zh)
        H = grid.rfft(zv / (2 + 0.5 * eps * zv))
        n1 = (0.5 * mul(z.t, J * p.h) + vgrad(Vt, Si * J * th.h)
              - (eps / 6.0) * J * mul(G.t, X.h))
        n2 = ((eps ** 2 / 6.0) * vgrad(Vv, mul(H, X.h)) + npp + 0.5 * eps * mul(zh, npp)
              + eps * vgrad(Vv, Si * nth)
              - (eps ** 2 / 6.0) * J * mul(G.h, Si ** 2 * d4 / J * npp))
        n3 = -(eps / 6.0) * (J * mul(G.h, Si * d4 / J * tt.h) - mul(G.h, Si * d4 * tt.h))
        rp = (J * pt.t - S * tt.h - 0.5 * eps * mul(zh, S * tt.h)
              + (eps ** 2 / 6.0) * mul(G.h, Si * d4 * tt.h)
              + eps * vgrad(Vv, pt.h) - eps * (n1 + n2 + n3)
              + 0.5 * eps ** 2 * _mean(grid, npp) * zh)

        def comm_Ainv_z(gh):
            return Si * mul(zh, S * gh) - mul(zh, gh)

        m1 = (0.5 * Si * mul(z.t, S * J * th.h) - Si * vgrad(Vt, J * p.h)
              + 0.5 * comm_Ainv_z(J * th.t) - vgrad_comm(Si, Vv, J * p.t))
        dX = Si ** 2 * d4 * (pt.h - p.h)

        def one_plus_z(gh):
            return gh + 0.5 * eps * mul(zh, gh)

        m2 = (-(eps / 6.0) * one_plus_z(S * mul(H, dX)) + one_plus_z(nth)
              - eps * vgrad(Vv, Si * npp))
        Xt = Si ** 2 * d4 * pt.h
        m3 = (eps / 6.0) * one_plus_z(S * mul(H, Xt) - mul(H, S * Xt))
        rt = (J * tt.t + S * pt.h + 0.5 * eps * mul(zh, S * pt.h)
              - (eps ** 2 / 6.0) * mul(G.h, Si * d4 * pt.h)
              + eps * vgrad(Vv, tt.h) - eps * (m1 + m2 + m3))
    else:
        GX, gX = tp.Gamma_X, tp.gamma_X

        def gamma(fh):
            return jgamma(grid, ops, Jet(zh), Jet(fh), cfg)[1].h

        def Gamma(fh):
            return jgamma(grid, ops, Jet(zh), Jet(fh), cfg)[0].h

        dgX = gX.t - gamma(X.t)  # time derivative of gamma acting on X
        dxx = ops.ikx ** 2
        n1 = (0.5 * mul(z.t, K * p.h) + vgrad(Vt, Si * K * th.h)
              - (eps / 6.0) * J * dgX)
        n2 = ((eps ** 2 / 12.0) * (dxx * gamma(X.t) - gamma(dxx * X.t))
              + (eps ** 2 / 6.0) * vgrad(Vv, GX.h))
        q = Si ** 2 * d4 / Y ** 2
        n3 = (npp + 0.5 * eps * mul(zh, npp / Y) + eps * vgrad(Vv, Si * nth / Y)
              - (eps ** 2 / 6.0) * gamma(q * npp))
        rp = (J * pt.t - Y * S * tt.h - 0.5 * eps * mul(zh, S * tt.h)
              + (eps ** 2 / 6.0) * gamma(Si * d4 / Y * tt.h)
              + eps * vgrad(Vv, pt.h) - eps * (n1 + n2 + n3)
              + 0.5 * eps ** 2 * _mean(grid, npp) * zh)

        def one_plus_zY(gh):
            return gh + 0.5 * eps * mul(zh, gh / Y)

        m1 = (-Si * vgrad(Vt, K * p.h) + 0.5 * Si * mul(z.t, S * K * th.h)
              + 0.5 * (Si * mul(zh, S * K * th.t) - mul(zh, K * th.t))
              - vgrad_comm(Si, Vv, K * p.t))
        m2 = nth + 0.5 * eps * mul(zh, nth / Y) - eps * vgrad(Vv, Si * npp / Y)
        m3 = (-(eps / 6.0) * gamma(Si * d4 / Y * (pt.h - p.h))
              + (eps / 6.0) * one_plus_zY(Y * S * GX.h - Gamma(Y * S * X.h)))
        rt = (J * tt.t + Y * S * pt.h + 0.5 * eps * mul(zh, S * pt.h)
              - (eps ** 2 / 6.0) * gamma(Si * d4 / Y * pt.h)
              + eps * vgrad(Vv, tt.h) - eps * (m1 + m2 + m3))
    return _report("p_tilde", rp, grid, sobolev_s), _report("theta_tilde", rt, grid, sobolev_s)


# --- dispersion ------------------------------------------------------------

@dataclass(frozen=True)
class DispersionResult:
    """Measured and predicted linear frequency of one lattice mode."""

    mode: tuple
    measured: float
    predicted: float
    rel_err: float


def predicted_frequency(system: str, p: ModelParams, xi1: float, xi2: float) -> float:
    """Linear frequency of the plane wave with wavenumber ``(xi1, xi2)``."""
    name = resolve_system(system, p)
    if name == "Case1":
        sym = SymbolSpec("Lambda1", eps=p.eps)
    elif name == "Case2":
        sym = SymbolSpec("Lambda2", eps=p.eps)
    else:
        sym = SymbolSpec("Lambda", eps=p.eps, coeffs=p.coeffs)
        if name == "WTB2":
            xi2 = xi2 / np.sqrt(p.eps)
    return float(sym.at(xi1, xi2))


def _half_index(grid: GridSpec, k1: int, k2: int):
    if k2 < 0 or (k2 == 0 and k1 < 0):
        k1, k2 = -k1, -k2
    if (k1, k2) == (0, 0) or abs(k1) >= grid.nx // 2 or k2 >= grid.ny // 2:
        raise ValueError(f"mode {(k1, k2)} is not resolved on a {grid.nx}x{grid.ny} grid")
    i = k1 % grid.nx
    if not grid.mask[i, k2]:
        raise ValueError(f"mode {(k1, k2)} lies outside the dealiasing mask")
    return i, k2


def fit_frequency(t: np.ndarray, c: np.ndarray) -> float:
    """Frequency of a sampled sinusoid ``A cos(w t) + B sin(w t)``.

    A lag recurrence ``c(t+h) + c(t-h) = 2 cos(w h) c(t)`` gives the starting
    value; a nonlinear least-squares phase fit refines it.
    """
    from scipy.optimize import least_squares

    dt = t[1] - t[0]
    crossings = np.count_nonzero(np.signbit(c[1:]) != np.signbit(c[:-1]))
    coarse = np.pi * (crossings + 1) / (t[-1] - t[0])
    m = max(1, min(len(t) // 4, int(round(1.0 / (coarse * dt)))))
    mid, lag = c[m:-m], c[2 * m:] + c[:-2 * m]
    cos_wh = np.clip(np.dot(mid, lag) / (2 * np.dot(mid, mid)), -1.0, 1.0)
    w0 = float(np.arccos(cos_wh) / (m * dt))

    def resid(x):
        return x[0] * np.cos(x[2] * t) + x[1] * np.sin(x[2] * t) - c

    sol = least_squares(resid, [c[0], 0.0, w0], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return float(abs(sol.x[2]))


def dispersion_check(system: str, p: ModelParams, grid: GridSpec, modes, T: float = 10.0,
                     dt: float = 1e-3, delta: float = 1e-8, linear: bool = True) -> list:
    """Measure plane-wave frequencies by evolving a superposition of modes.

    The initial elevation is ``delta * sum cos(k . x)`` with zero velocity, so
    each Fourier coefficient evolves as ``cos(Lambda t)``. Modes are integer
    lattice indices; the physical wavenumbers follow from the grid periods.

    Raises
    ------
    ValueError
        For modes outside the dealiasing mask or repeated modes.
    """
    from .evolve import rk4

    name = resolve_system(system, p)
    idx = [_half_index(grid, int(k1), int(k2)) for k1, k2 in modes]
    if len(set(idx)) != len(idx):
        raise ValueError("modes must be distinct up to sign")
    zh = np.zeros(grid.half_shape, complex)
    for i, j in idx:
        zh[i, j] = 0.5 * delta * grid.nx * grid.ny * (2.0 if j == 0 else 1.0)
    u = np.stack([np.zeros_like(zh), np.zeros_like(zh), zh])
    rows, cols = np.array([i for i, _ in idx]), np.array([j for _, j in idx])
    nsteps = int(round(T / dt))
    samples = np.empty((nsteps + 1, len(idx)))
    samples[0] = 1.0

    def f(x):
        return rhs_hat(name, x, p, grid, linear)

    for n in range(1, nsteps + 1):
        u = rk4(u, dt, f)
        samples[n] = (u[2][rows, cols] / zh[rows, cols]).real
    t = dt * np.arange(nsteps + 1)
    out = []
    for (k1, k2), (i, j), c in zip(modes, idx, samples.T):
        pred = predicted_frequency(name, p, float(grid.kx[i, 0]), float(grid.ky[0, j]))
        meas = fit_frequency(t, c)
        out.append(DispersionResult((int(k1), int(k2)), meas, pred, abs(meas - pred) / pred))
    return out


# --- norm equivalences -----------------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    """Both sides of the (p, theta) norm equivalence and the good-unknown closeness.

    ``ratio = lhs / rhs``; ``tilde_p_ratio`` and ``tilde_theta_ratio`` divide
    the distances ``d_p, d_theta`` by the corresponding bounds. Ratios are
    ``nan`` when the denominator vanishes.
    """

    case: str
    eps: float
    lhs: float
    rhs: float
    ratio: float
    d_p: float
    d_theta: float
    bound_p: float
    bound_theta: float
    tilde_p_ratio: float
    tilde_theta_ratio: float


def _ratio(a: float, b: float) -> float:
    return a / b if b > 0 else float("nan")


def _nrm(grid: GridSpec, fh, s: float, sym=1.0, homogeneous: bool = False) -> float:
    k2 = grid.kx ** 2 + grid.ky ** 2
    w = (k2 ** s if homogeneous else (1.0 + k2) ** s) * np.ones(grid.half_shape)
    if homogeneous:
        w[0, 0] = 0.0
    return float(np.sqrt(grid.l2_sq_hat(fh, np.abs(sym) ** 2 * w)))


def equivalence_check(case: str, s: State, sobolev_s: float, eps: float, grid: GridSpec,
                      cfg: ResolventConfig = ResolventConfig()) -> EquivalenceReport:
    """Evaluate both sides of the norm equivalence and the tilde closeness bounds."""
    ops = case_ops(case, grid, eps)
    u = state_hat(s, grid)
    vh, wh, zh = u
    ph, th = ptheta_hat(ops, vh, wh, zh)
    tp = _tilde_parts(ops.case, u, None, eps, grid, cfg)
    J = ops.J
    Jh, Jmh = np.sqrt(J), 1.0 / np.sqrt(J)
    sx = sobolev_s
    kx, ky = ops.ikx, ops.iky

    def pair(a, b, hom):
        return np.hypot(_nrm(grid, a, sx, homogeneous=hom), _nrm(grid, b, sx, homogeneous=hom))

    if ops.case == "Case1":
        lhs = (_nrm(grid, ph, sx, Jh, True) + _nrm(grid, th, sx, Jh, True))
        rhs = (pair(Jh * kx * vh, ky * vh, True) + pair(kx * wh, Jmh * ky * wh, True)
               + pair(kx * zh, Jmh * ky * zh, True))
    else:
        lhs = _nrm(grid, ph, sx, Jh) + _nrm(grid, th, sx, Jh)
        rhs = sum(pair(Jh * kx * f, Jh * ky * f, False) for f in (vh, wh, zh))
    d_p = _nrm(grid, tp.p_tilde.h - ph, sx, Jh)
    d_t = _nrm(grid, tp.theta_tilde.h - th, sx, Jh, True)
    Vn = np.hypot(_nrm(grid, vh, sx), _nrm(grid, wh, sx))
    if ops.case == "Case1":
        bp = eps * (_nrm(grid, zh, sx, Jh) * _nrm(grid, ph, sx, Jh) + Vn * _nrm(grid, th, sx, Jh))
        bt = eps * (_nrm(grid, zh, sx) * _nrm(grid, th, sx, Jh) + Vn * _nrm(grid, ph, sx, Jh))
    else:
        bp = eps * (_nrm(grid, zh, sx + 1, Jh) * _nrm(grid, ph, sx) + Vn * _nrm(grid, th, sx))
        bt = eps * (_nrm(grid, zh, sx) * _nrm(grid, th, sx) + Vn * _nrm(grid, ph, sx))
    return EquivalenceReport(ops.case, float(eps), lhs, rhs, _ratio(lhs, rhs), d_p, d_t, bp, bt,
                             _ratio(d_p, bp), _ratio(d_t, bt))


# --- lemma sampler ---------------------------------------------------------

LEMMAS = ("L2.1.1", "L2.1.2", "L2.1.3", "L2.1.4", "L2.2.1", "L2.2.2", "L2.2.3", "L2.2.4",
          "product_J", "adjoint", "identity", "resolvent")


@dataclass(frozen=True)
class LemmaReport:
    """Largest sampled ratio per eps; ``count`` is the number of non-skipped samples."""

    lemma: str
    max_ratio: dict
    count: dict


def _lemma_ratio(lemma: str, grid: GridSpec, eps: float, fh, gh, sobolev_s: float,
                 cfg: ResolventConfig) -> tuple:
    """Return ``(lhs, rhs)`` for one sample."""
    mul = grid.product_hat
    sx = sobolev_s
    o1 = case_ops("Case1", grid, eps)
    o2 = case_ops("Case2", grid, eps)
    J = o1.J
    Jh, Jmh = np.sqrt(J), 1.0 / np.sqrt(J)
    n = lambda h, s=sx, sym=1.0, hom=False: _nrm(grid, h, s, sym, hom)  # noqa: E731

    def comm(sym, a, b):
        # [sym, a] b
        return sym * mul(a, b) - mul(a, sym * b)

    ikx = o1.ikx
    grad_n = lambda h, s, sym=1.0: np.hypot(n(ikx * h, s, sym), n(o1.iky * h, s, sym))  # noqa: E731
    if lemma == "L2.1.1":
        return n(Jmh * mul(Jh * fh, Jh * gh)), n(fh) * n(gh)
    if lemma == "L2.1.2":
        return (n(Jmh * comm(1.0 / J, fh, J ** 1.5 * gh)),
                np.sqrt(eps) * n(ikx * fh) * n(gh))
    if lemma == "L2.1.3":
        absd = np.sqrt(grid.kx ** 2 + grid.ky ** 2) ** sx * np.ones(grid.half_shape)
        return n(Jmh * comm(absd, fh, Jh * gh), 0.0), n(fh, sx, Jh) * n(gh, sx - 1)
    if lemma == "L2.1.4":
        return n(comm(o2.K, fh, ikx * gh)), n(ikx * fh) * n(gh)
    if lemma == "L2.2.1":
        A = o1.S
        return n(Jmh * comm(A, fh, gh)), (n(fh) + n(Jmh * A * fh)) * n(gh)
    if lemma == "L2.2.2":
        return (n(Jmh * comm(o1.S_inv, fh, o1.S * gh), sx, 1.0, True), n(fh) * n(gh, sx - 1))
    J2h = 1.0 / np.sqrt(o2.J)
    if lemma == "L2.2.3":
        return n(J2h * comm(o2.S, fh, gh)), grad_n(fh, sx, J2h) * n(gh, sx, J2h)
    if lemma == "L2.2.4":
        return (n(J2h * comm(o2.S_inv, fh, o2.S * gh), sx, 1.0, True),
                grad_n(fh, sx - 1, J2h) * n(gh, sx - 1, J2h))
    if lemma == "product_J":
        return n(mul(fh, gh), sx, np.sqrt(o2.J)), n(fh, sx + 1, np.sqrt(o2.J)) * n(gh, sx, np.sqrt(o2.J))
    # operator checks on the case-two resolvent with zeta = f
    zh = fh * (0.5 / eps) / _zmax(grid, fh)  # guard factor (eps/4) max|zeta| = 1/8
    gn = np.sqrt(grid.l2_sq_hat(gh))
    if lemma == "identity":
        Gf, gf = _gamma_hat(grid, o2, zh, gh, cfg)
        return np.sqrt(grid.l2_sq_hat(Gf + gf - grid.product_hat(zh, gh * grid.mask))), gn * _zmax(grid, zh)
    if lemma == "resolvent":
        r, _ = _resolvent_hat(grid, o2, zh, gh, cfg)
        fwd = 2.0 * r + 0.5 * eps * grid.product_hat(zh, grid.mask * r / o2.Y)
        return np.sqrt(grid.l2_sq_hat(fwd - gh)), gn
    hh = grid.rfft(np.roll(grid.irfft(gh), 3, axis=0) ** 2)
    hh = hh * grid.mask
    Gg, gg = _gamma_hat(grid, o2, zh, gh, cfg)
    Gh, gH = _gamma_hat(grid, o2, zh, hh, cfg)
    asym = max(abs(grid.inner_hat(gg, hh) - grid.inner_hat(gh, gH)),
               abs(grid.inner_hat(Gg, hh) - grid.inner_hat(gh, Gh)))
    return asym, gn * np.sqrt(grid.l2_sq_hat(hh)) * _zmax(grid, zh)


def _zmax(grid: GridSpec, zh) -> float:
    return float(np.max(np.abs(grid.irfft(zh))))


def lemma_sampler(lemma: str, samples: int, eps_list, grid: GridSpec, seed: int = 0,
                  sobolev_s: float = 4.0, cfg: ResolventConfig = ResolventConfig()) -> LemmaReport:
    """Largest observed ``lhs / rhs`` over seeded random band-limited pairs.

    The inequalities carry unspecified constants, so the report is the pass
    signal. ``adjoint``, ``identity`` and ``resolvent`` report relative
    defects of the case-two operators with a zeta scaled to guard factor 1/8.
    Pairs with a vanishing right-hand side are skipped.
    """
    if lemma not in LEMMAS:
        raise ValueError(f"unknown lemma {lemma!r}; expected one of {LEMMAS}")
    from .spectral import random_bandlimited

    root = np.random.SeedSequence(seed)
    children = root.spawn(samples)
    out, cnt = {}, {}
    for eps in eps_list:
        best, k = 0.0, 0
        for child in children:
            rng = np.random.default_rng(child)
            amp = rng.uniform(0.5, 2.0, size=2)
            fh = grid.rfft(amp[0] * random_bandlimited(grid, rng))
            gh = grid.rfft(amp[1] * random_bandlimited(grid, rng))
            lhs, rhs = _lemma_ratio(lemma, grid, float(eps), fh, gh, sobolev_s, cfg)
            if not rhs > 0:
                continue
            best, k = max(best, lhs / rhs), k + 1
        out[float(eps)], cnt[float(eps)] = best, k
    return LemmaReport(lemma, out, cnt)
