"""Classical RK4 time stepping, initial data and the long-time experiment."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .energy import EnergyReport, energy
from .spectral import GridSpec, SymbolSpec, random_bandlimited
from .systems import (
    ModelParams, State, Tendency, consistency_residual, curl_residual, resolve_system,
    rhs_hat, state_hat,
)
from .unknowns import ResolventConfig, case_ops, from_ptheta, guard_factor

FAMILIES = ("gaussian", "trig", "random", "zero")


class BlowUpError(FloatingPointError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, time: float):
        super().__init__(f"non-finite state at t = {time!r}")
        self.time = time


@dataclass(frozen=True)
class InitialData:
    """Named initial-data family with amplitude and seed."""

    family: str = "gaussian"
    amplitude: float = 0.1
    seed: int = 0
    kappa: float = 3.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.amplitude < 0:
            raise ValueError("amplitude must be nonnegative")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one run.

    ``t_end = None`` means ``T0 / eps``. ``dt = None`` selects
    ``cfl / max Lambda`` over the grid lattice.
    """

    system: str
    params: ModelParams
    grid: GridSpec
    dt: float | None = None
    cfl: float = 1.0
    t_end: float | None = None
    T0: float = 1.0
    diag_every: int = 10
    initial: InitialData = field(default_factory=InitialData)
    sobolev_s: float = 4.0
    resolvent: ResolventConfig = field(default_factory=ResolventConfig)
    linear: bool = False
    with_tilde: bool = True
    consistency_n: float = 2.0

    def __post_init__(self):
        resolve_system(self.system, self.params)
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end is not None and self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.T0 <= 0 or self.cfl <= 0 or self.diag_every < 1:
            raise ValueError("T0, cfl and diag_every must be positive")

    @property
    def end_time(self) -> float:
        return self.t_end if self.t_end is not None else self.T0 / self.params.eps


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Scalar diagnostics at one time; ``nan`` marks quantities not defined for the system."""

    time: float
    energy: EnergyReport
    curl_res: float
    consistency_res: float
    guard_factor: float


@dataclass
class RunResult:
    records: list
    state: State
    steps: int
    dt: float
    error: str | None = None
    error_kind: str | None = None


# --- stepping --------------------------------------------------------------

def rk4(u, dt: float, f):
    """One classical Runge-Kutta step of ``u' = f(u)`` on arrays."""
    k1 = f(u)
    k2 = f(u + (0.5 * dt) * k1)
    k3 = f(u + (0.5 * dt) * k2)
    k4 = f(u + dt * k3)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step(s: State, dt: float, rhs_eval) -> State:
    """Advance ``s`` by ``dt`` with RK4; ``rhs_eval`` maps a State to a Tendency."""
    def f(u):
        t = rhs_eval(State(u[0], u[1], u[2], s.time))
        return np.stack([t.dv, t.dw, t.dzeta])

    u = rk4(np.stack([s.v, s.w, s.zeta]), dt, f)
    if not np.all(np.isfinite(u)):
        raise BlowUpError(s.time + dt)
    return State(u[0], u[1], u[2], s.time + dt)


def linear_frequency(system: str, p: ModelParams, grid: GridSpec) -> np.ndarray:
    """Linear frequency of every lattice mode for the chosen system."""
    name = resolve_system(system, p)
    if name == "Case1":
        sym = SymbolSpec("Lambda1", eps=p.eps)
    elif name == "Case2":
        sym = SymbolSpec("Lambda2", eps=p.eps)
    else:
        sym = SymbolSpec("Lambda", eps=p.eps, coeffs=p.coeffs)
    if name == "WTB2":
        # rescaled system: undo the eps factor carried by xi2 in the general symbol
        return np.broadcast_to(sym.at(grid.kx, grid.ky / np.sqrt(p.eps)), grid.half_shape)
    return sym.evaluate(grid)


def auto_dt(system: str, p: ModelParams, grid: GridSpec, cfl: float = 1.0) -> float:
    return cfl / float(np.max(linear_frequency(system, p, grid)))


# --- initial data ----------------------------------------------------------

def _profile(init: InitialData, grid: GridSpec, rng) -> np.ndarray:
    X = 2 * np.pi * grid.x / grid.lx
    Y = 2 * np.pi * grid.y / grid.ly
    if init.family == "gaussian":
        z = np.exp(init.kappa * (np.cos(X - np.pi) - 1) + init.kappa * (np.cos(Y - np.pi) - 1))
    elif init.family == "trig":
        z = np.cos(X) + 0.5 * np.cos(X + Y) + 0.25 * np.sin(2 * Y)
    elif init.family == "random":
        z = random_bandlimited(grid, rng)
    else:
        z = np.zeros(grid.shape)
    zh = grid.rfft(z) * grid.mask
    zh[0, 0] = 0.0
    return grid.irfft(zh)


def make_initial(system: str, p: ModelParams, grid: GridSpec, init: InitialData) -> State:
    """Curl-free initial state with an eps-independent profile.

    For the two cases the velocity comes from ``p = Lambda zeta`` (random
    family: an independent random ``p``) through the inverse of the
    ``(p, theta)`` map. For the general systems a potential flow with the same
    construction and the plain Laplacian is used.
    """
    name = resolve_system(system, p)
    rng = np.random.default_rng(init.seed)
    z0 = _profile(init, grid, rng)
    if init.family == "random":
        p0 = random_bandlimited(grid, rng)
        p0 = grid.irfft(grid.rfft(p0) * grid.mask)
    else:
        p0 = None
    amp = init.amplitude
    if init.family == "zero" or amp == 0:
        return State.zeros(grid)
    if name in ("Case1", "Case2"):
        ops = case_ops(name, grid, p.eps)
        th = grid.irfft(ops.Lam * grid.rfft(z0))
        pp = th if p0 is None else p0
        s = from_ptheta(name, amp * pp, amp * th, p.eps, grid)
        return s
    sy = np.sqrt(p.eps) if name == "WTB1" else 1.0
    kx, ky = grid.kx, sy * grid.ky
    k2 = kx ** 2 + ky ** 2
    inv = np.zeros(grid.half_shape)
    nz = np.broadcast_to(k2, grid.half_shape) > 0
    inv[nz] = 1.0 / np.broadcast_to(k2, grid.half_shape)[nz]
    zh = grid.rfft(z0)
    ph = np.sqrt(k2) * zh if p0 is None else grid.rfft(p0)
    phi = -inv * ph
    v = grid.irfft(1j * kx * phi)
    w = grid.irfft(1j * ky * phi)
    return State(amp * v, amp * w, amp * z0)


# --- integration -----------------------------------------------------------

def diagnostics(cfg: RunConfig, s: State) -> DiagnosticsRecord:
    name = resolve_system(cfg.system, cfg.params)
    eps = cfg.params.eps
    case = name if name in ("Case1", "Case2") else "General"
    rep = energy(case, s, cfg.sobolev_s, eps, cfg.grid,
                 with_tilde=cfg.with_tilde, cfg=cfg.resolvent)
    curl = curl_residual(s, eps, cfg.grid, scaled=(name == "WTB1"))
    cons = (consistency_residual(s, cfg.params, cfg.grid, cfg.consistency_n).total
            if name == "WTB1" else math.nan)
    guard = guard_factor(s.zeta, eps) if name == "Case2" else math.nan
    return DiagnosticsRecord(s.time, rep, curl, cons, guard)


def integrate(cfg: RunConfig, state: State | None = None) -> RunResult:
    """Integrate ``cfg`` and collect diagnostics every ``diag_every`` steps.

    Errors during stepping or diagnostics stop the run; the partial series is
    returned with ``error`` set.
    """
    from .unknowns import ConvergenceError, GuardViolation

    grid, p = cfg.grid, cfg.params
    name = resolve_system(cfg.system, p)
    s = state if state is not None else make_initial(name, p, grid, cfg.initial)
    t_end = cfg.end_time
    dt0 = cfg.dt if cfg.dt is not None else auto_dt(name, p, grid, cfg.cfl)
    nsteps = int(math.ceil(t_end / dt0 - 1e-9)) if t_end > 0 else 0
    dt = t_end / nsteps if nsteps else dt0
    records = []
    u = state_hat(s, grid)
    t0 = s.time

    def f(x):
        return rhs_hat(name, x, p, grid, cfg.linear)

    def snapshot(x, n):
        return State(grid.irfft(x[0]), grid.irfft(x[1]), grid.irfft(x[2]), t0 + n * dt)

    try:
        records.append(diagnostics(cfg, s))
        for n in range(1, nsteps + 1):
            u = rk4(u, dt, f)
            if not np.all(np.isfinite(u)):
                raise BlowUpError(t0 + n * dt)
            if n % cfg.diag_every == 0 or n == nsteps:
                records.append(diagnostics(cfg, snapshot(u, n)))
        return RunResult(records, snapshot(u, nsteps), nsteps, dt)
    except GuardViolation as exc:
        return RunResult(records, snapshot(u, 0), len(records), dt, str(exc), "guard")
    except (BlowUpError, ConvergenceError, FloatingPointError) as exc:
        return RunResult(records, s, len(records), dt, str(exc), "numerical")


@dataclass(frozen=True)
class SweepRow:
    eps: float
    t_end: float
    steps: int
    dt: float
    e0: float
    max_ratio: float
    error: str | None = None


def _with_eps(p: ModelParams, eps: float) -> ModelParams:
    return replace(p, eps=eps)


def sweep_entry(cfg: RunConfig, eps: float):
    """One sweep run at ``eps`` on ``[0, T0/eps]``; returns ``(SweepRow, RunResult)``."""
    c = replace(cfg, params=_with_eps(cfg.params, eps), t_end=None)
    res = integrate(c)
    e = [r.energy.e_total for r in res.records]
    e0 = e[0] if e else math.nan
    ratio = 1.0 if e0 == 0 else max(e) / e0
    return SweepRow(float(eps), c.end_time, res.steps, res.dt, e0, ratio, res.error), res


def long_time_sweep(cfg: RunConfig, eps_list) -> list:
    """Run ``cfg`` on ``[0, T0/eps]`` for each eps and report ``max E_s(t) / E_s(0)``.

    The initial profile is the same for every eps; a zero initial energy gives
    ratio one.
    """
    return [sweep_entry(cfg, eps)[0] for eps in eps_list]


__all__ = [
    "BlowUpError", "DiagnosticsRecord", "InitialData", "RunConfig", "RunResult", "SweepRow",
    "Tendency", "auto_dt", "diagnostics", "integrate", "linear_frequency", "long_time_sweep",
    "make_initial", "rk4", "step", "sweep_entry",
]
