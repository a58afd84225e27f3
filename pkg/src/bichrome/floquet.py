"""Floquet solution of the time-periodic master equation.

The density matrix is expanded in harmonics of the pump-probe beat,
rho(t) = sum_n rho_n exp(i n delta t).  Truncating the harmonic ladder
at n_max and eliminating the outer rungs gives the continued-fraction
matrices S_n (n > 0) and T_n (n < 0) with rho_n = S_n rho_{n-1} and
rho_n = T_n rho_{n+1}.  The zeroth harmonic then follows from a single
resolvent solve (Laplace domain) or a nullspace extraction (steady
state).

A brute-force fixed-step time-domain integrator of the same master
equation is provided as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSteadyStateError, SingularResolventError, SolverError
from .liouville import build_liouvillians, trace_of, unvectorize, vectorize
from .operators import SpaceOperators
from .params import CFConfig, SystemParams

# the nullspace is declared degenerate when the second-smallest singular
# value is also compatible with zero at this fraction of the largest one
_NULLSPACE_DEGENERACY_RTOL = 1e-10


def _solve_rung(A: np.ndarray, B: np.ndarray, rung: int) -> np.ndarray:
    """LU-solve A X = B, reporting the ladder rung on failure."""
    try:
        X = np.linalg.solve(A, B)
    except np.linalg.LinAlgError as exc:
        raise SingularResolventError(rung, str(exc)) from None
    if not np.all(np.isfinite(X)):
        raise SingularResolventError(rung, "non-finite solution (near-singular system)")
    return X


def cf_ladders(
    L0: np.ndarray,
    Lp: np.ndarray,
    Lm: np.ndarray,
    z: complex,
    delta_ang: float,
    cfg: CFConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Continued-fraction matrices (S_1, T_-1) at Laplace variable z.

    Downward recursion from S_{n_max+1} = 0:
        S_n = -[(L0 - (z + i n delta) 1) + Lm S_{n+1}]^{-1} Lp
    and the mirror recursion for T up from T_{-n_max-1} = 0.  Each rung
    is one LU solve; nothing is ever inverted explicitly.
    """
    dim = L0.shape[0]
    if not (Lp.any() or Lm.any()):
        z0 = np.zeros((dim, dim), dtype=complex)
        return z0, z0.copy()

    eye = np.eye(dim, dtype=complex)
    S = np.zeros((dim, dim), dtype=complex)
    for n in range(cfg.n_max, 0, -1):
        A = (L0 - (z + 1j * n * delta_ang) * eye) + Lm @ S
        S = -_solve_rung(A, Lp, n)
    T = np.zeros((dim, dim), dtype=complex)
    for n in range(-cfg.n_max, 0):
        A = (L0 - (z + 1j * n * delta_ang) * eye) + Lp @ T
        T = -_solve_rung(A, Lm, n)
    return S, T


def rho0_laplace(
    z: complex,
    initial: np.ndarray,
    ladders: tuple[np.ndarray, np.ndarray],
    L0: np.ndarray,
    Lp: np.ndarray,
    Lm: np.ndarray,
) -> np.ndarray:
    """Laplace-domain zeroth harmonic for a given initial condition.

    Solves (z 1 - L0 - Lm S_1 - Lp T_-1) rho_0(z) = rho(0), the n = 0
    row of the harmonic recurrence after eliminating rho_{+-1}.  With
    no probe this is the plain resolvent (z - L0)^{-1} rho(0), i.e. the
    one-sided Laplace transform of exp(L0 t) rho(0).
    """
    S1, Tm1 = ladders
    dim = L0.shape[0]
    M = z * np.eye(dim, dtype=complex) - L0 - Lm @ S1 - Lp @ Tm1
    try:
        out = np.linalg.solve(M, np.asarray(initial, dtype=complex).reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise SingularResolventError(
            0, f"{exc}; consider a nonzero z_epsilon regularization"
        ) from None
    return out


@dataclass(frozen=True)
class FloquetHarmonics:
    """Steady-state harmonics rho_n of the beat-periodic density matrix.

    ``harmonics`` maps n in {-1, 0, +1} to vectorized matrices;
    ``rho_ss`` is the first-order time-averaged density matrix
    rho_0 - tr(rho_1) rho_-1 - tr(rho_-1) rho_1 (vectorized).
    """

    harmonics: dict
    rho_ss: np.ndarray

    @property
    def rho0(self) -> np.ndarray:
        return self.harmonics[0]

    def rho_ss_matrix(self) -> np.ndarray:
        return unvectorize(self.rho_ss)


def _nullspace_vector(M: np.ndarray) -> np.ndarray:
    """Right singular vector of the smallest singular value of M."""
    _, s, vh = np.linalg.svd(M)
    if s[-2] < _NULLSPACE_DEGENERACY_RTOL * s[0]:
        raise DegenerateSteadyStateError(
            f"two smallest singular values both compatible with zero "
            f"({s[-1]:.3e}, {s[-2]:.3e}; largest {s[0]:.3e})"
        )
    return vh[-1].conj()


def steady_state(
    params: SystemParams,
    superops: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None,
) -> FloquetHarmonics:
    """Long-time harmonics of the bichromatically driven system.

    rho_0 is the (trace-normalized, Hermitized) nullspace of
    L0 + Lm S_1 + Lp T_-1 with the ladders evaluated at z = 0; the
    sidebands follow as rho_1 = S_1 rho_0 and rho_-1 = T_-1 rho_0.
    The ladder resolvents are regularized with z_epsilon so a sweep may
    pass through delta = 0 (probe degenerate with the pump).
    """
    L0, Lp, Lm = superops if superops is not None else build_liouvillians(params)
    S1, Tm1 = cf_ladders(L0, Lp, Lm, params.z_epsilon, params.delta_ang, params.cf)
    M = L0 + Lm @ S1 + Lp @ Tm1
    v0 = _nullspace_vector(M)

    rho0 = unvectorize(v0)
    rho0 = 0.5 * (rho0 + rho0.conj().T)
    tr = rho0.trace().real
    if abs(tr) < 1e-14:
        raise DegenerateSteadyStateError("nullspace vector has (numerically) zero trace")
    rho0 /= tr
    v0 = vectorize(rho0)

    v_p1 = S1 @ v0
    v_m1 = Tm1 @ v0
    rho_ss = v0 - trace_of(v_p1) * v_m1 - trace_of(v_m1) * v_p1
    return FloquetHarmonics(harmonics={-1: v_m1, 0: v0, 1: v_p1}, rho_ss=rho_ss)


def time_domain_integrate(
    params: SystemParams,
    t_end: float,
    dt: float,
    initial: np.ndarray | None = None,
    store_every: int = 1,
):
    """Fixed-step RK4 integration of the full time-dependent master equation.

    d rho / dt = (L0 + Lp e^{+i delta t} + Lm e^{-i delta t}) rho,
    starting from ``initial`` (default: the ground state |g,0><g,0|).
    Returns (times, trajectory) with trajectory[k] the vectorized rho at
    times[k].  Raises if the trace drifts by more than 1e-6 (step-size
    instability).
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("t_end and dt must be positive")
    L0, Lp, Lm = build_liouvillians(params)
    ops = SpaceOperators(params.hilbert)
    if initial is None:
        initial = ops.ground_state()
    v = vectorize(initial) if initial.ndim == 2 else np.asarray(initial, dtype=complex).copy()
    delta = params.delta_ang
    has_probe = bool(Lp.any() or Lm.any())

    def rhs(t, y):
        out = L0 @ y
        if has_probe:
            out += np.exp(1j * delta * t) * (Lp @ y) + np.exp(-1j * delta * t) * (Lm @ y)
        return out

    nsteps = int(round(t_end / dt))
    times = [0.0]
    traj = [v.copy()]
    t = 0.0
    tr0 = trace_of(v).real
    for k in range(nsteps):
        k1 = rhs(t, v)
        k2 = rhs(t + 0.5 * dt, v + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, v + 0.5 * dt * k2)
        k4 = rhs(t + dt, v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = (k + 1) * dt
        if (k + 1) % store_every == 0 or k == nsteps - 1:
            times.append(t)
            traj.append(v.copy())
    if abs(trace_of(v).real - tr0) > 1e-6:
        raise SolverError(
            f"trace drifted by {abs(trace_of(v).real - tr0):.2e}; decrease dt"
        )
    return np.array(times), np.array(traj)


def recommended_dt(params: SystemParams) -> float:
    """Step resolving the fastest angular scale, dt = 0.05 / max rate."""
    scales = [
        abs(params.delta_c_ang), abs(params.delta_d_ang), params.g_ang,
        params.kappa_ang, params.gamma_ang, params.gamma_d_ang,
        params.gamma_r_ang, params.j1_ang, params.j2_ang, abs(params.delta_ang),
    ]
    fastest = max(scales)
    if fastest == 0:
        raise ValueError("all rates are zero")
    return 0.05 / fastest


def time_averaged_observable(
    params: SystemParams,
    op: np.ndarray,
    transient: float | None = None,
    dt: float | None = None,
) -> float:
    """Beat-period average of tr(op rho(t)) after transients have decayed.

    The average runs over one full beat period 2 pi / delta (or a single
    relaxation time if delta = 0), sampled on the integrator grid.
    """
    if dt is None:
        dt = recommended_dt(params)
    nonzero = [r for r in (params.gamma_ang, params.kappa_ang,
                           params.gamma_d_ang, params.gamma_r_ang) if r > 0]
    slowest = min(nonzero)
    if transient is None:
        transient = 20.0 / slowest
    period = 2.0 * np.pi / abs(params.delta_ang) if params.delta_ang != 0 else 2.0 / slowest
    # integer number of steps per period so the average is unbiased
    nper = max(int(round(period / dt)), 10)
    dt = period / nper
    t_end = transient + period
    nskip = int(round(transient / dt))
    times, traj = time_domain_integrate(params, t_end, dt)
    vals = np.array([np.trace(op @ unvectorize(v)).real for v in traj[nskip:]])
    # trapezoid over exactly one period
    return float(np.trapezoid(vals, times[nskip:]) / (times[-1] - times[nskip]))
