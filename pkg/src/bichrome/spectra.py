"""Cavity observables: emission spectra, intensity, probe sweeps, extrema.

Frequencies on spectral grids are angular (rad/ns) and measured from the
pump laser, so the bare cavity line of a detuned, undriven cavity sits
at omega = Delta_c.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .floquet import cf_ladders, rho0_laplace, steady_state
from .liouville import build_liouvillians, unvectorize, vectorize
from .operators import SpaceOperators
from .params import SystemParams


class Observable(Enum):
    INTENSITY = "intensity"
    SPECTRUM_PEAK_NEAR_CAVITY = "spectrum-peak-near-cavity"


@dataclass(frozen=True)
class Extremum:
    location: float
    value: float
    kind: str  # "peak" or "dip"


@dataclass(frozen=True)
class Spectrum:
    """Emission spectrum on an angular frequency grid (pump-relative)."""

    omega_grid: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SweepResult:
    """Observable vs probe detuning, with the probe-free background.

    ``deviation`` (y - background) is the quantity the pump-probe
    experiment actually records; extrema are computed on it.
    """

    x_grid: np.ndarray
    y_values: np.ndarray
    background: float
    observable_tag: str
    extrema: list = field(default_factory=list)

    @property
    def deviation(self) -> np.ndarray:
        return self.y_values - self.background


def default_spectrum_grid(params: SystemParams, points: int = 601) -> np.ndarray:
    """Angular grid spanning Delta_c +- 3 kappa (the cavity window)."""
    dc = params.delta_c_ang
    w = 3.0 * params.kappa_ang
    return np.linspace(dc - w, dc + w, points)


def emission_spectrum(
    params: SystemParams,
    omega_grid: np.ndarray | None = None,
) -> Spectrum:
    """Cavity resonance fluorescence spectrum via quantum regression.

    S(omega) = Re tr{a^dag M_0(z)} at z = z_epsilon + i omega, where M_0
    is the zeroth Floquet harmonic of the regression problem with
    initial condition a rho_ss (rho_ss = first-order time-averaged
    steady state).  The z_epsilon width turns the coherent-scattering
    delta peak at the pump frequency into a narrow Lorentzian.
    """
    if omega_grid is None:
        omega_grid = default_spectrum_grid(params)
    omega_grid = np.asarray(omega_grid, dtype=float)
    if omega_grid.size and np.any(np.diff(omega_grid) <= 0):
        raise ValueError("omega_grid must be strictly increasing")

    ops = SpaceOperators(params.hilbert)
    L0, Lp, Lm = build_liouvillians(params, ops)
    ss = steady_state(params, (L0, Lp, Lm))
    initial = vectorize(ops.a @ ss.rho_ss_matrix())

    eps = params.z_epsilon
    ad = ops.ad
    has_probe = bool(Lp.any() or Lm.any())
    vals = np.empty_like(omega_grid)
    for i, w in enumerate(omega_grid):
        z = eps + 1j * w
        ladders = cf_ladders(L0, Lp, Lm, z, params.delta_ang, params.cf) if has_probe \
            else (np.zeros_like(L0), np.zeros_like(L0))
        m0 = unvectorize(rho0_laplace(z, initial, ladders, L0, Lp, Lm))
        vals[i] = np.trace(ad @ m0).real
    meta = {"z_epsilon": eps, "params": params.as_flat_dict()}
    return Spectrum(omega_grid=omega_grid, values=vals, metadata=meta)


def cavity_intensity(params: SystemParams) -> float:
    """Time-averaged photon number <a^dag a> in the steady state."""
    ops = SpaceOperators(params.hilbert)
    ss = steady_state(params)
    return float(np.trace(ops.number @ ss.rho_ss_matrix()).real)


def qd_population(params: SystemParams) -> float:
    """Time-averaged excited-state population of the QD."""
    ops = SpaceOperators(params.hilbert)
    ss = steady_state(params)
    return float(np.trace(ops.qd_excited @ ss.rho_ss_matrix()).real)


def spectrum_peak_near_cavity(params: SystemParams, points: int = 601) -> float:
    """Height of the emission-spectrum maximum nearest Delta_c.

    Local maxima are searched in the window Delta_c +- 3 kappa and the
    one closest to the native cavity frequency is reported (endpoint
    maxima count when the spectrum is monotone across the window).
    """
    spec = emission_spectrum(params, default_spectrum_grid(params, points))
    ext = find_extrema(spec.omega_grid, spec.values, reference=params.delta_c_ang)
    peaks = [e for e in ext if e.kind == "peak"]
    if not peaks:
        i = int(np.argmax(spec.values))
        return float(spec.values[i])
    dc = params.delta_c_ang
    best = min(peaks, key=lambda e: abs(e.location - dc))
    return float(best.value)


def _sweep_point(args):
    params, delta, observable, points = args
    p = params.with_(delta=delta)
    if observable is Observable.INTENSITY:
        return cavity_intensity(p)
    return spectrum_peak_near_cavity(p, points=points)


def probe_sweep(
    params: SystemParams,
    delta_grid: np.ndarray,
    observable: Observable = Observable.INTENSITY,
    spectrum_points: int = 601,
    jobs: int = 1,
) -> SweepResult:
    """Evaluate an observable over a grid of probe detunings (linear GHz).

    The probe-free (J2 = 0) value is computed once and reported as the
    background; extrema are annotated on the deviation curve.
    """
    delta_grid = np.asarray(delta_grid, dtype=float)
    if delta_grid.size == 0:
        raise ValueError("delta_grid must be nonempty")
    bg_params = params.with_(j2=0.0, delta=0.0)
    if observable is Observable.INTENSITY:
        background = cavity_intensity(bg_params)
    else:
        background = spectrum_peak_near_cavity(bg_params, points=spectrum_points)

    work = [(params, float(d), observable, spectrum_points) for d in delta_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            y = list(pool.map(_sweep_point, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        y = [_sweep_point(w) for w in work]
    y = np.array(y)
    ext = find_extrema(delta_grid, y - background) if delta_grid.size >= 3 else []
    return SweepResult(
        x_grid=delta_grid,
        y_values=y,
        background=background,
        observable_tag=observable.value,
        extrema=ext,
    )


def find_extrema(
    x: np.ndarray, y: np.ndarray, reference: float | None = None
) -> list[Extremum]:
    """Interior local maxima/minima with 3-point parabolic refinement.

    Ties between equal neighbours are broken toward ``reference`` when
    given.  Monotone data yields an empty list.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise ValueError("need at least 3 grid points")
    out: list[Extremum] = []
    for i in range(1, x.size - 1):
        if y[i] > y[i - 1] and y[i] > y[i + 1]:
            kind = "peak"
        elif y[i] < y[i - 1] and y[i] < y[i + 1]:
            kind = "dip"
        elif y[i] == y[i + 1] and i + 2 < x.size and (
            (y[i] > y[i - 1] and y[i + 1] > y[i + 2])
            or (y[i] < y[i - 1] and y[i + 1] < y[i + 2])
        ):
            # two-sample plateau: tie broken toward the reference
            kind = "peak" if y[i] > y[i - 1] else "dip"
            pick = i
            if reference is not None and abs(x[i + 1] - reference) < abs(x[i] - reference):
                pick = i + 1
            out.append(Extremum(float(x[pick]), float(y[pick]), kind))
            continue
        else:
            continue
        denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
        if denom != 0.0:
            shift = 0.5 * (y[i - 1] - y[i + 1]) / denom
            shift = float(np.clip(shift, -0.5, 0.5))
        else:
            shift = 0.0
        h = 0.5 * (x[i + 1] - x[i - 1])
        loc = x[i] + shift * h
        val = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * shift
        out.append(Extremum(float(loc), float(val), kind))
    return out
