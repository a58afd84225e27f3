"""Closed-form reference expressions and fitting helpers.

These formulas are used as independent validation oracles for the
numerical solver and for experiment design (pump placement, asymmetry
fits).  All of them are scale-invariant ratios of frequencies, so
inputs may be supplied in linear GHz as long as they are consistent;
``jc_eigenvalues`` returns angular units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants
from scipy.optimize import least_squares

from .errors import NoSplittingError
from .params import TWO_PI, SystemParams


@dataclass(frozen=True)
class AnalyticParams:
    """The scalar subset of SystemParams the closed forms need (linear GHz)."""

    g: float = 0.0
    kappa: float = 0.0
    gamma: float = 0.0
    gamma_d: float = 0.0
    j1: float = 0.0
    j2: float = 0.0
    nu_c: float = 0.0
    delta_qd_cavity: float = 0.0  # omega_d - omega_c, linear GHz

    def __post_init__(self):
        for name in ("kappa", "gamma", "gamma_d"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @classmethod
    def from_system(cls, p: SystemParams) -> "AnalyticParams":
        return cls(
            g=p.g, kappa=p.kappa, gamma=p.gamma, gamma_d=p.gamma_d,
            j1=p.j1, j2=p.j2, nu_c=p.nu_c, delta_qd_cavity=p.nu_d - p.nu_c,
        )


def jc_eigenvalues(n: int, params: AnalyticParams) -> tuple[float, float]:
    """Dressed-state energies of excitation manifold n (angular units).

    E_n(+-) = n omega_c + (Delta +- sqrt(4 g^2 n + Delta^2)) / 2
    with Delta = omega_d - omega_c.
    """
    if n < 1:
        raise ValueError(f"manifold index must be >= 1, got {n}")
    wc = TWO_PI * params.nu_c
    d = TWO_PI * params.delta_qd_cavity
    g = TWO_PI * params.g
    root = np.sqrt(4.0 * g * g * n + d * d)
    return (n * wc + 0.5 * (d + root), n * wc + 0.5 * (d - root))


def transmission_analytic(omega: float, params: AnalyticParams) -> float:
    """Weak-drive cavity transmission at laser detuning omega from omega_c.

    T(omega) proportional to
    J^2 (gamma^2 + (D - w)^2) /
      [g^4 + 2 g^2 (J^2/2 + gamma kappa + (D - w) w)
       + (gamma^2 + (D - w)^2)(J^2 + kappa^2 + w^2)]
    with D = omega_d - omega_c and J the drive Rabi frequency (j1).
    Unnormalized; scale-invariant, so linear-GHz inputs are fine.
    """
    w = omega
    d = params.delta_qd_cavity
    g, j, ga, ka = params.g, params.j1, params.gamma, params.kappa
    num = j * j * (ga * ga + (d - w) ** 2)
    den = (
        g ** 4
        + 2.0 * g * g * (0.5 * j * j + ga * ka + (d - w) * w)
        + (ga * ga + (d - w) ** 2) * (j * j + ka * ka + w * w)
    )
    if den == 0:
        raise ZeroDivisionError("transmission denominator vanished")
    return num / den


def polariton_peaks(params: AnalyticParams) -> tuple[float, float]:
    """Transmission peak offsets (+, -) from omega_c for zero QD-cavity detuning.

    omega_pm = +- sqrt( sqrt(g^2 (g^2 + J^2) + 2 g^2 gamma (gamma + kappa))
                        - gamma^2 )
    Raises NoSplittingError when the radicand is negative (below strong
    coupling).
    """
    g, j, ga, ka = params.g, params.j1, params.gamma, params.kappa
    inner = np.sqrt(g * g * (g * g + j * j) + 2.0 * g * g * ga * (ga + ka))
    radicand = inner - ga * ga
    if radicand < 0:
        raise NoSplittingError(
            f"no polariton splitting: sqrt argument {radicand:.3e} < 0"
        )
    w = float(np.sqrt(radicand))
    return (w, -w)


def rho_ee_second_order(delta, params: AnalyticParams):
    """QD excited-state population under pump + weak probe, to O(J2^2).

    Bare-QD formula (g = 0 context): the unprobed saturation value
    J1^2 / (2 J1^2 + gamma (gamma + gamma_d)) plus the second-order
    probe correction.  ``delta`` may be an array; the expression is a
    dimensionless ratio, so linear-GHz inputs are fine.
    """
    d2 = np.square(np.asarray(delta, dtype=float))
    j1sq = params.j1 ** 2
    j2sq = params.j2 ** 2
    ga, gd = params.gamma, params.gamma_d
    G = ga + gd
    base = j1sq / (2.0 * j1sq + ga * G)
    num = (
        8.0 * j1sq * j1sq * G * (-2.0 * G * G - 3.0 * d2)
        + G ** 3 * (4.0 * ga * ga + d2) * (G * G + d2)
        + 4.0 * j1sq * d2 * (-3.0 * ga * G * G + gd * d2)
    )
    den = (
        (2.0 * j1sq + ga * G) ** 2
        * (G * G + d2)
        * (4.0 * (2.0 * j1sq + ga * G) ** 2
           + (-8.0 * j1sq + 5.0 * ga * ga + 2.0 * ga * gd + gd * gd) * d2
           + d2 * d2)
    )
    out = base + ga * j2sq * num / den
    return float(out) if np.isscalar(delta) else out


def phonon_occupation(detuning: float, temperature: float) -> float:
    """Bose-Einstein phonon occupancy at |detuning| (linear GHz) and T (K)."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if detuning == 0:
        raise ZeroDivisionError("phonon occupation diverges at zero detuning")
    x = constants.h * abs(detuning) * 1e9 / (constants.k * temperature)
    return 1.0 / np.expm1(x)


def fit_asymmetry(points) -> tuple[float, float, float]:
    """Least-squares fit of diff = c * g^2 / (alpha + Delta).

    ``points`` is a sequence of (g, Delta, diff) triples; returns
    (c, alpha, rms residual).  Damped least squares with the analytic
    Jacobian; deterministic initialization from the data.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 3:
        raise ValueError("need at least 3 (g, Delta, diff) points")
    g, dlt, diff = pts[:, 0], pts[:, 1], pts[:, 2]
    if np.all(diff == 0):
        return 0.0, float(np.median(dlt)), 0.0
    gsq = g * g
    if np.ptp(gsq) == 0 and np.ptp(dlt) == 0:
        raise ValueError("degenerate design: all points share g and Delta")

    def resid(p):
        c, alpha = p
        return c * gsq / (alpha + dlt) - diff

    def jac(p):
        c, alpha = p
        den = alpha + dlt
        return np.column_stack([gsq / den, -c * gsq / (den * den)])

    alpha0 = float(np.median(dlt))
    c0 = float(np.max(np.abs(diff)) * (alpha0 + dlt.min()) / gsq[gsq > 0].min())
    sol = least_squares(resid, x0=[c0, alpha0], jac=jac, method="lm", xtol=1e-14)
    r = resid(sol.x)
    return float(sol.x[0]), float(sol.x[1]), float(np.sqrt(np.mean(r * r)))


def fit_peak_ratio(points) -> tuple[float, float, float]:
    """Least-squares fit of ratio = 2 alpha x / (1 + beta - alpha x).

    ``points`` is a sequence of (x, ratio) pairs with x = g^2 / Delta;
    returns (alpha, beta, rms residual).  Raises if the fitted model has
    a pole inside the data range.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("need at least 2 (x, ratio) points")
    x, ratio = pts[:, 0], pts[:, 1]

    def model(p, xv):
        a, b = p
        return 2.0 * a * xv / (1.0 + b - a * xv)

    def resid(p):
        return model(p, x) - ratio

    def jac(p):
        a, b = p
        den = 1.0 + b - a * x
        return np.column_stack([
            2.0 * x * (1.0 + b) / (den * den),
            -2.0 * a * x / (den * den),
        ])

    xm = x[np.abs(x) > 0]
    a0 = float(0.5 * np.max(np.abs(ratio)) / np.max(np.abs(x))) if xm.size else 0.1
    sol = least_squares(resid, x0=[max(a0, 1e-6), 0.1], jac=jac, method="lm", xtol=1e-14)
    a, b = sol.x
    den = 1.0 + b - a * x
    if np.any(den <= 0) or np.min(np.abs(den)) < 1e-9 * (1.0 + abs(b)):
        raise ValueError("fitted model has a pole inside the data range")
    r = resid(sol.x)
    return float(a), float(b), float(np.sqrt(np.mean(r * r)))
