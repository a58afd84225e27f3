"""Parameter containers for one pump-probe simulation.

All user-facing frequencies and rates are *linear* frequencies in GHz
(the "X/2pi = Y GHz" convention).  Conversion to angular units
(rad/ns) happens once, inside the operator/superoperator builders;
nothing downstream should multiply by 2*pi again.

Only frequency differences enter the rotating-frame dynamics, so
``nu_c``, ``nu_d`` and ``nu_l`` may be given as offsets from any common
reference (e.g. ``nu_c = 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum

TWO_PI = 2.0 * math.pi


class DriveTarget(Enum):
    """Which mode the bichromatic laser field couples to."""

    CAVITY = "cavity"
    QD = "qd"


@dataclass(frozen=True)
class HilbertConfig:
    """Truncated Hilbert space: two-level emitter times a Fock ladder."""

    fock_levels: int = 3
    qd_levels: int = 2

    def __post_init__(self):
        if self.fock_levels < 2:
            raise ValueError(f"fock_levels must be >= 2, got {self.fock_levels}")
        if self.qd_levels != 2:
            raise ValueError("only a two-level emitter is supported")

    @property
    def dim(self) -> int:
        return self.qd_levels * self.fock_levels


@dataclass(frozen=True)
class CFConfig:
    """Settings for the continued-fraction ladder solver.

    ``z_epsilon`` is a small real part added to spectral Laplace
    variables so that resolvents stay regular when they collide with
    the Liouvillian zero mode (coherent scattering at the pump
    frequency becomes a width-epsilon Lorentzian).  ``None`` means
    1e-6 * kappa in angular units, resolved per parameter set.
    """

    n_max: int = 3
    conv_tol: float = 1e-10
    z_epsilon: float | None = None

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.conv_tol <= 0:
            raise ValueError("conv_tol must be positive")
        if self.z_epsilon is not None and self.z_epsilon < 0:
            raise ValueError("z_epsilon must be nonnegative")


@dataclass(frozen=True)
class SystemParams:
    """Physical rates and frequencies of one simulation (linear GHz).

    nu_c, nu_d, nu_l : cavity, QD and pump laser frequencies.
    g                : QD-cavity coupling (half the vacuum Rabi splitting).
    kappa, gamma     : cavity field decay and QD spontaneous emission rates.
    gamma_d          : pure dephasing rate.
    gamma_r          : phonon-mediated off-resonant coupling rate
                       (collapse operator a^dag sigma; QD blue-detuned,
                       zero-temperature limit).
    j1, j2           : pump and probe Rabi frequencies.
    delta            : pump-probe detuning.
    drive_target     : whether the lasers drive the cavity or the QD.
    """

    nu_c: float = 0.0
    nu_d: float = 0.0
    nu_l: float = 0.0
    g: float = 30.0
    kappa: float = 3.0
    gamma: float = 1.0
    gamma_d: float = 1.0
    gamma_r: float = 0.0
    j1: float = 0.0
    j2: float = 0.01
    delta: float = 0.0
    drive_target: DriveTarget = DriveTarget.CAVITY
    hilbert: HilbertConfig = field(default_factory=HilbertConfig)
    cf: CFConfig = field(default_factory=CFConfig)

    def __post_init__(self):
        for name in ("kappa", "gamma", "gamma_d", "gamma_r"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.j2 < 0:
            raise ValueError("j2 must be nonnegative")
        if self.kappa == 0 and self.gamma == 0:
            raise ValueError("need kappa > 0 or gamma > 0 (some dissipation)")

    # -- angular-unit views (rad/ns), used by the builders ---------------
    @property
    def delta_c_ang(self) -> float:
        return TWO_PI * (self.nu_c - self.nu_l)

    @property
    def delta_d_ang(self) -> float:
        return TWO_PI * (self.nu_d - self.nu_l)

    @property
    def delta_ang(self) -> float:
        return TWO_PI * self.delta

    @property
    def g_ang(self) -> float:
        return TWO_PI * self.g

    @property
    def kappa_ang(self) -> float:
        return TWO_PI * self.kappa

    @property
    def gamma_ang(self) -> float:
        return TWO_PI * self.gamma

    @property
    def gamma_d_ang(self) -> float:
        return TWO_PI * self.gamma_d

    @property
    def gamma_r_ang(self) -> float:
        return TWO_PI * self.gamma_r

    @property
    def j1_ang(self) -> float:
        return TWO_PI * self.j1

    @property
    def j2_ang(self) -> float:
        return TWO_PI * self.j2

    @property
    def z_epsilon(self) -> float:
        """Resolved resolvent regularization (angular units)."""
        if self.cf.z_epsilon is not None:
            return self.cf.z_epsilon
        return 1e-6 * self.kappa_ang

    def with_(self, **changes) -> "SystemParams":
        """Functional update; nested hilbert/cf fields via their names."""
        hchanges = {k: changes.pop(k) for k in ("fock_levels",) if k in changes}
        cchanges = {k: changes.pop(k) for k in ("n_max", "conv_tol", "z_epsilon") if k in changes}
        out = replace(self, **changes)
        if hchanges:
            out = replace(out, hilbert=replace(out.hilbert, **hchanges))
        if cchanges:
            out = replace(out, cf=replace(out.cf, **cchanges))
        return out

    def as_flat_dict(self) -> dict:
        """Flat name -> value map of every resolved setting (for provenance)."""
        d = {}
        for f in fields(self):
            if f.name in ("hilbert", "cf"):
                continue
            v = getattr(self, f.name)
            d[f.name] = v.value if isinstance(v, DriveTarget) else v
        d["fock_levels"] = self.hilbert.fock_levels
        d["n_max"] = self.cf.n_max
        d["conv_tol"] = self.cf.conv_tol
        d["z_epsilon"] = self.cf.z_epsilon
        return d


SCALAR_PARAM_KEYS = (
    "nu_c", "nu_d", "nu_l", "g", "kappa", "gamma", "gamma_d", "gamma_r",
    "j1", "j2", "delta",
)
