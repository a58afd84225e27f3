"""Elementary operators on the truncated QD (x) Fock space.

Tensor ordering is fixed project-wide as **QD (x) field**: the composite
basis state |q, n> has linear index q * fock_levels + n.  Every
full-space operator is built through :class:`SpaceOperators` so that the
ordering is decided in exactly one place.
"""

from __future__ import annotations

import numpy as np

from .params import DriveTarget, HilbertConfig, SystemParams


def annihilation(fock_levels: int) -> np.ndarray:
    """Bosonic annihilation operator, <n-1|a|n> = sqrt(n)."""
    if fock_levels < 2:
        raise ValueError(f"fock_levels must be >= 2, got {fock_levels}")
    a = np.zeros((fock_levels, fock_levels), dtype=complex)
    for n in range(1, fock_levels):
        a[n - 1, n] = np.sqrt(n)
    return a


def lowering() -> np.ndarray:
    """Two-level lowering operator |g><e| (basis order |g>, |e>)."""
    s = np.zeros((2, 2), dtype=complex)
    s[0, 1] = 1.0
    return s


def sigma_x() -> np.ndarray:
    return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def tensor(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product, first factor = QD, second factor = field."""
    return np.kron(A, B)


class SpaceOperators:
    """Factory for the elementary operators lifted to the full space."""

    def __init__(self, hilbert: HilbertConfig):
        self.hilbert = hilbert
        nq, nf = hilbert.qd_levels, hilbert.fock_levels
        iq = np.eye(nq, dtype=complex)
        ifld = np.eye(nf, dtype=complex)
        self.identity = tensor(iq, ifld)
        self.a = tensor(iq, annihilation(nf))
        self.ad = self.a.conj().T
        self.sigma = tensor(lowering(), ifld)
        self.sigmad = self.sigma.conj().T
        self.sx = tensor(sigma_x(), ifld)
        self.number = self.ad @ self.a
        self.qd_excited = self.sigmad @ self.sigma

    @property
    def dim(self) -> int:
        return self.hilbert.dim

    def drive_op(self, target: DriveTarget) -> np.ndarray:
        """The operator the laser field couples to (Sigma)."""
        return self.a if target is DriveTarget.CAVITY else self.sigma

    def ground_state(self) -> np.ndarray:
        """Density matrix |g,0><g,0|."""
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        rho[0, 0] = 1.0
        return rho


def build_h0(params: SystemParams, ops: SpaceOperators | None = None) -> np.ndarray:
    """Static rotating-frame Hamiltonian (angular units, rad/ns).

    H0 = Dc a^dag a + Dd sigma^dag sigma + g (sigma^dag a + sigma a^dag)
         + J1 (Sigma + Sigma^dag)

    where the detunings Dc, Dd are measured from the pump laser and the
    pump drive term reduces to J1*sigma_x for a driven QD and
    J1*(a + a^dag) for a driven cavity.
    """
    if ops is None:
        ops = SpaceOperators(params.hilbert)
    sig = ops.drive_op(params.drive_target)
    h = (
        params.delta_c_ang * ops.number
        + params.delta_d_ang * ops.qd_excited
        + params.g_ang * (ops.sigmad @ ops.a + ops.sigma @ ops.ad)
        + params.j1_ang * (sig + sig.conj().T)
    )
    return h
