"""Vectorization and superoperator assembly.

Convention (fixed project-wide): **column stacking**,
vec(A rho B) = (B^T kron A) vec(rho).  In numpy terms
vec(rho) = rho.reshape(-1, order="F").
"""

from __future__ import annotations

import math

import numpy as np

from .operators import SpaceOperators
from .params import SystemParams


def vectorize(rho: np.ndarray) -> np.ndarray:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvectorize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v).reshape(-1)
    d = math.isqrt(v.size)
    if d * d != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    return v.reshape(d, d, order="F")


def spre(A: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> A rho."""
    return np.kron(np.eye(A.shape[0]), A)


def spost(B: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> rho B."""
    return np.kron(B.T, np.eye(B.shape[0]))


def sandwich(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> A rho B."""
    return np.kron(B.T, A)


def commutator_super(H: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> -i [H, rho]."""
    return -1j * (spre(H) - spost(H))


def dissipator(C: np.ndarray) -> np.ndarray:
    """Lindblad dissipator D(C): rho -> C rho C^dag - 1/2 {C^dag C, rho}."""
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError(f"collapse operator must be square, got {C.shape}")
    cdc = C.conj().T @ C
    return sandwich(C, C.conj().T) - 0.5 * (spre(cdc) + spost(cdc))


def trace_of(v: np.ndarray) -> complex:
    """Trace functional on a vectorized matrix."""
    d = math.isqrt(v.size)
    return complex(v.reshape(d, d, order="F").trace())


def build_liouvillians(
    params: SystemParams, ops: SpaceOperators | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Assemble (L0, L_plus, L_minus) of the time-periodic master equation.

    L0 carries the static Hamiltonian and all four collapse channels
    sqrt(2*gamma) sigma, sqrt(2*kappa) a, sqrt(2*gamma_d) sigma^dag sigma
    and sqrt(2*gamma_r) a^dag sigma.  L_plus/L_minus are the probe
    commutators -i J2 [Sigma, .] and -i J2 [Sigma^dag, .], which multiply
    exp(+i delta t) and exp(-i delta t) respectively.
    """
    from .operators import build_h0  # local import keeps module load order simple

    if ops is None:
        ops = SpaceOperators(params.hilbert)
    h0 = build_h0(params, ops)
    L0 = commutator_super(h0)
    L0 += dissipator(np.sqrt(2.0 * params.gamma_ang) * ops.sigma)
    L0 += dissipator(np.sqrt(2.0 * params.kappa_ang) * ops.a)
    L0 += dissipator(np.sqrt(2.0 * params.gamma_d_ang) * ops.qd_excited)
    L0 += dissipator(np.sqrt(2.0 * params.gamma_r_ang) * (ops.ad @ ops.sigma))

    sig = ops.drive_op(params.drive_target)
    Lp = params.j2_ang * commutator_super(sig)
    Lm = params.j2_ang * commutator_super(sig.conj().T)
    return L0, Lp, Lm
