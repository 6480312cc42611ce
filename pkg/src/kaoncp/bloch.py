"""Pauli-basis (Bloch) coordinates for kaon states and maps.

A 2x2 operator is written rho = sum_mu r[mu] * SIGMA[mu] with
r[mu] = Tr(SIGMA[mu] rho) / 2.  A linear map on operators then becomes a
4x4 matrix acting on r.  Two-kaon operators use the product basis
SIGMA[mu] (x) SIGMA[nu], flattened as index 4*mu + nu, so a product map
F (x) G is simply np.kron(F, G).

The CP eigenstates are embedded as K1 = (1, 0), K2 = (0, 1); sigma_3 then
measures the K1/K2 population difference.
"""

from typing import Callable

import numpy as np

from .linalg import as_matrix, check_hermitian

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# two-kaon basis, SIGMA2[4*mu + nu] = SIGMA[mu] (x) SIGMA[nu]
SIGMA2 = np.array([np.kron(SIGMA[m], SIGMA[n]) for m in range(4) for n in range(4)])

K1 = np.array([1, 0], dtype=complex)
K2 = np.array([0, 1], dtype=complex)
K = (K1 + K2) / np.sqrt(2)
KBAR = (K1 - K2) / np.sqrt(2)

# Bloch defect tolerance for maps that should send Hermitian to Hermitian
_HP_RTOL = 1e-12


class NotHermiticityPreservingError(ValueError):
    pass


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def matrix_to_bloch(rho) -> np.ndarray:
    rho = check_hermitian(rho)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {rho.shape}")
    return np.einsum("mij,ji->m", SIGMA, rho).real / 2


def bloch_to_matrix(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (4,):
        raise ValueError(f"expected 4 Bloch components, got shape {r.shape}")
    return np.einsum("m,mij->ij", r, SIGMA)


def matrix_to_bloch2(rho) -> np.ndarray:
    """16 real coefficients of a 4x4 Hermitian operator in the product basis."""
    rho = check_hermitian(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {rho.shape}")
    return np.einsum("mij,ji->m", SIGMA2, rho).real / 4


def bloch2_to_matrix(r) -> np.ndarray:
    r = np.asarray(r, dtype=float).reshape(16)
    return np.einsum("m,mij->ij", r, SIGMA2)


def superop_to_bloch(phi: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Real 4x4 matrix F with (phi[rho])^mu = F[mu, nu] rho^nu.

    `phi` is called once on each Pauli matrix.  Raises
    NotHermiticityPreservingError if any image fails to be Hermitian, i.e. if
    F would need complex entries.
    """
    f = np.empty((4, 4), dtype=complex)
    for nu in range(4):
        out = as_matrix(phi(SIGMA[nu].copy()))
        f[:, nu] = np.einsum("mij,ji->m", SIGMA, out) / 2
    defect = float(np.linalg.norm(f.imag))
    if defect > _HP_RTOL * max(1.0, float(np.linalg.norm(f))):
        raise NotHermiticityPreservingError(
            f"map is not Hermiticity preserving: imaginary Bloch defect {defect:.3e}"
        )
    return f.real.copy()


def apply_bloch_map(f, x) -> np.ndarray:
    """Apply the linear extension of a Bloch-space map to any 2x2 matrix.

    Unlike going through matrix_to_bloch, `x` need not be Hermitian; its
    Pauli coefficients are simply complex.
    """
    x = as_matrix(x)
    coeffs = np.einsum("mij,ji->m", SIGMA, x) / 2
    return np.einsum("m,mij->ij", np.asarray(f, dtype=float) @ coeffs, SIGMA)


def bloch_to_superop(f) -> Callable[[np.ndarray], np.ndarray]:
    """Inverse of superop_to_bloch: a callable acting on 2x2 matrices."""
    f = np.asarray(f, dtype=float)
    return lambda x: apply_bloch_map(f, x)
