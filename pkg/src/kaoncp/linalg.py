"""Small dense Hermitian linear algebra used throughout the package.

Matrices here are at most 16x16, so everything is plain numpy.  Inputs that
are supposed to be Hermitian are *checked*, never symmetrized: a failure
usually means a construction bug upstream.
"""

from dataclasses import dataclass

import numpy as np

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-10


class NonHermitianError(ValueError):
    """Raised when an operator expected to be Hermitian is not."""

    def __init__(self, defect: float, scale: float):
        self.defect = defect
        self.scale = scale
        super().__init__(
            f"matrix is not Hermitian: ||M - M^dag||_F = {defect:.3e} "
            f"(tolerance {HERMITIAN_RTOL:.0e} * ||M||_F = {HERMITIAN_RTOL * scale:.3e})"
        )


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(m) -> float:
    m = as_matrix(m)
    return float(np.linalg.norm(m - m.conj().T))


def check_hermitian(m) -> np.ndarray:
    """Return `m` as a complex array, raising NonHermitianError if needed."""
    m = as_matrix(m)
    scale = float(np.linalg.norm(m))
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_RTOL * scale:
        raise NonHermitianError(defect, scale)
    return m


def negativity_threshold(m) -> float:
    """Eigenvalues below minus this value count as genuinely negative."""
    return PSD_RTOL * max(1.0, float(np.linalg.norm(m)))


def hermitian_eigen(m):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of `m`."""
    m = check_hermitian(m)
    w, v = np.linalg.eigh(m)
    return w, v


@dataclass(frozen=True)
class SignedDecomposition:
    positive_part: np.ndarray
    negative_part: np.ndarray

    @property
    def negative_trace(self) -> float:
        return float(np.trace(self.negative_part).real)


def signed_decompose(m) -> SignedDecomposition:
    """Split a Hermitian matrix as M = M_+ + M_- along its spectrum.

    Eigenvalues within the negativity threshold of zero are assigned to the
    positive part, so a PSD input always yields an exactly zero negative part.
    """
    m = check_hermitian(m)
    w, v = np.linalg.eigh(m)
    neg = w < -negativity_threshold(m)
    w_neg = np.where(neg, w, 0.0)
    w_pos = np.where(neg, 0.0, w)
    minus = (v * w_neg) @ v.conj().T
    plus = (v * w_pos) @ v.conj().T
    return SignedDecomposition(plus, minus)


def negative_mass(m) -> float:
    """|Tr M_-|: total weight of the eigenvalues below the negativity threshold."""
    m = check_hermitian(m)
    w = np.linalg.eigvalsh(m)
    return float(np.abs(w[w < -negativity_threshold(m)].sum()))


def psd_check(m):
    """Return (is_psd, min_eigenvalue)."""
    m = check_hermitian(m)
    lo = float(np.linalg.eigvalsh(m)[0])
    return lo >= -negativity_threshold(m), lo


def tensor_product(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def von_neumann_entropy(rho) -> float:
    """-Tr(rho log rho) of a trace-normalized copy of `rho` (natural log)."""
    rho = check_hermitian(rho)
    w = np.linalg.eigvalsh(rho)
    w = w / w.sum()
    w = w[w > 0]
    return float(-(w * np.log(w)).sum())
