"""Operational complete-positivity tests for single-kaon maps.

Choi matrices use the unnormalized reference |Omega> = |00> + |11> with the
system factor first:

    Choi(Phi) = sum_ij Phi(|i><j|) (x) |i><j|

so the identity map has a rank-one Choi matrix of trace 2, and an eigenvector
v of the Choi matrix reshapes row-major into a Kraus operator.
"""

from dataclasses import dataclass

import numpy as np

from .bloch import apply_bloch_map
from .evolution import EvolutionMap, MapLike, as_bloch_matrix
from .linalg import check_hermitian, psd_check
from .twokaon import WITNESS_U, WITNESS_V, singlet

KRAUS_RTOL = 1e-12


@dataclass(frozen=True)
class ChoiMatrix:
    matrix: np.ndarray
    convention: str = "phi(x)id on |00>+|11>, unnormalized"


@dataclass(frozen=True)
class KrausSet:
    ops: tuple

    @property
    def completeness_defect(self) -> float:
        """||sum_j V_j^dag V_j - 1||_F; zero exactly for trace-preserving maps."""
        s = sum(v.conj().T @ v for v in self.ops)
        return float(np.linalg.norm(s - np.eye(2)))

    def apply(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return sum((v @ rho @ v.conj().T for v in self.ops), np.zeros((2, 2), dtype=complex))


class NotCompletelyPositiveError(ValueError):
    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"Choi matrix has negative eigenvalue {min_eigenvalue:.6e}; "
            "the map admits no Kraus decomposition"
        )


def choi_of_map(phi: MapLike) -> ChoiMatrix:
    f = as_bloch_matrix(phi)
    if f.shape != (4, 4):
        raise ValueError("Choi matrices are only built for single-kaon (4x4 Bloch) maps")
    c = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            c += np.kron(apply_bloch_map(f, e), e)
    return ChoiMatrix(c)


def is_completely_positive(phi: MapLike):
    """(flag, min Choi eigenvalue)."""
    return psd_check(choi_of_map(phi).matrix)


def kraus_from_choi(choi: ChoiMatrix) -> KrausSet:
    m = check_hermitian(choi.matrix)
    ok, lo = psd_check(m)
    if not ok:
        raise NotCompletelyPositiveError(lo)
    w, v = np.linalg.eigh(m)
    cut = KRAUS_RTOL * abs(np.trace(m).real)
    ops = tuple(
        np.sqrt(lam) * v[:, k].reshape(2, 2) for k, lam in enumerate(w) if lam > cut
    )
    return KrausSet(ops[::-1])


@dataclass(frozen=True)
class WitnessRecord:
    value_u: float
    value_v: float
    min_eigenvalue: float


def extension_witness(phi: MapLike) -> WitnessRecord:
    """Apply Phi (x) id to the singlet and probe it with the u, v vectors.

    For the closed-form dissipative map, value_u = (A - C)/2 = -value_v.
    """
    f = as_bloch_matrix(phi)
    if f.shape != (4, 4):
        raise ValueError("extension_witness takes a single-kaon map")
    out = EvolutionMap(np.kron(f, np.eye(4))).apply(singlet().matrix)
    return WitnessRecord(
        float(np.vdot(WITNESS_U, out @ WITNESS_U).real),
        float(np.vdot(WITNESS_V, out @ WITNESS_V).real),
        float(np.linalg.eigvalsh(out)[0]),
    )


def dynamics_verdict(p) -> str:
    """'CP', 'simply-positive' or 'not-positive' for the dissipative semigroup.

    Uses the exact Kossakowski criterion for CP; the six parameter
    inequalities are necessary but do not by themselves decide it.
    """
    from .generators import kossakowski_check, positivity_check

    if not positivity_check(p)[0]:
        return "not-positive"
    if kossakowski_check(p)[0]:
        return "CP"
    return "simply-positive"
