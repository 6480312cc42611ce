"""Entangled kaon pairs: the singlet, product evolutions, negative probabilities."""

from dataclasses import dataclass

import numpy as np

from .bloch import K1, K2, SIGMA
from .evolution import EvolutionMap, MapLike, TauClosedForm, as_bloch_matrix, expm
from .generators import EffectiveHamiltonian, weisskopf_wigner_generator
from .linalg import negative_mass, signed_decompose

# probe vectors, deliberately unnormalized (<u|u> = <v|v> = 2)
WITNESS_U = np.array([1, 0, 0, 1], dtype=complex)
WITNESS_V = np.array([0, 1, 1, 0], dtype=complex)

BOUND_ATOL = 1e-10


@dataclass(frozen=True)
class SingletState:
    matrix: np.ndarray
    vector: np.ndarray


def singlet() -> SingletState:
    """(K1 K2 - K2 K1)/sqrt(2), checked against its Pauli expansion."""
    psi = (np.kron(K1, K2) - np.kron(K2, K1)) / np.sqrt(2)
    rho = (np.kron(SIGMA[0], SIGMA[0]) - sum(np.kron(s, s) for s in SIGMA[1:])) / 4
    if np.abs(rho - np.outer(psi, psi.conj())).max() > 1e-15:
        raise AssertionError("singlet constructions disagree")
    return SingletState(rho, psi)


def product_evolution(phi: MapLike) -> EvolutionMap:
    """Phi (x) Phi on two kaons."""
    f = as_bloch_matrix(phi)
    if f.shape != (4, 4):
        raise ValueError("product_evolution takes a single-kaon map")
    if isinstance(phi, EvolutionMap):
        return EvolutionMap(np.kron(f, f), phi.time, phi.provenance)
    return EvolutionMap(np.kron(f, f))


def expectation(rho, vec) -> float:
    return float(np.vdot(vec, rho @ vec).real)


@dataclass(frozen=True)
class TwoKaonWitness:
    value_u: float
    value_v: float
    closed_form: float


def two_kaon_witness(alpha: float, beta: float, gamma: float, t: float) -> TwoKaonWitness:
    """Probe (tau_t (x) tau_t)[rho_S] with u and v; compare with (A^2 - C^2)/2."""
    tau = TauClosedForm(alpha, beta, gamma)
    out = product_evolution(tau.matrix(t)).apply(singlet().matrix)
    a, _, c = (float(x) for x in tau.abc(t))
    return TwoKaonWitness(
        expectation(out, WITNESS_U), expectation(out, WITNESS_V), (a * a - c * c) / 2
    )


def weisskopf_wigner_pair(h: EffectiveHamiltonian):
    """s -> W_s, the standard two-kaon evolution as a 16x16 Bloch matrix."""
    g = weisskopf_wigner_generator(h)
    return lambda s: np.kron(expm(s * g), expm(s * g))


def dissipative_pair(alpha: float, beta: float, gamma: float):
    """s -> tau_s (x) tau_s."""
    tau = TauClosedForm(alpha, beta, gamma)
    return lambda s: np.kron(tau.matrix(s), tau.matrix(s))


def trotter_step(h: EffectiveHamiltonian, alpha, beta, gamma, dt: float) -> np.ndarray:
    """W_dt o T_dt on two kaons."""
    return weisskopf_wigner_pair(h)(dt) @ dissipative_pair(alpha, beta, gamma)(dt)


def omega_trotter(h: EffectiveHamiltonian, alpha, beta, gamma, t: float, n: int) -> EvolutionMap:
    """(W_{t/n} o T_{t/n})^n.

    Both factors are products of one-kaon maps, so the power is taken on a
    single kaon and tensored once; this equals the 16x16 power exactly in
    exact arithmetic and is cheaper and better conditioned.
    """
    if n < 1:
        raise ValueError("number of Trotter steps must be >= 1")
    if t < 0:
        raise ValueError("time must be non-negative")
    g = weisskopf_wigner_generator(h)
    tau = TauClosedForm(alpha, beta, gamma)
    one = np.linalg.matrix_power(expm(t / n * g) @ tau.matrix(t / n), n)
    return EvolutionMap(np.kron(one, one), float(t), f"trotter({n})")


@dataclass(frozen=True)
class NegativeMassBound:
    lhs: float
    rhs: float
    holds: bool
    rho_minus_trace: float
    degenerate: bool = False


def trotter_negative_mass_bound(
    h: EffectiveHamiltonian, alpha: float, beta: float, gamma: float, t: float, n: int
) -> NegativeMassBound:
    """Check |Tr[(W o T)^n rho_S]_-| >= exp(-2 lambda t) |Tr rho_-|.

    rho_- is the negative part after a single composite step of length t/n;
    lambda is the largest eigenvalue of the one-kaon width matrix.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    degenerate = alpha == gamma and beta == 0
    if t == 0:
        return NegativeMassBound(0.0, 0.0, True, 0.0, degenerate)
    rho_s = singlet().matrix
    first = EvolutionMap(trotter_step(h, alpha, beta, gamma, t / n)).apply(rho_s)
    rho_minus = signed_decompose(first).negative_trace
    final = omega_trotter(h, alpha, beta, gamma, t, n).apply(rho_s)
    lhs = negative_mass(final)
    rhs = float(np.exp(-2 * h.lambda_max * t)) * abs(rho_minus)
    return NegativeMassBound(lhs, rhs, lhs >= rhs - BOUND_ATOL, rho_minus, degenerate)
