"""Decay rates and K / Kbar asymmetries computed from evolved states."""

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .bloch import K, K1, K2, KBAR, bloch_to_matrix, matrix_to_bloch, projector
from .evolution import MapLike, as_bloch_matrix
from .linalg import check_hermitian

Propagator = Callable[[float], MapLike]


@dataclass(frozen=True)
class DecayObservable:
    name: str
    operator: np.ndarray
    conjugate: Optional[np.ndarray] = None

    def __post_init__(self):
        for op in (self.operator, self.conjugate):
            if op is None:
                continue
            op = check_hermitian(op)
            if op.shape != (2, 2):
                raise ValueError(f"observable {self.name!r}: operator must be 2x2")
            if np.linalg.norm(op) == 0:
                raise ValueError(f"observable {self.name!r}: operator is zero")
            if np.linalg.eigvalsh(op)[0] < -1e-12 * np.linalg.norm(op):
                raise ValueError(f"observable {self.name!r}: operator is not positive")


def default_observables() -> dict:
    """Leading-order final-state projectors (K1 -> two pions, K2 -> three pions)."""
    return {
        "2pi": DecayObservable("2pi", projector(K1)),
        "3pi": DecayObservable("3pi", projector(K2)),
    }


# named pure states accepted wherever an initial state or projector is needed
NAMED_STATES = {"K1": K1, "K2": K2, "K": K, "Kbar": KBAR}


@dataclass(frozen=True)
class ObservableSeries:
    times: np.ndarray
    values: np.ndarray
    notes: tuple = field(default=())

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly ascending")

    @property
    def nonphysical(self) -> np.ndarray:
        """Mask of negative values; they are reported, never clamped."""
        return self.values < 0


def evolve_state(rho0, propagator: Propagator, t: float) -> np.ndarray:
    return bloch_to_matrix(as_bloch_matrix(propagator(t)) @ matrix_to_bloch(rho0))


def _expect(rho, op) -> float:
    return float(np.trace(rho @ op).real)


def decay_rate(rho0, obs: DecayObservable, propagator: Propagator, times: Sequence[float]):
    """Tr[rho(t) O] / Tr[rho(0) O] on the given times."""
    times = np.asarray(times, dtype=float)
    rho0 = check_hermitian(rho0)
    norm = _expect(rho0, obs.operator)
    if norm <= 0:
        raise ValueError(f"observable {obs.name!r} has vanishing weight in the initial state")
    values = np.array([_expect(evolve_state(rho0, propagator, t), obs.operator) / norm for t in times])
    notes = ()
    if np.any(values < 0):
        notes = (f"{obs.name}: non-physical negative rate at {int((values < 0).sum())} time(s)",)
    return ObservableSeries(times, values, notes)


def asymmetry(o_f, o_fbar, propagator: Propagator, times: Sequence[float]):
    """(Tr[rho_Kbar(t) O_fbar] - Tr[rho_K(t) O_f]) / (sum of the same two terms).

    The series stops before the first time where the denominator vanishes;
    a note records the truncation.
    """
    times = np.asarray(times, dtype=float)
    o_f = check_hermitian(o_f)
    o_fbar = check_hermitian(o_fbar)
    rho_k, rho_kbar = projector(K), projector(KBAR)
    values = []
    notes = ()
    for t in times:
        x = _expect(evolve_state(rho_kbar, propagator, t), o_fbar)
        y = _expect(evolve_state(rho_k, propagator, t), o_f)
        den = x + y
        if den == 0.0:
            msg = f"asymmetry denominator vanishes at t={t!r}; series truncated"
            warnings.warn(msg, stacklevel=2)
            notes = (msg,)
            break
        values.append((x - y) / den)
    return ObservableSeries(times[: len(values)], np.array(values), notes)
