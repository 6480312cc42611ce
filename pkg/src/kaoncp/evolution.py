"""Time evolution in Bloch space: closed form, matrix exponential, Trotter."""

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .bloch import bloch2_to_matrix, bloch_to_matrix, matrix_to_bloch, matrix_to_bloch2

DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class EvolutionMap:
    """A linear map on (one- or two-kaon) states, stored in Bloch coordinates."""

    bloch_matrix: np.ndarray
    time: float = 0.0
    provenance: str = "exponential"

    @property
    def n_kaons(self) -> int:
        return {4: 1, 16: 2}[self.bloch_matrix.shape[0]]

    def apply(self, rho) -> np.ndarray:
        if self.n_kaons == 1:
            return bloch_to_matrix(self.bloch_matrix @ matrix_to_bloch(rho))
        return bloch2_to_matrix(self.bloch_matrix @ matrix_to_bloch2(rho))


MapLike = Union[EvolutionMap, np.ndarray]


def as_bloch_matrix(m: MapLike) -> np.ndarray:
    if isinstance(m, EvolutionMap):
        return m.bloch_matrix
    return np.asarray(m)


# -- closed form for the a = b = c = 0 dissipator ----------------------------


@dataclass(frozen=True)
class TauClosedForm:
    """Analytic exp(t T) for the dissipator with only alpha, beta, gamma set.

    Components 0 and 1 are left alone; components (2, 3) evolve under
    [[A, B], [B, C]].
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if self.alpha < 0 or self.gamma < 0:
            raise ValueError("alpha and gamma must be non-negative")
        if self.alpha * self.gamma < self.beta**2:
            raise ValueError(
                f"alpha*gamma = {self.alpha * self.gamma:.6g} < beta^2 = {self.beta**2:.6g}: "
                "the dissipative map is not positive"
            )

    @property
    def _split(self) -> float:
        return math.sqrt((self.alpha - self.gamma) ** 2 + 4 * self.beta**2)

    @property
    def lambda_plus(self) -> float:
        return -(self.alpha + self.gamma) + self._split

    @property
    def lambda_minus(self) -> float:
        return -(self.alpha + self.gamma) - self._split

    @property
    def degenerate(self) -> bool:
        return self._split < DEGENERACY_RTOL * (self.alpha + self.gamma + 1)

    def _ch_sh(self, t):
        """e^{st} cosh(dt) and e^{st} sinh(dt)/d with s the mean, d half the gap of lambda+-.

        Written via expm1 so the ratio stays accurate as d -> 0; below the
        degeneracy threshold the first-order expansion cosh -> 1,
        sinh(dt)/d -> t is used instead (error O(d^2 t^2)).
        """
        t = np.asarray(t, dtype=float)
        d = self._split
        if self.degenerate:
            e = np.exp(-(self.alpha + self.gamma) * t)
            return e, t * e
        x = np.expm1(-2 * d * t)
        e = np.exp(self.lambda_plus * t)
        return e * (1 + 0.5 * x), e * (-x) / (2 * d)

    def abc(self, t):
        """A(t), B(t), C(t); at exact degeneracy A = C = exp(-2 alpha t), B = 0."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("time must be non-negative")
        ch, sh = self._ch_sh(t)
        diff = self.alpha - self.gamma
        return ch - diff * sh, -2 * self.beta * sh, ch + diff * sh

    def A(self, t):
        return self.abc(t)[0]

    def B(self, t):
        return self.abc(t)[1]

    def C(self, t):
        return self.abc(t)[2]

    def matrix(self, t: float) -> np.ndarray:
        a, b, c = (float(v) for v in self.abc(t))
        m = np.eye(4)
        m[2:, 2:] = [[a, b], [b, c]]
        return m


def tau_closed_form(alpha: float, beta: float, gamma: float, t: float) -> EvolutionMap:
    return EvolutionMap(TauClosedForm(alpha, beta, gamma).matrix(t), float(t), "closed-form")


# -- matrix exponential ------------------------------------------------------


def expm(a) -> np.ndarray:
    """exp(a) for a small dense square matrix.

    Symmetric input goes through the spectral decomposition; anything else
    uses scaling and squaring of a Taylor series truncated at machine
    precision.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if not a.any():
        return np.eye(n, dtype=a.dtype if np.iscomplexobj(a) else float)
    if np.isrealobj(a) and np.array_equal(a, a.T):
        w, v = np.linalg.eigh(a)
        return (v * np.exp(w)) @ v.T

    norm = np.linalg.norm(a, 1)
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    b = a / 2.0**squarings
    out = np.eye(n, dtype=a.dtype if np.iscomplexobj(a) else float)
    term = out.copy()
    for k in range(1, 40):
        term = term @ b / k
        out = out + term
        if np.linalg.norm(term, 1) <= 1e-17 * np.linalg.norm(out, 1):
            break
    for _ in range(squarings):
        out = out @ out
    return out


def expm_evolution(generator, t: float) -> EvolutionMap:
    if t < 0:
        raise ValueError("time must be non-negative")
    g = np.asarray(generator, dtype=float)
    return EvolutionMap(expm(t * g), float(t), "exponential")


def generator_family(generator) -> Callable[[float], np.ndarray]:
    """t -> exp(t G) as a plain Bloch matrix."""
    g = np.asarray(generator, dtype=float)
    return lambda t: expm(t * g)


# -- Trotter product ---------------------------------------------------------


def trotter_compose(
    w: Callable[[float], MapLike],
    tau: Callable[[float], MapLike],
    t: float,
    n: int,
) -> EvolutionMap:
    """(W_{t/n} o T_{t/n})^n: each step applies `tau` first, then `w`."""
    if t < 0:
        raise ValueError("time must be non-negative")
    if n < 1:
        raise ValueError("number of Trotter steps must be >= 1")
    step = as_bloch_matrix(w(t / n)) @ as_bloch_matrix(tau(t / n))
    return EvolutionMap(np.linalg.matrix_power(step, n), float(t), f"trotter({n})")
