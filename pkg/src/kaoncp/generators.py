"""Bloch-space generators for the modified kaon evolution.

The full generator acts as

    d rho/dt = -i H rho + i rho H^dag + T[rho]

with H the (non-Hermitian) Weisskopf-Wigner Hamiltonian and T a
dissipative term fixed by six real rates a, b, c, alpha, beta, gamma.  All
functions return real 4x4 matrices acting on Bloch vectors (see bloch.py).
"""

import warnings
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from .bloch import superop_to_bloch
from .linalg import as_matrix

PARAM_NAMES = ("a", "b", "c", "alpha", "beta", "gamma")


@dataclass(frozen=True)
class DissipativeParams:
    """The six rates of the dissipative term (inverse time units)."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    @classmethod
    def from_mapping(cls, m) -> "DissipativeParams":
        unknown = set(m) - set(PARAM_NAMES)
        if unknown:
            raise ValueError(f"unknown dissipative parameter(s): {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in m.items()})

    def as_dict(self) -> dict:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}

    def block(self) -> np.ndarray:
        """Symmetric 3x3 rate block D; the dissipator is -2 D on components 1..3."""
        return np.array(
            [
                [self.a, self.b, self.c],
                [self.b, self.alpha, self.beta],
                [self.c, self.beta, self.gamma],
            ],
            dtype=float,
        )

    def validate(self) -> None:
        bad = [n for n in ("a", "alpha", "gamma") if getattr(self, n) < 0]
        if bad:
            raise ValueError(f"parameters {', '.join(bad)} must be non-negative")

    @property
    def is_zero(self) -> bool:
        return not any(self.as_dict().values())


def dissipator_matrix(p: DissipativeParams) -> np.ndarray:
    p.validate()
    t = np.zeros((4, 4))
    t[1:, 1:] = -2.0 * p.block()
    return t


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: float
    rhs: float
    # 1 for inequalities between rates, 2 between squared rates
    degree: int = 1

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class CPInequalityReport:
    inequalities: tuple

    @property
    def all_hold(self) -> bool:
        return all(q.holds for q in self.inequalities)

    @property
    def min_margin(self) -> float:
        return min(q.margin for q in self.inequalities)

    def normalized_min_margin(self, scale: float) -> float:
        """Smallest margin with linear ones divided by `scale`, quadratic by scale**2."""
        if scale <= 0:
            return self.min_margin
        return min(q.margin / scale**q.degree for q in self.inequalities)


def cp_inequalities(p: DissipativeParams) -> CPInequalityReport:
    """The six parameter inequalities required for complete positivity.

    Right-hand sides are evaluated as written, so margins may be negative.
    These are necessary conditions; `kossakowski_check` is the exact test.
    """
    a, b, c, al, be, ga = (p.a, p.b, p.c, p.alpha, p.beta, p.gamma)
    return CPInequalityReport(
        (
            Inequality("a <= alpha + gamma", a, al + ga),
            Inequality("alpha <= a + gamma", al, a + ga),
            Inequality("gamma <= a + alpha", ga, a + al),
            Inequality("4 b^2 <= gamma^2 - (a - alpha)^2", 4 * b * b, ga * ga - (a - al) ** 2, 2),
            Inequality("4 c^2 <= alpha^2 - (a - gamma)^2", 4 * c * c, al * al - (a - ga) ** 2, 2),
            Inequality("4 beta^2 <= a^2 - (alpha - gamma)^2", 4 * be * be, a * a - (al - ga) ** 2, 2),
        )
    )


def kossakowski_matrix(p: DissipativeParams) -> np.ndarray:
    """Coefficient matrix K of T[rho] = sum_ij K_ij (s_i rho s_j - {s_j s_i, rho}/2).

    For the real symmetric dissipator shape, D = Tr(K) 1 - K, hence
    K = Tr(D)/2 1 - D.  The generated semigroup is CP iff K is PSD.
    """
    d = p.block()
    return np.trace(d) / 2 * np.eye(3) - d


def kossakowski_check(p: DissipativeParams):
    """(is_cp, min eigenvalue of the Kossakowski matrix)."""
    k = kossakowski_matrix(p)
    lo = float(np.linalg.eigvalsh(k)[0])
    return lo >= -1e-12 * max(1.0, float(np.linalg.norm(k))), lo


def positivity_check(p: DissipativeParams):
    """(is_positive, min eigenvalue of D) for the dissipative semigroup alone.

    exp(-2 t D) maps the Bloch ball into itself for all t iff D is PSD; with
    a = b = c = 0 this reduces to alpha, gamma >= 0 and alpha*gamma >= beta^2.
    """
    d = p.block()
    lo = float(np.linalg.eigvalsh(d)[0])
    return lo >= -1e-12 * max(1.0, float(np.linalg.norm(d))), lo


class EffectiveHamiltonian:
    """Weisskopf-Wigner Hamiltonian H = M - i Gamma/2 of a single kaon."""

    def __init__(self, h):
        h = as_matrix(h)
        if h.shape != (2, 2):
            raise ValueError(f"effective Hamiltonian must be 2x2, got {h.shape}")
        self.h = h
        lo = float(np.linalg.eigvalsh(self.width)[0])
        if lo < -1e-12 * max(1.0, float(np.linalg.norm(self.width))):
            warnings.warn(
                f"width matrix has a negative eigenvalue ({lo:.3e}); "
                "evolution will not be trace decreasing",
                stacklevel=2,
            )

    @classmethod
    def from_masses_widths(cls, m_s, m_l, gamma_s, gamma_l):
        """Diagonal H in the (K1, K2) basis, K1 short-lived, CP violation neglected."""
        return cls(np.diag([m_s - 0.5j * gamma_s, m_l - 0.5j * gamma_l]))

    @property
    def mass(self) -> np.ndarray:
        return (self.h + self.h.conj().T) / 2

    @property
    def width(self) -> np.ndarray:
        return 1j * (self.h - self.h.conj().T)

    @property
    def lambda_max(self) -> float:
        """Largest eigenvalue of the width matrix."""
        return float(np.linalg.eigvalsh(self.width)[-1])

    def __repr__(self):
        return f"EffectiveHamiltonian({self.h.tolist()!r})"


@dataclass(frozen=True)
class LindbladOperators:
    ops: tuple

    def __init__(self, ops: Sequence = ()):
        object.__setattr__(self, "ops", tuple(as_matrix(a) for a in ops))
        for a in self.ops:
            if a.shape != (2, 2):
                raise ValueError(f"Lindblad operators must be 2x2, got {a.shape}")

    @property
    def hermitian_flag(self) -> bool:
        return all(np.allclose(a, a.conj().T, rtol=0, atol=1e-14) for a in self.ops)

    @property
    def r(self) -> np.ndarray:
        return sum((a.conj().T @ a for a in self.ops), np.zeros((2, 2), dtype=complex))


def lindblad_dissipator(ops: LindbladOperators) -> np.ndarray:
    """Bloch matrix of rho -> -(R rho + rho R)/2 + sum_j A_j rho A_j^dag."""
    r = ops.r

    def t(rho):
        out = -0.5 * (r @ rho + rho @ r)
        for a in ops.ops:
            out = out + a @ rho @ a.conj().T
        return out

    return superop_to_bloch(t)


def weisskopf_wigner_generator(h: EffectiveHamiltonian) -> np.ndarray:
    """Bloch matrix of rho -> -i H rho + i rho H^dag."""
    hm = h.h
    return superop_to_bloch(lambda rho: -1j * hm @ rho + 1j * rho @ hm.conj().T)


def full_generator(h: EffectiveHamiltonian, p: DissipativeParams) -> np.ndarray:
    return weisskopf_wigner_generator(h) + dissipator_matrix(p)
