"""Entropies, Holevo quantities, privacy and wiretap-code verification.

All logarithms are base 2. Eve's accessible information is bounded by her
Holevo quantity on the full environment state; no measurement is optimized.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import DensityMatrix, DilatedChannel, bob_state, ensure_state, eve_state
from .dfs import WiretapCode
from .errors import DomainError, ShapeError
from .linalg import eigvalsh, is_hermitian

STATE_TOL = 1e-9
PROB_TOL = 1e-9
POVM_TOL = 1e-9


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -sum lambda log2 lambda, with 0 log 0 = 0."""
    lam = eigvalsh(ensure_state(rho).matrix)
    if lam.size and lam[-1] < -STATE_TOL:
        raise DomainError(f"state has negative eigenvalue {lam[-1]:.3e}")
    lam = lam[lam > 0.0]
    return max(0.0, float(-np.sum(lam * np.log2(lam))))


@dataclass(frozen=True, eq=False)
class Ensemble:
    states: tuple
    probs: np.ndarray

    def __post_init__(self):
        states = tuple(ensure_state(s) for s in self.states)
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if not states:
            raise ShapeError("ensemble is empty")
        if len(states) != probs.size:
            raise ShapeError(f"{len(states)} states but {probs.size} probabilities")
        if np.any(probs < 0.0) or not np.all(np.isfinite(probs)):
            raise DomainError("probabilities must be finite and nonnegative")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise DomainError(f"probabilities sum to {probs.sum():.12g}, expected 1")
        d = states[0].dim
        for k, s in enumerate(states):
            if s.dim != d:
                raise ShapeError(f"state {k} has dimension {s.dim}, expected {d}")
        probs.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, states: Sequence) -> "Ensemble":
        n = len(states)
        return cls(tuple(states), np.full(n, 1.0 / n))

    @property
    def average(self) -> DensityMatrix:
        m = sum(p * s.matrix for p, s in zip(self.probs, self.states))
        return DensityMatrix(m)

    def mapped(self, fn) -> "Ensemble":
        return Ensemble(tuple(fn(s) for s in self.states), self.probs)


def holevo(e: Ensemble) -> float:
    """chi = S(sum p_k rho_k) - sum p_k S(rho_k)."""
    avg = von_neumann_entropy(e.average)
    cond = sum(p * von_neumann_entropy(s) for p, s in zip(e.probs, e.states) if p > 0.0)
    return float(max(0.0, avg - cond))


@dataclass(frozen=True)
class PrivacyReport:
    chi_bob: float
    chi_eve: float
    privacy: float


def privacy(d: DilatedChannel, e: Ensemble) -> PrivacyReport:
    chi_b = holevo(e.mapped(lambda s: bob_state(d, s)))
    chi_e = holevo(e.mapped(lambda s: eve_state(d, s)))
    return PrivacyReport(float(chi_b), float(chi_e), float(chi_b - chi_e))


def secrecy_rate_lower_bound(d: DilatedChannel, e: Ensemble) -> float:
    """chi_Bob - chi_Eve for one fixed prior; maximizing it is left to :mod:`dfswire.capacity`."""
    return privacy(d, e).privacy


@dataclass(frozen=True)
class WiretapVerdict:
    p_error: float
    leakage: float
    lam: float
    mu: float
    passes: bool

    def to_dict(self) -> dict:
        return {
            "p_error": self.p_error,
            "leakage_bits_per_letter": self.leakage,
            "passes": self.passes,
            "lambda": self.lam,
            "mu": self.mu,
        }


def check_povm(elements: Sequence[np.ndarray]) -> None:
    """Each element PSD and the sum bounded by the identity."""
    for u, p in enumerate(elements):
        if not is_hermitian(p, POVM_TOL):
            raise DomainError(f"decoding element {u} is not Hermitian")
        low = eigvalsh(p)[-1]
        if low < -POVM_TOL:
            raise DomainError(f"decoding element {u} is not positive semidefinite (eigenvalue {low:.3e})")
    total = sum(elements)
    top = eigvalsh(total)[0]
    if top > 1.0 + POVM_TOL:
        raise DomainError(f"decoding elements sum above the identity (largest eigenvalue {top:.12g})")


def verify_wiretap_code(d: DilatedChannel, code: WiretapCode, lam: float, mu: float) -> WiretapVerdict:
    """Average decoding error and per-letter Holevo leakage for uniformly drawn messages."""
    if code.dim != d.dim_in:
        raise ShapeError(f"code dimension {code.dim} does not match channel dimension {d.dim_in}")
    check_povm(code.povm)
    n_msg = code.num_messages
    hits = sum(np.trace(bob_state(d, w).matrix @ dec).real for w, dec in zip(code.codewords, code.povm))
    p_error = float(min(1.0, max(0.0, 1.0 - hits / n_msg)))
    eve = Ensemble.uniform([eve_state(d, w) for w in code.codewords])
    leakage = float(holevo(eve) / code.length)
    return WiretapVerdict(p_error, leakage, lam, mu, bool(p_error <= lam and leakage < mu))
