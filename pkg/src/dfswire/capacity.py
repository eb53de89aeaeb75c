"""Maximization of Holevo-type objectives over input priors.

``maximize_holevo`` runs the multiplicative fixed point

    p_k <- p_k * 2**D(rho_k || rho_bar) / Z

which increases chi monotonically; since chi(p) = sum_k p_k D_k, the gap
max_k D_k - chi(p) bounds the distance to the optimum and is used as the
stopping rule.

``secrecy_rate_sweep`` handles chi_Bob - chi_Eve, which is not concave in
general, by projected gradient ascent from several deterministic starts. Its
value is a lower bound on the maximum for the given signal states.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import DensityMatrix, DilatedChannel, bob_state, ensure_state, eve_state
from .dfs import DfsSubspace, invariance_residual
from .errors import DomainError, ShapeError
from .linalg import dagger, hermitian_eig
from .secrecy import von_neumann_entropy

LOG_FLOOR = 1e-300
PRUNE = 1e-12
# a relative entropy this large only arises from a floored logarithm
DIVERGENCE_FLAG = 500.0
INVARIANCE_TOL = 1e-8
N_STARTS = 8


@dataclass
class CapacityResult:
    optimal_probs: np.ndarray
    value_bits: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)
    gap: float = float("nan")
    mode: str = "holevo-max"
    support_flag: bool = False

    def to_dict(self) -> dict:
        return {
            "value_bits": float(self.value_bits),
            "probs": [float(p) for p in self.optimal_probs],
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "mode": self.mode,
        }


def _check_states(states: Sequence) -> list[np.ndarray]:
    if not states:
        raise ShapeError("need at least one state")
    mats = [ensure_state(s).matrix for s in states]
    d = mats[0].shape[0]
    for k, m in enumerate(mats):
        if m.shape != (d, d):
            raise ShapeError(f"state {k} has shape {m.shape}, expected ({d}, {d})")
    return mats


class _RelativeEntropies:
    """D(rho_k || rho_bar(p)) for a fixed list of states, in bits."""

    def __init__(self, mats):
        self.mats = np.array(mats)
        self.neg_entropy = -np.array([von_neumann_entropy(DensityMatrix(m, validate=False)) for m in mats])

    def __call__(self, p):
        avg = np.tensordot(p, self.mats, axes=1)
        w, v = hermitian_eig(avg)
        logw = np.log2(np.maximum(w, LOG_FLOOR))
        # <v_j| rho_k |v_j> for every k, j
        overlaps = np.einsum("ja,kjl,la->ka", v.conj(), self.mats, v).real
        return self.neg_entropy - overlaps @ logw


def maximize_holevo(states: Sequence, tol: float = 1e-6, max_iter: int = 10000) -> CapacityResult:
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    mats = _check_states(states)
    rel = _RelativeEntropies(mats)
    m = len(mats)
    p = np.full(m, 1.0 / m)
    history = []
    flagged = False
    converged = False
    it = 0
    while True:
        dk = rel(p)
        flagged |= bool(np.any(dk[p > 0] > DIVERGENCE_FLAG))
        chi = float(p @ dk)
        history.append(chi)
        gap = float(np.max(dk) - chi)
        if gap <= tol:
            converged = True
            break
        if it >= max_iter:
            break
        p = p * np.exp2(dk - np.max(dk))
        p /= p.sum()
        p[p < PRUNE] = 0.0
        p /= p.sum()
        it += 1
    return CapacityResult(p, max(0.0, chi), it, converged, history, gap, "holevo-max", flagged)


def secrecy_capacity_dfs(d: DilatedChannel, subspace: DfsSubspace, tol: float = 1e-6, max_iter: int = 10000) -> CapacityResult:
    """max over priors of chi_Bob for the subspace basis states (chi_Eve vanishes on a DFS)."""
    res = invariance_residual(d.channel, subspace)
    if res > INVARIANCE_TOL:
        raise DomainError(f"subspace is not decoherence-free for channel {d.channel.label!r} (residual {res:.3e})")
    b = subspace.basis
    received = [bob_state(d, b[:, [k]] @ dagger(b[:, [k]])) for k in range(subspace.dim)]
    return maximize_holevo(received, tol=tol, max_iter=max_iter)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    n = v.size
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, n + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


class _Difference:
    def __init__(self, bob_mats, eve_mats):
        self.bob = _RelativeEntropies(bob_mats)
        self.eve = _RelativeEntropies(eve_mats)

    def __call__(self, p):
        db, de = self.bob(p), self.eve(p)
        # d chi / d p_k = D_k - 1/ln 2; the constant cancels in the difference
        return float(p @ db - p @ de), db - de


def _ascend(obj, p, tol, max_iter):
    f, g = obj(p)
    history = [f]
    converged = False
    it = 0
    h = 1e-7
    while it < max_iter:
        gap = float(np.max(g) - p @ g)
        if gap <= tol:
            converged = True
            break
        direction = project_simplex(p + g / max(1.0, np.max(np.abs(g)))) - p
        slope = float(g @ direction)
        fd = (obj(p + h * direction)[0] - f) / h
        if slope <= 0.0 or fd <= 0.0:
            break
        t = 1.0
        while t > 1e-12:
            cand = project_simplex(p + t * direction)
            fc, gc = obj(cand)
            if fc >= f + 1e-4 * t * min(slope, fd):
                break
            t *= 0.5
        else:
            break
        p, f, g = cand, fc, gc
        history.append(f)
        it += 1
    return p, f, history, it, converged, gap


def secrecy_rate_sweep(d: DilatedChannel, states: Sequence, tol: float = 1e-6, max_iter: int = 10000) -> CapacityResult:
    """Best chi_Bob - chi_Eve over priors for fixed signal states (a lower bound)."""
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    mats = _check_states(states)
    if mats[0].shape[0] != d.dim_in:
        raise ShapeError(f"states of dimension {mats[0].shape[0]} do not match channel dimension {d.dim_in}")
    bob = [bob_state(d, m).matrix for m in mats]
    eve = [eve_state(d, m).matrix for m in mats]
    obj = _Difference(bob, eve)
    m = len(mats)
    starts = [np.full(m, 1.0 / m)] + [np.eye(m)[k] for k in range(min(m, N_STARTS - 1))]
    best = None
    for p0 in starts:
        p, f, hist, it, conv, gap = _ascend(obj, p0, tol, max_iter)
        if best is None or f > best.value_bits:
            best = CapacityResult(p, f, it, conv, hist, gap, "difference-lower-bound")
    best.value_bits = max(0.0, best.value_bits)
    return best
