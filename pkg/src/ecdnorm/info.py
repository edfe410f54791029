"""Entropic quantities and capacity estimators.

Entropies use natural logarithms. relative_entropy returns math.inf when the
first state has support outside the second (eigenvalue threshold 1e-12).
The capacity estimator is a declared lower-bound heuristic: multi-start
projected ascent over ensembles of pure states under a mean-energy cap on
the average input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import (
    Channel,
    DensityOperator,
    Hamiltonian,
    InfeasibleProblemError,
    apply_channel,
    partial_trace,
)
from .optim import EnergyConstrainedSup, energy_constrained_sup
from .thermo import solve_gibbs

SUPPORT_TOL = 1e-12
EIG_FLOOR = 1e-18


def _matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=np.complex128)


def _entropy_nd(m: np.ndarray) -> float:
    w = np.linalg.eigvalsh(m)
    w = np.clip(w, 0.0, None)
    nz = w[w > 0.0]
    return float(-(nz * np.log(nz)).sum())


def entropy(rho) -> float:
    """Von Neumann entropy -Tr[ρ ln ρ]."""
    val = _entropy_nd(_matrix(rho))
    return max(val, 0.0)


def relative_entropy(rho, sigma) -> float:
    """Tr[ρ(ln ρ - ln σ)], or math.inf when supp ρ ⊄ supp σ."""
    rm, sm = _matrix(rho), _matrix(sigma)
    if rm.shape != sm.shape:
        raise ValueError("relative entropy needs operators of equal dimension")
    rw, rv = np.linalg.eigh(rm)
    sw, sv = np.linalg.eigh(sm)
    rw = np.clip(rw, 0.0, None)
    kernel = sv[:, sw <= SUPPORT_TOL]
    if kernel.shape[1]:
        outside = float(np.einsum("ij,jk,ki->", kernel.conj().T, rm, kernel).real)
        if outside > 1e-10:
            return math.inf
    keep_r = rw > SUPPORT_TOL
    keep_s = sw > SUPPORT_TOL
    overlap = np.abs(rv[:, keep_r].conj().T @ sv[:, keep_s]) ** 2
    lam = rw[keep_r]
    val = float((lam * np.log(lam)).sum() - lam @ overlap @ np.log(sw[keep_s]))
    return max(val, 0.0)


@dataclass(frozen=True)
class Ensemble:
    """Finite ensemble of states with strictly positive probabilities."""

    probs: tuple[float, ...]
    states: tuple[DensityOperator, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        states = tuple(self.states)
        if len(probs) != len(states) or not probs:
            raise ValueError("ensemble needs matching, nonempty probabilities and states")
        if any(p <= 0.0 for p in probs):
            raise ValueError("ensemble probabilities must be strictly positive")
        if abs(sum(probs) - 1.0) > 1e-10:
            raise ValueError("ensemble probabilities must sum to one")
        d = states[0].dimension
        if any(s.dimension != d for s in states):
            raise ValueError("ensemble states must share one dimension")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @property
    def dimension(self) -> int:
        return self.states[0].dimension

    def average(self) -> np.ndarray:
        return sum(p * s.matrix for p, s in zip(self.probs, self.states))

    def map_through(self, channel: Channel) -> "Ensemble":
        return Ensemble(
            self.probs,
            tuple(DensityOperator(apply_channel(channel, s)) for s in self.states),
        )


def holevo_quantity(ensemble: Ensemble) -> float:
    """χ = H(Σ p_i ρ_i) - Σ p_i H(ρ_i), equal to Σ p_i H(ρ_i || ρ̄)."""
    avg = ensemble.average()
    val = _entropy_nd(avg) - sum(
        p * _entropy_nd(s.matrix) for p, s in zip(ensemble.probs, ensemble.states)
    )
    return max(val, 0.0)


def mutual_information(rho, dims: tuple[int, int]) -> float:
    """I(A:B) = H(A) + H(B) - H(AB) of a bipartite state."""
    m = _matrix(rho)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise ValueError(f"state shape {m.shape} does not match factor dims {dims}")
    val = (
        _entropy_nd(partial_trace(m, dims, keep=0))
        + _entropy_nd(partial_trace(m, dims, keep=1))
        - _entropy_nd(m)
    )
    if val < -1e-8:
        raise RuntimeError(f"mutual information came out negative: {val}")
    return max(val, 0.0)


def channel_mutual_information(channel: Channel, rho: DensityOperator) -> float:
    """I(B:R) of (Φ ⊗ id)(|ψ⟩⟨ψ|) for a purification ψ of the input state.

    The reference dimension equals the rank of the input state; the value
    does not depend on the choice of purification.
    """
    if rho.dimension != channel.in_dim:
        raise ValueError("state dimension does not match the channel input")
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > SUPPORT_TOL
    lam = w[keep]
    vecs = v[:, keep]
    rank = lam.size
    # purification coefficients as a matrix (input × reference)
    m = vecs * np.sqrt(lam)
    out_dim = channel.out_dim
    big = np.zeros((out_dim * rank, out_dim * rank), dtype=np.complex128)
    for k in channel.kraus:
        vec = (k @ m).reshape(-1)
        big += np.outer(vec, vec.conj())
    return mutual_information(big, (out_dim, rank))


def output_energy_sup(
    channel: Channel, h_in: Hamiltonian, h_out: Hamiltonian, energy_budget: float
) -> EnergyConstrainedSup:
    """Exact sup of Tr[H_out Φ(ρ)] over inputs with Tr[H_in ρ] <= budget."""
    if h_in.dimension != channel.in_dim or h_out.dimension != channel.out_dim:
        raise ValueError("Hamiltonian dimensions do not match the channel")
    adj = np.zeros((channel.in_dim, channel.in_dim), dtype=np.complex128)
    hm = h_out.matrix
    for k in channel.kraus:
        adj += k.conj().T @ hm @ k
    return energy_constrained_sup(adj, h_in, energy_budget)


def energy_gain(
    channel: Channel, h_in: Hamiltonian, h_out: Hamiltonian, energy_budget: float
) -> float:
    """Factor k with sup Tr[H_out Φ(ρ)] = k * budget over feasible inputs.

    Computed through the one-dimensional dual of the linear program, which is
    exact in finite dimension; k = 1 for the identity with matching
    Hamiltonians whenever the budget is attainable.
    """
    sup = output_energy_sup(channel, h_in, h_out, energy_budget)
    return sup.value / energy_budget


class _EnsembleAscent:
    """Holevo-quantity ascent over pure-state ensembles with an energy cap."""

    def __init__(self, channel: Channel, h_in: Hamiltonian, budget: float, size: int):
        self.channel = channel
        self.h = h_in.matrix
        self.tau0 = h_in.eigenbasis[:, 0]
        self.budget = budget
        self.size = size
        self.d = channel.in_dim

    def _project(self, psis: np.ndarray, probs: np.ndarray) -> np.ndarray:
        """Mix every state toward the ground direction until the average
        input satisfies the budget; phases are aligned so mixing is smooth."""
        def avg_energy(states):
            rho = np.einsum("k,ki,kj->ij", probs, states, states.conj())
            return float(np.trace(self.h @ rho).real)

        if avg_energy(psis) <= self.budget:
            return psis
        overlaps = psis @ self.tau0.conj()
        mags = np.abs(overlaps)
        phases = np.where(mags > 1e-12, overlaps / np.where(mags > 1e-12, mags, 1.0), 1.0)
        ground = phases[:, None] * self.tau0[None, :]
        lo, hi = 0.0, 1.0
        mixed = ground
        for _ in range(100):
            s = 0.5 * (lo + hi)
            mixed = (1.0 - s) * psis + s * ground
            mixed = mixed / np.linalg.norm(mixed, axis=1, keepdims=True)
            e = avg_energy(mixed)
            if e > self.budget:
                lo = s
            else:
                hi = s
                if e >= self.budget - 1e-12 * max(1.0, self.budget):
                    return mixed
        mixed = (1.0 - hi) * psis + hi * ground
        return mixed / np.linalg.norm(mixed, axis=1, keepdims=True)

    def value(self, logits: np.ndarray, psis: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        probs = np.exp(logits - logits.max())
        probs /= probs.sum()
        psis = psis / np.linalg.norm(psis, axis=1, keepdims=True)
        psis = self._project(psis, probs)
        outs = np.stack([apply_channel(self.channel, np.outer(p, p.conj())) for p in psis])
        avg = np.einsum("k,kab->ab", probs, outs)
        chi = _entropy_nd(avg) - float(
            sum(p * _entropy_nd(o) for p, o in zip(probs, outs))
        )
        return chi, probs, psis

    def value_and_grads(self, logits, psis):
        probs = np.exp(logits - logits.max())
        probs /= probs.sum()
        psis = psis / np.linalg.norm(psis, axis=1, keepdims=True)
        psis = self._project(psis, probs)
        outs = np.stack([apply_channel(self.channel, np.outer(p, p.conj())) for p in psis])
        avg = np.einsum("k,kab->ab", probs, outs)

        def safe_log(m):
            w, v = np.linalg.eigh(m)
            return (v * np.log(np.clip(w, EIG_FLOOR, None))) @ v.conj().T

        log_avg = safe_log(avg)
        chi = _entropy_nd(avg) - float(sum(p * _entropy_nd(o) for p, o in zip(probs, outs)))
        # state gradients: 2 p_k Φ*(ln ρ_k - ln ρ̄) ψ_k
        grad_psis = np.zeros_like(psis)
        for k in range(self.size):
            diff = safe_log(outs[k]) - log_avg
            back = np.zeros((self.d, self.d), dtype=np.complex128)
            for op in self.channel.kraus:
                back += op.conj().T @ diff @ op
            grad_psis[k] = 2.0 * probs[k] * (back @ psis[k])
        # probability gradients through the softmax
        dchi = np.array(
            [
                -float(np.trace(outs[k] @ log_avg).real) - _entropy_nd(outs[k])
                for k in range(self.size)
            ]
        )
        grad_logits = probs * (dchi - float(probs @ dchi))
        return chi, probs, psis, grad_logits, grad_psis


def holevo_capacity_estimate(
    channel: Channel,
    h_in: Hamiltonian,
    energy_budget: float,
    ensemble_size: int | None = None,
    restarts: int = 8,
    seed: int = 0,
    max_iter: int = 2000,
) -> float:
    """Lower estimate of the one-shot Holevo capacity at an input energy cap.

    Ascends χ of the output ensemble over pure-state input ensembles whose
    average state satisfies Tr[Hρ̄] <= budget. Heuristic lower bound only;
    treat the result as achievable, not optimal. Restart 0 starts from the
    energy eigenbasis with near-capacity-achieving weights, the rest are
    random draws keyed by (seed, restart).
    """
    if energy_budget <= h_in.ground_energy:
        raise InfeasibleProblemError(
            f"energy budget {energy_budget} must exceed the ground energy "
            f"{h_in.ground_energy}"
        )
    d = channel.in_dim
    size = d if ensemble_size is None else int(ensemble_size)
    if size < 1:
        raise ValueError("ensemble size must be at least 1")
    problem = _EnsembleAscent(channel, h_in, energy_budget, size)

    def eigen_start():
        ev = h_in.eigenvalues
        idx = np.arange(size) % d
        cols = h_in.eigenbasis.T[idx].copy()
        mean = float(ev.mean())
        if energy_budget >= mean:
            logits = np.zeros(size)
        else:
            lam = solve_gibbs(h_in, energy_budget).lam
            logits = -lam * ev[idx]
        return logits, cols.astype(np.complex128)

    best = 0.0
    for r in range(restarts):
        if r == 0:
            logits, psis = eigen_start()
        else:
            rng = np.random.default_rng([int(seed), r])
            logits = 0.3 * rng.standard_normal(size)
            psis = rng.standard_normal((size, d)) + 1j * rng.standard_normal((size, d))
            psis /= np.linalg.norm(psis, axis=1, keepdims=True)
        f, probs, proj = problem.value(logits, psis)
        alpha = 0.25
        history = [f]
        for _ in range(max_iter):
            f_cur, probs, proj, g_logits, g_psis = problem.value_and_grads(logits, psis)
            f = max(f, f_cur)
            scale = max(np.linalg.norm(g_logits), np.max(np.linalg.norm(g_psis, axis=1)), 1e-30)
            moved = False
            while alpha >= 1e-12:
                cand_logits = logits + alpha * g_logits / scale
                cand_psis = psis + alpha * g_psis / scale
                fc, _, _ = problem.value(cand_logits, cand_psis)
                if fc > f:
                    moved = True
                    break
                alpha *= 0.5
            if not moved:
                break
            logits, psis, f = cand_logits, cand_psis, fc
            alpha = min(alpha * 1.3, 8.0)
            history.append(f)
            if len(history) > 20 and f - history[-21] <= 1e-9 * max(1.0, f):
                break
        best = max(best, f)
    return best
