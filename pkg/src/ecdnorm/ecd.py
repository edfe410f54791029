"""Energy-constrained diamond norm brackets.

The quantity of interest is

    sup ||(Θ ⊗ id_R)(|ψ⟩⟨ψ|)||_1   over unit ψ on A⊗R with <ψ|H⊗I|ψ> <= E.

A multi-start projected ascent produces a certified achievable lower value
together with its witness; the upper side of the bracket is the cheapest of
several rigorous certificates (Choi-based diamond bound, the generic 2 for
channel differences, tail-truncation ladders, and a Stinespring-alignment
bound for channel differences). Estimates never exceed certificates, so the
pair brackets the true norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import (
    Hamiltonian,
    HermitianPreservingMap,
    DensityOperator,
    InfeasibleProblemError,
    hermitian_abs,
    partial_trace,
    tensor,
    trace_norm,
)
from .optim import (
    MAX_ITER,
    EnergyCap,
    TraceNormObjective,
    energy_constrained_sup,
    multistart_ascend,
    normalize,
    start_vectors,
)

ZERO_MAP_TOL = 1e-14


@dataclass(frozen=True)
class EcdProblem:
    """One energy-constrained norm evaluation.

    r_dim is the reference-space dimension; by default it matches the input
    dimension, which is enough to attain the supremum.
    """

    map: HermitianPreservingMap
    h_in: Hamiltonian
    energy: float
    r_dim: int | None = None

    def __post_init__(self):
        if self.map.in_dim != self.h_in.dimension:
            raise ValueError("map input dimension does not match the Hamiltonian")
        if self.energy <= self.h_in.ground_energy:
            raise InfeasibleProblemError(
                f"energy budget {self.energy} must exceed the ground energy "
                f"{self.h_in.ground_energy}"
            )
        if self.r_dim is None:
            object.__setattr__(self, "r_dim", self.map.in_dim)
        elif self.r_dim < 1:
            raise ValueError("reference dimension must be at least 1")


@dataclass(frozen=True)
class EcdEstimate:
    """Bracket [lower, upper] with the witness attaining the lower value."""

    lower: float
    upper: float
    witness: np.ndarray
    witness_energy: float

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper + 1e-9:
            raise ValueError(f"invalid bracket [{self.lower}, {self.upper}]")


def _objective(problem: EcdProblem) -> TraceNormObjective:
    return TraceNormObjective(
        problem.map.choi, problem.map.in_dim, problem.map.out_dim, problem.r_dim
    )


def ecd_objective(problem: EcdProblem, psi) -> float:
    """Trace norm of (Θ ⊗ id_R) applied to the pure state given by ψ."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.size != problem.map.in_dim * problem.r_dim:
        raise ValueError("witness length does not match in_dim * r_dim")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("witness must be a unit vector")
    cap = EnergyCap(problem.h_in, problem.r_dim, problem.energy)
    if cap.energy(psi) > problem.energy + 1e-9:
        raise ValueError("witness violates the energy budget")
    return _objective(problem).value(psi)


def diamond_upper_bound(the_map: HermitianPreservingMap) -> float:
    """Certified diamond-norm bound: ||Tr_out |C|||_∞ over the Choi matrix C.

    This dominates the unconstrained norm, hence every energy-constrained
    value as well. It is not clamped at 2 even for channel differences.
    """
    red = partial_trace(hermitian_abs(the_map.choi), (the_map.out_dim, the_map.in_dim), keep=1)
    return float(np.linalg.eigvalsh(red)[-1])


def _compressed_choi(the_map: HermitianPreservingMap, isometry: np.ndarray) -> np.ndarray:
    """Choi matrix of Θ restricted to the subspace spanned by the isometry."""
    d_in, n = isometry.shape
    c4 = the_map.choi.reshape(the_map.out_dim, d_in, the_map.out_dim, d_in)
    small = np.einsum("ia,xiyj,jb->xayb", isometry, c4, isometry.conj(), optimize=True)
    return small.reshape(the_map.out_dim * n, the_map.out_dim * n)


def _compressed_map(the_map: HermitianPreservingMap, isometry: np.ndarray) -> HermitianPreservingMap:
    c = _compressed_choi(the_map, isometry)
    c = 0.5 * (c + c.conj().T)
    return HermitianPreservingMap(c, isometry.shape[1], the_map.out_dim)


def _aligned_stinespring_bound(
    kraus_pair, hamiltonian: Hamiltonian, energy_budget: float
) -> float:
    """2 sqrt(sup Tr[Δρ]) with Δ = Σ_k (A_k - B_k)†(A_k - B_k).

    Aligning the two Kraus families index by index (zero-padded) realizes
    joint Stinespring isometries V, W with a common environment, and
    ||Φ(ρ) - Ψ(ρ)||_1 <= 2 ||(V - W)√ρ||_2 gives the certificate. The
    supremum over energy-bounded inputs is exact via its one-dimensional
    dual. Any alignment certifies; the given ordering is used as is.
    """
    ka, kb = kraus_pair
    n = max(len(ka), len(kb))
    out_dim, in_dim = ka[0].shape if ka else kb[0].shape
    zero = np.zeros((out_dim, in_dim), dtype=np.complex128)
    delta = np.zeros((in_dim, in_dim), dtype=np.complex128)
    for i in range(n):
        a = ka[i] if i < len(ka) else zero
        b = kb[i] if i < len(kb) else zero
        d = a - b
        delta += d.conj().T @ d
    sup = energy_constrained_sup(delta, hamiltonian, energy_budget).value
    return 2.0 * math.sqrt(max(sup, 0.0))


def _truncation_ladder_bound(
    problem: EcdProblem, global_bound: float, best_so_far: float
) -> float:
    """min over n of [diamond bound of the n-level compression + tail cost].

    For P the projector on the n lowest levels and r = E/E_n the largest
    possible weight outside it, ||ρ - PρP||_1 <= 2 sqrt(r) + r, so the norm
    is at most the subspace value plus global_bound * (2 sqrt(r) + r).
    """
    h = problem.h_in
    ev = h.eigenvalues
    d = h.dimension
    best = best_so_far
    for n in range(d - 1, 0, -1):
        level = float(ev[n])
        if level <= 0.0:
            break  # no tail-weight control from zero-energy levels
        r = min(1.0, problem.energy / level)
        tail = global_bound * (2.0 * math.sqrt(r) + r)
        if tail >= best:
            break  # tail cost only grows as n shrinks
        cand = diamond_upper_bound(_compressed_map(problem.map, h.lowest_levels(n))) + tail
        best = min(best, cand)
    return best


def estimate_ecd_norm(
    problem: EcdProblem,
    restarts: int = 32,
    seed: int = 0,
    extra_starts=None,
    max_iter: int = MAX_ITER,
) -> EcdEstimate:
    """Bracket the energy-constrained norm of the map in the problem.

    The lower value is the best objective over `restarts` deterministic
    multi-start ascents (plus any extra_starts, e.g. witnesses from smaller
    budgets); the upper value is the minimum over the available rigorous
    certificates. Restart r draws its start from a generator keyed by
    (seed, r), so results do not depend on scheduling order.
    """
    the_map = problem.map
    cap = EnergyCap(problem.h_in, problem.r_dim, problem.energy)
    if float(np.max(np.abs(the_map.choi))) < ZERO_MAP_TOL:
        witness = cap(start_vectors(the_map.in_dim, problem.r_dim, 1, seed)[0])
        return EcdEstimate(0.0, 0.0, witness, cap.energy(witness))
    lower, witness = multistart_ascend(
        _objective(problem),
        the_map.in_dim,
        problem.r_dim,
        restarts,
        seed,
        project=cap,
        extra_starts=extra_starts,
        max_iter=max_iter,
    )
    dub = diamond_upper_bound(the_map)
    global_bound = min(dub, 2.0) if the_map.kraus_pair is not None else dub
    upper = global_bound
    if the_map.kraus_pair is not None:
        upper = min(
            upper,
            _aligned_stinespring_bound(the_map.kraus_pair, problem.h_in, problem.energy),
        )
    upper = _truncation_ladder_bound(problem, global_bound, upper)
    upper = max(upper, lower)
    return EcdEstimate(lower, upper, witness, cap.energy(witness))


@dataclass(frozen=True)
class DiamondEstimate:
    """Unconstrained diamond-norm bracket."""

    lower: float
    upper: float
    witness: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper + 1e-9:
            raise ValueError(f"invalid bracket [{self.lower}, {self.upper}]")


def estimate_diamond_norm(
    the_map: HermitianPreservingMap,
    r_dim: int | None = None,
    restarts: int = 32,
    seed: int = 0,
    extra_starts=None,
    max_iter: int = MAX_ITER,
) -> DiamondEstimate:
    """Same ascent as the constrained estimator, with the energy cap removed."""
    r_dim = the_map.in_dim if r_dim is None else int(r_dim)
    if float(np.max(np.abs(the_map.choi))) < ZERO_MAP_TOL:
        return DiamondEstimate(0.0, 0.0, start_vectors(the_map.in_dim, r_dim, 1, seed)[0])
    objective = TraceNormObjective(the_map.choi, the_map.in_dim, the_map.out_dim, r_dim)
    lower, witness = multistart_ascend(
        objective,
        the_map.in_dim,
        r_dim,
        restarts,
        seed,
        extra_starts=extra_starts,
        max_iter=max_iter,
    )
    upper = diamond_upper_bound(the_map)
    if the_map.kraus_pair is not None:
        upper = min(upper, 2.0)
    upper = max(upper, lower)
    return DiamondEstimate(lower, upper, witness)


def subspace_seminorm(
    the_map: HermitianPreservingMap,
    h_in: Hamiltonian,
    n: int,
    r_dim: int | None = None,
    restarts: int = 32,
    seed: int = 0,
    max_iter: int = MAX_ITER,
) -> float:
    """Estimate the norm restricted to inputs on the n lowest energy levels.

    A reference of dimension n suffices because feasible inputs have rank at
    most n. Compression happens at the Choi level, so the estimate reuses the
    unconstrained machinery on an n-dimensional input space.
    """
    if h_in.dimension != the_map.in_dim:
        raise ValueError("Hamiltonian dimension does not match the map input")
    small = _compressed_map(the_map, h_in.lowest_levels(n))
    r_dim = n if r_dim is None else int(r_dim)
    est = estimate_diamond_norm(small, r_dim=r_dim, restarts=restarts, seed=seed, max_iter=max_iter)
    return est.lower


@dataclass(frozen=True)
class StateTruncation:
    """Outcome of projecting a bipartite state onto low input levels.

    tail_weight is the probability outside the retained levels; the trace
    distance to the renormalized truncation never exceeds bound = 4√tail.
    """

    tail_weight: float
    bound: float
    trace_distance: float
    truncated_state: DensityOperator


def state_truncation_bound(rho: DensityOperator, h_in: Hamiltonian, n: int) -> StateTruncation:
    d = h_in.dimension
    if rho.dimension % d != 0:
        raise ValueError("state dimension is not a multiple of the Hamiltonian dimension")
    r_dim = rho.dimension // d
    v = h_in.lowest_levels(n)
    proj = tensor(v @ v.conj().T, np.eye(r_dim))
    kept = float(np.trace(proj @ rho.matrix).real)
    tail = min(1.0, max(0.0, 1.0 - kept))
    if kept <= 1e-12:
        raise ValueError("state carries no weight on the retained levels")
    compressed = proj @ rho.matrix @ proj
    truncated = DensityOperator(0.5 * (compressed + compressed.conj().T) / kept)
    dist = trace_norm(rho.matrix - truncated.matrix)
    bound = 4.0 * math.sqrt(tail)
    if dist > bound + 1e-9:
        raise RuntimeError("truncation distance exceeded its bound; numerical failure")
    return StateTruncation(tail, bound, dist, truncated)


def truncation_norm_bound(
    the_map: HermitianPreservingMap,
    h_in: Hamiltonian,
    energy_budget: float,
    n: int,
    restarts: int = 32,
    seed: int = 0,
    max_iter: int = MAX_ITER,
) -> float:
    """Subspace seminorm at n levels plus the tail penalty 8 sqrt(E/E_n).

    E_n is the first energy level outside the retained span (the top level
    when n covers the whole space, where the penalty is vacuous but keeps the
    expression total). Dominates the energy-constrained estimate whenever the
    seminorm estimate has converged.
    """
    d = h_in.dimension
    if not 1 <= n <= d:
        raise ValueError(f"level count must lie in 1..{d}")
    level = float(h_in.eigenvalues[n] if n < d else h_in.eigenvalues[-1])
    if level <= 0.0:
        raise ValueError("tail penalty needs a positive energy at the first dropped level")
    q = subspace_seminorm(the_map, h_in, n, restarts=restarts, seed=seed, max_iter=max_iter)
    return q + 8.0 * math.sqrt(energy_budget / level)
