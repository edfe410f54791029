"""Shared numerical machinery.

Projected gradient ascent on the unit sphere with an optional mean-energy
cap, deterministic multi-starts, a hand-rolled golden-section search, and the
one-dimensional dual for maximizing a linear functional over energy-bounded
states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .operators import Hamiltonian, InfeasibleProblemError

INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0
MAX_ITER = 2000
STALL_WINDOW = 20
STALL_REL_TOL = 1e-8


def normalize(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def golden_section_min(
    f: Callable[[float], float], a: float, b: float, tol: float, max_iter: int = 200
) -> tuple[float, float]:
    """Minimize a unimodal scalar function on [a, b].

    Returns the best evaluated point, which is at least as good as both
    endpoints. tol is the absolute interval width at which to stop.
    """
    xs = [a, b]
    fs = [f(a), f(b)]
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    xs += [c, d]
    fs += [fc, fd]
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            xs.append(c)
            fs.append(fc)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            xs.append(d)
            fs.append(fd)
    i = int(np.argmin(fs))
    return xs[i], fs[i]


class EnergyCap:
    """Projection onto {ψ on A⊗R : <ψ|(H ⊗ I)|ψ> <= budget, |ψ| = 1}.

    Infeasible vectors are mixed toward the lowest-energy product direction
    compatible with their own reference profile; the mixing weight is found
    by bisection until the constraint is active.
    """

    def __init__(self, hamiltonian: Hamiltonian, r_dim: int, budget: float):
        if budget <= hamiltonian.ground_energy:
            raise InfeasibleProblemError(
                f"energy budget {budget} must exceed the ground energy "
                f"{hamiltonian.ground_energy}"
            )
        self._h = hamiltonian.matrix
        self._tau0 = hamiltonian.eigenbasis[:, 0]
        self._dim = hamiltonian.dimension
        self._r_dim = int(r_dim)
        self._h_kron = None
        self.budget = float(budget)

    def kron_matrix(self) -> np.ndarray:
        """Dense H ⊗ I_R, built lazily for the capped surrogate maximization."""
        if self._h_kron is None:
            self._h_kron = np.kron(self._h, np.eye(self._r_dim))
        return self._h_kron

    def energy(self, psi: np.ndarray) -> float:
        m = psi.reshape(self._dim, self._r_dim)
        return float(np.einsum("ir,ij,jr->", m.conj(), self._h, m).real)

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        e = self.energy(psi)
        if e <= self.budget:
            return psi
        m = psi.reshape(self._dim, self._r_dim)
        rvec = self._tau0.conj() @ m
        rn = np.linalg.norm(rvec)
        if rn < 1e-12:
            rvec = np.zeros(self._r_dim, dtype=np.complex128)
            rvec[0] = 1.0
        else:
            rvec = rvec / rn
        ground = np.outer(self._tau0, rvec).reshape(-1)
        lo, hi = 0.0, 1.0  # energy(lo) > budget, energy(hi) = ground < budget
        cand = ground
        for _ in range(100):
            s = 0.5 * (lo + hi)
            cand = normalize((1.0 - s) * psi + s * ground)
            e = self.energy(cand)
            if e > self.budget:
                lo = s
            else:
                hi = s
                if e >= self.budget - 1e-12 * max(1.0, self.budget):
                    return cand
        return normalize((1.0 - hi) * psi + hi * ground)


class TraceNormObjective:
    """ψ -> ||(Θ ⊗ id_R)(|ψ⟩⟨ψ|)||_1 evaluated through the Choi matrix.

    For ψ with coefficient matrix M (input × reference, row-major) the output
    equals (I ⊗ Mᵀ) C (I ⊗ M̄), a congruence with the Choi matrix C of Θ.

    `value_and_grad` stores the sign matrix S of the last output, which makes
    the linearization ψ' -> Tr[S X(ψ')] available through `sign_value`. That
    linearization never exceeds the true objective (S has operator norm one),
    so improvements certified with it hold for the objective as well, without
    paying for an eigendecomposition per trial point.
    """

    def __init__(self, choi: np.ndarray, in_dim: int, out_dim: int, r_dim: int):
        self.in_dim = int(in_dim)
        self.out_dim = int(out_dim)
        self.r_dim = int(r_dim)
        self._c4 = np.ascontiguousarray(choi.reshape(out_dim, in_dim, out_dim, in_dim))
        w, v = np.linalg.eigh(choi)
        keep = np.abs(w) > 1e-14 * max(float(np.abs(w).max(initial=0.0)), 1e-300)
        wk, vk = w[keep], v[:, keep]
        self._rank = int(wk.size)
        self._sigma = np.where(wk >= 0.0, 1.0, -1.0)
        # choi = F diag(sigma) F† with F tall-skinny; X(psi) inherits the rank
        self._f3 = np.ascontiguousarray(
            (vk * np.sqrt(np.abs(wk))).reshape(out_dim, in_dim, self._rank)
        )
        self._abs_w = np.abs(wk)
        self._abs_v = vk
        # adjoint applied to the identity, for the kernel part of sign matrices
        self._adj_id = np.ascontiguousarray(np.einsum("aiaj->ij", self._c4).T)
        self._use_factor = self._rank <= (out_dim * r_dim) // 2
        self._s4 = None
        self._s_extra = None
        self._shift = None

    def output(self, psi: np.ndarray) -> np.ndarray:
        m = psi.reshape(self.in_dim, self.r_dim)
        out4 = np.einsum("ir,aibj,js->arbs", m, self._c4, m.conj(), optimize=True)
        n = self.out_dim * self.r_dim
        x = out4.reshape(n, n)
        return 0.5 * (x + x.conj().T)

    def _factor(self, psi: np.ndarray) -> np.ndarray:
        """Y with X(psi) = Y diag(sigma) Y†, shape (out*r, rank)."""
        m = psi.reshape(self.in_dim, self.r_dim)
        y = np.tensordot(self._f3, m, axes=([1], [0]))  # aic,ir -> acr
        return y.transpose(0, 2, 1).reshape(self.out_dim * self.r_dim, self._rank)

    def value(self, psi: np.ndarray) -> float:
        if self._use_factor:
            if self._rank == 0:
                return 0.0
            r = np.linalg.qr(self._factor(psi), mode="r")
            small = (r * self._sigma) @ r.conj().T
            return float(np.abs(np.linalg.eigvalsh(small)).sum())
        return float(np.abs(np.linalg.eigvalsh(self.output(psi))).sum())

    def value_and_grad(self, psi: np.ndarray) -> tuple[float, np.ndarray]:
        dim = self.out_dim * self.r_dim
        if self._use_factor:
            if self._rank == 0:
                self._s4 = np.zeros((self.out_dim, self.r_dim) * 2)
                self._s_extra = None
                return 0.0, np.zeros_like(psi)
            q, r = np.linalg.qr(self._factor(psi))
            w, v = np.linalg.eigh((r * self._sigma) @ r.conj().T)
            value = float(np.abs(w).sum())
            # near-zero eigenvalues count as +; snapping them stops the sign
            # matrix from jittering between iterations
            signs = np.where(w >= -1e-9 * np.abs(w).max(initial=0.0), 1.0, -1.0)
            # sign matrix = Q(V signs V† - I)Q† plus the identity; the identity
            # part goes through the adjoint separately
            b = (v * signs) @ v.conj().T - np.eye(self._rank)
            s = (q @ b) @ q.conj().T
            self._s_extra = self._adj_id
        else:
            x = self.output(psi)
            w, v = np.linalg.eigh(x)
            value = float(np.abs(w).sum())
            signs = np.where(w >= -1e-9 * np.abs(w).max(initial=0.0), 1.0, -1.0)
            s = (v * signs) @ v.conj().T
            self._s_extra = None
        self._s4 = np.ascontiguousarray(
            s.reshape(self.out_dim, self.r_dim, self.out_dim, self.r_dim)
        )
        return value, 2.0 * self.apply_sign(psi)

    def apply_sign(self, psi: np.ndarray) -> np.ndarray:
        """Apply the adjoint-of-map contraction with the stored sign matrix."""
        m = psi.reshape(self.in_dim, self.r_dim)
        t = np.tensordot(self._s4, m, axes=([3], [1]))  # ysxr,ir -> ysxi
        grad = np.tensordot(t, self._c4, axes=([0, 2, 3], [2, 0, 1])).T  # -> js
        if self._s_extra is not None:
            grad = grad + self._s_extra @ m
        return grad.reshape(-1)

    def sign_value(self, psi: np.ndarray) -> float:
        return float(np.vdot(psi, self.apply_sign(psi)).real)

    @property
    def sign_shift(self) -> float:
        """Bound on |Tr[S X(ψ)]| over unit ψ and any sign matrix S."""
        if self._shift is None:
            abs4 = ((self._abs_v * self._abs_w) @ self._abs_v.conj().T).reshape(
                self._c4.shape
            )
            margin = np.einsum("aiaj->ij", abs4)
            self._shift = float(np.linalg.eigvalsh(margin)[-1])
        return self._shift


LANCZOS_STEPS = 24


def _lanczos_top(matvec, start: np.ndarray, iters: int) -> np.ndarray | None:
    """Approximate top eigenvector of a Hermitian operator given by matvec.

    Krylov space grown from `start` with full reorthogonalization; fine for
    the moderate dimensions used here. Returns None when the space degenerates
    immediately (start already invariant).
    """
    dim = start.size
    iters = min(iters, dim)
    basis = np.empty((iters, dim), dtype=np.complex128)
    basis[0] = start / np.linalg.norm(start)
    alphas: list[float] = []
    betas: list[float] = []
    k = 0
    for j in range(iters):
        w = matvec(basis[j])
        alphas.append(float(np.vdot(basis[j], w).real))
        k = j + 1
        if k == iters:
            break
        w = w - np.conjugate(basis[:k] @ w.conj()) @ basis[:k]
        w = w - np.conjugate(basis[:k] @ w.conj()) @ basis[:k]
        b = float(np.linalg.norm(w))
        if b <= 1e-13:
            break
        betas.append(b)
        basis[k] = w / b
    if k == 1 and not betas:
        return None
    tri = np.diag(alphas[:k])
    for j, b in enumerate(betas[: k - 1]):
        tri[j, j + 1] = tri[j + 1, j] = b
    ritz = np.linalg.eigh(tri)[1][:, -1]
    top = ritz @ basis[:k]
    return top / np.linalg.norm(top)


def _linearized_proposal(objective, psi, g_psi, prev, project):
    """Best surrogate vector over span{psi, Lanczos top direction, prev}.

    The span maximization is exact (a 3x3 eigenproblem) and reuses the
    already-computed matvec results, which avoids the slow zigzag of jumping
    all the way to the linearization's top eigenvector each round.
    """
    cand = _lanczos_top(objective.apply_sign, psi, LANCZOS_STEPS)
    if cand is None:
        return None
    basis = [psi]
    actions = [g_psi]
    for v in (cand, prev):
        if v is None:
            continue
        gv = objective.apply_sign(v)
        coeffs = [np.vdot(b, v) for b in basis]
        w = v - sum(c * b for c, b in zip(coeffs, basis))
        nrm = np.linalg.norm(w)
        if nrm <= 1e-8:
            continue
        basis.append(w / nrm)
        actions.append((gv - sum(c * a for c, a in zip(coeffs, actions))) / nrm)
    k = len(basis)
    h = np.empty((k, k), dtype=np.complex128)
    for i in range(k):
        for j in range(k):
            h[i, j] = np.vdot(basis[i], actions[j])
    h = 0.5 * (h + h.conj().T)
    top = np.linalg.eigh(h)[1][:, -1]
    out = sum(c * b for c, b in zip(top, basis))
    out = out / np.linalg.norm(out)
    if project is not None:
        out = project(out)
    return out


CAP_PROPOSAL_MAX_DIM = 64


def _capped_proposal(objective, cap, dim: int, mu_hint: float):
    """Exact maximizer of the current sign surrogate under the energy cap.

    The surrogate is a Hermitian quadratic form ψ ↦ ⟨ψ|G|ψ⟩, so its maximum
    over unit vectors with ⟨ψ|(H⊗I)|ψ⟩ ≤ E follows from the one-dimensional
    dual min_{μ≥0} λmax(G − μH⊗I) + μE. When the budget lands strictly inside
    a (near-)degenerate top eigenspace, a two-level superposition inside that
    space attains it; the relative phase is chosen to favor G. Only worth the
    dense eigensolves at small dimension, hence the gate in `ascend`.
    """
    cols = np.eye(dim, dtype=np.complex128)
    g = np.column_stack([objective.apply_sign(cols[:, j]) for j in range(dim)])
    g = 0.5 * (g + g.conj().T)
    h = cap.kron_matrix()
    budget = cap.budget

    def phi(mu: float) -> float:
        return float(np.linalg.eigvalsh(g - mu * h)[-1]) + mu * budget

    hi = max(1.0, 4.0 * mu_hint)
    for _ in range(60):
        if phi(2.0 * hi) >= phi(hi):
            break
        hi *= 2.0
    hi *= 2.0
    mu, _ = golden_section_min(phi, 0.0, hi, tol=1e-8 * max(1.0, hi))
    w, v = np.linalg.eigh(g - mu * h)
    cands = []
    top = v[:, -1]
    if cap.energy(top) <= budget + 1e-12:
        cands.append(top)
    for k in range(2, min(dim, 8) + 1):
        # rediagonalize the energy inside the top-k space, then mix the
        # extremal directions so the budget is met with equality
        t = v[:, dim - k:]
        ht = t.conj().T @ h @ t
        he, hv = np.linalg.eigh(0.5 * (ht + ht.conj().T))
        e_lo, e_hi = float(he[0]), float(he[-1])
        if e_lo > budget:
            continue
        u = t @ hv
        if e_hi <= budget:
            cands.append(u[:, -1])
            break
        alpha = (e_hi - budget) / max(e_hi - e_lo, 1e-30)
        lo_dir, hi_dir = u[:, 0], u[:, -1]
        cross = complex(hi_dir.conj() @ g @ lo_dir)
        phase = 1.0 if abs(cross) < 1e-30 else cross / abs(cross)
        mix = np.sqrt(alpha) * lo_dir + np.sqrt(1.0 - alpha) * phase * hi_dir
        cands.append(mix / np.linalg.norm(mix))
        break
    if not cands:
        return None, mu
    vals = [float((c.conj() @ g @ c).real) for c in cands]
    best = cands[int(np.argmax(vals))]
    if cap.energy(best) > budget:
        best = cap(best)
    return best, mu


def ascend(
    objective,
    start: np.ndarray,
    project: Callable[[np.ndarray], np.ndarray] | None = None,
    max_iter: int = MAX_ITER,
    window: int = STALL_WINDOW,
    rel_tol: float = STALL_REL_TOL,
) -> tuple[float, np.ndarray]:
    """Monotone ascent on the unit sphere.

    Each iteration first proposes a jump toward the top eigenvector of the
    current linearization (Lanczos), falling back to a backtracking gradient
    step. Candidates are screened with the linearized value, which
    lower-bounds the true objective, so accepted steps always improve and
    only one eigendecomposition of the output is paid per accepted
    iteration. Stops when the relative improvement over `window` iterations
    drops below rel_tol, when backtracking stalls, or at max_iter.
    """
    psi = normalize(np.asarray(start, dtype=np.complex128).reshape(-1))
    if project is not None:
        psi = project(psi)
    use_cap = (
        project is not None
        and hasattr(project, "kron_matrix")
        and psi.size <= CAP_PROPOSAL_MAX_DIM
    )
    mu_hint = 0.0
    f, grad = objective.value_and_grad(psi)
    prev = None
    alpha = 0.25
    history = [f]
    for _ in range(max_iter):
        cand = None
        if use_cap:
            cand, mu_hint = _capped_proposal(objective, project, psi.size, mu_hint)
            if cand is not None and objective.sign_value(cand) <= f:
                cand = None
        if cand is None:
            cand = _linearized_proposal(objective, psi, 0.5 * grad, prev, project)
        accepted = cand is not None and objective.sign_value(cand) > f
        if not accepted:
            tang = grad - np.vdot(psi, grad).real * psi
            if np.linalg.norm(tang) <= 1e-13 * max(1.0, abs(f)):
                break
            while alpha >= 1e-13:
                cand = normalize(psi + alpha * tang)
                if project is not None:
                    cand = project(cand)
                if objective.sign_value(cand) > f:
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                break
            alpha = min(alpha * 1.3, 32.0)
        prev = psi
        psi = cand
        f, grad = objective.value_and_grad(psi)
        history.append(f)
        if len(history) > window and f - history[-window - 1] <= rel_tol * max(1.0, abs(f)):
            break
    return f, psi


def start_vectors(
    in_dim: int,
    r_dim: int,
    restarts: int,
    seed: int,
    extra_starts: Iterable[np.ndarray] | None = None,
) -> list[np.ndarray]:
    """Deterministic multi-start seeds.

    Start 0 is the balanced entangled vector; the rest are complex Gaussian
    draws from per-restart generators keyed by (seed, restart index), so the
    set does not depend on evaluation order.
    """
    starts: list[np.ndarray] = []
    k = min(in_dim, r_dim)
    m0 = np.zeros((in_dim, r_dim), dtype=np.complex128)
    m0[np.arange(k), np.arange(k)] = 1.0 / np.sqrt(k)
    starts.append(m0.reshape(-1))
    for r in range(1, max(1, restarts)):
        rng = np.random.default_rng([int(seed), r])
        z = rng.standard_normal(in_dim * r_dim) + 1j * rng.standard_normal(in_dim * r_dim)
        starts.append(normalize(z))
    if extra_starts is not None:
        starts.extend(normalize(np.asarray(v, dtype=np.complex128).reshape(-1)) for v in extra_starts)
    return starts


def multistart_ascend(
    objective,
    in_dim: int,
    r_dim: int,
    restarts: int,
    seed: int,
    project: Callable[[np.ndarray], np.ndarray] | None = None,
    extra_starts: Iterable[np.ndarray] | None = None,
    max_iter: int = MAX_ITER,
) -> tuple[float, np.ndarray]:
    best_f = -np.inf
    best_psi = None
    for start in start_vectors(in_dim, r_dim, restarts, seed, extra_starts):
        f, psi = ascend(objective, start, project=project, max_iter=max_iter)
        if f > best_f:
            best_f, best_psi = f, psi
    return best_f, best_psi


@dataclass(frozen=True)
class EnergyConstrainedSup:
    """Exact value of max Tr[Mρ] over states with Tr[Hρ] <= budget.

    value comes from the dual min_{μ>=0} λmax(M - μH) + μ·budget, which is
    tight here; state is a feasible primal certificate and attained its
    objective value, so value - attained is the (tiny) reconstruction gap.
    """

    value: float
    state: np.ndarray
    attained: float
    multiplier: float


def energy_constrained_sup(
    m: np.ndarray, hamiltonian: Hamiltonian, budget: float
) -> EnergyConstrainedSup:
    if budget <= hamiltonian.ground_energy:
        raise InfeasibleProblemError(
            f"energy budget {budget} must exceed the ground energy "
            f"{hamiltonian.ground_energy}"
        )
    h = hamiltonian.matrix
    m = 0.5 * (m + m.conj().T)

    def phi(mu: float) -> float:
        return float(np.linalg.eigvalsh(m - mu * h)[-1]) + mu * budget

    hi = 1.0
    for _ in range(80):
        if phi(2.0 * hi) >= phi(hi):
            break
        hi *= 2.0
    hi *= 2.0
    mu, _ = golden_section_min(phi, 0.0, hi, tol=1e-12 * max(1.0, hi))
    value = phi(mu)

    # primal certificate: rediagonalize H inside the top eigenspace of M - μH
    # so that degenerate eigenspaces expose their energy-extremal directions
    w, v = np.linalg.eigh(m - mu * h)
    top = np.flatnonzero(w >= w[-1] - max(1e-9, 1e-9 * abs(w[-1])))
    t = v[:, top]
    ht = t.conj().T @ h @ t
    he, hv = np.linalg.eigh(0.5 * (ht + ht.conj().T))
    cols = t @ hv
    e_lo, e_hi = float(he[0]), float(he[-1])
    if e_hi <= budget + 1e-12:
        # whole top space feasible; the highest-energy direction attains most
        x = cols[:, -1]
        state = np.outer(x, x.conj())
    elif e_lo <= budget:
        alpha = (e_hi - budget) / (e_hi - e_lo)
        lo_dir, hi_dir = cols[:, 0], cols[:, -1]
        state = alpha * np.outer(lo_dir, lo_dir.conj()) + (1.0 - alpha) * np.outer(
            hi_dir, hi_dir.conj()
        )
    else:
        # the whole top space violates the budget; mix its lowest-energy
        # direction with the Hamiltonian ground state to regain feasibility
        tau0 = hamiltonian.eigenbasis[:, 0]
        x = cols[:, 0]
        alpha = (e_lo - budget) / (e_lo - hamiltonian.ground_energy)
        state = alpha * np.outer(tau0, tau0.conj()) + (1.0 - alpha) * np.outer(x, x.conj())
    attained = float(np.trace(m @ state).real)
    return EnergyConstrainedSup(value=value, state=state, attained=attained, multiplier=mu)
