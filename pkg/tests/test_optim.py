"""Constrained ascent machinery: line search, energy caps, the trace-norm
objective, and the Lagrangian-dual supremum of quadratic forms."""

import numpy as np
import pytest

from conftest import batch_difference_norms, ginibre_density, haar_vector, random_channel
from ecdnorm import (
    EnergyCap,
    Hamiltonian,
    HermitianPreservingMap,
    TraceNormObjective,
    diamond_upper_bound,
    energy_constrained_sup,
    golden_section_min,
    multistart_ascend,
    start_vectors,
)
from ecdnorm.optim import CAP_PROPOSAL_MAX_DIM, _capped_proposal, normalize


def test_golden_section_quadratic():
    x, fx = golden_section_min(lambda x: (x - 1.3) ** 2 + 0.7, -4.0, 6.0, tol=1e-10)
    assert abs(x - 1.3) < 1e-8
    assert abs(fx - 0.7) < 1e-14


def test_golden_section_endpoint_minimum():
    x, fx = golden_section_min(lambda x: np.exp(x), 2.0, 5.0, tol=1e-9)
    assert abs(x - 2.0) < 1e-6
    assert fx <= np.exp(2.0 + 1e-5)


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize(np.zeros(4, dtype=np.complex128))


def _random_cap(rng, d, r_dim):
    ev = np.sort(rng.uniform(0.0, 3.0, size=d))
    ev[0] = rng.uniform(0.0, 0.2)
    h = Hamiltonian(ev)
    budget = ev[0] + rng.uniform(0.2, 0.8) * (ev.mean() - ev[0])
    return EnergyCap(h, r_dim, budget), h, budget


def test_energy_cap_projection():
    rng = np.random.default_rng(30)
    for d, r in [(3, 1), (4, 2), (5, 3)]:
        cap, _, budget = _random_cap(rng, d, r)
        for _ in range(25):
            psi = haar_vector(rng, d * r)
            out = cap(psi)
            assert abs(np.linalg.norm(out) - 1.0) < 1e-12
            assert cap.energy(out) <= budget + 1e-9
            again = cap(out)
            assert cap.energy(again) <= budget + 1e-9
            # feasible vectors pass through unchanged
            if cap.energy(psi) <= budget:
                np.testing.assert_allclose(out, psi, atol=1e-12)


def test_energy_cap_kron_matrix():
    rng = np.random.default_rng(31)
    cap, h, _ = _random_cap(rng, 4, 3)
    np.testing.assert_allclose(cap.kron_matrix(), np.kron(h.matrix, np.eye(3)), atol=1e-13)


def _difference_objective(rng, d_in, d_out, r_dim, n_kraus=2):
    phi = random_channel(rng, d_in, d_out, n_kraus)
    psi = random_channel(rng, d_in, d_out, n_kraus)
    diff = HermitianPreservingMap.difference(phi, psi)
    obj = TraceNormObjective(diff.choi, d_in, d_out, r_dim)
    return obj, diff, phi, psi


def test_objective_value_matches_direct_kraus_route():
    rng = np.random.default_rng(32)
    for d_in, d_out, r in [(2, 2, 2), (3, 2, 1), (3, 4, 2), (4, 3, 3)]:
        obj, _, phi, psi = _difference_objective(rng, d_in, d_out, r)
        for _ in range(5):
            v = haar_vector(rng, d_in * r)
            mats = v.reshape(1, d_in, r)
            want = batch_difference_norms(phi.kraus, psi.kraus, mats)[0]
            assert abs(obj.value(v) - want) < 1e-9


def test_objective_factor_and_dense_paths_agree():
    rng = np.random.default_rng(33)
    obj, diff, _, _ = _difference_objective(rng, 3, 3, 2)
    dense = TraceNormObjective(diff.choi, 3, 3, 2)
    dense._use_factor = False
    for _ in range(6):
        v = haar_vector(rng, 6)
        assert abs(obj.value(v) - dense.value(v)) < 1e-10
        fa, ga = obj.value_and_grad(v)
        fb, gb = dense.value_and_grad(v)
        assert abs(fa - fb) < 1e-10
        np.testing.assert_allclose(ga, gb, atol=1e-8)


def test_objective_gradient_numerically():
    rng = np.random.default_rng(34)
    obj, _, _, _ = _difference_objective(rng, 3, 2, 2)
    psi = haar_vector(rng, 6)
    f, grad = obj.value_and_grad(psi)
    eps = 1e-6
    for _ in range(6):
        d = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        d /= np.linalg.norm(d)
        fd = (obj.value(psi + eps * d) - obj.value(psi - eps * d)) / (2.0 * eps)
        analytic = float(np.vdot(d, grad).real)
        assert abs(fd - analytic) < 1e-5 * max(1.0, abs(analytic))


def test_sign_surrogate_touches_from_below():
    rng = np.random.default_rng(35)
    obj, _, _, _ = _difference_objective(rng, 3, 3, 2)
    psi = haar_vector(rng, 6)
    f, _ = obj.value_and_grad(psi)
    # equality at the expansion point
    assert abs(obj.sign_value(psi) - f) < 1e-10
    # global underestimate elsewhere
    for _ in range(30):
        v = haar_vector(rng, 6)
        assert obj.sign_value(v) <= obj.value(v) + 1e-9


def test_sign_shift_equals_diamond_upper_bound():
    rng = np.random.default_rng(36)
    for d_in, d_out in [(2, 2), (3, 4)]:
        obj, diff, _, _ = _difference_objective(rng, d_in, d_out, 2)
        assert abs(obj.sign_shift - diamond_upper_bound(diff)) < 1e-11


def test_capped_proposal_is_feasible_and_improving():
    rng = np.random.default_rng(37)
    for d, r in [(3, 2), (4, 1), (4, 2)]:
        assert d * r <= CAP_PROPOSAL_MAX_DIM
        obj, _, _, _ = _difference_objective(rng, d, d, r)
        cap, _, budget = _random_cap(rng, d, r)
        psi = cap(haar_vector(rng, d * r))
        f, _ = obj.value_and_grad(psi)
        cand, mu = _capped_proposal(obj, cap, d * r, 0.0)
        assert mu >= 0.0
        assert cand is not None
        assert abs(np.linalg.norm(cand) - 1.0) < 1e-9
        assert cap.energy(cand) <= budget + 1e-9
        # the proposal maximizes the surrogate, so it cannot fall below the
        # expansion point where the surrogate equals the objective
        assert obj.sign_value(cand) >= f - 1e-9


def test_energy_constrained_sup_budget_active():
    # supremum of <H> under <H> <= E is E itself whenever E is attainable
    h = Hamiltonian([0.0, 1.0, 2.0])
    res = energy_constrained_sup(h.matrix, h, 0.7)
    assert abs(res.value - 0.7) < 1e-6
    assert res.attained <= res.value + 1e-9
    assert res.value - res.attained < 1e-6
    assert res.multiplier >= 0.0


def test_energy_constrained_sup_dominates_primal_samples():
    rng = np.random.default_rng(38)
    d = 4
    ev = np.sort(rng.uniform(0.0, 2.0, size=d))
    ev[0] = 0.0
    h = Hamiltonian(ev)
    budget = 0.6 * ev.mean()
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = 0.5 * (m + m.conj().T)
    res = energy_constrained_sup(m, h, budget)
    assert res.attained <= res.value + 1e-9
    ground = np.zeros((d, d))
    ground[0, 0] = 1.0
    worst = -np.inf
    for _ in range(10000):
        rho = ginibre_density(rng, d).matrix
        e = float(np.trace(h.matrix @ rho).real)
        if e > budget:
            s = (e - budget) / e
            rho = (1.0 - s) * rho + s * ground
        worst = max(worst, float(np.trace(m @ rho).real))
    assert worst <= res.value + 1e-9


def test_start_vectors_structure():
    starts = start_vectors(3, 2, restarts=5, seed=0, extra_starts=[np.ones(6)])
    assert len(starts) == 6
    for s in starts:
        assert s.shape == (6,)
        assert abs(np.linalg.norm(s) - 1.0) < 1e-12
    again = start_vectors(3, 2, restarts=5, seed=0, extra_starts=[np.ones(6)])
    for a, b in zip(starts, again):
        np.testing.assert_array_equal(a, b)


def test_multistart_deterministic():
    rng = np.random.default_rng(39)
    obj, _, _, _ = _difference_objective(rng, 3, 3, 2)
    cap, _, _ = _random_cap(rng, 3, 2)
    f1, w1 = multistart_ascend(obj, 3, 2, restarts=4, seed=7, project=cap, max_iter=150)
    f2, w2 = multistart_ascend(obj, 3, 2, restarts=4, seed=7, project=cap, max_iter=150)
    assert f1 == f2
    np.testing.assert_array_equal(w1, w2)
