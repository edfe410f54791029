"""Entropic quantities: von Neumann entropy, relative entropy, ensembles,
mutual information, and capacity estimates."""

import math

import numpy as np
import pytest

from conftest import ginibre_density, haar_vector, loop_partial_trace, random_channel
from ecdnorm import (
    Channel,
    DensityOperator,
    Ensemble,
    Hamiltonian,
    apply_channel,
    channel_mutual_information,
    depolarize_to,
    energy_gain,
    entropy,
    h2,
    holevo_capacity_estimate,
    holevo_quantity,
    identity_channel,
    max_entropy,
    mutual_information,
    output_energy_sup,
    relative_entropy,
    solve_gibbs,
    vacuum_state,
)

LN2 = math.log(2.0)


def test_entropy_reference_values():
    rng = np.random.default_rng(60)
    v = haar_vector(rng, 5)
    assert abs(entropy(DensityOperator.pure(v))) < 1e-10
    for d in (2, 3, 7):
        assert abs(entropy(np.eye(d) / d) - math.log(d)) < 1e-12
    assert abs(entropy(np.diag([0.25, 0.75])) - h2(0.25)) < 1e-14


def test_relative_entropy_basics():
    rng = np.random.default_rng(61)
    rho = ginibre_density(rng, 4)
    assert abs(relative_entropy(rho, rho)) < 1e-9
    # support violation diverges
    pure = DensityOperator.pure(np.array([1.0, 0.0]))
    other = DensityOperator.pure(np.array([0.0, 1.0]))
    assert relative_entropy(pure, other) == math.inf
    # nonnegative on random pairs
    for _ in range(10):
        a = ginibre_density(rng, 3)
        b = ginibre_density(rng, 3)
        assert relative_entropy(a, b) >= -1e-10
    with pytest.raises(ValueError):
        relative_entropy(ginibre_density(rng, 2), ginibre_density(rng, 3))


def test_relative_entropy_commuting_pair():
    # classical KL divergence of (1/2, 1/2) against (1/4, 3/4)
    rho = np.diag([0.5, 0.5])
    sigma = np.diag([0.25, 0.75])
    assert abs(relative_entropy(rho, sigma) - 0.14384103622589042) < 1e-12


def test_holevo_quantity_reference_cases():
    rng = np.random.default_rng(62)
    rho = ginibre_density(rng, 3)
    same = Ensemble((0.3, 0.7), (rho, rho))
    assert abs(holevo_quantity(same)) < 1e-12
    basis = Ensemble(
        (0.5, 0.5),
        (
            DensityOperator.pure(np.array([1.0, 0.0])),
            DensityOperator.pure(np.array([0.0, 1.0])),
        ),
    )
    assert abs(holevo_quantity(basis) - LN2) < 1e-12


def test_holevo_quantity_equals_divergence_form():
    rng = np.random.default_rng(63)
    for _ in range(8):
        states = tuple(ginibre_density(rng, 3) for _ in range(3))
        p = rng.uniform(0.2, 1.0, size=3)
        p /= p.sum()
        ens = Ensemble(tuple(p), states)
        chi = holevo_quantity(ens)
        avg = DensityOperator(ens.average())
        alt = sum(w * relative_entropy(s, avg) for w, s in zip(p, states))
        assert abs(chi - alt) < 1e-9
        assert chi <= entropy(avg) + 1e-12


def test_ensemble_validation():
    rng = np.random.default_rng(64)
    rho = ginibre_density(rng, 2)
    with pytest.raises(ValueError):
        Ensemble((0.5, 0.6), (rho, rho))  # does not sum to one
    with pytest.raises(ValueError):
        Ensemble((1.0, 0.0), (rho, rho))  # zero weight
    with pytest.raises(ValueError):
        Ensemble((0.5, 0.5), (rho, ginibre_density(rng, 3)))  # mixed dims


def test_mutual_information_reference_cases():
    rng = np.random.default_rng(65)
    a = ginibre_density(rng, 2).matrix
    b = ginibre_density(rng, 3).matrix
    assert abs(mutual_information(np.kron(a, b), (2, 3))) < 1e-10
    bell = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
    assert abs(mutual_information(np.outer(bell, bell), (2, 2)) - 2.0 * LN2) < 1e-12


def test_mutual_information_divergence_form_and_cap():
    rng = np.random.default_rng(66)
    for da, db in [(2, 2), (2, 3), (3, 2)]:
        rho = ginibre_density(rng, da * db)
        ra = loop_partial_trace(rho.matrix, (da, db), 0)
        rb = loop_partial_trace(rho.matrix, (da, db), 1)
        alt = relative_entropy(rho, DensityOperator(np.kron(ra, rb)))
        got = mutual_information(rho, (da, db))
        assert abs(got - alt) < 1e-8
        assert got <= 2.0 * min(math.log(da), math.log(db)) + 1e-10


def test_channel_mutual_information_reference_cases():
    ident = identity_channel(2)
    half = DensityOperator(0.5 * np.eye(2))
    assert abs(channel_mutual_information(ident, half) - 2.0 * LN2) < 1e-12
    # a constant channel carries nothing
    rng = np.random.default_rng(67)
    sigma = ginibre_density(rng, 2)
    const = depolarize_to(sigma, 1.0)
    assert channel_mutual_information(const, half) < 1e-9


def test_channel_mutual_information_unitary_doubles_entropy():
    rng = np.random.default_rng(68)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    unitary = Channel([q])
    rho = ginibre_density(rng, 3)
    got = channel_mutual_information(unitary, rho)
    assert abs(got - 2.0 * entropy(rho)) < 1e-9


def test_channel_mutual_information_purification_invariance():
    # recompute with an enlarged, rotated reference; I(B:R) must not move
    rng = np.random.default_rng(69)
    ch = random_channel(rng, 3, 3, 2)
    rho = ginibre_density(rng, 3)
    got = channel_mutual_information(ch, rho)

    w, v = np.linalg.eigh(rho.matrix)
    d, ref = 3, 6
    m = np.zeros((d, ref), dtype=np.complex128)
    m[:, :d] = v * np.sqrt(np.clip(w, 0.0, None))
    q, _ = np.linalg.qr(rng.standard_normal((ref, ref)) + 1j * rng.standard_normal((ref, ref)))
    m = m @ q.T  # rotate the reference side of the purification
    big = np.zeros((d * ref, d * ref), dtype=np.complex128)
    for k in ch.kraus:
        vec = (k @ m).reshape(-1)
        big += np.outer(vec, vec.conj())

    def eig_entropy(mat):
        lam = np.linalg.eigvalsh(mat)
        lam = lam[lam > 1e-12]
        return float(-(lam * np.log(lam)).sum())

    manual = (
        eig_entropy(loop_partial_trace(big, (d, ref), 0))
        + eig_entropy(loop_partial_trace(big, (d, ref), 1))
        - eig_entropy(big)
    )
    assert abs(got - manual) < 1e-9


def test_energy_gain_identity_and_replacer():
    h = Hamiltonian([0.0, 1.0, 2.0])
    assert abs(energy_gain(identity_channel(3), h, h, 0.8) - 1.0) < 1e-9
    sigma = DensityOperator(np.diag([0.5, 0.3, 0.2]))
    const = depolarize_to(sigma, 1.0)
    want = (0.3 + 0.4) / 0.8  # Tr[H sigma] / budget
    assert abs(energy_gain(const, h, h, 0.8) - want) < 1e-9


def test_output_energy_sup_dominates_primal_samples():
    rng = np.random.default_rng(70)
    ch = random_channel(rng, 3, 3, 2)
    ev = np.array([0.0, 0.9, 2.1])
    h = Hamiltonian(ev)
    budget = 0.7
    res = output_energy_sup(ch, h, h, budget)
    assert res.attained <= res.value + 1e-9
    assert res.value - res.attained < 1e-6
    ground = np.zeros((3, 3))
    ground[0, 0] = 1.0
    worst = -np.inf
    for _ in range(10000):
        rho = ginibre_density(rng, 3).matrix
        e = float(np.trace(h.matrix @ rho).real)
        if e > budget:
            s = (e - budget) / e
            rho = (1.0 - s) * rho + s * ground
        out = apply_channel(ch, rho)
        worst = max(worst, float(np.trace(h.matrix @ out).real))
    assert worst <= res.value + 1e-9


def test_capacity_estimate_identity_channel():
    h = Hamiltonian([0.0, 0.8, 1.9])
    budget = 0.6
    cap = holevo_capacity_estimate(identity_channel(3), h, budget, restarts=6, max_iter=600)
    target = max_entropy(h, budget)
    assert cap <= target + 1e-9
    assert cap >= target - 0.02


def test_capacity_estimate_constant_channel():
    rng = np.random.default_rng(71)
    sigma = ginibre_density(rng, 3)
    h = Hamiltonian([0.0, 1.0, 2.0])
    cap = holevo_capacity_estimate(depolarize_to(sigma, 1.0), h, 0.5, restarts=2, max_iter=100)
    assert cap < 1e-8


def test_data_processing_for_holevo_quantity():
    rng = np.random.default_rng(72)
    for _ in range(6):
        states = tuple(ginibre_density(rng, 3) for _ in range(3))
        p = rng.uniform(0.2, 1.0, size=3)
        p /= p.sum()
        ens = Ensemble(tuple(p), states)
        ch = random_channel(rng, 3, 3, 2)
        assert holevo_quantity(ens.map_through(ch)) <= holevo_quantity(ens) + 1e-9


def test_gibbs_input_attains_identity_capacity():
    # the capacity witness for the identity is the Gibbs state itself
    h = Hamiltonian([0.0, 0.8, 1.9])
    budget = 0.6
    gibbs = solve_gibbs(h, budget)
    assert abs(entropy(gibbs.state) - max_entropy(h, budget)) < 1e-8
    assert abs(entropy(vacuum_state(4).matrix)) < 1e-12
