"""Continuity bounds for entropic channel quantities.

Each bound has the shape

    total = c_main * ε (2t + r) * F(X / (εt)) + c_g * g(ε r) + c_h * h2(εt)

where r = (1 + t/2)/(1 - εt) is the smoothing factor, F an entropy bound
(an increasing concave upper bound on constrained max entropy), X the
relevant energy scale, and t a free parameter in (0, 1/(2ε)] to minimize
over. The six public bounds differ only in their coefficient triple, in the
energy scale they expect, and in which side's Hamiltonian F refers to:

    holevo_quantity_bound      (1, 2, 2)   X = E   output side
    mutual_info_bound          (2n, 2n, 4n) X = E  output side, n uses
    holevo_capacity_bound      (1, 2, 2)   X = kE  output side
    classical_capacity_bound   (2, 2, 4)   X = kE  output side
    ea_capacity_bound_input    (2, 2, 4)   X = E   input side
    ea_capacity_bound_output   (2, 2, 4)   X = kE  output side

The premise in every case is that the two channels being compared are within
2ε in the energy-constrained norm at the matching input energy; k is the
energy gain factor of the channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .operators import Hamiltonian
from .optim import golden_section_min
from .thermo import (
    HarmonicModes,
    g,
    h2,
    max_entropy,
    oscillator_entropy_bound,
    shifted_bound_saturation,
    shifted_entropy_bound,
)


def smoothing_factor(epsilon: float, t: float) -> float:
    """(1 + t/2) / (1 - εt); finite for εt < 1, tends to 1 as t -> 0."""
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if t <= 0.0:
        raise ValueError("t must be positive")
    if epsilon * t >= 1.0:
        raise ValueError(f"need εt < 1, got εt = {epsilon * t}")
    return (1.0 + 0.5 * t) / (1.0 - epsilon * t)


@dataclass(frozen=True)
class OscillatorEntropyBound:
    """Closed-form multimode oscillator entropy bound.

    Supports the sharpened log-shift evaluation F(E) - ℓ ln(εt) in place of
    F(E/(εt)); the sharpened value never exceeds the generic one.
    """

    modes: HarmonicModes

    def at(self, energy: float) -> float:
        return oscillator_entropy_bound(self.modes, energy)

    def log_shift_at(self, energy: float, x: float) -> float:
        if not 0.0 < x <= 1.0:
            raise ValueError("log-shift evaluation needs a scale in (0, 1]")
        return self.at(energy) - self.modes.modes * math.log(x)


@dataclass(frozen=True)
class ShiftedGibbsEntropyBound:
    """Entropy bound max_entropy(H, E + ground) for a concrete Hamiltonian.

    Valid for every E > 0 but saturates at ln(dim) once E exceeds
    saturation_energy; past that point it remains a correct bound yet stops
    growing, a finite-dimensional artifact worth reporting alongside values.
    """

    hamiltonian: Hamiltonian

    def at(self, energy: float) -> float:
        return shifted_entropy_bound(self.hamiltonian, energy)

    @property
    def saturation_energy(self) -> float:
        return shifted_bound_saturation(self.hamiltonian)


@dataclass(frozen=True)
class TabulatedEntropyBound:
    """Wraps any positive increasing concave function of energy."""

    fn: Callable[[float], float]

    def at(self, energy: float) -> float:
        return float(self.fn(energy))


EntropyBound = Union[OscillatorEntropyBound, ShiftedGibbsEntropyBound, TabulatedEntropyBound]


@dataclass(frozen=True)
class BoundInputs:
    """Arguments shared by all bound evaluations.

    energy_arg is the energy scale X fed to the entropy bound (E or kE
    depending on the bound); copies only matters for mutual_info_bound.
    """

    epsilon: float
    energy_arg: float
    t: float
    entropy_bound: EntropyBound
    copies: int = 1

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.energy_arg <= 0.0:
            raise ValueError(f"energy argument must be positive, got {self.energy_arg}")
        limit = 1.0 / (2.0 * self.epsilon)
        if not 0.0 < self.t <= limit * (1.0 + 1e-12):
            raise ValueError(f"t must lie in (0, {limit}], got {self.t}")
        if self.copies < 1:
            raise ValueError("copies must be at least 1")


@dataclass(frozen=True)
class BoundValue:
    """One evaluated bound, split into its three additive terms."""

    total: float
    main_term: float
    g_term: float
    h2_term: float
    t_used: float


def _assemble(
    inputs: BoundInputs,
    c_main: float,
    c_g: float,
    c_h: float,
    use_log_shift: bool,
) -> BoundValue:
    eps, t = inputs.epsilon, inputs.t
    r = smoothing_factor(eps, t)
    x = eps * t
    if use_log_shift:
        if not isinstance(inputs.entropy_bound, OscillatorEntropyBound):
            raise ValueError("the log-shift form needs an oscillator entropy bound")
        f_val = inputs.entropy_bound.log_shift_at(inputs.energy_arg, x)
    else:
        f_val = inputs.entropy_bound.at(inputs.energy_arg / x)
    main = c_main * eps * (2.0 * t + r) * f_val
    g_term = c_g * g(eps * r)
    h_term = c_h * h2(x)
    return BoundValue(
        total=main + g_term + h_term,
        main_term=main,
        g_term=g_term,
        h2_term=h_term,
        t_used=t,
    )


def holevo_quantity_bound(inputs: BoundInputs, use_log_shift: bool = False) -> BoundValue:
    """|χ(Φ(μ)) - χ(Ψ(μ))| over ensembles with bounded output energies."""
    return _assemble(inputs, 1.0, 2.0, 2.0, use_log_shift)


def mutual_info_bound(inputs: BoundInputs, use_log_shift: bool = False) -> BoundValue:
    """Difference of mutual informations after n sequential channel uses.

    energy_arg is the mean of the per-step output energy caps; every term is
    linear in copies, with the main and h2 terms carrying coefficient 2n and
    4n and the g term 2n.
    """
    n = float(inputs.copies)
    return _assemble(inputs, 2.0 * n, 2.0 * n, 4.0 * n, use_log_shift)


def holevo_capacity_bound(inputs: BoundInputs, use_log_shift: bool = False) -> BoundValue:
    """Holevo capacity difference; energy_arg is kE on the output side."""
    return _assemble(inputs, 1.0, 2.0, 2.0, use_log_shift)


def classical_capacity_bound(inputs: BoundInputs, use_log_shift: bool = False) -> BoundValue:
    """Regularized classical capacity difference; main and h2 double."""
    return _assemble(inputs, 2.0, 2.0, 4.0, use_log_shift)


def ea_capacity_bound_input(inputs: BoundInputs, use_log_shift: bool = False) -> BoundValue:
    """Entanglement-assisted capacity difference, input-side energies.

    The entropy bound refers to the input Hamiltonian at energy_arg = E; no
    energy gain factor is needed, and arbitrary channels qualify.
    """
    return _assemble(inputs, 2.0, 2.0, 4.0, use_log_shift)


def ea_capacity_bound_output(inputs: BoundInputs, use_log_shift: bool = False) -> BoundValue:
    """Entanglement-assisted capacity difference, output-side energies kE."""
    return _assemble(inputs, 2.0, 2.0, 4.0, use_log_shift)


BOUND_KINDS: dict[str, Callable[..., BoundValue]] = {
    "chi": holevo_quantity_bound,
    "qmi": mutual_info_bound,
    "cchi": holevo_capacity_bound,
    "ccap": classical_capacity_bound,
    "eacap-in": ea_capacity_bound_input,
    "eacap-out": ea_capacity_bound_output,
}

GRID_POINTS = 200
T_FLOOR_SCALE = 1e-8


def optimize_t(
    kind,
    epsilon: float,
    energy_arg: float,
    entropy_bound: EntropyBound,
    copies: int = 1,
    use_log_shift: bool = False,
    grid_points: int = GRID_POINTS,
) -> tuple[float, BoundValue]:
    """Minimize a bound total over t in (0, 1/(2ε)].

    Scans a log-spaced grid, then refines around the best grid point with a
    golden-section search in log t down to relative width 1e-6. The returned
    total never exceeds any grid value. kind is a BOUND_KINDS key or a
    callable with the same signature as the bound functions.
    """
    bound_fn = BOUND_KINDS[kind] if isinstance(kind, str) else kind

    def total_at(t: float) -> float:
        inputs = BoundInputs(
            epsilon=epsilon,
            energy_arg=energy_arg,
            t=t,
            entropy_bound=entropy_bound,
            copies=copies,
        )
        return bound_fn(inputs, use_log_shift).total

    t_hi = 1.0 / (2.0 * epsilon)
    t_lo = T_FLOOR_SCALE / epsilon
    grid = np.exp(np.linspace(math.log(t_lo), math.log(t_hi), grid_points))
    totals = [total_at(float(t)) for t in grid]
    i = int(np.argmin(totals))
    a = math.log(grid[max(i - 1, 0)])
    b = math.log(grid[min(i + 1, grid_points - 1)])
    u, val = golden_section_min(lambda x: total_at(math.exp(x)), a, b, tol=1e-6)
    t_star = math.exp(u)
    if totals[i] < val:
        t_star, val = float(grid[i]), totals[i]
    inputs = BoundInputs(
        epsilon=epsilon,
        energy_arg=energy_arg,
        t=t_star,
        entropy_bound=entropy_bound,
        copies=copies,
    )
    return t_star, bound_fn(inputs, use_log_shift)
