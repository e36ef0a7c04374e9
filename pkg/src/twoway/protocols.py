"""End-to-end quantum protocols built on :mod:`twoway.fock`.

Bipartite: A and B share one particle in the superposition of their two
locations, imprint ``(-1)**x`` and ``(-1)**y`` on their parts, and send them
through a balanced splitter. The particle ends with A when ``x ^ y == 0``
and with B otherwise, so both players learn the parity and hence the
other's input.

N-party: the uniform superposition over N locations, phases
``omega**x_k``, then the N-port Fourier splitter. The particle always ends at
player ``n``, carrying the global phase ``omega**m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import fock
from .errors import DomainError
from .fock import DensityState, MeasurementOutcome, SingleParticleState
from .games import BipartiteBehavior, GameInstance, all_instances, require_prime, score_nparty

#: Probability above which a measurement outcome counts as certain.
CERTAINTY_TOL = 1e-10


def bipartite_final_state(x: int, y: int) -> SingleParticleState:
    """State after encoding and the splitter; mode 0 is A, mode 1 is B."""
    if x not in (0, 1) or y not in (0, 1):
        raise DomainError(f"inputs must be bits, got {(x, y)}")
    psi = fock.uniform_superposition(2)
    psi = fock.encode_phases(psi, [x, y], 2)
    return fock.apply_unitary(psi, fock.dft_unitary(2))


def _decode_bipartite(x: int, y: int, found_at_b: int) -> tuple:
    return found_at_b ^ x, found_at_b ^ y


def run_bipartite(x: int, y: int) -> tuple:
    """Outputs ``(a, b)``: each player XORs the observed parity with their input."""
    outcome = fock.measure_location(bipartite_final_state(x, y))
    s = int(np.argmax(outcome.probabilities)) - 1
    if outcome.probabilities[s + 1] < 1 - CERTAINTY_TOL:
        raise DomainError("bipartite protocol outcome is not deterministic")
    return _decode_bipartite(x, y, s)


def bipartite_behavior() -> BipartiteBehavior:
    """Exact ``p(a, b | x, y)`` of the quantum protocol from Born probabilities."""
    t = np.zeros((2, 2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            outcome = fock.measure_location(bipartite_final_state(x, y))
            for s in (0, 1):
                a, b = _decode_bipartite(x, y, s)
                t[a, b, x, y] += outcome.p_mode(s)
    return BipartiteBehavior(t)


def answers_for_outcome(n_players: int, outcome_index: int) -> tuple:
    """Detection rule: only the player who finds the particle says YES.

    ``outcome_index`` 0 is the vacuum (nobody finds it, all answer NO).
    """
    return tuple(outcome_index == k + 1 for k in range(n_players))


def nparty_final_state(instance: GameInstance) -> SingleParticleState:
    n = instance.n_players
    psi = fock.uniform_superposition(n)
    psi = fock.encode_phases(psi, instance.inputs, n)
    return fock.apply_unitary(psi, fock.dft_unitary(n))


def run_nparty(instance: GameInstance):
    """Run the polygon protocol once.

    Returns the answer vector and the final mode amplitudes. The outcome is
    deterministic; anything else raises.
    """
    final = nparty_final_state(instance)
    outcome = fock.measure_location(final)
    idx = int(np.argmax(outcome.probabilities))
    if outcome.probabilities[idx] < 1 - CERTAINTY_TOL:
        raise DomainError(f"no certain outcome for instance {instance}")
    return answers_for_outcome(instance.n_players, idx), final.mode_amplitudes


@dataclass(frozen=True)
class InstanceRecord:
    instance: GameInstance
    outcome: MeasurementOutcome
    win_probability: float  # mass on outcomes whose answers win


@dataclass(frozen=True)
class ProtocolResult:
    n_players: int
    records: tuple
    success_probability: float

    def recompute(self) -> float:
        return float(np.mean([r.win_probability for r in self.records]))


def _win_mass(instance: GameInstance, outcome: MeasurementOutcome) -> float:
    n = instance.n_players
    return float(sum(p for i, p in enumerate(outcome.probabilities)
                     if score_nparty(instance, answers_for_outcome(n, i))))


def nparty_result(n_players: int) -> ProtocolResult:
    """Exact success probability of the noiseless protocol over all instances."""
    records = []
    for inst in all_instances(n_players):
        outcome = fock.measure_location(nparty_final_state(inst))
        records.append(InstanceRecord(inst, outcome, _win_mass(inst, outcome)))
    return ProtocolResult(n_players, tuple(records),
                          float(np.mean([r.win_probability for r in records])))


# ---------------------------------------------------------------------------
# noise


NOISE_KINDS = ("white", "loss", "custom")


@dataclass(frozen=True, eq=False)
class NoiseSpec:
    """Noise admixture ``rho = (1 - lam) |psi><psi| + lam * rho_noise``."""

    kind: str
    lam: float
    state: Optional[DensityState] = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise DomainError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam!r}")
        if (self.kind == "custom") != (self.state is not None):
            raise DomainError("a density state is required for, and only for, custom noise")

    def noise_state(self, n_players: int) -> DensityState:
        if self.kind == "white":
            return fock.white_noise_state(n_players)
        if self.kind == "loss":
            return fock.loss_state(n_players)
        if self.state.n_modes != n_players:
            raise DomainError(f"custom noise has {self.state.n_modes} modes, need {n_players}")
        return self.state

    def p_noise(self, n_players: int) -> float:
        if self.kind == "white":
            return 1.0 / n_players
        if self.kind == "loss":
            return 0.0
        return measured_p_noise(self.noise_state(n_players))


def _density_success(n_players: int, rho_in: DensityState) -> float:
    u = fock.dft_unitary(n_players)
    wins = []
    for inst in all_instances(n_players):
        rho = fock.encode_phases_density(rho_in, inst.inputs, n_players)
        outcome = fock.measure_density(fock.apply_unitary_density(rho, u))
        wins.append(_win_mass(inst, outcome))
    return float(np.mean(wins))


def measured_p_noise(noise_state: DensityState) -> float:
    """Average winning probability of the noise state alone run through the protocol."""
    return _density_success(require_prime(noise_state.n_modes), noise_state)


def run_noisy(n_players: int, noise: NoiseSpec) -> float:
    """Success probability of the density-matrix protocol, averaged over instances."""
    n = require_prime(n_players)
    pure = fock.density_from_pure(fock.uniform_superposition(n))
    return _density_success(n, fock.mix(pure, noise.noise_state(n), noise.lam))


def predicted_success(lam: float, p_noise: float) -> float:
    return 1.0 - lam + lam * p_noise


def noise_threshold(n_players: int, p_noise: float) -> float:
    """Largest noise weight keeping the quantum success above ``1/N``.

    ``(1 - 1/N) / (1 - p_noise)``, capped at 1 because a noise weight cannot
    exceed 1.
    """
    n = int(n_players)
    if n < 2:
        raise DomainError(f"need at least two players, got {n_players!r}")
    if not 0.0 <= p_noise < 1.0:
        raise DomainError(f"p_noise must lie in [0, 1), got {p_noise!r}")
    return min(1.0, (1 - 1 / n) / (1 - p_noise))


def classical_bound(n_players: int) -> Fraction:
    """Bound the noisy success is compared against (closed form ``1/N``)."""
    return Fraction(1, require_prime(n_players))
