"""Single-particle sector of an N-mode Fock space.

States live on the (N+1)-dimensional space spanned by the global vacuum and
the N one-excitation states. Basis order everywhere is
``(vacuum, mode 0, ..., mode N-1)``.

A mode unitary ``U`` acts on creation operators as
``a_k^dagger -> sum_l U[k, l] a_l^dagger``, so on the amplitude vector of a
single-particle state it acts as ``psi' = U.T @ psi`` (equivalently
``psi' = psi @ U``). The vacuum is left fixed by every mode unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: Tolerance for algebraic identities (unitarity, hermiticity, traces).
ALGEBRA_TOL = 1e-12
#: Tolerance for normalization preconditions.
NORM_TOL = 1e-9
#: Most negative eigenvalue / probability tolerated as rounding noise.
NEGATIVITY_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _check_n_modes(n_modes) -> int:
    if int(n_modes) != n_modes or n_modes < 1:
        raise DomainError(f"n_modes must be a positive integer, got {n_modes!r}")
    return int(n_modes)


@dataclass(frozen=True, eq=False)
class SingleParticleState:
    """Pure state: amplitudes on the N modes plus a vacuum amplitude.

    Normalization is not enforced at construction so that intermediate
    arithmetic is possible; operations that need a physical state check it
    against ``NORM_TOL``.
    """

    mode_amplitudes: np.ndarray
    vacuum_amplitude: complex = 0.0

    def __post_init__(self):
        amps = _frozen(np.atleast_1d(self.mode_amplitudes))
        if amps.ndim != 1 or amps.size < 1:
            raise DomainError("mode_amplitudes must be a non-empty 1-d vector")
        if not np.all(np.isfinite(amps)):
            raise DomainError("mode_amplitudes must be finite")
        object.__setattr__(self, "mode_amplitudes", amps)
        object.__setattr__(self, "vacuum_amplitude", complex(self.vacuum_amplitude))

    @property
    def n_modes(self) -> int:
        return self.mode_amplitudes.size

    @property
    def vector(self) -> np.ndarray:
        """Amplitudes in the full (N+1) basis, vacuum first."""
        return np.concatenate(([self.vacuum_amplitude], self.mode_amplitudes))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm**2 - 1.0) <= tol

    @classmethod
    def from_vector(cls, vector) -> "SingleParticleState":
        vector = np.asarray(vector, dtype=complex)
        if vector.ndim != 1 or vector.size < 2:
            raise DomainError("full-basis vector needs a vacuum slot and at least one mode")
        return cls(vector[1:], vector[0])

    @classmethod
    def basis(cls, n_modes: int, mode: int) -> "SingleParticleState":
        n_modes = _check_n_modes(n_modes)
        if not 0 <= mode < n_modes:
            raise DomainError(f"mode {mode} out of range for {n_modes} modes")
        amps = np.zeros(n_modes, dtype=complex)
        amps[mode] = 1.0
        return cls(amps, 0.0)

    @classmethod
    def vacuum(cls, n_modes: int) -> "SingleParticleState":
        return cls(np.zeros(_check_n_modes(n_modes), dtype=complex), 1.0)


@dataclass(frozen=True, eq=False)
class DensityState:
    """Mixed state on the (N+1)-dimensional vacuum + single-particle space."""

    matrix: np.ndarray

    def __post_init__(self):
        rho = _frozen(self.matrix)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 2:
            raise DomainError(f"density matrix must be square with size >= 2, got {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise DomainError("density matrix must be finite")
        if np.max(np.abs(rho - rho.conj().T)) > ALGEBRA_TOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > ALGEBRA_TOL:
            raise DomainError(f"density matrix trace {np.trace(rho).real:.15g} != 1")
        if np.linalg.eigvalsh(rho).min() < -NEGATIVITY_TOL:
            raise DomainError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", rho)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] - 1


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    """N x N unitary acting on mode creation operators."""

    matrix: np.ndarray

    def __post_init__(self):
        u = _frozen(self.matrix)
        if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] < 1:
            raise DomainError(f"mode unitary must be square, got {u.shape}")
        if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > ALGEBRA_TOL:
            raise DomainError("matrix is not unitary within 1e-12")
        object.__setattr__(self, "matrix", u)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    def extended(self) -> np.ndarray:
        """Action on full-basis amplitude vectors: ``blockdiag(1, U.T)``."""
        n = self.n_modes
        w = np.zeros((n + 1, n + 1), dtype=complex)
        w[0, 0] = 1.0
        w[1:, 1:] = self.matrix.T
        return w


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    """Which-location statistics.

    ``probabilities[0]`` is the chance that no particle is found anywhere,
    ``probabilities[k + 1]`` the chance that player ``k`` finds it.
    """

    probabilities: np.ndarray

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        if p.ndim != 1 or p.size < 2:
            raise DomainError("outcome needs a vacuum entry and at least one mode")
        if p.min() < -NEGATIVITY_TOL:
            raise DomainError(f"negative probability {p.min():.3g}")
        p = np.clip(p, 0.0, 1.0)
        if abs(p.sum() - 1.0) > ALGEBRA_TOL:
            raise DomainError(f"probabilities sum to {p.sum():.15g}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @property
    def n_modes(self) -> int:
        return self.probabilities.size - 1

    @property
    def p_vacuum(self) -> float:
        return float(self.probabilities[0])

    def p_mode(self, k: int) -> float:
        return float(self.probabilities[k + 1])


def uniform_superposition(n_modes: int) -> SingleParticleState:
    """Equal-weight superposition of one particle over ``n_modes`` locations."""
    n_modes = _check_n_modes(n_modes)
    return SingleParticleState(np.full(n_modes, 1 / np.sqrt(n_modes), dtype=complex), 0.0)


def phase_factors(inputs, modulus: int) -> np.ndarray:
    """``omega**x`` for each input, with ``omega = exp(2 pi i / modulus)``."""
    if int(modulus) != modulus or modulus < 2:
        raise DomainError(f"modulus must be an integer >= 2, got {modulus!r}")
    x = np.mod(np.asarray(inputs, dtype=np.int64), modulus)
    return np.exp(2j * np.pi * x / modulus)


def encode_phases(state: SingleParticleState, inputs, modulus: int) -> SingleParticleState:
    """Each player ``k`` multiplies their mode by ``omega**inputs[k]``."""
    inputs = np.asarray(inputs)
    if inputs.shape != (state.n_modes,):
        raise DomainError(f"expected {state.n_modes} inputs, got shape {inputs.shape}")
    return SingleParticleState(state.mode_amplitudes * phase_factors(inputs, modulus),
                               state.vacuum_amplitude)


def dft_unitary(n_modes: int) -> ModeUnitary:
    """Discrete Fourier transform ``U[k, l] = exp(-2 pi i k l / N) / sqrt(N)``.

    The sign of the exponent matters: with the opposite convention the
    particle would end up at mode ``-n mod N`` instead of ``n``.
    """
    n = _check_n_modes(n_modes)
    kl = np.outer(np.arange(n), np.arange(n)) % n
    return ModeUnitary(np.exp(-2j * np.pi * kl / n) / np.sqrt(n))


def apply_unitary(state: SingleParticleState, u: ModeUnitary) -> SingleParticleState:
    if u.n_modes != state.n_modes:
        raise DomainError(f"unitary acts on {u.n_modes} modes, state has {state.n_modes}")
    # a_k^dagger -> sum_l U[k, l] a_l^dagger  =>  new amplitude_l = sum_k amplitude_k U[k, l]
    return SingleParticleState(state.mode_amplitudes @ u.matrix, state.vacuum_amplitude)


def measure_location(state: SingleParticleState) -> MeasurementOutcome:
    """Born-rule statistics of the which-location measurement."""
    if not state.is_normalized():
        raise DomainError(f"state is not normalized (norm {state.norm:.15g})")
    return MeasurementOutcome(np.abs(state.vector) ** 2)


def density_from_pure(state: SingleParticleState) -> DensityState:
    if not state.is_normalized():
        raise DomainError(f"state is not normalized (norm {state.norm:.15g})")
    v = state.vector / state.norm
    return DensityState(np.outer(v, v.conj()))


def white_noise_state(n_modes: int) -> DensityState:
    """Maximally mixed state of the single-particle sector (vacuum weight 0)."""
    n = _check_n_modes(n_modes)
    return DensityState(np.diag(np.r_[0.0, np.full(n, 1 / n)]))


def loss_state(n_modes: int) -> DensityState:
    """The global vacuum: the particle never arrived."""
    n = _check_n_modes(n_modes)
    return DensityState(np.diag(np.r_[1.0, np.zeros(n)]))


def mix(pure_part: DensityState, noise_part: DensityState, lam: float) -> DensityState:
    """``(1 - lam) * pure_part + lam * noise_part``."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"mixing weight must lie in [0, 1], got {lam!r}")
    if pure_part.matrix.shape != noise_part.matrix.shape:
        raise DomainError("cannot mix states of different dimension")
    if lam == 0.0:
        return pure_part
    if lam == 1.0:
        return noise_part
    return DensityState((1 - lam) * pure_part.matrix + lam * noise_part.matrix)


def conjugate(rho: DensityState, w: np.ndarray) -> DensityState:
    """``w @ rho @ w^dagger`` for a full-basis unitary ``w``, re-symmetrized."""
    out = w @ rho.matrix @ w.conj().T
    return DensityState((out + out.conj().T) / 2)


def encode_phases_density(rho: DensityState, inputs, modulus: int) -> DensityState:
    inputs = np.asarray(inputs)
    if inputs.shape != (rho.n_modes,):
        raise DomainError(f"expected {rho.n_modes} inputs, got shape {inputs.shape}")
    return conjugate(rho, np.diag(np.r_[1.0, phase_factors(inputs, modulus)]))


def apply_unitary_density(rho: DensityState, u: ModeUnitary) -> DensityState:
    if u.n_modes != rho.n_modes:
        raise DomainError(f"unitary acts on {u.n_modes} modes, state has {rho.n_modes}")
    return conjugate(rho, u.extended())


def measure_density(rho: DensityState) -> MeasurementOutcome:
    return MeasurementOutcome(np.real(np.diag(rho.matrix)))
