"""Referee side of the games: instances, questions and scoring.

Two families are covered:

* the bipartite "guess your neighbour's input" games (GYNI and its lazy
  variant LGYNI), scored on a behaviour table ``p(a, b | x, y)`` with
  uniformly distributed binary inputs;
* the N-party polygon game, where the referee hides ``(n, m)`` in the input
  string ``x_k = n*k + m mod N`` and player ``k`` is asked whether ``n == k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .errors import DomainError

AnswerVector = Tuple[bool, ...]  # True means YES: "n equals my index"

YES = True
NO = False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def require_prime(n_players) -> int:
    if int(n_players) != n_players or not is_prime(int(n_players)):
        raise DomainError(
            f"n_players must be prime (needed for division mod N), got {n_players!r}")
    return int(n_players)


def input_string(n_players: int, slope: int, offset: int) -> tuple:
    return tuple((slope * k + offset) % n_players for k in range(n_players))


@dataclass(frozen=True)
class GameInstance:
    """Hidden pair ``(slope, offset) = (n, m)`` and the inputs handed out."""

    n_players: int
    slope: int
    offset: int
    inputs: tuple = None

    def __post_init__(self):
        n = self.n_players
        if not (0 <= self.slope < n and 0 <= self.offset < n):
            raise DomainError(f"slope and offset must lie in [0, {n - 1}]")
        expected = input_string(n, self.slope, self.offset)
        if self.inputs is None:
            object.__setattr__(self, "inputs", expected)
        elif tuple(self.inputs) != expected:
            raise DomainError(f"inputs {self.inputs} inconsistent with (n, m) = "
                              f"({self.slope}, {self.offset})")
        else:
            object.__setattr__(self, "inputs", tuple(int(x) for x in self.inputs))

    @property
    def winning_answers(self) -> AnswerVector:
        return tuple(k == self.slope for k in range(self.n_players))


def make_instance(n_players: int, slope: int, offset: int) -> GameInstance:
    return GameInstance(require_prime(n_players), slope, offset)


def all_instances(n_players: int):
    """All ``N**2`` instances, each with probability ``1/N**2``."""
    n = require_prime(n_players)
    return [GameInstance(n, s, o) for s in range(n) for o in range(n)]


def draw_instance(n_players: int, rng_seed) -> GameInstance:
    n = require_prime(n_players)
    rng = np.random.default_rng(rng_seed)
    slope, offset = (int(v) for v in rng.integers(0, n, size=2))
    return GameInstance(n, slope, offset)


def score_nparty(instance: GameInstance, answers: Sequence[bool]) -> bool:
    """Win iff exactly player ``n`` says YES."""
    if len(answers) != instance.n_players:
        raise DomainError(f"expected {instance.n_players} answers, got {len(answers)}")
    return all(bool(a) == (k == instance.slope) for k, a in enumerate(answers))


@dataclass(frozen=True, eq=False)
class BipartiteBehavior:
    """Conditional table ``p(a, b | x, y)`` indexed as ``table[a, b, x, y]``.

    Entries may be floats or :class:`fractions.Fraction` (object array) so
    that classical enumeration stays exact.
    """

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table)
        if t.shape != (2, 2, 2, 2):
            raise DomainError(f"behavior table must have shape (2, 2, 2, 2), got {t.shape}")
        if t.dtype != object:
            t = t.astype(float)
        for x, y in itertools.product((0, 1), repeat=2):
            col = t[:, :, x, y]
            if any(float(v) < -1e-12 for v in col.flat):
                raise DomainError(f"negative probability for inputs {(x, y)}")
            if abs(float(sum(col.flat)) - 1.0) > 1e-12:
                raise DomainError(f"p(.,.|{x},{y}) does not sum to 1")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @classmethod
    def deterministic(cls, a_of, b_of, exact: bool = True) -> "BipartiteBehavior":
        """Behavior where ``a = a_of(x, y)`` and ``b = b_of(x, y)``."""
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        t = np.full((2, 2, 2, 2), zero, dtype=object if exact else float)
        for x, y in itertools.product((0, 1), repeat=2):
            t[a_of(x, y), b_of(x, y), x, y] = one
        return cls(t)

    def as_vector(self) -> np.ndarray:
        return self.table.astype(float).ravel()


def _weighted(behavior: BipartiteBehavior, keep) -> object:
    t = behavior.table
    total = sum(t[a, b, x, y] for a, b, x, y in itertools.product((0, 1), repeat=4)
                if keep(a, b, x, y))
    return total * Fraction(1, 4) if t.dtype == object else float(total) / 4


def gyni_success(behavior: BipartiteBehavior):
    """Winning probability when A must output ``y`` and B must output ``x``."""
    return _weighted(behavior, lambda a, b, x, y: a == y and b == x)


def lgyni_success(behavior: BipartiteBehavior):
    """Winning probability of the lazy variant: ``x(a^y) = y(b^x) = 0``."""
    return _weighted(behavior, lambda a, b, x, y: x * (a ^ y) == 0 and y * (b ^ x) == 0)


GAMES = {"gyni": gyni_success, "lgyni": lgyni_success}
