"""Acts, beliefs and subjective evaluation.

An act assigns a lottery to each state of Nature. Its value under a belief
``pi`` and payoff matrix ``U`` is ``sum_s pi(s) * f_s' U f_s``: linear in the
belief, quadratic in each statewise lottery.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from projeu.exceptions import InvariantError, NonSphericalMixtureError
from projeu.lottery import Basis, Lottery, RiskProfile
from projeu.utility import PayoffMatrix, utility

__all__ = [
    "StateSpace",
    "Belief",
    "Embedding",
    "Act",
    "ActProfile",
    "act_profile",
    "act_utility",
    "check_nonconstant_eigenvalues",
    "mix_acts",
    "EllsbergScenario",
    "ellsberg_scenario",
]

PROB_TOL = 1e-10
UNIT_TOL = 1e-10
SPHERE_TOL = 1e-9


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateSpace:
    labels: tuple

    def __post_init__(self):
        labels = tuple(str(s) for s in self.labels)
        if not labels:
            raise InvariantError("state space must be non-empty")
        if len(set(labels)) != len(labels):
            raise InvariantError("state labels must be distinct")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label) -> int:
        return self.labels.index(label)


@dataclass(frozen=True, eq=False)
class Belief:
    """Probability over states. Null states (zero mass) are allowed."""

    probs: np.ndarray

    def __post_init__(self):
        p = _frozen(self.probs)
        if p.ndim != 1 or p.size == 0:
            raise InvariantError("belief must be a non-empty vector")
        if np.any(p < 0.0):
            raise InvariantError("belief probabilities must be nonnegative")
        total = float(np.sum(p))
        if abs(total - 1.0) > PROB_TOL:
            raise InvariantError(f"belief sums to {total:.12g}, not 1")
        object.__setattr__(self, "probs", p)

    @classmethod
    def uniform(cls, k: int) -> "Belief":
        return cls(np.full(k, 1.0 / k))

    def __len__(self):
        return self.probs.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, Belief):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)


@dataclass(frozen=True, eq=False)
class Embedding:
    """``m x n`` matrix sending each objective outcome to a unit vector in R^m."""

    v: np.ndarray

    def __post_init__(self):
        v = _frozen(self.v)
        if v.ndim != 2 or v.shape[0] < v.shape[1] or v.shape[1] == 0:
            raise InvariantError(f"embedding must be m x n with m >= n >= 1, got {v.shape}")
        norms = np.linalg.norm(v, axis=0)
        if np.max(np.abs(norms - 1.0)) > UNIT_TOL:
            raise InvariantError("embedding columns must be unit vectors")
        object.__setattr__(self, "v", v)

    @classmethod
    def identity(cls, n: int) -> "Embedding":
        return cls(np.eye(n))

    @property
    def shape(self):
        return self.v.shape


@dataclass(frozen=True)
class Act:
    """One lottery per state; all lotteries share the outcome dimension."""

    states: StateSpace
    lotteries: tuple

    def __post_init__(self):
        states = self.states if isinstance(self.states, StateSpace) else StateSpace(self.states)
        lotteries = tuple(x if isinstance(x, Lottery) else Lottery(x) for x in self.lotteries)
        if len(lotteries) != len(states):
            raise InvariantError(f"act has {len(lotteries)} lotteries for {len(states)} states")
        if len({x.n for x in lotteries}) != 1:
            raise InvariantError("all lotteries of an act must have the same dimension")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "lotteries", lotteries)

    @classmethod
    def constant(cls, states, x) -> "Act":
        states = states if isinstance(states, StateSpace) else StateSpace(states)
        return cls(states, (x,) * len(states))

    @property
    def n(self) -> int:
        return self.lotteries[0].n

    def __getitem__(self, state):
        return self.lotteries[self.states.index(state)]

    def __len__(self):
        return len(self.lotteries)


@dataclass(frozen=True)
class ActProfile:
    states: StateSpace
    profiles: tuple

    def as_array(self) -> np.ndarray:
        return np.vstack([p.probs for p in self.profiles])


def act_profile(f: Act, v: Embedding, z: Basis) -> ActProfile:
    """Per-state risk profiles ``<z_j | V f_s>**2`` over the subjective outcomes."""
    if not isinstance(v, Embedding):
        v = Embedding(v)
    if not isinstance(z, Basis):
        z = Basis(z)
    m, n = v.shape
    if f.n != n:
        raise InvariantError(f"dimension mismatch: act lotteries {f.n} vs embedding columns {n}")
    if z.n != m:
        raise InvariantError(f"dimension mismatch: basis {z.n} vs embedding rows {m}")
    profiles = []
    for label, x in zip(f.states, f.lotteries):
        w = v.v @ x.amplitudes
        norm = float(np.linalg.norm(w))
        if abs(norm - 1.0) > SPHERE_TOL:
            raise InvariantError(f"V f_s is not a unit vector in state {label!r} (norm {norm:.12g})")
        proj = z.vectors @ w
        profiles.append(RiskProfile(proj * proj))
    return ActProfile(f.states, tuple(profiles))


def check_nonconstant_eigenvalues(u, tol: float = 1e-9) -> bool:
    """True iff the eigenvalue spread of ``u`` exceeds ``tol``."""
    u = u if isinstance(u, PayoffMatrix) else PayoffMatrix(u)
    lam = u.eigenvalues
    return bool(lam[0] - lam[-1] > tol)


def act_utility(pi, u, f: Act) -> float:
    """``sum_s pi(s) * f_s' U f_s``.

    Issues a ``UserWarning`` when ``U`` has constant eigenvalues, since such a
    matrix ranks every act equally.
    """
    pi = pi if isinstance(pi, Belief) else Belief(pi)
    u = u if isinstance(u, PayoffMatrix) else PayoffMatrix(u)
    if len(pi) != len(f):
        raise InvariantError(f"belief has {len(pi)} states, act has {len(f)}")
    if f.n != u.n:
        raise InvariantError(f"dimension mismatch: matrix {u.n} vs act lotteries {f.n}")
    if not check_nonconstant_eigenvalues(u):
        warnings.warn("payoff matrix has constant eigenvalues; preferences are trivial", stacklevel=2)
    return math.fsum(p * utility(u, x) for p, x in zip(pi.probs, f.lotteries))


def mix_acts(a: float, f: Act, g: Act) -> Act:
    """Statewise combination ``a*f_s + (1-a)*g_s``.

    Mixtures of distinct unit vectors fall inside the sphere; those are
    rejected rather than renormalized.

    Raises
    ------
    NonSphericalMixtureError
        For the first state whose mixture norm is off by more than ``1e-9``.
    """
    if not 0.0 <= a <= 1.0:
        raise InvariantError(f"mixing weight {a} outside [0, 1]")
    if f.states != g.states:
        raise InvariantError("acts are defined on different state spaces")
    if f.n != g.n:
        raise InvariantError(f"dimension mismatch: {f.n} vs {g.n}")
    if a == 1.0:
        return f
    if a == 0.0:
        return g
    mixed = []
    for label, x, y in zip(f.states, f.lotteries, g.lotteries):
        w = a * x.amplitudes + (1.0 - a) * y.amplitudes
        norm = float(np.linalg.norm(w))
        if abs(norm - 1.0) > SPHERE_TOL:
            raise NonSphericalMixtureError(label, norm)
        mixed.append(Lottery(w))
    return Act(f.states, tuple(mixed))


class EllsbergScenario(NamedTuple):
    states: StateSpace
    belief: Belief
    payoff: PayoffMatrix
    acts: dict
    lotteries: dict


def ellsberg_scenario(alpha: float) -> EllsbergScenario:
    """Two-urn Ellsberg setup with payoff matrix ``[[1, alpha], [alpha, 0]]``.

    Outcomes are (Win, Lose). Acts: ``R``/``R_bar`` bet on red / not red and
    are constant; ``G``/``G_bar`` bet on green / not green and depend on which
    urn composition holds.
    """
    states = StateSpace(("Urn1", "Urn2"))
    lot = {
        "w": Lottery([1.0, 0.0]),
        "l": Lottery([0.0, 1.0]),
        "r": Lottery([math.sqrt(1 / 3), math.sqrt(2 / 3)]),
        "r_bar": Lottery([math.sqrt(2 / 3), math.sqrt(1 / 3)]),
    }
    acts = {
        "R": Act.constant(states, lot["r"]),
        "R_bar": Act.constant(states, lot["r_bar"]),
        "G": Act(states, (lot["r_bar"], lot["l"])),
        "G_bar": Act(states, (lot["r"], lot["w"])),
    }
    u = PayoffMatrix([[1.0, alpha], [alpha, 0.0]])
    return EllsbergScenario(states, Belief.uniform(2), u, acts, lot)
