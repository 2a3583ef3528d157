"""Lotteries on the nonnegative orthant of the unit sphere.

A lottery over ``n`` outcomes is stored by its amplitudes ``x`` with
``x_i >= 0`` and ``sum(x_i**2) == 1``; the outcome probabilities are the
squared amplitudes. Risk profiles are the probabilities a lottery induces
over an arbitrary orthonormal basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from projeu.exceptions import InvariantError
from projeu.linalg import is_orthonormal

__all__ = [
    "Lottery",
    "Basis",
    "RiskProfile",
    "simplex_to_sphere",
    "sphere_to_simplex",
    "risk_profile",
    "mix_profiles",
]

NORM_TOL = 1e-12
RENORMALIZE_TOL = 1e-9
PROB_TOL = 1e-10
BASIS_TOL = 1e-10
# Amplitudes this close below zero are treated as rounding noise.
NEG_NOISE = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Lottery:
    """Unit vector with nonnegative entries.

    Construction renormalizes inputs whose squared norm is within ``1e-9`` of
    one and rejects anything further away.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        x = np.array(self.amplitudes, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise InvariantError(f"lottery must be a non-empty vector, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise InvariantError("lottery has non-finite amplitudes")
        if np.any(x < -NEG_NOISE):
            raise InvariantError(f"lottery amplitudes must be nonnegative, got min {x.min():.3g}")
        x = np.where(x < 0.0, 0.0, x)
        sq = float(np.dot(x, x))
        if abs(sq - 1.0) > NORM_TOL:
            if abs(sq - 1.0) > RENORMALIZE_TOL:
                raise InvariantError(f"lottery is not a unit vector (squared norm {sq:.12g})")
            x = x / np.sqrt(sq)
        object.__setattr__(self, "amplitudes", _frozen(x))

    @classmethod
    def from_probabilities(cls, p) -> "Lottery":
        return simplex_to_sphere(p)

    @classmethod
    def degenerate(cls, n: int, i: int) -> "Lottery":
        """The sure lottery returning outcome ``i`` out of ``n``."""
        x = np.zeros(n)
        x[i] = 1.0
        return cls(x)

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def probabilities(self) -> np.ndarray:
        return sphere_to_simplex(self)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Lottery):
            return NotImplemented
        return np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash(self.amplitudes.tobytes())

    def __repr__(self):
        return f"Lottery({np.array2string(self.amplitudes, precision=6, separator=', ')})"


@dataclass(frozen=True, eq=False)
class Basis:
    """Orthonormal basis of R^n; row ``i`` is basis element ``z_i``.

    Unlike lotteries, basis vectors may have negative components.
    """

    vectors: np.ndarray

    def __post_init__(self):
        z = _frozen(self.vectors)
        if z.ndim != 2 or z.shape[0] != z.shape[1] or z.shape[0] == 0:
            raise InvariantError(f"basis must be a non-empty square matrix, got shape {z.shape}")
        if not is_orthonormal(z, BASIS_TOL):
            raise InvariantError("basis rows are not orthonormal")
        object.__setattr__(self, "vectors", z)

    @classmethod
    def natural(cls, n: int) -> "Basis":
        return cls(np.eye(n))

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def __getitem__(self, i):
        return self.vectors[i]

    def __len__(self):
        return self.n


@dataclass(frozen=True, eq=False)
class RiskProfile:
    """Probability vector over the elements of some basis."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvariantError("risk profile must be a non-empty vector")
        if np.any(p < -PROB_TOL) or np.any(p > 1.0 + PROB_TOL):
            raise InvariantError("risk profile entries must lie in [0, 1]")
        total = float(np.sum(p))
        if abs(total - 1.0) > PROB_TOL:
            raise InvariantError(f"risk profile sums to {total:.12g}, not 1")
        object.__setattr__(self, "probs", _frozen(np.clip(p, 0.0, 1.0)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)

    def __len__(self):
        return self.probs.shape[0]


def _check_simplex(p):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvariantError("probability vector must be one-dimensional and non-empty")
    if np.any(p < 0.0):
        raise InvariantError(f"negative probability {p.min():.3g}")
    total = float(np.sum(p))
    if abs(total - 1.0) > PROB_TOL:
        raise InvariantError(f"probabilities sum to {total:.12g}, not 1")
    return p


def simplex_to_sphere(p) -> Lottery:
    """Map a probability vector to the lottery with amplitudes ``sqrt(p)``."""
    return Lottery(np.sqrt(_check_simplex(p)))


def sphere_to_simplex(x: Lottery) -> np.ndarray:
    """Outcome probabilities of a lottery: its squared amplitudes."""
    amps = x.amplitudes if isinstance(x, Lottery) else Lottery(x).amplitudes
    return amps * amps


def risk_profile(x: Lottery, z: Basis) -> RiskProfile:
    """Born-rule probabilities ``<x|z_i>**2`` of lottery ``x`` over basis ``z``."""
    if not isinstance(z, Basis):
        z = Basis(z)
    amps = np.asarray(x, dtype=float)
    if amps.shape[0] != z.n:
        raise InvariantError(f"dimension mismatch: lottery {amps.shape[0]} vs basis {z.n}")
    proj = z.vectors @ amps
    return RiskProfile(proj * proj)


def mix_profiles(a: float, p: RiskProfile, q: RiskProfile) -> RiskProfile:
    """Convex combination ``a*p + (1-a)*q`` of two risk profiles."""
    if not 0.0 <= a <= 1.0:
        raise InvariantError(f"mixing weight {a} outside [0, 1]")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise InvariantError(f"length mismatch: {p.shape[0]} vs {q.shape[0]}")
    return RiskProfile(a * p + (1.0 - a) * q)
