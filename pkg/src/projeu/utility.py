"""Quadratic-form utility of lotteries under a symmetric payoff matrix.

The utility of a lottery ``x`` is ``x' U x``. Writing ``U = P' D P`` shows the
same number is an expected utility: eigenvalues are the payoffs of the
eigenvector outcomes, and ``<x|z_i>**2`` are their probabilities.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from projeu.exceptions import InvariantError
from projeu.linalg import SpectralDecomposition, eigh, reconstruct, sym_matrix
from projeu.lottery import Basis, Lottery, risk_profile

__all__ = [
    "Attitude",
    "PayoffMatrix",
    "utility",
    "from_spectrum",
    "premium",
    "classify",
    "is_vnm_equivalent",
    "eigen_expansion",
    "ALLAIS_MATRIX",
    "allais_scenario",
]

CLASSIFY_TOL = 1e-9


class Attitude(str, enum.Enum):
    VNM_DIAGONAL = "vnm-diagonal"
    RISK_PREFERRING = "risk-preferring"
    UNCERTAINTY_PREFERRING = "uncertainty-preferring"
    INDEFINITE = "indefinite"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    """Symmetric ``n x n`` payoff matrix.

    Accepts anything array-like; near-symmetric input is symmetrized and
    clearly asymmetric input is rejected.
    """

    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", sym_matrix(self.u))

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @functools.cached_property
    def spectrum(self) -> SpectralDecomposition:
        return eigh(self.u)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @property
    def preferred_basis(self) -> Basis:
        return Basis(self.spectrum.eigenvectors)

    def utility(self, x) -> float:
        return utility(self, x)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.u, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, PayoffMatrix):
            return NotImplemented
        return np.array_equal(self.u, other.u)

    def __hash__(self):
        return hash(self.u.tobytes())

    def __repr__(self):
        return f"PayoffMatrix({self.u.tolist()!r})"


def _as_payoff(u) -> PayoffMatrix:
    return u if isinstance(u, PayoffMatrix) else PayoffMatrix(u)


def _as_lottery(x) -> Lottery:
    return x if isinstance(x, Lottery) else Lottery(x)


def utility(u, x) -> float:
    """Quadratic form ``x' U x`` for a lottery ``x``.

    ``x`` is validated as a lottery; arbitrary vectors are rejected.
    """
    u = _as_payoff(u)
    x = _as_lottery(x)
    if x.n != u.n:
        raise InvariantError(f"dimension mismatch: matrix {u.n} vs lottery {x.n}")
    a = x.amplitudes
    return float(a @ u.u @ a)


def eigen_expansion(u, x) -> float:
    """``sum_i lambda_i <x|z_i>**2``: the same utility read as an expected payoff."""
    u = _as_payoff(u)
    probs = risk_profile(_as_lottery(x), u.preferred_basis).probs
    return float(math.fsum(u.eigenvalues * probs))


def from_spectrum(payoffs, basis) -> PayoffMatrix:
    """Build ``U = P' D P`` from eigen-payoffs and a preferred basis (rows of ``P``)."""
    if not isinstance(basis, Basis):
        basis = Basis(basis)
    payoffs = np.asarray(payoffs, dtype=float)
    if payoffs.ndim != 1 or payoffs.shape[0] != basis.n:
        raise InvariantError(f"need {basis.n} payoffs, got shape {payoffs.shape}")
    return PayoffMatrix(reconstruct(SpectralDecomposition(payoffs, basis.vectors)))


def premium(u, i: int, j: int, direct: bool = False) -> float:
    """Premium for the equiprobable mix of outcomes ``i`` and ``j`` (0-based).

    This is the off-diagonal entry ``U_ij``. With ``direct=True`` it is
    instead computed as ``u(e_ij) - (u(e_i) + u(e_j)) / 2`` from lottery
    evaluations, where ``e_ij`` has amplitude ``sqrt(1/2)`` on both outcomes.
    """
    u = _as_payoff(u)
    if i == j:
        raise InvariantError("premium needs two distinct outcomes")
    for k in (i, j):
        if not 0 <= k < u.n:
            raise InvariantError(f"outcome index {k} out of range for n={u.n}")
    if not direct:
        return float(u.u[i, j])
    mix = np.zeros(u.n)
    mix[i] = mix[j] = math.sqrt(0.5)
    e_i = Lottery.degenerate(u.n, i)
    e_j = Lottery.degenerate(u.n, j)
    return utility(u, Lottery(mix)) - 0.5 * (utility(u, e_i) + utility(u, e_j))


def is_vnm_equivalent(u, tol: float = CLASSIFY_TOL) -> bool:
    """True iff every off-diagonal entry is at most ``tol`` in magnitude."""
    m = np.asarray(_as_payoff(u).u)
    off = m - np.diag(np.diag(m))
    return bool(np.max(np.abs(off)) <= tol)


def classify(u, tol: float = CLASSIFY_TOL) -> Attitude:
    """Risk attitude read off the eigenvalue signs.

    Definite matrices are classified first: all eigenvalues above ``tol`` is
    risk-preferring (convex form), all below ``-tol`` uncertainty-preferring
    (concave form). Among the rest, diagonal matrices are ``vnm-diagonal``
    and everything else is ``indefinite``.
    """
    u = _as_payoff(u)
    lam = u.eigenvalues
    if np.all(lam > tol):
        return Attitude.RISK_PREFERRING
    if np.all(lam < -tol):
        return Attitude.UNCERTAINTY_PREFERRING
    if is_vnm_equivalent(u, tol):
        return Attitude.VNM_DIAGONAL
    return Attitude.INDEFINITE


# Outcomes: win 4000, win 3000, win nothing; mild aversion to the zero outcome.
ALLAIS_MATRIX = ((13.0, 0.0, -1.0), (0.0, 10.0, -1.0), (-1.0, -1.0, 0.0))


def allais_scenario():
    """Payoff matrix and the four Allais lotteries ``a, b, c, d``.

    Returns ``(PayoffMatrix, {"a": Lottery, ...})``.
    """
    u = PayoffMatrix(ALLAIS_MATRIX)
    lotteries = {
        "a": Lottery.from_probabilities([0.2, 0.0, 0.8]),
        "b": Lottery.from_probabilities([0.0, 0.25, 0.75]),
        "c": Lottery.from_probabilities([0.8, 0.0, 0.2]),
        "d": Lottery.degenerate(3, 1),
    }
    return u, lotteries
