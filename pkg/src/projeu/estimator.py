"""scikit-learn compatible wrapper around a payoff matrix.

``ProjectiveUtility`` treats each row of ``X`` as a lottery (probabilities
by default) so it can sit at the end of a ``Pipeline``: ``transform`` gives
the risk profile over the preferred basis and ``predict`` gives utilities.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from projeu.exceptions import InvariantError
from projeu.utility import PayoffMatrix, classify

__all__ = ["ProjectiveUtility", "check_lotteries"]


def check_lotteries(X, input="probabilities", n_features=None, tol=1e-10):
    """Validate a 2-D array of lotteries and return their amplitudes.

    Parameters
    ----------
    X : array-like of shape (n_samples, n_outcomes)
    input : {"probabilities", "amplitudes"}
        How rows are coordinatized.
    n_features : int, optional
        Required number of columns.
    tol : float
        Allowed deviation of row sums (probabilities) or squared norms
        (amplitudes) from one.
    """
    X = check_array(X, dtype=np.float64)
    if n_features is not None and X.shape[1] != n_features:
        raise InvariantError(f"X has {X.shape[1]} columns, expected {n_features}")
    if np.any(X < 0.0):
        raise InvariantError("lottery rows must be nonnegative")
    if input == "probabilities":
        mass = X.sum(axis=1)
        amps = np.sqrt(X)
    elif input == "amplitudes":
        mass = np.einsum("ij,ij->i", X, X)
        amps = X
    else:
        raise ValueError(f"input must be 'probabilities' or 'amplitudes', got {input!r}")
    bad = np.flatnonzero(np.abs(mass - 1.0) > tol)
    if bad.size:
        raise InvariantError(f"row {bad[0]} is not normalized (total {mass[bad[0]]:.12g})")
    return amps / np.sqrt(np.einsum("ij,ij->i", amps, amps))[:, None]


class ProjectiveUtility(TransformerMixin, BaseEstimator):
    """Evaluate lotteries under a fixed symmetric payoff matrix.

    Parameters
    ----------
    payoff_matrix : array-like of shape (n, n)
        Symmetric payoff matrix.
    input : {"probabilities", "amplitudes"}, default="probabilities"
        Coordinatization of the rows passed to ``transform``/``predict``.
    tol : float, default=1e-9
        Eigenvalue tolerance for the attitude classification.

    Attributes
    ----------
    payoff_ : PayoffMatrix
    eigenvalues_ : ndarray of shape (n,)
        Payoffs of the preferred outcomes, descending.
    components_ : ndarray of shape (n, n)
        Preferred basis, one outcome per row.
    attitude_ : Attitude
    n_features_in_ : int
    """

    def __init__(self, payoff_matrix=None, input="probabilities", tol=1e-9):
        self.payoff_matrix = payoff_matrix
        self.input = input
        self.tol = tol

    def fit(self, X=None, y=None):
        if self.payoff_matrix is None:
            raise ValueError("payoff_matrix must be set before fit")
        self.payoff_ = PayoffMatrix(self.payoff_matrix)
        spectrum = self.payoff_.spectrum
        self.eigenvalues_ = np.array(spectrum.eigenvalues)
        self.components_ = np.array(spectrum.eigenvectors)
        self.attitude_ = classify(self.payoff_, self.tol)
        self.n_features_in_ = self.payoff_.n
        if X is not None:
            check_lotteries(X, self.input, self.n_features_in_)
        return self

    def _amplitudes(self, X):
        check_is_fitted(self, "payoff_")
        return check_lotteries(X, self.input, self.n_features_in_)

    def transform(self, X):
        """Risk profiles ``<x|z_i>**2`` over the preferred basis."""
        proj = self._amplitudes(X) @ self.components_.T
        return proj * proj

    def predict(self, X):
        """Utilities ``x' U x``."""
        a = self._amplitudes(X)
        return np.einsum("ki,ij,kj->k", a, self.payoff_.u, a)

    def score_samples(self, X):
        return self.predict(X)

    def prefers(self, X, Y):
        """Elementwise ``+1``/``0``/``-1`` comparing rows of ``X`` with rows of ``Y``."""
        diff = self.predict(X) - self.predict(Y)
        return np.sign(np.where(np.abs(diff) <= 1e-12, 0.0, diff)).astype(int)
