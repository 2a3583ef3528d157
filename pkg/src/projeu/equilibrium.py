"""Equilibria of finite games with quadratic-form preferences.

Each player ``i`` randomizes with a lottery ``x_i`` over their own actions.
Opponents' squared amplitudes act as a belief over opponent action profiles,
and the belief mixes the per-profile payoff matrices linearly:

    M_i = sum_{a_-i} prod_{j != i} x_j[a_j]**2 * U_i[a_-i]

Player ``i`` then receives ``x_i' M_i x_i``. A best response maximizes that
quadratic form over the nonnegative orthant of the unit sphere.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from projeu.exceptions import ConvergenceError, InvariantError
from projeu.linalg import eigh, sym_matrix
from projeu.lottery import Lottery

__all__ = [
    "FiniteGame",
    "EquilibriumResult",
    "expected_payoff_matrix",
    "best_response",
    "peu_payoff",
    "verify",
    "solve",
    "uniform_profile",
    "restart_profiles",
    "solve_with_restarts",
]

logger = logging.getLogger(__name__)

FEASIBLE_TOL = 1e-12
KKT_TOL = 1e-9
TIE_TOL = 1e-12
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10000
DEFAULT_DAMPING = 0.5
DEFAULT_PATIENCE = 500
REFINE_EVERY = 20


class FiniteGame:
    """Finite game whose payoffs are symmetric matrices per opponent profile.

    Parameters
    ----------
    payoffs : sequence of array-like
        ``payoffs[i]`` has shape ``(n_j for j != i) + (n_i, n_i)``: for every
        pure action profile of the other players (in player order) a
        symmetric ``n_i x n_i`` payoff matrix for player ``i``.
    """

    def __init__(self, payoffs):
        payoffs = [np.array(p, dtype=float) for p in payoffs]
        if len(payoffs) < 2:
            raise InvariantError("a game needs at least two players")
        actions = []
        for i, p in enumerate(payoffs):
            if p.ndim != len(payoffs) + 1 or p.shape[-1] != p.shape[-2] or p.shape[-1] < 1:
                raise InvariantError(f"player {i}: payoff array has shape {p.shape}")
            actions.append(p.shape[-1])
        for i, p in enumerate(payoffs):
            expected = tuple(n for j, n in enumerate(actions) if j != i) + (actions[i],) * 2
            if p.shape != expected:
                raise InvariantError(f"player {i}: payoff array shape {p.shape}, expected {expected}")
            if not np.all(np.isfinite(p)):
                raise InvariantError(f"player {i}: non-finite payoffs")
            for idx in np.ndindex(*p.shape[:-2]):
                try:
                    p[idx] = sym_matrix(p[idx])
                except InvariantError as exc:
                    raise InvariantError(f"player {i}, opponent profile {idx}: {exc}") from None
            p.setflags(write=False)
        self.payoffs = tuple(payoffs)
        self.actions = tuple(actions)

    @classmethod
    def from_profiles(cls, actions, matrices):
        """Build from ``matrices[i][opponent_profile_tuple] -> n_i x n_i matrix``."""
        actions = tuple(int(n) for n in actions)
        payoffs = []
        for i, table in enumerate(matrices):
            opp = tuple(n for j, n in enumerate(actions) if j != i)
            arr = np.full(opp + (actions[i], actions[i]), np.nan)
            for prof in itertools.product(*(range(n) for n in opp)):
                if prof not in table:
                    raise InvariantError(f"player {i}: missing payoff matrix for opponent profile {prof}")
                arr[prof] = np.asarray(table[prof], dtype=float)
            extra = set(table) - set(itertools.product(*(range(n) for n in opp)))
            if extra:
                raise InvariantError(f"player {i}: unknown opponent profiles {sorted(extra)}")
            payoffs.append(arr)
        return cls(payoffs)

    @classmethod
    def from_bimatrix(cls, a, b):
        """Two-player game with diagonal matrices reproducing bimatrix payoffs.

        ``a[r, c]`` and ``b[r, c]`` are the row and column player's payoffs when
        row plays ``r`` and column plays ``c``.
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.ndim != 2 or a.shape != b.shape:
            raise InvariantError("bimatrix payoffs must be two equal-shape matrices")
        row = np.stack([np.diag(a[:, c]) for c in range(a.shape[1])])
        col = np.stack([np.diag(b[r, :]) for r in range(a.shape[0])])
        return cls([row, col])

    @property
    def players(self) -> int:
        return len(self.actions)

    def matrix(self, i, opponent_profile) -> np.ndarray:
        return self.payoffs[i][tuple(opponent_profile)]

    def opponent_profiles(self, i):
        opp = [n for j, n in enumerate(self.actions) if j != i]
        return itertools.product(*(range(n) for n in opp))

    def __eq__(self, other):
        if not isinstance(other, FiniteGame):
            return NotImplemented
        return self.actions == other.actions and all(
            np.array_equal(p, q) for p, q in zip(self.payoffs, other.payoffs)
        )

    def __repr__(self):
        return f"FiniteGame(actions={self.actions})"


@dataclass
class EquilibriumResult:
    profile: tuple
    iterations: int
    residual: float
    gains: np.ndarray = field(default=None, repr=False)

    @property
    def beliefs(self):
        """Squared amplitudes of each player's strategy."""
        return tuple(x.probabilities for x in self.profile)


def uniform_profile(g: FiniteGame) -> tuple:
    return tuple(Lottery(np.full(n, 1.0 / np.sqrt(n))) for n in g.actions)


def _check_profile(g, profile, skip=None):
    if len(profile) != g.players:
        raise InvariantError(f"profile has {len(profile)} strategies for {g.players} players")
    out = []
    for j, (x, n) in enumerate(zip(profile, g.actions)):
        if j == skip and x is None:
            out.append(None)
            continue
        x = x if isinstance(x, Lottery) else Lottery(x)
        if x.n != n:
            raise InvariantError(f"player {j}: strategy has {x.n} entries, expected {n}")
        out.append(x)
    return tuple(out)


def expected_payoff_matrix(g: FiniteGame, i: int, others) -> np.ndarray:
    """Belief-weighted payoff matrix of player ``i``.

    ``others`` is a full strategy profile; entry ``i`` is ignored and may be
    ``None``.
    """
    others = _check_profile(g, others, skip=i)
    t = g.payoffs[i]
    for j, x in enumerate(others):
        if j == i:
            continue
        t = np.tensordot(x.probabilities, t, axes=(0, 0))
    return sym_matrix(t)


def peu_payoff(g: FiniteGame, profile, i: int) -> float:
    """``x_i' M_i x_i`` where ``M_i`` mixes player ``i``'s matrices by belief."""
    profile = _check_profile(g, profile)
    x = profile[i].amplitudes
    return float(x @ expected_payoff_matrix(g, i, profile) @ x)


def best_response(m):
    """Maximize ``x' M x`` over unit vectors with nonnegative entries.

    Enumerates supports ``K``: the leading eigenvector of ``M[K, K]`` is a
    candidate when it can be signed nonnegative and satisfies the first-order
    condition ``(M x)_k <= 0`` off the support. The best candidate wins; ties
    go to the lexicographically smallest support.

    Returns
    -------
    (Lottery, float)
    """
    m = np.asarray(sym_matrix(m))
    n = m.shape[0]
    scale = max(1.0, float(np.max(np.abs(m))))
    best = None
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            k = list(support)
            if size == 1:
                vec = np.ones(1)
            else:
                vec = eigh(m[np.ix_(k, k)]).eigenvectors[0]
                if np.all(vec >= -FEASIBLE_TOL):
                    pass
                elif np.all(vec <= FEASIBLE_TOL):
                    vec = -vec
                else:
                    continue
            x = np.zeros(n)
            x[k] = np.clip(vec, 0.0, None)
            x /= np.linalg.norm(x)
            grad = m @ x
            grad[k] = -np.inf
            if size < n and grad.max() > KKT_TOL * scale:
                continue
            value = float(x @ m @ x)
            if best is None or value > best[0] + TIE_TOL * scale or (
                abs(value - best[0]) <= TIE_TOL * scale and support < best[1]
            ):
                best = (value, support, x)
    value, _, x = best
    return Lottery(x), value


def _gains(g, profile):
    gains, responses = [], []
    for i in range(g.players):
        m = expected_payoff_matrix(g, i, profile)
        br, value = best_response(m)
        x = profile[i].amplitudes
        gains.append(max(0.0, value - float(x @ m @ x)))
        responses.append(br)
    return np.array(gains), responses


def verify(g: FiniteGame, profile, tol: float = DEFAULT_TOL):
    """Check the equilibrium condition.

    Returns ``(ok, gains)`` where ``gains[i]`` is what player ``i`` could add
    by switching to a best response, and ``ok`` means every gain is at most
    ``tol``.
    """
    profile = _check_profile(g, profile)
    gains, _ = _gains(g, profile)
    return bool(np.all(gains <= tol)), gains


def _refine(g, profile):
    """Solve the on-support stationarity equations from ``profile``.

    Each player's amplitudes restricted to their current support must be an
    eigenvector of the restricted belief-weighted matrix. Returns a new
    profile or ``None`` if the least-squares solve fails.
    """
    supports = [np.flatnonzero(x.amplitudes > 1e-9) for x in profile]
    sizes = [len(s) for s in supports]
    offsets = np.cumsum([0] + sizes)

    def unpack(y):
        xs = []
        for i, (s, n) in enumerate(zip(supports, g.actions)):
            v = np.zeros(n)
            v[s] = y[offsets[i]:offsets[i + 1]]
            xs.append(v / np.linalg.norm(v))
        return xs

    def residuals(y):
        xs = unpack(y)
        out = []
        for i, s in enumerate(supports):
            t = g.payoffs[i]
            for j, v in enumerate(xs):
                if j != i:
                    t = np.tensordot(v * v, t, axes=(0, 0))
            xi = xs[i][s]
            mi = t[np.ix_(s, s)]
            mx = mi @ xi
            out.append(mx - float(xi @ mx) * xi)
            out.append([np.sum(y[offsets[i]:offsets[i + 1]] ** 2) - 1.0])
        return np.concatenate(out)

    y0 = np.concatenate([x.amplitudes[s] for x, s in zip(profile, supports)])
    try:
        sol = least_squares(residuals, y0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    except (ValueError, np.linalg.LinAlgError):
        return None
    xs = unpack(sol.x)
    if any(np.any(v < -FEASIBLE_TOL) or not np.all(np.isfinite(v)) for v in xs):
        return None
    return tuple(Lottery(np.clip(v, 0.0, None)) for v in xs)


def solve(
    g: FiniteGame,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    damping: float = DEFAULT_DAMPING,
    init=None,
    refine: bool = True,
    patience: int | None = DEFAULT_PATIENCE,
) -> EquilibriumResult:
    """Damped best-response iteration.

    Players are visited in turn; each one whose best-response gain exceeds
    ``tol`` moves to ``normalize((1 - damping) * x_i + damping * br_i)``
    against the others' latest strategies, and players already within
    ``tol`` stay put. With ``refine=True`` the iteration periodically
    tries a least-squares solve of the on-support stationarity equations and
    keeps it only when the residual drops. On success, players with a
    positive remaining gain are snapped to their exact best responses when
    that does not raise the residual.

    Raises
    ------
    ConvergenceError
        After ``max_iter`` iterations without reaching ``tol``, or once the
        best residual seen has not improved for ``patience`` consecutive
        iterations (``None`` disables the stall check). ``state`` holds the
        last profile and ``residual`` its largest gain.
    """
    if tol <= 0:
        raise InvariantError("tol must be positive")
    if not 0.0 < damping <= 1.0:
        raise InvariantError(f"damping must lie in (0, 1], got {damping}")
    profile = _check_profile(g, init) if init is not None else uniform_profile(g)

    gains, responses = _gains(g, profile)
    best_seen, best_at = np.inf, 0
    for it in range(max_iter + 1):
        residual = float(np.max(gains))
        if residual <= tol:
            profile, gains = _snap(g, profile, gains, responses)
            return EquilibriumResult(profile, it, float(np.max(gains)), gains)
        if it == max_iter:
            break
        if residual < best_seen * (1.0 - 1e-6):
            best_seen, best_at = residual, it
        elif patience is not None and it - best_at >= patience:
            raise ConvergenceError(
                f"best-response iteration stalled at iteration {it} (residual {residual:.3g})",
                state=profile,
                residual=residual,
            )
        if refine and it % REFINE_EVERY == REFINE_EVERY - 1:
            candidate = _refine(g, profile)
            if candidate is not None:
                c_gains, c_responses = _gains(g, candidate)
                if np.max(c_gains) < residual:
                    logger.debug("refinement at iteration %d: %.3g -> %.3g", it, residual, np.max(c_gains))
                    profile, gains, responses = candidate, c_gains, c_responses
                    continue
        # Players move in turn, each against the others' latest strategies.
        profile = list(profile)
        for i in range(g.players):
            if i == 0:
                br, gain = responses[0], gains[0]
            else:
                m = expected_payoff_matrix(g, i, profile)
                br, value = best_response(m)
                x = profile[i].amplitudes
                gain = value - float(x @ m @ x)
            if gain > tol:
                profile[i] = Lottery(_mix(profile[i].amplitudes, br.amplitudes, damping))
        profile = tuple(profile)
        gains, responses = _gains(g, profile)

    raise ConvergenceError(
        f"best-response iteration did not converge in {max_iter} iterations "
        f"(residual {residual:.3g})",
        state=profile,
        residual=residual,
    )


def _snap(g, profile, gains, responses):
    # Damped steps reach a pure equilibrium only in the limit; jumping the
    # still-improving players to their best responses lands on it exactly.
    if not np.any(gains > 0.0):
        return profile, gains
    candidate = tuple(br if gain > 0.0 else x for x, br, gain in zip(profile, responses, gains))
    c_gains, _ = _gains(g, candidate)
    if np.max(c_gains) <= np.max(gains):
        return candidate, c_gains
    return profile, gains


def _mix(x, br, damping):
    y = (1.0 - damping) * x + damping * br
    return y / np.linalg.norm(y)


def restart_profiles(g: FiniteGame, levels=(0.1, 0.5, 0.9)):
    """Grid of starting profiles.

    Each player puts probability ``level`` on their first action and spreads
    the rest evenly; the grid is the product over players, so two players
    and three levels give nine profiles.
    """
    per_player = []
    for n in g.actions:
        options = []
        for level in levels:
            if n == 1:
                p = np.ones(1)
            else:
                p = np.full(n, (1.0 - level) / (n - 1))
                p[0] = level
            options.append(Lottery(np.sqrt(p)))
        per_player.append(options)
    return [tuple(c) for c in itertools.product(*per_player)]


def solve_with_restarts(g: FiniteGame, profiles=None, **kwargs) -> EquilibriumResult:
    """Run :func:`solve` from the default start, then from each restart profile.

    Returns the first converged result. Raises the :class:`ConvergenceError`
    with the smallest residual if every start fails.
    """
    starts = [None] + list(restart_profiles(g) if profiles is None else profiles)
    best = None
    for init in starts:
        try:
            return solve(g, init=init, **kwargs)
        except ConvergenceError as exc:
            if best is None or exc.residual < best.residual:
                best = exc
    raise ConvergenceError(
        f"no start converged; best residual {best.residual:.3g}",
        state=best.state,
        residual=best.residual,
    )
