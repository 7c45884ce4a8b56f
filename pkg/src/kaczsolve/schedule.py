"""Scalar sequences that drive the accelerated solvers.

One step-ahead recurrence produces, for each iteration k, the momentum scalar
gamma_k (the larger root of  g^2 - (g/m)(1 - lam*g_{k-1}^2) - g_{k-1}^2 = 0),
the mixing weights alpha_k and beta_k, and the combination coefficients
p_k/q_k/r_k used by the cached sparse solver.

Numerical notes:

* The larger root is evaluated as (c + sqrt(c^2 + 4 g_{k-1}^2))/2 with
  c = (1 - lam*g_{k-1}^2)/m. Since gamma_{k-1} <= 1/sqrt(lam), c >= 0 up to
  rounding, so the additive branch is cancellation-free.
* alpha_k is evaluated as 1/(m*gamma_k + lam*gamma_{k-1}^2), which is
  algebraically equal to the textbook ratio (m - gamma_k*lam)/(gamma_k*(m^2 -
  lam)) but stays finite at the admissible boundary lam = m.
* Validity requires lam <= lambda_min(A^T A) for the convergence guarantee;
  since lambda_min is generally unknown, only the provable safety envelope
  0 <= lam <= m is enforced here. Choosing lam above lambda_min silently
  voids the guarantee (the iteration itself remains well defined).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidLambdaError


@dataclass(frozen=True)
class ScheduleEntry:
    """Coefficients consumed by one solver iteration."""

    k: int
    gamma: float
    alpha: float
    beta: float
    p: float
    q: float
    r: float


class ScheduleStream:
    """Streaming generator of schedule entries for unbounded iteration counts.

    Keeps O(1) state; `build_schedule` is a thin array-materializing wrapper
    around this class, so the two always agree bit for bit.
    """

    def __init__(self, m: int, lam: float):
        if m < 1:
            raise ValueError("m must be a positive integer")
        if not 0.0 <= lam <= m:
            raise InvalidLambdaError(f"lambda must lie in [0, m] = [0, {m}], got {lam}")
        self.m = int(m)
        self.lam = float(lam)
        self._k = 0
        self._gamma_prev = 0.0
        self._gamma = self._next_gamma(0.0)
        self._alpha = self._alpha_from(self._gamma, 0.0)

    def _next_gamma(self, gamma_prev: float) -> float:
        c = (1.0 - self.lam * gamma_prev * gamma_prev) / self.m
        return 0.5 * (c + np.sqrt(c * c + 4.0 * gamma_prev * gamma_prev))

    def _alpha_from(self, gamma: float, gamma_prev: float) -> float:
        return 1.0 / (self.m * gamma + self.lam * gamma_prev * gamma_prev)

    def __iter__(self):
        return self

    def __next__(self) -> ScheduleEntry:
        gamma, alpha = self._gamma, self._alpha
        gamma_next = self._next_gamma(gamma)
        alpha_next = self._alpha_from(gamma_next, gamma)
        beta = 1.0 - gamma * self.lam / self.m
        p = alpha_next * (1.0 - self.m * gamma)
        q = 1.0 - alpha_next + self.m * alpha_next * gamma
        r = 1.0 - alpha_next + alpha_next * gamma
        entry = ScheduleEntry(self._k, gamma, alpha, beta, p, q, r)
        self._gamma_prev = gamma
        self._gamma = gamma_next
        self._alpha = alpha_next
        self._k += 1
        return entry


@dataclass(frozen=True)
class AccelSchedule:
    """Precomputed schedule for an iteration budget K.

    gamma has K+2 entries (index 0 holds the seed value gamma_{-1} = 0, index
    j+1 holds gamma_j); alpha, beta, p, q, r have K+1 entries for k = 0..K.
    """

    m: int
    lam: float
    gamma: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray

    @property
    def budget(self) -> int:
        return self.alpha.shape[0] - 1

    def gamma_at(self, k: int) -> float:
        """gamma_k, accepting k = -1 for the seed value."""
        return float(self.gamma[k + 1])

    def identity_residuals(self) -> dict:
        """Max deviations of the defining identities, scaled by the largest term.

        The raw identity terms grow like gamma_k^2 (up to 1/lam), so absolute
        float64 residuals necessarily scale with them; each residual is
        therefore measured relative to max(1, gamma_k^2).
        """
        g = self.gamma[1:]
        gp = self.gamma[:-1]
        scale = np.maximum(1.0, g * g)
        rec = np.abs(g * g - g / self.m - (1.0 - g * self.lam / self.m) * gp * gp)
        eqn_mix = np.abs(g * g - g / self.m - self.beta * gp * gp)
        lhs = (1.0 - self.alpha) / self.alpha
        rhs = self.m * gp * gp / g
        ratio = np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))
        return {
            "recurrence": float(np.max(rec / scale)),
            "beta_identity": float(np.max(eqn_mix / scale)),
            "alpha_identity": float(np.max(ratio)),
        }

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "lambda": self.lam,
            "gamma": self.gamma.tolist(),
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "p": self.p.tolist(),
            "q": self.q.tolist(),
            "r": self.r.tolist(),
        }


def build_schedule(m: int, lam: float, K: int) -> AccelSchedule:
    """Materialize the schedule for iterations 0..K.

    Raises InvalidLambdaError unless 0 <= lam <= m.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    stream = ScheduleStream(m, lam)
    gamma = np.empty(K + 2)
    alpha = np.empty(K + 1)
    beta = np.empty(K + 1)
    p = np.empty(K + 1)
    q = np.empty(K + 1)
    r = np.empty(K + 1)
    gamma[0] = 0.0
    for k in range(K + 1):
        e = next(stream)
        gamma[k + 1] = e.gamma
        alpha[k] = e.alpha
        beta[k] = e.beta
        p[k] = e.p
        q[k] = e.q
        r[k] = e.r
    for arr in (gamma, alpha, beta, p, q, r):
        arr.flags.writeable = False
    return AccelSchedule(int(m), float(lam), gamma, alpha, beta, p, q, r)


@dataclass(frozen=True)
class RateConstants:
    """Linear-rate constants sigma1 = 1 + sqrt(lam)/(2m), sigma2 = 1 - sqrt(lam)/(2m)."""

    sigma1: float
    sigma2: float

    @property
    def decrease_factor(self) -> float:
        """Asymptotic per-iteration decrease factor sigma1**-2 (about 1 - sqrt(lam)/m)."""
        return self.sigma1**-2


def rate_constants(m: int, lam: float) -> RateConstants:
    if lam < 0:
        raise InvalidLambdaError("lambda must be nonnegative")
    h = np.sqrt(lam) / (2.0 * m)
    return RateConstants(1.0 + h, 1.0 - h)
