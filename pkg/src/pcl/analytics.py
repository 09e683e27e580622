"""Closed-form predictions used as cross-checks and fit targets.

All rates returned in 1/tau0, all energies consumed in k_B T units via
:class:`pcl.model.ModelParams`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import gammaln, logsumexp

from .model import (
    ModelParams,
    effective_reservoir_size,
    excitation_number,
    interaction_parameter,
    kennard_stepanov_ratio,
)

LOG_TAIL_DROP = 46.0  # adaptive truncation: stop once log P fell this far below the peak


class TruncationError(ValueError):
    """Requested truncation leaves non-negligible probability in the tail."""


class RootBracketError(RuntimeError):
    """Chemical-potential elimination failed; carries the bracket state."""

    def __init__(self, msg, bracket, values):
        super().__init__(f"{msg}: bracket={bracket}, f(bracket)={values}")
        self.bracket = bracket
        self.values = values


@dataclass
class NumberDistribution:
    """Photon-number distribution P(0..n_max) with adequacy checks."""

    probabilities: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.probabilities) - 1

    def mean(self) -> float:
        n = np.arange(len(self.probabilities))
        return float(np.dot(n, self.probabilities))

    def variance(self) -> float:
        n = np.arange(len(self.probabilities))
        m = self.mean()
        return float(np.dot((n - m) ** 2, self.probabilities))

    def eta(self) -> float:
        """Relative number fluctuation sqrt(Var[n])/mean[n]."""
        return math.sqrt(self.variance()) / self.mean()

    def validate(self, tol_norm: float = 1e-12, tol_tail: float = 1e-10):
        p = self.probabilities
        if abs(p.sum() - 1.0) > tol_norm:
            raise TruncationError("probabilities do not sum to one: %g" % p.sum())
        if np.any(p < 0):
            raise TruncationError("negative probability entry")
        if len(p) > 1 and p[-1] > tol_tail * p.max():
            raise TruncationError(
                "tail probability %g exceeds %g of the maximum; increase n_max"
                % (p[-1], tol_tail)
            )


def _detailed_balance_logweights(params: ModelParams, x: int, n: np.ndarray) -> np.ndarray:
    """Unnormalized log P(n) for the fixed-excitation steady state.

    Ratio of binomial coefficients C(X, n)/C(M-X+n, n) times the Boltzmann
    factor of E(n) = delta*n + (u/2)*n^2 and the density-of-states weight.
    The 1/n! terms of the two binomials cancel.
    """
    m = params.m_tot
    logw = (
        gammaln(x + 1.0)
        - gammaln(x - n + 1.0)
        - gammaln(m - x + n + 1.0)
        + gammaln(m - x + 1.0)
        + n * math.log(params.w_down / params.w_up)
        - params.delta * n
        - 0.5 * params.u * n * n
    )
    return logw


def detailed_balance_distribution(
    params: ModelParams, x: int, n_max: int | None = None
) -> NumberDistribution:
    """Steady-state photon-number distribution at fixed total excitation.

    Computed in log space; the truncation is grown adaptively until the
    log-weight has dropped ``LOG_TAIL_DROP`` below its peak (or n = X is
    reached, beyond which the probability vanishes identically).
    """
    if x < 0 or x > params.m_tot:
        raise ValueError("total excitation must satisfy 0 <= X <= M_tot")
    if x == 0:
        return NumberDistribution(np.array([1.0]))

    if n_max is not None:
        top = min(n_max, x)
        n = np.arange(top + 1, dtype=np.float64)
        logw = _detailed_balance_logweights(params, x, n)
    else:
        chunk = 4096
        logw = np.empty(0)
        top = -1
        while True:
            lo = top + 1
            top = min(lo + chunk - 1, x)
            n = np.arange(lo, top + 1, dtype=np.float64)
            logw = np.concatenate([logw, _detailed_balance_logweights(params, x, n)])
            if top == x or logw[-1] < logw.max() - LOG_TAIL_DROP:
                break
        # trim to the adaptive cutoff
        peak = logw.max()
        keep = np.nonzero(logw >= peak - LOG_TAIL_DROP)[0][-1] + 1
        logw = logw[: max(keep, 2)]

    p = np.exp(logw - logsumexp(logw))
    p /= p.sum()
    dist = NumberDistribution(p)
    if n_max is not None and dist.n_max < x:
        dist.validate()
    return dist


def bose_einstein_logratio(params: ModelParams, m_up: float, n: float) -> float:
    """log[P(n+1)/P(n)] of the infinite-reservoir limit at mean occupation m_up."""
    m_down = params.m_tot - m_up
    return (
        math.log(m_up / m_down)
        + math.log(params.w_down / params.w_up)
        - (params.delta + params.u * (n + 0.5))
    )


# -- thermodynamic number fluctuations ---------------------------------------


def _scaled_moments(b: float, sigma: float) -> tuple[float, float]:
    """First two moments of p(x) ~ exp(b*x - sigma*x^2/2) on x >= 0 by quadrature."""
    peak = max(b / sigma, 0.0)
    z = -b / math.sqrt(2.0 * sigma)
    if z < -8.0:
        # peak is many widths inside the domain; the truncation at zero is
        # beyond double precision and quadrature of the shifted integrand
        # loses the peak, so use the untruncated Gaussian moments
        return peak, peak * peak + 1.0 / sigma
    shift = b * peak - 0.5 * sigma * peak * peak
    width = 1.0 / math.sqrt(sigma)
    upper = peak + 50.0 * width + 50.0

    def weight(xx):
        return math.exp(b * xx - 0.5 * sigma * xx * xx - shift)

    pts = [peak] if 0.0 < peak < upper else None
    f0 = quad(weight, 0.0, upper, points=pts, limit=200)[0]
    f1 = quad(lambda xx: xx * weight(xx), 0.0, upper, points=pts, limit=200)[0]
    f2 = quad(lambda xx: xx * xx * weight(xx), 0.0, upper, points=pts, limit=200)[0]
    return f1 / f0, f2 / f0


def thermodynamic_eta(sigma: float) -> float:
    """Relative number fluctuation of the continuous grand-canonical gas.

    The partition function of weight exp(-[(delta-mu)n + (u/2)n^2]/T) is
    reduced by the substitution n = n_bar*x to a one-parameter family
    p(x) ~ exp(b x - sigma x^2/2); the chemical potential is eliminated by
    root-finding b such that <x> = 1, and eta = sqrt(<x^2> - 1).
    """
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0.0:
        return 1.0
    lo, hi = -10.0, sigma + 6.0 * math.sqrt(sigma) + 6.0

    def mean_minus_one(b):
        return _scaled_moments(b, sigma)[0] - 1.0

    flo, fhi = mean_minus_one(lo), mean_minus_one(hi)
    if not (flo < 0.0 < fhi) or not (math.isfinite(flo) and math.isfinite(fhi)):
        raise RootBracketError("cannot bracket the chemical potential", (lo, hi), (flo, fhi))
    b = brentq(mean_minus_one, lo, hi, xtol=1e-13, rtol=8.9e-16)
    m1, m2 = _scaled_moments(b, sigma)
    return math.sqrt(max(m2 - m1 * m1, 0.0))


# -- coherence rates ----------------------------------------------------------


def g2zero(params: ModelParams, n_bar: float) -> float:
    """Equal-time excess correlation g2(0) - 1 = eta^2 (dynamical estimate)."""
    if n_bar <= 0:
        raise ValueError("n_bar must be positive")
    sigma = interaction_parameter(params, n_bar)
    m_eff = effective_reservoir_size(params, n_bar)
    return 1.0 / (1.0 + sigma + n_bar * n_bar / m_eff)


def _mean_m_down(params: ModelParams, n_bar: float) -> float:
    eta = math.sqrt(g2zero(params, n_bar))
    _, m_up = excitation_number(params, n_bar, eta)
    return params.m_tot - m_up


def gamma2(params: ModelParams, n_bar: float) -> float:
    """Decay rate of number correlations [1/tau0]."""
    sigma = interaction_parameter(params, n_bar)
    m_eff = effective_reservoir_size(params, n_bar)
    gam = params.b12 * _mean_m_down(params, n_bar)
    return (1.0 + sigma + n_bar * n_bar / m_eff) * gam / n_bar


def gamma1(params: ModelParams, n_bar: float, xi: float) -> float:
    """First-order coherence decay rate B12*M_down/(xi*n_bar) [1/tau0].

    xi = 2 in the grand-canonical limit, 4 in the canonical limit.
    """
    if not (2.0 <= xi <= 4.0):
        raise ValueError("xi must lie in [2, 4]")
    return params.b12 * _mean_m_down(params, n_bar) / (xi * n_bar)


def phase_jump_rate(params: ModelParams, n_bar: float, zeta: float) -> float:
    """Heuristic phase-jump rate B12*M_down/n_bar^zeta; comparison quantity only."""
    if zeta < 1.0:
        raise ValueError("zeta must be at least 1")
    return params.b12 * _mean_m_down(params, n_bar) / n_bar**zeta


@dataclass
class AntibunchingPrediction:
    depth: float  # predicted |g2 - 1| on the intermediate-time plateau
    tau_c2: float
    tau_x: float  # relaxation time of the total excitation number


def antibunching_dip(params: ModelParams, n_bar: float) -> AntibunchingPrediction:
    """Loss-induced long-time antibunching depth and the plateau extent tau_X.

    A positive photon-number fluctuation leaks extra excitation through the
    mirrors before it relaxes, so for tau_c2 << tau << tau_X the correlator
    dips below one by ~ n^2 (B12+B21)^2/(B12 B21 M_tot) * kappa * tau_c2.
    """
    b21 = params.b12 * kennard_stepanov_ratio(params, n_bar)
    tau_c2 = 1.0 / gamma2(params, n_bar)
    dx_dn = params.b12 * b21 * params.m_tot / (n_bar * n_bar * (params.b12 + b21) ** 2)
    if params.kappa == 0.0:
        return AntibunchingPrediction(depth=0.0, tau_c2=tau_c2, tau_x=math.inf)
    depth = params.kappa * tau_c2 / dx_dn
    return AntibunchingPrediction(depth=depth, tau_c2=tau_c2, tau_x=dx_dn / params.kappa)


@dataclass
class CoherencePrediction:
    """Jointly constructed coherence rates satisfying the time-ratio identity."""

    gamma1: float
    gamma2: float
    xi: float
    eta: float
    sigma: float
    tau_x: float

    def __post_init__(self):
        if not (self.gamma1 > 0 and self.gamma2 > 0):
            raise ValueError("decay rates must be positive")
        if not (2.0 <= self.xi <= 4.0):
            raise ValueError("xi must lie in [2, 4]")
        lhs = self.gamma2 / self.gamma1
        rhs = self.xi / (self.eta * self.eta)
        if abs(lhs - rhs) > 1e-12 * abs(rhs):
            raise ValueError("tau_c1/tau_c2 identity violated: %g vs %g" % (lhs, rhs))


def coherence_prediction(params: ModelParams, n_bar: float, xi: float = 2.0) -> CoherencePrediction:
    sigma = interaction_parameter(params, n_bar)
    m_eff = effective_reservoir_size(params, n_bar)
    gam = params.b12 * _mean_m_down(params, n_bar)
    one_over_eta2 = 1.0 + sigma + n_bar * n_bar / m_eff
    return CoherencePrediction(
        gamma1=gam / (xi * n_bar),
        gamma2=one_over_eta2 * gam / n_bar,
        xi=xi,
        eta=math.sqrt(1.0 / one_over_eta2),
        sigma=sigma,
        tau_x=antibunching_dip(params, n_bar).tau_x,
    )


# -- first-order decay laws ----------------------------------------------------


def whittaker_g1(eta: float, gamma2_rate: float, u_rate: float, n_bar: float, tau, mode: str):
    """|g1(tau)| decay laws driven by number fluctuations.

    ``st``    : phase-diffusion decay exp[(eta^2/4)(e^{-G t} - G t - 1)].
    ``henry`` : interaction-converted number noise,
                exp[-(eta^2 u^2 n^2/G^2)(e^{-G t} + G t - 1)]; at short times
                this is Gaussian with characteristic time sqrt(2)/(u n eta).
    ``both``  : their product.

    ``u_rate`` is the Kerr phase speed per photon in rad/tau0.
    """
    tau = np.asarray(tau, dtype=float)
    g = gamma2_rate * tau
    st = np.exp(0.25 * eta * eta * (np.exp(-g) - g - 1.0))
    if mode == "st":
        return st
    henry_amp = (eta * u_rate * n_bar / gamma2_rate) ** 2
    henry = np.exp(-henry_amp * (np.exp(-g) + g - 1.0))
    if mode == "henry":
        return henry
    if mode == "both":
        return st * henry
    raise ValueError("mode must be one of 'st', 'henry', 'both'")


def g1_short_time_interacting(dist: NumberDistribution, u_rate: float, tau):
    """Short-time dephasing factor <exp(-i u n tau)> over a number distribution.

    Returns the direct average and its second-order cumulant approximation
    exp(-i u <n> tau) * exp(-u^2 tau^2 Var[n]/2) for comparison.
    """
    tau = np.asarray(tau, dtype=float)
    n = np.arange(len(dist.probabilities))
    phases = np.exp(-1j * u_rate * np.outer(tau, n))
    direct = phases @ dist.probabilities
    cumulant = np.exp(-1j * u_rate * dist.mean() * tau) * np.exp(
        -0.5 * u_rate * u_rate * tau * tau * dist.variance()
    )
    if direct.shape == ():
        return complex(direct), complex(cumulant)
    return direct, cumulant
