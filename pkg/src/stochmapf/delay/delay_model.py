# -*- coding: utf-8 -*-
"""Gamma delay model: sampling, posterior bookkeeping and MAP estimation.

The delay x of an edge traversal follows Gamma(shape=a, scale=b). Unknown
(a, b) carry a conjugate-form prior

    pi(a, b) ~ p**(a - 1) * exp(-q / b) / (Gamma(a)**r * b**(a * s))

with sufficient statistics (p, q, r, s). Observing delays x_1..x_m gives
p' = p * prod(x_i), q' = q + sum(x_i), r' = r + m and s' = s + m. The product
is kept as log_p to stay finite for long observation histories.

The MAP estimate is the stationary point of the posterior::

    ln p' - r' * digamma(a) - s' * ln b = 0
    b = q' / (a * s')

which is solved as a one dimensional root problem in b.
"""

import math
from collections import namedtuple

import numpy as np
from scipy import optimize

from stochmapf.common import SMAPFDialog
from stochmapf.common.constants import MAP_TOLERANCE, NEWTON_MAXITER, PRIOR
from stochmapf.common.exceptions import NoConvergenceError, NonPositiveObservationError
from stochmapf.delay.special import digamma, trigamma

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def _positive(name, value):
    value = float(value)
    if not (value > 0.0 and math.isfinite(value)):
        raise ValueError("{} must be positive and finite, got {}".format(name, value))
    return value


class GammaParams(namedtuple("GammaParams", "shape scale")):
    """Shape (a) and scale (b) of a gamma distribution."""

    __slots__ = ()

    def __new__(cls, shape, scale):
        return super().__new__(
            cls, _positive("shape", shape), _positive("scale", scale)
        )

    @property
    def mean(self):
        return self.shape * self.scale

    @property
    def variance(self):
        return self.shape * self.scale ** 2


class PriorConfig(namedtuple("PriorConfig", "a_prior b_prior r s")):
    """Prior hyperparameters: prior mode (a_prior, b_prior) and weights r, s."""

    __slots__ = ()

    def __new__(cls, a_prior, b_prior, r, s):
        return super().__new__(
            cls,
            _positive("a_prior", a_prior),
            _positive("b_prior", b_prior),
            _positive("r", r),
            _positive("s", s),
        )

    @classmethod
    def default(cls):
        """The default prior (1.0, 0.2, 0.1, 0.1)."""
        return cls(*PRIOR)

    @classmethod
    def from_string(cls, text):
        """Parse 'a,b,r,s' as given on the command line."""
        parts = [part.strip() for part in str(text).split(",")]
        if len(parts) != 4:
            raise ValueError("Prior must be given as a,b,r,s; got {}".format(text))
        return cls(*[float(part) for part in parts])

    def as_params(self):
        return GammaParams(self.a_prior, self.b_prior)


class PosteriorState(namedtuple("PosteriorState", "log_p q r s n_obs")):
    """Posterior sufficient statistics of one edge (log_p stored in log space)."""

    __slots__ = ()

    def __new__(cls, log_p, q, r, s, n_obs=0):
        log_p = float(log_p)
        if not math.isfinite(log_p):
            raise ValueError("log_p must be finite, got {}".format(log_p))
        n_obs = int(n_obs)
        if n_obs < 0:
            raise ValueError("n_obs must be non-negative")
        return super().__new__(
            cls, log_p, _positive("q", q), _positive("r", r), _positive("s", s), n_obs
        )

    @classmethod
    def from_prior(cls, prior, literal=False):
        """Initial posterior (no observations) for the given prior."""
        log_p, q = prior_to_pq(prior, literal=literal)
        return cls(log_p, q, prior.r, prior.s, 0)


def prior_to_pq(prior, literal=False):
    """Return (log_p, q) making (a_prior, b_prior) the mode of the prior.

    The prior mode satisfies the stationarity equations, which gives
    log_p = r * digamma(a_prior) + s * ln(b_prior) and
    q = a_prior * b_prior * s.

    Args:
        prior (PriorConfig): Prior hyperparameters.
        literal (bool): If True, use ``- s * ln(b_prior)`` in log_p. Kept for
            comparison; with this sign the prior mode is not a fixed point of
            :func:`map_estimate` unless b_prior == 1.

    Returns:
        Tuple (log_p, q).
    """
    sign = -1.0 if literal else 1.0
    log_p = prior.r * digamma(prior.a_prior) + sign * prior.s * math.log(prior.b_prior)
    q = prior.a_prior * prior.b_prior * prior.s
    return log_p, q


def observe(state, x):
    """Return the posterior after observing one delay x > 0.

    Raises:
        NonPositiveObservationError: If x <= 0.
    """
    x = float(x)
    if not (x > 0.0 and math.isfinite(x)):
        raise NonPositiveObservationError("Delay must be positive, got {}".format(x))
    return PosteriorState(
        state.log_p + math.log(x),
        state.q + x,
        state.r + 1.0,
        state.s + 1.0,
        state.n_obs + 1,
    )


def observe_many(state, xvalues):
    """Observe a sequence of delays; order does not matter (up to rounding)."""
    xarr = np.asarray(list(xvalues), dtype=np.float64)
    if xarr.size == 0:
        return state
    if not np.all(xarr > 0.0):
        raise NonPositiveObservationError("All delays must be positive")
    return PosteriorState(
        state.log_p + float(np.sum(np.log(xarr))),
        state.q + float(np.sum(xarr)),
        state.r + xarr.size,
        state.s + xarr.size,
        state.n_obs + int(xarr.size),
    )


def map_objective(state, scale):
    """f(b) = (log_p - s ln b) - r digamma(q / (b s)); zero at the MAP scale."""
    shape = state.q / (scale * state.s)
    return (state.log_p - state.s * math.log(scale)) - state.r * digamma(shape)


def _map_derivative(state, scale):
    shape = state.q / (scale * state.s)
    return -state.s / scale + state.r * trigamma(shape) * shape / scale


def _from_scale(state, scale):
    return GammaParams(state.q / (scale * state.s), scale)


def _bracket(state, scale0, maxexpand):
    low = high = scale0
    flow = fhigh = map_objective(state, scale0)
    for _ in range(maxexpand):
        if flow * fhigh <= 0.0:
            return low, high
        low *= 0.5
        high *= 2.0
        flow = map_objective(state, low)
        fhigh = map_objective(state, high)
    if flow * fhigh <= 0.0:
        return low, high
    raise NoConvergenceError("Cannot bracket the MAP scale from b0={}".format(scale0))


def map_estimate(state, a_init=1.0, tol=MAP_TOLERANCE, maxiter=NEWTON_MAXITER):
    """Return the MAP estimate (a_map, b_map) of a posterior.

    Newton's method on f(b) starting at b0 = q / (s * a_init). If an iterate
    leaves (0, inf) or the cap is reached, a bracket is found by geometric
    expansion around b0 and the root is found with Brent's method in log(b).

    Args:
        state (PosteriorState): Posterior statistics.
        a_init (float): Shape used for the initial scale, normally the prior
            shape the posterior was built from.
        tol (float): Tolerance on |f(b_map)|.
        maxiter (int): Newton iteration cap.

    Returns:
        GammaParams

    Raises:
        NoConvergenceError: If neither Newton nor the bracketed fallback
            reaches the tolerance.
    """
    scale0 = state.q / (state.s * _positive("a_init", a_init))
    scale = scale0

    for _ in range(maxiter):
        fval = map_objective(state, scale)
        if abs(fval) <= tol:
            return _from_scale(state, scale)
        deriv = _map_derivative(state, scale)
        if deriv == 0.0 or not math.isfinite(deriv):
            break
        newscale = scale - fval / deriv
        if not (newscale > 0.0 and math.isfinite(newscale)):
            break
        if abs(newscale - scale) <= 4.0 * np.finfo(float).eps * scale:
            # no further progress possible in double precision
            logger.debug("Newton stagnated at |f|=%s", abs(fval))
            return _from_scale(state, newscale)
        scale = newscale

    logger.info("Newton failed for MAP scale, use bracketed fallback")
    low, high = _bracket(state, scale0, maxiter)
    try:
        logscale = optimize.brentq(
            lambda lscale: map_objective(state, math.exp(lscale)),
            math.log(low),
            math.log(high),
            xtol=1.0e-15,
            maxiter=maxiter,
        )
    except RuntimeError as err:
        raise NoConvergenceError("Bracketed MAP search failed: {}".format(err)) from err

    scale = math.exp(logscale)
    # polish
    for _ in range(5):
        fval = map_objective(state, scale)
        if abs(fval) <= tol:
            break
        newscale = scale - fval / _map_derivative(state, scale)
        if not low <= newscale <= high:
            break
        scale = newscale

    residual = abs(map_objective(state, scale))
    if residual > max(tol, 1.0e-8):
        raise NoConvergenceError(
            "MAP scale did not converge, |f|={}".format(residual)
        )
    return _from_scale(state, scale)


def sample_delay(params, rng, size=None):
    """Draw delay(s) from Gamma(shape, scale) with a numpy Generator.

    numpy's gamma sampler is exact (Marsaglia-Tsang with a boost for
    shape < 1) and deterministic for a given generator state.
    """
    return rng.gamma(params.shape, params.scale, size=size)


def moments_to_params(mean, variance, literal=False):
    """Map a delay mean and variance to gamma parameters.

    Default is moment matching, shape = mean**2 / variance and
    scale = variance / mean. With ``literal=True`` the shape is
    mean**2 * variance (scale unchanged), which does not preserve the mean.
    """
    mean = _positive("mean", mean)
    variance = _positive("variance", variance)
    if literal:
        return GammaParams(mean * mean * variance, variance / mean)
    return GammaParams(mean * mean / variance, variance / mean)


def params_to_moments(params):
    """Return (mean, variance) of GammaParams."""
    return params.mean, params.variance
