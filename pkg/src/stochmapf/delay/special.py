# -*- coding: utf-8 -*-
"""Special functions used by the MAP estimator: digamma and its inverse.

Both functions accept scalars or numpy arrays and return the same kind.
"""

import numpy as np
from scipy import special as scspecial

from stochmapf.common import SMAPFDialog
from stochmapf.common.constants import DIGAMMA_SHIFT, EULER_GAMMA
from stochmapf.common.exceptions import DigammaDomainError, NoConvergenceError

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)

# Bernoulli terms B_2k / 2k of the asymptotic expansion, k = 1..7
_C1 = 1.0 / 12.0
_C2 = 1.0 / 120.0
_C3 = 1.0 / 252.0
_C4 = 1.0 / 240.0
_C5 = 1.0 / 132.0
_C6 = 691.0 / 32760.0
_C7 = 1.0 / 12.0

_INVDIG_SWITCH = -2.22
_INVDIG_TOL = 1.0e-12
_INVDIG_MAXITER = 100


def _as_output(values, scalar):
    if scalar:
        return float(values)
    return values


def digamma(x):
    """The digamma function, the logarithmic derivative of the gamma function.

    The argument is shifted above 6 with the recurrence psi(x) = psi(x+1) - 1/x
    before the asymptotic expansion is applied, which gives an absolute error
    well below 1e-10 for all positive arguments.

    Args:
        x (float or array): Positive argument(s).

    Raises:
        DigammaDomainError: If any x <= 0 (or NaN).

    Example::

        >>> digamma(1.0)
        -0.5772156649015329
    """
    scalar = np.ndim(x) == 0
    xvals = np.array(x, dtype=np.float64, ndmin=1)

    if not np.all(xvals > 0.0):
        raise DigammaDomainError("Digamma needs x > 0, got {}".format(x))

    result = np.zeros_like(xvals)
    small = xvals < DIGAMMA_SHIFT
    while np.any(small):
        result[small] -= 1.0 / xvals[small]
        xvals[small] += 1.0
        small = xvals < DIGAMMA_SHIFT

    inv = 1.0 / xvals
    zz = inv * inv
    series = zz * (
        _C1 - zz * (_C2 - zz * (_C3 - zz * (_C4 - zz * (_C5 - zz * (_C6 - zz * _C7)))))
    )
    result += np.log(xvals) - 0.5 * inv - series

    return _as_output(result[0] if scalar else result, scalar)


def trigamma(x):
    """The trigamma function (derivative of digamma), from scipy."""
    scalar = np.ndim(x) == 0
    values = scspecial.polygamma(1, np.asarray(x, dtype=np.float64))
    return _as_output(values, scalar)


def inverse_digamma(y, tol=_INVDIG_TOL, maxiter=_INVDIG_MAXITER):
    """Return x > 0 such that digamma(x) = y.

    Newton iteration on digamma, started at exp(y) + 0.5 for y >= -2.22 and at
    -1 / (y + gamma) otherwise (gamma is the Euler-Mascheroni constant).
    Where exp(y) overflows (y above about 709.78) the result is inf.

    Args:
        y (float or array): Any real value(s).
        tol (float): Absolute tolerance on digamma(x) - y.
        maxiter (int): Iteration cap.

    Raises:
        NoConvergenceError: If the tolerance is not met within maxiter steps.
    """
    scalar = np.ndim(y) == 0
    yvals = np.array(y, dtype=np.float64, ndmin=1)

    if not np.all(np.isfinite(yvals)):
        raise ValueError("Inverse digamma needs finite input, got {}".format(y))

    upper = yvals >= _INVDIG_SWITCH
    xvals = np.empty_like(yvals)
    with np.errstate(over="ignore"):
        xvals[upper] = np.exp(yvals[upper]) + 0.5
    xvals[~upper] = -1.0 / (yvals[~upper] + EULER_GAMMA)

    active = np.isfinite(xvals)
    if not np.all(active):
        logger.debug("Inverse digamma is inf for %s values", np.sum(~active))
    xact, yact = xvals[active], yvals[active]

    for _ in range(maxiter):
        resid = digamma(xact) - yact
        if np.all(np.abs(resid) <= tol):
            break
        newx = xact - resid / trigamma(xact)
        xact = np.where(newx > 0.0, newx, 0.5 * xact)
    else:
        resid = digamma(xact) - yact
        if not np.all(np.abs(resid) <= 1.0e-10):
            raise NoConvergenceError(
                "Inverse digamma did not converge, residual {}".format(
                    np.max(np.abs(resid))
                )
            )

    xvals[active] = xact
    return _as_output(xvals[0] if scalar else xvals, scalar)
