"""Bootstrap hypothesis tests and the analytic covariance oracles.

The symmetry test compares the residual EDF with its sign-flip; the
goodness-of-fit test compares the nonparametric residual EDF with the EDF of
residuals from a kernel-smoothed parametric fit.  Critical values are
empirical bootstrap quantiles; p-values use the (1 + #)/(B + 1) convention so
they never vanish.

The covariance oracles evaluate the limiting covariance of the residual
processes: the nonparametric form both verbatim as displayed (an uncentered
product expectation) and as the centered covariance, and the linear-model
form with user-supplied design limits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from .bootstrap import batch_gof_replicates, batch_lin_replicates
from .distributions import Normal
from .empirical import Edf, batch_edf_distances, batch_sign_flip_distances
from .kernels import BIWEIGHT, regression_bandwidth
from .regression import center, get_family, ls_fit, nw_fit

__all__ = [
    "TestResult",
    "CovarianceOracle",
    "bootstrap_critical_value",
    "symmetry_test",
    "gof_test",
    "cov_nonparametric",
    "cov_linear",
    "partial_expectation",
]


@dataclass
class TestResult:
    """Observed statistic, its bootstrap reference draws, and the decision."""

    test: str
    stat: str
    scheme: str
    n: int
    statistic: float
    boot_stats: np.ndarray
    alpha: float
    critical_value: float
    reject: bool
    p_value: float

    CSV_HEADER = "test,stat_kind,scheme,n,alpha,observed,critical,pvalue,reject"

    def __str__(self):
        verdict = "reject" if self.reject else "fail to reject"
        return (
            f"{self.test} test ({self.stat.upper()}, {self.scheme} bootstrap, n={self.n}): "
            f"stat={self.statistic:.4f}, crit({self.alpha:g})={self.critical_value:.4f}, "
            f"p={self.p_value:.4f} -> {verdict}"
        )

    def csv_row(self):
        return (
            f"{self.test},{self.stat},{self.scheme},{self.n},{self.alpha:g},"
            f"{self.statistic:.10g},{self.critical_value:.10g},{self.p_value:.6g},{str(self.reject).lower()}"
        )


def bootstrap_critical_value(boot_stats, alpha):
    """The ceil((1-alpha)*B)-th order statistic of the bootstrap draws."""
    arr = np.asarray(boot_stats, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("need at least one bootstrap statistic")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    k = int(np.ceil((1.0 - alpha) * arr.size))
    k = min(max(k, 1), arr.size)
    return float(np.partition(arr, k - 1)[k - 1])


def _make_result(test, stat, scheme, n, observed, boots, alpha):
    crit = bootstrap_critical_value(boots, alpha)
    b = boots.size
    p_value = (1.0 + np.count_nonzero(boots >= observed)) / (b + 1.0)
    return TestResult(
        test=test,
        stat=stat,
        scheme=scheme,
        n=int(n),
        statistic=float(observed),
        boot_stats=boots,
        alpha=float(alpha),
        critical_value=crit,
        reject=bool(observed > crit),
        p_value=float(p_value),
    )


def _streams(rng, streams, n_boot):
    if streams is not None:
        return streams
    if rng is None:
        raise ValueError("pass either rng or per-replicate streams")
    return itertools.repeat(rng, n_boot)


def symmetry_test(design, y, scheme, n_boot, alpha, stat="cm", rng=None, streams=None):
    """Bootstrap test of error-law symmetry in a fixed-design linear model.

    The observed statistic compares the residual EDF with the EDF of the
    sign-flipped residuals (KS scaled by sqrt(n), CM by n, matching the
    bootstrap side).  Bootstrap errors are drawn from the symmetrized pool,
    refit on the same design, and the statistic recomputed from the starred
    EDF and its sign-flip.
    """
    design = np.asarray(design, dtype=float)
    if design.ndim == 1:
        design = design[:, None]
    fit = ls_fit(design, y)
    res = fit.residuals()
    n = res.size
    observed = _scaled(stat, n, *batch_sign_flip_distances(res[None, :]))

    _, res_star = batch_lin_replicates(fit, scheme.symmetrized(), _streams(rng, streams, n_boot))
    boots = _scaled(stat, n, *batch_sign_flip_distances(res_star))
    return _make_result("symmetry", stat, scheme.kind, n, observed[0], boots, alpha)


def gof_test(x, y, family, scheme, n_boot, alpha, stat="cm", kernel=BIWEIGHT, h=None, rng=None, streams=None):
    """Bootstrap goodness-of-fit test of a parametric regression family.

    The observed statistic compares the EDF of centered NW residuals with the
    EDF of residuals from the kernel-smoothed parametric fit at the
    least-squares coefficients.  Bootstrap responses come from the parametric
    fit; the statistic is recomputed from the starred pair of EDFs.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    n = x.size
    if isinstance(family, str):
        family = get_family(family)
    if h is None:
        h = regression_bandwidth(n, float(x.std()))
    nwf = nw_fit(x, y, kernel, h)
    res_c = center(nwf.residuals())
    pool = Edf(res_c)
    theta_fit = family.fit(x, y)
    u = y - (nwf.weights @ theta_fit.design) @ theta_fit.beta
    observed = _scaled(stat, n, *batch_edf_distances(res_c[None, :], u[None, :], weight_on="b"))

    _, res_star, u_star = batch_gof_replicates(
        theta_fit, nwf.weights, pool, scheme, _streams(rng, streams, n_boot)
    )
    boots = _scaled(stat, n, *batch_edf_distances(res_star, u_star, weight_on="b"))
    return _make_result("gof", stat, scheme.kind, n, observed[0], boots, alpha)


def _scaled(stat, n, sup, cm):
    """Apply the scale-consistent conventions: sqrt(n) for KS, n-sum for CM."""
    if stat == "ks":
        return np.sqrt(n) * sup
    if stat == "cm":
        return cm
    raise ValueError(f"stat must be 'ks' or 'cm', got {stat!r}")


def partial_expectation(dist, y):
    """E[eps * 1{eps <= y}]; analytic for normals, quadrature otherwise."""
    if isinstance(dist, Normal):
        z = (y - dist.mean) / dist.sd
        return dist.mean * ndtr(z) - dist.sd**2 * dist.pdf(y)
    lo = dist.quantile(1e-12)
    if y <= lo:
        return 0.0
    val, _ = integrate.quad(lambda t: t * dist.pdf(t), lo, y, epsabs=1e-11, epsrel=1e-11, limit=200)
    return val


def cov_nonparametric(dist, y1, y2, centered=False):
    """Limiting residual-process covariance, nonparametric pipeline.

    ``centered=False`` evaluates the displayed product expectation verbatim:
    F(y1 ^ y2) + f(y1) E[eps 1{eps<=y2}] + f(y2) E[eps 1{eps<=y1}]
    + f(y1) f(y2) Var(eps).  ``centered=True`` additionally subtracts
    F(y1) F(y2), the covariance of the centered summands.
    """
    f1, f2 = float(dist.pdf(y1)), float(dist.pdf(y2))
    _, var = dist.moments()
    val = (
        float(dist.cdf(min(y1, y2)))
        + f1 * partial_expectation(dist, y2)
        + f2 * partial_expectation(dist, y1)
        + f1 * f2 * var
    )
    if centered:
        val -= float(dist.cdf(y1)) * float(dist.cdf(y2))
    return val


def cov_linear(dist, y1, y2, m, sigma):
    """Limiting residual-process covariance for the fixed-design linear model.

    ``m`` and ``sigma`` are the design limits (mean vector and second-moment
    matrix); scalars are accepted for p = 1.
    """
    m = np.atleast_1d(np.asarray(m, dtype=float))
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
    if sigma.shape != (m.size, m.size):
        raise ValueError("design limits have inconsistent shapes")
    quad_form = float(m @ np.linalg.solve(sigma, m))
    f1, f2 = float(dist.pdf(y1)), float(dist.pdf(y2))
    _, var = dist.moments()
    return (
        float(dist.cdf(min(y1, y2)))
        - float(dist.cdf(y1)) * float(dist.cdf(y2))
        + quad_form
        * (f1 * f2 * var + f1 * partial_expectation(dist, y2) + f2 * partial_expectation(dist, y1))
    )


@dataclass(frozen=True)
class CovarianceOracle:
    """Error law plus (for the linear case) the design limits of the study."""

    dist: object
    m: object = None
    sigma: object = None

    def nonparametric(self, y1, y2, centered=False):
        return cov_nonparametric(self.dist, y1, y2, centered=centered)

    def linear(self, y1, y2):
        if self.m is None or self.sigma is None:
            raise ValueError("linear covariance needs the design limits m and sigma")
        return cov_linear(self.dist, y1, y2, self.m, self.sigma)
