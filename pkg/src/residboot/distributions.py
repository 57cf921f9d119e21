"""Error-law toolbox: sampling, density, CDF, quantile and moment standardization.

Every law exposes the same surface (``pdf``, ``cdf``, ``quantile``, ``sample``,
``moments``) and can be rescaled to a target mean/SD with :func:`standardize`,
which wraps it in an :class:`Affine` transform ``a + b * Z``.  Evaluation is
vectorized and pure; sampling takes an explicitly owned ``numpy.random.Generator``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri
from scipy.stats import t as _student_t

__all__ = [
    "ErrorDistribution",
    "Normal",
    "SkewNormal",
    "StudentT",
    "Gumbel",
    "Mixture",
    "Affine",
    "MomentSpec",
    "NoFiniteMomentsError",
    "standardize",
    "parse_distribution",
]

_SQRT_2PI = np.sqrt(2.0 * np.pi)


class NoFiniteMomentsError(ValueError):
    """Raised when a law does not have two finite moments."""


def _phi(y):
    return np.exp(-0.5 * np.asarray(y, dtype=float) ** 2) / _SQRT_2PI


def _bisect_quantile(cdf, u, lo=-1.0, hi=1.0, tol=1e-10, max_iter=200):
    """Generalized inverse of a continuous CDF by bracketed bisection.

    Brackets expand by doubling from [lo, hi] until they enclose u; the
    iteration cap bounds worst-case work on near-flat tails.
    """
    u = float(u)
    if not 0.0 < u < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {u}")
    lo, hi = float(lo), float(hi)
    while cdf(lo) > u:
        lo = 2.0 * lo if lo < 0 else -2.0 * max(abs(lo), 1.0)
    while cdf(hi) < u:
        hi = 2.0 * hi if hi > 0 else 2.0 * max(abs(hi), 1.0)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < u:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


class ErrorDistribution:
    """Common surface for the error laws used in the simulation studies."""

    def pdf(self, y):
        raise NotImplementedError

    def cdf(self, y):
        raise NotImplementedError

    def quantile(self, u):
        if np.isscalar(u):
            return _bisect_quantile(self.cdf, u)
        return np.array([_bisect_quantile(self.cdf, ui) for ui in np.asarray(u, dtype=float)])

    def sample(self, rng, size):
        raise NotImplementedError

    def moments(self):
        """Return (mean, variance); closed form for every supported kind."""
        raise NotImplementedError


@dataclass(frozen=True)
class MomentSpec:
    """Standardization target; the studies all use mean 0, SD 0.25."""

    target_mean: float = 0.0
    target_sd: float = 0.25

    def __post_init__(self):
        if not self.target_sd > 0:
            raise ValueError(f"target_sd must be positive, got {self.target_sd}")


@dataclass(frozen=True)
class Normal(ErrorDistribution):
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        if not self.sd > 0:
            raise ValueError("sd must be positive")

    def pdf(self, y):
        return _phi((np.asarray(y, dtype=float) - self.mean) / self.sd) / self.sd

    def cdf(self, y):
        return ndtr((np.asarray(y, dtype=float) - self.mean) / self.sd)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u <= 0) or np.any(u >= 1):
            raise ValueError("quantile level must lie in (0, 1)")
        return self.mean + self.sd * ndtri(u)

    def sample(self, rng, size):
        return self.mean + self.sd * rng.standard_normal(size)

    def moments(self):
        return self.mean, self.sd**2


@dataclass(frozen=True)
class SkewNormal(ErrorDistribution):
    """Azzalini skew normal on the unit scale: density 2*phi(y)*Phi(shape*y)."""

    shape: float = 0.0

    _CUTOFF = -12.0  # left quadrature cutoff; pdf mass below is < 1e-30

    def pdf(self, y):
        y = np.asarray(y, dtype=float)
        return 2.0 * _phi(y) * ndtr(self.shape * y)

    def _cdf_scalar(self, y):
        if y <= self._CUTOFF:
            return 0.0
        if y >= -self._CUTOFF:
            return 1.0
        val, _ = integrate.quad(self.pdf, self._CUTOFF, y, epsabs=1e-12, epsrel=1e-12, limit=200)
        return min(max(val, 0.0), 1.0)

    def cdf(self, y):
        if np.isscalar(y):
            return self._cdf_scalar(y)
        return np.array([self._cdf_scalar(v) for v in np.asarray(y, dtype=float)])

    def sample(self, rng, size):
        # delta-representation: delta*|Z0| + sqrt(1-delta^2)*Z1
        delta = self.shape / np.sqrt(1.0 + self.shape**2)
        z0 = rng.standard_normal(size)
        z1 = rng.standard_normal(size)
        return delta * np.abs(z0) + np.sqrt(1.0 - delta**2) * z1

    def moments(self):
        delta = self.shape / np.sqrt(1.0 + self.shape**2)
        mean = delta * np.sqrt(2.0 / np.pi)
        return mean, 1.0 - 2.0 * delta**2 / np.pi


@dataclass(frozen=True)
class StudentT(ErrorDistribution):
    df: float = 3.0

    def __post_init__(self):
        if not self.df > 0:
            raise ValueError("df must be positive")

    def pdf(self, y):
        return _student_t.pdf(np.asarray(y, dtype=float), self.df)

    def cdf(self, y):
        return _student_t.cdf(np.asarray(y, dtype=float), self.df)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u <= 0) or np.any(u >= 1):
            raise ValueError("quantile level must lie in (0, 1)")
        return _student_t.ppf(u, self.df)

    def sample(self, rng, size):
        return rng.standard_t(self.df, size)

    def moments(self):
        if self.df <= 2:
            raise NoFiniteMomentsError(f"Student t with df={self.df} has no finite variance")
        return 0.0, self.df / (self.df - 2.0)


@dataclass(frozen=True)
class Gumbel(ErrorDistribution):
    """Standard (max-type) Gumbel: CDF exp(-exp(-(y - loc)/scale))."""

    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def pdf(self, y):
        z = (np.asarray(y, dtype=float) - self.loc) / self.scale
        with np.errstate(over="ignore"):  # deep left tail underflows to 0 exactly
            return np.exp(-z - np.exp(-z)) / self.scale

    def cdf(self, y):
        z = (np.asarray(y, dtype=float) - self.loc) / self.scale
        with np.errstate(over="ignore"):
            return np.exp(-np.exp(-z))

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u <= 0) or np.any(u >= 1):
            raise ValueError("quantile level must lie in (0, 1)")
        return self.loc - self.scale * np.log(-np.log(u))

    def sample(self, rng, size):
        return rng.gumbel(self.loc, self.scale, size)

    def moments(self):
        return self.loc + self.scale * np.euler_gamma, (np.pi**2 / 6.0) * self.scale**2


@dataclass(frozen=True)
class Mixture(ErrorDistribution):
    """Two-component mixture: with probability p draw from a, else from b."""

    p: float
    a: ErrorDistribution
    b: ErrorDistribution

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"mixture weight must lie in [0, 1], got {self.p}")

    def pdf(self, y):
        return self.p * self.a.pdf(y) + (1.0 - self.p) * self.b.pdf(y)

    def cdf(self, y):
        return self.p * self.a.cdf(y) + (1.0 - self.p) * self.b.cdf(y)

    def sample(self, rng, size):
        # Two uniforms per variate: one Bernoulli(p) component pick, one pushed
        # through the picked component's quantile.  Fixed consumption order
        # (picks first, then values) keeps replays reproducible.
        picks = rng.random(size)
        u = np.clip(rng.random(size), 1e-15, 1.0 - 1e-15)
        return np.where(picks < self.p, self.a.quantile(u), self.b.quantile(u))

    def moments(self):
        ma, va = self.a.moments()
        mb, vb = self.b.moments()
        mean = self.p * ma + (1.0 - self.p) * mb
        second = self.p * (va + ma**2) + (1.0 - self.p) * (vb + mb**2)
        return mean, second - mean**2


@dataclass(frozen=True)
class Affine(ErrorDistribution):
    """The law of offset + scale * Z for a base law Z; scale must be positive."""

    offset: float
    scale: float
    base: ErrorDistribution = field(default_factory=Normal)

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def _z(self, y):
        return (np.asarray(y, dtype=float) - self.offset) / self.scale

    def pdf(self, y):
        return self.base.pdf(self._z(y)) / self.scale

    def cdf(self, y):
        return self.base.cdf(self._z(y))

    def quantile(self, u):
        return self.offset + self.scale * self.base.quantile(u)

    def sample(self, rng, size):
        return self.offset + self.scale * self.base.sample(rng, size)

    def moments(self):
        m, v = self.base.moments()
        return self.offset + self.scale * m, self.scale**2 * v


def standardize(dist, spec=MomentSpec()):
    """Affinely rescale ``dist`` to the target mean and SD of ``spec``.

    Nested affine wrappers are flattened, so re-standardizing an already
    standardized law reproduces the same wrapper up to rounding.
    """
    mean, var = dist.moments()
    if not var > 0:
        raise ValueError("cannot standardize a zero-variance law")
    b = spec.target_sd / np.sqrt(var)
    a = spec.target_mean - b * mean
    if isinstance(dist, Affine):
        return Affine(a + b * dist.offset, b * dist.scale, dist.base)
    if isinstance(dist, Normal):
        return Normal(a + b * dist.mean, b * dist.sd)
    return Affine(a, b, dist)


_SPEC_RE = re.compile(r"^\s*([a-z0-9_]+)\s*(?:\((.*)\))?\s*$", re.IGNORECASE)


def _split_args(body):
    parts = [p.strip() for p in body.split(",")] if body else []
    kwargs, positional = {}, []
    for part in parts:
        if not part:
            continue
        if "=" in part:
            key, val = part.split("=", 1)
            kwargs[key.strip().lower()] = val.strip()
        else:
            positional.append(part.lower())
    return positional, kwargs


_MIX_COMPONENTS = {
    "t3": StudentT(3.0),
    "gumbel": Gumbel(),
    "normal": Normal(),
}


def parse_distribution(spec):
    """Build an error law from a config string.

    Supported forms: ``normal(sd=0.25)``, ``skewnormal(d=2,sd=0.25)``,
    ``t3(sd=0.25)``, ``gumbel``, ``mix(p=0.75,t3,gumbel,sd=0.25)``.  A ``sd=``
    argument standardizes the law to mean ``mean=`` (default 0) and that SD.
    ``mix(..., standardize=components)`` standardizes the two components
    instead of the mixture as a whole.
    """
    m = _SPEC_RE.match(spec)
    if m is None:
        raise ValueError(f"malformed distribution spec: {spec!r}")
    name = m.group(1).lower()
    positional, kwargs = _split_args(m.group(2))

    target_sd = float(kwargs.pop("sd")) if "sd" in kwargs else None
    target_mean = float(kwargs.pop("mean", 0.0))

    if name == "normal":
        sd = target_sd if target_sd is not None else 1.0
        return Normal(target_mean, sd)
    if name == "skewnormal":
        dist = SkewNormal(float(kwargs.pop("d", 0.0)))
    elif name in ("t3", "t"):
        dist = StudentT(float(kwargs.pop("df", 3.0)))
    elif name == "gumbel":
        dist = Gumbel(float(kwargs.pop("loc", 0.0)), float(kwargs.pop("scale", 1.0)))
    elif name == "mix":
        if "p" not in kwargs:
            raise ValueError(f"mix(...) needs a p= weight: {spec!r}")
        p = float(kwargs.pop("p"))
        names = positional if positional else ["t3", "gumbel"]
        if len(names) != 2 or any(c not in _MIX_COMPONENTS for c in names):
            raise ValueError(f"mix(...) takes two of {sorted(_MIX_COMPONENTS)}: {spec!r}")
        mode = kwargs.pop("standardize", "mixture").lower()
        sd = target_sd if target_sd is not None else 0.25
        comp_spec = MomentSpec(target_mean, sd)
        if mode == "components":
            return Mixture(p, *(standardize(_MIX_COMPONENTS[c], comp_spec) for c in names))
        if mode != "mixture":
            raise ValueError(f"standardize= must be 'mixture' or 'components': {spec!r}")
        # first component pre-standardized, second left raw, then the mixture
        # as a whole is standardized ("again standardized")
        mixture = Mixture(p, standardize(_MIX_COMPONENTS[names[0]], comp_spec), _MIX_COMPONENTS[names[1]])
        return standardize(mixture, MomentSpec(target_mean, sd))
    else:
        raise ValueError(f"unknown distribution kind {name!r} in {spec!r}")

    if kwargs:
        raise ValueError(f"unused arguments {sorted(kwargs)} in {spec!r}")
    if target_sd is not None:
        return standardize(dist, MomentSpec(target_mean, target_sd))
    return dist
