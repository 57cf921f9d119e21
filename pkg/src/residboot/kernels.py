"""Kernels for regression weighting and distribution smoothing, plus bandwidth rules.

The regression kernel defaults to the biweight; the smoothing kernel defaults
to the Gaussian density (the simulations' choice), with Epanechnikov available
as the compact-support alternative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

__all__ = [
    "Kernel",
    "IntegratedKernel",
    "BandwidthRule",
    "get_kernel",
    "regression_bandwidth",
    "smoothing_bandwidth",
    "BIWEIGHT",
    "EPANECHNIKOV",
    "GAUSSIAN",
]

_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class Kernel:
    """Symmetric probability density used as a kernel.

    ``support`` is the half-width of the compact support, or ``None`` for the
    Gaussian.  ``pdf`` evaluates the density, ``integral`` its CDF, and
    ``sample`` draws kernel noise (used by the smooth bootstrap).
    """

    name: str

    @property
    def support(self):
        return None if self.name == "gaussian" else 1.0

    def pdf(self, u):
        u = np.asarray(u, dtype=float)
        if self.name == "biweight":
            inside = np.abs(u) < 1.0
            return np.where(inside, (15.0 / 16.0) * (1.0 - u**2) ** 2, 0.0)
        if self.name == "epanechnikov":
            inside = np.abs(u) < 1.0
            return np.where(inside, 0.75 * (1.0 - u**2), 0.0)
        if self.name == "gaussian":
            return np.exp(-0.5 * u**2) / _SQRT_2PI
        raise ValueError(f"unknown kernel {self.name!r}")

    def integral(self, t):
        """Integrated kernel L(t) = integral of the density up to t."""
        t = np.asarray(t, dtype=float)
        if self.name == "gaussian":
            return ndtr(t)
        tc = np.clip(t, -1.0, 1.0)
        if self.name == "biweight":
            val = 0.5 + (15.0 / 16.0) * (tc - (2.0 / 3.0) * tc**3 + tc**5 / 5.0)
        elif self.name == "epanechnikov":
            val = 0.5 + 0.75 * (tc - tc**3 / 3.0)
        else:
            raise ValueError(f"unknown kernel {self.name!r}")
        return np.clip(val, 0.0, 1.0)

    def sample(self, rng, size):
        """Draw from the kernel density (exact constructions, no rejection)."""
        if self.name == "gaussian":
            return rng.standard_normal(size)
        if self.name == "epanechnikov":
            # Epanechnikov on [-1, 1] is a shifted Beta(2, 2)
            return 2.0 * rng.beta(2.0, 2.0, size) - 1.0
        if self.name == "biweight":
            # biweight on [-1, 1] is a shifted Beta(3, 3)
            return 2.0 * rng.beta(3.0, 3.0, size) - 1.0
        raise ValueError(f"unknown kernel {self.name!r}")

    def __call__(self, u):
        return self.pdf(u)


BIWEIGHT = Kernel("biweight")
EPANECHNIKOV = Kernel("epanechnikov")
GAUSSIAN = Kernel("gaussian")

_KERNELS = {k.name: k for k in (BIWEIGHT, EPANECHNIKOV, GAUSSIAN)}


def get_kernel(name):
    try:
        return _KERNELS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; choose from {sorted(_KERNELS)}") from None


@dataclass(frozen=True)
class IntegratedKernel:
    """L(t) = integral of the base kernel density up to t; nondecreasing, 0 to 1."""

    base: Kernel

    def __call__(self, t):
        return self.base.integral(t)


@dataclass(frozen=True)
class BandwidthRule:
    """Bandwidth selector.

    kind 'regression_default' gives sd(x) * n^(-0.3); 'smoothing_default'
    gives 0.5 * n^(-1/4); 'fixed' always returns ``value``.
    """

    kind: str
    value: float | None = None

    def __call__(self, n, x_sd=None):
        if self.kind == "fixed":
            h = float(self.value)
        elif self.kind == "regression_default":
            if n < 2:
                raise ValueError("regression bandwidth rule needs n >= 2")
            if x_sd is None or not x_sd > 0:
                raise ValueError("regression bandwidth rule needs a positive x_sd")
            h = x_sd * n ** (-0.3)
        elif self.kind == "smoothing_default":
            if n < 2:
                raise ValueError("smoothing bandwidth rule needs n >= 2")
            h = 0.5 * n ** (-0.25)
        else:
            raise ValueError(f"unknown bandwidth rule {self.kind!r}")
        if not h > 0:
            raise ValueError(f"bandwidth rule produced a nonpositive value {h}")
        return h

    @classmethod
    def from_config(cls, value, default_kind):
        """'auto' (or None) selects the default rule, a number pins it."""
        if value is None or (isinstance(value, str) and value.lower() == "auto"):
            return cls(default_kind)
        return cls("fixed", float(value))


def regression_bandwidth(n, x_sd):
    """Nadaraya-Watson default: empirical sd of the covariate times n^(-0.3)."""
    return BandwidthRule("regression_default")(n, x_sd)


def smoothing_bandwidth(n):
    """Smoothed-EDF default: 0.5 * n^(-1/4)."""
    return BandwidthRule("smoothing_default")(n)
