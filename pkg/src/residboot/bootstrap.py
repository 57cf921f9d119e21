"""Residual resampling engines.

Non-smooth and smooth residual bootstrap for the nonparametric and linear
pipelines, the symmetrized scheme of the symmetry test, and the
goodness-of-fit scheme.  ``*_replicate`` functions build one fully materialized
:class:`Replicate`; the ``batch_*`` functions are the production path, drawing
one error matrix from per-replicate streams and refitting all replicates with
a single matrix product against the fixed weight matrix / design.

Stream consumption order inside one replicate is fixed: atom uniforms, then
sign uniforms (symmetrized schemes), then smooth noise.  The non-smooth scheme
therefore consumes a strict prefix of the smooth scheme's stream, which is
what couples the two schemes' atom picks when they share streams.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .empirical import Edf, SmoothedEdf
from .kernels import GAUSSIAN, Kernel
from .regression import LinearFit, NWFit, center, ls_fit

__all__ = [
    "BootstrapScheme",
    "Replicate",
    "draw_errors",
    "draw_error_matrix",
    "np_replicate",
    "lin_replicate",
    "gof_replicate",
    "batch_np_replicates",
    "batch_lin_replicates",
    "batch_gof_replicates",
]


@dataclass(frozen=True)
class BootstrapScheme:
    """Resampling law configuration.

    kind 'nonsmooth' resamples residual atoms; 'smooth' adds kernel noise of
    bandwidth ``s`` drawn from ``noise_kernel``.  ``symmetrize`` flips each
    pick's sign with probability 1/2 (the symmetry-test pool).
    ``center_residuals`` re-centers the bootstrap residuals before their EDF
    is built; the default (off) matches the uncentered bootstrap-residual EDF
    the nonparametric pipeline defines.
    """

    kind: str
    s: float | None = None
    noise_kernel: Kernel = GAUSSIAN
    symmetrize: bool = False
    center_residuals: bool = False

    def __post_init__(self):
        if self.kind not in ("nonsmooth", "smooth"):
            raise ValueError(f"scheme kind must be 'nonsmooth' or 'smooth', got {self.kind!r}")
        if self.kind == "smooth" and (self.s is None or not self.s > 0):
            raise ValueError("smooth scheme needs a positive bandwidth s")

    def symmetrized(self):
        return replace(self, symmetrize=True)


@dataclass
class Replicate:
    """One bootstrap replicate's ingredients.

    ``residuals`` are the refit residuals (the defining identity of the
    pipeline holds to rounding), ``edf`` their step EDF; ``smoothed_edf`` is
    populated under smooth schemes.  GOF replicates additionally carry the
    refitted parametric coefficients and the parametric residual EDF.
    """

    errors: np.ndarray
    responses: np.ndarray
    fit: object
    residuals: np.ndarray
    edf: Edf
    smoothed_edf: SmoothedEdf | None = None
    param_fit: LinearFit | None = None
    param_edf: Edf | None = None


def draw_errors(scheme, residual_edf, size, rng):
    """Draw bootstrap errors from the residual pool.

    Non-smooth picks atoms by inverse transform on uniforms; under
    ``symmetrize`` each pick's sign flips when a second uniform falls below
    1/2; the smooth scheme then adds ``s`` times kernel noise (the convolution
    representation of the smoothed EDF).
    """
    u = rng.random(size)
    eps = residual_edf.sample_from_uniforms(u)
    if scheme.symmetrize:
        flip = rng.random(size) < 0.5
        eps = np.where(flip, -eps, eps)
    if scheme.kind == "smooth":
        eps = eps + scheme.s * scheme.noise_kernel.sample(rng, size)
    return eps


def draw_error_matrix(scheme, residual_edf, n, streams):
    """Stack per-replicate draws into a (B, n) matrix, one stream per row."""
    rows = [draw_errors(scheme, residual_edf, n, rng) for rng in streams]
    if not rows:
        raise ValueError("need at least one replicate stream")
    return np.vstack(rows)


def _maybe_center_rows(r, scheme):
    if scheme.center_residuals:
        return r - r.mean(axis=1, keepdims=True)
    return r


def np_replicate(data, fit, scheme, rng, pool=None):
    """One nonparametric-pipeline replicate.

    Bootstrap responses are the NW fitted values plus drawn errors; the refit
    reuses the original kernel and bandwidth.  ``pool`` defaults to the EDF of
    the centered residuals of ``fit``.
    """
    if pool is None:
        pool = Edf(center(fit.residuals()))
    n = fit.x.size
    eps_star = draw_errors(scheme, pool, n, rng)
    y_star = fit.fitted() + eps_star
    refit = NWFit(fit.x, y_star, fit.kernel, fit.h)
    res_star = _maybe_center_rows((y_star - refit.fitted())[None, :], scheme)[0]
    smoothed = SmoothedEdf(res_star, scheme.noise_kernel, scheme.s) if scheme.kind == "smooth" else None
    return Replicate(eps_star, y_star, refit, res_star, Edf(res_star), smoothed)


def lin_replicate(design, fit, scheme, rng, pool=None):
    """One linear-pipeline replicate on the same fixed design (no centering)."""
    if pool is None:
        pool = Edf(fit.residuals())
    design = np.asarray(design, dtype=float)
    if design.ndim == 1:
        design = design[:, None]
    n = design.shape[0]
    eps_star = draw_errors(scheme, pool, n, rng)
    y_star = design @ fit.beta + eps_star
    refit = ls_fit(design, y_star)
    res_star = refit.residuals()
    smoothed = SmoothedEdf(res_star, scheme.noise_kernel, scheme.s) if scheme.kind == "smooth" else None
    return Replicate(eps_star, y_star, refit, res_star, Edf(res_star), smoothed)


def gof_replicate(x, theta_fit, family, kernel, h, pool, scheme, rng):
    """One goodness-of-fit replicate.

    Responses come from the parametric fit (not the NW fit); the replicate
    carries both the NW-refit residual EDF and the EDF of the residuals from
    the smoothed parametric regression at the refitted coefficients.
    """
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    eps_star = draw_errors(scheme, pool, n, rng)
    y_star = family.predict(theta_fit.beta, x) + eps_star
    nw_refit = NWFit(x, y_star, kernel, h)
    res_star = _maybe_center_rows((y_star - nw_refit.fitted())[None, :], scheme)[0]
    theta_star = family.fit(x, y_star)
    m_smooth = nw_refit.weights @ family.predict(theta_star.beta, x)
    u_star = y_star - m_smooth
    smoothed = SmoothedEdf(res_star, scheme.noise_kernel, scheme.s) if scheme.kind == "smooth" else None
    return Replicate(
        eps_star, y_star, nw_refit, res_star, Edf(res_star), smoothed,
        param_fit=theta_star, param_edf=Edf(u_star),
    )


def batch_np_replicates(fit, scheme, streams, pool=None):
    """Vectorized nonparametric replicates: (errors, residuals) as (B, n).

    All replicates share the original fit's weight matrix, so the B refits
    collapse into one matrix product.
    """
    if pool is None:
        pool = Edf(center(fit.residuals()))
    n = fit.x.size
    eps = draw_error_matrix(scheme, pool, n, streams)
    y_star = fit.fitted()[None, :] + eps
    res = y_star - y_star @ fit.weights.T
    return eps, _maybe_center_rows(res, scheme)


def batch_lin_replicates(fit, scheme, streams, pool=None):
    """Vectorized linear replicates: (errors, residuals) as (B, n)."""
    if pool is None:
        pool = Edf(fit.residuals())
    design = fit.design
    n = design.shape[0]
    eps = draw_error_matrix(scheme, pool, n, streams)
    y_star = (design @ fit.beta)[None, :] + eps
    beta_star = y_star @ np.linalg.pinv(design).T
    res = y_star - beta_star @ design.T
    return eps, res


def batch_gof_replicates(theta_fit, nw_weights, pool, scheme, streams):
    """Vectorized GOF replicates.

    Returns ``(errors, nw_residuals, param_residuals)``, each (B, n):
    responses are parametric fitted values plus errors, the NW refit runs
    through the fixed weight matrix, and the parametric residuals subtract the
    smoothed parametric regression at the per-replicate least-squares refit.
    """
    design = theta_fit.design
    n = design.shape[0]
    eps = draw_error_matrix(scheme, pool, n, streams)
    y_star = (design @ theta_fit.beta)[None, :] + eps
    res_np = _maybe_center_rows(y_star - y_star @ nw_weights.T, scheme)
    theta_star = y_star @ np.linalg.pinv(design).T
    smooth_design = nw_weights @ design
    res_param = y_star - theta_star @ smooth_design.T
    return eps, res_np, res_param
