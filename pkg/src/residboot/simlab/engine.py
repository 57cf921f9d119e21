"""Per-simulation engine: one dataset, all schemes/statistics/levels at once.

Each ``run_sim`` call owns its RNG streams (derived from the master seed and
the simulation's coordinates), generates one dataset, computes the observed
statistics, runs all bootstrap replicates of every configured scheme, and
returns a boolean exceedance array of shape (n_stats, n_schemes, n_alphas).
The bootstrap loop is vectorized: draws come from per-replicate streams, the
refits collapse into matrix products, and the EDF statistics are computed for
the whole replicate block in a handful of numpy calls.
"""

from __future__ import annotations

import numpy as np

from ..bootstrap import (
    BootstrapScheme,
    batch_gof_replicates,
    batch_lin_replicates,
    batch_np_replicates,
)
from ..empirical import Edf, SmoothedEdf, batch_edf_distances, batch_sign_flip_distances, batch_sorted_rows
from ..inference import bootstrap_critical_value
from ..kernels import get_kernel, regression_bandwidth, smoothing_bandwidth
from ..regression import NWFit, center, equispaced_design, get_family, ls_fit
from .seeding import PHASE_BOOT, PHASE_BOOT_ALT, boot_stream, data_stream

__all__ = ["run_sim"]


def _scheme(cfg, name, s):
    return BootstrapScheme(
        kind=name,
        s=s if name == "smooth" else None,
        noise_kernel=get_kernel(cfg.smooth_kernel),
        center_residuals=cfg.center_boot,
    )


def _boot_streams(cfg, n, scen_idx, sim, scheme_name):
    phase = PHASE_BOOT if (cfg.couple or scheme_name == "nonsmooth") else PHASE_BOOT_ALT
    return (boot_stream(cfg.seed, n, scen_idx, sim, b, phase) for b in range(cfg.n_boot))


def _exceedance(observed, boots, alphas):
    return np.array([observed > bootstrap_critical_value(boots, a) for a in alphas])


def run_sim(cfg, n, scen, scen_idx, sim):
    """Run one simulation of the configured study; see the module docstring."""
    if cfg.study == "approx":
        return _sim_approx(cfg, n, scen, scen_idx, sim)
    if cfg.study == "symmetry":
        return _sim_symmetry(cfg, n, scen, scen_idx, sim)
    if cfg.study == "gof":
        return _sim_gof(cfg, n, scen, scen_idx, sim)
    raise ValueError(f"unknown study {cfg.study!r}")


def _sim_approx(cfg, n, scen, scen_idx, sim):
    """Bootstrap-approximation study: LS / MAD exceedance against the true law."""
    rng = data_stream(cfg.seed, n, scen_idx, sim)
    x = rng.random(n)
    eps = scen.error.sample(rng, n)
    y = cfg.slope * x + scen.a * x**2 + eps

    kernel = get_kernel(cfg.kernel)
    h = cfg.h if cfg.h is not None else regression_bandwidth(n, float(x.std()))
    fit = NWFit(x, y, kernel, h)
    res = fit.residuals()
    res_c = center(res)
    pool = Edf(res_c)
    s = cfg.s if cfg.s is not None else smoothing_bandwidth(n)

    # observed distances against the true error law, at the raw residuals
    true_cdf = scen.error.cdf
    diff_obs = pool(res) - true_cdf(res)
    obs = {"ls": float(np.sum(diff_obs**2)), "mad": float(n * np.median(np.abs(diff_obs)))}

    stats = cfg.resolved_stats()
    out = np.zeros((len(stats), len(cfg.schemes), len(cfg.alphas)), dtype=bool)
    own = np.arange(1, n + 1) / n
    for j, name in enumerate(cfg.schemes):
        scheme = _scheme(cfg, name, s)
        streams = _boot_streams(cfg, n, scen_idx, sim, name)
        _, res_star = batch_np_replicates(fit, scheme, streams, pool=pool)
        sorted_rows = batch_sorted_rows(res_star)
        if name == "nonsmooth":
            ref = pool(sorted_rows.ravel()).reshape(sorted_rows.shape)
        else:
            ref = SmoothedEdf(res_c, scheme.noise_kernel, s).tabulate()(sorted_rows)
        diff = own[None, :] - ref
        boots = {
            "ls": np.sum(diff**2, axis=1),
            "mad": n * np.median(np.abs(diff), axis=1),
        }
        for i, stat in enumerate(stats):
            out[i, j] = _exceedance(obs[stat], boots[stat], cfg.alphas)
    return out


def _sim_symmetry(cfg, n, scen, scen_idx, sim):
    """Symmetry test on the fixed design x_ni = i/n."""
    rng = data_stream(cfg.seed, n, scen_idx, sim)
    design = equispaced_design(n)
    eps = scen.error.sample(rng, n)
    y = cfg.slope * design[:, 0] + eps
    fit = ls_fit(design, y)
    res = fit.residuals()

    sup, cm = batch_sign_flip_distances(res[None, :])
    obs = {"ks": float(np.sqrt(n) * sup[0]), "cm": float(cm[0])}

    stats = cfg.resolved_stats()
    out = np.zeros((len(stats), len(cfg.schemes), len(cfg.alphas)), dtype=bool)
    s = cfg.s if cfg.s is not None else smoothing_bandwidth(n)
    for j, name in enumerate(cfg.schemes):
        scheme = _scheme(cfg, name, s).symmetrized()
        streams = _boot_streams(cfg, n, scen_idx, sim, name)
        _, res_star = batch_lin_replicates(fit, scheme, streams)
        bsup, bcm = batch_sign_flip_distances(res_star)
        boots = {"ks": np.sqrt(n) * bsup, "cm": bcm}
        for i, stat in enumerate(stats):
            out[i, j] = _exceedance(obs[stat], boots[stat], cfg.alphas)
    return out


def _sim_gof(cfg, n, scen, scen_idx, sim):
    """Goodness-of-fit test of the parametric family against the NW residual EDF."""
    rng = data_stream(cfg.seed, n, scen_idx, sim)
    x = rng.random(n)
    eps = scen.error.sample(rng, n)
    y = cfg.slope * x + scen.a * x**2 + eps

    kernel = get_kernel(cfg.kernel)
    h = cfg.h if cfg.h is not None else regression_bandwidth(n, float(x.std()))
    fit = NWFit(x, y, kernel, h)
    res_c = center(fit.residuals())
    pool = Edf(res_c)
    family = get_family(cfg.gof_family)
    theta_fit = family.fit(x, y)
    u = y - (fit.weights @ theta_fit.design) @ theta_fit.beta

    sup, cm = batch_edf_distances(res_c[None, :], u[None, :], weight_on="b")
    obs = {"ks": float(np.sqrt(n) * sup[0]), "cm": float(cm[0])}

    stats = cfg.resolved_stats()
    out = np.zeros((len(stats), len(cfg.schemes), len(cfg.alphas)), dtype=bool)
    s = cfg.s if cfg.s is not None else smoothing_bandwidth(n)
    for j, name in enumerate(cfg.schemes):
        scheme = _scheme(cfg, name, s)
        streams = _boot_streams(cfg, n, scen_idx, sim, name)
        _, res_star, u_star = batch_gof_replicates(theta_fit, fit.weights, pool, scheme, streams)
        bsup, bcm = batch_edf_distances(res_star, u_star, weight_on="b")
        boots = {"ks": np.sqrt(n) * bsup, "cm": bcm}
        for i, stat in enumerate(stats):
            out[i, j] = _exceedance(obs[stat], boots[stat], cfg.alphas)
    return out
