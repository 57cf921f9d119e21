"""Residual bootstrap for regression residual processes.

Non-smooth and smooth residual bootstrap for nonparametric (Nadaraya-Watson)
and fixed-design linear regression, the associated symmetry and
goodness-of-fit tests, and a reproducible Monte Carlo study harness.
"""

from .bootstrap import BootstrapScheme, Replicate, draw_errors, gof_replicate, lin_replicate, np_replicate
from .distributions import (
    Affine,
    ErrorDistribution,
    Gumbel,
    Mixture,
    MomentSpec,
    Normal,
    SkewNormal,
    StudentT,
    parse_distribution,
    standardize,
)
from .empirical import Edf, ProcessDistance, SmoothedEdf, cm_distance, ks_distance, ls_stat, mad_stat
from .inference import (
    CovarianceOracle,
    TestResult,
    bootstrap_critical_value,
    cov_linear,
    cov_nonparametric,
    gof_test,
    symmetry_test,
)
from .kernels import BIWEIGHT, EPANECHNIKOV, GAUSSIAN, BandwidthRule, IntegratedKernel, Kernel, get_kernel
from .regression import (
    Dataset,
    LinearFit,
    NWFit,
    ParametricFamily,
    center,
    equispaced_design,
    get_family,
    ls_fit,
    nw_fit,
    nw_predict,
    parametric_smooth,
    residuals,
)

__version__ = "0.1.0"
