"""Desk-scale Monte Carlo study through the library API.

Reproduces a slice of the symmetry-test rejection table (normal null d=0 and
skew-normal alternative d=4) at a reduced scale and prints it with the
scenario-grouped layout.  The same study is available from the command line:

    residboot symmetry --n 100 --sims 100 --boot 100 --d 0,4 --seed 7 --format markdown

At full scale (2000 simulations x 2000 bootstraps, n up to 1000) use the CLI
with --checkpoint so long runs are resumable.
"""

import time

from residboot.simlab import build_config, emit, run_study

cfg = build_config(
    "symmetry",
    {},
    {
        "n": (100,),
        "d": (0.0, 4.0),
        "n_sims": 100,
        "n_boot": 100,
        "alphas": (0.05, 0.1),
        "seed": 7,
    },
)

t0 = time.perf_counter()
table = run_study(cfg)
print(f"ran {cfg.n_sims} simulations x {cfg.n_boot} bootstraps in {time.perf_counter() - t0:.1f}s\n")
print(emit(table, "markdown").decode())
print("rejection proportions approach the level at d=0 and grow with the skewness d;")
print("the Cramer-von Mises statistic dominates Kolmogorov-Smirnov throughout.")
