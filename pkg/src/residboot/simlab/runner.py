"""Study runner: task decomposition, parallel execution, checkpoints, aggregation.

Simulations are split into chunks of at most ``flush_every`` consecutive sim
indices per (n, scenario) pair.  Chunks are independent tasks; their results
are integer exceedance counts, so aggregation is order-independent and the
emitted table is identical for any worker count.  Completed chunks are flushed
to the checkpoint file (when configured) so long runs can resume; a worker
failure aborts the run with the partial counts flushed.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import FIRST_EXCEPTION, ProcessPoolExecutor, wait
from dataclasses import asdict

import numpy as np

from .config import ExperimentConfig
from .engine import run_sim
from .tables import RejectionTable, TableCell

__all__ = ["run_study", "WorkerFailure"]


class WorkerFailure(RuntimeError):
    """A simulation task failed; partial results were flushed."""


def _config_key(cfg):
    """Hash of the result-determining config fields (runtime knobs excluded)."""
    payload = asdict(cfg)
    for runtime_only in ("workers", "out", "format", "checkpoint", "flush_every"):
        payload.pop(runtime_only, None)
    blob = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _chunks(n_sims, size):
    return [(lo, min(lo + size, n_sims)) for lo in range(0, n_sims, size)]


def _run_chunk(cfg, n, scen_idx, lo, hi):
    """Sum of per-sim exceedance indicators over sims [lo, hi)."""
    scen = cfg.scenarios()[scen_idx]
    counts = None
    for sim in range(lo, hi):
        ind = run_sim(cfg, n, scen, scen_idx, sim)
        counts = ind.astype(np.int64) if counts is None else counts + ind
    return counts


class _Checkpoint:
    def __init__(self, path, cfg):
        self.path = path
        self.key = _config_key(cfg)
        self.seed = cfg.seed
        self.done = {}  # (n, scen_idx) -> set of (lo, hi)
        self.counts = {}  # (n, scen_idx) -> int64 array

    @classmethod
    def load(cls, path, cfg):
        ckpt = cls(path, cfg)
        if path is None or not os.path.exists(path):
            return ckpt
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("config_key") != ckpt.key or payload.get("seed") != cfg.seed:
            return ckpt  # stale checkpoint from another run; start fresh
        for item in payload.get("keys", []):
            key = (item["n"], item["scenario_index"])
            ckpt.done[key] = {tuple(span) for span in item["spans"]}
            ckpt.counts[key] = np.asarray(item["counts"], dtype=np.int64)
        return ckpt

    def record(self, n, scen_idx, lo, hi, counts):
        key = (n, scen_idx)
        self.done.setdefault(key, set()).add((lo, hi))
        self.counts[key] = counts if key not in self.counts else self.counts[key] + counts

    def flush(self):
        if self.path is None:
            return
        keys = [
            {
                "n": n,
                "scenario_index": scen_idx,
                "spans": sorted(spans),
                "counts": self.counts[(n, scen_idx)].tolist(),
            }
            for (n, scen_idx), spans in sorted(self.done.items())
        ]
        payload = {"config_key": self.key, "seed": self.seed, "keys": keys}
        tmp = f"{self.path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
        os.replace(tmp, self.path)


def run_study(cfg: ExperimentConfig) -> RejectionTable:
    """Run the configured Monte Carlo study and aggregate rejection proportions."""
    scenarios = cfg.scenarios()
    ckpt = _Checkpoint.load(cfg.checkpoint, cfg)

    tasks = []
    for n in cfg.n:
        for scen_idx in range(len(scenarios)):
            for lo, hi in _chunks(cfg.n_sims, cfg.flush_every):
                if (lo, hi) in ckpt.done.get((n, scen_idx), ()):
                    continue
                tasks.append((n, scen_idx, lo, hi))

    try:
        if cfg.workers == 1:
            for n, scen_idx, lo, hi in tasks:
                counts = _run_chunk(cfg, n, scen_idx, lo, hi)
                ckpt.record(n, scen_idx, lo, hi, counts)
                ckpt.flush()
        else:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                futures = {
                    pool.submit(_run_chunk, cfg, n, scen_idx, lo, hi): (n, scen_idx, lo, hi)
                    for n, scen_idx, lo, hi in tasks
                }
                pending = set(futures)
                while pending:
                    finished, pending = wait(pending, return_when=FIRST_EXCEPTION)
                    for fut in finished:
                        n, scen_idx, lo, hi = futures[fut]
                        ckpt.record(n, scen_idx, lo, hi, fut.result())
                        ckpt.flush()
    except WorkerFailure:
        raise
    except Exception as e:
        ckpt.flush()
        raise WorkerFailure(f"simulation task failed: {e}") from e

    stats = cfg.resolved_stats()
    cells = []
    for n in cfg.n:
        for scen_idx, scen in enumerate(scenarios):
            counts = ckpt.counts[(n, scen_idx)]
            for i, stat in enumerate(stats):
                for j, scheme in enumerate(cfg.schemes):
                    for k, alpha in enumerate(cfg.alphas):
                        cells.append(
                            TableCell(
                                n=n,
                                scenario=scen.label,
                                stat=stat,
                                scheme=scheme,
                                alpha=float(alpha),
                                proportion=counts[i, j, k] / cfg.n_sims,
                                n_sims=cfg.n_sims,
                            )
                        )
    return RejectionTable(
        study=cfg.study,
        alphas=tuple(cfg.alphas),
        n_sims=cfg.n_sims,
        n_boot=cfg.n_boot,
        seed=cfg.seed,
        cells=cells,
    )
