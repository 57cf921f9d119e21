"""Aggregated rejection tables and their CSV / markdown emitters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RejectionTable", "TableCell", "emit", "CSV_HEADER"]

CSV_HEADER = "study,n,scenario,stat,scheme,alpha,proportion,se,n_sims,n_boot,seed"

_SCHEME_TAG = {"smooth": "s", "nonsmooth": "0"}


@dataclass(frozen=True)
class TableCell:
    """One rejection (or exceedance) proportion with its binomial SE."""

    n: int
    scenario: str
    stat: str
    scheme: str
    alpha: float
    proportion: float
    n_sims: int

    @property
    def se(self):
        return float(np.sqrt(self.proportion * (1.0 - self.proportion) / self.n_sims))


@dataclass
class RejectionTable:
    """Rows keyed by (n, scenario, stat, scheme); columns are the alpha levels."""

    study: str
    alphas: tuple
    n_sims: int
    n_boot: int
    seed: int
    cells: list

    def cell(self, n, scenario, stat, scheme, alpha):
        for c in self.cells:
            if (c.n, c.scenario, c.stat, c.scheme) == (n, scenario, stat, scheme) and np.isclose(
                c.alpha, alpha
            ):
                return c
        raise KeyError(f"no cell ({n}, {scenario!r}, {stat!r}, {scheme!r}, {alpha})")

    def proportion(self, n, scenario, stat, scheme, alpha):
        return self.cell(n, scenario, stat, scheme, alpha).proportion

    def to_csv(self):
        lines = [CSV_HEADER]
        for c in self.cells:
            lines.append(
                f"{self.study},{c.n},{c.scenario},{c.stat},{c.scheme},{c.alpha:g},"
                f"{c.proportion:.6f},{c.se:.6f},{self.n_sims},{self.n_boot},{self.seed}"
            )
        return "\n".join(lines) + "\n"

    def to_markdown(self):
        """Rows n x (stat, scheme); columns grouped by scenario, one per alpha."""
        scenarios, ns, rows = [], [], []
        for c in self.cells:
            if c.scenario not in scenarios:
                scenarios.append(c.scenario)
            if c.n not in ns:
                ns.append(c.n)
            if (c.stat, c.scheme) not in rows:
                rows.append((c.stat, c.scheme))
        header = ["n", "test"]
        for scen in scenarios:
            for a in self.alphas:
                prefix = f"{scen} " if scen != "-" else ""
                header.append(f"{prefix}a={a:g}")
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        for n in ns:
            for stat, scheme in rows:
                label = f"{stat.upper()}_{_SCHEME_TAG[scheme]}*"
                vals = []
                for scen in scenarios:
                    for a in self.alphas:
                        try:
                            vals.append(f"{self.proportion(n, scen, stat, scheme, a):.3f}")
                        except KeyError:
                            vals.append("")
                lines.append("| " + " | ".join([str(n), label] + vals) + " |")
        return "\n".join(lines) + "\n"


def emit(table, format="csv"):
    """Serialize a RejectionTable; returns UTF-8 bytes."""
    if format == "csv":
        return table.to_csv().encode()
    if format == "markdown":
        return table.to_markdown().encode()
    raise ValueError(f"format must be 'csv' or 'markdown', got {format!r}")
