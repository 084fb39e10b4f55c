"""Exact Lipschitz / co-Lipschitz constants of an embedding table.

All ratios are ``||x_u - x_v|| / d(u, v)`` computed as Fractions from integer
norms and integer distance units, so the comparisons against the bounds are
exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .graphs import DIAMOND, MetricTable, frac_str, upward_reachability
from .kernels import pairwise_norms, row_norms
from .signvec import L1, NORMS, SUMMING

COLIPSCHITZ_K = 8


@dataclass
class DistortionReport:
    family: str
    n: int
    k: int
    norm: str
    scale: int
    lipschitz: Fraction
    colipschitz: Fraction
    worst_pairs: list
    vertical_pairs: int
    vertical_failures: list
    case_counts: dict = field(default_factory=dict)
    case_failures: list = field(default_factory=list)

    @property
    def distortion(self) -> Fraction:
        return self.lipschitz / self.colipschitz

    @property
    def lipschitz_exact(self) -> bool:
        return self.lipschitz == self.scale

    @property
    def colipschitz_ok(self) -> bool:
        return self.colipschitz * COLIPSCHITZ_K >= self.scale

    @property
    def passed(self) -> bool:
        return (self.lipschitz_exact and self.colipschitz_ok
                and not self.vertical_failures and not self.case_failures)

    def to_json(self) -> dict:
        def q(x):
            return {"exact": frac_str(x), "approx": float(x)}

        return {
            "family": self.family,
            "n": self.n,
            "k": self.k,
            "norm": self.norm,
            "scale": self.scale,
            "lipschitz": q(self.lipschitz),
            "colipschitz": q(self.colipschitz),
            "distortion": q(self.distortion),
            "lipschitz_exact": self.lipschitz_exact,
            "colipschitz_ok": self.colipschitz_ok,
            "vertical_pairs": self.vertical_pairs,
            "vertical_failures": self.vertical_failures[:10],
            "case_counts": {str(c): v for c, v in sorted(self.case_counts.items())},
            "case_failures": self.case_failures[:10],
            "worst_pairs": [[u, v, frac_str(r)] for u, v, r in self.worst_pairs],
            "passed": self.passed,
        }


def norm_matrices(table) -> dict:
    """Pairwise ``l1`` and summing norm matrices for all rows of ``table``."""
    l1, sm = pairwise_norms(table.matrix)
    return {L1: l1, SUMMING: sm}


def image_norms(table) -> dict:
    l1, sm = row_norms(table.matrix)
    return {L1: l1, SUMMING: sm}


def distortion_report(metric: MetricTable, table, norm: str, norms: dict | None = None,
                      classify=None) -> DistortionReport:
    """Exact distortion data over all unordered vertex pairs.

    ``classify`` optionally maps a pair to an object with ``case`` and ``K``
    attributes; each pair's ratio is then checked against ``scale / K``.
    """
    if norm not in NORMS:
        raise DomainError(f"unknown norm {norm!r}")
    g = metric.graph
    if tuple(table.vertices) != tuple(g.vertices):
        raise DomainError("embedding table does not cover the metric's vertex set")
    norms = norms if norms is not None else norm_matrices(table)
    N = norms[norm]
    units = metric.units
    per_unit = g.base**g.n
    top = g.index(g.top)
    scale = int(image_norms(table)[norm][top])
    reach = upward_reachability(g)
    V = len(g.vertices)

    lip = None
    colip = None
    worst = []
    vertical = 0
    vertical_bad = []
    case_counts = {}
    case_bad = []
    for i in range(V):
        for j in range(i + 1, V):
            ratio = Fraction(int(N[i, j]) * per_unit, int(units[i, j]))
            if lip is None or ratio > lip:
                lip = ratio
            if colip is None or ratio < colip:
                colip = ratio
                worst = [(str(g.vertices[i]), str(g.vertices[j]), ratio)]
            elif ratio == colip and len(worst) < 5:
                worst.append((str(g.vertices[i]), str(g.vertices[j]), ratio))
            if reach[i, j] or reach[j, i]:
                vertical += 1
                if ratio != scale:
                    vertical_bad.append((str(g.vertices[i]), str(g.vertices[j]), frac_str(ratio)))
            if classify is not None:
                c = classify(g.vertices[i], g.vertices[j])
                case_counts[c.case] = case_counts.get(c.case, 0) + 1
                if ratio * c.K < scale:
                    case_bad.append((str(g.vertices[i]), str(g.vertices[j]), c.case, frac_str(ratio)))
    return DistortionReport(g.family, g.n, g.k, norm, scale, lip, colip, worst,
                            vertical, vertical_bad, case_counts, case_bad)


def diamond_distortion_report(metric: MetricTable, table, norm: str, norms: dict | None = None) -> DistortionReport:
    """Distortion report with the five-case lower bounds for diamonds."""
    from .diamond import classify_pair

    if metric.graph.family != DIAMOND:
        raise DomainError("case analysis applies to diamonds")
    return distortion_report(metric, table, norm, norms, classify=classify_pair)
