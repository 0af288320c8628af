"""Structural checks for curve state tables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from amrpart.sfc.codec import traversal
from amrpart.sfc.tables import CurveTable


@dataclass
class ValidationReport:
    table: str
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, kind: str) -> int:
        return sum(1 for v in self.violations if v.startswith(kind))


def validate_curve_table(table: CurveTable, orders=(1, 2, 3, 4)) -> ValidationReport:
    """Check permutation, face adjacency and continuity; never raises."""
    report = ValidationReport(table.name)
    n_sub = 1 << table.dimension
    structural_ok = True
    for s, row in enumerate(table.entries):
        codes = [c for c, _ in row]
        if len(row) != n_sub or sorted(codes) != list(range(n_sub)):
            report.violations.append(f"permutation: state {s} visits {codes}")
            structural_ok = False
        for p in range(len(codes) - 1):
            if bin(codes[p] ^ codes[p + 1]).count("1") != 1:
                report.violations.append(
                    f"adjacency: state {s} steps {codes[p]}->{codes[p + 1]} across more than a face"
                )
        for p, (_, t) in enumerate(row):
            if not 0 <= t < table.n_states:
                report.violations.append(f"next_state: state {s} position {p} -> {t}")
                structural_ok = False
    if not structural_ok:
        return report
    for order in orders:
        pts = traversal(table, order)
        steps = np.abs(np.diff(pts, axis=0)).sum(axis=1)
        for k in np.flatnonzero(steps != 1):
            report.violations.append(
                f"continuity: order {order} keys {k}->{k + 1} are {int(steps[k])} apart"
            )
    return report
