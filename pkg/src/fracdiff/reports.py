from typing import Any, Dict, List, Sequence

import numpy as np

from .models import ConvergenceTable, StepStats


class Reporter:
    """Summaries of convergence tables and fixed-point statistics."""

    def summary_metrics(self, table: ConvergenceTable) -> Dict[str, Any]:
        """Condense a convergence table.

        Returns a dict with keys:
        - rows: int
        - finest_error: float
        - min_rate / max_rate / mean_rate: float or None when no rate exists
        - expected_order: float
        - monotone: bool, errors strictly decrease down the table
        """
        rates = [r for r in table.rates if r is not None]
        errors = table.errors
        return {
            "rows": len(table.rows),
            "finest_error": errors[-1] if errors else None,
            "min_rate": min(rates) if rates else None,
            "max_rate": max(rates) if rates else None,
            "mean_rate": float(np.mean(rates)) if rates else None,
            "expected_order": table.expected_order,
            "monotone": all(b < a for a, b in zip(errors, errors[1:])),
        }

    def iteration_summary(self, stats: Sequence[StepStats]) -> Dict[str, Any]:
        """Totals over the fixed-point statistics of one run."""
        if not stats:
            return {
                "steps": 0,
                "total_iterations": 0,
                "mean_iterations": 0.0,
                "max_iterations": 0,
                "max_residual": 0.0,
            }
        iterations = [s.iterations for s in stats]
        return {
            "steps": len(stats),
            "total_iterations": int(sum(iterations)),
            "mean_iterations": float(np.mean(iterations)),
            "max_iterations": int(max(iterations)),
            "max_residual": float(max(s.residual for s in stats)),
        }

    def table_report(self, table: ConvergenceTable) -> Dict[str, Any]:
        """Full-precision, JSON-ready report of a table with per-step statistics."""
        rows: List[Dict[str, Any]] = []
        for row in table.rows:
            rows.append(
                {
                    "resolution": row.resolution,
                    "h": row.h,
                    "tau": row.tau,
                    "error": row.error,
                    "rate": row.rate,
                    "compared_points": row.compared_points,
                    "fixed_point": self.iteration_summary(row.stats),
                    "steps": [
                        {"iterations": s.iterations, "residual": s.residual}
                        for s in row.stats
                    ],
                }
            )
        return {
            "problem": table.problem,
            "alpha": table.alpha,
            "axis": table.axis.value,
            "fixed_resolution": table.fixed_resolution,
            "reference": {"N": table.ref_N, "M": table.ref_M},
            "summary": self.summary_metrics(table),
            "rows": rows,
        }
