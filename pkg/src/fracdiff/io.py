"""
File output for the CLI: CSV through pandas, JSON reports, problem configs.

Every output is written to a temporary file in the target directory and moved
into place with os.replace, so a failed run never leaves a partial file at the
target path. Formats are fixed, so identical inputs give byte-identical files.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import IO, Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .errors import ValidationError
from .models import CoeffTable, ConvergenceTable, Operator, StabilityCurve, Trajectory

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Writer = Callable[[IO[str]], None]

FULL_PRECISION = "%.16e"  # 17 significant digits


def write_atomic(outputs: Sequence[Tuple[PathLike, Writer]]) -> None:
    """Write several files so that either all of them appear or none does."""
    staged: List[Tuple[str, Path]] = []
    try:
        for out, writer in outputs:
            target = Path(out)
            handle = tempfile.NamedTemporaryFile(
                "w",
                dir=target.parent,
                prefix=f".{target.name}.",
                suffix=".tmp",
                delete=False,
                encoding="utf8",
                newline="",
            )
            staged.append((handle.name, target))
            with handle:
                writer(handle)
        for tmp_name, target in staged:
            os.replace(tmp_name, target)
            logger.info("wrote %s", target)
    except BaseException:
        for tmp_name, _ in staged:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
        raise


def _csv_writer(frame: pd.DataFrame, float_format: str = FULL_PRECISION, header: bool = True) -> Writer:
    def write(handle: IO[str]) -> None:
        frame.to_csv(handle, index=False, header=header, float_format=float_format, lineterminator="\n")

    return write


def _json_writer(payload: Dict[str, Any]) -> Writer:
    def write(handle: IO[str]) -> None:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")

    return write


class ResultWriter:
    """Build the tabular outputs and write them atomically."""

    def coefficients_frame(self, table: CoeffTable) -> pd.DataFrame:
        return pd.DataFrame({"i": np.arange(table.n), "a": table.a, "g": table.g})

    def trajectory_frame(self, traj: Trajectory) -> pd.DataFrame:
        """One row per stored (t_j, x_i), boundary nodes included."""
        x = traj.grid.nodes()
        full = traj.full_states()
        return pd.DataFrame(
            {
                "t": np.repeat(traj.times, x.size),
                "x": np.tile(x, len(traj.steps)),
                "u": full.ravel(),
            }
        )

    def stability_frame(self, curves: Sequence[StabilityCurve]) -> pd.DataFrame:
        records = [
            (curve.q_tau, p.theta, p.lambda_r, p.lambda_i)
            for curve in curves
            for p in curve.points
        ]
        return pd.DataFrame.from_records(records, columns=["qtau", "theta", "lambda_r", "lambda_i"])

    def convergence_frame(self, table: ConvergenceTable) -> pd.DataFrame:
        """Errors in the tables' 4-decimal scientific format, rates to 4 decimals."""
        return pd.DataFrame(
            {
                "resolution": [r.resolution for r in table.rows],
                "error": [f"{r.error:.4E}" for r in table.rows],
                "rate": ["" if r.rate is None else f"{r.rate:.4f}" for r in table.rows],
            }
        )

    def write_coefficients(self, table: CoeffTable, path: PathLike) -> None:
        write_atomic([(path, _csv_writer(self.coefficients_frame(table)))])

    def coefficients_text(self, table: CoeffTable) -> str:
        return self.coefficients_frame(table).to_csv(
            index=False, float_format=FULL_PRECISION, lineterminator="\n"
        )

    def write_solution(
        self,
        traj: Trajectory,
        path: PathLike,
        op: Optional[Operator] = None,
        operator_path: Optional[PathLike] = None,
    ) -> None:
        """Trajectory CSV, plus the operator matrix when a dump path is given."""
        outputs: List[Tuple[PathLike, Writer]] = [(path, _csv_writer(self.trajectory_frame(traj)))]
        if op is not None and operator_path is not None:
            # N-1 rows, no header
            outputs.append((operator_path, _csv_writer(pd.DataFrame(op.A), header=False)))
        write_atomic(outputs)

    def write_stability(self, curves: Sequence[StabilityCurve], path: PathLike) -> None:
        write_atomic([(path, _csv_writer(self.stability_frame(curves)))])

    def write_convergence(
        self, table: ConvergenceTable, report: Dict[str, Any], path: PathLike
    ) -> Path:
        """Write the CSV table and its sibling `.json` report together.

        Returns:
            Path of the JSON report.
        """
        path = Path(path)
        json_path = path.with_suffix(".json")
        write_atomic(
            [
                (path, _csv_writer(self.convergence_frame(table))),
                (json_path, _json_writer(report)),
            ]
        )
        return json_path


def read_problem_config(path: PathLike) -> Dict[str, Any]:
    """Parse a JSON problem description."""
    try:
        with open(path, "r", encoding="utf8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ValidationError(f"problem config not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"problem config {path} is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"problem config {path} must hold a JSON object")
    return data
