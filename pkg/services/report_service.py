"""
Report Service - JSON reports and CSV plot data
"""

import json
import logging
from pathlib import Path
from typing import Callable, Iterable, List, Sequence, Union

import numpy as np
import pandas as pd

from config import settings
from schemas import FrequencyTerm, PrimeSupport, VerificationReport

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class ReportService:
    """Writes verification reports and plot-ready tables"""

    def __init__(self, output_dir: str = None):
        self.output_dir = Path(output_dir or settings.OUTPUT_DIR)

    def resolve(self, path: PathLike) -> Path:
        """Relative paths land under OUTPUT_DIR"""
        path = Path(path)
        return path if path.is_absolute() or path.parent != Path(".") else self.output_dir / path

    def write_report(self, reports: Union[VerificationReport, Sequence[VerificationReport]], path: PathLike) -> Path:
        if isinstance(reports, VerificationReport):
            payload = reports.to_json()
        else:
            payload = {
                "all_passed": all(r.passed for r in reports),
                "reports": [r.to_json() for r in reports],
            }
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
        logger.info(f"Report written to {path}")
        return path

    # ============= Plot data =============

    @staticmethod
    def sample(func: Callable, lo: float, hi: float, n: int = 100) -> pd.DataFrame:
        """(t, value) samples of a real or complex function on [lo, hi]"""
        if n < 2 or not hi > lo:
            raise ValueError("need n >= 2 samples on a nonempty interval")
        t = np.linspace(lo, hi, n)
        values = np.asarray(func(t))
        frame = pd.DataFrame({"t": t})
        if np.iscomplexobj(values):
            frame["value"] = values.real
            frame["value_imag"] = values.imag
        else:
            frame["value"] = values.astype(float)
        return frame

    @staticmethod
    def atoms_frame(atoms: Union[PrimeSupport, Iterable[FrequencyTerm]]) -> pd.DataFrame:
        """(position, weight) rows of an atomic side"""
        if isinstance(atoms, PrimeSupport):
            rows = [(t.position, t.weight) for t in atoms.terms]
            return pd.DataFrame(rows, columns=["position", "weight"])
        rows: List[tuple] = []
        for term in atoms:
            b = term.b if term.b is not None else 0j
            weight = term.value * b
            rows.append((term.value, weight.real, weight.imag, term.k_label()))
        return pd.DataFrame(rows, columns=["position", "weight", "weight_imag", "k"])

    def emit_plot_data(self, data: Union[pd.DataFrame, VerificationReport], path: PathLike) -> Path:
        """CSV for external plotting; a report becomes one row per side"""
        if isinstance(data, VerificationReport):
            data = pd.DataFrame(
                [
                    ("lhs", data.lhs.real, data.lhs.imag),
                    ("rhs", data.rhs.real, data.rhs.imag),
                ],
                columns=["side", "value", "value_imag"],
            )
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        data.to_csv(path, index=False)
        logger.info(f"Plot data ({len(data)} rows) written to {path}")
        return path


# Singleton instance
report_service = ReportService()
