"""
Report and aggregation handlers.
"""

from typing import Any, Dict, Mapping

import numpy as np
import pandas as pd
import scipy

import mpls
from mpls.models.experiment import ExperimentRecord
from mpls.utils.hashing import hash_payload
from mpls.utils.time import utc_stamp


def aggregate_ratios(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Aggregate per-trial residual ratios into an error curve.

    Returns:
        One row per (method, r) with the geometric mean and the 5% / 95%
        quantiles of the ratio.
    """
    grouped = frame.groupby(["method", "r"], sort=False)["ratio"]
    curve = grouped.agg(
        geomean=lambda ratios: float(np.exp(np.log(ratios.to_numpy()).mean())),
        q05=lambda ratios: float(ratios.quantile(0.05)),
        q95=lambda ratios: float(ratios.quantile(0.95)),
    )
    return curve.reset_index()


def score_comparison(exact: np.ndarray, approximations: Mapping[str, np.ndarray]) -> pd.DataFrame:
    """Per-row exact distribution, each approximation and log10(approx / exact)."""
    exact = np.asarray(exact, dtype=float)
    columns: Dict[str, Any] = {"row_index": np.arange(1, exact.size + 1), "exact": exact}
    with np.errstate(divide="ignore", invalid="ignore"):
        for name, approx in approximations.items():
            approx = np.asarray(approx, dtype=float)
            columns[name] = approx
            columns[f"log10_ratio_{name}"] = np.log10(approx) - np.log10(exact)
    return pd.DataFrame(columns)


def accuracy_summary(comparison: pd.DataFrame, methods: list[str]) -> pd.DataFrame:
    """
    Order-of-magnitude accuracy of each approximation against the exact scores.

    Rows where both the exact value and the approximation are zero are left out.
    """
    records = []
    for name in methods:
        ratio = comparison[f"log10_ratio_{name}"].to_numpy()
        ratio = ratio[~np.isnan(ratio)]
        records.append(
            {
                "method": name,
                "rows": int(ratio.size),
                "within_decade": float(np.mean(np.abs(ratio) <= 1.0)) if ratio.size else float("nan"),
                "max_over_factor": float(10.0 ** ratio.max()) if ratio.size else float("nan"),
                "max_under_factor": float(10.0 ** -ratio.min()) if ratio.size else float("nan"),
            }
        )
    return pd.DataFrame(records)


def package_versions() -> Dict[str, str]:
    return {
        "mpls": mpls.__version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    }


def build_manifest(record: ExperimentRecord, files: list[str]) -> Dict[str, Any]:
    """
    Run manifest written next to the output tables as `run.json`.

    The payload hash covers the config, seeds and summary, so two runs with
    equal hashes agree on everything except timestamps.
    """
    payload = {
        "kind": record.kind,
        "config": record.config,
        "seed": record.seed,
        "streams": record.streams,
        "summary": record.summary,
    }
    return {
        **payload,
        "files": sorted(files),
        "versions": package_versions(),
        "payload_sha256": hash_payload(payload),
        "created_at": utc_stamp(),
    }
