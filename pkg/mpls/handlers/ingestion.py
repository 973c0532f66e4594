"""
File ingestion and emission: Matrix Market, the Puiseux text format and CSV.

Max-plus matrices are written in coordinate format with finite entries only;
an absent coordinate entry is bottom. For numeric matrices it is 0.

Puiseux text format, one entry per line, 1-based indices:

    i j exp1:re,im;exp2:re,im

Exponents are rationals like `-3` or `1/2`. Blank lines and lines starting
with `#` or `%` are ignored. Every entry of the matrix must appear once.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from scipy import io, sparse

from mpls.core.constants import CSV_FLOAT_FORMAT
from mpls.core.errors import FormatError
from mpls.handlers.reports import build_manifest
from mpls.models.experiment import ExperimentRecord
from mpls.models.maxplus import MaxPlusMatrix
from mpls.models.puiseux import PuiseuxMatrix, PuiseuxSeries
from mpls.models.scores import ScoreVector

logger = logging.getLogger(__name__)


def _mmread(path: Path):
    try:
        return io.mmread(str(path))
    except (ValueError, OSError, IndexError, RuntimeError) as exc:
        raise FormatError(f"{path}: not a readable Matrix Market file ({exc})") from exc


def read_maxplus_mm(path: Path | str) -> MaxPlusMatrix:
    """Max-plus matrix from Matrix Market; coordinate files give sparse storage."""
    data = _mmread(Path(path))
    if sparse.issparse(data):
        coo = data.tocoo()
        return MaxPlusMatrix.from_entries(coo.shape, coo.row, coo.col, coo.data.real)
    return MaxPlusMatrix.from_dense(np.asarray(data, dtype=float))


def write_maxplus_mm(path: Path | str, m: MaxPlusMatrix) -> Path:
    """Coordinate Matrix Market file holding the finite entries of m."""
    path = Path(path)
    dense = m.to_dense()
    rows, cols = np.nonzero(np.isfinite(dense))
    coo = sparse.coo_array((dense[rows, cols], (rows, cols)), shape=m.shape)
    io.mmwrite(str(path), coo, comment="max-plus matrix; absent entries are -inf", precision=17, symmetry="general")
    return path


def read_numeric_mm(path: Path | str) -> np.ndarray:
    """Dense real or complex matrix from Matrix Market; absent coordinate entries are 0."""
    data = _mmread(Path(path))
    if sparse.issparse(data):
        data = data.toarray()
    array = np.asarray(data)
    if array.dtype.kind not in "fc":
        array = array.astype(float)
    return array


def write_numeric_mm(path: Path | str, a: np.ndarray) -> Path:
    """Array-format Matrix Market file with 17 significant digits."""
    path = Path(path)
    io.mmwrite(str(path), np.asarray(a), precision=17, symmetry="general")
    return path


def _parse_terms(text: str, line: int) -> List[Tuple[Fraction, complex]]:
    terms = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            exp_text, coef_text = chunk.split(":")
            re_text, im_text = coef_text.split(",")
            terms.append((Fraction(exp_text.strip()), complex(float(re_text), float(im_text))))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad term {chunk!r}, expected exp:re,im", line=line) from exc
    if not terms:
        raise FormatError("entry has no terms", line=line)
    return terms


def parse_puiseux(text: str) -> PuiseuxMatrix:
    """Parse the Puiseux text format."""
    entries: Dict[Tuple[int, int], PuiseuxSeries] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        parts = line.split(None, 2)
        if len(parts) != 3:
            raise FormatError("expected `i j terms`", line=number)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError("indices must be integers", line=number) from exc
        if i < 1 or j < 1:
            raise FormatError("indices are 1-based", line=number)
        if (i, j) in entries:
            raise FormatError(f"duplicate entry ({i}, {j})", line=number)
        series = PuiseuxSeries(_parse_terms(parts[2], number))
        if series.is_zero():
            raise FormatError(f"entry ({i}, {j}) is identically zero", line=number)
        entries[(i, j)] = series

    if not entries:
        raise FormatError("no entries")
    n = max(i for i, _ in entries)
    d = max(j for _, j in entries)
    missing = [(i, j) for i in range(1, n + 1) for j in range(1, d + 1) if (i, j) not in entries]
    if missing:
        raise FormatError(f"missing entries, e.g. {missing[0]}; zero entries are not allowed")
    return PuiseuxMatrix([[entries[(i, j)] for j in range(1, d + 1)] for i in range(1, n + 1)])


def read_puiseux(path: Path | str) -> PuiseuxMatrix:
    return parse_puiseux(Path(path).read_text(encoding="utf-8"))


def format_puiseux(m: PuiseuxMatrix) -> str:
    lines = []
    for i, row in enumerate(m.rows(), start=1):
        for j, entry in enumerate(row, start=1):
            terms = ";".join(f"{exp}:{coef.real!r},{coef.imag!r}" for exp, coef in entry.terms)
            lines.append(f"{i} {j} {terms}")
    return "\n".join(lines) + "\n"


def write_puiseux(path: Path | str, m: PuiseuxMatrix) -> Path:
    path = Path(path)
    path.write_text(format_puiseux(m), encoding="utf-8")
    return path


def write_csv(frame: pd.DataFrame, path: Path | str) -> Path:
    """CSV with 17 significant digits, so doubles read back exactly."""
    path = Path(path)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info("wrote %s (%d rows)", path, len(frame))
    return path


def write_scores_csv(scores: ScoreVector, path: Path | str) -> Path:
    """`row_index,score` with 1-based rows."""
    return write_csv(scores.to_frame(), path)


def read_scores_csv(path: Path | str) -> np.ndarray:
    frame = pd.read_csv(path, float_precision="round_trip")
    if list(frame.columns) != ["row_index", "score"]:
        raise FormatError(f"{path}: expected header row_index,score, got {list(frame.columns)}")
    return frame["score"].to_numpy(dtype=float)


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def write_record(record: ExperimentRecord, out_dir: Path | str) -> List[Path]:
    """Write every table as `<name>.csv`, every matrix as `<name>.mtx`, then `run.json`."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [write_csv(frame, out_dir / f"{name}.csv") for name, frame in record.tables.items()]
    written += [write_numeric_mm(out_dir / f"{name}.mtx", array) for name, array in record.matrices.items()]
    manifest = build_manifest(record, [path.name for path in written])
    manifest_path = out_dir / "run.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, default=_json_default) + "\n", encoding="utf-8")
    logger.info("wrote %s", manifest_path)
    return written + [manifest_path]
