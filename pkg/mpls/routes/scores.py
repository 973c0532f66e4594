"""
Leverage-score endpoints.
"""

import logging
import tempfile
from pathlib import Path
from typing import List, Optional

import numpy as np
from fastapi import APIRouter, File, HTTPException, UploadFile, status

from mpls.core.errors import CapacityError, FormatError, MplsError
from mpls.handlers.ingestion import read_numeric_mm
from mpls.handlers.leverage import (
    assign_and_score,
    cnrn_scores,
    exact_scores,
    log_abs,
    naive_maxplus_scores,
    softmax,
)
from mpls.models.experiment import AssignmentRequest, AssignmentResponse, ScoreRequest, ScoreResponse
from mpls.models.maxplus import BOTTOM, MaxPlusMatrix

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/scores", tags=["scores"])


def _nullable(values: np.ndarray) -> List[Optional[float]]:
    """JSON has no -inf; bottom goes out as null."""
    return [None if value == BOTTOM else float(value) for value in values]


def _error(exc: MplsError) -> HTTPException:
    if isinstance(exc, CapacityError):
        return HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(exc))
    return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc))


def score_matrix(a: np.ndarray) -> ScoreResponse:
    """Every score family for one real or complex matrix."""
    try:
        exact = exact_scores(a)
        log_a = log_abs(a)
        maxplus, _ = assign_and_score(log_a)
        naive = naive_maxplus_scores(log_a)
        cnrn = cnrn_scores(a)
    except MplsError as exc:
        raise _error(exc) from exc
    n, d = a.shape
    return ScoreResponse(
        n=n,
        d=d,
        rank=exact.rank_k,
        exact=exact.distribution().tolist(),
        maxplus=_nullable(maxplus.values),
        heuristic=softmax(maxplus).values.tolist(),
        naive=_nullable(naive.values),
        cnrn=cnrn.distribution().tolist(),
    )


@router.post("", response_model=ScoreResponse)
def score_endpoint(request: ScoreRequest):
    """Score a tall matrix sent as a row-major JSON array."""
    try:
        a = np.array(request.matrix, dtype=float)
    except ValueError as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"Ragged matrix: {exc}")
    if a.ndim != 2 or a.shape[0] < a.shape[1]:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"Need a tall matrix (rows >= columns), got shape {a.shape}",
        )
    return score_matrix(a)


@router.post("/upload", response_model=ScoreResponse)
def score_upload_endpoint(file: UploadFile = File(...)):
    """
    Score a matrix uploaded as a Matrix Market file.

    Array and coordinate formats are accepted; absent coordinate entries are 0.
    """
    if not file.filename or not file.filename.endswith(".mtx"):
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail="File must be a Matrix Market (.mtx) file",
        )
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "upload.mtx"
        file.file.seek(0)
        path.write_bytes(file.file.read())
        try:
            a = read_numeric_mm(path)
        except FormatError as exc:
            raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc)) from exc
    if a.ndim != 2 or a.shape[0] < a.shape[1]:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"Need a tall matrix (rows >= columns), got shape {a.shape}",
        )
    logger.info("scoring uploaded %s, shape %s", file.filename, a.shape)
    return score_matrix(a)


@router.post("/assignment", response_model=AssignmentResponse)
def assignment_endpoint(request: AssignmentRequest):
    """Optimal assignment, duals and max-plus scores of a max-plus matrix (null = -inf)."""
    rows = request.matrix
    if len({len(row) for row in rows}) != 1:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail="Ragged matrix")
    dense = np.array([[BOTTOM if value is None else value for value in row] for row in rows], dtype=float)
    try:
        a = MaxPlusMatrix.from_dense(dense)
        scores, res = assign_and_score(a)
    except MplsError as exc:
        raise _error(exc) from exc
    return AssignmentResponse(
        phi=list(res.phi.one_based()),
        weight=res.weight,
        row_duals={int(i) + 1: float(u) for i, u in zip(res.rows, res.row_duals)},
        col_duals=res.col_duals.tolist(),
        scores=_nullable(scores.values),
        truncated=res.truncated,
        rows_kept=res.report.rows_kept,
    )
