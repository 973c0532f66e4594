"""
Optimal assignment with dual variables, Hungarian scaling and the max-plus inverse.

The solver is a successive-shortest-path method over the sparse columns of a
max-plus matrix. Each column is augmented in turn along a shortest path found
with a binary heap; reduced costs stay nonnegative through the dual updates.

Costs are pairs (-a[i][j], i * n**(d-1-j)). The second component is an exact
integer, so among assignments of equal weight the solver returns the
lexicographically smallest (phi(1), ..., phi(d)).
"""

import heapq
import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.sparse import csgraph

from mpls.core.errors import ConsistencyError, ShapeError, StructuralRankError
from mpls.models.assignment import AssignmentReport, AssignmentResult, HungarianScaledMatrix
from mpls.models.maxplus import BOTTOM, Injection, MaxPlusMatrix

logger = logging.getLogger(__name__)

Cost = Tuple[float, int]

_UNREACHED: Cost = (math.inf, 0)


def _top_entries(rows: np.ndarray, values: np.ndarray, keep: int) -> Tuple[np.ndarray, np.ndarray]:
    """The `keep` largest entries of one column, decreasing; value ties go to smaller rows.

    `rows` must be ascending.
    """
    if rows.size > keep:
        threshold = np.partition(values, rows.size - keep)[rows.size - keep]
        above = values > threshold
        tied = np.flatnonzero(values == threshold)[: keep - int(above.sum())]
        mask = above.copy()
        mask[tied] = True
        rows, values = rows[mask], values[mask]
    order = np.lexsort((rows, -values))
    return rows[order], values[order]


def truncate_columns(a: MaxPlusMatrix) -> MaxPlusMatrix:
    """Sparse matrix keeping the d largest finite entries of every column."""
    if a.n < a.d:
        raise ShapeError(f"need rows >= cols, got {a.shape}")
    columns = [_top_entries(rows, values, a.d) for rows, values in a.columns()]
    truncated = MaxPlusMatrix.from_columns(a.shape, columns)
    logger.debug("truncated %s: %d -> %d finite entries", a.shape, a.finite_count, truncated.finite_count)
    return truncated


def _minus(x: Cost, y: Cost) -> Cost:
    return (x[0] - y[0], x[1] - y[1])


def _plus(x: Cost, y: Cost) -> Cost:
    return (x[0] + y[0], x[1] + y[1])


def optimal_assignment(a: MaxPlusMatrix, truncate: bool = True) -> AssignmentResult:
    """Optimal assignment of columns to rows of a, with feasible LP duals.

    With `truncate`, the solve runs on the d largest entries of each column,
    which preserves the permanent and the lexicographically smallest optimum.
    """
    n, d = a.shape
    if n < d:
        raise ShapeError(f"need rows >= cols, got {a.shape}")

    truncated = truncate and n > d
    if truncated:
        columns = [_top_entries(rows, values, d) for rows, values in a.columns()]
    else:
        columns = [a.column(j) for j in range(d)]
    for j, (rows, _) in enumerate(columns):
        if rows.size == 0:
            raise StructuralRankError(f"column {j} has no finite entry")

    candidates = np.unique(np.concatenate([rows for rows, _ in columns]))
    local = {int(row): k for k, row in enumerate(candidates)}
    m = candidates.size

    # edges[j] = [(target k, cost, value)]
    edges: List[List[Tuple[int, Cost, float]]] = []
    for j, (rows, values) in enumerate(columns):
        digit = n ** (d - 1 - j)
        edges.append(
            [(local[int(i)], (-float(v), int(i) * digit), float(v)) for i, v in zip(rows, values)]
        )

    col_dual: List[Cost] = [min(cost for _, cost, _ in column) for column in edges]
    row_dual: List[Cost] = [(0.0, 0)] * m
    col4row = [-1] * d  # target assigned to column
    row4col = [-1] * m  # column assigned to target
    heap_pops = 0

    for cur in range(d):
        dist: List[Cost] = [_UNREACHED] * m
        path = [-1] * m
        done = [False] * m
        visited = [cur]
        heap: List[Tuple[Cost, int]] = []
        shortest: Cost = (0.0, 0)
        column = cur
        sink = -1
        while sink < 0:
            base = _minus(shortest, col_dual[column])
            for k, cost, _ in edges[column]:
                if done[k]:
                    continue
                reduced = _minus(_plus(base, cost), row_dual[k])
                if reduced < dist[k]:
                    dist[k] = reduced
                    path[k] = column
                    heapq.heappush(heap, (reduced, k))
            while heap:
                reach, k = heapq.heappop(heap)
                heap_pops += 1
                if not done[k] and reach == dist[k]:
                    break
            else:
                raise StructuralRankError(
                    f"no assignment avoids bottom entries (column {cur} cannot be matched)"
                )
            shortest = reach
            done[k] = True
            if row4col[k] < 0:
                sink = k
            else:
                column = row4col[k]
                visited.append(column)

        col_dual[cur] = _plus(col_dual[cur], shortest)
        for column in visited[1:]:
            col_dual[column] = _plus(col_dual[column], _minus(shortest, dist[col4row[column]]))
        for k in range(m):
            if done[k]:
                row_dual[k] = _minus(row_dual[k], _minus(shortest, dist[k]))

        k = sink
        while True:
            column = path[k]
            row4col[k] = column
            col4row[column], k = k, col4row[column]
            if column == cur:
                break

    phi = tuple(int(candidates[col4row[j]]) for j in range(d))
    weight = 0.0
    for j in range(d):
        weight += next(value for k, _, value in edges[j] if k == col4row[j])

    report = AssignmentReport(
        rows_total=n,
        rows_kept=m,
        entries_kept=sum(len(column) for column in edges),
        augmentations=d,
        heap_pops=heap_pops,
    )
    logger.debug("assignment %s: weight=%g rows_kept=%d heap_pops=%d", a.shape, weight, m, heap_pops)
    return AssignmentResult(
        phi=Injection(phi=phi, weight=weight),
        rows=candidates,
        row_duals=np.array([-dual[0] for dual in row_dual]),
        col_duals=np.array([-dual[0] for dual in col_dual]),
        truncated=truncated,
        report=report,
    )


def apply_scaling(m: MaxPlusMatrix, pi: Sequence[int], d1: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """Dense P_pi ⊗ D1 ⊗ M ⊗ D2: entry (i, j) is d1[pi[i]] + m[pi[i]][j] + d2[j]."""
    pi = np.asarray(pi, dtype=np.int64)
    return m.to_dense()[pi, :] + d1[pi, None] + d2[None, :]


def _scaling_tol(m: MaxPlusMatrix) -> float:
    dense = m.to_dense()
    finite = dense[np.isfinite(dense)]
    scale = float(np.abs(finite).max()) if finite.size else 0.0
    return 1e-9 * (1.0 + scale)


def hungarian_scale(
    m: MaxPlusMatrix, res: AssignmentResult, rows: Sequence[int] | None = None
) -> HungarianScaledMatrix:
    """Hungarian scaling of a square m from the duals of an assignment solve.

    `rows[k]` names row k of m in `res` (default: the identity), so duals of a
    tall solve can be reused for the submatrix of its assigned rows.
    """
    if m.n != m.d:
        raise ShapeError(f"Hungarian scaling needs a square matrix, got {m.shape}")
    if len(res.phi.phi) != m.d:
        raise ShapeError(f"assignment has {len(res.phi.phi)} columns, matrix has {m.d}")
    labels = list(range(m.n)) if rows is None else [int(r) for r in rows]
    position = {label: k for k, label in enumerate(labels)}
    try:
        pi = tuple(position[row] for row in res.phi.phi)
        u = np.array([res.row_dual(label) for label in labels])
    except KeyError as exc:
        raise ConsistencyError(f"assignment does not cover the rows of the matrix: {exc}") from exc

    d1, d2 = -u, -res.col_duals.astype(float)
    h = apply_scaling(m, pi, d1, d2)
    tol = _scaling_tol(m)
    diagonal = np.diag(h)
    if not np.isfinite(diagonal).all() or np.abs(diagonal).max() > tol:
        raise ConsistencyError("complementary slackness fails on the assigned entries")
    if h.max() > tol:
        raise ConsistencyError(f"dual feasibility violated by {h.max():.3g}")
    h = np.minimum(h, 0.0)
    np.fill_diagonal(h, 0.0)
    return HungarianScaledMatrix(h=MaxPlusMatrix.from_dense(h), pi=pi, d1=d1, d2=d2)


def scale_assigned_rows(
    a: MaxPlusMatrix, res: AssignmentResult
) -> Tuple[MaxPlusMatrix, HungarianScaledMatrix, bool]:
    """Square submatrix M of the assigned rows and its Hungarian scaling.

    Duals of the tall solve are tried first; when they fail on M (entries
    dropped by truncation may violate them) M is solved afresh. The flag says
    whether that repair happened.
    """
    phi = res.phi.phi
    m = a.submatrix(phi)
    try:
        return m, hungarian_scale(m, res, rows=phi), False
    except ConsistencyError as exc:
        logger.warning("reused duals rejected on the assigned rows (%s); re-solving %dx%d", exc, m.n, m.d)
    fresh = optimal_assignment(m, truncate=False)
    return m, hungarian_scale(m, fresh), True


def path_closure(h: MaxPlusMatrix) -> np.ndarray:
    """Max-weight path from i to j in the graph of a Hungarian-scaled h.

    Edges are the finite off-diagonal entries; the empty path gives 0 on the
    diagonal and unreachable pairs are bottom.
    """
    weights = -np.array(h.to_dense())  # bottom becomes +inf, a non-edge
    np.fill_diagonal(weights, np.inf)
    graph = csgraph.csgraph_from_dense(weights, null_value=np.inf)
    dist = csgraph.dijkstra(graph, directed=True)
    return np.where(np.isinf(dist), BOTTOM, -dist)


def mp_inverse(m: MaxPlusMatrix, scaled: HungarianScaledMatrix | None = None) -> MaxPlusMatrix:
    """Max-plus inverse: inv[i][j] = perm(m without row j and column i) - perm(m)."""
    if m.n != m.d:
        raise ShapeError(f"inverse needs a square matrix, got {m.shape}")
    if m.d == 1:
        entry = float(m.to_dense()[0, 0])
        if entry == BOTTOM:
            raise StructuralRankError("permanent is bottom")
        return MaxPlusMatrix.from_dense([[-entry]])
    if scaled is None:
        scaled = hungarian_scale(m, optimal_assignment(m, truncate=False))
    closure = path_closure(scaled.h)
    # column pi[k] of P_pi picks row k of the closure
    inverse_pi = np.empty(m.d, dtype=np.int64)
    inverse_pi[np.asarray(scaled.pi)] = np.arange(m.d)
    inverse = scaled.d2[:, None] + closure[:, inverse_pi] + scaled.d1[None, :]
    return MaxPlusMatrix.from_dense(inverse)
