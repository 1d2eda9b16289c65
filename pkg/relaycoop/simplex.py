# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Dense two-phase primal simplex for the small LPs of the access link:

    minimize c x  subject to  A x (<=, >=, =) b,  x >= 0

Bland's rule (smallest improving column, ties in the ratio test to the smallest basic variable)
keeps it from cycling on the degenerate vertices zero-rate targets produce.
"""
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from relaycoop.errors import DomainError, SolverError
from relaycoop.log import debug

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SimplexResult:
    x: Optional[np.ndarray]
    objective: float
    status: str
    iterations: int

    @property
    def optimal(self):
        return self.status == OPTIMAL


class _Tableau:

    def __init__(self, T, basis, tol, cap, shape):
        self.T = T
        self.basis = basis
        self.tol = tol
        self.cap = cap
        self.shape = shape
        self.iterations = 0
        self.history = deque(maxlen=5)

    def pivot(self, r, j, phase):
        if self.iterations >= self.cap:
            raise SolverError(self.iterations, self.cap, self.shape, self.history)
        self.iterations += 1
        self.history.append((phase, j, r))
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j

    def entering(self, ncols):
        improving = np.flatnonzero(self.T[-1, :ncols] < -self.tol)
        return int(improving[0]) if improving.size else None

    def leaving(self, j):
        T = self.T
        m = T.shape[0] - 1
        best, best_ratio = None, np.inf
        for i in range(m):
            if T[i, j] > self.tol:
                ratio = T[i, -1] / T[i, j]
                if best is None or ratio < best_ratio - self.tol or (
                        abs(ratio - best_ratio) <= self.tol and self.basis[i] < self.basis[best]):
                    best, best_ratio = i, ratio
        return best

    def run(self, ncols, phase):
        """
        Pivots until optimal; returns False when the objective is unbounded below.
        """
        while True:
            j = self.entering(ncols)
            if j is None:
                return True
            r = self.leaving(j)
            if r is None:
                return False
            self.pivot(r, j, phase)

    def solution(self, n):
        """
        Values of the first n columns. Entries down to -tol times the largest magnitude (at
        least 1) come from ratio-test ties and read as 0; anything lower raises SolverError.
        """
        values = np.zeros(self.T.shape[1] - 1)
        values[self.basis] = self.T[:-1, -1]
        x = values[:n]
        scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
        if np.any(x < -self.tol * scale):
            raise SolverError(self.iterations, self.cap, self.shape, self.history,
                              reason="Simplex solution has negative entries (min %.3g)"
                              % float(np.min(x)))
        return np.maximum(x, 0.0)

    def price_out(self, cost):
        T = self.T
        T[-1, :] = 0.0
        T[-1, :len(cost)] = cost
        for i, k in enumerate(self.basis):
            if k < len(cost) and cost[k] != 0.0:
                T[-1] -= cost[k] * T[i]


def solve(c, A, b, sense, tol=1e-9, max_iter=None) -> SimplexResult:
    """
    Solves the LP; status is one of optimal, infeasible, unbounded.

    :param c: objective coefficients (n)
    :param A: constraint matrix (m x n)
    :param b: right-hand sides (m)
    :param sense: per row "<=", ">=" or "="
    :param tol: pivot and feasibility tolerance
    :param max_iter: pivot cap, default 10 (n + m)
    :return: SimplexResult
    """
    c = np.asarray(c, dtype=float).reshape(-1)
    n = c.size
    A = np.asarray(A, dtype=float).reshape(-1, n).copy()
    b = np.asarray(b, dtype=float).reshape(-1).copy()
    sense = list(sense)
    m = A.shape[0]
    if b.size != m or len(sense) != m:
        raise DomainError("LP shape mismatch: A is %dx%d, b has %d, sense has %d"
                          % (m, n, b.size, len(sense)))
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise DomainError("LP data must be finite")
    cap = max_iter if max_iter is not None else 10 * (n + m)

    if m == 0:
        if np.any(c < -tol):
            return SimplexResult(None, -np.inf, UNBOUNDED, 0)
        return SimplexResult(np.zeros(n), 0.0, OPTIMAL, 0)

    flip = {"<=": ">=", ">=": "<=", "=": "="}
    for i in range(m):
        if sense[i] not in flip:
            raise DomainError("sense entries must be <=, >= or =, got %r" % (sense[i],))
        if b[i] < 0:
            A[i] *= -1.0
            b[i] *= -1.0
            sense[i] = flip[sense[i]]

    extra = []
    basis = np.zeros(m, dtype=int)
    artificial = []
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        if sense[i] == "<=":
            extra.append(e)
            basis[i] = n + len(extra) - 1
        else:
            if sense[i] == ">=":
                extra.append(-e)
            extra.append(e)
            basis[i] = n + len(extra) - 1
            artificial.append(basis[i])
    S = np.column_stack(extra)
    ncols = n + S.shape[1]
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :n] = A
    T[:m, n:ncols] = S
    T[:m, -1] = b
    tab = _Tableau(T, basis, tol, cap, (m, n))

    if artificial:
        phase1 = np.zeros(ncols)
        phase1[artificial] = 1.0
        tab.price_out(phase1)
        tab.run(ncols, 1)
        residual = -tab.T[-1, -1]
        if residual > tol * max(1.0, float(np.max(b))):
            debug("simplex: infeasible after %d pivots (residual %.3g)", tab.iterations, residual)
            return SimplexResult(None, np.inf, INFEASIBLE, tab.iterations)
        is_artificial = np.zeros(ncols, dtype=bool)
        is_artificial[artificial] = True
        keep_rows = []
        for i in range(m):
            if is_artificial[tab.basis[i]]:
                candidates = np.flatnonzero((np.abs(tab.T[i, :ncols]) > tol) & ~is_artificial)
                if candidates.size == 0:
                    # redundant row
                    continue
                tab.pivot(i, int(candidates[0]), 1)
            keep_rows.append(i)
        keep_cols = np.flatnonzero(~is_artificial)
        remap = -np.ones(ncols, dtype=int)
        remap[keep_cols] = np.arange(keep_cols.size)
        rows = keep_rows + [m]
        tab.T = np.hstack([tab.T[np.ix_(rows, keep_cols)], tab.T[rows, -1:]])
        tab.basis = remap[tab.basis[keep_rows]]
        ncols = keep_cols.size

    phase2 = np.zeros(ncols)
    phase2[:n] = c
    tab.price_out(phase2)
    if not tab.run(ncols, 2):
        debug("simplex: unbounded after %d pivots", tab.iterations)
        return SimplexResult(None, -np.inf, UNBOUNDED, tab.iterations)

    x = tab.solution(n)
    debug("simplex: optimal after %d pivots", tab.iterations)
    return SimplexResult(x, float(c @ x), OPTIMAL, tab.iterations)
