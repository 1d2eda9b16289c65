# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Scheme competition over a grid of symmetric channels (a, b).

Every cell optimizes the enumerated schemes and keeps the minimum-energy one. Schemes within
the tolerance of the best are candidates; the winner among them is the one most of its
neighbours picked, so the phase map shows connected regions instead of noise.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from relaycoop.cgras import (Cgras, EnumerationOptions, canonicalize, enumerate_all, normalized,
                            serialize)
from relaycoop.channel import (AccessChannel, RateTarget, RelayChannel, mirror_invariant,
                              symmetric_channel, unit_relay_channel)
from relaycoop.errors import DomainError, RelayLinkError, SolverError
from relaycoop.log import info, warn
from relaycoop.optimizer import (DEFAULT_SPLIT_STEP, EnergyWeights, PowerSolution, bs_power,
                                 optimize_scheme, relaxed_access_power)

NOSPLIT = "nosplit"
SPLIT = "split"
DEFAULT_TOLERANCE = 0.05

# row-major neighbours already decided when (i, j) is visited, then the full 8-neighbourhood
_EARLIER = ((-1, -1), (-1, 0), (-1, 1), (0, -1))
_AROUND = _EARLIER + ((0, 1), (1, -1), (1, 0), (1, 1))


@dataclass(frozen=True)
class Grid:
    a_start: float
    a_stop: float
    a_steps: int
    b_start: float
    b_stop: float
    b_steps: int

    @classmethod
    def square(cls, start, stop, steps):
        return cls(start, stop, steps, start, stop, steps)

    @staticmethod
    def _axis(start, stop, steps):
        if steps < 0:
            raise DomainError("grid steps must be nonnegative, got %d" % steps)
        return np.round(np.linspace(start, stop, steps), 10)

    @property
    def a_values(self):
        return self._axis(self.a_start, self.a_stop, self.a_steps)

    @property
    def b_values(self):
        return self._axis(self.b_start, self.b_stop, self.b_steps)

    @property
    def shape(self):
        return self.a_steps, self.b_steps

    def to_dict(self):
        return {"a": [self.a_start, self.a_stop, self.a_steps],
                "b": [self.b_start, self.b_stop, self.b_steps]}


@dataclass(frozen=True)
class SweepOptions:
    split_step: float = DEFAULT_SPLIT_STEP
    max_splits: int = 2
    max_split_messages: int = 1
    tolerance: float = DEFAULT_TOLERANCE
    samples: int = 2000
    seed: int = 1
    bisect_tol: float = 1e-3
    jobs: int = 1
    weights: EnergyWeights = field(default_factory=EnergyWeights)

    def enumeration(self, split):
        return EnumerationOptions(allow_splitting=split, max_splits=self.max_splits,
                                  max_split_messages=self.max_split_messages,
                                  prune_dominated=True)

    def split_enumeration(self):
        return self.enumeration(True)


@dataclass()
class Competition:
    """
    Outcome of optimizing a scheme population at one channel and target.
    """
    energies: Dict[str, float] = field(default_factory=dict)
    solutions: Dict[str, PowerSolution] = field(default_factory=dict)
    schemes: Dict[str, Cgras] = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)

    def ranking(self):
        return sorted(self.energies.items(), key=lambda item: (item[1], item[0]))

    @property
    def best(self) -> Optional[Tuple[str, float]]:
        ranking = self.ranking()
        return ranking[0] if ranking else None

    @property
    def margin(self):
        ranking = self.ranking()
        if len(ranking) < 2:
            return math.inf
        best, second = ranking[0][1], ranking[1][1]
        return (second - best) / best if best > 0 else 0.0

    def candidates(self, tol):
        ranking = self.ranking()
        if not ranking:
            return []
        limit = (1.0 + tol) * ranking[0][1]
        return [(key, energy) for key, energy in ranking if energy <= limit]


def scheme_key(c: Cgras, symmetric: bool) -> str:
    return canonicalize(c) if symmetric else serialize(normalized(c))


def _cutoff(energies, tol):
    """
    Energy above which a scheme can be neither a candidate nor the runner-up.
    """
    ranked = sorted(energies.values())
    if not ranked:
        return math.inf
    second = ranked[1] if len(ranked) > 1 else math.inf
    return max((1.0 + tol) * ranked[0], second)


def compete(ch: AccessChannel, rc: RelayChannel, target: RateTarget, schemes: Sequence[Cgras],
            opts: SweepOptions, keep_solutions=False) -> Competition:
    """
    Optimizes schemes in order of BS power and stops once the BS power alone rules out the rest.
    The winner, the candidates and the runner-up are the same as with exhaustive evaluation.
    """
    symmetric = mirror_invariant(ch, rc)
    total = target.total
    result = Competition()
    relay_link = {}
    ordered = []
    for c in schemes:
        alloc = c.allocation
        if alloc not in relay_link:
            try:
                relay_link[alloc] = bs_power(alloc, target, rc)
            except RelayLinkError:
                relay_link[alloc] = math.inf
        ordered.append((relay_link[alloc], c))
    ordered.sort(key=lambda item: item[0])
    for p_bs, c in ordered:
        if not math.isfinite(p_bs):
            break
        cutoff = _cutoff(result.energies, opts.tolerance)
        if total > 0 and p_bs / total > cutoff:
            break
        key = scheme_key(c, symmetric)
        try:
            if c.split_messages and total > 0:
                relaxed = relaxed_access_power(c, ch, target, opts.weights)
                if (p_bs + relaxed) / total > cutoff:
                    continue
            solution = optimize_scheme(c, ch, rc, target, opts.weights, opts.split_step)
        except SolverError as e:
            warn("%s at %s: %s", key, ch.symmetric or "explicit channel", e)
            result.diagnostics.append("%s: %s" % (key, str(e).splitlines()[0]))
            continue
        if not solution.feasible:
            continue
        if key not in result.energies or solution.energy < result.energies[key]:
            result.energies[key] = solution.energy
            result.schemes[key] = c
            if keep_solutions:
                result.solutions[key] = solution
    return result


def population(ch: AccessChannel, enumeration: EnumerationOptions,
               rc: Optional[RelayChannel] = None) -> List[Cgras]:
    return enumerate_all(enumeration, symmetric=mirror_invariant(ch, rc))


def best_energy(ch, rc, target, opts: SweepOptions, enumeration: EnumerationOptions) -> float:
    """
    Minimum energy over the enumerated population; inf when nothing is feasible.
    """
    outcome = compete(ch, rc, target, population(ch, enumeration, rc), opts)
    best = outcome.best
    return best[1] if best else math.inf


@dataclass(frozen=True)
class Cell:
    a: float
    b: float
    key: Optional[str]
    energy: float
    best_energy: float
    margin: float
    candidates: Tuple[Tuple[str, float], ...] = ()
    diagnostics: Tuple[str, ...] = ()

    @property
    def feasible(self):
        return self.key is not None


@dataclass()
class PhaseMap:
    grid: Grid
    rate: float
    mode: str
    cells: List[List[Cell]]
    schemes: Dict[str, Cgras] = field(default_factory=dict)

    def __iter__(self):
        for row in self.cells:
            yield from row

    def winners(self):
        return [[cell.key for cell in row] for row in self.cells]

    def energies(self):
        """
        Power surface: minimum energy per cell, inf where nothing is feasible.
        """
        return np.array([[cell.best_energy for cell in row] for row in self.cells],
                        dtype=float).reshape(self.grid.shape)

    def legend(self) -> Dict[str, int]:
        """
        Winning keys numbered in row-major order of first appearance.
        """
        ids = {}
        for cell in self:
            if cell.key is not None and cell.key not in ids:
                ids[cell.key] = len(ids) + 1
        return ids


def tie_break(candidates: Sequence[Tuple[str, float]], neighbor_winners: Sequence[Optional[str]],
              tol=DEFAULT_TOLERANCE) -> Optional[str]:
    """
    Picks among the schemes within (1 + tol) of the best energy the one most neighbours won;
    ties go to the smallest key.

    :param candidates: (key, energy) pairs
    :param neighbor_winners: winners of the neighbouring cells, None where undecided
    :param tol: relative energy tolerance
    :return: winning key, None without candidates
    """
    if not candidates:
        return None
    best = min(energy for _, energy in candidates)
    keys = sorted(key for key, energy in candidates if energy <= (1.0 + tol) * best)
    votes = {key: 0 for key in keys}
    for winner in neighbor_winners:
        if winner in votes:
            votes[winner] += 1
    return min(keys, key=lambda key: (-votes[key], key))


def _neighbors(winners, i, j, offsets):
    rows, cols = len(winners), len(winners[0]) if winners else 0
    return [winners[i + di][j + dj] for di, dj in offsets
            if 0 <= i + di < rows and 0 <= j + dj < cols]


def resolve_ties(cells: List[List[Cell]], tol=DEFAULT_TOLERANCE) -> List[List[Cell]]:
    """
    Two row-major passes: the first sees the neighbours decided before each cell, the second
    sees all eight neighbours from the first pass.
    """
    first = [[None] * len(row) for row in cells]
    for i, row in enumerate(cells):
        for j, cell in enumerate(row):
            first[i][j] = tie_break(cell.candidates, _neighbors(first, i, j, _EARLIER), tol)
    resolved = []
    for i, row in enumerate(cells):
        out = []
        for j, cell in enumerate(row):
            key = tie_break(cell.candidates, _neighbors(first, i, j, _AROUND), tol)
            energy = dict(cell.candidates).get(key, math.inf)
            out.append(Cell(cell.a, cell.b, key, energy, cell.best_energy, cell.margin,
                            cell.candidates, cell.diagnostics))
        resolved.append(out)
    return resolved


def _sweep_row(a, b_values, target, schemes, opts):
    rc = unit_relay_channel()
    row = []
    for b in b_values:
        outcome = compete(symmetric_channel(a, b), rc, target, schemes, opts)
        best = outcome.best
        row.append(Cell(float(a), float(b), None, math.inf,
                        best[1] if best else math.inf,
                        outcome.margin if best else math.inf,
                        tuple(outcome.candidates(opts.tolerance)),
                        tuple(outcome.diagnostics)))
    return row, dict(_representatives(row, schemes))


def _representatives(row, schemes):
    """
    Representatives of every candidate key of a row.
    """
    wanted = {key for cell in row for key, _ in cell.candidates}
    for c in schemes:
        if not wanted:
            return
        key = canonicalize(c)
        if key in wanted:
            wanted.discard(key)
            yield key, c


def run_sweep(grid: Grid, rate, opts: Optional[SweepOptions] = None, split=False) -> PhaseMap:
    """
    Phase map and power surface at symmetric rate `rate` over the (a, b) grid.

    :param grid: channel grid, a along rows and b along columns
    :param rate: symmetric target rate
    :param opts: sweep options
    :param split: allow rate splitting
    :return: PhaseMap
    """
    opts = opts or SweepOptions()
    if not rate > 0:
        raise DomainError("sweep rate must be positive, got %r" % (rate,))
    mode = SPLIT if split else NOSPLIT
    target = RateTarget.symmetric(rate)
    a_values, b_values = grid.a_values, grid.b_values
    if len(a_values) == 0 or len(b_values) == 0:
        return PhaseMap(grid, rate, mode, [])
    schemes = enumerate_all(opts.enumeration(split), symmetric=True)
    info("sweep %s R=%g: %dx%d cells, %d schemes", mode, rate, len(a_values), len(b_values),
         len(schemes))
    rows = Parallel(n_jobs=opts.jobs)(
        delayed(_sweep_row)(a, b_values, target, schemes, opts) for a in a_values)
    cells = []
    representatives = {}
    for i, (row, reps) in enumerate(rows):
        cells.append(row)
        representatives.update(reps)
        info("sweep %s R=%g: row %d/%d done (a=%g)", mode, rate, i + 1, len(rows), a_values[i])
    cells = resolve_ties(cells, opts.tolerance)
    return PhaseMap(grid, rate, mode, cells, representatives)


@dataclass(frozen=True)
class DifferenceCell:
    a: float
    b: float
    nosplit: float
    split: float

    @property
    def gain(self):
        if math.isinf(self.nosplit) and math.isinf(self.split):
            return 0.0
        return self.nosplit - self.split


def difference_surface(nosplit: PhaseMap, split: PhaseMap) -> List[DifferenceCell]:
    """
    Energy saved by rate splitting, cell by cell.
    """
    if nosplit.grid != split.grid or nosplit.rate != split.rate:
        raise DomainError("difference needs two sweeps over the same grid and rate")
    return [DifferenceCell(u.a, u.b, u.best_energy, v.best_energy)
            for u, v in zip(nosplit, split)]
