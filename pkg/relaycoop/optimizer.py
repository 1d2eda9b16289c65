# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Minimum energy of a scheme: BS power on the relay link in closed form, relay powers on the access
link by linear programming, and a grid search over rate-split shares.
"""
import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from relaycoop import simplex
from relaycoop.cgras import Cgras, MessageAllocation
from relaycoop.channel import RELAYS, AccessChannel, RateTarget, RelayChannel, cap_inv
from relaycoop.errors import DomainError, RelayLinkError, ZeroRateError
from relaycoop.log import debug
from relaycoop.region import ConstraintSet, access_cost, gen_constraints, linearize

DEFAULT_SPLIT_STEP = 0.05
BINDING_TOL = 1e-7


@dataclass(frozen=True)
class EnergyWeights:
    mu1: float = 1.0
    mu2: float = 1.0

    def __post_init__(self):
        for name, value in (("mu1", self.mu1), ("mu2", self.mu2)):
            if not math.isfinite(value) or value < 0:
                raise DomainError("%s must be finite and nonnegative, got %r" % (name, value))

    @property
    def mu(self):
        return self.mu1, self.mu2


@dataclass()
class PowerSolution:
    label: str
    feasible: bool
    powers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    shares: Tuple[float, ...] = ()
    relay_powers: Tuple[float, float] = (0.0, 0.0)
    access_power: float = math.inf
    bs_power: float = 0.0
    energy: float = math.inf
    binding: Tuple[str, ...] = ()

    @classmethod
    def infeasible(cls, label, shares=()):
        return cls(label=label, feasible=False, shares=tuple(shares))

    def to_dict(self):
        return {
            "scheme": self.label,
            "feasible": self.feasible,
            "powers": [float(p) for p in self.powers],
            "shares": [float(s) for s in self.shares],
            "relay_powers": [float(p) for p in self.relay_powers],
            "bs_power": float(self.bs_power),
            "energy": float(self.energy) if self.feasible else None,
            "binding": list(self.binding),
        }


def _relay_powers(c: Cgras, powers):
    return tuple(float(sum(p for cw, p in zip(c.codewords, powers) if j in cw.tx))
                 for j in RELAYS)


def _limit_rows(cs: ConstraintSet):
    """
    Power sent by relay j, one row per relay with a power limit.
    """
    if cs.power_limits is None:
        return np.zeros((0, cs.n_vars)), np.zeros(0)
    rows = [[1.0 if j in cw.tx else 0.0 for cw in cs.scheme.codewords] for j in RELAYS]
    return np.array(rows), np.array(cs.power_limits, dtype=float)


def _solve_access(cs: ConstraintSet, target, shares, weights, rows=None):
    system = linearize(cs, target, shares)
    G, h = system.G, system.h
    if rows is not None:
        G, h = G[rows], h[rows]
    L, limits = _limit_rows(cs)
    cost = access_cost(cs.scheme, weights.mu)
    result = simplex.solve(cost, np.vstack([G, L]), np.concatenate([h, limits]),
                           [">="] * len(h) + ["<="] * len(limits))
    debug("access LP %s: %s in %d pivots", cs.scheme, result.status, result.iterations)
    return system, result


def min_access_power(cs: ConstraintSet, target: RateTarget, shares=None,
                     weights: Optional[EnergyWeights] = None) -> PowerSolution:
    """
    Cheapest codeword powers meeting every rate constraint of the scheme.

    :param cs: constraint set from gen_constraints()
    :param target: rates (R1, R2, R3)
    :param shares: split shares per codeword, default the scheme's own
    :param weights: relay weights of the objective
    :return: PowerSolution without the relay-link part
    """
    weights = weights or EnergyWeights()
    shares = tuple(cs.scheme.shares() if shares is None else shares)
    label = str(cs.scheme)
    system, result = _solve_access(cs, target, shares, weights)
    if not result.optimal:
        return PowerSolution.infeasible(label, shares)
    powers = result.x
    slack = system.G @ powers - system.h
    binding = tuple(lbl for lbl, s, h in zip(system.labels, slack, system.h)
                    if s <= BINDING_TOL * (1.0 + abs(h)))
    return PowerSolution(label=label, feasible=True, powers=powers, shares=shares,
                         relay_powers=_relay_powers(cs.scheme, powers),
                         access_power=result.objective, binding=binding)


def bs_power(alloc: MessageAllocation, target: RateTarget, rc: RelayChannel) -> float:
    """
    BS power on the orthogonal relay link: relay j must decode every message it knows.
    """
    total = 0.0
    for j in RELAYS:
        rate = sum(target.rate(z) for z in alloc.known_at(j))
        if rate <= 0:
            continue
        d = rc.gain(j)
        if d == 0:
            raise RelayLinkError(j, rate)
        total += cap_inv(rate) / d ** 2
    return total


def total_energy(ps: PowerSolution, target: RateTarget,
                 w: Optional[EnergyWeights] = None) -> float:
    """
    (P_BS + sum_j mu_j P_RN_j) / (R1 + R2 + R3).
    """
    w = w or EnergyWeights()
    if target.total <= 0:
        raise ZeroRateError("energy per bit is undefined for a zero sum rate")
    power = ps.bs_power + sum(mu * p for mu, p in zip(w.mu, ps.relay_powers))
    return power / target.total


def _compositions(total, parts):
    """
    Nonnegative integer vectors of length parts summing to total, first part largest first.
    """
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def share_grid(c: Cgras, split_step=DEFAULT_SPLIT_STEP):
    """
    Every share vector of the search grid; shares move in steps of 1/round(1/split_step).
    """
    if not 0 < split_step <= 0.5:
        raise DomainError("split step must be in (0, 0.5], got %r" % (split_step,))
    steps = int(round(1.0 / split_step))
    split = c.split_messages
    per_message = [list(_compositions(steps, len(c.parts(z)))) for z in split]
    base = list(c.shares())
    for combo in itertools.product(*per_message):
        shares = list(base)
        for z, counts in zip(split, combo):
            for u, k in zip(c.parts(z), counts):
                shares[u] = k / steps
        yield tuple(shares)


def min_power_with_splits(c: Cgras, ch: AccessChannel, target: RateTarget,
                          split_step=DEFAULT_SPLIT_STEP,
                          weights: Optional[EnergyWeights] = None) -> PowerSolution:
    """
    Best access solution over the share grid. Ties keep the first grid point, which puts the
    whole message on its first part.
    """
    weights = weights or EnergyWeights()
    cs = gen_constraints(c, ch)
    if not c.split_messages:
        return min_access_power(cs, target, weights=weights)
    best = None
    for shares in share_grid(c, split_step):
        candidate = min_access_power(cs, target, shares, weights)
        if candidate.feasible and (best is None or candidate.access_power < best.access_power):
            best = candidate
    return best if best is not None else PowerSolution.infeasible(str(c))


def relaxed_access_power(c: Cgras, ch: AccessChannel, target: RateTarget,
                         weights: Optional[EnergyWeights] = None) -> float:
    """
    Lower bound on the access power of a split scheme valid for every share choice: only the
    constraints that hold all parts of a split message, or none of them, are kept.
    """
    weights = weights or EnergyWeights()
    cs = gen_constraints(c, ch)
    groups = [frozenset(c.parts(z)) for z in c.split_messages]
    rows = [k for k, rc in enumerate(cs.constraints)
            if all(g <= rc.subset or not (g & rc.subset) for g in groups)]
    _, result = _solve_access(cs, target, None, weights, rows)
    return result.objective if result.optimal else math.inf


def optimize_scheme(c: Cgras, ch: AccessChannel, rc: RelayChannel, target: RateTarget,
                    w: Optional[EnergyWeights] = None,
                    split_step=DEFAULT_SPLIT_STEP) -> PowerSolution:
    """
    Total energy of a scheme: relay link plus access link, per unit of sum rate.
    """
    w = w or EnergyWeights()
    try:
        p_bs = bs_power(c.allocation, target, rc)
    except RelayLinkError as e:
        debug("%s: %s", c, e)
        return PowerSolution.infeasible(str(c), c.shares())
    access = min_power_with_splits(c, ch, target, split_step, w)
    if not access.feasible:
        return access
    solution = replace(access, bs_power=p_bs)
    solution.energy = 0.0 if target.total == 0 else total_energy(solution, target, w)
    return solution
