# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Relay-link capacity check, access-link outer bound and the resulting lower bound on the energy
any scheme needs.

The outer bound works on a 2x3 amplitude matrix A: A[j-1, z-1] is the amplitude relay j spends
on message z, zero unless relay j knows z. With M = H A, receiver subset S can carry at most
cap_mimo(M[S, S]) bits in total.
"""
import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import minimize

from relaycoop.cgras import MessageAllocation, enumerate_allocations
from relaycoop.channel import (RELAYS, AccessChannel, RateTarget, RelayChannel, cap_mimo_batch,
                               cap_scalar)
from relaycoop.errors import BoundSearchError, DomainError, RelayLinkError
from relaycoop.log import debug, info
from relaycoop.optimizer import EnergyWeights, bs_power

DEFAULT_SAMPLES = 2000
DEFAULT_SEED = 1
DEFAULT_BISECT_TOL = 1e-3
MAX_BISECTIONS = 200
MAX_DOUBLINGS = 64
POWER_FLOOR = 1e-9

RECEIVER_SUBSETS = tuple(s for k in range(1, 4) for s in itertools.combinations(range(3), k))


@dataclass(frozen=True)
class LowerBound:
    energy: float
    allocation: Optional[str]
    relay_power: float
    bs_power: float
    samples: int
    seed: int
    polished: bool

    def to_dict(self):
        return {
            "energy": self.energy,
            "allocation": self.allocation,
            "relay_power": self.relay_power,
            "bs_power": self.bs_power,
            "samples": self.samples,
            "seed": self.seed,
            "polished": self.polished,
        }


def cognition_mask(alloc: MessageAllocation):
    """
    2x3 mask of the amplitudes relay j may use: 1 where relay j knows message z.
    """
    mask = np.zeros((2, 3))
    for j in RELAYS:
        for z in alloc.known_at(j):
            mask[j - 1, z - 1] = 1.0
    return mask


def row_powers(A):
    return np.sum(np.square(A), axis=-1)


def outer_bound_margins(A, H, target: RateTarget):
    """
    Slack of the seven outer-bound inequalities, one per nonempty receiver subset.

    :param A: amplitude matrix (2x3) or a stack of them (k x 2 x 3)
    :param H: 3x2 access gains
    :param target: rates
    :return: 7 slacks, or k x 7 for a stack
    """
    A = np.asarray(A, dtype=float)
    single = A.ndim == 2
    stack = A[None] if single else A
    M = np.matmul(np.asarray(H, dtype=float), stack)
    rates = np.array(target.as_tuple())
    margins = np.empty((stack.shape[0], len(RECEIVER_SUBSETS)))
    for k, S in enumerate(RECEIVER_SUBSETS):
        idx = np.array(S)
        margins[:, k] = cap_mimo_batch(M[:, idx][:, :, idx]) - rates[idx].sum()
    return margins[0] if single else margins


def outer_bound_holds(A, H, target: RateTarget, tol=1e-12) -> bool:
    return bool(np.all(outer_bound_margins(A, H, target) >= -tol))


def relay_rates_feasible(alloc: MessageAllocation, target: RateTarget, rc: RelayChannel,
                         split: Tuple[float, float], tol=1e-12) -> bool:
    """
    True when splitting the BS power as (P1, P2) lets both relays decode what they must.
    """
    for j, power in zip(RELAYS, split):
        rate = sum(target.rate(z) for z in alloc.known_at(j))
        if rate > cap_scalar(rc.gain(j) ** 2 * power) + tol:
            return False
    return True


class _OuterSearch:
    """
    Feasibility oracle for one allocation: is there an amplitude matrix of weighted relay power P
    inside the outer bound? Directions are drawn once, so the answer is monotone in P.
    """

    def __init__(self, alloc, H, target, mu, samples, seed, index):
        self.H = H
        self.target = target
        self.mu = np.asarray(mu, dtype=float)
        self.mask = cognition_mask(alloc)
        self.free = self.mask.astype(bool)
        rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        draws = rng.standard_normal((samples, 2, 3)) * self.mask
        self.directions = draws / np.sqrt(self._cost(draws))[:, None, None]
        self.polished = False

    def _cost(self, A):
        return np.maximum(row_powers(A) @ self.mu, 1e-300)

    def _polish_objective(self, x, power):
        A = np.zeros((2, 3))
        A[self.free] = x
        cost = float(self._cost(A))
        A *= math.sqrt(power / cost)
        return -float(np.min(outer_bound_margins(A, self.H, self.target)))

    def feasible(self, power):
        scaled = self.directions * math.sqrt(power)
        worst = np.min(outer_bound_margins(scaled, self.H, self.target), axis=1)
        best = int(np.argmax(worst))
        if worst[best] >= 0:
            return True
        result = minimize(self._polish_objective, scaled[best][self.free], args=(power,),
                          method="Nelder-Mead", options={"maxiter": 200, "xatol": 1e-7,
                                                         "fatol": 1e-10})
        if result.fun <= 0:
            self.polished = True
            return True
        return False


def _allocation_bound(index, alloc, ch, rc, target, weights, samples, seed, bisect_tol, upper):
    try:
        p_bs = bs_power(alloc, target, rc)
    except RelayLinkError as e:
        return None, "%s: %s" % (alloc, e)
    search = _OuterSearch(alloc, ch.H, target, weights.mu, samples, seed, index)
    if upper is not None:
        hi = upper * target.total - p_bs
        if hi <= 0:
            return None, "%s: BS power alone exceeds the inner bound" % alloc
        if not search.feasible(hi):
            return None, "%s: no outer-bound point found at relay power %.6g" % (alloc, hi)
    else:
        hi = 1.0
        for _ in range(MAX_DOUBLINGS):
            if search.feasible(hi):
                break
            hi *= 2.0
        else:
            return None, "%s: outer bound unreachable up to relay power %.3g" % (alloc, hi)
    lo = 0.0
    for step in range(MAX_BISECTIONS):
        if hi - lo <= bisect_tol * max(hi, POWER_FLOOR) or hi <= POWER_FLOOR:
            break
        mid = 0.5 * (lo + hi)
        if search.feasible(mid):
            hi = mid
        else:
            lo = mid
        debug("bound %s step %d: [%.6g, %.6g]", alloc, step, lo, hi)
    else:
        raise BoundSearchError("bisection did not converge",
                               ["%s: interval [%.6g, %.6g] after %d steps"
                                % (alloc, lo, hi, MAX_BISECTIONS)])
    bound = LowerBound(energy=(p_bs + lo) / target.total, allocation=str(alloc),
                       relay_power=lo, bs_power=p_bs, samples=samples, seed=seed,
                       polished=search.polished)
    return bound, None


def energy_lower_bound(ch: AccessChannel, rc: RelayChannel, target: RateTarget,
                       samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, bisect_tol=DEFAULT_BISECT_TOL,
                       upper: Optional[float] = None, weights: Optional[EnergyWeights] = None,
                       jobs=1) -> LowerBound:
    """
    Lower bound on the energy per bit of any scheme reaching the target.

    For every allocation the least relay power admitting an outer-bound point is located by
    bisection; random amplitude directions, polished with Nelder-Mead, decide each step. The
    lower end of the final interval is reported.

    :param ch: access channel
    :param rc: relay channel
    :param target: rates
    :param samples: random directions per allocation
    :param seed: master seed; allocation k uses SeedSequence([seed, k])
    :param bisect_tol: relative width at which bisection stops
    :param upper: known achievable energy, used to bound the search from above
    :param weights: relay weights of the energy
    :param jobs: joblib workers over allocations
    :return: LowerBound
    """
    weights = weights or EnergyWeights()
    if min(weights.mu) <= 0:
        raise DomainError("lower bound needs positive relay weights, got %r" % (weights.mu,))
    if target.total == 0:
        return LowerBound(0.0, None, 0.0, 0.0, samples, seed, False)
    allocations = enumerate_allocations()
    results = Parallel(n_jobs=jobs)(
        delayed(_allocation_bound)(k, alloc, ch, rc, target, weights, samples, seed,
                                   bisect_tol, upper)
        for k, alloc in enumerate(allocations))
    bounds: List[LowerBound] = [b for b, _ in results if b is not None]
    diagnostics = [d for _, d in results if d is not None]
    for entry in diagnostics:
        debug("lower bound: %s", entry)
    best = min(bounds, key=lambda b: b.energy) if bounds else None
    if upper is not None and (best is None or upper < best.energy):
        best = LowerBound(upper, None, math.nan, math.nan, samples, seed, False)
    if best is None:
        raise BoundSearchError("no allocation reaches the outer bound", diagnostics)
    info("lower bound %.6g at R=%s (allocation %s)", best.energy, target.as_tuple(),
         best.allocation)
    return best
