# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Reference strategies without cooperation, compared against the best schemes and the lower bound.
"""
import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from relaycoop.bounds import energy_lower_bound
from relaycoop.cgras import Cgras, Codeword, MessageAllocation
from relaycoop.channel import MESSAGES, AccessChannel, RateTarget, RelayChannel
from relaycoop.log import info
from relaycoop.optimizer import optimize_scheme
from relaycoop.sweep import SweepOptions, best_energy


@dataclass(frozen=True)
class ComparisonRow:
    rate: float
    lower: float
    nosplit: float
    split: float
    relay_selection: float
    uncoordinated: float

    def as_tuple(self):
        return (self.rate, self.lower, self.nosplit, self.split, self.relay_selection,
                self.uncoordinated)


def _point_to_point(relays: Sequence[int]) -> Cgras:
    """
    Message z sent by relays[z-1] alone, decoded at receiver z only.
    """
    relay1 = frozenset(z for z, j in zip(MESSAGES, relays) if j == 1)
    relay2 = frozenset(z for z, j in zip(MESSAGES, relays) if j == 2)
    codewords = tuple(Codeword(z, {j}, {z}) for z, j in zip(MESSAGES, relays))
    return Cgras(MessageAllocation(relay1, relay2), codewords, frozenset())


def relay_selection_scheme(ch: AccessChannel) -> Cgras:
    """
    Each message goes through the relay with the stronger gain to its receiver, relay 1 on ties.
    """
    return _point_to_point([1 if ch.gain(z, 1) >= ch.gain(z, 2) else 2 for z in MESSAGES])


def uncoordinated_schemes() -> List[Cgras]:
    """
    All 8 schemes where every message is sent by one relay and decoded only where intended.
    """
    return [_point_to_point(relays) for relays in itertools.product((1, 2), repeat=3)]


def _best_energy(schemes, ch, rc, target, opts):
    energies = [optimize_scheme(c, ch, rc, target, opts.weights, opts.split_step).energy
                for c in schemes]
    return min(energies, default=math.inf)


def _bound_row(ch, rc, rate, opts: SweepOptions):
    target = RateTarget.symmetric(rate)
    nosplit = best_energy(ch, rc, target, opts, opts.enumeration(False))
    split = best_energy(ch, rc, target, opts, opts.split_enumeration())
    upper = min(nosplit, split)
    lower = energy_lower_bound(ch, rc, target, samples=opts.samples, seed=opts.seed,
                               bisect_tol=opts.bisect_tol,
                               upper=upper if math.isfinite(upper) else None,
                               weights=opts.weights, jobs=opts.jobs)
    return target, lower.energy, nosplit, split


def bound_trace(ch: AccessChannel, rc: RelayChannel, rates: Sequence[float],
                opts: Optional[SweepOptions] = None) -> List[ComparisonRow]:
    """
    Lower bound against the best schemes with and without splitting; baselines are left nan.
    """
    opts = opts or SweepOptions()
    rows = []
    for rate in rates:
        _, lower, nosplit, split = _bound_row(ch, rc, rate, opts)
        rows.append(ComparisonRow(rate, lower, nosplit, split, math.nan, math.nan))
        info("bound R=%g: lower %.6g, no split %.6g, split %.6g", rate, lower, nosplit, split)
    return rows


def compare_point(ch: AccessChannel, rc: RelayChannel, rates: Sequence[float],
                  opts: Optional[SweepOptions] = None) -> List[ComparisonRow]:
    """
    Energy of the lower bound, the best schemes with and without splitting and the two
    baselines, for every symmetric rate.

    :param opts: SweepOptions; samples, seed, bisect_tol, split_step and weights are used
    :return: one ComparisonRow per rate
    """
    opts = opts or SweepOptions()
    selection = [relay_selection_scheme(ch)]
    uncoordinated = uncoordinated_schemes()
    rows = []
    for rate in rates:
        target, lower, nosplit, split = _bound_row(ch, rc, rate, opts)
        row = ComparisonRow(rate, lower, nosplit, split,
                            _best_energy(selection, ch, rc, target, opts),
                            _best_energy(uncoordinated, ch, rc, target, opts))
        info("compare R=%g: %s", rate, row)
        rows.append(row)
    return rows
