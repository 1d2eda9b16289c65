# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Achievable rate region of a scheme, as constraints that become linear in the codeword powers
once the target rates are fixed.

Each codeword u has one power variable P_u, spent by every relay in tx(u). Receiver z jointly
decodes D_z; for every error subset T of D_z the rates carried by T must satisfy

    sum_{u in T} share_u R_msg(u) <= C(S_T / (1 + I_z))

with S_T = sum_{u in T} g_zu P_u, I_z = sum_{u not in D_z} g_zu P_u and g_zu the coherent
combining gain of tx(u) at z.
"""
import functools
import itertools
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from relaycoop.cgras import Cgras
from relaycoop.channel import RECEIVERS, AccessChannel, RateTarget, cap_inv, cap_scalar


@dataclass(frozen=True)
class RateConstraint:
    receiver: int
    subset: FrozenSet[int]
    rate_terms: Tuple[Tuple[int, float], ...]
    signal: Tuple[Tuple[int, float], ...]
    interference: Tuple[Tuple[int, float], ...]

    @property
    def label(self):
        return "RX%d:{%s}" % (self.receiver, ",".join(str(u + 1) for u in sorted(self.subset)))


@dataclass(frozen=True)
class LinearSystem:
    """
    G P >= h over the codeword powers, one row per rate constraint.
    """
    G: np.ndarray
    h: np.ndarray
    labels: Tuple[str, ...]


@dataclass(frozen=True)
class _Layout:
    receivers: np.ndarray
    member: np.ndarray
    interferer: np.ndarray
    subsets: Tuple[FrozenSet[int], ...]
    messages: np.ndarray


@dataclass(eq=False)
class ConstraintSet:
    scheme: Cgras
    constraints: List[RateConstraint]
    signal: np.ndarray
    interference: np.ndarray
    member: np.ndarray
    power_limits: Optional[Tuple[float, float]] = None

    @property
    def n_vars(self):
        return self.signal.shape[1]

    @property
    def labels(self):
        return tuple(rc.label for rc in self.constraints)

    def rate_sums(self, target: RateTarget, shares: Optional[Sequence[float]] = None):
        """
        Left-hand sides: the rate carried by every subset T.
        """
        shares = self.scheme.shares() if shares is None else shares
        rates = np.array([target.rate(cw.message) for cw in self.scheme.codewords])
        return self.member @ (np.asarray(shares, dtype=float) * rates)

    def rhs(self, powers):
        """
        C(S_T / (1 + I_z)) for every constraint at the given codeword powers.
        """
        p = np.asarray(powers, dtype=float)
        return cap_scalar((self.signal @ p) / (1.0 + self.interference @ p))

    def satisfied(self, powers, target: RateTarget, shares=None, tol=1e-9):
        return bool(np.all(self.rate_sums(target, shares) <= self.rhs(powers) + tol))

    def to_text(self):
        lines = []
        for k, rc in enumerate(self.constraints):
            lines.append("%-12s rate=[%s] signal=[%s] interference=[%s]" % (
                rc.label,
                " ".join("%g" % v for v in self.member[k]),
                " ".join("%.6g" % v for v in self.signal[k]),
                " ".join("%.6g" % v for v in self.interference[k])))
        return "\n".join(lines)


def decode_sets(c: Cgras) -> Tuple[FrozenSet[int], ...]:
    """
    D_z for every receiver: positions of the codewords receiver z decodes.
    """
    return tuple(c.decode_set(z) for z in RECEIVERS)


def error_subsets(D, edges) -> List[FrozenSet[int]]:
    """
    Nonempty subsets T of D that are closed upwards: if a base is in error, every top on it
    that is decoded too is in error as well.

    :param D: decoded codeword positions
    :param edges: superposition edges (base, top)
    :return: subsets ordered by size, then by position
    """
    D = sorted(D)
    tops = {u: [t for b, t in edges if b == u and t in D] for u in D}
    subsets = []
    for k in range(1, len(D) + 1):
        for subset in itertools.combinations(D, k):
            T = frozenset(subset)
            if all(t in T for u in T for t in tops[u]):
                subsets.append(T)
    return subsets


def _structure(c: Cgras):
    return tuple((cw.message, cw.tx, cw.rx) for cw in c.codewords), c.edges


@functools.lru_cache(maxsize=65536)
def _layout(structure) -> _Layout:
    codewords, edges = structure
    n = len(codewords)
    receivers, members, interferers, subsets = [], [], [], []
    for z in RECEIVERS:
        D = frozenset(u for u, (_, _, rx) in enumerate(codewords) if z in rx)
        outside = np.array([0.0 if u in D else 1.0 for u in range(n)])
        for T in error_subsets(D, edges):
            receivers.append(z)
            members.append([1.0 if u in T else 0.0 for u in range(n)])
            interferers.append(outside)
            subsets.append(T)
    return _Layout(np.array(receivers, dtype=int),
                   np.array(members, dtype=float).reshape(-1, n),
                   np.array(interferers, dtype=float).reshape(-1, n),
                   tuple(subsets),
                   np.array([m for m, _, _ in codewords], dtype=int))


def gen_constraints(c: Cgras, ch: AccessChannel) -> ConstraintSet:
    layout = _layout(_structure(c))
    gains = ch.combining_gains([cw.tx for cw in c.codewords])
    per_row = gains[layout.receivers - 1, :]
    signal = layout.member * per_row
    interference = layout.interferer * per_row
    constraints = []
    for k, (z, T) in enumerate(zip(layout.receivers, layout.subsets)):
        constraints.append(RateConstraint(
            receiver=int(z),
            subset=T,
            rate_terms=tuple((u, c.codewords[u].share) for u in sorted(T)),
            signal=tuple((u, float(signal[k, u])) for u in sorted(T)),
            interference=tuple((u, float(interference[k, u]))
                               for u in np.flatnonzero(layout.interferer[k]))))
    return ConstraintSet(c, constraints, signal, interference, layout.member, ch.power_limits)


def linearize(cs: ConstraintSet, target: RateTarget, shares=None) -> LinearSystem:
    """
    (S_T - C^-1(r_T) I_z) P >= C^-1(r_T) for every constraint, r_T the rate carried by T.
    """
    needed = cap_inv(np.maximum(cs.rate_sums(target, shares), 0.0))
    needed = np.atleast_1d(needed)
    G = cs.signal - needed[:, None] * cs.interference
    return LinearSystem(G, needed, cs.labels)


def access_cost(c: Cgras, mu=(1.0, 1.0)):
    """
    Objective weight of every codeword power: sum of mu_j over its transmitting relays.
    """
    return np.array([sum(mu[j - 1] for j in cw.tx) for cw in c.codewords], dtype=float)
