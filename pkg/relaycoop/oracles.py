# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Closed-form regions of four reference schemes on the symmetric channel H = [[1,b],[a,a],[b,1]].

These are written out by hand, independently of region.gen_constraints(), and serve as ground
truth for it. Every bound names the receiver and the codeword positions of its error subset so
it can be matched against a generated RateConstraint.
"""
import math
from dataclasses import dataclass
from typing import Callable, FrozenSet, List, Tuple

from relaycoop.cgras import Cgras, Codeword, MessageAllocation
from relaycoop.channel import cap_inv, cap_scalar as C

THRESHOLD_CAP = 1e6


@dataclass(frozen=True)
class OracleBound:
    receiver: int
    subset: FrozenSet[int]
    label: str
    value: float
    redundant: bool = False


def _bound(receiver, positions, label, value, redundant=False):
    return OracleBound(receiver, frozenset(positions), label, value, redundant)


def scheme_A() -> Cgras:
    """
    W1 alone at relay 1; relay 2 layers W3 (for RX3) on W2 (for RX2 and RX3).
    """
    return Cgras(MessageAllocation({1}, {2, 3}),
                 (Codeword(1, {1}, {1}), Codeword(2, {2}, {2, 3}), Codeword(3, {2}, {3})),
                 {(1, 2)})


def scheme_B() -> Cgras:
    """
    RX2 decodes everything; W2 is layered on W3 at relay 2.
    """
    return Cgras(MessageAllocation({1}, {2, 3}),
                 (Codeword(1, {1}, {1, 2}), Codeword(2, {2}, {2}), Codeword(3, {2}, {2, 3})),
                 {(2, 1)})


def scheme_C() -> Cgras:
    """
    W2 sent by both relays to all receivers, W1 and W3 layered on it crosswise.
    """
    return Cgras(MessageAllocation({2, 3}, {1, 2}),
                 (Codeword(1, {2}, {1}), Codeword(2, {1, 2}, {1, 2, 3}), Codeword(3, {1}, {3})),
                 {(1, 0), (1, 2)})


def scheme_D() -> Cgras:
    """
    Scheme C where RX1 and RX3 decode every codeword.
    """
    return Cgras(MessageAllocation({2, 3}, {1, 2}),
                 (Codeword(1, {2}, {1, 3}), Codeword(2, {1, 2}, {1, 2, 3}),
                  Codeword(3, {1}, {1, 3})),
                 {(1, 0), (1, 2)})


def region_A(a, b, P11, P22, P23) -> List[OracleBound]:
    return [
        _bound(1, {0}, "R1", C(P11 / (1 + b ** 2 * (P22 + P23)))),
        _bound(2, {1}, "R2", C(a ** 2 * P22 / (1 + a ** 2 * P11 + a ** 2 * P23))),
        _bound(3, {2}, "R3", C(P23 / (1 + b ** 2 * P11))),
        _bound(3, {1, 2}, "R2+R3", C((P22 + P23) / (1 + b ** 2 * P11))),
    ]


def region_B(a, b, P11, P22, P23) -> List[OracleBound]:
    return [
        _bound(1, {0}, "R1", C(P11 / (1 + b ** 2 * (P22 + P23)))),
        _bound(2, {0}, "R1", C(a ** 2 * P11)),
        _bound(2, {1}, "R2", C(a ** 2 * P22)),
        _bound(2, {0, 1}, "R1+R2", C(a ** 2 * (P11 + P22))),
        _bound(2, {1, 2}, "R2+R3", C(a ** 2 * (P22 + P23))),
        _bound(2, {0, 1, 2}, "R1+R2+R3", C(a ** 2 * (P11 + P22 + P23))),
        # row 3 of H is [b, 1]: W1 arrives scaled by b, W2 from relay 2 at unit gain
        _bound(3, {2}, "R3", C(P23 / (1 + b ** 2 * P11 + P22))),
    ]


def region_C(a, b, P2, P13, P21) -> List[OracleBound]:
    return [
        _bound(1, {0}, "R1", C(b ** 2 * P21 / (1 + P13))),
        _bound(1, {0, 1}, "R1+R2", C((b ** 2 * P21 + (b + 1) ** 2 * P2) / (1 + P13))),
        _bound(2, {1}, "R2", C(4 * a ** 2 * P2 / (1 + a ** 2 * P13 + a ** 2 * P21))),
        _bound(3, {2}, "R3", C(b ** 2 * P13 / (1 + P21))),
        _bound(3, {1, 2}, "R2+R3", C((b ** 2 * P13 + (b + 1) ** 2 * P2) / (1 + P21))),
    ]


def region_D(a, b, P2, P13, P21) -> List[OracleBound]:
    common = (b + 1) ** 2 * P2
    return [
        _bound(1, {0}, "R1", C(b ** 2 * P21)),
        _bound(1, {2}, "R3", C(P13)),
        _bound(1, {0, 2}, "R1+R3", C(b ** 2 * P21 + P13)),
        _bound(1, {0, 1, 2}, "R1+R2+R3", C(b ** 2 * P21 + common + P13)),
        _bound(2, {1}, "R2", C(4 * a ** 2 * P2 / (1 + a ** 2 * P13 + a ** 2 * P21))),
        _bound(3, {2}, "R3", C(b ** 2 * P13)),
        _bound(3, {0}, "R1", C(P21)),
        _bound(3, {0, 2}, "R1+R3", C(b ** 2 * P13 + P21)),
        _bound(3, {0, 1, 2}, "R1+R2+R3", C(b ** 2 * P13 + common + P21)),
        # not upward closed under W2 -> W1, W2 -> W3; they only shrink the region
        _bound(1, {0, 1}, "R1+R2", C(b ** 2 * P21 + common), redundant=True),
        _bound(3, {1, 2}, "R2+R3", C(b ** 2 * P13 + common), redundant=True),
    ]


@dataclass(frozen=True)
class ClosedFormRegion:
    """
    A reference scheme with its hand-written region. order[k] is the codeword position of the
    k-th power argument of the evaluator.
    """
    scheme_id: str
    build: Callable[[], Cgras]
    evaluator: Callable[..., List[OracleBound]]
    order: Tuple[int, int, int]

    def scheme(self):
        return self.build()

    def evaluate(self, a, b, powers) -> List[OracleBound]:
        """
        :param powers: codeword powers indexed by codeword position
        """
        return self.evaluator(a, b, *(float(powers[u]) for u in self.order))


CLOSED_FORMS = {
    "A": ClosedFormRegion("A", scheme_A, region_A, (0, 1, 2)),
    "B": ClosedFormRegion("B", scheme_B, region_B, (0, 1, 2)),
    "C": ClosedFormRegion("C", scheme_C, region_C, (1, 2, 0)),
    "D": ClosedFormRegion("D", scheme_D, region_D, (1, 2, 0)),
}


def scheme_A_feasibility_threshold(rate) -> Tuple[float, float]:
    """
    Largest cross gain b for which scheme A can reach the symmetric rate, from the two necessary
    conditions b^4 <= 1 / (C^-1(2R) C^-1(R)) and b^2 <= 1 / (C^-1(R) (1 + C^-1(R))).

    :param rate: symmetric rate
    :return: (first bound, second bound), each capped at 1e6
    """
    single = cap_inv(rate)
    double = cap_inv(2 * rate)
    first = (double * single) ** -0.25 if double * single > 0 else math.inf
    second = (single * (1 + single)) ** -0.5 if single > 0 else math.inf
    return min(first, THRESHOLD_CAP), min(second, THRESHOLD_CAP)
