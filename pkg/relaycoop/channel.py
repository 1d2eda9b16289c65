# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Channel model of the two-relay, three-receiver downlink.

The relay link (BS to relays) is orthogonal with gains d11, d22. The access link (relays to
receivers) is a Gaussian interference channel with a 3x2 gain matrix H, row z = receiver,
column j = relay. Every noise term has unit variance and rates are in bits per channel use.
"""
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from relaycoop.errors import DomainError
from relaycoop.log import warn

RELAYS = (1, 2)
RECEIVERS = (1, 2, 3)
MESSAGES = RECEIVERS  # message z is intended for receiver z


def cap_scalar(snr):
    """
    Gaussian capacity C(x) = 1/2 log2(1 + x). Accepts scalars or numpy arrays.
    """
    value = np.asarray(snr, dtype=float)
    if not np.all(np.isfinite(value)) or np.any(value < 0):
        raise DomainError("SNR must be finite and nonnegative, got %r" % (snr,))
    result = 0.5 * np.log2(1.0 + value)
    return float(result) if result.ndim == 0 else result


def cap_inv(rate):
    """
    Inverse capacity C^-1(r) = 4^r - 1: the SNR needed to support rate r.
    """
    value = np.asarray(rate, dtype=float)
    if not np.all(np.isfinite(value)) or np.any(value < 0):
        raise DomainError("rate must be finite and nonnegative, got %r" % (rate,))
    result = np.power(4.0, value) - 1.0
    return float(result) if result.ndim == 0 else result


def cap_mimo(matrix):
    """
    1/2 log2 det(M M^T + I) for a real matrix M (a 1x1 matrix [m] gives cap_scalar(m^2)).
    """
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix entries must be finite")
    gram = m @ m.T + np.eye(m.shape[0])
    sign, logdet = np.linalg.slogdet(gram)
    # gram is positive definite, sign is always +1
    return max(0.0, 0.5 * logdet / math.log(2.0))


def cap_mimo_batch(matrices):
    """
    cap_mimo over a stack of matrices of shape (n, r, c); returns an array of n rates.
    """
    m = np.asarray(matrices, dtype=float)
    gram = np.matmul(m, np.swapaxes(m, -1, -2)) + np.eye(m.shape[-2])
    _, logdet = np.linalg.slogdet(gram)
    return np.maximum(0.0, 0.5 * logdet / math.log(2.0))


def _nonnegative(name, value):
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DomainError("%s must be finite and nonnegative, got %r" % (name, value))
    return value


@dataclass(eq=False)
class AccessChannel:
    H: np.ndarray
    power_limits: Optional[Tuple[float, float]] = None
    symmetric: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        H = np.asarray(self.H)
        if np.iscomplexobj(H):
            # coherent combining below assumes aligned phases
            warn("complex access gains given, using their magnitudes")
            H = np.abs(H)
        H = np.array(H, dtype=float)
        if H.shape != (3, 2):
            raise DomainError("access gain matrix must be 3x2, got %s" % (H.shape,))
        if not np.all(np.isfinite(H)) or np.any(H < 0):
            raise DomainError("access gains must be finite and nonnegative")
        H.setflags(write=False)
        self.H = H
        if self.power_limits is not None:
            if len(self.power_limits) != len(RELAYS):
                raise DomainError("one power limit per relay expected, got %r"
                                  % (self.power_limits,))
            self.power_limits = tuple(_nonnegative("power limit", p) for p in self.power_limits)

    def gain(self, z, j):
        return float(self.H[z - 1, j - 1])

    def combining_gain(self, z, tx):
        """
        Received power gain (sum_{j in tx} h_zj)^2 of a codeword sent with equal power by tx.
        """
        return sum(self.H[z - 1, j - 1] for j in tx) ** 2

    def combining_gains(self, tx_sets: Sequence[Iterable[int]]):
        """
        3 x n array of combining gains, one column per transmitter set.
        """
        mask = np.zeros((2, len(tx_sets)))
        for u, tx in enumerate(tx_sets):
            for j in tx:
                mask[j - 1, u] = 1.0
        return (self.H @ mask) ** 2

    def mirrored(self):
        """
        Channel seen after swapping relay 1 with relay 2 and receiver 1 with receiver 3.
        """
        limits = None if self.power_limits is None else self.power_limits[::-1]
        return AccessChannel(self.H[::-1, ::-1].copy(), power_limits=limits,
                             symmetric=self.symmetric)


@dataclass(frozen=True)
class RelayChannel:
    d11: float = 1.0
    d22: float = 1.0

    def __post_init__(self):
        _nonnegative("d11", self.d11)
        _nonnegative("d22", self.d22)

    def gain(self, j):
        return self.d11 if j == 1 else self.d22


@dataclass(frozen=True)
class RateTarget:
    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        for z, r in zip(MESSAGES, self.as_tuple()):
            _nonnegative("R%d" % z, r)

    @classmethod
    def symmetric(cls, rate):
        return cls(rate, rate, rate)

    def rate(self, z):
        return self.as_tuple()[z - 1]

    def as_tuple(self):
        return self.r1, self.r2, self.r3

    @property
    def total(self):
        return self.r1 + self.r2 + self.r3


def symmetric_channel(a, b):
    """
    H = [[1, b], [a, a], [b, 1]]; pair it with unit_relay_channel().
    """
    a = _nonnegative("a", a)
    b = _nonnegative("b", b)
    return AccessChannel(np.array([[1.0, b], [a, a], [b, 1.0]]), symmetric=(a, b))


def unit_relay_channel():
    return RelayChannel(1.0, 1.0)


def mirror_invariant(ch: AccessChannel, rc: Optional[RelayChannel] = None) -> bool:
    """
    True when swapping the relays and the outer receivers leaves both links unchanged, so that a
    scheme and its mirror image need the same energy.
    """
    m = ch.mirrored()
    if not np.array_equal(m.H, ch.H) or m.power_limits != ch.power_limits:
        return False
    return rc is None or rc.d11 == rc.d22
