# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#

# ------------------------------------------------------------------------------
# CHANNEL TESTS
#
# Capacity functions and the symmetric channel parameterization.
# ------------------------------------------------------------------------------

import math
from dataclasses import replace

import numpy as np
import pytest

from relaycoop.channel import (AccessChannel, RateTarget, RelayChannel, cap_inv, cap_mimo,
                               cap_mimo_batch, cap_scalar, mirror_invariant,
                               symmetric_channel)
from relaycoop.errors import DomainError
from relaycoop_base import RelayCoopBaseTest


class CapacityValuesTest(RelayCoopBaseTest):
    """ Tests known values of C(x), its inverse and the matrix capacity.
    """

    def runTest(self):
        self.assertEqual(cap_scalar(0), 0.0)
        self.assertClose(cap_scalar(3), 1.0, 1e-12)
        self.assertClose(cap_scalar(15), 2.0, 1e-12)
        self.assertEqual(cap_inv(0), 0.0)
        self.assertClose(cap_inv(1), 3.0, 1e-12)
        self.assertClose(cap_inv(0.5), 1.0, 1e-12)
        self.assertClose(cap_mimo([[math.sqrt(3)]]), 1.0, 1e-12)
        self.assertEqual(cap_mimo(np.zeros((3, 3))), 0.0)
        self.assertClose(cap_mimo(np.diag([math.sqrt(3), math.sqrt(15)])), 3.0, 1e-12)


class CapacityDomainTest(RelayCoopBaseTest):
    """ Tests that negative or non-finite inputs are rejected.
    """

    def runTest(self):
        for bad in (-1.0, math.nan, math.inf):
            with self.assertRaises(DomainError):
                cap_scalar(bad)
        with self.assertRaises(DomainError):
            cap_inv(-0.1)
        with self.assertRaises(DomainError):
            cap_mimo([[math.nan]])
        # DomainError is a ValueError for callers that do not know the hierarchy
        with self.assertRaises(ValueError):
            cap_scalar(-2)


class CapacityPropertiesTest(RelayCoopBaseTest):
    """ Tests inversion, concavity and block additivity on random inputs.
    """

    def runTest(self):
        rates = self.rng.uniform(0, 32, size=200)
        np.testing.assert_allclose(cap_scalar(cap_inv(rates)), rates, atol=1e-12, rtol=0)
        x = self.rng.uniform(0, 100, size=200)
        y = self.rng.uniform(0, 100, size=200)
        self.assertTrue(np.all(cap_scalar((x + y) / 2)
                               >= (cap_scalar(x) + cap_scalar(y)) / 2 - 1e-12))
        for _ in range(50):
            m1 = self.rng.normal(size=(2, 2))
            m2 = self.rng.normal(size=(1, 1))
            block = np.zeros((3, 3))
            block[:2, :2] = m1
            block[2:, 2:] = m2
            self.assertClose(cap_mimo(block), cap_mimo(m1) + cap_mimo(m2), 1e-12)
        stack = self.rng.normal(size=(20, 2, 2))
        np.testing.assert_allclose(cap_mimo_batch(stack), [cap_mimo(m) for m in stack],
                                   atol=1e-12)


class SymmetricChannelTest(RelayCoopBaseTest):
    """ Tests H = [[1, b], [a, a], [b, 1]] and the combining gains.
    """

    def runTest(self):
        np.testing.assert_array_equal(symmetric_channel(0, 0).H, [[1, 0], [0, 0], [0, 1]])
        np.testing.assert_array_equal(symmetric_channel(1, 1).H, np.ones((3, 2)))
        ch = symmetric_channel(0.5, 2)
        np.testing.assert_array_equal(ch.H, [[1, 2], [0.5, 0.5], [2, 1]])
        self.assertEqual(ch.symmetric, (0.5, 2.0))
        self.assertEqual(ch.combining_gain(2, {1, 2}), 1.0)
        self.assertEqual(ch.combining_gain(1, {1, 2}), 9.0)
        np.testing.assert_array_equal(ch.combining_gains([{1}, {2}, {1, 2}]),
                                      [[1, 4, 9], [0.25, 0.25, 1], [4, 1, 9]])
        np.testing.assert_array_equal(ch.mirrored().H, ch.H)
        with self.assertRaises(DomainError):
            symmetric_channel(-0.1, 1)


class ExplicitChannelTest(RelayCoopBaseTest):
    """ Tests shape checks, read-only gains and complex ingestion.
    """

    def runTest(self):
        with self.assertRaises(DomainError):
            AccessChannel(np.ones((2, 3)))
        with self.assertRaises(DomainError):
            AccessChannel(-np.ones((3, 2)))
        ch = AccessChannel(np.array([[1, 2], [3, 4], [5, 6]]))
        self.assertIsNone(ch.symmetric)
        with self.assertRaises(ValueError):
            ch.H[0, 0] = 7.0
        np.testing.assert_array_equal(ch.mirrored().H, [[6, 5], [4, 3], [2, 1]])
        complex_ch = AccessChannel(np.array([[3 + 4j, 0], [1j, 1], [0, 2]]))
        np.testing.assert_allclose(complex_ch.H, [[5, 0], [1, 1], [0, 2]])


class RatesTest(RelayCoopBaseTest):
    """ Tests rate targets and relay gains.
    """

    def runTest(self):
        target = RateTarget.symmetric(0.5)
        self.assertEqual(target.as_tuple(), (0.5, 0.5, 0.5))
        self.assertEqual(target.total, 1.5)
        self.assertEqual(RateTarget(1, 2, 3).rate(3), 3)
        with self.assertRaises(DomainError):
            RateTarget(-1, 0, 0)
        self.assertEqual(RelayChannel(2.0, 0.5).gain(2), 0.5)
        with self.assertRaises(DomainError):
            RelayChannel(-1.0, 1.0)


@pytest.mark.parametrize("a,b", [(0.0, 0.0), (0.3, 1.7), (2.0, 0.4)])
def test_symmetric_channel_is_mirror_invariant(a, b):
    ch = symmetric_channel(a, b)
    np.testing.assert_array_equal(ch.mirrored().H, ch.H)


class PowerLimitMirrorTest(RelayCoopBaseTest):
    """ Tests mirrored power limits and the mirror invariance check.
    """

    def runTest(self):
        ch = replace(symmetric_channel(0.4, 1.1), power_limits=(2, 3))
        self.assertEqual(ch.power_limits, (2.0, 3.0))
        self.assertEqual(ch.mirrored().power_limits, (3.0, 2.0))
        self.assertFalse(mirror_invariant(ch))
        self.assertTrue(mirror_invariant(replace(ch, power_limits=(2, 2))))

        self.assertTrue(mirror_invariant(symmetric_channel(0.4, 1.1)))
        self.assertTrue(mirror_invariant(symmetric_channel(0.4, 1.1), RelayChannel(0.7, 0.7)))
        self.assertFalse(mirror_invariant(symmetric_channel(0.4, 1.1), RelayChannel(1.0, 0.5)))
        self.assertFalse(mirror_invariant(AccessChannel(np.array([[1, 2], [3, 4], [5, 6]]))))

        with self.assertRaises(DomainError):
            replace(ch, power_limits=(1.0,))
        with self.assertRaises(DomainError):
            replace(ch, power_limits=(1.0, -1.0))
