# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#

# ------------------------------------------------------------------------------
# REGION TESTS
#
# Generated rate constraints against the hand-written regions of the reference
# schemes, and the linear form used by the optimizer.
# ------------------------------------------------------------------------------

import itertools

import numpy as np

from relaycoop.cgras import Cgras, Codeword, MessageAllocation
from relaycoop.channel import RateTarget, cap_inv
from relaycoop.oracles import CLOSED_FORMS
from relaycoop.region import (access_cost, decode_sets, error_subsets, gen_constraints,
                              linearize)
from relaycoop_base import RelayCoopBaseTest, print_inline

RANDOM_POINTS = 1000


class DecodeSetsTest(RelayCoopBaseTest):
    """ Tests decode sets of the reference schemes.
    """

    def runTest(self):
        self.assertEqual(decode_sets(self.scheme("A")),
                         (frozenset({0}), frozenset({1}), frozenset({1, 2})))
        D = decode_sets(self.scheme("D"))
        self.assertEqual(D[0], frozenset({0, 1, 2}))
        self.assertEqual(D[2], frozenset({0, 1, 2}))
        flat = Cgras(MessageAllocation({1}, {2, 3}),
                     (Codeword(1, {1}, {1}), Codeword(2, {2}, {2}), Codeword(3, {2}, {3})), set())
        self.assertEqual(decode_sets(flat), (frozenset({0}), frozenset({1}), frozenset({2})))


class ErrorSubsetsTest(RelayCoopBaseTest):
    """ Tests the upward-closed subsets and their lattice property.
    """

    def runTest(self):
        # W2 -> W3 at RX3
        self.assertEqual(error_subsets({1, 2}, {(1, 2)}), [frozenset({2}), frozenset({1, 2})])
        # W3 -> W2 at RX2, W1 free
        self.assertEqual(error_subsets({0, 1, 2}, {(2, 1)}),
                         [frozenset(s) for s in ({0}, {1}, {0, 1}, {1, 2}, {0, 1, 2})])
        self.assertEqual(error_subsets({4}, set()), [frozenset({4})])
        # tops outside D impose nothing
        self.assertEqual(error_subsets({0}, {(0, 1)}), [frozenset({0})])

        for edges in ({(1, 0), (1, 2)}, {(2, 1)}, {(0, 1), (1, 2)}, set()):
            family = set(error_subsets({0, 1, 2}, edges))
            for s, t in itertools.combinations(family, 2):
                self.assertIn(s | t, family)
                if s & t:
                    self.assertIn(s & t, family)


class OracleEquivalenceTest(RelayCoopBaseTest):
    """ Tests generated regions against the closed forms at random channels and powers.
    """

    def runTest(self):
        for scheme_id, oracle in sorted(CLOSED_FORMS.items()):
            print_inline("scheme %s... " % scheme_id)
            scheme = oracle.scheme()
            worst = 0.0
            for _ in range(RANDOM_POINTS):
                a, b = self.random_gains()
                powers = self.random_powers(3)
                cs = gen_constraints(scheme, self.channel(a, b))
                generated = {(rc.receiver, rc.subset): value
                             for rc, value in zip(cs.constraints, cs.rhs(powers))}
                expected = [bound for bound in oracle.evaluate(a, b, powers)
                            if not bound.redundant]
                self.assertEqual(len(generated), len(expected))
                for bound in expected:
                    worst = max(worst, abs(generated[(bound.receiver, bound.subset)]
                                           - bound.value))
            self.assertLess(worst, 1e-9, msg="scheme %s" % scheme_id)


class RedundantBoundTest(RelayCoopBaseTest):
    """ Tests that the two extra constraints of scheme D are not generated and only shrink
    the region.
    """

    def runTest(self):
        oracle = CLOSED_FORMS["D"]
        cs = gen_constraints(oracle.scheme(), self.channel(0.8, 0.6))
        keys = {(rc.receiver, rc.subset) for rc in cs.constraints}
        extra = [bound for bound in oracle.evaluate(0.8, 0.6, [1.0, 2.0, 3.0])
                 if bound.redundant]
        self.assertEqual(len(extra), 2)
        for bound in extra:
            self.assertNotIn((bound.receiver, bound.subset), keys)
        self.assertEqual(len(cs.constraints), 9)


class ZeroPowerTest(RelayCoopBaseTest):
    """ Tests that every RHS vanishes at zero power.
    """

    def runTest(self):
        for scheme_id in "ABCD":
            cs = gen_constraints(self.scheme(scheme_id), self.channel(1.3, 0.7))
            np.testing.assert_array_equal(cs.rhs(np.zeros(3)), 0.0)


class MonotonicityTest(RelayCoopBaseTest):
    """ Tests that raising P_u never lowers the RHS of constraints containing u.
    """

    def runTest(self):
        for scheme_id in "ABCD":
            scheme = self.scheme(scheme_id)
            for _ in range(100):
                cs = gen_constraints(scheme, self.channel(*self.random_gains()))
                powers = self.random_powers(3)
                before = cs.rhs(powers)
                u = int(self.rng.integers(3))
                raised = powers.copy()
                raised[u] += self.rng.uniform(0.1, 5.0)
                after = cs.rhs(raised)
                for k, rc in enumerate(cs.constraints):
                    if u in rc.subset:
                        self.assertGreaterEqual(after[k], before[k] - 1e-12)


class LinearizeTest(RelayCoopBaseTest):
    """ Tests the linear form of the scheme A constraints.
    """

    def runTest(self):
        a, b, rate = 1.2, 0.5, 0.3
        cs = gen_constraints(self.scheme("A"), self.channel(a, b))
        system = linearize(cs, RateTarget.symmetric(rate))
        rows = dict(zip(system.labels, zip(system.G, system.h)))
        G, h = rows["RX1:{1}"]
        np.testing.assert_allclose(G, [1.0, -cap_inv(rate) * b ** 2, -cap_inv(rate) * b ** 2])
        self.assertClose(h, cap_inv(rate))
        G, h = rows["RX3:{2,3}"]
        np.testing.assert_allclose(G, [-cap_inv(2 * rate) * b ** 2, 1.0, 1.0])
        self.assertClose(h, cap_inv(2 * rate))

        for scheme_id in "ABCD":
            cs = gen_constraints(self.scheme(scheme_id), self.channel(0.9, 1.1))
            zero = linearize(cs, RateTarget(0, 0, 0))
            np.testing.assert_array_equal(zero.h, 0.0)
            np.testing.assert_array_equal(zero.G, cs.signal)
            system = linearize(cs, RateTarget.symmetric(0.7))
            self.assertTrue(np.all(system.h > 0))
            self.assertTrue(np.all(cs.signal >= 0))
            self.assertTrue(np.all(cs.interference >= 0))
            self.assertTrue(np.all(system.G <= cs.signal + 1e-15))


class SharesAndCostTest(RelayCoopBaseTest):
    """ Tests share-weighted rate sums, access cost and the text dump.
    """

    def runTest(self):
        c = self.scheme("C")
        cs = gen_constraints(c, self.channel(1.0, 1.0))
        target = RateTarget(0.1, 0.2, 0.3)
        sums = dict(zip(cs.labels, cs.rate_sums(target)))
        self.assertClose(sums["RX1:{1,2}"], 0.3)
        self.assertClose(sums["RX3:{2,3}"], 0.5)
        np.testing.assert_array_equal(access_cost(c), [1.0, 2.0, 1.0])
        np.testing.assert_array_equal(access_cost(c, (2.0, 3.0)), [3.0, 5.0, 2.0])
        text = cs.to_text()
        self.assertEqual(len(text.splitlines()), len(cs.constraints))
        self.assertIn("RX2:{2}", text)
