# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#

# ------------------------------------------------------------------------------
# CGRAS TESTS
#
# Scheme validation, text form, symmetry and enumeration.
# ------------------------------------------------------------------------------

from dataclasses import replace

import pytest

from relaycoop.cgras import (Cgras, Codeword, EnumerationOptions, MessageAllocation,
                             canonicalize, cooperation_level, enumerate_all,
                             enumerate_allocations, enumerate_schemes, mirror, normalized,
                             parse_scheme, scheme_features, serialize, validate)
from relaycoop.errors import DomainError, SchemeParseError
from relaycoop_base import RelayCoopBaseTest, print_inline

SCHEME_A_TEXT = "W=({1},{2,3}) | U{1→1}(W1:1) U{2→23}(W2:1) U{2→3}(W3:1) | 2<3"


def _texts(schemes):
    return {serialize(normalized(c)) for c in schemes}


class ValidateTest(RelayCoopBaseTest):
    """ Tests that reference schemes are valid and broken ones report the right rule.
    """

    def runTest(self):
        for scheme_id in "ABCD":
            self.assertEqual(validate(self.scheme(scheme_id)), [])
        a = self.scheme("A")
        flat = Cgras(a.allocation, (Codeword(1, {1}, {1}), Codeword(2, {2}, {2}),
                                    Codeword(3, {2}, {3})), frozenset())
        self.assertEqual(validate(flat), [])

        wrong_tx = Cgras(a.allocation, (Codeword(1, {2}, {1}),) + a.codewords[1:], a.edges)
        rules = [v.rule for v in validate(wrong_tx)]
        self.assertIn("tx not subset of knowing relays", rules)

        self.check_rule(Cgras(a.allocation, a.codewords, {(1, 2), (2, 1)}),
                        "superposition edges form a cycle")
        self.check_rule(Cgras(a.allocation, a.codewords, {(2, 1)}),
                        "decoder of top does not decode base")
        self.check_rule(Cgras(a.allocation, a.codewords[:2] + (Codeword(3, {2}, {2}),), a.edges),
                        "intended receiver decodes no part of message")
        self.check_rule(a.with_shares((1.0, 0.5, 1.0)), "shares of message do not sum to 1")
        self.check_rule(Cgras(MessageAllocation({1}, {2}), a.codewords, a.edges),
                        "allocation does not cover every message")
        full = MessageAllocation({1, 2, 3}, {1, 2, 3})
        self.check_rule(Cgras(full, (Codeword(1, {1}, {1}), Codeword(2, {1, 2}, {2}),
                                     Codeword(3, {2}, {3})), {(0, 1)}),
                        "top tx not subset of base tx")

    def check_rule(self, scheme, rule):
        violations = validate(scheme)
        self.assertIn(rule, [v.rule for v in violations], msg=str(violations))


class TextFormTest(RelayCoopBaseTest):
    """ Tests the stable text form and its parser.
    """

    def runTest(self):
        a = self.scheme("A")
        self.assertEqual(serialize(a), SCHEME_A_TEXT)
        self.assertEqual(parse_scheme(SCHEME_A_TEXT), a)
        self.assertEqual(parse_scheme(SCHEME_A_TEXT.replace("→", "->")), a)
        for scheme_id in "BCD":
            c = self.scheme(scheme_id)
            self.assertEqual(parse_scheme(serialize(c)), c)
        flat = parse_scheme("W=({1,2,3},{}) | U{1→1}(W1:1) U{1→2}(W2:1) U{1→3}(W3:1) | -")
        self.assertEqual(flat.edges, frozenset())
        self.assertEqual(flat.allocation.relay2, frozenset())
        for bad in ("", "W=({1},{2,3}) | U{1→1}(W1:1)", "W=(1,2) | U{1→1}(W1:1) | -",
                    "W=({1},{2,3}) | U{1→1}(W1:1) junk | -",
                    "W=({1},{2,3}) | U{1→1}(W1:1) | 1-2"):
            with self.assertRaises(SchemeParseError):
                parse_scheme(bad)


class ShareTextTest(RelayCoopBaseTest):
    """ Tests that split shares survive the text form exactly.
    """

    def runTest(self):
        opts = EnumerationOptions(allow_splitting=True, prune_dominated=True)
        split = next(c for c in enumerate_schemes(MessageAllocation({1}, {2, 3}), opts)
                     if c.split_messages)
        first, second = split.parts(split.split_messages[0])[:2]
        for share in (1.0 / 3.0, 0.1, 0.123456789, 2.0 / 7.0):
            shares = list(split.shares())
            shares[first], shares[second] = share, 1.0 - share
            c = split.with_shares(shares)
            back = parse_scheme(serialize(c))
            self.assertEqual(back, c, msg=serialize(c))
            self.assertEqual(back.shares(), c.shares())
        self.assertIn(":0.5", serialize(split))


class CanonicalizeTest(RelayCoopBaseTest):
    """ Tests that mirror images share a key and different schemes do not.
    """

    def runTest(self):
        a = self.scheme("A")
        mirrored = mirror(a)
        self.assertEqual(mirrored.allocation, MessageAllocation({1, 2}, {3}))
        self.assertEqual(mirror(mirrored), a)
        self.assertEqual(canonicalize(a), canonicalize(mirrored))
        self.assertEqual(canonicalize(a), canonicalize(a))
        self.assertNotEqual(canonicalize(a), canonicalize(self.scheme("B")))
        # codeword order does not matter
        shuffled = Cgras(a.allocation, tuple(reversed(a.codewords)), {(1, 0)})
        self.assertEqual(canonicalize(shuffled), canonicalize(a))


class CooperationTest(RelayCoopBaseTest):
    """ Tests cooperation levels and scheme features.
    """

    def runTest(self):
        self.assertEqual(cooperation_level(MessageAllocation({1}, {2, 3})), "none")
        self.assertEqual(cooperation_level(MessageAllocation({1, 2}, {2, 3})), "partial-1")
        self.assertEqual(cooperation_level(MessageAllocation({1, 2, 3}, {1, 2})), "partial-2")
        self.assertEqual(cooperation_level(MessageAllocation({1, 2, 3}, {1, 2, 3})), "full")
        self.assertEqual(cooperation_level(self.scheme("C")), "partial-1")
        f = scheme_features(self.scheme("C"))
        self.assertEqual((f.superposition_steps, f.interference_decoding, f.split_messages),
                         (2, 2, ()))
        f = scheme_features(self.scheme("D"))
        self.assertEqual(f.interference_decoding, 4)


class AllocationsTest(RelayCoopBaseTest):
    """ Tests the 27 covering allocations.
    """

    def runTest(self):
        allocations = enumerate_allocations()
        self.assertEqual(len(allocations), 27)
        self.assertEqual(len(set(allocations)), 27)
        self.assertIn(MessageAllocation({1}, {2, 3}), allocations)
        self.assertIn(MessageAllocation({1, 2, 3}, {1, 2, 3}), allocations)
        self.assertIn(MessageAllocation({1, 2, 3}, set()), allocations)
        self.assertTrue(all(alloc.covers() for alloc in allocations))


class EnumerateReferenceSchemesTest(RelayCoopBaseTest):
    """ Tests that the reference schemes come out of the enumeration.
    """

    def runTest(self):
        none = _texts(enumerate_schemes(MessageAllocation({1}, {2, 3})))
        self.assertIn(serialize(normalized(self.scheme("A"))), none)
        self.assertIn(serialize(normalized(self.scheme("B"))), none)
        partial = _texts(enumerate_schemes(MessageAllocation({2, 3}, {1, 2})))
        self.assertIn(serialize(normalized(self.scheme("C"))), partial)
        self.assertIn(serialize(normalized(self.scheme("D"))), partial)


class EnumerateValidTest(RelayCoopBaseTest):
    """ Tests that every enumerated scheme is valid and the symmetric count is in range.
    """

    def runTest(self):
        schemes = enumerate_all()
        for c in schemes:
            self.assertEqual(validate(c), [], msg=serialize(c))
        self.assertEqual(len(_texts(schemes)), len(schemes))
        deduped = enumerate_all(symmetric=True)
        print_inline("%d schemes, %d after symmetry... " % (len(schemes), len(deduped)))
        self.assertTrue(100 <= len(deduped) <= 5000)
        self.assertLess(len(deduped), len(schemes))
        keys = [canonicalize(c) for c in deduped]
        self.assertEqual(len(set(keys)), len(keys))
        # representatives are their own canonical form
        self.assertTrue(all(serialize(c) == canonicalize(c) for c in deduped))


class EnumerateSplitTest(RelayCoopBaseTest):
    """ Tests split variants: validity, distinct decoder sets and the no-split subset.
    """

    def runTest(self):
        alloc = MessageAllocation({1}, {2, 3})
        plain = enumerate_schemes(alloc, EnumerationOptions(prune_dominated=True))
        split = enumerate_schemes(alloc, EnumerationOptions(allow_splitting=True,
                                                            prune_dominated=True))
        self.assertTrue(_texts(plain) <= _texts(split))
        self.assertEqual(len(_texts(split)), len(split))
        variants = [c for c in split if c.split_messages]
        self.assertTrue(variants)
        for c in variants:
            self.assertEqual(validate(c), [], msg=serialize(c))
            self.assertEqual(len(c.split_messages), 1)
            z = c.split_messages[0]
            parts = [c.codewords[u] for u in c.parts(z)]
            self.assertEqual(len(parts), 2)
            self.assertNotEqual(parts[0].rx, parts[1].rx)
            self.assertTrue(all(z in p.rx for p in parts))
            self.assertEqual([p.share for p in parts], [0.5, 0.5])


def _split_parts(schemes, z):
    return [[c.codewords[u] for u in c.parts(z)] for c in schemes if z in c.split_messages]


class SplitCoverageTest(RelayCoopBaseTest):
    """ Tests that parts of a split choose their own relays and unrelated decoder sets.
    """

    def runTest(self):
        alloc = MessageAllocation({1, 2}, {2, 3})
        opts = EnumerationOptions(allow_splitting=True, prune_dominated=True)
        parts = _split_parts(enumerate_schemes(alloc, opts), 2)
        # common part from both relays, private part from relay 1
        self.assertTrue(any({p.tx for p in ps} == {frozenset({1, 2}), frozenset({1})}
                            for ps in parts))
        # decoder sets {1,2} and {2,3}: neither contains the other
        self.assertTrue(any({p.rx for p in ps} == {frozenset({1, 2}), frozenset({2, 3})}
                            for ps in parts))

        tight = replace(opts, tight_tx=True)
        parts = _split_parts(enumerate_schemes(alloc, tight), 2)
        self.assertTrue(parts)
        for ps in parts:
            self.assertEqual(frozenset().union(*(p.tx for p in ps)), frozenset({1, 2}))
        self.assertTrue(any({p.tx for p in ps} == {frozenset({1}), frozenset({2})}
                            for ps in parts))


class SplitManyTest(RelayCoopBaseTest):
    """ Tests three-part splits, two split messages and the option bounds.
    """

    def runTest(self):
        alloc = MessageAllocation({1}, {2, 3})
        opts = EnumerationOptions(allow_splitting=True, max_splits=3, prune_dominated=True)
        schemes = enumerate_schemes(alloc, opts)
        three = [c for c in schemes
                 if any(len(c.parts(z)) == 3 for z in c.split_messages)]
        self.assertTrue(three)
        for c in three[::50]:
            self.assertEqual(validate(c), [], msg=serialize(c))
            back = parse_scheme(serialize(c))
            self.assertEqual(back, c)
            self.assertEqual(validate(back), [])

        two = enumerate_schemes(alloc, replace(opts, max_splits=2, max_split_messages=2))
        pairs = [c for c in two if len(c.split_messages) == 2]
        self.assertTrue(pairs)
        for c in pairs[::50]:
            self.assertEqual(validate(c), [], msg=serialize(c))

        for bad in ({"max_splits": 0}, {"max_splits": 5}, {"max_split_messages": 4}):
            with self.assertRaises(DomainError):
                EnumerationOptions(**bad)


class PruneDominatedTest(RelayCoopBaseTest):
    """ Tests that pruning keeps only maximal edge sets of the same codewords.
    """

    def runTest(self):
        alloc = MessageAllocation({2, 3}, {1, 2})
        full = enumerate_schemes(alloc)
        pruned = enumerate_schemes(alloc, EnumerationOptions(prune_dominated=True))
        self.assertTrue(_texts(pruned) <= _texts(full))
        self.assertLess(len(pruned), len(full))
        self.assertIn(serialize(normalized(self.scheme("C"))), _texts(pruned))
        for c in pruned:
            for other in pruned:
                if other is not c and tuple(other.codewords) == tuple(c.codewords):
                    self.assertFalse(c.edges < other.edges)


@pytest.mark.slow
class EnumerateAnyTxValidTest(RelayCoopBaseTest):
    """ Tests validity over every allocation with any transmitter subset.
    """

    def runTest(self):
        for alloc in enumerate_allocations():
            print_inline("%s... " % alloc)
            for c in enumerate_schemes(alloc):
                self.assertEqual(validate(c), [], msg=serialize(c))
