# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Coded transmission schemes for the access link.

A scheme (CGRAS) fixes which relays know which messages, the codewords U{tx->rx}(Wz) sent by the
relays, and the superposition edges between them (base -> top). A receiver decodes every codeword
whose rx set contains it; decoding a top codeword requires decoding its base.
"""
import functools
import itertools
import re
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

from relaycoop.channel import MESSAGES, RECEIVERS, RELAYS
from relaycoop.errors import DomainError, SchemeParseError
from relaycoop.log import info

COOPERATION_LEVELS = ("none", "partial-1", "partial-2", "full")
SHARE_TOLERANCE = 1e-9

_ALLOC_RE = re.compile(r"^\s*W=\((\{[0-9,]*\}),(\{[0-9,]*\})\)\s*$")
_CODEWORD_RE = re.compile(r"U\{([0-9]+)(?:→|->)([0-9]+)\}\(W([0-9]+):([0-9.eE+-]+)\)")
_EDGE_RE = re.compile(r"^([0-9]+)<([0-9]+)$")


def _swap_message(z):
    return 4 - z


def _swap_relay(j):
    return 3 - j


def _fmt_set(values):
    return "{" + ",".join(str(v) for v in sorted(values)) + "}"


def _fmt_share(share):
    text = "%g" % share
    return text if float(text) == share else repr(float(share))


@dataclass(frozen=True)
class MessageAllocation:
    relay1: FrozenSet[int]
    relay2: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "relay1", frozenset(self.relay1))
        object.__setattr__(self, "relay2", frozenset(self.relay2))

    def known_at(self, j):
        return self.relay1 if j == 1 else self.relay2

    def knowing(self, z):
        """
        Relays that decoded message z from the BS.
        """
        return frozenset(j for j in RELAYS if z in self.known_at(j))

    def covers(self):
        return (self.relay1 | self.relay2) == frozenset(MESSAGES)

    def mirrored(self):
        return MessageAllocation(frozenset(_swap_message(z) for z in self.relay2),
                                 frozenset(_swap_message(z) for z in self.relay1))

    def __str__(self):
        return "(%s,%s)" % (_fmt_set(self.relay1), _fmt_set(self.relay2))


@dataclass(frozen=True)
class Codeword:
    message: int
    tx: FrozenSet[int]
    rx: FrozenSet[int]
    share: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "tx", frozenset(self.tx))
        object.__setattr__(self, "rx", frozenset(self.rx))

    @property
    def label(self):
        return "U{%s→%s}(W%d:%s)" % ("".join(str(j) for j in sorted(self.tx)),
                                     "".join(str(z) for z in sorted(self.rx)),
                                     self.message, _fmt_share(self.share))

    def mirrored(self):
        return Codeword(_swap_message(self.message),
                        frozenset(_swap_relay(j) for j in self.tx),
                        frozenset(_swap_message(z) for z in self.rx),
                        self.share)

    def sort_key(self):
        # parts of one message: widest decoder set first
        return (self.message, -len(self.rx), tuple(sorted(self.rx)), tuple(sorted(self.tx)),
                self.share)


@dataclass(frozen=True)
class Cgras:
    allocation: MessageAllocation
    codewords: Tuple[Codeword, ...]
    edges: FrozenSet[Tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "codewords", tuple(self.codewords))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))

    def __len__(self):
        return len(self.codewords)

    def parts(self, z):
        """
        Positions of the codewords carrying message z.
        """
        return [u for u, cw in enumerate(self.codewords) if cw.message == z]

    @property
    def split_map(self) -> Dict[int, List[Tuple[int, float]]]:
        return {z: [(u, self.codewords[u].share) for u in self.parts(z)] for z in MESSAGES}

    @property
    def split_messages(self):
        return tuple(z for z in MESSAGES if len(self.parts(z)) > 1)

    def decode_set(self, z):
        return frozenset(u for u, cw in enumerate(self.codewords) if z in cw.rx)

    def shares(self):
        return tuple(cw.share for cw in self.codewords)

    def with_shares(self, shares):
        """
        Same scheme with the split shares replaced (one share per codeword).
        """
        codewords = tuple(replace(cw, share=float(s)) for cw, s in zip(self.codewords, shares))
        return replace(self, codewords=codewords)

    def __str__(self):
        return serialize(self)


class Violation(NamedTuple):
    rule: str
    ids: Tuple[str, ...]

    def __str__(self):
        return "%s: %s" % (self.rule, ", ".join(self.ids))


@dataclass(frozen=True)
class SchemeFeatures:
    cooperation: str
    superposition_steps: int
    interference_decoding: int
    split_messages: Tuple[int, ...]


@dataclass(frozen=True)
class EnumerationOptions:
    """
    max_splits bounds the parts of one message; a message has at most four decoder sets, hence
    four parts. max_split_messages bounds how many messages are split in one scheme. It only
    limits the cost: each extra split message multiplies the variants of a scheme.
    """
    allow_splitting: bool = False
    max_splits: int = 2
    max_split_messages: int = 1
    prune_dominated: bool = False
    tight_tx: bool = False

    def __post_init__(self):
        parts = 2 ** (len(RECEIVERS) - 1)
        if not 1 <= self.max_splits <= parts:
            raise DomainError("max_splits must be in [1, %d], got %r" % (parts, self.max_splits))
        if not 0 <= self.max_split_messages <= len(MESSAGES):
            raise DomainError("max_split_messages must be in [0, %d], got %r"
                              % (len(MESSAGES), self.max_split_messages))


def _is_acyclic(n, edges):
    children = {u: [] for u in range(n)}
    indegree = [0] * n
    for base, top in edges:
        children[base].append(top)
        indegree[top] += 1
    ready = [u for u in range(n) if indegree[u] == 0]
    seen = 0
    while ready:
        u = ready.pop()
        seen += 1
        for v in children[u]:
            indegree[v] -= 1
            if indegree[v] == 0:
                ready.append(v)
    return seen == n


def validate(c: Cgras) -> List[Violation]:
    """
    Checks the structural rules of a scheme.

    :param c: the scheme
    :return: list of violations, empty when the scheme is valid
    """
    violations = []
    labels = [cw.label for cw in c.codewords]
    if not c.allocation.covers():
        missing = sorted(set(MESSAGES) - (c.allocation.relay1 | c.allocation.relay2))
        violations.append(Violation("allocation does not cover every message",
                                    tuple("W%d" % z for z in missing)))
    for u, cw in enumerate(c.codewords):
        if cw.message not in MESSAGES:
            violations.append(Violation("unknown message", (labels[u],)))
            continue
        if not cw.tx or not cw.tx <= set(RELAYS):
            violations.append(Violation("tx must be a nonempty set of relays", (labels[u],)))
        if not cw.rx or not cw.rx <= set(RECEIVERS):
            violations.append(Violation("rx must be a nonempty set of receivers", (labels[u],)))
        if not cw.tx <= c.allocation.knowing(cw.message):
            violations.append(Violation("tx not subset of knowing relays", (labels[u],)))
        if not 0.0 < cw.share <= 1.0 + SHARE_TOLERANCE:
            violations.append(Violation("share outside (0, 1]", (labels[u],)))
    for z in MESSAGES:
        parts = c.parts(z)
        if not parts:
            violations.append(Violation("message has no codeword", ("W%d" % z,)))
            continue
        if not any(z in c.codewords[u].rx for u in parts):
            violations.append(Violation("intended receiver decodes no part of message",
                                        tuple(labels[u] for u in parts)))
        total = sum(c.codewords[u].share for u in parts)
        if abs(total - 1.0) > SHARE_TOLERANCE:
            violations.append(Violation("shares of message do not sum to 1",
                                        tuple(labels[u] for u in parts)))
    n = len(c.codewords)
    edges_ok = True
    for base, top in sorted(c.edges):
        if not (0 <= base < n and 0 <= top < n) or base == top:
            violations.append(Violation("edge references unknown codeword",
                                        ("%d<%d" % (base + 1, top + 1),)))
            edges_ok = False
            continue
        pair = (labels[base], labels[top])
        if not c.codewords[top].tx <= c.codewords[base].tx:
            violations.append(Violation("top tx not subset of base tx", pair))
        if not c.codewords[top].rx <= c.codewords[base].rx:
            violations.append(Violation("decoder of top does not decode base", pair))
    if edges_ok and not _is_acyclic(n, c.edges):
        violations.append(Violation("superposition edges form a cycle", tuple(labels)))
    return violations


def normalized(c: Cgras) -> Cgras:
    """
    Reorders codewords into canonical order and renumbers the edges accordingly.
    """
    order = sorted(range(len(c.codewords)), key=lambda u: c.codewords[u].sort_key())
    position = {old: new for new, old in enumerate(order)}
    return Cgras(c.allocation, tuple(c.codewords[u] for u in order),
                 frozenset((position[b], position[t]) for b, t in c.edges))


def mirror(c: Cgras) -> Cgras:
    """
    Applies the channel symmetry: relay 1 <-> relay 2 and receiver 1 <-> receiver 3.
    """
    return Cgras(c.allocation.mirrored(), tuple(cw.mirrored() for cw in c.codewords), c.edges)


def serialize(c: Cgras) -> str:
    edges = " ".join("%d<%d" % (b + 1, t + 1) for b, t in sorted(c.edges)) or "-"
    return "W=%s | %s | %s" % (c.allocation, " ".join(cw.label for cw in c.codewords), edges)


def _parse_set(text):
    body = text.strip()[1:-1]
    return frozenset(int(v) for v in body.split(",") if v)


def parse_scheme(text: str) -> Cgras:
    """
    Inverse of serialize().
    """
    fields = text.split("|")
    if len(fields) != 3:
        raise SchemeParseError("expected 'W=(..) | codewords | edges', got %r" % text)
    match = _ALLOC_RE.match(fields[0])
    if match is None:
        raise SchemeParseError("malformed allocation %r" % fields[0])
    allocation = MessageAllocation(_parse_set(match.group(1)), _parse_set(match.group(2)))
    codewords = []
    for tx, rx, z, share in _CODEWORD_RE.findall(fields[1]):
        codewords.append(Codeword(int(z), frozenset(int(j) for j in tx),
                                  frozenset(int(r) for r in rx), float(share)))
    if not codewords or len(_CODEWORD_RE.sub("", fields[1]).strip()) > 0:
        raise SchemeParseError("malformed codeword list %r" % fields[1])
    edges = set()
    for token in fields[2].split():
        if token == "-":
            continue
        match = _EDGE_RE.match(token)
        if match is None:
            raise SchemeParseError("malformed edge %r" % token)
        edges.add((int(match.group(1)) - 1, int(match.group(2)) - 1))
    return Cgras(allocation, tuple(codewords), frozenset(edges))


def canonicalize(c: Cgras) -> str:
    """
    Key shared by a scheme and its mirror image.
    """
    return min(serialize(normalized(c)), serialize(normalized(mirror(c))))


def representative(c: Cgras) -> Cgras:
    """
    The member of {c, mirror(c)} whose normalized text is the canonical key.
    """
    candidates = [normalized(c), normalized(mirror(c))]
    return min(candidates, key=serialize)


def cooperation_level(c) -> str:
    """
    Classifies by the number of messages known at both relays.
    """
    alloc = c.allocation if isinstance(c, Cgras) else c
    return COOPERATION_LEVELS[len(alloc.relay1 & alloc.relay2)]


def scheme_features(c: Cgras) -> SchemeFeatures:
    interference = sum(len(cw.rx - {cw.message}) for cw in c.codewords)
    return SchemeFeatures(cooperation_level(c), len(c.edges), interference, c.split_messages)


def enumerate_allocations() -> List[MessageAllocation]:
    """
    All 27 allocations: each message goes to relay 1, relay 2 or both.
    """
    allocations = []
    for choice in itertools.product(((1,), (2,), (1, 2)), repeat=len(MESSAGES)):
        relay1 = frozenset(z for z, relays in zip(MESSAGES, choice) if 1 in relays)
        relay2 = frozenset(z for z, relays in zip(MESSAGES, choice) if 2 in relays)
        allocations.append(MessageAllocation(relay1, relay2))
    return allocations


def _nonempty_subsets(values):
    values = sorted(values)
    return [frozenset(s) for k in range(1, len(values) + 1)
            for s in itertools.combinations(values, k)]


def _supersets(required, universe):
    rest = sorted(set(universe) - set(required))
    return [frozenset(required) | frozenset(s) for k in range(len(rest) + 1)
            for s in itertools.combinations(rest, k)]


def _can_layer(base: Codeword, top: Codeword):
    return top.tx <= base.tx and top.rx <= base.rx


def _edge_sets(codewords, prune_dominated, fixed=frozenset(), touching=None):
    """
    Acyclic edge sets made of the fixed edges plus any valid edges touching the given positions
    (every position when touching is None).
    """
    n = len(codewords)
    allowed = [(u, v) for u in range(n) for v in range(n)
               if u != v and (u, v) not in fixed
               and (touching is None or u in touching or v in touching)
               and _can_layer(codewords[u], codewords[v])]
    acyclic = []
    for k in range(len(allowed) + 1):
        for subset in itertools.combinations(allowed, k):
            edges = fixed | frozenset(subset)
            if _is_acyclic(n, edges):
                acyclic.append(edges)
    if not prune_dominated:
        return acyclic
    # more edges leave fewer error subsets, hence a larger region
    return [s for s in acyclic
            if all(not _is_acyclic(n, s | {e}) for e in allowed if e not in s)]


def _split_message(c: Cgras, z, opts: EnumerationOptions):
    """
    Variants of c where message z gains up to max_splits - 1 extra parts. Every part picks its
    own relays among those knowing z and its own decoder set containing z; decoder sets of the
    parts are distinct. New edges are any valid edges touching the new parts.
    """
    knowing = c.allocation.knowing(z)
    tx_options = _nonempty_subsets(knowing)
    base_pos = c.parts(z)[0]
    base = c.codewords[base_pos]
    base_txs = tx_options if opts.tight_tx else [base.tx]
    others = [rx for rx in _supersets({z}, RECEIVERS) if rx != base.rx]
    for base_tx in base_txs:
        resized = list(c.codewords)
        resized[base_pos] = replace(base, tx=base_tx)
        kept = frozenset((u, v) for u, v in c.edges if _can_layer(resized[u], resized[v]))
        for count in range(1, opts.max_splits):
            share = 1.0 / (count + 1)
            for rxs in itertools.combinations(others, count):
                for txs in itertools.product(tx_options, repeat=count):
                    # tight: every knowing relay sends some part of z
                    if opts.tight_tx and base_tx.union(*txs) != knowing:
                        continue
                    codewords = list(resized)
                    codewords[base_pos] = replace(resized[base_pos], share=share)
                    codewords.extend(Codeword(z, tx, rx, share) for tx, rx in zip(txs, rxs))
                    new = set(range(len(resized), len(codewords)))
                    for edges in _edge_sets(codewords, opts.prune_dominated, kept, new):
                        yield Cgras(c.allocation, tuple(codewords), edges)


def _split_messages(c: Cgras, messages, opts: EnumerationOptions):
    if not messages:
        yield c
        return
    for variant in _split_message(c, messages[0], opts):
        yield from _split_messages(variant, messages[1:], opts)


def _split_variants(c: Cgras, opts: EnumerationOptions):
    for k in range(1, opts.max_split_messages + 1):
        for messages in itertools.combinations(MESSAGES, k):
            yield from _split_messages(c, messages, opts)


def iter_schemes(alloc: MessageAllocation, opts: Optional[EnumerationOptions] = None):
    """
    Generator behind enumerate_schemes(), in deterministic order: each plain scheme followed by
    its split variants not produced before.
    """
    opts = opts or EnumerationOptions()
    if opts.tight_tx:
        tx_choices = [[alloc.knowing(z)] for z in MESSAGES]
    else:
        tx_choices = [_nonempty_subsets(alloc.knowing(z)) for z in MESSAGES]
    rx_choices = [_supersets({z}, RECEIVERS) for z in MESSAGES]
    seen = set()
    for txs in itertools.product(*tx_choices):
        for rxs in itertools.product(*rx_choices):
            codewords = tuple(Codeword(z, tx, rx) for z, tx, rx in zip(MESSAGES, txs, rxs))
            for edges in _edge_sets(codewords, opts.prune_dominated):
                scheme = Cgras(alloc, codewords, edges)
                yield scheme
                if not opts.allow_splitting:
                    continue
                for variant in _split_variants(scheme, opts):
                    # a split reached from several plain schemes is kept once
                    key = serialize(normalized(variant))
                    if key not in seen:
                        seen.add(key)
                        yield variant


def enumerate_schemes(alloc: MessageAllocation,
                      opts: Optional[EnumerationOptions] = None) -> List[Cgras]:
    return list(iter_schemes(alloc, opts))


@functools.lru_cache(maxsize=16)
def _enumerate_all(opts: EnumerationOptions, symmetric: bool):
    tight = replace(opts, tight_tx=True)
    schemes = []
    seen = set()
    for alloc in enumerate_allocations():
        for c in iter_schemes(alloc, tight):
            if symmetric:
                key = canonicalize(c)
                if key in seen:
                    continue
                seen.add(key)
                c = representative(c)
            schemes.append(c)
    info("enumerated %d schemes (splitting=%s, symmetric=%s)", len(schemes),
         opts.allow_splitting, symmetric)
    return tuple(schemes)


def enumerate_all(opts: Optional[EnumerationOptions] = None, symmetric=False) -> List[Cgras]:
    """
    Every scheme over all 27 allocations. Each codeword structure appears once, under the
    allocation in which a relay knows exactly the messages it transmits.

    :param opts: enumeration options
    :param symmetric: keep one representative per mirror pair
    :return: list of schemes
    """
    return list(_enumerate_all(opts or EnumerationOptions(), bool(symmetric)))
