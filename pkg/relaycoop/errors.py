# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Exceptions raised by relaycoop. Infeasible rate targets are not errors: they are reported
through the ``feasible`` flag of the result objects.
"""


class RelayCoopError(Exception):
    pass


class DomainError(RelayCoopError, ValueError):
    """Used when an argument is outside the domain of a function (negative SNR, NaN gain...)."""

    def __init__(self, message):
        super(DomainError, self).__init__(message)


class ZeroRateError(DomainError):
    pass


class SchemeParseError(DomainError):
    pass


class ConfigError(RelayCoopError):
    pass


class RelayLinkError(RelayCoopError):
    """A message with positive rate is routed through a relay that the BS cannot reach."""

    def __init__(self, relay, rate):
        super(RelayLinkError, self).__init__()
        self.relay = relay
        self.rate = rate

    def __str__(self):
        return "relay {} has d=0 but must carry rate {:.6g}".format(self.relay, self.rate)


# Raised when the simplex exceeds its pivot cap. Keeps the instance shape and the last pivots.
class SolverError(RelayCoopError):

    def __init__(self, iterations, cap, shape, history=None,
                 reason="Simplex iteration cap exceeded"):
        super(SolverError, self).__init__()
        self.reason = reason
        self.iterations = iterations
        self.cap = cap
        self.shape = shape
        self.history = list(history or [])

    def __str__(self):
        message = "{}:\n".format(self.reason)
        message += "\t* iterations: {} (cap {})\n".format(self.iterations, self.cap)
        message += "\t* problem: {} constraints x {} variables\n".format(*self.shape)
        for phase, entering, leaving in self.history[-5:]:
            message += "\t* phase {}: entering col {}, leaving row {}\n".format(
                phase, entering, leaving)
        return message


class BoundSearchError(RelayCoopError):

    def __init__(self, reason, diagnostics=None):
        super(BoundSearchError, self).__init__()
        self.reason = reason
        self.diagnostics = list(diagnostics or [])

    def __str__(self):
        message = "Lower bound search failed: {}\n".format(self.reason)
        for entry in self.diagnostics:
            message += "\t* {}\n".format(entry)
        return message
