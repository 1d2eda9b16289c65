# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Energy-efficient cooperative transmission schemes for a downlink where a base station reaches
three receivers through two relays.
"""
__version__ = "0.1.0"
