# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
import sys

from relaycoop.cli import main

sys.exit(main())
