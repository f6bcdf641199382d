# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0
