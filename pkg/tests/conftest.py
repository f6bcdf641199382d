# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

from typing import List

import pytest
from _pytest.config import Config, Parser
from _pytest.nodes import Item

from barrier_fw import configure

# This file configures the quick pytest option, skips desk-scale experiment tests with it
# and runs every test under TestConfig


def pytest_addoption(parser: Parser) -> None:
    parser.addoption(
        "--quick", action="store_true", default=False, help="Skip desk-scale experiment tests. These tests \
        solve instances with hundreds of atoms and take minutes."
    )


def pytest_configure(config: Config) -> None:
    config.addinivalue_line("markers", "desk_scale: mark test as desk-scale experiment")
    configure(config_module_class="barrier_fw.config.TestConfig")


def pytest_collection_modifyitems(config: Config, items: List[Item]) -> None:
    quick: bool = config.getoption("--quick")
    skip_desk_scale = pytest.mark.skip(reason="skipped by the --quick option")
    for item in items:
        if "desk_scale" in item.keywords and quick:
            item.add_marker(skip_desk_scale)
