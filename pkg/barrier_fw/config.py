# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import os
from typing import Optional  # noqa: F401

# Configuration keys
IS_STATSD_ON = 'IS_STATSD_ON'
OUTPUT_DIR = 'OUTPUT_DIR'
DEFAULT_EPSILON = 'DEFAULT_EPSILON'
DROP_THRESHOLD = 'DROP_THRESHOLD'
DOPT_REFACTOR_PERIOD = 'DOPT_REFACTOR_PERIOD'
DEFAULT_CHECK_LEVEL = 'DEFAULT_CHECK_LEVEL'
REFERENCE_MAX_ITERATIONS = 'REFERENCE_MAX_ITERATIONS'
REFERENCE_CACHE_EXPIRY_SEC = 'REFERENCE_CACHE_EXPIRY_SEC'
MAX_WORKERS = 'MAX_WORKERS'
HAWKES_MAX_EVENTS = 'HAWKES_MAX_EVENTS'

# Environment variable overriding the experiment output directory
OUTPUT_DIR_ENV = 'BARRIER_FW_OUTPUT_DIR'


class Config:
    LOG_FORMAT = '%(asctime)s.%(msecs)03d [%(levelname)s] %(module)s.%(funcName)s:%(lineno)d (%(process)d:' \
                 '%(threadName)s) - %(message)s'
    LOG_DATE_FORMAT = '%Y-%m-%dT%H:%M:%S%z'
    LOG_LEVEL = 'INFO'

    # Path to the logging configuration file to be used by `fileConfig()` method
    # https://docs.python.org/3.7/library/logging.config.html#logging.config.fileConfig
    LOG_CONFIG_FILE = None  # type: Optional[str]

    IS_STATSD_ON = os.environ.get(IS_STATSD_ON, 'False').lower() in ('true', '1', 'yes')

    OUTPUT_DIR = os.environ.get(OUTPUT_DIR_ENV, 'output')

    # FW-gap stopping threshold
    DEFAULT_EPSILON = 1e-9

    # Atom weights at or below this value are treated as zero and dropped from the support
    DROP_THRESHOLD = 1e-14

    # Number of rank-one updates of the D-opt inverse between two fresh factorizations
    DOPT_REFACTOR_PERIOD = 50

    # One of 'off', 'cheap', 'full'
    DEFAULT_CHECK_LEVEL = 'cheap'

    REFERENCE_MAX_ITERATIONS = 100000  # type: int
    REFERENCE_CACHE_EXPIRY_SEC = 3600  # type: int

    # Number of solver runs executed in parallel by the experiment runner
    MAX_WORKERS = 1  # type: int

    # Explosion guard for the Hawkes simulator
    HAWKES_MAX_EVENTS = 5000000  # type: int


class LocalConfig(Config):
    LOG_LEVEL = 'DEBUG'
    DEFAULT_CHECK_LEVEL = 'full'


class ProductionConfig(Config):
    DEFAULT_CHECK_LEVEL = 'off'
    MAX_WORKERS = int(os.environ.get(MAX_WORKERS, 4))


class TestConfig(LocalConfig):
    LOG_LEVEL = 'INFO'
    DEFAULT_CHECK_LEVEL = 'cheap'
    REFERENCE_MAX_ITERATIONS = 20000
