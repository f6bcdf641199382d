# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import functools
import logging
from threading import Lock
from typing import Any, Callable, Dict, Optional  # noqa: F401

from statsd import StatsClient

from barrier_fw import config, get_config

LOGGER = logging.getLogger(__name__)


class _StatsClientPool:
    """
    One StatsClient per module prefix, created on first use
    """

    def __init__(self) -> None:
        self._clients = {}  # type: Dict[str, StatsClient]
        self._lock = Lock()

    def get(self, prefix: str) -> StatsClient:
        client = self._clients.get(prefix)
        if client is not None:
            return client
        with self._lock:
            if prefix not in self._clients:
                LOGGER.info('Instantiate StatsClient with prefix {}'.format(prefix))
                self._clients[prefix] = StatsClient(prefix=prefix)
            return self._clients[prefix]


_POOL = _StatsClientPool()


def _get_statsd_client(*, prefix: str) -> Optional[StatsClient]:
    """
    Pooled client for the prefix, or None when IS_STATSD_ON is off in the current config
    """
    if not getattr(get_config(), config.IS_STATSD_ON, False):
        return None
    return _POOL.get(prefix)


def _emit_run_summary(client: StatsClient, name: str, result: Any) -> None:
    # solver results carry a stop reason and an iteration count; other return values are skipped
    stop_reason = getattr(result, 'stop_reason', None)
    if stop_reason is None:
        return
    client.incr('{}.stop.{}'.format(name, str(getattr(stop_reason, 'name', stop_reason)).lower()))
    client.gauge('{}.iterations'.format(name), result.iterations)


def timer_with_counter(f: Callable) -> Any:
    """
    Decorator timing f and counting successes and failures under the statsd prefix
    of f's module. Solver runs additionally count their stop reason and report the
    number of iterations. Nothing is emitted unless IS_STATSD_ON is set.

    e.g: decorating barrier_fw.solver.afw.run emits
      - barrier_fw.solver.afw.run.timer
      - barrier_fw.solver.afw.run.success / run.fail
      - barrier_fw.solver.afw.run.stop.converged (one counter per stop reason)
      - barrier_fw.solver.afw.run.iterations
    """
    @functools.wraps(f)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        client = _get_statsd_client(prefix=f.__module__)
        if client is None:
            return f(*args, **kwargs)

        name = f.__name__
        with client.timer(name):
            try:
                result = f(*args, **kwargs)
            except Exception:
                client.incr('{}.fail'.format(name))
                raise
        client.incr('{}.success'.format(name))
        _emit_run_summary(client, name, result)
        return result

    return wrapper
