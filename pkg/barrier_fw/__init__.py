# Copyright Contributors to the barrier-fw project.
# SPDX-License-Identifier: Apache-2.0

import importlib
import logging
import logging.config
import os
from threading import Lock
from typing import Any, Optional  # noqa: F401

from barrier_fw.exception import ConfigError

__version__ = '0.3.0'

DEFAULT_CONFIG_MODULE_CLASS = 'barrier_fw.config.LocalConfig'

_current_config = None  # type: Optional[Any]
_current_config_lock = Lock()


def _import_config_class(config_module_class: str) -> Any:
    module_name, _, class_name = config_module_class.rpartition('.')
    if not module_name:
        raise ConfigError('Config class must be given as module.Class, got {}'.format(config_module_class))
    try:
        return getattr(importlib.import_module(module_name), class_name)
    except (ImportError, AttributeError) as e:
        raise ConfigError('Cannot load config class {}: {}'.format(config_module_class, e))


def configure(*, config_module_class: str) -> Any:
    """
    Loads the config class and initialises logging from it. The loaded config
    becomes the process-wide current config returned by get_config().

    The config is fetched via module.class name, which can be overridden through
    the BARRIER_FW_CONFIG_MODULE_CLASS environment variable so that a custom
    Config class can be injected at runtime.

    :param config_module_class: dotted path of the config class
    :return: the config class
    """
    global _current_config

    config_module_class = \
        os.getenv('BARRIER_FW_CONFIG_MODULE_CLASS') or config_module_class
    config_class = _import_config_class(config_module_class)

    if getattr(config_class, 'LOG_CONFIG_FILE', None):
        logging.config.fileConfig(config_class.LOG_CONFIG_FILE, disable_existing_loggers=False)
    else:
        logging.basicConfig(format=config_class.LOG_FORMAT, datefmt=config_class.LOG_DATE_FORMAT)
        logging.getLogger().setLevel(config_class.LOG_LEVEL)

    with _current_config_lock:
        _current_config = config_class
    logging.info('Configured barrier-fw with config name {}'.format(config_module_class))
    return config_class


def get_config() -> Any:
    """
    Provides the current config, configuring the default one on first use
    :return: config class
    """
    if _current_config is not None:
        return _current_config
    return configure(config_module_class=DEFAULT_CONFIG_MODULE_CLASS)
