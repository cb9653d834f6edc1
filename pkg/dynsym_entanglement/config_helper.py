#!/usr/bin/env python3

from configparser import ConfigParser
import inspect
import logging
import os


def default_config_path():
    return os.path.join(os.path.dirname(
        os.path.abspath(inspect.getsourcefile(lambda: 0))), 'config.ini')


def load_config(path=None):
    # shipped defaults first, an optional user file on top
    configs = ConfigParser()
    paths = [default_config_path()]
    if path is not None:
        if not os.path.isfile(path):
            logging.warning("Config file {} not found, using defaults".format(path))
        paths.append(path)
    configs.read(paths)
    return configs


def setup_logging(configs, verbose=False):
    settings = configs["Logging"]
    level = logging.DEBUG if verbose else getattr(
        logging, settings.get("Level", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(level=level, format=settings.get(
        "Format", "%(levelname)s %(module)s: %(message)s", raw=True))
