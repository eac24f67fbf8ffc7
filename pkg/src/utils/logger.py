"""
Logger - One-time logging configuration for the CLI
"""

import logging

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(name)s - %(message)s'

_LEVELS = {
    0: logging.WARNING,
    1: logging.INFO,
    2: logging.DEBUG,
}


def setup_logging(verbosity=1):
    """Configure the root logger; verbosity 0=warnings, 1=info, 2+=debug"""
    level = _LEVELS.get(min(verbosity, 2), logging.INFO)
    logging.basicConfig(format=LOG_FORMAT, level=level, force=True)
    # Third-party chatter stays at warning level
    for noisy in ('PIL',):
        logging.getLogger(noisy).setLevel(logging.WARNING)
    return logging.getLogger('src')
