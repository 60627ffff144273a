"""Python bindings for the JIO-MBER reduced-rank multiuser detection core."""

from ._jiomber import *  # noqa: F401,F403
from ._jiomber import __doc__, version  # noqa: F401

__version__ = version()
