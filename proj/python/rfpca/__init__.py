"""Distributionally robust fairness-aware PCA."""

from ._rfpca import *  # noqa: F401,F403
from ._rfpca import __doc__  # noqa: F401
