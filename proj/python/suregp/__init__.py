"""SURE-tuned threshold denoising of Gaussian-process sample paths."""

from ._suregp import *  # noqa: F401,F403
from ._suregp import __doc__  # noqa: F401
