"""heightlab: rational point counts, growth fits and local densities on
Fano varieties over Q."""

from ._heightlab import *  # noqa: F401,F403
from ._heightlab import __version__  # noqa: F401
