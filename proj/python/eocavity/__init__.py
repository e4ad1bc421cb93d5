"""Design and analysis toolkit for a triply resonant cavity electro-optic
microwave-optical transducer.

Everything is implemented in the C++ core; this package re-exports the
compiled bindings.
"""

from eocavity._eocavity import *  # noqa: F401,F403
from eocavity._eocavity import __version__  # noqa: F401
