from ._qlve import *  # noqa: F401,F403
from ._qlve import __doc__  # noqa: F401
