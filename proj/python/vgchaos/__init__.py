"""Variance-Gamma approximation on the second Wiener chaos."""

try:
    from ._vgchaos import *  # noqa: F401,F403  (installed package layout)
    from ._vgchaos import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension on PYTHONPATH
    from _vgchaos import *  # noqa: F401,F403
    from _vgchaos import __version__  # noqa: F401
