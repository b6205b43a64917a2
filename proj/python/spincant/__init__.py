"""Spin-cantilever dynamics toolkit.

Thin re-export of the compiled `_core` module: spinor Fock-basis evolution
under a cyclic inversion drive, position-density cat analysis, the classical
many-spin limit, and the collapse/jump Monte Carlo, plus config-driven runs.
"""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
    from ._core import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout via PYTHONPATH
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
