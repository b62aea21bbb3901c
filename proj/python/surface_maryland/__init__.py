"""Discrete Schrodinger operator with a surface Maryland potential.

Lattice Green functions, the Cayley-transform resolvent series, generalized
eigenfunctions and scattering amplitudes, surface band structures for
rational frequencies, and exact-diagonalization oracles.
"""

try:
    from ._maryland import *  # noqa: F401,F403  (wheel layout)
    from ._maryland import __doc__ as _core_doc  # noqa: F401
except ImportError:  # in-tree builds put the extension next to the package
    from _maryland import *  # noqa: F401,F403
