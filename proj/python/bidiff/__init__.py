"""Python interface to the bidiff C++ core.

Numerical construction of intrinsic second-kind bidifferentials on elliptic
and real-branch hyperelliptic curves, the projective structures their
diagonal jets induce, and finite-difference scans of the induced sections
over moduli.
"""

from bidiff._core import *  # noqa: F401,F403

__version__ = "0.1.0"
