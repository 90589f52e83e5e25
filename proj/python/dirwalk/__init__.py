"""Prime-indexed Dirichlet character walks.

Character tables over a prime modulus, residue statistics of consecutive
primes, random-walk partial sums with their block ensembles, and Dirichlet
L-function evaluation with consistency checks.  The heavy lifting lives in
the compiled extension ``dirwalk._core``; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
