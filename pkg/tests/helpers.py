"""Shared, cached computation contexts for the test suite.

VOA construction and mode memoization dominate test runtime, so the handful
of lattices the tests revisit are built once per session here.
"""

from functools import lru_cache

from latvoa.lattice import build_a_tensor
from latvoa.maps import difference_voa
from latvoa.vertex import VOA


@lru_cache(maxsize=None)
def ambient(n, l, cutoff):
    """V over the full tensor-power root lattice."""
    return VOA(build_a_tensor(n, l), cutoff)


@lru_cache(maxsize=None)
def dvoa(n, l, cutoff):
    """Standalone difference-sublattice algebra with the inherited cocycle."""
    return difference_voa(n, l, cutoff)


def dims(sub, upto):
    """Integer-weight dimension profile [dim_0, ..., dim_upto]."""
    return [sub.dim(w) for w in range(upto + 1)]
