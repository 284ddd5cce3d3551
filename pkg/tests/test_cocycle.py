"""Two-cocycle sign conventions and restriction tests."""

import pytest
from hypothesis import given, strategies as st

from latvoa.cocycle import TwoCocycle, restricted_cocycle, standard_cocycle
from latvoa.lattice import build_a_tensor, inner, sublattice_n

vec2 = st.lists(st.integers(-3, 3), min_size=2, max_size=2).map(tuple)


def test_table_values_are_signs():
    eps = standard_cocycle(build_a_tensor(3, 1))
    for row in eps.table:
        for v in row:
            assert v in (1, -1)


def test_upper_triangular_convention():
    # +1 on and above the diagonal; Gram parity strictly below.
    lat = build_a_tensor(3, 1)
    eps = standard_cocycle(lat)
    assert eps.table == ((1, 1), (-1, 1))
    assert standard_cocycle(build_a_tensor(2, 2)).table == (
        (1, 1), (1, 1))


@given(vec2, vec2)
def test_commutator_identity(x, y):
    lat = build_a_tensor(3, 1)
    eps = standard_cocycle(lat)
    assert eps.eval(x, y) * eps.eval(y, x) == (-1) ** inner(x, y, lat)


@given(vec2, vec2, vec2)
def test_bimultiplicative(x, y, z):
    lat = build_a_tensor(3, 1)
    eps = standard_cocycle(lat)
    xy = tuple(a + b for a, b in zip(x, y))
    assert eps.eval(xy, z) == eps.eval(x, z) * eps.eval(y, z)
    assert eps.eval(z, xy) == eps.eval(z, x) * eps.eval(z, y)


@given(vec2)
def test_zero_argument_is_trivial(x):
    eps = standard_cocycle(build_a_tensor(3, 1))
    zero = (0, 0)
    assert eps.eval(zero, x) == 1
    assert eps.eval(x, zero) == 1


def test_restriction_agrees_with_ambient():
    for (n, l) in [(2, 2), (3, 2), (2, 3)]:
        sub = sublattice_n(n, l)
        amb_eps = standard_cocycle(sub.ambient)
        sub_eps = restricted_cocycle(amb_eps, sub)
        r = sub.lattice.rank
        coords = [tuple(c) for c in _small_coords(r)]
        for x in coords:
            for y in coords:
                assert sub_eps.eval(x, y) == amb_eps.eval(sub.embed(x), sub.embed(y))


def _small_coords(rank):
    vals = (-1, 0, 1, 2)
    if rank == 1:
        return [(v,) for v in vals]
    out = []
    for v in vals:
        for w in vals:
            out.append((v, w) + (0,) * (rank - 2))
    return out


def test_table_entry_validation():
    with pytest.raises(ValueError):
        TwoCocycle(((1, 2), (1, 1)))
