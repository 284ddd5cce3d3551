"""State encoding, StateVector arithmetic, and basis enumeration tests."""

import pytest
from hypothesis import given, strategies as st

from latvoa.lattice import GuardError, build_a_tensor
from latvoa.rat import Rat
from latvoa.states import (GradedBasis, StateVector, enumerate_basis,
                           make_state, state_degree, state_weight, sv,
                           sv_from_terms, vacuum_state)

import oracles

A1 = build_a_tensor(2, 1)


def test_make_state_sorts_fock_descending():
    s = make_state([(1, 0), (3, 1), (2, 0)], (0,))
    assert s[0] == ((3, 1), (2, 0), (1, 0))
    assert state_degree(s) == 6


def test_make_state_normalizes_integral_coords():
    s = make_state((), (Rat(4, 2),))
    assert s[1] == (2,)
    assert isinstance(s[1][0], int)


def test_state_weight_combines_degree_and_norm():
    s = make_state([(2, 0)], (1,))
    # fock degree 2 plus half of (alpha, alpha) = 1
    assert state_weight(s, A1) == 3
    assert state_weight(vacuum_state(1), A1) == 0


def test_statevector_cancellation():
    v = sv(vacuum_state(1), Rat(1, 3))
    v.add_term(vacuum_state(1), Rat(-1, 3))
    assert not v
    w = sv_from_terms([(vacuum_state(1), Rat(1)), (vacuum_state(1), Rat(2))])
    assert w[vacuum_state(1)] == 3


def test_statevector_scaled_zero_is_empty():
    v = sv(vacuum_state(1), 5)
    assert v.scaled(0) == StateVector()
    assert v.scaled(Rat(1, 5))[vacuum_state(1)] == 1


def test_max_weight_and_restriction():
    v = StateVector()
    v.add_term(make_state((), (1,)), Rat(1))       # weight 1
    v.add_term(make_state([(2, 0)], (0,)), Rat(1))  # weight 2
    assert v.max_weight(A1) == 2
    r = v.restricted_to_weight(1, A1)
    assert list(r) == [make_state((), (1,))]
    assert StateVector().max_weight(A1) is None


def test_enumerate_basis_matches_theta_eta_oracle():
    basis = enumerate_basis(A1, None, 6)
    assert basis.integer_dims() == oracles.lattice_graded_dims([[2]], 6)


def test_enumerate_basis_rank2():
    lat = build_a_tensor(3, 1)
    basis = enumerate_basis(lat, None, 4)
    assert basis.integer_dims() == oracles.lattice_graded_dims(
        [[2, -1], [-1, 2]], 4)


def test_basis_blocks_are_sorted_and_indexed():
    basis = enumerate_basis(A1, None, 4)
    seen = []
    for w in basis.weights:
        block = basis.block(w)
        assert block == sorted(block, key=lambda s: (s[1], s[0]))
        seen.extend(block)
    assert [basis.index[s] for s in seen] == list(range(len(basis)))


def test_shifted_basis_has_fractional_weights():
    basis = enumerate_basis(A1, (Rat(1, 2),), 2)
    ws = set(basis.weights)
    assert all(4 * w == int(4 * w) for w in ws)
    assert min(ws) == Rat(1, 4)


def test_max_states_guard():
    with pytest.raises(GuardError):
        enumerate_basis(A1, None, 6, max_states=10)


def test_cutoff_validation():
    with pytest.raises(ValueError):
        GradedBasis(A1, None, -1)


coeffs = st.integers(-6, 6).map(lambda n: Rat(n, 3))


@given(coeffs, coeffs, coeffs)
def test_add_vector_is_linear(a, b, scale):
    s1 = make_state((), (1,))
    s2 = make_state([(1, 0)], (0,))
    v = sv_from_terms([(s1, a)])
    w = sv_from_terms([(s1, b), (s2, b)])
    out = StateVector(v)
    out.add_vector(w, scale)
    assert out.get(s1, Rat(0)) == a + b * scale
    assert out.get(s2, Rat(0)) == b * scale
    assert all(c for c in out.values())
