"""Current algebras, Sugawara vectors, and coset Virasoro generators."""

import pytest

from latvoa.elements import (
    coset_conformal,
    coset_virasoro_candidate,
    diagonal_currents,
    full_current_basis,
    lattice_conformal,
    printed_untransposed_virasoro,
    quadratic_fock,
    quadratic_pair_generator,
    quadratic_run_generator,
    repeated_minus_one_power,
    root_vector,
    row_difference,
    sublattice_diff,
    sugawara,
    transposed_cubic,
)
from latvoa.rat import Rat
from latvoa.states import StateVector, sv

from helpers import ambient, dvoa


def test_root_vector_coordinates():
    assert root_vector(3, 2, 2, 1) == (0, 1, 0, 0)
    assert root_vector(3, 2, 1, 2) == (0, 0, 1, 0)
    assert root_vector(2, 3, 1, 3) == (0, 0, 1)


def test_row_difference_coordinates():
    assert row_difference(2, 2, 1, 1, 2) == (1, -1)
    assert row_difference(2, 3, 1, 1, 3) == (1, 0, -1)
    assert row_difference(3, 2, 2, 2, 1) == (0, -1, 0, 1)


def test_sublattice_diff_runs():
    d23 = sublattice_diff(2, 3)
    assert d23(1, 1, 2) == (1, 0)
    assert d23(1, 1, 3) == (1, 1)
    assert d23(1, 3, 1) == (-1, -1)
    d32 = sublattice_diff(3, 2)
    assert d32(1, 1, 2) == (1, 0)
    assert d32(2, 1, 2) == (0, 1)


def test_diagonal_currents_read_off_level():
    for l, cut in ((2, 4), (3, 4)):
        voa = ambient(2, l, cut)
        gens = diagonal_currents(voa, 2, l)
        e, f, h = gens["e"][0], gens["f"][0], gens["h"][0]
        vac = voa.vacuum_vector()
        assert voa.mode(e, 1, f) == vac.scaled(l)
        assert voa.mode(e, 0, f) == h
        assert voa.mode(h, 1, h) == vac.scaled(2 * l)
        assert not voa.mode(e, 0, e)
        assert not voa.mode(e, 1, e)


def test_full_current_basis_size_and_weight():
    for n, l, dim in ((2, 2, 3), (3, 2, 8)):
        voa = ambient(n, l, 4)
        basis = full_current_basis(voa, n, l)
        assert len(basis) == dim
        omega = lattice_conformal(voa)
        for x in basis:
            assert x
            assert voa.mode(omega, 1, x) == x


def test_sugawara_pairing_and_charge():
    voa = ambient(2, 2, 6)
    currents = full_current_basis(voa, 2, 2)
    sug, pairing = sugawara(voa, currents, level=2, dual_coxeter=2)
    assert pairing[0][0] == 0 and pairing[0][1] == 2
    assert pairing[2][2] == 4
    for a in range(3):
        for b in range(3):
            assert pairing[a][b] == pairing[b][a]
    report = voa.virasoro_check(sug, expected_c=Rat(3, 2), weight_bound=3)
    assert report["ok"] and report["c"] == Rat(3, 2)


def test_sugawara_rejects_non_current_input():
    voa = ambient(2, 1, 4)
    junk = quadratic_fock(voa, (1,))
    with pytest.raises(ValueError):
        sugawara(voa, [junk], level=2, dual_coxeter=2)


def test_coset_conformal_is_ising_vector():
    voa = ambient(2, 2, 6)
    currents = full_current_basis(voa, 2, 2)
    sug, _ = sugawara(voa, currents, level=2, dual_coxeter=2)
    omega = lattice_conformal(voa)
    coset, report = coset_conformal(voa, omega, sug, currents)
    assert report["semi_conformal"]
    assert not report["failures"]
    check = voa.virasoro_check(coset, expected_c=Rat(1, 2), weight_bound=3)
    assert check["ok"]
    # the difference is the minus-sign quadratic vector, the plus-sign
    # partner being the row generator (both are c = 1/2, they commute)
    assert coset == quadratic_run_generator(voa, 2, 1, 1)
    plus = coset_virasoro_candidate(voa, 2, 2, 1)
    for m in (0, 1, 2, 3):
        assert not voa.mode(coset, m, plus)


def test_candidate_commutes_with_diagonal_heisenberg():
    voa = ambient(2, 2, 6)
    cand = coset_virasoro_candidate(voa, 2, 2, 1)
    for m in (0, 1, 2):
        assert not voa.heisenberg_mode((1, 1), m, cand)


def test_candidate_index_guard():
    voa = dvoa(2, 2, 4)
    with pytest.raises(ValueError):
        coset_virasoro_candidate(voa, 2, 2, 2, sublattice_diff(2, 2))
    with pytest.raises(ValueError):
        printed_untransposed_virasoro(voa, 2, 2, 2, sublattice_diff(2, 2))


def test_transposed_cubic_vanishes_for_two_rows():
    voa_t = dvoa(2, 2, 5)
    assert not transposed_cubic(voa_t, 2, 2, 1, sublattice_diff(2, 2))


def test_quadratic_generators_match_at_self_transpose():
    voa = dvoa(2, 2, 5)
    d = sublattice_diff(2, 2)
    assert (quadratic_run_generator(voa, 2, 1, 1, d)
            == quadratic_pair_generator(voa, 2, 1, 1, d))
    with pytest.raises(ValueError):
        quadratic_run_generator(voa, 2, 1, 2, d)


def test_quadratic_run_generator_is_virasoro():
    # single-run vector in the two-factor difference algebra: an Ising piece
    voa = dvoa(3, 2, 7)
    gen = quadratic_run_generator(voa, 3, 1, 1, sublattice_diff(3, 2))
    report = voa.virasoro_check(gen, expected_c=Rat(1, 2), weight_bound=3)
    assert report["ok"]


def test_repeated_minus_one_power_matches_quadratic():
    voa = ambient(2, 1, 4)
    h = voa.heis_vector((1,))
    assert repeated_minus_one_power(voa, h, 1) == quadratic_fock(voa, (1,))
    assert repeated_minus_one_power(voa, h, 0) == h
