"""Mode action, Virasoro certification, and Borcherds-identity tests."""

import pytest
from hypothesis import given, settings, strategies as st

from latvoa.elements import lattice_conformal
from latvoa.lattice import GuardError, build_a_tensor
from latvoa.rat import Rat
from latvoa.states import StateVector, make_state, sv, vacuum_state
from latvoa.vertex import VOA

from helpers import ambient


def a1(cutoff=5):
    return ambient(2, 1, cutoff)


def test_heisenberg_canonical_commutator():
    voa = a1()
    h = (1,)
    created = voa.heis_vector(h)
    assert voa.heisenberg_mode(h, 1, created) == sv(vacuum_state(1), 2)
    # annihilation across distinct mode numbers vanishes
    assert not voa.heisenberg_mode(h, 2, created)


def test_heisenberg_zero_mode_reads_point():
    voa = a1()
    e = voa.exp_vector((1,))
    assert voa.heisenberg_mode((1,), 0, e) == e.scaled(2)


def test_heis_vector_rational_direction():
    voa = a1()
    v = voa.heis_vector((Rat(1, 2),))
    state = make_state(((1, 0),), (0,))
    assert v == StateVector({state: Rat(1, 2)})


def test_exponential_ope_ladder():
    """Y(e^a, z) e^{-a} = eps * z^-2 exp(sum a(-n) z^n / n) 1, term by term."""
    voa = a1()
    e = voa.exp_vector((1,))
    f = voa.exp_vector((-1,))
    eps = voa.cocycle.eval((1,), (-1,))
    vac = vacuum_state(1)
    assert voa.mode(e, 2, f) == StateVector()
    assert voa.mode(e, 1, f) == sv(vac, eps)
    assert voa.mode(e, 0, f) == StateVector(
        {make_state(((1, 0),), (0,)): Rat(eps)})
    expected = StateVector({
        make_state(((1, 0), (1, 0)), (0,)): Rat(eps, 2),
        make_state(((2, 0),), (0,)): Rat(eps, 2),
    })
    assert voa.mode(e, -1, f) == expected


def test_exponential_wall():
    # (e^a)_m e^a vanishes for m >= -2 because (a,a) = 2 shifts the ladder;
    # the first surviving mode lands on e^{2a}.
    voa = a1()
    e = voa.exp_vector((1,))
    for m in range(-2, 2):
        assert not voa.mode(e, m, e)
    eps = voa.cocycle.eval((1,), (1,))
    assert voa.mode(e, -3, e) == sv(make_state((), (2,)), eps)


def test_vacuum_is_identity_for_minus_one():
    voa = a1()
    for w in voa.basis.weights:
        for s in voa.basis.block(w):
            assert voa.mode(voa.vacuum_vector(), -1, sv(s)) == sv(s)
            assert not voa.mode(voa.vacuum_vector(), 0, sv(s))


def test_translation_of_exponential():
    voa = a1()
    e = voa.exp_vector((1,))
    assert voa.translate(e) == voa.heisenberg_mode((1,), -1, e)


def test_translation_derivative_property():
    voa = a1()
    e = voa.exp_vector((1,))
    f = voa.exp_vector((-1,))
    te = voa.translate(e)
    for m in (-1, 0, 1, 2):
        lhs = voa.mode(te, m, f)
        rhs = voa.mode(e, m - 1, f).scaled(-m)
        assert lhs == rhs


def test_lattice_conformal_grades_basis():
    voa = a1()
    omega = lattice_conformal(voa)
    for w in voa.basis.weights:
        if w > 3:
            continue
        for s in voa.basis.block(w):
            assert voa.mode(omega, 1, sv(s)) == sv(s, w)


def test_virasoro_check_rank1():
    voa = ambient(2, 1, 7)
    report = voa.virasoro_check(lattice_conformal(voa), expected_c=1)
    assert report["ok"]
    assert report["c"] == 1


def test_virasoro_check_rank2():
    voa = ambient(3, 1, 6)
    report = voa.virasoro_check(lattice_conformal(voa), expected_c=2,
                                weight_bound=3)
    assert report["ok"]
    assert report["c"] == 2


def test_virasoro_check_flags_non_conformal_vector():
    voa = ambient(2, 1, 7)
    fake = lattice_conformal(voa).scaled(Rat(1, 2))
    report = voa.virasoro_check(fake)
    assert not report["ok"]


def test_virasoro_check_cutoff_guard():
    voa = a1()
    with pytest.raises(ValueError):
        voa.virasoro_check(lattice_conformal(voa), weight_bound=4)


def test_commutator_check_guard():
    voa = a1()
    e = voa.exp_vector((1,))
    with pytest.raises(GuardError):
        voa.commutator_check(e, -3, e, -3, e)


def test_commutator_check_exhaustive_small():
    voa = a1()
    states = [sv(s) for w in voa.basis.weights if w <= 2
              for s in voa.basis.block(w)]
    checked = 0
    for u in states[:6]:
        for v in states[:6]:
            for w in states[:6]:
                for p, q in [(0, 0), (1, 0), (-1, 1), (2, -1)]:
                    try:
                        assert voa.commutator_check(u, p, v, q, w)
                        checked += 1
                    except GuardError:
                        pass
    assert checked > 100


def test_mode_truncation_is_flagged():
    voa = a1()
    e = voa.exp_vector((1,))
    out, truncated = voa.mode_flagged(e, -6, e)
    assert truncated
    assert not out
    out2, trunc2 = voa.heisenberg_mode_flagged((1,), -6, voa.vacuum_vector())
    assert trunc2 and not out2


small_state = st.sampled_from(
    [make_state((), (0,)), make_state((), (1,)), make_state((), (-1,)),
     make_state(((1, 0),), (0,)), make_state(((1, 0),), (1,)),
     make_state(((2, 0),), (0,)), make_state(((1, 0), (1, 0)), (0,))])


@settings(max_examples=60, deadline=None)
@given(small_state, small_state, small_state,
       st.integers(-2, 2), st.integers(-2, 2))
def test_borcherds_commutator_property(us, vs, ws, p, q):
    voa = a1()
    u, v, w = sv(us), sv(vs), sv(ws)
    try:
        assert voa.commutator_check(u, p, v, q, w)
    except GuardError:
        pass
