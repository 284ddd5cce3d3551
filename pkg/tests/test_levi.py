"""Composition blocks, centers, and relative commutants."""

import pytest

from latvoa.lattice import GuardError
from latvoa.levi import (
    Composition,
    colored_partition_dims,
    convolve_dims,
    factor_block_commutant,
    levi_realization,
    relative_parafermion,
)
from latvoa.states import StateVector

import oracles
from helpers import ambient


def test_composition_validation_and_sums():
    comp = Composition((1, 2))
    assert comp.total == 3
    assert comp.partial_sums == (0, 1, 3)
    assert comp.block_rows() == [[], [2]]
    assert comp.factor_ranges() == [[1], [2, 3]]
    with pytest.raises(ValueError):
        Composition(())
    with pytest.raises(ValueError):
        Composition((1, 0))


def test_levi_realization_guards():
    voa = ambient(2, 2, 3)
    with pytest.raises(GuardError):
        levi_realization(voa, Composition((1,)), 2)
    with pytest.raises(GuardError):
        levi_realization(voa, Composition((2,)), 1)
    with pytest.raises(GuardError):
        levi_realization(voa, Composition((1, 2)), 2)  # rank 2 != 4


def test_levi_realization_block_and_center_shapes():
    voa = ambient(3, 2, 3)
    real = levi_realization(voa, Composition((1, 2)), 2)
    assert real.blocks[0] == {"e": [], "f": [], "h": []}
    assert len(real.blocks[1]["e"]) == 1
    assert real.center_directions == ((2, 1, 2, 1),)
    assert len(real.generators()) == 4


def test_levi_center_of_all_ones_is_full_cartan():
    voa = ambient(2, 2, 3)
    real = levi_realization(voa, Composition((1, 1)), 2)
    assert real.center_directions == ((1, 1),)
    assert all(not blk["e"] for blk in real.blocks)


def test_levi_center_empty_for_single_part():
    voa = ambient(2, 2, 3)
    real = levi_realization(voa, Composition((2,)), 2)
    assert real.center_directions == ()
    assert len(real.blocks[0]["e"]) == 1


def test_center_is_orthogonal_to_block_cartans():
    voa = ambient(3, 2, 3)
    real = levi_realization(voa, Composition((1, 2)), 2)
    for h in real.center_directions:
        for blk in real.blocks:
            for hv in blk["h"]:
                assert voa.heisenberg_mode(h, 1, hv) == StateVector()
                assert voa.heisenberg_mode(h, 0, hv) == StateVector()


def test_all_ones_composition_gives_parafermion_dims():
    voa = ambient(2, 2, 4)
    sub = relative_parafermion(voa, Composition((1, 1)), 2, 4)
    assert sub.integer_dims(4) == oracles.ising_vacuum(4)


def test_single_part_composition_gives_vacuum_line():
    voa = ambient(2, 2, 4)
    sub = relative_parafermion(voa, Composition((2,)), 2, 4)
    assert sub.integer_dims(4) == [1, 0, 0, 0, 0]


def test_mixed_composition_matches_minimal_model_dims():
    voa = ambient(3, 2, 3)
    sub = relative_parafermion(voa, Composition((1, 2)), 2, 3)
    assert sub.integer_dims(3) == oracles.partitions_min_part(2, 3)


def test_factor_block_commutant_matches_relative_parafermion():
    # the two realizations of the same composition agree in graded dims
    comp = Composition((1, 1))
    upright = relative_parafermion(ambient(2, 2, 4), comp, 2, 4)
    transposed = factor_block_commutant(ambient(2, 2, 4), comp, 2, 4)
    assert upright.integer_dims(4) == transposed.integer_dims(4)


def test_factor_block_commutant_rank_guard():
    with pytest.raises(GuardError):
        factor_block_commutant(ambient(2, 2, 3), Composition((1, 2)), 2, 3)


def test_colored_partition_dims_match_oracle():
    for colors in (1, 2, 3):
        assert (colored_partition_dims(colors, 8)
                == oracles.colored_partitions(colors, 8))


def test_convolve_dims_matches_series_mul():
    a = [1, 3, 4, 7, 13]
    b = [1, 0, 1, 1, 2]
    assert convolve_dims(a, b, 4) == oracles.series_mul(a, b, 4)
    assert convolve_dims(a, b, 2) == oracles.series_mul(a, b, 2)
