"""Block subalgebras cut out by a composition, and relative commutants.

A composition (l_1, ..., l_s) of l selects a block subalgebra of the diagonal
rank l-1 current algebra living in n copies of the rank l-1 root lattice:
one diagonal sl_{l_k} block per part with l_k >= 2 (simple-root rows strictly
inside the part), plus the center — the Cartan directions orthogonal to every
block Cartan.  The relative commutant of that subalgebra inside the full
diagonal current subalgebra generalizes the plain Heisenberg commutant
(composition all ones) and degenerates to the vacuum line (single part).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .commutant import (Subspace, commutant_of_generators,
                        generated_subalgebra, sparse_nullspace)
from .elements import block_currents, diagonal_currents
from .lattice import GuardError, basis_index
from .rat import Rat
from .states import StateVector
from .vertex import VOA


@dataclass(frozen=True)
class Composition:
    """An ordered tuple of positive parts."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts or any(p < 1 for p in parts):
            raise ValueError("composition needs nonempty positive parts")

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def partial_sums(self) -> tuple:
        sums = [0]
        for p in self.parts:
            sums.append(sums[-1] + p)
        return tuple(sums)

    def block_rows(self) -> list:
        """Per part, the simple-root rows strictly inside it (empty when the
        part has size 1)."""
        s = self.partial_sums
        return [list(range(s[k] + 1, s[k + 1])) for k in range(len(self.parts))]

    def factor_ranges(self) -> list:
        """Per part, the tensor-factor indices it covers (for the transposed
        realization of the same block structure)."""
        s = self.partial_sums
        return [list(range(s[k] + 1, s[k + 1] + 1))
                for k in range(len(self.parts))]


@dataclass
class LeviRealization:
    """Generators of a composition's block subalgebra inside a given algebra.

    ``blocks[k]`` is the {"e","f","h"} current dict of part k (all lists
    empty when the part has size 1); ``center_directions`` is an integral
    primitive basis, in ambient coordinates, of the Cartan directions
    orthogonal to every block Cartan.
    """

    voa: VOA
    composition: Composition
    n: int
    blocks: list
    center_directions: tuple

    def generators(self) -> list:
        """All block currents plus the center Heisenberg states."""
        out = []
        for blk in self.blocks:
            for key in ("e", "f", "h"):
                out.extend(blk[key])
        out.extend(self.voa.heis_vector(h) for h in self.center_directions)
        return out


def _cartan_matrix(rank: int):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
             for j in range(rank)] for i in range(rank)]


def _primitive(vec):
    denom = 1
    for x in vec:
        denom = denom * int(x.denominator) // gcd(denom, int(x.denominator))
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def levi_realization(voa: VOA, comp: Composition, n: int) -> LeviRealization:
    """Build the block currents and center of ``comp`` inside ``voa``.

    ``voa`` must be the algebra of n copies of the rank l-1 root lattice,
    l = comp.total.  Block k (size >= 2) contributes the diagonal simple
    currents of its interior rows over all n tensor factors; the center is
    solved exactly as the orthogonal complement of the block Cartans inside
    the full diagonal Cartan.
    """
    l = comp.total
    if l < 2 or n < 2:
        raise GuardError("composition total and copy count must be >= 2")
    if voa.lattice.rank != (l - 1) * n:
        raise GuardError(
            f"algebra rank {voa.lattice.rank} does not match {n} copies "
            f"of rank {l - 1}")
    blocks = []
    used_rows = []
    for rows in comp.block_rows():
        if rows:
            blocks.append(block_currents(voa, l, n, rows, range(1, n + 1)))
            used_rows.extend(rows)
        else:
            blocks.append({"e": [], "f": [], "h": []})
    # Orthogonality to the diagonal Cartan of row i' reads
    #   sum_i c_i A_{i i'} = 0  (A the rank l-1 Cartan matrix),
    # since every tensor factor contributes the same pairing.
    cartan = _cartan_matrix(l - 1)
    rows = [{i: Rat(cartan[i][rp - 1]) for i in range(l - 1) if cartan[i][rp - 1]}
            for rp in used_rows]
    kernel = sparse_nullspace(rows, l - 1)
    center = []
    dense = [_primitive([k.get(i, Rat(0)) for i in range(l - 1)])
             for k in kernel]
    for coeffs in sorted(dense):
        amb = [0] * voa.lattice.rank
        for i, c in enumerate(coeffs, start=1):
            if c:
                for j in range(1, n + 1):
                    amb[basis_index(l, i, j)] += c
        center.append(tuple(amb))
    return LeviRealization(voa, comp, n, blocks, tuple(center))


def diagonal_subalgebra(voa: VOA, l: int, n: int, cutoff: int) -> Subspace:
    """The subalgebra generated by the full diagonal currents (all rows,
    all factors): the level-n quotient realization of the rank l-1 currents."""
    gens = diagonal_currents(voa, l, n)
    return generated_subalgebra(voa, gens["e"] + gens["f"] + gens["h"], cutoff)


def relative_parafermion(voa: VOA, comp: Composition, n: int,
                         cutoff: int) -> Subspace:
    """Commutant of the composition's block subalgebra, taken inside the
    full diagonal current subalgebra.

    Two stages: the generated subalgebra of the diagonal currents, then the
    kernel of all block-generator and center-Heisenberg modes, intersected.
    For the all-ones composition this is the plain graded commutant of the
    diagonal Heisenberg; for the single-part composition it is the vacuum
    line.
    """
    real = levi_realization(voa, comp, n)
    inside = diagonal_subalgebra(voa, comp.total, n, cutoff)
    gens = real.generators()
    kernel = commutant_of_generators(voa, gens, cutoff)
    return kernel.intersect(inside)


def factor_block_commutant(voa: VOA, comp: Composition, n: int,
                           cutoff: int) -> Subspace:
    """The untransposed realization of the same commutant: the fully
    diagonal currents' kernel inside the tensor product of per-part
    subalgebras.

    Here ``voa`` holds comp.total copies of the rank n-1 lattice; each part
    generates its own diagonal current subalgebra over its factor range, and
    the commutant conditions come from the currents diagonal across all
    factors.  This matches :func:`relative_parafermion` of the same
    composition in graded dimensions.
    """
    l = comp.total
    if voa.lattice.rank != (n - 1) * l:
        raise GuardError(
            f"algebra rank {voa.lattice.rank} does not match {l} copies "
            f"of rank {n - 1}")
    gens = []
    for factors in comp.factor_ranges():
        blk = block_currents(voa, n, l, range(1, n), factors)
        gens.extend(blk["e"] + blk["f"] + blk["h"])
    inside = generated_subalgebra(voa, gens, cutoff)
    diag = diagonal_currents(voa, n, l)
    kernel = commutant_of_generators(
        voa, diag["e"] + diag["f"] + diag["h"], cutoff)
    return kernel.intersect(inside)


def colored_partition_dims(colors: int, upto: int) -> list:
    """Graded dimensions of a rank ``colors`` Heisenberg Fock space:
    partitions with colored parts."""
    dims = [1] + [0] * upto
    for _ in range(colors):
        for part in range(1, upto + 1):
            for w in range(part, upto + 1):
                dims[w] += dims[w - part]
    return dims


def convolve_dims(a: list, b: list, upto: int) -> list:
    """Graded dimension of a tensor product, truncated."""
    out = [0] * (upto + 1)
    for i, x in enumerate(a[:upto + 1]):
        if not x:
            continue
        for j, y in enumerate(b[:upto + 1 - i]):
            out[i + j] += x * y
    return out
