"""Bimultiplicative two-cocycles on an even lattice, valued in {+1, -1}.

The twisted group algebra multiplication e_x e^y = eps(x, y) e^{x+y} needs a
sign function with commutator eps(x,y)eps(y,x) = (-1)^((x,y)).  A
bimultiplicative eps is determined by its values on basis pairs, and
bimultiplicativity makes the two-cocycle identity hold for free; the engine
uses the upper-triangular convention (+1 on and above the diagonal).
Evaluation only depends on coordinate parities, so it runs on bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import EmbeddedLattice, GramLattice


@dataclass(frozen=True)
class TwoCocycle:
    """A bimultiplicative sign function given by its basis-pair table."""

    table: tuple  # tuple of tuples with entries +1/-1

    _neg_masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        masks = []
        for row in self.table:
            m = 0
            for j, t in enumerate(row):
                if t == -1:
                    m |= 1 << j
                elif t != 1:
                    raise ValueError("cocycle table entries must be +1 or -1")
            masks.append(m)
        object.__setattr__(self, "_neg_masks", tuple(masks))

    @property
    def rank(self) -> int:
        return len(self.table)

    def eval(self, x, y) -> int:
        """eps(x, y) for integer coordinate vectors x, y."""
        ybits = 0
        for j, yj in enumerate(y):
            if yj & 1:
                ybits |= 1 << j
        parity = 0
        masks = self._neg_masks
        for i, xi in enumerate(x):
            if xi & 1:
                parity ^= _parity(masks[i] & ybits)
        return -1 if parity else 1


def _parity(n: int) -> int:
    return bin(n).count("1") & 1


def standard_cocycle(lattice: GramLattice) -> TwoCocycle:
    """Upper-triangular convention: table[i][j] = +1 if i <= j else (-1)^gram[i][j]."""
    table = tuple(
        tuple(1 if i <= j else (-1) ** (lattice.gram[i][j] % 2) for j in range(lattice.rank))
        for i in range(lattice.rank)
    )
    return TwoCocycle(table)


def restricted_cocycle(ambient_cocycle: TwoCocycle, sub: EmbeddedLattice) -> TwoCocycle:
    """The ambient cocycle pulled back to a sublattice basis.

    The result is again bimultiplicative (in sublattice coordinates) and has
    the right commutator for the sublattice Gram matrix, but is generally not
    upper-triangular: computations inside a sublattice must use this table,
    not a freshly built one, to stay consistent with the ambient algebra.
    """
    basis = sub.embedding
    table = tuple(
        tuple(ambient_cocycle.eval(u, v) for v in basis) for u in basis
    )
    return TwoCocycle(table)
