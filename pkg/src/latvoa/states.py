"""Graded state spaces for a lattice vertex algebra and its shifted modules.

A basis state is a plain 2-tuple ``(fock, point)``:

* ``fock``  — tuple of ``(m, dir)`` pairs, each standing for a creation mode
  of degree m >= 1 along basis direction ``dir``; kept sorted descending so
  equal monomials compare equal.
* ``point`` — coordinate tuple of the lattice (or shifted-coset) point; int
  entries where integral, exact rationals otherwise.

The conformal weight of a state is (sum of mode degrees) + (point, point)/2.
Vectors are sparse dicts mapping states to exact rational coefficients.
"""

from __future__ import annotations

from functools import lru_cache

from .lattice import GramLattice, GuardError, inner, points_up_to_norm
from .rat import Rat, is_integral

DEFAULT_MAX_STATES = 2_000_000


def make_state(fock, point):
    """Canonical basis state: fock sorted descending, integral coords as int."""
    return (
        tuple(sorted(fock, reverse=True)),
        tuple(int(c) if is_integral(c) else Rat(c) for c in point),
    )


def vacuum_state(rank: int):
    return ((), (0,) * rank)


def state_degree(state) -> int:
    return sum(m for m, _ in state[0])


def state_weight(state, lattice: GramLattice):
    """Conformal weight: Fock degree plus half the point norm."""
    p = state[1]
    w = inner(p, p, lattice) / 2 + state_degree(state)
    return int(w) if is_integral(w) else w


def state_h_weight(state, h, lattice: GramLattice):
    """Eigenvalue of the zero mode of direction h: (h, point)."""
    return inner(h, state[1], lattice)


class StateVector(dict):
    """Sparse exact-rational vector over basis states (no stored zeros)."""

    def add_term(self, state, coeff):
        if not coeff:
            return
        cur = self.get(state)
        if cur is None:
            self[state] = coeff
        else:
            cur = cur + coeff
            if cur:
                self[state] = cur
            else:
                del self[state]

    def add_vector(self, other, scale=1):
        if scale:
            for state, coeff in other.items():
                self.add_term(state, coeff * scale)
        return self

    def scaled(self, scale) -> "StateVector":
        if not scale:
            return StateVector()
        return StateVector({s: c * scale for s, c in self.items()})

    def restricted_to_weight(self, weight, lattice) -> "StateVector":
        return StateVector(
            {s: c for s, c in self.items() if state_weight(s, lattice) == weight}
        )

    def max_weight(self, lattice):
        return max((state_weight(s, lattice) for s in self), default=None)


def sv(state, coeff=1) -> StateVector:
    out = StateVector()
    out.add_term(state, Rat(coeff))
    return out


def sv_from_terms(terms) -> StateVector:
    out = StateVector()
    for state, coeff in terms:
        out.add_term(state, coeff)
    return out


@lru_cache(maxsize=64)
def _fock_tuples_by_degree(rank: int, maxdeg: int):
    """All Fock monomials of degree <= maxdeg with ``rank`` directions, by degree."""
    results = [[] for _ in range(maxdeg + 1)]

    def rec(prefix, deg, last_m, last_d):
        results[deg].append(tuple(prefix))
        top = min(last_m, maxdeg - deg)
        for m in range(top, 0, -1):
            dstart = last_d if m == last_m else rank - 1
            for d in range(dstart, -1, -1):
                prefix.append((m, d))
                rec(prefix, deg + m, m, d)
                prefix.pop()

    rec([], 0, maxdeg, rank - 1)
    return tuple(tuple(block) for block in results)


class GradedBasis:
    """Exhaustive basis of all states of weight <= cutoff, grouped by weight.

    ``shift`` selects a coset of the lattice (a module of the vertex algebra);
    None means the algebra itself.  Raises GuardError beyond ``max_states``.
    """

    def __init__(self, lattice: GramLattice, shift=None, cutoff: int = 4,
                 max_states: int = DEFAULT_MAX_STATES):
        if cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        self.lattice = lattice
        self.shift = tuple(shift) if shift is not None else None
        self.cutoff = cutoff
        self.blocks = {}  # weight -> list of states (deterministic order)
        total = 0
        points = points_up_to_norm(lattice, 2 * cutoff, shift=self.shift)
        staged = []
        for x in points:
            if self.shift is None:
                point = x
            else:
                point = tuple(int(c + s) if is_integral(c + s) else c + s
                              for c, s in zip((Rat(t) for t in x), self.shift))
            base = inner(point, point, lattice) / 2
            room = 2 * cutoff - int(inner(point, point, lattice))
            fock_blocks = _fock_tuples_by_degree(lattice.rank, room // 2)
            for deg, monomials in enumerate(fock_blocks):
                w = base + deg
                if w > cutoff:
                    break
                w = int(w) if is_integral(w) else w
                total += len(monomials)
                if total > max_states:
                    raise GuardError(
                        f"basis enumeration exceeds max_states={max_states}")
                for fock in monomials:
                    staged.append((w, (fock, point)))
        staged.sort(key=lambda t: (t[0], t[1][1], t[1][0]))
        for w, state in staged:
            self.blocks.setdefault(w, []).append(state)
        self.weights = tuple(sorted(self.blocks))
        self.index = {}
        i = 0
        for w in self.weights:
            for state in self.blocks[w]:
                self.index[state] = i
                i += 1
        self.size = i

    def block(self, weight):
        return self.blocks.get(weight, [])

    def dim(self, weight) -> int:
        return len(self.blocks.get(weight, ()))

    def dims(self) -> dict:
        return {w: len(b) for w, b in sorted(self.blocks.items())}

    def integer_dims(self, upto=None) -> list:
        """Dimension vector at integer weights 0..upto (default: cutoff)."""
        upto = self.cutoff if upto is None else upto
        return [self.dim(w) for w in range(upto + 1)]

    def __contains__(self, state):
        return state in self.index

    def __len__(self):
        return self.size


def enumerate_basis(lattice: GramLattice, shift=None, cutoff: int = 4,
                    max_states: int = DEFAULT_MAX_STATES) -> GradedBasis:
    return GradedBasis(lattice, shift, cutoff, max_states)
