"""Isomorphisms between difference-sublattice algebras, with certification.

A map here is induced by a lattice isometry M plus a sign character on
lattice points: Fock directions transform by M linearly, exponentials by
e^x -> sign(x) e^{Mx}.  The sign character must absorb the defect between
the two cocycles,

    sign(x) sign(y) / sign(x+y) = eps_src(x, y) * eps_tgt(Mx, My),

whose right side is symmetric and bimultiplicative because M preserves
pairings.  It is therefore solvable by an F2 quadratic form: the strictly
upper-triangular part is forced by the defect on basis pairs, and the
remaining linear freedom is pinned by the prescribed signs on basis vectors.
The construction is then certified computationally by verify_homomorphism —
no map should be used downstream before passing it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cocycle import restricted_cocycle, standard_cocycle
from .lattice import GuardError, inner, sublattice_n
from .rat import Rat
from .states import StateVector, sv
from .vertex import VOA


def difference_voa(n: int, l: int, cutoff: int, max_states=None) -> VOA:
    """Standalone algebra of the (n, l) difference sublattice.

    Uses the cocycle restricted from the ambient tensor lattice, so states
    here multiply exactly as their images inside the ambient algebra do.
    The transposed-side algebra of the same configuration is
    ``difference_voa(l, n, ...)``.
    """
    sub = sublattice_n(n, l)
    eps = restricted_cocycle(standard_cocycle(sub.ambient), sub)
    return VOA(sub.lattice, cutoff, cocycle=eps, max_states=max_states)


@dataclass(frozen=True)
class LatticeVoaMap:
    """A lattice isometry lifted to the truncated vertex algebras.

    ``matrix[d]`` is the target-coordinate image of the d-th source basis
    vector; ``quad`` (strictly upper F2 matrix) and ``linear`` (F2 vector)
    define the point sign (-1)^{sum_{i<j} quad_ij x_i x_j + sum linear_i x_i}.
    """

    name: str
    source: VOA = field(compare=False)
    target: VOA = field(compare=False)
    matrix: tuple
    quad: tuple
    linear: tuple

    def point_image(self, point):
        rank_t = self.target.lattice.rank
        out = [0] * rank_t
        for d, c in enumerate(point):
            if c:
                for t, m in enumerate(self.matrix[d]):
                    out[t] += c * m
        return tuple(out)

    def point_sign(self, point) -> int:
        acc = 0
        for i, xi in enumerate(point):
            if self.linear[i]:
                acc += xi
            for j in range(i + 1, len(point)):
                if self.quad[i][j]:
                    acc += xi * point[j]
        return -1 if acc & 1 else 1

    def push(self, vec: StateVector) -> StateVector:
        """Apply the map termwise (exact; weights are preserved)."""
        out = StateVector()
        for (fock, point), coeff in vec.items():
            img = self.target.exp_vector(self.point_image(point))
            for (m, d) in reversed(fock):
                img = self.target.heisenberg_mode(self.matrix[d], -m, img)
            out.add_vector(img, coeff * self.point_sign(point))
        return out

    def inverse(self) -> "LatticeVoaMap":
        """The inverse isomorphism (sign of x is the sign of its preimage)."""
        inv_rows = _integer_inverse(self.matrix)
        quad, linear = _sign_data_through(inv_rows, self.quad, self.linear)
        return LatticeVoaMap(f"{self.name}^-1", self.target, self.source,
                             inv_rows, quad, linear)

    def compose(self, first: "LatticeVoaMap") -> "LatticeVoaMap":
        """self after ``first`` (matching middle algebra required)."""
        if first.target.lattice != self.source.lattice:
            raise ValueError("composition mismatch")
        rows = tuple(self.point_image(row) for row in first.matrix)
        # sign of the composite at x: first's sign times self's sign at Mx;
        # fold the latter through first's matrix to keep the closed form.
        quad2, linear2 = _sign_data_through(first.matrix, self.quad, self.linear)
        quad = tuple(tuple((a + b) & 1 for a, b in zip(r1, r2))
                     for r1, r2 in zip(first.quad, quad2))
        linear = tuple((a + b) & 1 for a, b in zip(first.linear, linear2))
        return LatticeVoaMap(f"{self.name}*{first.name}", first.source,
                             self.target, rows, quad, linear)


def _integer_inverse(rows):
    n = len(rows)
    m = [[Rat(rows[i][j]) for j in range(n)] + [Rat(1 if i == j else 0)
                                                for j in range(n)]
         for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        scale = 1 / m[c][c]
        m[c] = [x * scale for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x = m[i][n + j]
            if x != int(x):
                raise ValueError("inverse is not integral")
            row.append(int(x))
        out.append(tuple(row))
    return tuple(out)


def _sign_data_through(rows, quad, linear):
    """Quadratic/linear F2 data of x -> sign(Rx), given data of sign."""
    n = len(rows)
    # Evaluate the form on images of basis vectors and their pairwise sums;
    # that determines the pulled-back strictly-upper matrix and linear part.
    def q_of(point):
        acc = 0
        for i, xi in enumerate(point):
            if linear[i]:
                acc += xi
            for j in range(i + 1, len(point)):
                if quad[i][j]:
                    acc += xi * point[j]
        return acc & 1

    lin = tuple(q_of(rows[i]) for i in range(n))
    up = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            s = tuple(a + b for a, b in zip(rows[i], rows[j]))
            up[i][j] = (q_of(s) + lin[i] + lin[j]) & 1
    return tuple(tuple(r) for r in up), lin


def build_map(name: str, source: VOA, target: VOA, matrix,
              basis_signs) -> LatticeVoaMap:
    """Lift a lattice isometry to a certified-shape map.

    ``matrix``: target coordinates of each source basis vector;
    ``basis_signs``: required sign of e^{b_d} for each source basis vector.
    Raises GuardError if the isometry check fails or if the cocycle defect
    is not absorbable (odd diagonal), which would mean the lift cannot exist
    in this form.
    """
    rank = source.lattice.rank
    matrix = tuple(tuple(int(c) for c in row) for row in matrix)
    for i in range(rank):
        for j in range(rank):
            lhs = inner(matrix[i], matrix[j], target.lattice)
            if lhs != source.lattice.gram[i][j]:
                raise GuardError(f"map {name}: images do not preserve the "
                                 f"pairing at basis pair ({i},{j})")
    eps_s, eps_t = source.cocycle, target.cocycle

    def unit(k):
        return tuple(1 if t == k else 0 for t in range(rank))

    quad = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        d_ii = eps_s.eval(unit(i), unit(i)) * eps_t.eval(matrix[i], matrix[i])
        if d_ii != 1:
            raise GuardError(f"map {name}: cocycle defect has odd diagonal "
                             f"at basis vector {i}; no quadratic sign exists")
        for j in range(i + 1, rank):
            d = eps_s.eval(unit(i), unit(j)) * eps_t.eval(matrix[i], matrix[j])
            quad[i][j] = 0 if d == 1 else 1
    linear = tuple(0 if s == 1 else 1 for s in basis_signs)
    if target.cutoff < source.cutoff:
        raise GuardError(f"map {name}: target cutoff below source cutoff")
    return LatticeVoaMap(name, source, target,
                         matrix, tuple(tuple(r) for r in quad), linear)


# ---------------------------------------------------------------------------
# The named maps
# ---------------------------------------------------------------------------

def build_theta(voa: VOA) -> LatticeVoaMap:
    """Negation map on a difference-sublattice algebra: h -> -h on Fock
    directions, e^b -> -e^{-b} on every basis exponential."""
    rank = voa.lattice.rank
    matrix = tuple(tuple(-1 if t == d else 0 for t in range(rank))
                   for d in range(rank))
    return build_map("theta", voa, voa, matrix, (-1,) * rank)


def transposition_matrix(n: int, l: int):
    """Basis permutation sending difference (row i, factors p,p+1) on the
    (n, l) side to difference (row p, factors i,i+1) on the transposed side.

    Source flat index (p-1)(n-1)+(i-1), target flat index (i-1)(l-1)+(p-1).
    """
    rank = (n - 1) * (l - 1)
    rows = []
    for src in range(rank):
        i = src % (n - 1) + 1
        p = src // (n - 1) + 1
        tgt = (i - 1) * (l - 1) + (p - 1)
        rows.append(tuple(1 if t == tgt else 0 for t in range(rank)))
    return tuple(rows)


def build_tau1(source: VOA, target: VOA, n: int, l: int) -> LatticeVoaMap:
    """Factor-transposition relabeling with + signs on basis exponentials."""
    matrix = transposition_matrix(n, l)
    return build_map("tau1", source, target, matrix,
                     (1,) * source.lattice.rank)


def build_tau(source: VOA, target: VOA, n: int, l: int) -> LatticeVoaMap:
    """The transposition isomorphism: relabeling composed with negation."""
    return build_tau1(source, target, n, l).compose(build_theta(source))


def build_sigma(source: VOA, target: VOA, n: int) -> LatticeVoaMap:
    """Identification of the two rank n-1 difference sublattices at l = 2
    (row differences on one side to consecutive-factor differences on the
    other), with + signs."""
    return build_tau1(source, target, n, 2)


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

def verify_homomorphism(f: LatticeVoaMap, cutoff=None, samples=None,
                        seed: int = 0) -> dict:
    """Check f(u_m v) = f(u)_m f(v) exactly on source basis states.

    Exhaustive over pairs with wt(u)+wt(v) <= cutoff (every mode whose
    product weight stays within the truncation); with ``samples`` given,
    checks that many uniformly drawn pairs instead.  Returns a report with
    pass/fail, counts, and up to ten witness triples.
    """
    cut = min(f.source.cutoff, f.target.cutoff) if cutoff is None else cutoff
    basis = f.source.basis
    states = [s for w in basis.weights if w <= cut for s in basis.block(w)]
    pairs = [(u, v) for u in states for v in states
             if f.source.weight(u) + f.source.weight(v) <= cut]
    if samples is not None:
        rng = random.Random(seed)
        pairs = [(rng.choice(states), rng.choice(states))
                 for _ in range(samples)]
    checked = products = 0
    witnesses = []
    image = {}
    for s in states:
        image[s] = f.push(sv(s))
    for u, v in pairs:
        wu, wv = f.source.weight(u), f.source.weight(v)
        checked += 1
        lo = int(wu + wv) - 1 - cut
        hi = int(wu + wv) - 1
        for m in range(lo, hi + 1):
            prod, trunc = f.source.mode_flagged(sv(u), m, sv(v))
            if trunc:
                continue
            lhs = f.push(prod)
            rhs = f.target.mode(image[u], m, image[v])
            products += 1
            if lhs != rhs:
                if len(witnesses) < 10:
                    witnesses.append({"u": repr(u), "m": m, "v": repr(v)})
    return {
        "ok": not witnesses,
        "map": f.name,
        "cutoff": cut,
        "pairs_checked": checked,
        "products_checked": products,
        "witnesses": witnesses,
    }


def push(f: LatticeVoaMap, vec: StateVector) -> StateVector:
    return f.push(vec)
