"""Even positive-definite lattices presented by integer Gram matrices.

The engine works with tensor powers of simply-laced root lattices and two
distinguished orthogonal sublattices: the "difference" sublattice spanned by
consecutive-factor differences of each root-index row, and the "diagonal"
sublattice spanned by the across-factor sums.  Vectors are coordinate tuples
over the lattice basis; rational (ambient) vectors appear for dual-coset
representatives and for Heisenberg directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .rat import Rat


class GuardError(ValueError):
    """Raised when a computation would exceed a declared size guard."""


@dataclass(frozen=True)
class GramLattice:
    """An even positive-definite lattice given by basis labels and Gram matrix."""

    rank: int
    labels: tuple
    gram: tuple  # tuple of tuples of ints, symmetric

    def __post_init__(self):
        if self.rank < 1 or len(self.labels) != self.rank or len(self.gram) != self.rank:
            raise ValueError("rank/labels/gram size mismatch")
        for i, row in enumerate(self.gram):
            if len(row) != self.rank:
                raise ValueError("gram is not square")
            if row[i] % 2 != 0:
                raise ValueError(f"diagonal entry gram[{i}][{i}]={row[i]} is odd (lattice must be even)")
            for j in range(self.rank):
                if row[j] != self.gram[j][i]:
                    raise ValueError("gram is not symmetric")
        # Positive definiteness: all leading principal minors > 0 (exact).
        for k in range(1, self.rank + 1):
            if _det([row[:k] for row in self.gram[:k]]) <= 0:
                raise ValueError("gram is not positive definite")

    def to_json_dict(self) -> dict:
        return {"rank": self.rank, "labels": list(self.labels), "gram": [list(r) for r in self.gram]}

    @staticmethod
    def from_json_dict(d: dict) -> "GramLattice":
        return GramLattice(d["rank"], tuple(d["labels"]), tuple(tuple(r) for r in d["gram"]))


@dataclass(frozen=True)
class EmbeddedLattice:
    """A sublattice with its own Gram data plus the embedding into an ambient lattice.

    ``embedding[k]`` is the ambient coordinate tuple of the k-th sublattice
    basis vector.
    """

    lattice: GramLattice
    ambient: GramLattice
    embedding: tuple  # tuple of ambient coordinate tuples

    def embed(self, coords):
        """Map sublattice coordinates to ambient coordinates."""
        amb = [0] * self.ambient.rank
        for c, basis_vec in zip(coords, self.embedding):
            if c:
                for t, e in enumerate(basis_vec):
                    amb[t] += c * e
        return tuple(amb)


def _det(rows) -> int:
    """Exact determinant of a small integer matrix (rational elimination)."""
    n = len(rows)
    m = [[Rat(x) for x in row] for row in rows]
    det = Rat(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                for cc in range(c, n):
                    m[r][cc] -= f * m[c][cc]
    assert det == int(det)
    return int(det)


def determinant(lattice: GramLattice) -> int:
    return _det(lattice.gram)


@lru_cache(maxsize=None)
def gram_inverse(lattice: GramLattice) -> tuple:
    """Exact inverse of the Gram matrix, as a tuple of tuples of rationals."""
    n = lattice.rank
    m = [[Rat(x) for x in row] + [Rat(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(lattice.gram)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def inner(u, v, lattice: GramLattice):
    """Bilinear form u^T . gram . v on coordinate vectors (int or rational)."""
    gram = lattice.gram
    total = Rat(0)
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            s = Rat(0)
            for j, vj in enumerate(v):
                if vj:
                    s += row[j] * vj
            total += ui * s
    return total


def norm(u, lattice: GramLattice):
    return inner(u, u, lattice)


# ---------------------------------------------------------------------------
# Construction of the tensor-power root lattices and their sublattices
# ---------------------------------------------------------------------------

def _cartan_a(n_minus_1: int) -> list:
    """Cartan matrix of the rank n-1 simply-laced chain (2 on the diagonal)."""
    c = [[0] * n_minus_1 for _ in range(n_minus_1)]
    for i in range(n_minus_1):
        c[i][i] = 2
        if i + 1 < n_minus_1:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def build_a_tensor(n: int, l: int, prefix: str = "a") -> GramLattice:
    """The orthogonal sum of l copies of the rank n-1 root lattice.

    Basis vectors carry labels ``prefix[i,j]`` with root index i in 1..n-1 and
    factor index j in 1..l; the factor index is the outer (slow) one, so each
    factor's block is contiguous.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if l < 1:
        raise ValueError("l must be >= 1")
    r = n - 1
    cartan = _cartan_a(r)
    rank = r * l
    gram = [[0] * rank for _ in range(rank)]
    labels = []
    for j in range(l):
        for i in range(r):
            labels.append(f"{prefix}[{i + 1},{j + 1}]")
            for i2 in range(r):
                gram[j * r + i][j * r + i2] = cartan[i][i2]
    return GramLattice(rank, tuple(labels), tuple(tuple(row) for row in gram))


def basis_index(n: int, i: int, j: int) -> int:
    """Flat index of the basis vector with root index i, factor index j (1-based)."""
    return (j - 1) * (n - 1) + (i - 1)


def _sublattice_from_vectors(ambient: GramLattice, vectors, labels) -> EmbeddedLattice:
    gram = tuple(tuple(int(inner(u, v, ambient)) for v in vectors) for u in vectors)
    sub = GramLattice(len(vectors), tuple(labels), gram)
    return EmbeddedLattice(sub, ambient, tuple(tuple(v) for v in vectors))


def sublattice_n(n: int, l: int, prefix: str = "a") -> EmbeddedLattice:
    """Sublattice spanned by consecutive-factor differences within each root row.

    Basis: the vectors (root i, factor j) - (root i, factor j+1) for
    i in 1..n-1, j in 1..l-1, ordered with j outer to match the ambient
    convention.  This is the orthogonal complement of the diagonal sublattice.
    """
    if l < 2:
        raise ValueError("difference sublattice needs l >= 2")
    ambient = build_a_tensor(n, l, prefix)
    vectors, labels = [], []
    for j in range(1, l):
        for i in range(1, n):
            v = [0] * ambient.rank
            v[basis_index(n, i, j)] = 1
            v[basis_index(n, i, j + 1)] = -1
            vectors.append(v)
            labels.append(f"d[{i},{j}]")
    return _sublattice_from_vectors(ambient, vectors, labels)


def sublattice_k(n: int, l: int, prefix: str = "a") -> EmbeddedLattice:
    """Diagonal sublattice spanned by the across-factor sums of each root row.

    Its Gram matrix is l times the rank n-1 Cartan matrix.
    """
    ambient = build_a_tensor(n, l, prefix)
    vectors, labels = [], []
    for i in range(1, n):
        v = [0] * ambient.rank
        for j in range(1, l + 1):
            v[basis_index(n, i, j)] = 1
        vectors.append(v)
        labels.append(f"s[{i}]")
    return _sublattice_from_vectors(ambient, vectors, labels)


# ---------------------------------------------------------------------------
# Norm-bounded point enumeration (exact)
# ---------------------------------------------------------------------------

def _floor_sqrt_rat(x) -> int:
    """floor(sqrt(x)) for a nonnegative exact rational x."""
    if x < 0:
        raise ValueError("negative radicand")
    p, q = int(x.numerator), int(x.denominator)
    return isqrt(p * q) // q


def points_up_to_norm(lattice: GramLattice, bound, shift=None):
    """All integer coordinate vectors x with (x+shift, x+shift) <= bound.

    ``shift`` may be a rational coordinate vector (defaults to 0).  Uses exact
    box bounds |x_i + shift_i| <= sqrt(bound * inv_ii) from the Gram inverse,
    then filters by exact norm.  Deterministic lexicographic order.
    """
    r = lattice.rank
    if shift is None:
        shift = (Rat(0),) * r
    bound = Rat(bound)
    if bound < 0:
        return []
    inv = gram_inverse(lattice)
    ranges = []
    for i in range(r):
        rad = bound * inv[i][i]
        s = Rat(shift[i])
        # integer m with (m + s)^2 <= rad  <=>  -s - sqrt(rad) <= m <= -s + sqrt(rad)
        root = _floor_sqrt_rat(rad)
        lo, hi = -s - root - 1, -s + root + 1
        lo_i = int(lo) if lo == int(lo) else int(lo) - (1 if lo < 0 else 0)
        hi_i = int(hi) if hi == int(hi) else int(hi) + (0 if hi < 0 else 1)
        ranges.append(range(lo_i, hi_i + 1))

    out = []
    coords = [0] * r

    def descend(i):
        if i == r:
            v = tuple(c + s for c, s in zip(coords, shift))
            if inner(v, v, lattice) <= bound:
                out.append(tuple(coords))
            return
        for c in ranges[i]:
            coords[i] = c
            descend(i + 1)

    descend(0)
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Dual quotient
# ---------------------------------------------------------------------------

DUAL_QUOTIENT_MAX_RANK = 4


def dual_quotient(lattice: GramLattice):
    """Minimal-norm representatives of (dual lattice)/(lattice).

    Returns a list of rational coordinate tuples (over the lattice basis),
    zero coset first, then sorted by (norm, coordinates); its length equals
    det(gram).  Ties inside a coset are broken by the lexicographically
    smallest coordinate vector.  Guarded to rank <= 4, where the brute-force
    enumeration (det^rank candidates) stays trivial.
    """
    r = lattice.rank
    if r > DUAL_QUOTIENT_MAX_RANK:
        raise GuardError(f"dual_quotient guarded to rank <= {DUAL_QUOTIENT_MAX_RANK}, got {r}")
    det = determinant(lattice)
    inv = gram_inverse(lattice)

    # Dual vectors are inv . k for integer k; k mod det spans all cosets since
    # det * Z^r is contained in gram * Z^r.
    seen = {}
    for k in _box(det, r):
        lam = tuple(sum(inv[i][j] * k[j] for j in range(r)) for i in range(r))
        key = tuple(x - _floor_rat(x) for x in lam)
        if key not in seen:
            seen[key] = key  # canonical rep with coords in [0, 1)
    assert len(seen) == det, f"expected {det} cosets, found {len(seen)}"

    reps = []
    for key in seen:
        reps.append(_minimal_coset_rep(lattice, key))
    reps.sort(key=lambda v: (norm(v, lattice), v))
    assert all(x == 0 for x in reps[0]), "zero coset must sort first"
    return reps


def _box(det, r):
    if r == 0:
        yield ()
        return
    for rest in _box(det, r - 1):
        for c in range(det):
            yield rest + (c,)


def _floor_rat(x) -> int:
    p, q = int(x.numerator), int(x.denominator)
    return p // q


def _minimal_coset_rep(lattice: GramLattice, rep):
    """Minimal-norm vector in rep + lattice; lexicographically smallest on ties."""
    bound = norm(rep, lattice)
    best = None
    for x in points_up_to_norm(lattice, bound, shift=rep):
        v = tuple(Rat(c) + s for c, s in zip(x, rep))
        key = (norm(v, lattice), v)
        if best is None or key < best[0]:
            best = (key, v)
    return best[1]
