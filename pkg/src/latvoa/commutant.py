"""Exact linear algebra inside the truncated graded blocks.

Subspaces are stored per weight as reduced-echelon rows over the ambient
basis ordering, so two computations of the same space produce literally
identical row sets.  All elimination is exact rational Gauss-Jordan; weight
blocks are independent of one another, which keeps every solve small.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import EmbeddedLattice, GuardError, inner
from .rat import ONE, Rat
from .states import (GradedBasis, StateVector, _fock_tuples_by_degree,
                     enumerate_basis, make_state, state_weight, sv)
from .vertex import VOA


class _Echelon:
    """Reduced-echelon row accumulator keyed by pivot column."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows = {}

    def reduce(self, row):
        """Eliminate known pivots; return (residual, pivot-or-None).

        Every pivot-column entry must be cleared, not just a leading run:
        stored rows carry no entries at other pivots, so the snapshot below
        is the complete set of eliminations and each adds free-column
        entries only.
        """
        row = {k: v for k, v in row.items() if v}
        for p in sorted(k for k in row if k in self.rows):
            c = row.pop(p)
            for k, v in self.rows[p].items():
                if k == p:
                    continue
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if not row:
            return row, None
        return row, min(row)

    def insert(self, row):
        """Add a row; returns the normalized new row, or None if dependent."""
        red, p = self.reduce(row)
        if p is None:
            return None
        scale = 1 / red[p]
        red = {k: v * scale for k, v in red.items()}
        for other in self.rows.values():
            c = other.get(p)
            if c:
                for k, v in red.items():
                    nv = other.get(k, 0) - c * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        self.rows[p] = red
        return red


def sparse_nullspace(rows, ncols: int):
    """Kernel basis of a sparse rational matrix, columns 0..ncols-1.

    Returns one vector per free column, in column order; each vector has a 1
    at its free column, which makes the output canonical.
    """
    ech = _Echelon()
    for r in rows:
        ech.insert(r)
    pivots = ech.rows
    out = []
    for j in range(ncols):
        if j in pivots:
            continue
        v = {j: ONE}
        for p, r in pivots.items():
            c = r.get(j)
            if c:
                v[p] = -c
        out.append(v)
    return out


class Subspace:
    """A weight-graded subspace of a VOA truncation, in reduced echelon form.

    Rows are keyed by the ambient basis index (which sorts canonically within
    each weight block), so ``equals`` is literal row-dict comparison and
    membership is an exact reduction.
    """

    def __init__(self, voa: VOA):
        self.voa = voa
        self.basis: GradedBasis = voa.basis
        self._ech = {}
        self._inv = None

    # -- construction ------------------------------------------------------

    def _echelon(self, w) -> _Echelon:
        if w not in self._ech:
            self._ech[w] = _Echelon()
        return self._ech[w]

    def insert_row(self, weight, row) -> bool:
        return self._echelon(weight).insert(row) is not None

    def insert_vector(self, vec: StateVector) -> bool:
        """Insert a vector, splitting it into homogeneous components."""
        added = False
        for w, row in self._vector_rows(vec).items():
            added = self.insert_row(w, row) or added
        return added

    def _vector_rows(self, vec):
        rows = {}
        for state, coeff in vec.items():
            w = self.voa.weight(state)
            rows.setdefault(w, {})[self.basis.index[state]] = coeff
        return rows

    # -- queries -----------------------------------------------------------

    @property
    def weights(self):
        return tuple(w for w in sorted(self._ech) if self._ech[w].rows)

    def dim(self, weight) -> int:
        ech = self._ech.get(weight)
        return len(ech.rows) if ech else 0

    def graded_dims(self, upto=None):
        """[(weight, dim)] over all ambient weights up to ``upto``."""
        ws = [w for w in self.basis.weights if upto is None or w <= upto]
        return [(w, self.dim(w)) for w in ws]

    def integer_dims(self, upto: int):
        return [self.dim(w) for w in range(upto + 1)]

    def total_dim(self) -> int:
        return sum(len(e.rows) for e in self._ech.values())

    def _state_at(self, idx):
        if self._inv is None:
            self._inv = {i: s for s, i in self.basis.index.items()}
        return self._inv[idx]

    def row_vector(self, row) -> StateVector:
        return sv_from_row(row, self._state_at)

    def vectors(self, weight=None):
        """Echelon basis as StateVectors (pivot order), one weight or all."""
        ws = self.weights if weight is None else (weight,)
        out = []
        for w in ws:
            ech = self._ech.get(w)
            if not ech:
                continue
            for p in sorted(ech.rows):
                out.append(self.row_vector(ech.rows[p]))
        return out

    def reduce_vector(self, vec: StateVector) -> StateVector:
        """Residual of vec after reduction; zero iff vec is a member."""
        out = StateVector()
        for w, row in self._vector_rows(vec).items():
            red, _ = self._echelon(w).reduce(row)
            for idx, c in red.items():
                out.add_term(self._state_at(idx), c)
        return out

    def contains(self, vec: StateVector) -> bool:
        return not self.reduce_vector(vec)

    def equals(self, other: "Subspace") -> bool:
        ws = set(self.weights) | set(other.weights)
        return all(self._rows_at(w) == other._rows_at(w) for w in ws)

    def _rows_at(self, w):
        ech = self._ech.get(w)
        return ech.rows if ech else {}

    def intersect(self, other: "Subspace") -> "Subspace":
        """Exact per-weight intersection (nullspace of stacked coordinates)."""
        out = Subspace(self.voa)
        for w in self.weights:
            mine = [self._rows_at(w)[p] for p in sorted(self._rows_at(w))]
            theirs = [other._rows_at(w)[p] for p in sorted(other._rows_at(w))]
            if not mine or not theirs:
                continue
            # Unknowns: coefficients (a | b) with sum a_i r_i - sum b_j t_j = 0.
            cols = {}
            for i, r in enumerate(mine):
                for idx, c in r.items():
                    cols.setdefault(idx, {})[i] = c
            for j, t in enumerate(theirs):
                for idx, c in t.items():
                    cols.setdefault(idx, {})[len(mine) + j] = -c
            for combo in sparse_nullspace(list(cols.values()),
                                          len(mine) + len(theirs)):
                row = {}
                for i, a in combo.items():
                    if i >= len(mine):
                        continue
                    for idx, c in mine[i].items():
                        nv = row.get(idx, 0) + a * c
                        if nv:
                            row[idx] = nv
                        else:
                            row.pop(idx, None)
                if row:
                    out.insert_row(w, row)
        return out


def sv_from_row(row, state_at) -> StateVector:
    out = StateVector()
    for idx, c in row.items():
        out.add_term(state_at(idx), c)
    return out


def homogeneous_weight(vec: StateVector, lattice):
    """Weight of a homogeneous vector; raises if mixed or zero."""
    ws = {state_weight(state, lattice) for state in vec}
    if len(ws) != 1:
        raise ValueError(f"vector is not homogeneous (weights {sorted(ws)})")
    return ws.pop()


def mode_kernel(voa: VOA, conditions, cutoff, column_filter=None) -> Subspace:
    """Joint kernel, per weight block, of the operators u_m.

    ``conditions`` is a list of (u, m) with u a homogeneous StateVector; the
    kernel of all of them is computed on every ambient weight block <= cutoff
    (optionally restricted to the columns passing ``column_filter``).  Every
    image is computed exactly; a truncated image raises GuardError rather
    than producing a silently wrong kernel.
    """
    weighted = []
    for u, m in conditions:
        wu = homogeneous_weight(u, voa.lattice)
        weighted.append((u, m, wu))
    sub = Subspace(voa)
    for w in voa.basis.weights:
        if w > cutoff:
            continue
        cols = voa.basis.block(w)
        if column_filter is not None:
            cols = [s for s in cols if column_filter(s)]
        if not cols:
            continue
        rows = {}
        for j, s in enumerate(cols):
            vs = sv(s)
            for cid, (u, m, wu) in enumerate(weighted):
                if wu + w - m - 1 < 0:
                    continue  # image weight negative: identically zero
                img, truncated = voa.mode_flagged(u, m, vs)
                if truncated:
                    raise GuardError(
                        f"mode_kernel needs exact images: condition of weight "
                        f"{wu} at mode {m} leaves cutoff {voa.cutoff}")
                for t, c in img.items():
                    rows.setdefault((cid, t), {})[j] = c
        for combo in sparse_nullspace(list(rows.values()), len(cols)):
            sub.insert_row(w, {voa.basis.index[cols[j]]: c
                               for j, c in combo.items()})
    return sub


def commutant_of_generators(voa: VOA, gens, cutoff) -> Subspace:
    """{v : g_m v = 0 for every generator g and every m >= 0}, weight <= cutoff.

    Imposing only generator modes suffices: by the iterate formula, (a_k b)_m
    expands into compositions of modes of a and b, so anything killed by all
    nonnegative modes of the generators is killed by the whole generated
    subalgebra.  (Unit-tested through certify_commutant.)

    Requires voa.cutoff >= cutoff + max generator weight - 1 so that every
    imposed image is exact.
    """
    if not gens:
        raise ValueError("need at least one generator")
    max_w = 0
    conditions = []
    for g in gens:
        wg = homogeneous_weight(g, voa.lattice)
        if wg != int(wg):
            raise ValueError("generators must have integer weight")
        max_w = max(max_w, int(wg))
        for m in range(0, int(wg) + cutoff + 1):
            conditions.append((g, m))
    if voa.cutoff < cutoff + max_w - 1:
        raise GuardError(
            f"commutant at cutoff {cutoff} with weight-{max_w} generators "
            f"needs engine cutoff >= {cutoff + max_w - 1}")
    return mode_kernel(voa, conditions, cutoff)


def certify_commutant(voa: VOA, gens, sub: Subspace, samples, rng) -> list:
    """Post-hoc soundness + closure-lemma spot check; returns failures.

    For sampled members v: every g_m v (m >= 0) vanishes, and for sampled
    pairs of generators, (g_k g')_m v = 0 -- certifying that generator modes
    were a sufficient set of conditions.
    """
    failures = []
    vecs = sub.vectors()
    if not vecs:
        return failures
    for _ in range(samples):
        v = rng.choice(vecs)
        g = rng.choice(gens)
        wg = int(homogeneous_weight(g, voa.lattice))
        wv = homogeneous_weight(v, voa.lattice)
        m = rng.randrange(0, wg + int(wv) + 1)
        if voa.mode(g, m, v):
            failures.append(("generator_mode", m))
        g2 = rng.choice(gens)
        wg2 = int(homogeneous_weight(g2, voa.lattice))
        k = rng.randrange(-2, wg + wg2)
        prod, ptrunc = voa.mode_flagged(g, k, g2)
        if ptrunc or not prod:
            continue
        wp = wg + wg2 - k - 1
        m2_lo = max(0, wp + int(wv) - 1 - voa.cutoff)
        m2_hi = wp + int(wv) - 1
        if m2_hi < m2_lo:
            continue
        m2 = rng.randrange(m2_lo, m2_hi + 1)
        img, truncated = voa.mode_flagged(prod, m2, v)
        if not truncated and img:
            failures.append(("product_mode", k, m2))
    return failures


def heisenberg_commutant(voa: VOA, directions, cutoff) -> Subspace:
    """Kernel of h(m), m >= 0, for each listed Heisenberg direction.

    Since h(m) for m >= 1 acts on the Fock factor only and h(0) is diagonal
    on lattice points, the kernel splits as (per-degree Fock kernel) x
    (orthogonal lattice points); the Fock kernel of each degree is solved
    once and reused across points.
    """
    rank = voa.lattice.rank
    dirs = [tuple(Rat(c) for c in h) for h in directions]
    zero = (0,) * rank
    points = sorted({s[1] for w in voa.basis.weights if w <= cutoff
                     for s in voa.basis.block(w)})
    admissible = [p for p in points
                  if all(inner(h, p, voa.lattice) == 0 for h in dirs)]
    fock = _fock_tuples_by_degree(rank, cutoff)
    kernels = {}
    for d in range(cutoff + 1):
        cols = fock[d]
        rows = {}
        for j, f in enumerate(cols):
            vs = sv(make_state(f, zero))
            for cid, h in enumerate(dirs):
                for m in range(1, d + 1):
                    img = voa.heisenberg_mode(h, m, vs)
                    for (tf, _tp), c in img.items():
                        rows.setdefault((cid, m, tf), {})[j] = c
        kernels[d] = [(cols, combo)
                      for combo in sparse_nullspace(list(rows.values()), len(cols))]
    sub = Subspace(voa)
    for p in admissible:
        base = inner(p, p, voa.lattice) / 2
        for d in range(cutoff + 1):
            w = base + d
            if w > cutoff:
                break
            w = int(w) if w == int(w) else w
            for cols, combo in kernels[d]:
                row = {voa.basis.index[make_state(cols[j], p)]: c
                       for j, c in combo.items()}
                sub.insert_row(w, row)
    return sub


def embedded_lattice_subspace(voa: VOA, embedded: EmbeddedLattice,
                              cutoff, max_states=None) -> Subspace:
    """Span of the sublattice VOA basis, written in ambient coordinates.

    Independent route to the same space as heisenberg_commutant: enumerate
    the sublattice abstractly, then embed each basis state by applying the
    embedded Heisenberg creation chain to the embedded exponential.
    """
    kw = {"max_states": max_states} if max_states else {}
    inner_basis = enumerate_basis(embedded.lattice, None, cutoff, **kw)
    emb_rows = [tuple(Rat(c) for c in row) for row in embedded.embedding]
    sub = Subspace(voa)
    for w in inner_basis.weights:
        for fock, pt in inner_basis.block(w):
            vec = voa.exp_vector(embedded.embed(pt))
            for (m, d) in reversed(fock):
                vec = voa.heisenberg_mode(emb_rows[d], -m, vec)
            sub.insert_vector(vec)
    return sub


def generated_subalgebra(voa: VOA, gens, cutoff, round_limit=None) -> Subspace:
    """Smallest cutoff-capped span containing vacuum and gens, closed under
    generator modes.

    The generated vertex subalgebra is spanned by iterated generator modes
    applied to the vacuum, so each round applies g_m (all m landing at
    weight <= cutoff) to the vectors found in the previous round.  Stops
    when a round adds nothing; raises GuardError if the span is still
    growing after ``round_limit`` rounds (default cutoff + 2).  The
    product-closure property of the result is sampled separately by
    certify_product_closure.
    """
    limit = (cutoff + 2) if round_limit is None else round_limit
    weighted_gens = []
    for g in gens:
        wg = homogeneous_weight(g, voa.lattice)
        if wg > cutoff:
            raise GuardError(f"generator weight {wg} exceeds cutoff {cutoff}")
        weighted_gens.append((g, int(wg)))
    sub = Subspace(voa)
    sub.insert_vector(voa.vacuum_vector())
    frontier = [voa.vacuum_vector()]
    for g, _ in weighted_gens:
        if sub.insert_vector(g):
            frontier.append(g)
    rounds = 0
    history = [tuple(d for _, d in sub.graded_dims(cutoff))]
    while frontier:
        rounds += 1
        if rounds > limit:
            raise GuardError(
                f"generated subalgebra did not stabilize in {limit} rounds; "
                f"dims history {history}")
        fresh = []
        for g, wg in weighted_gens:
            for v in frontier:
                wv = int(homogeneous_weight(v, voa.lattice))
                for m in range(wg + wv - 1 - cutoff, wg + wv):
                    img, truncated = voa.mode_flagged(g, m, v)
                    if truncated:
                        raise GuardError("generated subalgebra needs engine "
                                         f"cutoff >= {cutoff}")
                    if not img:
                        continue
                    for w, row in sub._vector_rows(img).items():
                        new = sub._echelon(w).insert(row)
                        if new is not None:
                            fresh.append(sub.row_vector(new))
        frontier = fresh
        history.append(tuple(d for _, d in sub.graded_dims(cutoff)))
    sub.closure_rounds = rounds
    sub.closure_history = history
    return sub


def certify_product_closure(voa: VOA, sub: Subspace, samples, rng) -> list:
    """Sample u, v in the span and check u_m v stays in the span (exactly).

    This is the certification that the generator-mode closure already closed
    the span under all products; failures are returned as witness tuples.
    """
    failures = []
    vecs = sub.vectors()
    if not vecs:
        return failures
    top = max(sub.weights)
    for _ in range(samples):
        u = rng.choice(vecs)
        v = rng.choice(vecs)
        wu = int(homogeneous_weight(u, voa.lattice))
        wv = int(homogeneous_weight(v, voa.lattice))
        lo, hi = wu + wv - 1 - int(top), wu + wv - 1
        if hi < lo:
            continue
        m = rng.randrange(lo, hi + 1)
        img, truncated = voa.mode_flagged(u, m, v)
        if truncated or sub.contains(img):
            continue
        failures.append(("product_not_in_span", wu, wv, m))
    return failures


@dataclass(frozen=True)
class HighestWeightQuery:
    """A finite-weight slice request: level, values of the simple-coroot
    zero modes, and the weight cutoff for the search."""
    level: int
    finite_weight: tuple
    cutoff: int


def highest_weight_vectors(voa: VOA, raising, lowering, cartan,
                           query: HighestWeightQuery) -> Subspace:
    """Singular vectors of the current algebra in a fixed h(0) eigenspace.

    Conditions: e_m v = 0 (m >= 0), f_m v = 0 (m >= 1), h(m) v = 0 (m >= 1),
    and h(0) v is fixed to the queried finite weight (imposed by slicing the
    basis on lattice-point pairings, which is exactly the h(0) spectrum).
    A finite weight outside the spectrum yields the empty subspace.
    """
    dirs = [tuple(Rat(c) for c in h) for h in cartan]
    target = tuple(Rat(x) for x in query.finite_weight)
    if len(target) != len(dirs):
        raise ValueError("finite_weight length must match cartan length")

    def in_slice(state):
        return all(inner(h, state[1], voa.lattice) == lam
                   for h, lam in zip(dirs, target))

    conditions = []
    for e in raising:
        we = int(homogeneous_weight(e, voa.lattice))
        for m in range(0, we + query.cutoff + 1):
            conditions.append((e, m))
    for f in lowering:
        wf = int(homogeneous_weight(f, voa.lattice))
        for m in range(1, wf + query.cutoff + 1):
            conditions.append((f, m))
    for h in dirs:
        hv = voa.heis_vector(h)
        for m in range(1, query.cutoff + 1):
            conditions.append((hv, m))
    return mode_kernel(voa, conditions, query.cutoff, column_filter=in_slice)


def graded_dims(sub: Subspace, upto=None):
    """Plain [(weight, dim)] report for a subspace."""
    return sub.graded_dims(upto)
