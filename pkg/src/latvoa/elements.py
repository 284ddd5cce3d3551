"""Distinguished states: currents, conformal vectors, cubic generators.

Conventions (all 1-based): the ambient lattice of a configuration (n, l) is
the orthogonal sum of l copies of the rank n-1 root lattice with basis
vectors indexed (root i, factor j); the transposed ("tilde") ambient swaps
the roles, i.e. n copies of the rank l-1 lattice.

Most formulas below are built from row differences (root i, factor p) -
(root i, factor q).  Such differences span the difference sublattice, so
each builder accepts a ``diff(i, p, q) -> coords`` callable selecting the
coordinate realization: ``ambient_diff`` for the full tensor lattice,
``sublattice_diff`` for the standalone difference-sublattice algebra (whose
cocycle must be the restricted one; see latvoa.cocycle).
"""

from __future__ import annotations

from .lattice import basis_index, gram_inverse
from .rat import ONE, Rat
from .states import StateVector
from .vertex import VOA


def _unit(rank: int, flat: int):
    return tuple(1 if t == flat else 0 for t in range(rank))


def root_vector(n: int, l: int, i: int, j: int):
    """Ambient coordinates of the basis root (root index i, factor j)."""
    return _unit((n - 1) * l, basis_index(n, i, j))


def ambient_diff(n: int, l: int):
    """Row differences in ambient coordinates (rank (n-1)*l)."""
    rank = (n - 1) * l

    def diff(i, p, q):
        v = [0] * rank
        v[basis_index(n, i, p)] += 1
        v[basis_index(n, i, q)] -= 1
        return tuple(v)

    return diff


def sublattice_diff(n: int, l: int):
    """Row differences in difference-sublattice coordinates.

    The sublattice basis is (root i, factor p) - (root i, factor p+1) at
    flat position (p-1)(n-1)+(i-1); a general difference is the run of
    consecutive basis differences between the two factors.
    """
    rank = (n - 1) * (l - 1)

    def diff(i, p, q):
        v = [0] * rank
        sign, lo, hi = (1, p, q) if p <= q else (-1, q, p)
        for k in range(lo, hi):
            v[(k - 1) * (n - 1) + (i - 1)] += sign
        return tuple(v)

    return diff


def row_difference(n: int, l: int, i: int, p: int, q: int):
    """Coordinates of (root i, factor p) - (root i, factor q), ambient."""
    return ambient_diff(n, l)(i, p, q)


def quadratic_fock(voa: VOA, h, scale=1) -> StateVector:
    """h(-1)^2 vacuum, scaled."""
    return voa.heisenberg_mode(h, -1, voa.heis_vector(h)).scaled(Rat(scale))


def _neg(v):
    return tuple(-x for x in v)


def _vadd(u, v):
    return tuple(x + y for x, y in zip(u, v))


# ---------------------------------------------------------------------------
# Diagonal current algebra (ambient only: the currents use single basis roots)
# ---------------------------------------------------------------------------

def diagonal_currents(voa: VOA, n: int, l: int) -> dict:
    """Chevalley generators of the diagonally embedded rank n-1 current algebra.

    Returns {"e": [...], "f": [...], "h": [...]} indexed by simple root
    1..n-1: raising currents sum e^(root i, factor j) over factors, lowering
    currents likewise with negated points, Cartan currents are the diagonal
    h(-1) vectors.
    """
    gens = block_currents(voa, n, l, range(1, n), range(1, l + 1))
    return gens


def block_currents(voa: VOA, n: int, l: int, rows, factors) -> dict:
    """Diagonal currents of a sub-root-system: simple roots ``rows`` summed
    over the listed ``factors`` only."""
    e, f, h = [], [], []
    for i in rows:
        ev, fv = StateVector(), StateVector()
        hvec = (0,) * voa.lattice.rank
        for j in factors:
            alpha = root_vector(n, l, i, j)
            ev.add_vector(voa.exp_vector(alpha))
            fv.add_vector(voa.exp_vector(_neg(alpha)))
            hvec = _vadd(hvec, alpha)
        e.append(ev)
        f.append(fv)
        h.append(voa.heis_vector(hvec))
    return {"e": e, "f": f, "h": h}


def full_current_basis(voa: VOA, n: int, l: int) -> list:
    """A basis of the diagonal current algebra: all root currents plus Cartan.

    Non-simple root currents are built as left-normalized iterated 0-th
    products of the simple ones, which keeps all structure signs consistent
    with the cocycle.  Length is (n-1)(n+1) = dim of the algebra.
    """
    gens = diagonal_currents(voa, n, l)
    pos = {}
    neg = {}
    for i in range(1, n):
        pos[(i, i)] = gens["e"][i - 1]
        neg[(i, i)] = gens["f"][i - 1]
    for span in range(2, n):
        for i in range(1, n - span + 1):
            j = i + span - 1
            pos[(i, j)] = voa.mode(gens["e"][i - 1], 0, pos[(i + 1, j)])
            neg[(i, j)] = voa.mode(gens["f"][i - 1], 0, neg[(i + 1, j)])
    out = []
    for key in sorted(pos):
        out.append(pos[key])
        out.append(neg[key])
    out.extend(gens["h"])
    return out


def repeated_minus_one_power(voa: VOA, x: StateVector, times: int) -> StateVector:
    """x_{-1} applied ``times`` times to x (so times = l-1 gives the l-fold
    normally ordered power)."""
    out = x
    for _ in range(times):
        out = voa.mode(x, -1, out)
    return out


# ---------------------------------------------------------------------------
# Conformal vectors
# ---------------------------------------------------------------------------

def lattice_conformal(voa: VOA) -> StateVector:
    """Standard conformal vector: half the Gram-inverse-paired quadratic sum.

    Equals (1/2) sum_a b_a(-1) (dual b_a)(-1) vacuum; central charge is the
    rank.
    """
    inv = gram_inverse(voa.lattice)
    out = StateVector()
    for a in range(voa.lattice.rank):
        dual = voa.heis_vector(inv[a])
        out.add_vector(voa.heisenberg_mode(_unit(voa.lattice.rank, a), -1, dual),
                       Rat(1, 2))
    return out


def coset_virasoro_candidate(voa: VOA, n: int, l: int, i: int,
                             diff=None) -> StateVector:
    """The row-i coset Virasoro vector built from factor differences.

    (1/(l+2)) sum_{p<q} [ (1/(2l)) (row diff)(-1)^2 + e^{diff} + e^{-diff} ],
    a Virasoro vector of central charge 2(l-1)/(l+2) commuting with the
    diagonal Heisenberg modes.
    """
    if not 1 <= i <= n - 1:
        raise ValueError("row index out of range")
    diff = diff or ambient_diff(n, l)
    out = StateVector()
    for p in range(1, l + 1):
        for q in range(p + 1, l + 1):
            d = diff(i, p, q)
            out.add_vector(quadratic_fock(voa, d, Rat(1, 2 * l)))
            out.add_vector(voa.exp_vector(d))
            out.add_vector(voa.exp_vector(_neg(d)))
    return out.scaled(Rat(1, l + 2))


def sugawara(voa: VOA, currents: list, level: int, dual_coxeter: int):
    """Sugawara conformal vector from an in-engine weight-one pairing.

    ``currents`` must be a basis of a weight-one current algebra at the given
    level.  The pairing P_ab is read off from (u_a)_1 u_b = P_ab * vacuum
    (anything off the vacuum line is an error); the result is

        (level / (2 (level + dual_coxeter))) * sum_ab (P^{-1})_ab u_a(-1) u_b.

    Expected central charge: level * dim / (level + dual_coxeter).
    """
    dim = len(currents)
    pairing = []
    for a, ua in enumerate(currents):
        row = []
        for b, ub in enumerate(currents):
            prod = voa.mode(ua, 1, ub)
            coeff = prod.get(voa.vacuum, Rat(0))
            if StateVector({voa.vacuum: coeff} if coeff else {}) != prod:
                raise ValueError(f"weight-one pairing of currents {a},{b} "
                                 "is not a multiple of the vacuum")
            row.append(coeff)
        pairing.append(row)
    inv = _matrix_inverse(pairing)
    out = StateVector()
    for a in range(dim):
        for b in range(dim):
            if inv[a][b]:
                out.add_vector(voa.mode(currents[a], -1, currents[b]), inv[a][b])
    return out.scaled(Rat(level, 2 * (level + dual_coxeter))), pairing


def coset_conformal(voa: VOA, omega_full: StateVector, omega_sub: StateVector,
                    subalgebra_states: list):
    """omega_full - omega_sub, certifying the semi-conformal property first.

    For every supplied state u of the subalgebra, checks L(m) u = L'(m) u for
    all m >= -1 (modes ω_k, k >= 0), which is the condition making the
    difference a commuting conformal vector on the commutant.  Returns
    (vector, report).
    """
    failures = []
    for idx, u in enumerate(subalgebra_states):
        max_w = u.max_weight(voa.lattice)
        top = int(max_w) + 2 if max_w is not None else 4
        for k in range(0, top + 1):
            lhs = voa.mode(omega_full, k, u)
            rhs = voa.mode(omega_sub, k, u)
            if lhs != rhs:
                failures.append({"state_index": idx, "mode": k - 1})
    out = StateVector(omega_full)
    out.add_vector(omega_sub, -1)
    return out, {"semi_conformal": not failures, "failures": failures}


def _matrix_inverse(rows):
    n = len(rows)
    m = [[Rat(x) for x in row] + [ONE if i == j else Rat(0) for j in range(n)]
         for i, row in enumerate(rows)]
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
    return [row[n:] for row in m]


# ---------------------------------------------------------------------------
# Transposed-side (tilde) generators
# ---------------------------------------------------------------------------
# These live on the transposed side of a configuration (n, l): n copies of
# the rank l-1 lattice (or its difference sublattice), with row index
# i in 1..l-1 and factor indices p, q in 1..n.

def transposed_virasoro(voa_t: VOA, n: int, l: int, i: int,
                        diff=None) -> StateVector:
    """Row-i Virasoro vector on the transposed side (central charge 2(n-1)/(n+2))."""
    return coset_virasoro_candidate(voa_t, l, n, i, diff or ambient_diff(l, n))


def transposed_cubic(voa_t: VOA, n: int, l: int, i: int,
                     diff=None) -> StateVector:
    """Row-i weight-3 generator on the transposed side.

    sum_{p,q,r} (d_pq)(-1)^2 (d_pr)(-1) vacuum
      - 3n sum_{q != r} [ sum_{p != q} d_pq + sum_{p != r} d_pr ](-1) e^{d_qr},
    where d_xy = (row i, factor x) - (row i, factor y).  Identically zero
    for n = 2.
    """
    if not 1 <= i <= l - 1:
        raise ValueError("row index out of range")
    diff = diff or ambient_diff(l, n)

    def d(p, q):
        return diff(i, p, q)

    out = StateVector()
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            if q == p:
                continue
            for r in range(1, n + 1):
                if r == p:
                    continue
                dpq, dpr = d(p, q), d(p, r)
                cubic = voa_t.heisenberg_mode(
                    dpq, -1, voa_t.heisenberg_mode(dpq, -1, voa_t.heis_vector(dpr)))
                out.add_vector(cubic)
    for q in range(1, n + 1):
        for r in range(1, n + 1):
            if q == r:
                continue
            h = (0,) * voa_t.lattice.rank
            for p in range(1, n + 1):
                if p != q:
                    h = _vadd(h, d(p, q))
                if p != r:
                    h = _vadd(h, d(p, r))
            out.add_vector(
                voa_t.heisenberg_mode(h, -1, voa_t.exp_vector(d(q, r))), -3 * n)
    return out


def quadratic_pair_generator(voa_t: VOA, n: int, i: int, j: int,
                             diff=None) -> StateVector:
    """Ising-type quadratic vector pairing transposed factors i and j+1.

    (1/16) d(-1)^2 vacuum - (1/4)(e^d + e^{-d}) with d the difference of the
    single row vector in factors i and j+1 of the transposed (l = 2) side;
    defined for 1 <= i <= j <= n-1.
    """
    if not 1 <= i <= j <= n - 1:
        raise ValueError("indices out of range")
    diff = diff or ambient_diff(2, n)
    d = diff(1, i, j + 1)
    out = quadratic_fock(voa_t, d, Rat(1, 16))
    out.add_vector(voa_t.exp_vector(d), Rat(-1, 4))
    out.add_vector(voa_t.exp_vector(_neg(d)), Rat(-1, 4))
    return out


def quadratic_run_generator(voa: VOA, n: int, i: int, j: int,
                            diff=None) -> StateVector:
    """Ising-type quadratic vector from a run of rows on the two-factor side.

    (1/16) s(-1)^2 vacuum - (1/4)(e^s + e^{-s}) with s the sum over rows
    i..j of (row k, factor 1) - (row k, factor 2); the untransposed partner
    of :func:`quadratic_pair_generator`.
    """
    if not 1 <= i <= j <= n - 1:
        raise ValueError("indices out of range")
    diff = diff or ambient_diff(n, 2)
    s = (0,) * len(diff(1, 1, 2))
    for k in range(i, j + 1):
        s = _vadd(s, diff(k, 1, 2))
    out = quadratic_fock(voa, s, Rat(1, 16))
    out.add_vector(voa.exp_vector(s), Rat(-1, 4))
    out.add_vector(voa.exp_vector(_neg(s)), Rat(-1, 4))
    return out


# ---------------------------------------------------------------------------
# Untransposed-side generators: authoritative pullbacks and printed forms
# ---------------------------------------------------------------------------

def untransposed_generators(tau, n: int, l: int, i: int):
    """Column-i generator pair on the untransposed side, defined as the
    pullback of the transposed pair through the factor-transposition map.

    ``tau`` is the LatticeVoaMap from the untransposed difference-sublattice
    algebra onto the transposed one (latvoa.maps.build_tau); the generators
    returned live in tau's source algebra.  Returns (virasoro, cubic).
    """
    voa_t = tau.target
    diff = sublattice_diff(l, n)
    omega_t = transposed_virasoro(voa_t, n, l, i, diff)
    cubic_t = transposed_cubic(voa_t, n, l, i, diff)
    inv = tau.inverse()
    return inv.push(omega_t), inv.push(cubic_t)


def printed_untransposed_virasoro(voa: VOA, n: int, l: int, i: int,
                                  diff=None) -> StateVector:
    """Closed-form column-i Virasoro vector on the (n, l) side.

    (1/(n+2)) sum_{1<=p<=q<=n-1} [ (1/(2n)) s_pq(-1)^2 vacuum
        + (-1)^{p-q+1} (e^{s_pq} + e^{-s_pq}) ],
    where s_pq = sum over rows k in p..q of (row k, factor i) - (row k,
    factor i+1).
    """
    if not 1 <= i <= l - 1:
        raise ValueError("column index out of range")
    diff = diff or ambient_diff(n, l)
    out = StateVector()
    for p in range(1, n):
        for q in range(p, n):
            s = (0,) * len(diff(1, i, i + 1))
            for k in range(p, q + 1):
                s = _vadd(s, diff(k, i, i + 1))
            out.add_vector(quadratic_fock(voa, s, Rat(1, 2 * n)))
            sign = (-1) ** (p - q + 1)
            out.add_vector(voa.exp_vector(s), sign)
            out.add_vector(voa.exp_vector(_neg(s)), sign)
    return out.scaled(Rat(1, n + 2))


def printed_untransposed_cubic(voa: VOA, n: int, l: int, i: int,
                               diff=None) -> StateVector:
    """Closed-form column-i weight-3 vector on the (n, l) side, for
    comparison against the authoritative pullback.

    With d_k = (row k, factor i) - (row k, factor i+1) and
    C_p = sum_{k<p} k d_k - sum_{k>=p} (n-k) d_k:

        - sum_p [ sum_{q<p} (d_q+..+d_{p-1})(-1)^2
                 + sum_{q>=p} (d_p+..+d_q)(-1)^2 ] (-C_p)(-1) vacuum
        + 3n sum_{q != r} (-1)^{q-r} (C_q + C_r)(-1) e^{gamma_qr},

    gamma_qr = -(d_r+..+d_{q-1}) for r < q and d_q+..+d_{r-1} for r > q.
    Two index slips in the printed source display were repaired in the only
    typographically adjacent way; the pullback remains the authority and the
    two routes are diffed by untransposed_comparison.
    """
    if not 1 <= i <= l - 1:
        raise ValueError("column index out of range")
    diff = diff or ambient_diff(n, l)
    rank = len(diff(1, i, i + 1))
    d = {k: diff(k, i, i + 1) for k in range(1, n)}

    def run(a, b):
        s = (0,) * rank
        for k in range(a, b + 1):
            s = _vadd(s, d[k])
        return s

    def c_vec(p):
        s = (0,) * rank
        for k in range(1, p):
            s = _vadd(s, tuple(k * x for x in d[k]))
        for k in range(p, n):
            s = _vadd(s, tuple(-(n - k) * x for x in d[k]))
        return s

    out = StateVector()
    for p in range(1, n + 1):
        base = voa.heis_vector(_neg(c_vec(p)))
        for q in range(1, p):
            h = run(q, p - 1)
            out.add_vector(
                voa.heisenberg_mode(h, -1, voa.heisenberg_mode(h, -1, base)), -1)
        for q in range(p, n):
            h = run(p, q)
            out.add_vector(
                voa.heisenberg_mode(h, -1, voa.heisenberg_mode(h, -1, base)), -1)
    for q in range(1, n + 1):
        for r in range(1, n + 1):
            if r == q:
                continue
            h = _vadd(c_vec(q), c_vec(r))
            point = _neg(run(r, q - 1)) if r < q else run(q, r - 1)
            out.add_vector(
                voa.heisenberg_mode(h, -1, voa.exp_vector(point)),
                3 * n * (-1) ** (q - r))
    return out


def untransposed_comparison(tau, n: int, l: int, i: int) -> dict:
    """Diff the pullback generators against the printed closed forms.

    Returns equality flags and difference-term counts; runs on the
    difference-sublattice algebra tau was built on.
    """
    voa = tau.source
    diff = sublattice_diff(n, l)
    omega_pull, cubic_pull = untransposed_generators(tau, n, l, i)
    omega_printed = printed_untransposed_virasoro(voa, n, l, i, diff)
    cubic_printed = printed_untransposed_cubic(voa, n, l, i, diff)
    d_omega = StateVector(omega_pull)
    d_omega.add_vector(omega_printed, -1)
    d_cubic = StateVector(cubic_pull)
    d_cubic.add_vector(cubic_printed, -1)
    return {
        "virasoro_equal": not d_omega,
        "virasoro_difference_terms": len(d_omega),
        "cubic_equal": not d_cubic,
        "cubic_difference_terms": len(d_cubic),
        "cubic_printed_terms": len(cubic_printed),
        "cubic_pullback_terms": len(cubic_pull),
    }
