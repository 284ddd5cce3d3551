"""Command-line verification driver.

One command per process; every subcommand builds the requested algebras,
runs its checks, and emits a deterministic report (JSON canonical, CSV as a
flattened projection).  Exit status: 0 when every verdict passes, 1 when any
fails, 2 on usage or guard errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from .cocycle import TwoCocycle
from .commutant import (Subspace, certify_product_closure,
                        commutant_of_generators, generated_subalgebra,
                        heisenberg_commutant)
from .elements import (coset_virasoro_candidate, diagonal_currents,
                       full_current_basis, lattice_conformal, coset_conformal,
                       printed_untransposed_virasoro, quadratic_pair_generator,
                       sublattice_diff, sugawara, transposed_cubic,
                       transposed_virasoro, untransposed_generators)
from .lattice import (GuardError, build_a_tensor, determinant, dual_quotient,
                      inner, sublattice_k, sublattice_n)
from .levi import (Composition, diagonal_subalgebra, factor_block_commutant,
                   levi_realization, relative_parafermion)
from .maps import (LatticeVoaMap, build_tau, build_theta, difference_voa,
                   verify_homomorphism)
from .rat import Rat, format_rat
from .vertex import VOA


def _jsonable(x):
    """Recursively convert a report value to canonical JSON-ready data."""
    if isinstance(x, bool) or isinstance(x, int) or isinstance(x, str):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return format_rat(x)
    if isinstance(x, float):
        raise TypeError("floats are banned from reports; use exact rationals")
    return str(x)


def render_report(report: dict, fmt: str) -> str:
    data = _jsonable(report)
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        lines = ["path,value"]
        for path, value in _flatten(data):
            lines.append(f"{path},{value}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _flatten(data, prefix=""):
    if isinstance(data, dict):
        for k in sorted(data):
            yield from _flatten(data[k], f"{prefix}{k}.")
    elif isinstance(data, list):
        for i, v in enumerate(data):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        text = str(data)
        if "," in text or '"' in text:
            text = '"' + text.replace('"', '""') + '"'
        yield prefix.rstrip("."), text


def _dims(sub, cutoff):
    return [sub.dim(w) for w in range(cutoff + 1)]


def _dual_quotient_size(lat):
    try:
        return len(dual_quotient(lat))
    except GuardError:
        return None


# ---------------------------------------------------------------------------
# Subcommands: each returns (report dict, ok bool)
# ---------------------------------------------------------------------------

def cmd_lattice_info(n: int, l: int) -> tuple:
    ambient = build_a_tensor(n, l)
    diag = sublattice_k(n, l)
    diff = sublattice_n(n, l)
    ortho = all(
        inner(u, v, ambient) == 0
        for u in diag.embedding for v in diff.embedding)
    report = {
        "command": "lattice-info",
        "n": n,
        "l": l,
        "ambient": {"rank": ambient.rank, "det": determinant(ambient)},
        "diagonal": {
            "rank": diag.lattice.rank,
            "gram": [list(r) for r in diag.lattice.gram],
            "det": determinant(diag.lattice),
            "dual_quotient_size": _dual_quotient_size(diag.lattice),
        },
        "difference": {
            "rank": diff.lattice.rank,
            "gram": [list(r) for r in diff.lattice.gram],
            "det": determinant(diff.lattice),
            "dual_quotient_size": _dual_quotient_size(diff.lattice),
        },
        "orthogonal": ortho,
    }
    return report, ortho


VIRASORO_CANDIDATES = (
    "row-coset", "transposed-row", "column-closed-form", "quadratic-pair",
    "lattice", "sugawara", "coset",
)


def _virasoro_candidates(n: int, l: int, which: str, cutoff: int):
    """Yield (label, voa, vector, expected_c) for the named candidate."""
    if which == "row-coset":
        voa = difference_voa(n, l, cutoff)
        d = sublattice_diff(n, l)
        for i in range(1, n):
            yield (f"row-coset[{i}]", voa,
                   coset_virasoro_candidate(voa, n, l, i, d),
                   Rat(2 * (l - 1), l + 2))
    elif which == "transposed-row":
        voa = difference_voa(l, n, cutoff)
        d = sublattice_diff(l, n)
        for i in range(1, l):
            yield (f"transposed-row[{i}]", voa,
                   transposed_virasoro(voa, n, l, i, d),
                   Rat(2 * (n - 1), n + 2))
    elif which == "column-closed-form":
        voa = difference_voa(n, l, cutoff)
        d = sublattice_diff(n, l)
        for i in range(1, l):
            yield (f"column-closed-form[{i}]", voa,
                   printed_untransposed_virasoro(voa, n, l, i, d),
                   Rat(2 * (n - 1), n + 2))
    elif which == "quadratic-pair":
        if l != 2:
            raise GuardError("quadratic-pair candidates need l = 2")
        voa = difference_voa(2, n, cutoff)
        d = sublattice_diff(2, n)
        for i in range(1, n):
            yield (f"quadratic-pair[{i},{i}]", voa,
                   quadratic_pair_generator(voa, n, i, i, d), Rat(1, 2))
    elif which == "lattice":
        voa = VOA(build_a_tensor(n, l), cutoff)
        yield "lattice", voa, lattice_conformal(voa), Rat((n - 1) * l)
    elif which in ("sugawara", "coset"):
        voa = VOA(build_a_tensor(n, l), cutoff)
        currents = full_current_basis(voa, n, l)
        omega_sub, _ = sugawara(voa, currents, l, n)
        c_sub = Rat(l * (n * n - 1), n + l)
        if which == "sugawara":
            yield "sugawara", voa, omega_sub, c_sub
        else:
            omega, rep = coset_conformal(voa, lattice_conformal(voa),
                                         omega_sub, currents)
            if not rep["semi_conformal"]:
                raise GuardError("coset candidate is not semi-conformal")
            yield "coset", voa, omega, Rat((n - 1) * l) - c_sub
    else:
        raise GuardError(f"unknown candidate {which!r}; choose from "
                         + ", ".join(VIRASORO_CANDIDATES))


def cmd_virasoro(n: int, l: int, which: str, cutoff: int) -> tuple:
    weight_bound = min(4, max(2, cutoff - 3))
    rows = []
    ok = True
    for label, voa, vec, expected in _virasoro_candidates(n, l, which, cutoff):
        rep = voa.virasoro_check(vec, expected_c=expected,
                                 weight_bound=weight_bound)
        rows.append({
            "candidate": label,
            "ok": rep["ok"],
            "c": rep["c"],
            "expected_c": expected,
            "commutator_failures": len(rep["commutator_failures"]),
        })
        ok = ok and rep["ok"]
    report = {
        "command": "virasoro",
        "n": n,
        "l": l,
        "which": which,
        "cutoff": cutoff,
        "weight_bound": weight_bound,
        "results": rows,
        "ok": ok,
    }
    return report, ok


def _duality_sides(n: int, l: int, cutoff: int, max_states, threads: int):
    def coset_side():
        voa = VOA(build_a_tensor(n, l), cutoff, max_states=max_states)
        cur = diagonal_currents(voa, n, l)
        sub = commutant_of_generators(
            voa, cur["e"] + cur["f"] + cur["h"], cutoff)
        return _dims(sub, cutoff)

    def parafermion_side():
        voa = VOA(build_a_tensor(l, n), cutoff, max_states=max_states)
        real = levi_realization(voa, Composition((1,) * l), n)
        kernel = heisenberg_commutant(voa, real.center_directions, cutoff)
        inside = diagonal_subalgebra(voa, l, n, cutoff)
        return _dims(kernel.intersect(inside), cutoff)

    if threads >= 2:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fa = pool.submit(coset_side)
            fb = pool.submit(parafermion_side)
            return fa.result(), fb.result()
    return coset_side(), parafermion_side()


def cmd_duality(n: int, l: int, cutoff: int, max_states=None,
                threads: int = 1) -> tuple:
    dims_a, dims_b = _duality_sides(n, l, cutoff, max_states, threads)
    table = [{"weight": w, "coset": a, "parafermion": b, "equal": a == b}
             for w, (a, b) in enumerate(zip(dims_a, dims_b))]
    ok = all(row["equal"] for row in table)
    report = {
        "command": "duality",
        "n": n,
        "l": l,
        "cutoff": cutoff,
        "coset_dims": dims_a,
        "parafermion_dims": dims_b,
        "per_weight": table,
        "ok": ok,
    }
    return report, ok


def cmd_levi_duality(comp, n: int, cutoff: int, max_states=None,
                     threads: int = 1) -> tuple:
    comp = Composition(tuple(comp))
    l = comp.total

    def tensor_side():
        voa = VOA(build_a_tensor(n, l), cutoff, max_states=max_states)
        return _dims(factor_block_commutant(voa, comp, n, cutoff), cutoff)

    def relative_side():
        voa = VOA(build_a_tensor(l, n), cutoff, max_states=max_states)
        return _dims(relative_parafermion(voa, comp, n, cutoff), cutoff)

    if threads >= 2:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fa = pool.submit(tensor_side)
            fb = pool.submit(relative_side)
            dims_a, dims_b = fa.result(), fb.result()
    else:
        dims_a, dims_b = tensor_side(), relative_side()
    table = [{"weight": w, "tensor_coset": a, "relative_parafermion": b,
              "equal": a == b}
             for w, (a, b) in enumerate(zip(dims_a, dims_b))]
    ok = all(row["equal"] for row in table)
    report = {
        "command": "levi-duality",
        "composition": list(comp.parts),
        "n": n,
        "l": l,
        "cutoff": cutoff,
        "tensor_coset_dims": dims_a,
        "relative_parafermion_dims": dims_b,
        "per_weight": table,
        "ok": ok,
    }
    return report, ok


def cmd_map_check(n: int, l: int, cutoff: int, seed: int = 0) -> tuple:
    src = difference_voa(n, l, cutoff)
    tgt = difference_voa(l, n, cutoff)
    tau = build_tau(src, tgt, n, l)
    hom = verify_homomorphism(tau)

    theta = build_theta(src)
    hom_theta = verify_homomorphism(theta)

    # generated generator subalgebras map onto each other per weight
    d_t = sublattice_diff(l, n)
    gens_t, gens_s = [], []
    for i in range(1, l):
        gens_t.append(transposed_virasoro(tgt, n, l, i, d_t))
        cub = transposed_cubic(tgt, n, l, i, d_t)
        if cub:
            gens_t.append(cub)
        om_s, cub_s = untransposed_generators(tau, n, l, i)
        gens_s.append(om_s)
        if cub_s:
            gens_s.append(cub_s)
    sub_s = generated_subalgebra(src, gens_s, cutoff)
    sub_t = generated_subalgebra(tgt, gens_t, cutoff)
    pushed = Subspace(tgt)
    for v in sub_s.vectors():
        pushed.insert_vector(tau.push(v))
    pushed_equal = pushed.equals(sub_t)
    closure_failures = certify_product_closure(
        src, sub_s, samples=25, rng=random.Random(seed))

    # Negative control: the same map data against a target whose cocycle
    # table has one flipped sign must fail certification.  (Corrupting the
    # map's own linear signs would NOT fail: those are exactly the character
    # freedom of the lift.)
    bad_table = tuple(tuple(-v if (i, j) == (0, 0) else v
                            for j, v in enumerate(row))
                      for i, row in enumerate(tgt.cocycle.table))
    bad_voa = VOA(tgt.lattice, tgt.cutoff, cocycle=TwoCocycle(bad_table))
    bad = LatticeVoaMap("corrupted", tau.source, bad_voa, tau.matrix,
                        tau.quad, tau.linear)
    bad_rep = verify_homomorphism(bad, cutoff=min(4, cutoff))
    negative_control = not bad_rep["ok"]

    ok = (hom["ok"] and hom_theta["ok"] and pushed_equal
          and not closure_failures and negative_control)
    report = {
        "command": "map-check",
        "n": n,
        "l": l,
        "cutoff": cutoff,
        "seed": seed,
        "transposition": {k: hom[k] for k in
                          ("ok", "pairs_checked", "products_checked")},
        "negation": {k: hom_theta[k] for k in
                     ("ok", "pairs_checked", "products_checked")},
        "generator_subalgebra_dims": {
            "source": _dims(sub_s, cutoff),
            "target": _dims(sub_t, cutoff),
            "pushed_equal": pushed_equal,
        },
        "closure_sample_failures": len(closure_failures),
        "negative_control_fails": negative_control,
        "ok": ok,
    }
    return report, ok


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latvoa",
        description="Exact verification of lattice current-algebra cosets, "
                    "parafermion commutants, and their dualities.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_l=True):
        p.add_argument("--config", help="JSON file supplying defaults for "
                                        "any flag of this subcommand")
        p.add_argument("--n", type=int, help="copies of the base direction "
                                             "per factor (>= 2)")
        if need_l:
            p.add_argument("--l", type=int, help="number of tensor factors "
                                                 "(>= 2)")
        p.add_argument("--cutoff", type=int, help="weight truncation")
        p.add_argument("--max-states", type=int, dest="max_states",
                       help="guard: largest allowed basis size")
        p.add_argument("--threads", type=int,
                       help="worker threads (results are thread-count "
                            "independent; default 1)")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), dest="format",
                       help="report format (default json)")
        p.add_argument("--seed", type=int,
                       help="seed for sampled certifications (default 0)")

    p = sub.add_parser("lattice-info", help="Gram/dual data of the diagonal "
                                            "and difference sublattices")
    common(p)

    p = sub.add_parser("virasoro", help="virasoro_check on a named candidate")
    common(p)
    p.add_argument("--which", default="row-coset",
                   choices=VIRASORO_CANDIDATES)

    p = sub.add_parser("duality", help="coset vs parafermion graded "
                                       "dimensions")
    common(p)

    p = sub.add_parser("levi-duality", help="block tensor coset vs relative "
                                            "parafermion")
    common(p, need_l=False)
    p.add_argument("--comp", help="composition, e.g. \"1,2\"")

    p = sub.add_parser("map-check", help="certify the transposition map and "
                                         "generator correspondences")
    common(p)
    return parser


_DEFAULT_CUTOFF = {
    "lattice-info": 0, "virasoro": 6, "duality": 4, "levi-duality": 4,
    "map-check": 4,
}


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Merge: explicit flags > config file values > built-in defaults."""
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config: {exc}")
        if not isinstance(loaded, dict):
            parser.error("config must be a JSON object")
        for key, value in loaded.items():
            attr = key.replace("-", "_")
            if attr == "command":
                continue
            if not hasattr(args, attr):
                parser.error(f"unknown config key {key!r}")
            if getattr(args, attr) is None:
                setattr(args, attr, value)
    if getattr(args, "cutoff", None) is None:
        args.cutoff = _DEFAULT_CUTOFF[args.command]
    for attr, default in (("threads", 1), ("format", "json"), ("seed", 0)):
        if getattr(args, attr, None) is None:
            setattr(args, attr, default)


def _validate(args, parser):
    if getattr(args, "n", None) is not None and args.n < 2:
        parser.error("--n must be >= 2")
    if getattr(args, "l", None) is not None and args.l < 2:
        parser.error("--l must be >= 2")
    if args.cutoff is not None and args.cutoff < 0:
        parser.error("--cutoff must be >= 0")
    if getattr(args, "max_states", None) is not None and args.max_states < 1:
        parser.error("--max-states must be positive")
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be positive")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)
    _validate(args, parser)
    need_nl = args.command != "levi-duality"
    if getattr(args, "n", None) is None:
        parser.error("--n is required")
    if need_nl and getattr(args, "l", None) is None:
        parser.error("--l is required")
    try:
        if args.command == "lattice-info":
            report, ok = cmd_lattice_info(args.n, args.l)
        elif args.command == "virasoro":
            report, ok = cmd_virasoro(args.n, args.l, args.which, args.cutoff)
        elif args.command == "duality":
            report, ok = cmd_duality(args.n, args.l, args.cutoff,
                                     args.max_states, args.threads)
        elif args.command == "levi-duality":
            if not args.comp:
                parser.error("--comp is required for levi-duality")
            try:
                parts = tuple(int(p) for p in str(args.comp).split(","))
            except ValueError:
                parser.error("--comp must be comma-separated integers")
            report, ok = cmd_levi_duality(parts, args.n, args.cutoff,
                                          args.max_states, args.threads)
        else:
            report, ok = cmd_map_check(args.n, args.l, args.cutoff, args.seed)
    except (GuardError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render_report(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
