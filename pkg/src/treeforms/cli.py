"""Command-line front end: group computations, certified verifications,
and form invariants as reproducible batch commands.

Exit codes: 0 pass, 1 usage or input error, 2 resource limit,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import lattice, quadratic, treegroups
from . import trees as tr
from .abelian import fp_group, hom, identity_hom
from .errors import ResourceLimitError, TreeformsError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2
EXIT_FAILED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(TreeformsError):
    pass


def _emit_json(obj):
    print(json.dumps(obj, sort_keys=True, separators=(", ", ": ")))


# ---------------------------------------------------------------------------
# groups


def cmd_groups(args):
    tg = treegroups.build(args.kind, args.order, args.labels)
    payload = {
        "kind": args.kind,
        "order": args.order,
        "labels": args.labels,
        "rank": tg.group.rank,
        "torsion": list(tg.group.invariant_factors),
        "generators": [tr.print_tree(t) for t in tg.gens],
    }
    if args.format == "json":
        _emit_json(payload)
    else:
        print(f"{args.kind}({args.order}, {args.labels}) = {tg.group.describe()}")
        print(f"rank {payload['rank']}, torsion {payload['torsion']}, "
              f"{len(payload['generators'])} generators")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _random_rooted(order, m, rng):
    if order == 0:
        return tr.Leaf(rng.randint(1, m))
    k = rng.randint(0, order - 1)
    return tr.Node(_random_rooted(k, m, rng), _random_rooted(order - 1 - k, m, rng))


def _random_order0(m, rng):
    vec = [rng.randint(-2, 2) for _ in range(m)]
    if not any(vec):
        vec[rng.randrange(m)] = 1
    return treegroups.lie_element(
        0, m, tr.TreeVector([(tr.Leaf(j + 1), c) for j, c in enumerate(vec) if c])
    )


def verify_lemma41(m, samples, max_order, seed):
    """Split-independence of the induced linear map, plus the product
    invariance identity on small trees."""
    rng = random.Random(seed)
    failures = []
    for _ in range(samples):
        n_ord = rng.randint(0, max_order)
        k1 = rng.randint(0, n_ord)
        t = tr.inner_product(
            _random_rooted(k1, m, rng), _random_rooted(n_ord - k1, m, rng)
        )
        images = [_random_order0(m, rng) for _ in range(m)]
        vals = treegroups.psi_split_values(t, images)
        if len(set(vals)) != 1:
            failures.append(tr.print_tree(t))
    invariance_fail = 0
    invariance_total = 0
    for total in range(0, 2):
        for k1 in range(total + 1):
            for k2 in range(total - k1 + 1):
                k3 = total - k1 - k2
                for i in tr.enumerate_trees("rooted", k1, m):
                    for j in tr.enumerate_trees("rooted", k2, m):
                        for k in tr.enumerate_trees("rooted", k3, m):
                            invariance_total += 1
                            lhs = tr.inner_product(tr.rooted_product(i, j), k)
                            rhs = tr.inner_product(i, tr.rooted_product(j, k))
                            if lhs != rhs:
                                invariance_fail += 1
    return {
        "theorem": "lemma41",
        "labels": m,
        "samples": samples,
        "split_failures": failures,
        "invariance_checked": invariance_total,
        "invariance_failures": invariance_fail,
        "passed": not failures and invariance_fail == 0,
    }


def _verify_report(args):
    if args.theorem == "exact35":
        return treegroups.verify_exact(args.order, args.labels).to_json() | {
            "theorem": "exact35"
        }
    if args.theorem == "cor420":
        return treegroups.build_Tinf_universal(args.order, args.labels).to_json() | {
            "theorem": "cor420"
        }
    if args.theorem == "cor415":
        lam = treegroups.tree_pairing_form(args.order, args.labels)
        report, _ = quadratic.exact_sequence_symmetric(lam)
        return {
            "theorem": "cor415",
            "order": args.order,
            "labels": args.labels,
            "p_injective": report["p_injective"],
            "quotient_surjective": report["quotient_surjective"],
            "middle_exact": report["middle_exact"],
            "passed": report["passed"],
        }
    if args.theorem == "lemma41":
        return verify_lemma41(args.labels, args.samples, args.max_order, args.seed)
    raise _UsageError(f"unknown verification target {args.theorem!r}")


def cmd_verify(args):
    start = time.monotonic()
    report = _verify_report(args)
    elapsed = time.monotonic() - start
    if args.format == "json":
        _emit_json(report)
    else:
        status = "PASS" if report["passed"] else "FAIL"
        print(f"{status} {args.theorem} {report} [{elapsed:.2f}s]")
    return EXIT_OK if report["passed"] else EXIT_FAILED


# ---------------------------------------------------------------------------
# form


def _parse_matrix(args):
    if args.named:
        return lattice.named_form(args.named)
    if args.matrix:
        return lattice.form_from_rows(json.loads(args.matrix))
    raise _UsageError("need --named or --matrix")


def _parse_ints(text, what):
    try:
        return [int(s) for s in text.split(",") if s.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad {what}: {exc}") from exc


def _bilinear_from_json(data):
    A = fp_group(
        data["A"]["generators"],
        [tuple(r) for r in data["A"].get("relations", [])],
        data["A"].get("names"),
    )
    M = fp_group(
        data["M"]["generators"],
        [tuple(r) for r in data["M"].get("relations", [])],
        data["M"].get("names"),
    )
    star = (
        hom(M, M, data["star"]) if data.get("star") is not None else identity_hom(M)
    )
    return quadratic.BilinearForm(A, M, data["lambda"], star=star)


def cmd_form(args):
    if args.action in ("tau", "ks"):
        form = _parse_matrix(args)
        if args.c is None:
            c = lattice.find_characteristic(form)
        else:
            c = _parse_ints(args.c, "--c")
        if args.action == "tau":
            value = lattice.tau(form, c)
        else:
            if args.tau_m is None:
                raise _UsageError("ks needs --tau-m")
            value = lattice.ks(form, c, args.tau_m)
        if args.format == "json":
            _emit_json({"action": args.action, "c": c, "value": value})
        else:
            print(value)
        return EXIT_OK
    if args.action == "arf":
        q = _parse_ints(args.q, "--q") if args.q else []
        if args.matrix:
            space = lattice.z2_space(json.loads(args.matrix), q)
        else:
            if args.dim is None or args.dim % 2:
                raise _UsageError("arf needs an even --dim or a --matrix")
            space = lattice.hyperbolic_z2(args.dim // 2, q or [0] * args.dim)
        value = lattice.arf_z2(space)
        if args.format == "json":
            _emit_json({"action": "arf", "value": value})
        else:
            print(value)
        return EXIT_OK
    if args.action == "brown":
        if not args.matrix or args.mu is None:
            raise _UsageError("brown needs --matrix and --mu")
        ref = lattice.z4_refinement(
            json.loads(args.matrix), _parse_ints(args.mu, "--mu")
        )
        value = lattice.brown_z8(ref)
        if args.format == "json":
            _emit_json({"action": "brown", "value": value})
        else:
            print(value)
        return EXIT_OK
    if args.action == "universal":
        if not args.input:
            raise _UsageError("universal needs --input FILE")
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        lam = _bilinear_from_json(data)
        if args.variant == "nc":
            pqg = quadratic.universal_nc(lam)
            _emit_json(
                {
                    "representation": "pair",
                    "Mee": lam.M.to_json(),
                    "A": lam.A.to_json(),
                    "commutative": pqg.is_commutative,
                }
            )
            return EXIT_OK
        if args.variant == "commutative":
            ur = quadratic.universal_commutative(lam)
        else:
            ur = quadratic.universal_symmetric(lam)
        _emit_json(
            {
                "Me": ur.qgroup.M_e.to_json(),
                "p": [list(r) for r in ur.qgroup.p.rows],
                "h": [list(r) for r in ur.qgroup.h.rows],
                "mu": [list(v) for v in ur.form.mu_gens],
            }
        )
        return EXIT_OK
    raise _UsageError(f"unknown form action {args.action!r}")


# ---------------------------------------------------------------------------
# selftest


def _selftest_checks(seed, quick):
    exact_grid = [(n, m) for n in (0, 1) for m in (1, 2, 3)]
    if not quick:
        exact_grid += [(2, 1), (2, 2)]
    checks = []
    for n, m in exact_grid:
        checks.append(
            (f"exact35({n},{m})",
             lambda n=n, m=m: treegroups.verify_exact(n, m).to_json())
        )
    for n, m in [(0, 1), (0, 2), (1, 1), (1, 2)]:
        checks.append(
            (f"cor420({n},{m})",
             lambda n=n, m=m: treegroups.build_Tinf_universal(n, m).to_json())
        )
        checks.append(
            (f"cor415({n},{m})",
             lambda n=n, m=m: _cor415_json(n, m))
        )

    def small_values():
        ok = True
        for m in (1, 2, 3):
            ok &= treegroups.build_L(0, m).group.describe() in (f"Z^{m}", "Z")
            ok &= treegroups.build_T(0, m).group.rank == m * (m + 1) // 2
            ok &= treegroups.build_Tinf(0, m).group.rank == m * (m + 1) // 2
            ok &= not treegroups.build_T(0, m).group.invariant_factors
            ok &= not treegroups.build_Tinf(0, m).group.invariant_factors
        ok &= treegroups.build_L(1, 2).group.invariant_factors == (2, 2)
        ok &= treegroups.build_L(1, 2).group.rank == 1
        ok &= treegroups.build_T(1, 2).group.invariant_factors == (2, 2, 2, 2)
        ok &= treegroups.build_T(1, 2).group.rank == 0
        return {"passed": bool(ok)}

    checks.append(("small_group_values", small_values))
    checks.append(
        ("lemma41", lambda: verify_lemma41(2, 100 if not quick else 25, 4, seed))
    )
    checks.append(("quadratic_axioms", lambda: _quadratic_suite(seed, quick)))
    checks.append(("lattice_invariants", lambda: _lattice_suite(quick)))
    return checks


def _cor415_json(n, m):
    lam = treegroups.tree_pairing_form(n, m)
    report, _ = quadratic.exact_sequence_symmetric(lam)
    return {"passed": report["passed"]}


def random_hermitian_form(rng):
    """A small random hermitian form on a free base, block-built involution."""
    blocks = []
    k = rng.randint(1, 2)
    for _ in range(k):
        blocks.append(rng.choice(["z+", "z-", "swap", "z4+", "z6-"]))
    gens = 0
    rels = []
    star_rows = []
    for b in blocks:
        if b == "swap":
            star_rows.append(("swap", gens))
            gens += 2
        else:
            star_rows.append((b, gens))
            gens += 1
    for b, at in star_rows:
        if b == "z4+":
            rels.append(tuple(4 if j == at else 0 for j in range(gens)))
        if b == "z6-":
            rels.append(tuple(6 if j == at else 0 for j in range(gens)))
    M = fp_group(gens, rels)
    rows = []
    for b, at in star_rows:
        if b == "swap":
            rows.append(M.unit_vector(at + 1))
            rows.append(M.unit_vector(at))
        elif b in ("z-", "z6-"):
            rows.append(tuple(-1 if j == at else 0 for j in range(gens)))
        else:
            rows.append(M.unit_vector(at))
    star = hom(M, M, rows)
    ga = rng.randint(1, 3)
    A = fp_group(ga)
    values = [[None] * ga for _ in range(ga)]
    for i in range(ga):
        for j in range(i, ga):
            v = [rng.randint(-2, 2) for _ in range(gens)]
            if i == j:
                values[i][i] = [a + b for a, b in zip(v, star.apply(v))]
            else:
                values[i][j] = v
                values[j][i] = list(star.apply(v))
    lam = quadratic.BilinearForm(A, M, values, star=star)
    return lam


def _quadratic_suite(seed, quick):
    rng = random.Random(seed)
    forms = 20 if quick else 50
    morphisms = 8 if quick else 20
    ok = True
    symmetric_instances = 0
    for _ in range(forms):
        lam = random_hermitian_form(rng)
        pqg = quadratic.universal_nc(lam)
        form = quadratic.QuadraticFormData(
            lam.A, lam, pqg, [pqg.mu(lam.A.unit_vector(k))
                              for k in range(lam.A.generators)]
        )
        form.validate(rng)
        ur = quadratic.universal_commutative(lam)
        sq = quadratic.check_square_law(ur.form, rng=rng, samples=2)
        ok &= sq["passed"]
        if lam.has_trivial_involution:
            symmetric_instances += 1
            rep, _ = quadratic.exact_sequence_symmetric(lam)
            ok &= rep["passed"]
    # guaranteed symmetric instances
    for _ in range(5):
        ga = rng.randint(1, 3)
        A = fp_group(ga)
        M = fp_group(1)
        vals = [[None] * ga for _ in range(ga)]
        for i in range(ga):
            for j in range(i, ga):
                v = [rng.randint(-2, 2)]
                vals[i][j] = v
                vals[j][i] = list(v)
        lam = quadratic.BilinearForm(A, M, vals)
        rep, _ = quadratic.exact_sequence_symmetric(lam)
        ok &= rep["passed"]
        symmetric_instances += 1
    for _ in range(morphisms):
        target_lam = random_hermitian_form(rng)
        target_ur = quadratic.universal_commutative(target_lam)
        ga = rng.randint(1, 2)
        A0 = fp_group(ga)
        alpha_rows = [
            [rng.randint(-1, 1) for _ in range(target_lam.A.generators)]
            for _ in range(ga)
        ]
        alpha = hom(A0, target_lam.A, alpha_rows)
        vals = [
            [target_lam.evaluate(alpha_rows[i], alpha_rows[j]) for j in range(ga)]
            for i in range(ga)
        ]
        lam0 = quadratic.BilinearForm(A0, target_lam.M, vals, star=target_lam.star)
        pqg = quadratic.universal_nc(lam0)
        beta = quadratic.induced_morphism(
            pqg, alpha, identity_hom(target_lam.M), target_ur.form
        )
        ok &= beta.check_diagrams(rng)["passed"]
    return {
        "passed": bool(ok),
        "forms": forms + 5,
        "symmetric_instances": symmetric_instances,
        "morphisms": morphisms,
    }


def _lattice_suite(quick):
    import itertools

    ok = True
    e8 = lattice.e8_form()
    ok &= lattice.tau(e8, [0] * 8) == 1
    ok &= lattice.ks(e8, [0] * 8, 0) == 1
    ok &= lattice.tau(lattice.diagonal_form([1]), [1]) == 0
    max_rank = 3 if quick else 4
    for r in range(1, max_rank + 1):
        for signs in itertools.product((1, -1), repeat=r):
            f = lattice.diagonal_form(list(signs))
            c = lattice.find_characteristic(f)
            for x in itertools.product((-2, -1, 0, 1, 2), repeat=r):
                ok &= lattice.torsor_check(f, c, list(x))["passed"]
    for q in itertools.product((0, 1), repeat=4):
        sp = lattice.hyperbolic_z2(2, list(q))
        ok &= lattice.arf_z2(sp) == lattice.arf_democratic(sp)
        zz = lattice.z4_from_z2(sp)
        ok &= lattice.brown_z8(zz) == (4 * lattice.arf_z2(sp)) % 8
    b1 = lattice.z4_refinement([[1]], [1])
    ok &= lattice.brown_z8(b1) == 1
    ok &= lattice.brown_z8(lattice.orthogonal_sum_z4(b1, b1)) == 2
    return {"passed": bool(ok)}


def cmd_selftest(args):
    start = time.monotonic()
    checks = _selftest_checks(args.seed, args.quick)

    def run(item):
        name, fn = item
        try:
            report = fn()
        except ResourceLimitError as exc:
            return name, {"passed": False, "error": f"resource limit: {exc}"}
        return name, report

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run, checks))
    else:
        results = [run(c) for c in checks]
    all_pass = all(rep.get("passed", False) for _, rep in results)
    if args.format == "json":
        _emit_json(
            {
                "seed": args.seed,
                "quick": args.quick,
                "all_pass": all_pass,
                "results": [
                    {"name": name, "passed": rep.get("passed", False)}
                    for name, rep in results
                ],
            }
        )
    else:
        for name, rep in results:
            status = "PASS" if rep.get("passed", False) else "FAIL"
            print(f"{status} {name}")
        print("ALL PASS" if all_pass else "FAILURES PRESENT")
    elapsed = time.monotonic() - start
    if args.time_budget is not None and elapsed > args.time_budget:
        print(
            f"warning: selftest took {elapsed:.1f}s, over budget "
            f"{args.time_budget:.1f}s",
            file=sys.stderr,
        )
    return EXIT_OK if all_pass else EXIT_FAILED


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> _Parser:
    parser = _Parser(prog="treeforms")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("groups", help="compute a tree group")
    g.add_argument("--kind", required=True, choices=["L", "T", "Tinf"])
    g.add_argument("--order", required=True, type=int)
    g.add_argument("--labels", required=True, type=int)
    g.add_argument("--format", choices=["json", "table"], default="table")
    g.set_defaults(fn=cmd_groups)

    v = sub.add_parser("verify", help="run a certified verification")
    v.add_argument("theorem", choices=["exact35", "cor420", "cor415", "lemma41"])
    v.add_argument("--order", type=int, default=0)
    v.add_argument("--labels", type=int, default=2)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--max-order", type=int, default=4)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=["json", "table"], default="table")
    v.set_defaults(fn=cmd_verify)

    f = sub.add_parser("form", help="evaluate a form invariant")
    f.add_argument("action", choices=["tau", "ks", "arf", "brown", "universal"])
    f.add_argument("--named")
    f.add_argument("--matrix")
    f.add_argument("--c")
    f.add_argument("--tau-m", type=int, dest="tau_m")
    f.add_argument("--dim", type=int)
    f.add_argument("--q")
    f.add_argument("--mu")
    f.add_argument("--variant", choices=["symmetric", "commutative", "nc"],
                   default="symmetric")
    f.add_argument("--input")
    f.add_argument("--format", choices=["json", "table"], default="table")
    f.set_defaults(fn=cmd_form)

    s = sub.add_parser("selftest", help="run the full verification grid")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--quick", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--time-budget", type=float, default=None)
    s.add_argument("--format", choices=["json", "table"], default="table")
    s.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except TreeformsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
