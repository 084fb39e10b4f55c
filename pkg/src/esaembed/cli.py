"""Command-line front end: ``esaembed generate|embed|verify|obstruct``.

Exit codes: 0 pass, 1 a check failed (witness in the report), 2 usage or
input error, 3 the requested instance exceeds the block budget.
"""
from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .blocks import DEFAULT_MAX_BLOCKS, layout_for
from .errors import DomainError, PreconditionError, ReductionError, ResourceError
from .graphs import DIAMOND, FAMILIES, VertexLabel, build_graph, frac_str, parse_frac, upward_reachability
from .signvec import L1, NORMS, SUMMING, SignVector, axiom_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def _check_params(family: str, n: int, k: int) -> None:
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}")
    if n < 0 or k < 2:
        raise UsageError(f"need n >= 0 and k >= 2, got n={n}, k={k}")


# generate / embed

def cmd_generate(args) -> int:
    _check_params(args.family, args.n, args.k)
    g = build_graph(args.family, args.n, args.k)
    stem = f"{args.family}_{args.n}_{args.k}"
    report = {"family": args.family, "n": args.n, "k": args.k,
              "vertices": len(g.vertices), "edges": len(g.edges)}
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{stem}.json").write_text(g.dumps() + "\n")
        (d / f"{stem}.dot").write_text(g.to_dot())
        report["files"] = [f"{stem}.json", f"{stem}.dot"]
    _emit(report, None)
    return EXIT_OK


def _table(family: str, n: int, k: int, max_blocks: int, method: str = "inductive"):
    if family == DIAMOND:
        from .diamond import embed_all

        return embed_all(n, k, method=method, max_blocks=max_blocks)
    from .laakso import embed_all_laakso

    return embed_all_laakso(n, k, max_blocks=max_blocks)


def cmd_embed(args) -> int:
    _check_params(args.family, args.n, args.k)
    layout_for(args.family, args.n, args.k).check_budget(args.max_blocks)
    table = _table(args.family, args.n, args.k, args.max_blocks, args.method)
    if args.vertex:
        try:
            v = VertexLabel.parse(args.vertex)
            img = table.image(v)
        except (ValueError, KeyError) as exc:
            raise UsageError(f"bad vertex {args.vertex!r}: {exc}") from None
        report = {"layout": table.layout.to_json(), "vertex": str(v), "image": img.to_json()}
    else:
        report = table.to_json()
    if args.norm:
        from .signvec import norm

        shown = [v] if args.vertex else table.vertices
        report["norms"] = {str(u): {nm: str(norm(table.image(u), nm)) for nm in _norm_list(args.norm)} for u in shown}
    _emit(report, args.out)
    return EXIT_OK


def _norm_list(choice: str) -> tuple:
    return NORMS if choice == "both" else (choice,)


# verify

def _verify_instance(family: str, n: int, k: int, norms, max_blocks: int) -> dict:
    from .diamond import check_block_symmetry, check_cardinality, embed_all
    from .distortion import diamond_distortion_report, distortion_report, norm_matrices

    layout_for(family, n, k).check_budget(max_blocks)
    g = build_graph(family, n, k)
    checks = {}
    if family == DIAMOND:
        from .diamond import check_edge_law, check_monotone_supports

        table = embed_all(n, k, "inductive", max_blocks, graph=g)
        formula = embed_all(n, k, "formula", max_blocks, graph=g)
        checks["formula_equals_inductive"] = bool((table.matrix == formula.matrix).all())
        checks["cardinality"] = not check_cardinality(table, 2)
        checks["block_symmetry"] = not check_block_symmetry(table)
        checks["monotone_supports"] = not check_monotone_supports(table, upward_reachability(g))
        checks["edge_law"] = not check_edge_law(table)
        report_fn = diamond_distortion_report
    else:
        from .laakso import build_laakso_state, meeting_vertices, verify_c_conditions

        state = build_laakso_state(n, k, max_blocks, graph=g)
        table = state.table()
        checks["cardinality"] = not check_cardinality(table, 4)
        checks["block_symmetry"] = not check_block_symmetry(table)
        cond = verify_c_conditions(state)
        checks["c_conditions"] = cond.passed
        checks["meeting_vertices"] = meeting_vertices(g).passed
        report_fn = distortion_report
    mats = norm_matrices(table)
    dist = {}
    for nm in norms:
        r = report_fn(g.metric, table, nm, mats)
        dist[nm] = r.to_json()
        checks[f"distortion_{nm}"] = r.passed and r.distortion <= 8
    return {"family": family, "n": n, "k": k, "M": table.layout.M,
            "checks": checks, "distortion": dist, "passed": all(checks.values())}


def cmd_verify(args) -> int:
    report = {}
    if args.family is None and not args.axioms:
        raise UsageError("verify needs --family/--n/--k, --axioms, or both")
    norms = _norm_list(args.norm)
    if args.family is not None:
        if args.n is None or args.k is None:
            raise UsageError("--family needs --n and --k")
        _check_params(args.family, args.n, args.k)
        report["instance"] = _verify_instance(args.family, args.n, args.k, norms, args.max_blocks)
    if args.axioms:
        report["axioms"] = axiom_suite(seed=args.seed, count=args.count).to_json()
    passed = all(part["passed"] for part in report.values())
    report["passed"] = passed
    _emit(report, args.out)
    return EXIT_OK if passed else EXIT_FAIL


# obstruct

def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _vectors(obj) -> list:
    try:
        return [SignVector.from_json(runs) for runs in obj["x"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad vector family: {exc}") from None


def default_midpoint_family(N: int = 40) -> list:
    """``x_0 = 1^N`` and three halves of it: quarters 1+2, 3+4 and 1+3."""
    q = N // 4
    if N != 4 * q or q < 1:
        raise DomainError("N must be a positive multiple of 4")
    return [SignVector(((1, N, 1),)), SignVector(((1, 2 * q, 1),)), SignVector(((2 * q + 1, 2 * q, 1),)),
            SignVector(((1, q, 1), (2 * q + 1, q, 1)))]


def _family_input(args):
    if args.input:
        obj = _load_json(args.input)
        xs = _vectors(obj)
        C = parse_frac(obj["C"]) if "C" in obj else args.C
        eta = parse_frac(obj["eta"]) if "eta" in obj else None
    else:
        xs, C, eta = default_midpoint_family(), args.C, None
    if C is None:
        C = Fraction(3)
    if eta is None:
        eta = 1 / (4 * C * C)
    return xs, Fraction(C), Fraction(eta)


def _factor(args) -> dict:
    from .diamond import embed_all
    from .obstruction import RationalEmbedding, check_factorization, factorization_from_table

    if args.input:
        obj = _load_json(args.input)
        try:
            g = build_graph(obj["family"], int(obj["n"]), int(obj["k"]))
            images = {VertexLabel.parse(lab): SignVector.from_json(runs) for lab, runs in obj["images"].items()}
            C = parse_frac(obj["C"]) if "C" in obj else args.C
            scale = parse_frac(obj.get("scale", "1"))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad embedding file: {exc}") from None
        rep = check_factorization(RationalEmbedding(images, C, scale), g.metric, C)
        return {"input": rep.to_json(), "passed": rep.passed}
    out = {}
    for k in args.k:
        _check_params(DIAMOND, args.n, k)
        table = embed_all(args.n, k, max_blocks=args.max_blocks)
        rep = factorization_from_table(table, args.C)
        out[f"{DIAMOND}_{args.n}_{k}"] = rep.to_json()
    ok = all(r["l1_ok"] and (args.C is None or r["passed"]) for r in out.values())
    return {"instances": out, "passed": ok}


def _triples_report(fams) -> dict:
    from .obstruction import COLORS, RTable, color_triple, verify_triple_separation

    colors = dict.fromkeys(COLORS, 0)
    failures = []
    triples = 0
    for idx, fam in enumerate(fams):
        t = RTable.from_family(fam)
        for i, j, l in itertools.combinations(range(1, fam.k + 1), 3):
            triples += 1
            ok, gap = verify_triple_separation(t, i, j, l)
            colors[color_triple(t, i, j, l)] += 1
            if not ok and len(failures) < 10:
                failures.append({"family": idx, "triple": [i, j, l], "gap": gap, "required": frac_str(t.gap)})
    return {"families": len(fams), "triples": triples, "colors": colors,
            "separation_failures": failures, "passed": not failures}


def cmd_obstruct(args) -> int:
    from .obstruction import ZFamily, check_midpoint_family, random_zfamily, ramsey_bound, reduce_family

    check = args.check
    if check == "ramsey":
        if args.C is None and args.C_squared is None:
            raise UsageError("ramsey needs --C or --C-squared")
        rb = ramsey_bound(C=args.C) if args.C_squared is None else ramsey_bound(C_squared=args.C_squared)
        report = {"ramsey": rb.to_json(), "passed": True}
    elif check == "factor":
        report = _factor(args)
    elif check == "midpoints":
        xs, C, eta = _family_input(args)
        rep = check_midpoint_family(xs, eta, C)
        report = {"midpoints": rep.to_json(), "passed": rep.passed}
    elif check == "reduce":
        xs, C, _ = _family_input(args)
        try:
            fam = reduce_family(xs, C)
        except ReductionError as exc:
            _emit({"reduce": {"error": str(exc), "tag": exc.tag}, "passed": False}, args.out)
            return EXIT_FAIL
        body = fam.to_json()
        body["approxzx"] = fam.notes["approxzx"]
        report = {"reduce": body, "passed": True}
    else:
        if args.input:
            obj = _load_json(args.input)
            try:
                fams = [ZFamily.from_json(obj.get("reduce", obj))]
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"bad family file: {exc}") from None
        else:
            rng = random.Random(args.seed)
            fams = [random_zfamily(rng) for _ in range(args.count)]
        report = {"seed": None if args.input else args.seed}
        report.update(_triples_report(fams))
    _emit(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# parser

def _frac_arg(text: str) -> Fraction:
    try:
        return parse_frac(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="esaembed", description="Embeddings of diamond and Laakso graphs into ESA norms.")
    sub = p.add_subparsers(dest="command", required=True)

    def instance(sp, required=True):
        sp.add_argument("--family", choices=FAMILIES, required=required)
        sp.add_argument("--n", type=int, required=required)
        sp.add_argument("--k", type=int, required=required)

    g = sub.add_parser("generate", help="write graph JSON and DOT, print counts")
    instance(g)
    g.add_argument("--out-dir", help="directory for <family>_<n>_<k>.json/.dot")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("embed", help="print the embedding of an instance")
    instance(e)
    e.add_argument("--method", choices=("inductive", "formula"), default="inductive")
    e.add_argument("--vertex", help='single vertex, e.g. "1/2:1"')
    e.add_argument("--norm", choices=(L1, SUMMING, "both"), help="also report image norms")
    e.add_argument("--max-blocks", type=int, default=DEFAULT_MAX_BLOCKS)
    e.add_argument("--out")
    e.set_defaults(func=cmd_embed)

    v = sub.add_parser("verify", help="structural and distortion checks, norm axioms")
    instance(v, required=False)
    v.add_argument("--norm", choices=(L1, SUMMING, "both"), default="both")
    v.add_argument("--axioms", action="store_true", help="run the ESA/SA/IS suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=1000, help="random vectors for --axioms")
    v.add_argument("--max-blocks", type=int, default=DEFAULT_MAX_BLOCKS)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("obstruct", help="factorization, midpoint, normal-form and Ramsey checks")
    o.add_argument("--check", choices=("factor", "midpoints", "reduce", "triples", "ramsey"), required=True)
    o.add_argument("--C", type=_frac_arg)
    o.add_argument("--C-squared", dest="C_squared", type=_frac_arg)
    o.add_argument("--n", type=int, default=2, help="diamond depth for --check factor")
    o.add_argument("--k", type=int, nargs="+", default=[2, 3], help="branchings for --check factor")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--count", type=int, default=100, help="random families for --check triples")
    o.add_argument("--input", help="JSON input file")
    o.add_argument("--max-blocks", type=int, default=DEFAULT_MAX_BLOCKS)
    o.add_argument("--out")
    o.set_defaults(func=cmd_obstruct)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"esaembed: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, DomainError, PreconditionError) as exc:
        print(f"esaembed: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
