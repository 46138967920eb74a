"""Command-line frontend.

Reports are plain text, one "key = value" line per fact, with every
number printed as an exact rational string. Exit codes: 0 success,
1 input or I/O error, 2 domain error (error name on stderr), 64 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .colimits import decomposition_norm, eps_pushout, factor_through_stage
from .errors import DomainError, InputError
from .fileio import (
    load_catalog,
    load_chain,
    load_formula,
    load_map,
    load_space,
    parse_vectors,
    save_map,
    save_space,
)
from .geometry import set_geometry_cap
from .injectivity import gurarii_build, injectivity_defect, lindenstrauss_report
from .logic import (
    distinguishing_formula,
    format_formula,
    parse_formula,
    satisfaction_slack,
    transfer_check,
)
from .maps import identity_map, isometry_defect, operator_norm
from .purity import (
    embedding,
    ideal_defect,
    retraction_defect,
    verify_u_extension_candidate,
)
from .rationals import ONE, Q, ZERO, rat, rat_str
from .spaces import direct_sum, dual_space, make_space


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(64)


def _emit(key: str, value) -> None:
    print(f"{key} = {value}")


def _emit_rows(key: str, rows) -> None:
    body = "; ".join(",".join(rat_str(x) for x in row) for row in rows)
    _emit(key, body)


def _map_refs(path: str):
    """Absolute domain/codomain space file paths recorded in a map file."""
    from .fileio import _load_json, _resolve

    doc = _load_json(path)
    return (
        os.path.abspath(_resolve(doc["domain"], path)),
        os.path.abspath(_resolve(doc["codomain"], path)),
    )


# ------------------------------------------------------------- handlers

def _cmd_space_check(args) -> int:
    space = load_space(args.file)
    _emit("dim", space.dim)
    _emit("vertices", len(space.ball_vertices))
    _emit("facets", len(space.ball_facets))
    _emit_rows("vertex_list", space.ball_vertices)
    _emit_rows("facet_list", space.ball_facets)
    return 0


def _cmd_map_norm(args) -> int:
    f = load_map(args.file)
    _emit("operator_norm", rat_str(operator_norm(f)))
    return 0


def _cmd_map_defect(args) -> int:
    f = load_map(args.file)
    d = isometry_defect(f)
    _emit("upper_defect", rat_str(d.upper))
    _emit("lower_defect", rat_str(d.lower))
    _emit("is_isometry", "true" if d.is_isometry else "false")
    return 0


def _cmd_pushout(args) -> int:
    f = load_map(args.f)
    g = load_map(args.g)
    push = eps_pushout(f, g, rat(args.eps))
    _emit("eps", rat_str(push.eps))
    _emit("apex_dim", push.apex.dim)
    leg_defect = isometry_defect(push.leg_from_b)
    _emit("leg_b_defect", f"{rat_str(leg_defect.upper)},{rat_str(leg_defect.lower)}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _, b_ref = _map_refs(args.f)
        _, c_ref = _map_refs(args.g)
        apex_path = os.path.join(args.out, "apex.json")
        save_space(push.apex, apex_path)
        save_map(push.leg_from_b, os.path.join(args.out, "leg_b.map.json"), b_ref, "apex.json")
        save_map(push.leg_from_c, os.path.join(args.out, "leg_c.map.json"), c_ref, "apex.json")
        _emit("out", args.out)
    return 0


def _cmd_chain_factor(args) -> int:
    chain = load_chain(args.chain)
    f = load_map(args.map)
    stage, witness = factor_through_stage(chain, f, rat(args.eps))
    _emit("stage", stage)
    _emit_rows("witness_matrix", witness.matrix)
    return 0


def _cmd_ideal_check(args) -> int:
    f = load_map(args.file)
    report = ideal_defect(embedding(f))
    _emit("defect", rat_str(report.value))
    _emit("is_ideal", "true" if report.is_zero else "false")
    if args.witness and report.witness is not None:
        dom_ref, cod_ref = _map_refs(args.file)
        save_map(report.witness, args.witness, cod_ref, dom_ref)
        _emit("witness", args.witness)
    return 0


def _cmd_retract_check(args) -> int:
    f = load_map(args.file)
    report = retraction_defect(f)
    _emit("defect", rat_str(report.value))
    _emit("splits", "true" if report.is_zero else "false")
    return 0


def _cmd_uext_verify(args) -> int:
    e_k = embedding(load_map(args.embedding))
    t = load_map(args.candidate)
    if args.b_embed:
        e_b = embedding(load_map(args.b_embed))
    else:
        e_b = embedding(identity_map(e_k.ambient))
    ok = verify_u_extension_candidate(e_k, e_b, t, rat(args.eps))
    _emit("verified", "true" if ok else "false")
    return 0


def _cmd_logic_slack(args) -> int:
    space = load_space(args.space)
    phi = parse_formula(load_formula(args.formula))
    assignment = parse_vectors(args.assign)
    slack = satisfaction_slack(space, phi, assignment)
    _emit("slack", slack)
    _emit("satisfied", "true" if slack.satisfied else "false")
    return 0


def _cmd_logic_transfer(args) -> int:
    e = embedding(load_map(args.embedding))
    phi = parse_formula(load_formula(args.formula))
    assignment = parse_vectors(args.assign)
    slack_k, slack_l = transfer_check(e, phi, assignment)
    _emit("slack_subspace", slack_k)
    _emit("slack_ambient", slack_l)
    return 0


def _cmd_logic_distinguish(args) -> int:
    e = embedding(load_map(args.embedding))
    phi, assignment = distinguishing_formula(e)
    slack_k, slack_l = transfer_check(e, phi, assignment)
    _emit("formula", format_formula(phi))
    _emit_rows("assignment", assignment)
    _emit("slack_subspace", slack_k)
    _emit("slack_ambient", slack_l)
    return 0


def _cmd_inj_defect(args) -> int:
    h = load_map(args.map)
    k = load_space(args.space)
    report = injectivity_defect(h, k)
    _emit("defect", rat_str(report.value))
    _emit("injective", "true" if report.is_zero else "false")
    return 0


def _cmd_lind_report(args) -> int:
    k = load_space(args.space)
    cat = load_catalog(args.catalog)
    rows = lindenstrauss_report(k, cat)
    for name, report in rows:
        _emit(f"defect[{name}]", rat_str(report.value))
    clean = all(report.is_zero for _, report in rows)
    _emit("clean", "true" if clean else "false")
    return 0


def _cmd_gurarii_build(args) -> int:
    seed = load_space(args.seed)
    cat = load_catalog(args.catalog)
    log = gurarii_build(seed, cat, args.rounds, denom_cap=args.denom_cap)
    _emit("rounds", len(log.rounds))
    _emit("complete", "true" if log.complete else "false")
    _emit("dims", ",".join(str(s.dim) for s in log.spaces))
    for i, rnd in enumerate(log.rounds):
        _emit(f"round[{i}].request", rnd.request_name)
        _emit(f"round[{i}].residuals", ",".join(rat_str(r) for r in rnd.residuals))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for i, space in enumerate(log.spaces):
            save_space(space, os.path.join(args.out, f"space_{i}.json"))
        for i, link in enumerate(log.links):
            save_map(
                link,
                os.path.join(args.out, f"link_{i}.map.json"),
                f"space_{i}.json",
                f"space_{i + 1}.json",
            )
        manifest = {"links": [f"link_{i}.map.json" for i in range(len(log.links))]}
        if not log.links:
            manifest["spaces"] = ["space_0.json"]
        with open(os.path.join(args.out, "chain.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=1)
            fh.write("\n")
        _emit("out", args.out)
    return 0


def _cmd_selftest(args) -> int:
    checks: List[tuple] = []
    l1 = make_space(vertices=[(ONE, ZERO), (-ONE, ZERO), (ZERO, ONE), (ZERO, -ONE)])
    linf = make_space(facets=[(ONE, ZERO), (-ONE, ZERO), (ZERO, ONE), (ZERO, -ONE)])
    checks.append(("dual of l1 is linf", dual_space(l1) == linf))
    checks.append(("sum norm", l1.norm((ONE, ONE)) == 2))
    checks.append(("max norm", linf.norm((ONE, ONE)) == 1))
    s = direct_sum(l1, linf, "max")
    checks.append(("direct sum dim", s.dim == 4))

    line = make_space(vertices=[(ONE,), (-ONE,)])
    push = eps_pushout(identity_map(line), identity_map(line), ONE)
    probe = (ONE, ZERO)
    checks.append(
        ("pushout gauge matches decomposition LP",
         push.apex.norm(probe) == decomposition_norm(push, (ONE,), (ZERO,)))
    )

    from .maps import LinearMap

    axis = embedding(LinearMap(line, linf, ((ONE,), (ZERO,))))
    checks.append(("axis in linf2 is an ideal", ideal_defect(axis).is_zero))

    cube3 = make_space(
        facets=[tuple(ONE if i == j else ZERO for i in range(3)) for j in range(3)]
        + [tuple(-ONE if i == j else ZERO for i in range(3)) for j in range(3)]
    )
    plane = make_space(
        vertices=[(ONE, -ONE), (-ONE, ONE), (ONE, ZERO), (-ONE, ZERO), (ZERO, ONE), (ZERO, -ONE)]
    )
    ker = embedding(
        LinearMap(plane, cube3, ((ONE, ZERO), (ZERO, ONE), (-ONE, -ONE)))
    )
    checks.append(("hyperplane in linf3 has defect 1/3", ideal_defect(ker).value == Q(1, 3)))

    phi = parse_formula("EXISTS y . x1 + y = 0 AND norm(y) <= 1/2")
    slack = satisfaction_slack(l1, phi, [(ONE, ZERO)])
    checks.append(("slack oracle", slack.kind == "finite" and slack.value == Q(1, 2)))

    ok = True
    for name, passed in checks:
        _emit(name, "ok" if passed else "FAIL")
        ok = ok and passed
    return 0 if ok else 2


# --------------------------------------------------------------- parser

def _build_parser() -> _Parser:
    parser = _Parser(prog="polyban", description="Exact polyhedral Banach space toolkit.")
    parser.add_argument("--dim-cap", type=int, default=None,
                        help="override the geometry dimension cap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("space", help="space file operations")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("check", help="validate a space file, print both descriptions")
    q.add_argument("file")
    q.set_defaults(func=_cmd_space_check)

    p = sub.add_parser("map", help="linear map operations")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("norm", help="operator norm of a map file")
    q.add_argument("file")
    q.set_defaults(func=_cmd_map_norm)
    q = ss.add_parser("defect", help="isometry defect pair of a map file")
    q.add_argument("file")
    q.set_defaults(func=_cmd_map_defect)

    q = sub.add_parser("pushout", help="eps-pushout of two maps with common domain")
    q.add_argument("f")
    q.add_argument("g")
    q.add_argument("--eps", required=True)
    q.add_argument("--out", default=None, help="directory for apex and leg files")
    q.set_defaults(func=_cmd_pushout)

    p = sub.add_parser("chain", help="finite chain operations")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("factor", help="least stage an eps-factorization exists")
    q.add_argument("chain")
    q.add_argument("map")
    q.add_argument("--eps", required=True)
    q.set_defaults(func=_cmd_chain_factor)

    p = sub.add_parser("ideal", help="ideal test for an isometric embedding")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("check")
    q.add_argument("file")
    q.add_argument("--witness", default=None, help="write the extension witness map here")
    q.set_defaults(func=_cmd_ideal_check)

    p = sub.add_parser("retract", help="retraction defect")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("check")
    q.add_argument("file")
    q.set_defaults(func=_cmd_retract_check)

    p = sub.add_parser("uext", help="u-extension candidate verification")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("verify")
    q.add_argument("embedding", help="embedding of K into the ambient space")
    q.add_argument("candidate", help="candidate map t: B -> K")
    q.add_argument("--eps", required=True)
    q.add_argument("--b-embed", default=None,
                   help="embedding of B into the ambient space (default: identity)")
    q.set_defaults(func=_cmd_uext_verify)

    p = sub.add_parser("logic", help="positive-primitive formula operations")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("slack", help="satisfaction slack of a formula at an assignment")
    q.add_argument("space")
    q.add_argument("formula")
    q.add_argument("--assign", required=True, help="vectors as 'a,b;c,d'")
    q.set_defaults(func=_cmd_logic_slack)
    q = ss.add_parser("transfer", help="subspace vs ambient slack of a formula")
    q.add_argument("embedding")
    q.add_argument("formula")
    q.add_argument("--assign", required=True)
    q.set_defaults(func=_cmd_logic_transfer)
    q = ss.add_parser("distinguish", help="formula separating a non-ideal embedding")
    q.add_argument("embedding")
    q.set_defaults(func=_cmd_logic_distinguish)

    p = sub.add_parser("inj", help="approximate injectivity")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("defect")
    q.add_argument("map")
    q.add_argument("space")
    q.set_defaults(func=_cmd_inj_defect)

    p = sub.add_parser("lind", help="catalog injectivity report")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("report")
    q.add_argument("space")
    q.add_argument("catalog")
    q.set_defaults(func=_cmd_lind_report)

    p = sub.add_parser("gurarii", help="iterated pushout amalgamation")
    ss = p.add_subparsers(dest="action", required=True)
    q = ss.add_parser("build")
    q.add_argument("seed")
    q.add_argument("catalog")
    q.add_argument("--rounds", type=int, required=True)
    q.add_argument("--denom-cap", type=int, default=2)
    q.add_argument("--out", default=None)
    q.set_defaults(func=_cmd_gurarii_build)

    q = sub.add_parser("selftest", help="run the bundled invariant corpus")
    q.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 64
    if args.dim_cap is not None:
        try:
            set_geometry_cap(args.dim_cap)
        except ValueError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 64
    try:
        return args.func(args)
    except DomainError as exc:
        sys.stderr.write(f"{exc.name}: {exc}\n")
        return 2
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
