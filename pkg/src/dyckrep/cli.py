"""Command-line front end: build posets and representations, check them, dump them."""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Any, Sequence

from .acceptance import CRITERIA, corrupt_d_minus, corrupt_joint_weight, gieseker_pair
from .chains import enumerate_good_chains, longest_good_chain
from .edge import (EdgeFunction, boolean_edge_function, closed_form_edge_function, synthesize_edge,
                   verify_monodromy)
from .field import NUM_PARAMS, ONE, param, parse
from .posets import (WeightedPoset, build_boolean, build_linear, build_partition_ideal,
                     build_singleton, check_general_position, ideal_quotient_map, identity_map, product, twist)
from .report import Report, _jsonable
from .rep.build import build_rep
from .rep.duality import dual_rep
from .rep.hom import (IncompatibleEdgeFunctions, MapConditionViolated, check_hom_commutes, hom_from_posetmap,
                      kernel_support)
from .rep.reconstruct import AssumptionViolated, check_reconstruction
from .rep.sym import check_sym_commute
from .rep.tensor import tensor_dim_check
from .rep.verify import FAMILIES, verify_relations

GRAMMAR = """\
poset selection:
  --poset partitions --max-boxes N [--max-rows R] [--max-cols C]
  --poset linear --n N [--x0 EXPR]
  --poset boolean --n N            (weights a1..aN)
  --poset singleton
  --poset json --file PATH
  any builtin accepts --twist EXPR; EXPR is a rational function in q, v, t, a1..ar
  with r declared by --params r (default 6).
product factors:  KIND:key=value,...   e.g. linear:n=2,x0=a1  partitions:max-boxes=2,twist=a1
exit codes: 0 success, 1 check failed, 2 usage error"""


class UsageError(Exception):
    pass


# poset and parameter handling

def _expr(text: str, nparams: int) -> Any:
    used = [int(m) for m in re.findall(r"a_?(\d+)", text)]
    if any(i < 1 or i > nparams for i in used):
        raise UsageError(f"{text!r} uses a parameter outside a1..a{nparams} (declare more with --params)")
    try:
        return parse(text.replace("a_", "a"))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _nparams(opts: dict[str, Any]) -> int:
    if opts.get("params") is not None:
        if not 0 <= opts["params"] <= NUM_PARAMS:
            raise UsageError(f"--params must be in 0..{NUM_PARAMS}")
        return opts["params"]
    return NUM_PARAMS


def build_poset(opts: dict[str, Any]) -> WeightedPoset:
    kind = opts.get("poset") or "partitions"
    r = _nparams(opts)
    if kind == "partitions":
        if opts.get("max_boxes") is None:
            raise UsageError("--poset partitions needs --max-boxes")
        E = build_partition_ideal(opts["max_boxes"], opts.get("max_rows"), opts.get("max_cols"))
    elif kind == "linear":
        if opts.get("n") is None:
            raise UsageError("--poset linear needs --n")
        x0 = _expr(opts["x0"], r) if opts.get("x0") else ONE
        E = build_linear(opts["n"], x0)
    elif kind == "boolean":
        n = opts.get("n")
        if n is None or n > r:
            raise UsageError(f"--poset boolean needs --n with n <= {r} parameters")
        E = build_boolean([param(i) for i in range(1, n + 1)])
    elif kind == "singleton":
        E = build_singleton()
    elif kind == "json":
        if not opts.get("file"):
            raise UsageError("--poset json needs --file")
        E = WeightedPoset.from_json(json.loads(Path(opts["file"]).read_text()))
    else:
        raise UsageError(f"unknown poset kind {kind!r}")
    if opts.get("twist"):
        E = twist(E, _expr(opts["twist"], r))
    return E


def parse_factor(text: str) -> dict[str, Any]:
    kind, _, rest = text.partition(":")
    opts: dict[str, Any] = {"poset": kind}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"factor option {item!r} is not key=value")
        key = key.strip().replace("-", "_")
        if key in ("n", "max_boxes", "max_rows", "max_cols", "params"):
            opts[key] = int(val)
        elif key in ("x0", "twist", "file"):
            opts[key] = val.strip()
        else:
            raise UsageError(f"unknown factor option {key!r}")
    return opts


def edge_for(E: WeightedPoset, opts: dict[str, Any]) -> EdgeFunction:
    if not opts.get("closed_form"):
        return synthesize_edge(E, opts.get("seed") or 0)
    kind = opts.get("poset") or "partitions"
    if kind == "partitions":
        framing = (_expr(opts["twist"], _nparams(opts)),) if opts.get("twist") else (ONE,)
        return closed_form_edge_function(E, framing)
    if kind == "boolean":
        return boolean_edge_function(E, [param(i) for i in range(1, opts["n"] + 1)])
    raise UsageError("--closed-form is available for partitions and boolean posets")


def _corrupt(c: EdgeFunction, ci: int | None) -> EdgeFunction:
    if ci is None:
        return c
    if not 0 <= ci < len(c.values):
        raise UsageError(f"--corrupt-edge must be in 0..{len(c.values) - 1}")
    return c.with_value(ci, c.values[ci] * 2)


# subcommands; each returns (ok, payload)

def cmd_poset(args) -> tuple[bool, Any]:
    E = build_poset(vars(args))
    return True, {**E.to_json(), "longest_good_chain": longest_good_chain(E)}


def cmd_chains(args) -> tuple[bool, Any]:
    E = build_poset(vars(args))
    K = args.levels if args.levels is not None else longest_good_chain(E)
    levels = [{"k": k, "chains": [ch.notation(E) for ch in enumerate_good_chains(E, k)]} for k in range(K + 1)]
    for lv in levels:
        lv["count"] = len(lv["chains"])
    return True, {"poset": E.name, "levels": levels}


def cmd_edge(args) -> tuple[bool, Any]:
    E = build_poset(vars(args))
    c = _corrupt(edge_for(E, vars(args)), args.corrupt_edge)
    out: dict[str, Any] = {"poset": E.name, "edge": c.to_json()}
    ok = True
    if args.check_monodromy:
        mono = verify_monodromy(E, c)
        out["monodromy"] = mono.to_json()
        ok = mono.ok
    return ok, out


def cmd_rep(args) -> tuple[bool, Any]:
    E = build_poset(vars(args))
    rep = build_rep(E, edge_for(E, vars(args)), args.levels)
    return True, rep.to_json()


def cmd_verify(args) -> tuple[bool, Any]:
    E = build_poset(vars(args))
    c = _corrupt(edge_for(E, vars(args)), args.corrupt_edge)
    rep = build_rep(E, c, args.levels)
    families = args.families.split(",") if args.families else None
    if families and set(families) - set(FAMILIES):
        raise UsageError(f"unknown relation families {sorted(set(families) - set(FAMILIES))}")
    rr = verify_relations(rep, families)
    mono = verify_monodromy(E, c)
    ok = rr.ok and mono.ok
    return ok, {"poset": E.name, "K": rep.K, "ok": ok, "monodromy": mono.to_json(), "relations": rr.to_json()}


def cmd_dual(args) -> tuple[bool, Any]:
    E = build_poset(vars(args))
    res = dual_rep(build_rep(E, edge_for(E, vars(args))))
    rel_dual, rel_star = verify_relations(res.dual_rep), verify_relations(res.dual_module)
    checks = {"dual_relations": rel_dual.ok, "dual_module_relations": rel_star.ok,
              "theta_transpose": res.theta_check.to_json(), "intertwiner": res.check.to_json(),
              "bijection_intertwiner": res.literal_check.to_json()}
    ok = rel_dual.ok and rel_star.ok and res.theta_check.ok and res.check.ok
    return ok, {"poset": E.name, "dual_poset": res.dual_rep.poset.name, **checks}


def cmd_product(args) -> tuple[bool, Any]:
    if args.gieseker:
        P, c, closed = gieseker_pair()
        mono = verify_monodromy(P, c)
        rr = verify_relations(build_rep(P, c, args.levels))
        ok = mono.ok and rr.ok and c.values == closed.values
        return ok, {"poset": P.name, "matches_closed_form": c.values == closed.values,
                    "monodromy": mono.to_json(), "relations": rr.by_family()}
    if not args.left or not args.right:
        raise UsageError("product needs --left and --right (or --gieseker)")
    E1, E2 = build_poset(parse_factor(args.left)), build_poset(parse_factor(args.right))
    gp = check_general_position(E1, E2)
    if not gp.ok:
        return False, {"general_position": gp.to_json()}
    P = product(E1, E2)
    K = args.levels if args.levels is not None else longest_good_chain(P)
    dims = tensor_dim_check(E1, E2, K, P)
    rr = verify_relations(build_rep(P, synthesize_edge(P, args.seed or 0), args.levels))
    return dims.ok and rr.ok, {"poset": P.name, "general_position": gp.to_json(), "dimensions": dims.to_json(),
                               "relations": rr.by_family()}


def cmd_hom(args) -> tuple[bool, Any]:
    opts = vars(args)
    E = build_poset(opts)
    r1 = build_rep(E, closed_form_edge_function(E) if args.poset == "partitions" else synthesize_edge(E))
    if args.target_max_boxes is None:
        F, r2 = identity_map(E), r1
    else:
        if args.poset != "partitions" or args.twist:
            raise UsageError("--target-max-boxes maps an untwisted partition ideal onto a smaller one")
        I = build_partition_ideal(args.target_max_boxes, args.max_rows, args.max_cols)
        F, r2 = ideal_quotient_map(E, I), build_rep(I, closed_form_edge_function(I))
    try:
        mats = hom_from_posetmap(r1, r2, F, check=False)
    except MapConditionViolated as exc:
        return False, {"condition": exc.condition, "witness": exc.witness}
    except IncompatibleEdgeFunctions as exc:
        return False, {"incompatible": str(exc)}
    comm = check_hom_commutes(r1, r2, mats)
    ker, coordinate = kernel_support(mats)
    return comm.ok, {"source": E.name, "target": r2.poset.name, "commutes": comm.to_json(),
                     "kernel_dims": [len(ker[k]) for k in sorted(ker)], "kernel_coordinate": coordinate}


def cmd_reconstruct(args) -> tuple[bool, Any]:
    E = build_poset(vars(args))
    rep = build_rep(E, edge_for(E, vars(args)))
    if args.corrupt == "d_minus":
        corrupt_d_minus(rep)
    elif args.corrupt == "simple_spectrum":
        corrupt_joint_weight(rep)
    try:
        rpt = check_reconstruction(rep)
    except AssumptionViolated as exc:
        return False, {"poset": E.name, "assumption_violated": exc.which, "detail": str(exc)}
    return rpt.ok, {"poset": E.name, **rpt.to_json()}


def cmd_sym(args) -> tuple[bool, Any]:
    E = build_poset(vars(args))
    rpt = check_sym_commute(build_rep(E, edge_for(E, vars(args)), args.levels), args.i_max)
    return rpt.ok, {"poset": E.name, **rpt.to_json()}


def cmd_accept(args) -> tuple[bool, Any]:
    which = [args.criterion] if args.criterion else sorted(CRITERIA)
    if any(n not in CRITERIA for n in which):
        raise UsageError(f"--criterion must be in 1..{len(CRITERIA)}")
    rows = []
    for n in which:
        name, fn = CRITERIA[n]
        rpt: Report = fn()
        rows.append({"criterion": n, "name": name, **rpt.to_json()})
    return all(r["ok"] for r in rows), {"criteria": rows}


# argument parsing

def _poset_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("poset")
    g.add_argument("--poset", choices=["partitions", "linear", "boolean", "singleton", "json"], default="partitions")
    g.add_argument("--max-boxes", type=int)
    g.add_argument("--max-rows", type=int)
    g.add_argument("--max-cols", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--x0")
    g.add_argument("--twist")
    g.add_argument("--params", type=int, help="number of symbolic parameters a1..ar")
    g.add_argument("--file", help="poset JSON for --poset json")
    g.add_argument("--seed", type=int, default=0, help="spanning-tree seed for edge synthesis")
    g.add_argument("--closed-form", action="store_true", help="use the closed-form edge function")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "pretty"], default="json")
    p.add_argument("--out", help="write the report here instead of stdout")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{GRAMMAR}\n")
        sys.exit(2)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dyckrep", description=__doc__, epilog=GRAMMAR,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn, help_: str, poset: bool = True, levels: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_, epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
        if poset:
            _poset_args(p)
        if levels:
            p.add_argument("--levels", type=int, help="highest level K (default: longest good chain)")
        _common(p)
        p.set_defaults(fn=fn)
        return p

    add("poset", cmd_poset, "describe a weighted poset", levels=False)
    add("chains", cmd_chains, "enumerate good chains by level")
    p = add("edge", cmd_edge, "edge function values", levels=False)
    p.add_argument("--check-monodromy", action="store_true")
    p.add_argument("--corrupt-edge", type=int, help="double the value on this cover index")
    add("rep", cmd_rep, "dump the representation matrices")
    p = add("verify", cmd_verify, "check every defining relation exactly")
    p.add_argument("--families", help="comma-separated relation families")
    p.add_argument("--corrupt-edge", type=int, help="double the value on this cover index")
    add("dual", cmd_dual, "dual representation and intertwiners", levels=False)
    p = add("product", cmd_product, "product poset, dimension identity, relations", poset=False)
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gieseker", action="store_true", help="the two-factor twisted partition product")
    p = add("hom", cmd_hom, "map induced by a poset map", levels=False)
    p.add_argument("--target-max-boxes", type=int, help="quotient onto the ideal of this size")
    p = add("reconstruct", cmd_reconstruct, "recover the poset from the operators", levels=False)
    p.add_argument("--corrupt", choices=["d_minus", "simple_spectrum"])
    p = add("sym", cmd_sym, "commutativity of the symmetric-function operators")
    p.add_argument("--i-max", type=int, default=3)
    p = add("accept", cmd_accept, "run acceptance criteria", poset=False, levels=False)
    p.add_argument("--criterion", type=int)
    return parser


def _pretty(payload: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return lines
    if isinstance(payload, list):
        lines = []
        for v in payload:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
        return lines
    return [f"{pad}{payload}"]


def render(payload: Any, fmt: str) -> str:
    data = _jsonable(payload)
    if fmt == "pretty":
        return "\n".join(_pretty(data)) + "\n"
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        ok, payload = args.fn(args)
    except (UsageError, ValueError, ZeroDivisionError, OSError) as exc:
        sys.stderr.write(f"dyckrep {args.command}: {exc}\n\n{GRAMMAR}\n")
        return 2
    text = render(payload, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
