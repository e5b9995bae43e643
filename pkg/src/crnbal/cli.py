"""``crnbal`` command line: analyze, check, simulate, rho.

Exit codes: 0 ok / all requested verdicts hold, 1 some verdict fails,
2 parse or usage error, 3 precondition violated (e.g. formal balance on an
irreversible network), 4 simulation reached the boundary.
The ``CRNBAL_MODE`` environment variable (``exact`` or ``float``) selects
the arithmetic used for rate constants.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from crnbal import balance
from crnbal.dynamics import find_compatible_equilibrium, gibbs, simulate, write_trajectory_csv
from crnbal.errors import BoundaryApproachError, NotReversibleError, ParseError, StructuralError
from crnbal.graphkit import connected_components, is_strongly_connected
from crnbal.kirchhoff import rho_by_cofactor
from crnbal.model import MODES, build_matrices, reversible_structure
from crnbal.parser import format_rate, load_network

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_BOUNDARY = 4


class _Precondition(Exception):
    pass


def _number(x) -> str:
    if isinstance(x, Fraction):
        return format_rate(x)
    return repr(float(x))


def _verdict_json(v: balance.BalanceVerdict) -> dict:
    out = {"holds": v.holds}
    cert = v.certificate
    if isinstance(cert, balance.EquilibriumCertificate):
        out["certificate"] = {"mu": list(cert.mu), "beta": list(cert.beta), "x": list(cert.x)}
    elif isinstance(cert, balance.PotentialCertificate):
        out["certificate"] = {"rho": [_number(x) for x in cert.rho]}
    elif isinstance(cert, balance.ViolationWitness):
        w = {"context": cert.context}
        if cert.component is not None:
            w["component"] = cert.component
        else:
            w.update(sigma=list(cert.sigma), lhs=_number(cert.lhs), rhs=_number(cert.rhs))
        out["witness"] = w
    return out


def analysis_report(net) -> dict:
    """Everything ``crnbal analyze`` reports, as a JSON-ready dict."""
    mats = build_matrices(net)
    part = connected_components(mats.D)
    kv = rho_by_cofactor(mats.L, part)
    strong = [is_strongly_connected(comp) for comp in part]
    try:
        reversible_structure(net)
        reversible = True
    except NotReversibleError:
        reversible = False

    report = {
        "schema_version": SCHEMA_VERSION,
        "arithmetic_mode": net.arithmetic_mode,
        "network": {
            "m": net.m,
            "c": net.c,
            "r": net.r,
            "linkage_classes": part.n_components,
            "deficiency": balance.deficiency(mats.Z, mats.D),
            "reversible": reversible,
            "species": list(net.species_names),
            "complexes": [net.complex_label(i) for i in range(net.c)],
        },
        "components": [
            {"vertices": list(comp.vertices), "strongly_connected": s}
            for comp, s in zip(part, strong)
        ],
        "rho": [_number(x) for x in kv.rho],
        "complex_balanced": _verdict_json(balance.is_complex_balanced(net)),
        "formally_balanced": None,
        "detailed_balanced": None,
        "kappa": None,
    }
    if reversible:
        formal = balance.is_formally_balanced(net)
        report["formally_balanced"] = _verdict_json(formal)
        report["detailed_balanced"] = _verdict_json(balance.is_detailed_balanced(net))
        if formal.holds:
            dec = balance.conductance_decomposition(net, kv.rho)
            report["kappa"] = [_number(k) for k in dec.kappa]
    return report


def _yes(flag) -> str:
    return "yes" if flag else "no"


def format_report_text(rep: dict) -> str:
    nw = rep["network"]
    lines = [
        f"species: {' '.join(nw['species'])}",
        f"m = {nw['m']}, c = {nw['c']}, r = {nw['r']}, linkage classes = {nw['linkage_classes']}",
        f"deficiency: {nw['deficiency']}",
        f"reversible: {_yes(nw['reversible'])}",
    ]
    for j, comp in enumerate(rep["components"]):
        rho = " ".join(rep["rho"][v] for v in comp["vertices"])
        lines.append(f"component {j}: rho = {rho} (strongly connected: {_yes(comp['strongly_connected'])})")
    for key in ("complex_balanced", "formally_balanced", "detailed_balanced"):
        v = rep[key]
        if v is None:
            lines.append(f"{key}: n/a (network not reversible)")
            continue
        lines.append(f"{key}: {_yes(v['holds'])}")
        if "witness" in v:
            lines.append(f"  witness: {_witness_text(v['witness'])}")
        elif "certificate" in v and "x" in v["certificate"]:
            lines.append("  equilibrium x*: " + " ".join(f"{x:.10g}" for x in v["certificate"]["x"]))
    if rep["kappa"] is not None:
        lines.append("kappa: " + " ".join(rep["kappa"]))
    return "\n".join(lines) + "\n"


def _witness_text(w: dict) -> str:
    if "component" in w:
        return f"component {w['component']} is not strongly connected"
    return f"sigma = {w['sigma']} in {w['context']}: {w['lhs']} != {w['rhs']}"


def _load(args):
    mode = os.environ.get("CRNBAL_MODE", "exact")
    if mode not in MODES:
        raise _Precondition(f"CRNBAL_MODE must be one of {MODES}, got {mode!r}")
    return load_network(args.file, mode)


def cmd_analyze(args) -> int:
    rep = analysis_report(_load(args))
    if args.format == "json":
        sys.stdout.write(json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(format_report_text(rep))
    return EXIT_OK


def cmd_check(args) -> int:
    net = _load(args)
    wanted = [k for k in ("complex", "formal", "detailed") if getattr(args, k)]
    if not wanted:
        wanted = ["complex"]
    if "formal" in wanted or "detailed" in wanted:
        try:
            reversible_structure(net)
        except NotReversibleError as exc:
            raise _Precondition(f"--formal/--detailed need a reversible network: {exc}") from exc
    checks = {
        "complex": balance.is_complex_balanced,
        "formal": balance.is_formally_balanced,
        "detailed": balance.is_detailed_balanced,
    }
    ok = True
    for kind in wanted:
        v = checks[kind](net)
        print(f"{kind}: {'holds' if v.holds else 'fails'}")
        if not v.holds:
            ok = False
            print(f"  witness: {_witness_text(_verdict_json(v)['witness'])}")
    return EXIT_OK if ok else EXIT_FAILS


def cmd_rho(args) -> int:
    net = _load(args)
    mats = build_matrices(net)
    part = connected_components(mats.D)
    kv = rho_by_cofactor(mats.L, part)
    for comp in part:
        flag = "strongly connected" if is_strongly_connected(comp) else "not strongly connected"
        vals = " ".join(_number(kv.rho[v]) for v in comp.vertices)
        print(f"component {comp.index} ({flag}): {vals}")
    return EXIT_OK


def cmd_simulate(args, parser) -> int:
    net = _load(args)
    try:
        x0 = [float(v) for v in args.x0.split(",")]
    except ValueError:
        parser.error(f"--x0 must be comma-separated numbers, got {args.x0!r}")
    if len(x0) != net.m:
        parser.error(f"--x0 has {len(x0)} values, network has {net.m} species")
    if any(not v > 0 for v in x0):
        parser.error("--x0 values must be strictly positive")
    if not args.t_end > 0:
        parser.error("--t-end must be positive")

    x_eq = None
    if balance.is_complex_balanced(net).holds:
        x_eq = find_compatible_equilibrium(net, x0)
    elif args.equilibrium:
        raise _Precondition("--equilibrium needs a complex-balanced network")

    try:
        traj = simulate(net, x0, args.t_end, rtol=args.rtol, atol=args.atol,
                        log_coordinates=args.log_coordinates, x_ref=x_eq)
    except BoundaryApproachError as exc:
        if exc.trajectory is not None and len(exc.trajectory.t):
            write_trajectory_csv(exc.trajectory, args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    write_trajectory_csv(traj, args.out)
    if args.equilibrium:
        print("x** = " + " ".join("%.17g" % v for v in x_eq))
        print("G(final) = %.17g" % gibbs(traj.final, x_eq))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crnbal",
        description="Complex, formal and detailed balancing of mass-action reaction networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report: deficiency, rho, all verdicts, conductances")
    p.add_argument("file", help=".crn network file")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    p.set_defaults(format="text")

    p = sub.add_parser("check", help="exit 0 iff every requested verdict holds")
    p.add_argument("file")
    p.add_argument("--complex", action="store_true")
    p.add_argument("--formal", action="store_true")
    p.add_argument("--detailed", action="store_true")

    p = sub.add_parser("simulate", help="integrate the mass-action ODE and write a CSV trajectory")
    p.add_argument("file")
    p.add_argument("--x0", required=True, help="initial concentrations v1,...,vm")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--equilibrium", action="store_true", help="print x** and the final Gibbs value")
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--log-coordinates", action="store_true")

    p = sub.add_parser("rho", help="Matrix-Tree vector per connected component")
    p.add_argument("file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "rho":
            return cmd_rho(args)
        return cmd_simulate(args, parser)
    except (ParseError, StructuralError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (_Precondition, NotReversibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
