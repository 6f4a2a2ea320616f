"""Command-line interface.

Subcommands: solve, mdgp, landscape, replicate, energy, rmsd, contacts.
Exit codes: 0 success, 1 solver finished without a certificate, 2 input
error.  The environment variable CANODUAL_SEED overrides any configured
seed so runs can be reproduced without editing instances.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import fixtures
from .chains import FibrilModel
from .dual import eval_dual
from .energy import Configuration, lj_cluster_energy
from .errors import CanodualError, DualInfeasibleError
from .formats import (
    parse_coordinates,
    parse_instance,
    report_document,
    write_pdb,
)
from .mdgp import MdgpInstance, build_program, violation_report
from .quartic import QuarticProgram, eval_primal
from .solver import SolverConfig, solve


def _solver_config(doc, args) -> SolverConfig:
    overrides = dict(doc.solver)
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    env_seed = os.environ.get("CANODUAL_SEED")
    if env_seed:
        overrides["seed"] = int(env_seed)
    if "search_box" in overrides and overrides["search_box"] is not None:
        overrides["search_box"] = tuple(map(tuple, np.atleast_2d(overrides["search_box"])))
    return SolverConfig(**overrides)


def _program_of(doc) -> QuarticProgram:
    if isinstance(doc.payload, MdgpInstance):
        return build_program(doc.payload)
    return doc.payload


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_chains(path: str, fmt: str | None):
    if fmt is None:
        fmt = "xyz" if path.lower().endswith(".xyz") else "pdb-atom"
    return parse_coordinates(_read(path), format=fmt)


def _cmd_solve(args) -> int:
    text = _read(args.instance)
    doc = parse_instance(text)
    report = solve(_program_of(doc), _solver_config(doc, args))
    out = report_document(report, text, timing=args.timing)
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0 if report.best is not None else 1


def _cmd_mdgp(args) -> int:
    text = _read(args.instance)
    doc = parse_instance(text)
    if not isinstance(doc.payload, MdgpInstance):
        raise CanodualError("not a distance-geometry instance")
    inst = doc.payload
    report = solve(build_program(inst), _solver_config(doc, args))
    violations = None
    positions = None
    if report.best is not None:
        violations = violation_report(inst, report.best.x, threshold=args.threshold)
        positions = np.asarray(report.best.x).reshape(inst.sensor_count, 3)
    out = report_document(report, text, violations=violations, timing=args.timing)
    out["sensor_positions"] = (
        [[float(v) for v in row] for row in positions] if positions is not None else None
    )
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0 if report.best is not None else 1


def _cmd_landscape(args) -> int:
    text = _read(args.instance)
    doc = parse_instance(text)
    prog = _program_of(doc)
    if not 0 <= args.var < prog.n:
        raise CanodualError(f"--var must index a variable in [0, {prog.n})")
    try:
        lo, hi = (float(v) for v in args.range.split(":"))
    except ValueError:
        raise CanodualError("--range expects the form a:b") from None
    if args.steps < 2:
        raise CanodualError("--steps must be at least 2")
    ts = np.linspace(lo, hi, args.steps)
    one_dim_dual = prog.m == 1
    sys.stdout.write("t,P" + (",Pd\n" if one_dim_dual else "\n"))
    for t in ts:
        x = np.zeros(prog.n)
        x[args.var] = t
        row = f"{t:.17g},{eval_primal(prog, x):.17g}"
        if one_dim_dual:
            try:
                row += f",{eval_dual(prog, [t]):.17g}"
            except DualInfeasibleError:
                row += ",nan"
        sys.stdout.write(row + "\n")
    return 0


def _cmd_replicate(args) -> int:
    chains = _load_chains(args.coords, args.format)
    if not chains:
        raise CanodualError("no chains found in coordinate file")
    by_name = {c.name: c for c in chains}
    template = by_name.get(args.chain) if args.chain else by_name.get("A", chains[0])
    if template is None:
        raise CanodualError(f"chain {args.chain!r} not present in coordinate file")
    family = fixtures.FAMILIES[args.family]
    from .chains import replicate_fibril

    model = replicate_fibril(template, family.sheet, family.stack,
                             levels=args.levels, family=family.name)
    sys.stdout.write(write_pdb(model))
    return 0


def _cmd_energy(args) -> int:
    chains = _load_chains(args.coords, args.format)
    coords = np.vstack([c.coords for c in chains]) if chains else np.zeros((0, 3))
    value = lj_cluster_energy(Configuration(positions=coords))
    sys.stdout.write(f"{value:.9f}\n")
    return 0


def _atom_map(chains):
    if len(chains) == 1:
        only = chains[0]
        return dict(zip(only.atom_names, only.coords))
    out = {}
    for chain in chains:
        for name, pos in zip(chain.atom_names, chain.coords):
            out[f"{chain.name}:{name}"] = pos
    return out


def _cmd_rmsd(args) -> int:
    a = _atom_map(_load_chains(args.coords_a, args.format))
    b = _atom_map(_load_chains(args.coords_b, args.format))
    if set(a) != set(b):
        raise CanodualError("atom names do not match between the two files")
    if not a:
        raise CanodualError("no atoms to compare")
    diff = np.array([a[k] - b[k] for k in sorted(a)])
    value = float(np.sqrt(np.sum(diff * diff) / len(diff)))
    sys.stdout.write(f"{value:.6f}\n")
    return 0


def _cmd_contacts(args) -> int:
    chains = _load_chains(args.coords, args.format)
    model = FibrilModel(chains={c.name: c for c in chains})
    from .chains import contact_report

    for contact in contact_report(model, threshold=args.threshold):
        sys.stdout.write(
            f"{contact.chain_a}.{contact.atom_a}\t{contact.chain_b}.{contact.atom_b}"
            f"\t{contact.distance:.6f}\n"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="canodual",
        description="Certified quartic minimization and fibril model building tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=["pdb-atom", "xyz"], default=None,
                       help="coordinate format (default: by file extension)")

    p = sub.add_parser("solve", help="solve an instance and print the full report")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("mdgp", help="solve a distance-geometry instance")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--timing", action="store_true")
    p.add_argument("--threshold", type=float, default=0.1,
                   help="flag residuals above this many square angstroms")
    p.set_defaults(func=_cmd_mdgp)

    p = sub.add_parser("landscape", help="CSV slice of the objective (and 1-D dual)")
    p.add_argument("instance")
    p.add_argument("--var", type=int, default=0)
    p.add_argument("--range", required=True,
                   help="a:b sweep bounds (write --range=-3:3 for negative bounds)")
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=_cmd_landscape)

    p = sub.add_parser("replicate", help="replicate a chain into a fibril model")
    p.add_argument("coords")
    p.add_argument("--family", choices=sorted(fixtures.FAMILIES), required=True)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--chain", default=None, help="template chain name (default A)")
    add_format(p)
    p.set_defaults(func=_cmd_replicate)

    p = sub.add_parser("energy", help="reduced-unit cluster energy of all atoms")
    p.add_argument("coords")
    add_format(p)
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("rmsd", help="per-atom RMSD between two coordinate files")
    p.add_argument("coords_a")
    p.add_argument("coords_b")
    add_format(p)
    p.set_defaults(func=_cmd_rmsd)

    p = sub.add_parser("contacts", help="inter-chain contacts below a distance")
    p.add_argument("coords")
    p.add_argument("--threshold", type=float, default=3.4)
    add_format(p)
    p.set_defaults(func=_cmd_contacts)
    return parser


def _merge_range_values(argv):
    """Join '--range -3:3' into '--range=-3:3' so negative bounds parse."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--range" and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and ":" in argv[i + 1]:
            out.append(f"--range={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def cli(argv) -> int:
    """Run one invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(_merge_range_values(list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CanodualError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
