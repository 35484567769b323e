"""Command-line front end.

Exit codes: 0 all checks passed, 1 a check or precondition failed, 2 the
command line or an input file is malformed.  Every subcommand prints a human
summary to stdout; --out writes the machine-readable artifact (JSON, or CSV
for the study table).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .approx import (build_grid_partition, certify_epsilon, convergence_study,
                     parse_theta, sample_orbit)
from .characters import check_conditions, dual_group, parse_character
from .errors import (CapacityError, CoverageError, NumericsError,
                     PreconditionError, StructureError)
from .heisenberg import (central_character_defect, heis_group, induced_rep,
                         multiplication_table, regular_rep,
                         rep_homomorphism_defect, schrodinger_rep, trace_table)
from .pairs import (random_instance, regular_pair, representation_defect,
                    schrodinger_pair, verify_ccr)
from .rings import parse_ring
from .serialize import (assignment_to_data, certificate_to_data,
                        condition_report_to_data, decomposition_to_data,
                        load_pair, save_json, save_pair, study_rows_to_csv,
                        witness_to_data)
from .suite import RunReport, suite
from .svn import commutant_dim, decompose, pairs_equivalent, svn_intertwiner

USAGE_ERROR = 2
CHECK_ERROR = 1


def _write_out(path: str | None, data: dict) -> None:
    if path:
        save_json(path, data)


def _ring_arg(args) -> tuple:
    ring = parse_ring(args.ring)
    lam = None
    if getattr(args, "lam", None) is not None:
        lam = parse_character(ring.additive_factors, args.lam)
    return ring, lam


def _parse_k(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",")]


# -- subcommand bodies ---------------------------------------------------------


def _cmd_ring_info(args) -> int:
    ring, _ = _ring_arg(args)
    commutative = all(ring.mul(a, b) == ring.mul(b, a)
                      for a in range(ring.order) for b in range(ring.order))
    data = {
        "record": "ring-info",
        "ring": ring.descriptor(),
        "name": ring.short_name(),
        "order": ring.order,
        "additive_factors": list(ring.additive_factors),
        "commutative": commutative,
        "characters": ring.order,
    }
    print(f"{ring.short_name()}: order {ring.order}, additive factors "
          f"{tuple(ring.additive_factors)}, "
          f"{'commutative' if commutative else 'noncommutative'}")
    _write_out(args.out, data)
    return 0


def _cmd_char_check(args) -> int:
    ring, lam = _ring_arg(args)
    report = check_conditions(ring, lam)
    data = condition_report_to_data(ring, lam, report)
    print(f"lambda=({lam.short_name()}) on {ring.short_name()}: "
          f"sym={report.sym} iso={report.iso} faith={report.faith}")
    if report.sym_counterexample:
        a, b = report.sym_counterexample
        print(f"  sym fails at (a, b) = ({a}, {b})")
    if report.iso_kernel:
        print(f"  pairing kernel {report.iso_kernel}")
    if report.faith_witness_ideal:
        print(f"  ideal inside ker lambda: {report.faith_witness_ideal}")
    _write_out(args.out, data)
    return 0


def _build_pair(args, kind: str):
    ring, lam = _ring_arg(args)
    if kind == "schrodinger":
        return schrodinger_pair(ring, args.d, lam)
    if kind == "regular":
        return regular_pair(ring, args.d, lam)
    return random_instance(ring, args.d, lam, args.mult, args.seed)


def _cmd_pair_build(args, kind: str) -> int:
    pair = _build_pair(args, kind)
    print(f"built {kind} pair: {pair.label()}")
    if args.out:
        save_pair(args.out, pair)
        print(f"wrote {args.out}")
    return 0


def _cmd_pair_verify(args) -> int:
    pair = load_pair(args.pair_file)
    report = RunReport(["pair", "verify-ccr", args.pair_file],
                       {"tol": args.tol})
    start = time.perf_counter()
    report.check("braiding", verify_ccr(pair), args.tol)
    report.check("u representation", representation_defect(pair.u), args.tol)
    report.check("v representation", representation_defect(pair.v), args.tol)
    report.wall_time_s = time.perf_counter() - start
    print(f"pair {pair.label()}")
    print(report.summary())
    _write_out(args.out, report.to_data())
    return report.exit_code


def _load_or_build_pair(args):
    if args.pair:
        return load_pair(args.pair)
    if not args.ring or args.lam is None:
        raise StructureError("pass --pair FILE, or --ring and --lambda")
    return _build_pair(args, "schrodinger")


def _cmd_svn_intertwine(args) -> int:
    pair = _load_or_build_pair(args)
    witness = svn_intertwiner(pair, tol=args.tol)
    data = witness_to_data(witness)
    print(f"witness: {witness.source.label()} ~ {witness.target.label()}")
    print(f"  dimension {witness.dim}, residual {witness.residual:.3e}, "
          f"unitarity defect {witness.unitarity_defect:.3e}")
    _write_out(args.out, data)
    ok = witness.residual <= 1e-9 and witness.unitarity_defect <= 1e-10
    return 0 if ok else CHECK_ERROR


def _cmd_svn_decompose(args) -> int:
    pair = _load_or_build_pair(args)
    dec = decompose(pair, seed=args.seed, tol=args.tol)
    data = decomposition_to_data(dec)
    print(f"multiplicity {dec.multiplicity}, residual {dec.residual:.3e}, "
          f"unitarity defect {dec.unitarity_defect:.3e}, "
          f"rounds {dec.rounds}")
    _write_out(args.out, data)
    return 0 if dec.residual <= args.tol else CHECK_ERROR


def _cmd_svn_commutant(args) -> int:
    pair = _load_or_build_pair(args)
    dim = commutant_dim(pair)
    print(f"commutant dimension {dim}")
    _write_out(args.out, {"record": "commutant", "pair": pair.label(),
                          "dim": dim})
    return 0


def _cmd_svn_equivalent(args) -> int:
    pair_a = load_pair(args.pair)
    pair_b = load_pair(args.other)
    verdict = pairs_equivalent(pair_a, pair_b, tol=args.tol)
    print(f"equivalent: {verdict}")
    _write_out(args.out, {"record": "equivalence", "a": pair_a.label(),
                          "b": pair_b.label(), "equivalent": verdict})
    return 0


def _cmd_heis_table(args) -> int:
    ring, _ = _ring_arg(args)
    group = heis_group(ring, args.d)
    order = ring.order ** (2 * args.d + 1)
    print(f"Heisenberg group over {ring.short_name()}, d={args.d}: "
          f"order {order}, center order {ring.order}")
    if args.out:
        table = multiplication_table(group)
        save_json(args.out, {"record": "heisenberg-table",
                             "ring": ring.descriptor(), "d": args.d,
                             "order": order, "table": table})
        print(f"wrote {args.out}")
    return 0


def _cmd_heis_rep_check(args) -> int:
    ring, lam = _ring_arg(args)
    make = schrodinger_rep if args.source == "schrodinger" else regular_rep
    rep = make(ring, args.d, lam)
    report = RunReport(["heis", "rep-check"], {"tol": args.tol})
    start = time.perf_counter()
    report.check("homomorphism", rep_homomorphism_defect(rep), args.tol)
    report.check("central character", central_character_defect(rep), args.tol)
    report.wall_time_s = time.perf_counter() - start
    print(report.summary())
    _write_out(args.out, report.to_data())
    return report.exit_code


def _cmd_heis_induce(args) -> int:
    ring, lam = _ring_arg(args)
    lams = [lam] if lam is not None else list(dual_group(ring.additive_factors))
    report = RunReport(["heis", "induce"], {"tol": args.tol})
    start = time.perf_counter()
    for each in lams:
        reg = trace_table(regular_rep(ring, args.d, each))
        ind = trace_table(induced_rep(ring, args.d, each))
        worst = max(abs(reg[g] - ind[g]) for g in reg)
        report.check(f"traces lam=({each.short_name()})", worst, args.tol)
    report.wall_time_s = time.perf_counter() - start
    print(report.summary())
    _write_out(args.out, report.to_data())
    return report.exit_code


def _cmd_approx_sample(args) -> int:
    part = build_grid_partition(args.grid, args.dims)
    assignment = sample_orbit(args.theta, part, args.window)
    uncovered = assignment.uncovered_cells()
    print(f"theta={args.theta} grid={args.grid} window={args.window}: "
          f"{part.cell_count - len(uncovered)}/{part.cell_count} cells covered")
    if uncovered:
        shown = ", ".join(str(c) for c in uncovered[:8])
        more = f" (+{len(uncovered) - 8} more)" if len(uncovered) > 8 else ""
        print(f"  uncovered: {shown}{more}")
    _write_out(args.out, assignment_to_data(assignment))
    return 0


def _cmd_approx_epsilon(args) -> int:
    part = build_grid_partition(args.grid, args.dims)
    assignment = sample_orbit(args.theta, part, args.window)
    if args.fill and not assignment.covered:
        assignment = assignment.fill_nearest()
    cert = certify_epsilon(args.theta, assignment, _parse_k(args.k),
                           allow_fills=args.fill)
    print(f"eps = {cert.eps:.12g}  (crude bound {cert.eps_bound:.12g}, "
          f"delta {cert.delta:.6g})")
    _write_out(args.out, certificate_to_data(cert))
    return 0


def _cmd_approx_study(args) -> int:
    grids = [int(g) for g in args.grids.split(",")]
    rows = convergence_study(args.theta, _parse_k(args.k), grids,
                             window=args.window, dims=args.dims)
    csv = study_rows_to_csv(rows)
    print(csv, end="")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
        print(f"wrote {args.out}")
    return 0


def _cmd_suite(args, profile: str) -> int:
    report = suite(profile, seed=args.seed,
                   command=["suite", profile, f"--seed={args.seed}"])
    print(report.summary())
    _write_out(args.out, report.to_data())
    return report.exit_code


# -- parser ---------------------------------------------------------------------


def _add_common(p, ring=True, lam=True, d=True, out=True, tol=None, seed=False,
                lam_required=True):
    if ring:
        p.add_argument("--ring", required=True, help="ring spec, e.g. zmod:5")
    if lam:
        p.add_argument("--lambda", dest="lam", required=lam_required,
                       default=None,
                       help="character exponents, e.g. 1 or 1,0,0,1")
    if d:
        p.add_argument("--d", type=int, default=1)
    if out:
        p.add_argument("--out", default=None, help="write JSON artifact here")
    if tol is not None:
        p.add_argument("--tol", type=float, default=tol)
    if seed:
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="ccrkit",
        description="CCR pairs over finite rings: construction, equivalence "
                    "witnesses, and certified approximation bounds")
    root.add_argument("--version", action="version", version=__version__)
    sub = root.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", help="ring inspection").add_subparsers(
        dest="action", required=True)
    info = ring.add_parser("info")
    _add_common(info, lam=False, d=False)
    info.set_defaults(fn=_cmd_ring_info)

    char = sub.add_parser("char", help="character conditions").add_subparsers(
        dest="action", required=True)
    check = char.add_parser("check")
    _add_common(check, d=False)
    check.set_defaults(fn=_cmd_char_check)

    pair = sub.add_parser("pair", help="CCR pair construction").add_subparsers(
        dest="action", required=True)
    for kind in ("schrodinger", "regular"):
        p = pair.add_parser(kind)
        _add_common(p)
        p.set_defaults(fn=lambda a, k=kind: _cmd_pair_build(a, k))
    rand = pair.add_parser("random")
    _add_common(rand, seed=True)
    rand.add_argument("--mult", type=int, default=1)
    rand.set_defaults(fn=lambda a: _cmd_pair_build(a, "random"))
    verify = pair.add_parser("verify-ccr")
    verify.add_argument("pair_file")
    verify.add_argument("--tol", type=float, default=1e-12)
    verify.add_argument("--out", default=None)
    verify.set_defaults(fn=_cmd_pair_verify)

    svn = sub.add_parser("svn", help="equivalence and decomposition").add_subparsers(
        dest="action", required=True)
    for name, fn, tol in (("intertwine", _cmd_svn_intertwine, 1e-10),
                          ("decompose", _cmd_svn_decompose, 1e-8),
                          ("commutant", _cmd_svn_commutant, 1e-8)):
        p = svn.add_parser(name)
        p.add_argument("--pair", default=None, help="pair JSON file")
        p.add_argument("--ring", default=None)
        p.add_argument("--lambda", dest="lam", default=None)
        p.add_argument("--d", type=int, default=1)
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mult", type=int, default=1)
        p.add_argument("--out", default=None)
        p.set_defaults(fn=fn)
    eq = svn.add_parser("equivalent")
    eq.add_argument("--pair", required=True)
    eq.add_argument("--other", required=True)
    eq.add_argument("--tol", type=float, default=1e-8)
    eq.add_argument("--out", default=None)
    eq.set_defaults(fn=_cmd_svn_equivalent)

    heis = sub.add_parser("heis", help="Heisenberg groups").add_subparsers(
        dest="action", required=True)
    table = heis.add_parser("table")
    _add_common(table, lam=False)
    table.set_defaults(fn=_cmd_heis_table)
    repc = heis.add_parser("rep-check")
    _add_common(repc, tol=1e-10)
    repc.add_argument("--source", choices=("schrodinger", "regular"),
                      default="schrodinger")
    repc.set_defaults(fn=_cmd_heis_rep_check)
    ind = heis.add_parser("induce")
    _add_common(ind, tol=1e-8, lam_required=False)
    ind.set_defaults(fn=_cmd_heis_induce)

    approx = sub.add_parser("approx", help="certified approximation bounds"
                            ).add_subparsers(dest="action", required=True)
    samp = approx.add_parser("sample")
    samp.add_argument("--theta", required=True)
    samp.add_argument("--grid", type=int, required=True)
    samp.add_argument("--window", type=int, default=1000)
    samp.add_argument("--dims", type=int, default=2)
    samp.add_argument("--out", default=None)
    samp.set_defaults(fn=_cmd_approx_sample)
    epsp = approx.add_parser("epsilon")
    epsp.add_argument("--theta", required=True)
    epsp.add_argument("--grid", type=int, required=True)
    epsp.add_argument("--window", type=int, default=1000)
    epsp.add_argument("--k", required=True, help="window, e.g. -5..5 or 0,1,2")
    epsp.add_argument("--dims", type=int, default=2)
    epsp.add_argument("--fill", action="store_true",
                      help="fill uncovered cells with nearest orbit points")
    epsp.add_argument("--out", default=None)
    epsp.set_defaults(fn=_cmd_approx_epsilon)
    study = approx.add_parser("study")
    study.add_argument("--theta", required=True)
    study.add_argument("--grids", required=True, help="e.g. 8,16,32,64")
    study.add_argument("--k", default="-5..5")
    study.add_argument("--window", type=int, default=None)
    study.add_argument("--dims", type=int, default=2)
    study.add_argument("--out", default=None)
    study.set_defaults(fn=_cmd_approx_study)

    suite_p = sub.add_parser("suite", help="verification matrix").add_subparsers(
        dest="action", required=True)
    for profile in ("quick", "full"):
        p = suite_p.add_parser(profile)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.set_defaults(fn=lambda a, pr=profile: _cmd_suite(a, pr))

    return root


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.fn(args)
    except (PreconditionError, CoverageError, NumericsError,
            CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CHECK_ERROR
    except (StructureError, json.JSONDecodeError, FileNotFoundError,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
