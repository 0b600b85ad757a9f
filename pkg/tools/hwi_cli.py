#!/usr/bin/env python3
"""
hwi: H. Weyl curvature invariant toolkit
========================================

Sub-commands:
  invariants  h_2q, curvature norms, decomposition and the three h4 routes
  export      write a generated tensor as tensor JSON
  verify      run a named verification suite (or all of them)
  sample      sampled p-curvature check that s_p > 0 forces h4 > 0
  scaling     exact submersion scaling check for a product model
  neck        bending planner / epsilon sweep / point evaluation for the surgery neck

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from hwi_config import resolve, use_settings
from hwi_curvature import (CurvatureTensor, curvature_norms, einstein_check, h2q, h4, h4_formal, ricci,
                           scalar_curv)
from hwi_dfcore import exact_tree
from hwi_errors import HwiError, InvariantMismatchError
from hwi_models import (conformally_flat, constant_curvature, einsteinize, hypersurface, parse_values,
                        product_tensor, random_bianchi, scale_metric)
from hwi_neck import (CSV_FIELDS, MIN_CODIMENSION, KCapPolicy, NeckParams, h4_neck_leading,
                      h4_neck_lower_bound, k_cap, neck_sweep, norm_expansions, open_output, plan_bending,
                      submersion_scaling_check, write_plan_csv, write_rows_csv)
from hwi_pcurv import verify_positivity
from hwi_tensor_io import FORMATS, emit, export_tensor, load_tensor, parse_generator
from hwi_verify import SUITE_ALIASES, SUITES, SuiteOptions, parse_n_range, run_suites

log = logging.getLogger('hwi')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def setup_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s',
                        force=True)


# ---------------------------------------------------------------------------
# tensor selection

def add_tensor_source(parser: argparse.ArgumentParser) -> None:
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument('--sphere', nargs=2, metavar=('N', 'LAMBDA'), help='constant curvature (lambda/2) g^2')
    src.add_argument('--hypersurface', metavar='L1,L2,...', help='principal curvatures of a hypersurface')
    src.add_argument('--conformal', metavar='H1,H2,...', help='diagonal h of a conformally flat R = g.h')
    src.add_argument('--product', nargs=2, metavar=('SPEC', 'SPEC'),
                     help='Riemannian product of two generator specs (e.g. sphere:4:1)')
    src.add_argument('--random', type=int, metavar='N', help='random Bianchi tensor in dimension N')
    src.add_argument('--file', type=Path, help='tensor JSON file')
    src.add_argument('--spec', help='generator spec string')
    parser.add_argument('--terms', type=int, default=3, help='terms of a --random tensor')
    parser.add_argument('--seed', type=int, default=None, help='seed for --random (default HWI_SEED or 0)')
    parser.add_argument('--scale', metavar='T', help='replace g by T g before computing')
    parser.add_argument('--einsteinize', action='store_true', help='drop the traceless Ricci part')


def build_tensor(args: argparse.Namespace, seed: int) -> CurvatureTensor:
    if args.sphere:
        R = constant_curvature(int(args.sphere[0]), parse_values(args.sphere[1])[0])
    elif args.hypersurface:
        R = hypersurface(parse_values(args.hypersurface))
    elif args.conformal:
        R = conformally_flat(parse_values(args.conformal))
    elif args.product:
        R = product_tensor(parse_generator(args.product[0]), parse_generator(args.product[1]))
    elif args.random is not None:
        R = random_bianchi(args.random, seed, args.terms)
    elif args.file:
        R = load_tensor(args.file)
    else:
        R = parse_generator(args.spec)
    if args.scale:
        R = scale_metric(R, parse_values(args.scale)[0])
    if args.einsteinize:
        R = einsteinize(R)
    return R


# ---------------------------------------------------------------------------
# invariants / export

def invariants_payload(R: CurvatureTensor, orders: Optional[List[int]] = None) -> Dict:
    n = R.n
    if orders is None:
        top = n // 2 if n <= 8 else 2
        orders = list(range(1, top + 1))
    num = exact_tree if R.is_exact() else (lambda value: value)
    payload: Dict = {'label': R.label, 'n': n, 'backend': 'exact' if R.is_exact() else 'float'}
    payload['scal'] = num(scalar_curv(R))
    payload['ricci'] = num(ricci(R).matrix())
    check = einstein_check(R)
    payload['einstein'] = {'is_einstein': check.is_einstein, 'deviation': check.deviation}
    if n < 4:
        a, b, c = curvature_norms(R)
        payload['h2q'] = [{'q': q, 'value': num(h2q(R, q))} for q in orders if 2 * q <= n]
        payload['norms'] = num({'R': a, 'cR': b, 'c2R': c})
        payload['h4_formal'] = num(h4_formal(R))
        payload['note'] = 'n < 4: decomposition and h4 routes are not defined; h4_formal only'
        return payload
    report = h4(R, orders=[q for q in orders if 2 * q <= n])
    payload['h2q'] = [{'q': q, 'value': num(v)} for q, v in report.h2q]
    payload['norms'] = num({key: report.norms[key] for key in ('R', 'cR', 'c2R')})
    payload['decomposition'] = num({key: report.norms[key] for key in ('omega0', 'omega1', 'omega2')})
    payload['h4'] = num({'direct': report.h4_direct, 'decomposed': report.h4_decomposed,
                         'contraction': report.h4_contraction})
    return payload


def cmd_invariants(args: argparse.Namespace, settings) -> int:
    R = build_tensor(args, settings.seed)
    orders = [int(v) for v in args.orders.split(',')] if args.orders else None
    log.info('computing invariants of %s (n=%d)', R.label, R.n)
    emit(invariants_payload(R, orders), args.format, args.out)
    return EXIT_OK


def cmd_export(args: argparse.Namespace, settings) -> int:
    R = build_tensor(args, settings.seed)
    text = export_tensor(R, args.out)
    if args.out:
        print(f'Wrote: {args.out}', file=sys.stderr)
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify / sample / scaling

def cmd_verify(args: argparse.Namespace, settings) -> int:
    names = list(SUITES) if args.suite == 'all' else [args.suite]
    dims = parse_n_range(args.n) if args.n else None
    opts = SuiteOptions.from_settings(dims)
    report = run_suites(names, opts)
    emit(report, args.format, args.out)
    for suite in report['suites']:
        print(f"[{'PASS' if suite['passed'] else 'FAIL'}] {suite['suite']}: {suite['cases']} checks",
              file=sys.stderr)
    return EXIT_OK if report['passed'] else EXIT_FAILED


def cmd_sample(args: argparse.Namespace, settings) -> int:
    R = build_tensor(args, settings.seed)
    report = verify_positivity(R, settings.plane_samples, settings.seed, settings.workers)
    payload = report.as_dict()
    if args.argmin:
        payload['argmin_plane'] = report.argmin_plane
    emit(payload, args.format, args.out)
    return EXIT_FAILED if report.counterexample else EXIT_OK


def cmd_scaling(args: argparse.Namespace, settings) -> int:
    fiber, base = parse_generator(args.fiber), parse_generator(args.base)
    t_list = parse_values(args.t)
    report = submersion_scaling_check(fiber, base, t_list)
    emit(report.as_dict(), args.format, args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# neck

def _policy(args: argparse.Namespace) -> KCapPolicy:
    return KCapPolicy(plateau_fraction=args.plateau, straight_fraction=args.straight)


def cmd_neck(args: argparse.Namespace, settings) -> int:
    h4_base = args.h4_base
    if h4_base is None:
        h4_base = NeckParams.for_sphere(args.m, args.q, args.r).h4_base if args.m else 0.0

    if args.at:
        theta, k = args.at
        p = NeckParams(args.m or 0, args.q, args.r, theta, k, h4_base)
        exp = norm_expansions(p)
        payload = {
            'order': 'leading-order', 'q': p.q, 'r': p.r, 'theta': p.theta, 'k': p.k, 'h4_base': h4_base,
            'h4_leading': h4_neck_leading(p),
            'h4_lower_bound': h4_neck_lower_bound(p) if p.q >= MIN_CODIMENSION else None,
            'k_cap': k_cap(p.r, theta),
            'norms': {name: exp.evaluate(name, p.r, theta, k)
                      for name in ('riemann', 'ricci', 'scalar_sq', 'combination')},
            'k_term_note': exp.note,
        }
        emit(payload, args.format, args.out)
        return EXIT_OK

    if args.sweep:
        rows = neck_sweep(args.q, args.r, args.theta0, args.count, h4_base, _policy(args), settings.workers)
        out = open_output(args.csv)
        try:
            write_rows_csv(rows, out or sys.stdout)
        finally:
            if out is not None:
                out.close()
        if args.csv:
            print(f'Wrote: {args.csv}', file=sys.stderr)
        return EXIT_OK if all(row['feasible'] for row in rows) else EXIT_FAILED

    plan = plan_bending(args.q, args.r, args.theta0, _policy(args), h4_base)
    summary = plan.summary()
    if args.csv:
        out = open_output(args.csv)
        try:
            count = write_plan_csv(plan, out)
        finally:
            out.close()
        summary['csv'] = str(args.csv)
        summary['csv_columns'] = CSV_FIELDS
        print(f'Wrote: {args.csv} ({count} rows)', file=sys.stderr)
    summary['bump_records'] = [vars(b) for b in plan.bumps[:args.show_bumps]]
    emit(summary, args.format, args.out)
    if not plan.feasible:
        print(f'Infeasible: {plan.reason}', file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog='hwi', description='H. Weyl curvature invariants, verification and neck planner')
    ap.add_argument('--config', type=Path, help='YAML settings file')
    ap.add_argument('-v', '--verbose', action='store_true')
    ap.add_argument('-q', '--quiet', action='store_true')
    sub = ap.add_subparsers(dest='command', required=True)

    def output_options(p: argparse.ArgumentParser) -> None:
        p.add_argument('--format', choices=FORMATS, default='json')
        p.add_argument('--out', type=Path, help='write the report here instead of stdout')

    p = sub.add_parser('invariants', help='invariant report for one tensor')
    add_tensor_source(p)
    p.add_argument('--orders', help='comma separated q values for h_2q (default: all 2q <= n)')
    output_options(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser('export', help='write a tensor as tensor JSON')
    add_tensor_source(p)
    p.add_argument('--out', type=Path)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser('verify', help='run a verification suite')
    p.add_argument('suite', choices=list(SUITES) + sorted(SUITE_ALIASES) + ['all'],
                   help='suite name (effective-norms, h4-signs and positivity are aliases)')
    p.add_argument('--n', help='dimensions, e.g. 4..6 or 4,6')
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--samples', type=int, default=None, help='cases per suite (default: suite-specific)')
    p.add_argument('--plane-samples', type=int, default=None, help='planes per p-curvature minimum')
    p.add_argument('--workers', type=int, default=None)
    output_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('sample', help='sampled p-curvature positivity check')
    add_tensor_source(p)
    p.add_argument('--plane-samples', type=int, default=None)
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--argmin', action='store_true', help='include the minimizing plane')
    output_options(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('scaling', help='exact h4 of t^2 g_F + g_B')
    p.add_argument('--fiber', required=True, help='generator spec of F')
    p.add_argument('--base', required=True, help='generator spec of B')
    p.add_argument('--t', default='2,10,100', help='comma separated t values')
    output_options(p)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser('neck', help='surgery neck formulas and bending planner (leading order)')
    p.add_argument('--q', type=int, required=True, help='codimension')
    p.add_argument('--r', type=float, required=True, help='starting tube radius')
    p.add_argument('--theta0', type=float, default=0.3, help='starting angle of the curve')
    p.add_argument('--m', type=int, default=None, help='sphere dimension; sets h4_base to h4(S^m(1))')
    p.add_argument('--h4-base', type=float, default=None)
    p.add_argument('--plateau', type=float, default=0.9, help='plateau k as a fraction of sin(theta)/(2r)')
    p.add_argument('--straight', type=float, default=0.1, help='straight run length as a fraction of r')
    p.add_argument('--csv', type=Path, help='per-step CSV (or the sweep grid with --sweep)')
    p.add_argument('--sweep', action='store_true', help='grid over eps = r / 2^i')
    p.add_argument('--count', type=int, default=8, help='grid size for --sweep')
    p.add_argument('--at', nargs=2, type=float, metavar=('THETA', 'K'), help='evaluate the formulas at one point')
    p.add_argument('--show-bumps', type=int, default=5, help='bump records included in the summary')
    p.add_argument('--workers', type=int, default=None)
    output_options(p)
    p.set_defaults(func=cmd_neck)
    return ap


def main(argv: list[str]) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    setup_logging(args.verbose, args.quiet)

    overrides = {key: getattr(args, key, None) for key in ('seed', 'samples', 'workers', 'plane_samples')}
    try:
        settings = resolve(args.config, overrides)
        previous = use_settings(settings)
        try:
            return args.func(args, settings)
        finally:
            use_settings(previous)
    except InvariantMismatchError as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_FAILED
    except (HwiError, ValueError) as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    raise SystemExit(main(sys.argv[1:]))
