"""Command line interface.

Subcommands:

``star``       multiply two polynomial jets on a built-in chart and print
               the resulting jet.
``invariant``  run the full pipeline (chart -> connection -> moment map ->
               Casimir) and emit an invariant report.
``check``      run a named property suite with a seed.

Exit codes: 0 success, 2 input error, 3 mathematical check failure.
Output for a fixed configuration and seed is byte-identical across runs,
and every report embeds the conventions hash and the truncation order.
"""

import argparse
import sys
from fractions import Fraction

from .coefficients import Scalar
from .conventions import DEFAULTS, parse_overrides
from .errors import InputError, MathCheckError, ParseError
from .fedosov import EquivalenceOp, WeylCurvature, build_connection, transport
from .golden import (DEFAULT_REPORT_JET_ORDER, chart_jet_order,
                     golden_example, make_chart)
from .gutt import (BUILTIN_LIE_ALGEBRAS, NCElement, SymPoly, casimir_element,
                   check_central, gutt_mul, pbw_straighten, symmetrize)
from .invariants import InvariantReport, evaluate_casimir
from .jets import FunctionJet
from .moment import verify_qmm
from .sampling import random_function_jet, random_section, rng_for
from .weyl import delta, delta_inv, moyal_mul, section_from_jet, sigma

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MATH = 3


def _parse_pert(text, params):
    if not text:
        return ()
    out = []
    for piece in text.split(","):
        out.append(Scalar.parse(piece.strip(), params))
    return tuple(out)


def _conventions(args):
    if getattr(args, "convention", None):
        return parse_overrides(args.convention)
    return DEFAULTS


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    sys.stdout.write(text)


def cmd_star(args):
    conventions = _conventions(args)
    order = args.order
    chart = make_chart(args.chart, order, args.jet_order, conventions)
    params = chart.params
    pert = _parse_pert(args.omega_pert, params)
    curvature = WeylCurvature.from_omega_multiples(chart, pert, order,
                                                   conventions)
    conn = build_connection(chart, curvature, order, conventions)
    u = chart.parse_function(args.u, order, chart.jet_order)
    v = chart.parse_function(args.v, order, chart.jet_order)
    result = conn.star(u, v).truncate_jet(args.jet_order)
    lines = ["chart: %s" % chart.name,
             "order: %d" % order,
             "conventions: %s" % conventions.ledger_hash(),
             "u * v:"]
    for item in result.to_entries():
        lines.append("  alpha=%s series=%s"
                     % (",".join(map(str, item["alpha"])),
                        " | ".join(item["series"])))
    if result.is_zero():
        lines.append("  0")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_invariant(args):
    conventions = _conventions(args)
    chart_params = ("r",) if args.example == "s2-so3" else ()
    pert = _parse_pert(args.omega_pert, chart_params)
    example = golden_example(args.example, args.order, pert, conventions,
                             args.jet_order)
    value = evaluate_casimir(example.casimir, example.qmm, example.connection,
                             order=args.order)
    report = InvariantReport(
        casimir="quadratic-casimir[%s]" % example.algebra.name,
        chart=example.chart.name,
        omega_label=tuple(str(c) for c in pert),
        value=value, constancy=True, order=args.order,
        conventions=conventions)
    _emit(report.to_text(), args.out)
    if args.json:
        _emit(report.to_json(), None)
    return EXIT_OK


def _check_associativity(args, conventions):
    order = args.order
    chart = make_chart(args.chart or "r2", order, DEFAULT_REPORT_JET_ORDER,
                       conventions)
    pert = _parse_pert(args.omega_pert, chart.params)
    curvature = WeylCurvature.from_omega_multiples(chart, pert, order,
                                                   conventions)
    conn = build_connection(chart, curvature, order, conventions)
    rng = rng_for(args.seed)
    cmp_jet = 2
    failures = []
    for trial in range(args.trials):
        u = random_function_jet(rng, chart.dim, order, chart.jet_order,
                                params=chart.params)
        v = random_function_jet(rng, chart.dim, order, chart.jet_order,
                                params=chart.params)
        w = random_function_jet(rng, chart.dim, order, chart.jet_order,
                                params=chart.params)
        left = conn.star(conn.star(u, v), w)
        right = conn.star(u, conn.star(v, w))
        if not left.truncate_jet(cmp_jet) == right.truncate_jet(cmp_jet):
            failures.append("associativity trial %d" % trial)
        one = FunctionJet.constant(1, chart.dim, order, chart.jet_order)
        if not conn.star(one, u) == u.truncate_jet(conn.star(one, u).jet_order):
            failures.append("left unit trial %d" % trial)
        if not conn.star(u, one) == u.truncate_jet(conn.star(u, one).jet_order):
            failures.append("right unit trial %d" % trial)
        comm = conn.star(u, v) - conn.star(v, u)
        bracket = u.poisson(v, chart.symplectic).lambda_shift(1)
        trust = min(comm.jet_order, bracket.jet_order)
        ok = True
        for alpha, series in (comm - bracket).truncate_jet(trust).coeffs.items():
            if order >= 1 and not series.coeffs[1].is_zero():
                ok = False
        if not ok:
            failures.append("first-order bracket trial %d" % trial)
    return failures


def _check_hodge(args, conventions):
    rng = rng_for(args.seed)
    failures = []
    for trial in range(args.trials):
        section = random_section(rng, 2, args.order, 2 * args.order + 1, 3)
        recomposed = delta(delta_inv(section)) + delta_inv(delta(section)) \
            + section_from_jet(sigma(section), section.dmax)
        if not recomposed == section:
            failures.append("hodge decomposition trial %d" % trial)
        if not delta(delta(section)).is_zero():
            failures.append("delta^2 trial %d" % trial)
        if not delta_inv(delta_inv(section)).is_zero():
            failures.append("delta_inv^2 trial %d" % trial)
    return failures


def _check_gutt_center(args, conventions):
    name = args.liealg or "sl2"
    if name not in BUILTIN_LIE_ALGEBRAS:
        raise InputError("unknown Lie algebra %r" % name)
    algebra = BUILTIN_LIE_ALGEBRAS[name]()
    z = casimir_element(algebra, args.order)
    failures = []
    if not check_central(z, algebra):
        failures.append("casimir not central for %s" % name)
    rng = rng_for(args.seed)
    for trial in range(args.trials):
        i = rng.randrange(algebra.dim)
        j = rng.randrange(algebra.dim)
        xi = SymPoly.variable(i, args.order, algebra.dim)
        xj = SymPoly.variable(j, args.order, algebra.dim)
        comm = gutt_mul(xi, xj, algebra) - gutt_mul(xj, xi, algebra)
        expected = SymPoly.zero(args.order, algebra.dim)
        for k, coeff in algebra.bracket(i, j).items():
            expected = expected + SymPoly.variable(
                k, args.order, algebra.dim) * coeff
        if not comm == expected * _lambda_shift_series(args.order):
            failures.append("generator bracket trial %d" % trial)
    return failures


def _lambda_shift_series(order):
    from .coefficients import LambdaSeries
    return LambdaSeries.variable(order)


def _check_qmm_axioms(args, conventions):
    example_name = args.example or "s2-so3"
    chart_params = ("r",) if example_name == "s2-so3" else ()
    pert = _parse_pert(args.omega_pert, chart_params)
    example = golden_example(example_name, args.order, pert, conventions)
    rng = rng_for(args.seed)
    jets = [random_function_jet(rng, example.chart.dim, args.order,
                                example.chart.jet_order,
                                params=example.chart.params)
            for _ in range(args.trials)]
    report = verify_qmm(example.qmm, example.connection, jets)
    failures = []
    for name, ok in report["derivation"].items():
        if not ok:
            failures.append("derivation check for %s" % name)
    for pair, ok in report["bracket"].items():
        if not ok:
            failures.append("bracket check for (%s)" % pair)
    return failures


def _check_invariance(args, conventions):
    example = golden_example("r2-sl2", args.order, (), conventions)
    base = evaluate_casimir(example.casimir, example.qmm, example.connection)
    equivalence = EquivalenceOp(2, {1: [((1, 1), Fraction(1, 2))]})
    transported = {}
    for name in example.algebra.names:
        transported[name] = equivalence.apply(example.qmm.component(name))

    class _Transported:
        order = example.connection.order
        chart = example.connection.chart

        @staticmethod
        def star(u, v):
            return transport(equivalence, example.connection, u, v)

    from .moment import QuantumMomentMap
    moved = QuantumMomentMap(example.algebra, transported,
                             example.qmm.classical, example.connection)
    value = evaluate_casimir(example.casimir, moved, _Transported)
    failures = []
    for n in range(args.order + 1):
        if not (base.coeffs[n] - value.coeffs[n]).is_zero():
            failures.append("transported invariant differs at order %d" % n)
            break
    return failures


SUITES = {
    "associativity": _check_associativity,
    "hodge": _check_hodge,
    "gutt-center": _check_gutt_center,
    "qmm-axioms": _check_qmm_axioms,
    "invariance": _check_invariance,
}


def cmd_check(args):
    conventions = _conventions(args)
    failures = SUITES[args.suite](args, conventions)
    lines = ["suite: %s" % args.suite,
             "order: %d seed: %d" % (args.order, args.seed),
             "conventions: %s" % conventions.ledger_hash()]
    if failures:
        lines.extend("FAIL %s" % f for f in failures)
        lines.append("result: FAIL")
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_MATH
    lines.append("result: PASS")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fedstar",
        description="Exact star products, quantum moment maps and Casimir "
                    "invariants on Darboux charts.")
    sub = parser.add_subparsers(dest="command", required=True)

    star = sub.add_parser("star", help="multiply two polynomial jets")
    star.add_argument("--chart", required=True, choices=("r2", "s2"))
    star.add_argument("--order", type=int, default=2)
    star.add_argument("--omega-pert", default="")
    star.add_argument("--u", required=True)
    star.add_argument("--v", required=True)
    star.add_argument("--jet-order", type=int,
                      default=DEFAULT_REPORT_JET_ORDER)
    star.add_argument("--convention", action="append", default=[])
    star.add_argument("--out")
    star.set_defaults(func=cmd_star)

    inv = sub.add_parser("invariant", help="evaluate a Casimir invariant")
    inv.add_argument("--example", required=True,
                     choices=("r2-sl2", "s2-so3"))
    inv.add_argument("--order", type=int, default=2)
    inv.add_argument("--omega-pert", default="")
    inv.add_argument("--jet-order", type=int,
                     default=DEFAULT_REPORT_JET_ORDER)
    inv.add_argument("--convention", action="append", default=[])
    inv.add_argument("--json", action="store_true")
    inv.add_argument("--out")
    inv.set_defaults(func=cmd_invariant)

    chk = sub.add_parser("check", help="run a property suite")
    chk.add_argument("suite", choices=sorted(SUITES))
    chk.add_argument("--chart", choices=("r2", "s2"))
    chk.add_argument("--example", choices=("r2-sl2", "s2-so3"))
    chk.add_argument("--liealg", choices=("sl2", "so3"))
    chk.add_argument("--order", type=int, default=2)
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--trials", type=int, default=5)
    chk.add_argument("--omega-pert", default="")
    chk.add_argument("--convention", action="append", default=[])
    chk.add_argument("--out")
    chk.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, KeyError, ValueError) as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return EXIT_INPUT
    except MathCheckError as exc:
        sys.stderr.write("mathematical check failed: %s\n" % exc)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
