"""Command-line front end.

Exit status: 0 on success, 1 when a verification or equality check fails,
2 on usage or input errors. Everything but logging goes to stdout.
"""
import argparse
import logging
import sys

import coeffs
import database
import fingroup
import mealy
import normalform
import relcheck
import words
from config import get_config
from errors import CayleyError

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHECKS = ('relations', 'wreath', 'depth', 'embedding', 'infinite-order', 'all')


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _group_options(parser, required=True):
    source = parser.add_mutually_exclusive_group(required=required)
    source.add_argument('--group', '--builtin', dest='group', metavar='NAME',
                        help=f"catalog group ({', '.join(fingroup.CATALOG)})")
    source.add_argument('--file', metavar='PATH', help='group file')


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not a positive integer")
    return value


def _budget_options(parser):
    parser.add_argument('--state-budget', type=_positive_int, default=None, metavar='N',
                        help='largest product machine (reachable states)')


def _report_options(parser):
    parser.add_argument('--format', choices=('table', 'csv'), default='table')
    parser.add_argument('--timing', action='store_true', help='print wall time')
    parser.add_argument('--archive', nargs='?', const='', default=None, metavar='URL',
                        help='store the report (default database when URL is omitted)')


def build_parser():
    parser = _Parser(prog='cayley', description='Cayley machines of finite groups and their automata groups.')
    parser.add_argument('--log-level', default=None, help='logging level for stderr')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=_Parser)
    sub.required = True

    p = sub.add_parser('group', help='load a group and describe it')
    _group_options(p)
    p.add_argument('--info', action='store_true', help='print order, element orders, center (default)')
    p.add_argument('--dump', action='store_true', help='print the group in the file format')

    p = sub.add_parser('coeffs', help='the exponent matrix a_ij')
    p.add_argument('--n-max', type=int, default=11)
    p.add_argument('--format', choices=('table', 'csv'), default='table')
    p.add_argument('--check', action='store_true', help='run the matrix identities instead of printing')

    p = sub.add_parser('machine', help='dump the machine of a word (or the Cayley machine)')
    _group_options(p)
    _budget_options(p)
    p.add_argument('word', nargs='?', default=None)
    p.add_argument('--inverse', action='store_true', help='dump the inverse Cayley machine')

    p = sub.add_parser('act', help='apply a word to an input word')
    _group_options(p)
    p.add_argument('word')
    p.add_argument('input', help='whitespace-separated labels')

    p = sub.add_parser('eq', help='decide equality of two words')
    _group_options(p)
    _budget_options(p)
    p.add_argument('left')
    p.add_argument('right')
    p.add_argument('--method', choices=relcheck.METHODS, default='machine')

    p = sub.add_parser('nf', help='normal forms of words')
    _group_options(p)
    p.add_argument('words', nargs='+')
    p.add_argument('--order', type=int, default=None, metavar='BOUND',
                   help='also print the order of each element up to BOUND')

    p = sub.add_parser('verify', help='machine-check the relations and related claims')
    _group_options(p)
    _budget_options(p)
    _report_options(p)
    p.add_argument('--check', choices=CHECKS, default='relations')
    p.add_argument('--n', type=int, default=None, help='single level')
    p.add_argument('--n-max', type=int, default=3)
    p.add_argument('--method', choices=relcheck.METHODS, default='machine')

    p = sub.add_parser('xval', help='cross-validate normal forms against machines')
    _group_options(p)
    _budget_options(p)
    _report_options(p)
    p.add_argument('--count', type=int, default=None)
    p.add_argument('--max-len', type=int, default=None)
    p.add_argument('--seed', type=int, default=None)

    p = sub.add_parser('reports', help='list archived verification runs')
    p.add_argument('--archive', default=None, metavar='URL')
    return parser


def load_group(args) -> fingroup.FiniteGroup:
    if args.file:
        G = fingroup.load_group_file(args.file)
    else:
        G = fingroup.builtin(args.group)
    if not G.class_check.ok:
        logger.warning("%s is not of nilpotency class <= 2; normal forms are unavailable", G.name)
    return G


def _setup_logging(level):
    level = (level or get_config().LOG_LEVEL).upper()
    root = logging.getLogger()
    if not any(getattr(h, '_cayley', False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
        handler._cayley = True
        root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.WARNING))


def _labels(G, text):
    return [G.index_of(tok) for tok in text.split()]


# subcommands

def cmd_group(args, out):
    G = load_group(args)
    if args.dump:
        out.write(fingroup.dump_group_file(G))
        return EXIT_OK
    check = G.class_check
    out.write(f"group {G.name}\n")
    out.write(f"order {G.order}\n")
    out.write("elements " + " ".join(G.labels) + "\n")
    out.write("element orders " + " ".join(str(int(o)) for o in G.elt_order) + "\n")
    out.write(f"exponent {G.exponent}\n")
    out.write(f"class <= 2: {'yes' if check.ok else 'no'}")
    if not check.ok:
        g, h, z = check.witness
        out.write(f" (witness g={g} h={h} z={z})")
    out.write("\n")
    out.write("center {" + ", ".join(e.label for e in fingroup.center(G)) + "}\n")
    out.write("derived subgroup {" + ", ".join(e.label for e in fingroup.derived_subgroup(G)) + "}\n")
    return EXIT_OK


def cmd_coeffs(args, out):
    if args.n_max < 1:
        raise CayleyError("--n-max must be at least 1")
    M = coeffs.build_recursive(args.n_max)
    if args.check:
        return _coeff_checks(M, out)
    if args.format == 'csv':
        out.write(coeffs.to_frame(M, blanks=False).to_csv())
    else:
        out.write(coeffs.to_frame(M).to_string() + "\n")
    return EXIT_OK


def _coeff_checks(M, out):
    ok = True
    rows = coeffs.check_row_identities(M)
    if rows.ok:
        out.write(f"row identities: pass (rows 1..{M.n_max})\n")
    else:
        ok = False
        first = rows.first_failure
        out.write(f"row identities: FAIL at row {first.n} ({first.failed})\n")
    mismatches = coeffs.closed_form_matches(M)
    if mismatches:
        ok = False
        i, j = mismatches[0]
        out.write(f"closed form: FAIL at ({i}, {j})\n")
    else:
        out.write(f"closed form: pass ({M.n_max * M.n_max} entries)\n")
    bad = coeffs.simplified_recurrence_holds(M)
    if bad:
        ok = False
        out.write(f"simplified recurrence: FAIL at {bad}\n")
    else:
        out.write("simplified recurrence: pass\n")
    pairs = [(m, n) for n in range(1, M.n_max) for m in range(1, n + 1)]
    failing = [p for p in pairs if not coeffs.check_sum_identity(M, *p)]
    if failing:
        ok = False
        out.write(f"summation identity: FAIL at m={failing[0][0]} n={failing[0][1]}\n")
    else:
        out.write(f"summation identity: pass ({len(pairs)} pairs)\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_machine(args, out):
    G = load_group(args)
    if args.word is None:
        M = mealy.inverse_cayley_machine(G) if args.inverse else mealy.cayley_machine(G)
        out.write(mealy.dump(M, list(G.labels)))
        return EXIT_OK
    P = words.to_machine(words.parse(args.word, G), budget=args.state_budget)
    out.write(f"# {P.state_count} states, initial 0\n")
    out.write(mealy.dump(P.machine, list(G.labels)))
    return EXIT_OK


def cmd_act(args, out):
    G = load_group(args)
    w = words.parse(args.word, G)
    result = words.act_word(w, _labels(G, args.input))
    out.write(" ".join(G.labels[a] for a in result) + "\n")
    return EXIT_OK


def cmd_eq(args, out):
    G = load_group(args)
    u, v = words.parse(args.left, G), words.parse(args.right, G)
    verdict = relcheck.words_equal(u, v, args.method, budget=args.state_budget)
    if verdict.passed:
        out.write("equal\n")
        return EXIT_OK
    out.write("not equal\n")
    if verdict.witness:
        out.write(f"witness: {verdict.witness}\n")
    return EXIT_FAIL


def cmd_nf(args, out):
    G = load_group(args)
    for text in args.words:
        A = normalform.normalize(words.parse(text, G))
        line = normalform.nf_format(A)
        if args.order is not None:
            order = normalform.torsion_order(A, args.order)
            line += f"\torder {'>' + str(args.order) if order is None else order}"
        out.write(line + "\n")
    return EXIT_OK


def _run_checks(G, args):
    if args.n is not None and args.n < (1 if args.check == 'relations' else 0):
        raise CayleyError(f"--n {args.n} is out of range for --check {args.check}")
    if args.n_max < 1:
        raise CayleyError("--n-max must be at least 1")
    n_min = args.n
    n_max = args.n if args.n is not None else args.n_max
    budget = args.state_budget
    check = args.check
    reports = []
    if check in ('relations', 'all'):
        reports.append(relcheck.verify_all(G, n_max, args.method, budget, n_min=n_min or 1))
    if check in ('wreath', 'all'):
        reports.append(relcheck.verify_wreath(G, n_max, budget, n_min=n_min or 0))
    if check in ('depth', 'all'):
        reports.append(relcheck.verify_depths(G, n_max, budget, n_min=n_min or 0))
    if check in ('embedding', 'all'):
        reports.append(relcheck.verify_embedding(G, budget))
    if check in ('infinite-order', 'all'):
        reports.append(relcheck.verify_infinite_orders(G, 16))
    if len(reports) == 1:
        return reports[0]
    merged = relcheck.VerificationReport(G.name, 'all', args.method)
    for report in reports:
        merged.checks.extend(report.checks)
        merged.wall_time += report.wall_time
    return merged


def _emit_report(report, args, out, lines=True):
    if args.format == 'csv':
        out.write(report.to_frame().to_csv(index=False))
    else:
        shown = report.checks if lines else report.failures()
        for c in shown:
            out.write(c.line() + "\n")
            if c.witness and c.verdict != relcheck.VACUOUS:
                out.write(f"  witness: {c.witness}\n")
        if not lines:
            for text in report.summary_by_id():
                out.write(text + "\n")
        out.write(report.summary() + "\n")
    if args.timing:
        out.write(f"wall time {report.wall_time:.3f} s\n")
    if args.archive is not None:
        run_id = database.archive_report(report, url=args.archive or None, seed=getattr(args, 'seed', None))
        logger.info("archived report as run %d", run_id)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_verify(args, out):
    G = load_group(args)
    report = _run_checks(G, args)
    return _emit_report(report, args, out)


def cmd_xval(args, out):
    G = load_group(args)
    report = relcheck.cross_validate(G, args.count, args.max_len, args.seed, budget=args.state_budget)
    return _emit_report(report, args, out, lines=False)


def cmd_reports(args, out):
    runs = database.list_runs(url=args.archive)
    for run in runs:
        out.write(f"{run.id}\t{run.group_name}\t{run.kind}\t{run.total_checks} checks, "
                  f"{run.passed} pass\t{run.created_at:%Y-%m-%d %H:%M:%S}\n")
    return EXIT_OK


COMMANDS = {
    'group': cmd_group,
    'coeffs': cmd_coeffs,
    'machine': cmd_machine,
    'act': cmd_act,
    'eq': cmd_eq,
    'nf': cmd_nf,
    'verify': cmd_verify,
    'xval': cmd_xval,
    'reports': cmd_reports,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    _setup_logging(args.log_level)
    try:
        return COMMANDS[args.command](args, out)
    except (CayleyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
