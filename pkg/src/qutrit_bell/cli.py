"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 input error, 3 internal consistency
failure. Results go to stdout, diagnostics to stderr.
"""

import argparse
import csv
import io
import json
import sys
from collections import Counter

import numpy as np

from . import bell
from .experiment import (
    SETTING_TRIPLES,
    correlation_closed_form,
    correlation_from_probabilities,
    ghz_state,
    joint_probabilities,
)
from .fileio import InputError, load_settings, load_state, settings_to_doc
from .optimizer import (
    ConsistencyError,
    SearchConfig,
    noise_threshold,
    optimize_settings,
    paper_settings,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x):
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def _key(i, j, k):
    return f"{i}{j}{k}"


def _q_doc(q):
    return {
        _key(*t): {"re": q.at(*t).real, "im": q.at(*t).imag} for t in SETTING_TRIPLES
    }


def _prob_doc(table):
    return {_key(*t): [float(x) for x in table.block(*t).reshape(-1)] for t in SETTING_TRIPLES}


def _flatten(doc, prefix=""):
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, (list, tuple)):
        for n, v in enumerate(doc):
            yield from _flatten(v, f"{prefix}[{n}]")
    else:
        yield prefix, doc


def _emit(doc, fmt, out, table=None):
    """Write ``doc`` as JSON, or flattened key/value rows for csv and text.

    ``table`` (header, rows) replaces the flattening for csv output.
    """
    if fmt == "json":
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        if table is not None:
            header, rows = table
            writer.writerow(header)
            writer.writerows([[_fmt(x) for x in row] for row in rows])
        else:
            writer.writerow(["key", "value"])
            writer.writerows([k, _fmt(v)] for k, v in _flatten(doc))
    else:
        for k, v in _flatten(doc):
            out.write(f"{k} = {_fmt(v)}\n")


def _state(args):
    return ghz_state() if args.state is None else load_state(args.state)


def _noise(args):
    f = 0.0 if args.noise is None else args.noise
    if not 0.0 <= f <= 1.0:
        raise UsageError(f"--noise {f!r} outside [0, 1]")
    return f


def _evaluate(settings, state, noise):
    table = joint_probabilities(state, settings, noise=noise)
    q = correlation_from_probabilities(table)
    corr = bell.bell_correlation_form(q)
    prob = bell.bell_probability_form(table)
    if abs(prob - (1 + 2 / 3 * corr)) > 1e-12:
        raise ConsistencyError(f"probability form {prob!r} vs correlation form {corr!r}")
    return table, q, corr, prob


def cmd_paper_demo(args):
    settings = paper_settings()
    table, q, corr, prob = _evaluate(settings, ghz_state(), 0.0)
    closed = correlation_closed_form(settings)
    gap = float(np.max(np.abs(closed.values - q.values)))
    if gap > 1e-10:
        raise ConsistencyError(f"closed-form correlations deviate by {gap:.3g}")
    threshold = noise_threshold(settings)
    return {
        "settings": settings_to_doc(settings),
        "q": _q_doc(q),
        "correlation_value": corr,
        "probability_form_value": prob,
        "classical_bound": bell.CLASSICAL_BOUND,
        "violation": corr > bell.CLASSICAL_BOUND,
        "noise_threshold": threshold.f_min,
        "noise_threshold_bisection": threshold.f_min_bisection,
    }, None


def cmd_eval(args):
    settings = load_settings(args.settings)
    state = _state(args)
    noise = _noise(args)
    table, q, corr, prob = _evaluate(settings, state, noise)
    return {
        "settings": settings_to_doc(settings),
        "state": "ghz" if args.state is None else str(args.state),
        "noise": noise,
        "probabilities": _prob_doc(table),
        "q": _q_doc(q),
        "correlation_value": corr,
        "probability_form_value": prob,
        "classical_bound": bell.CLASSICAL_BOUND,
        "violation": corr > bell.CLASSICAL_BOUND,
    }, None


def cmd_classical_max(args):
    result = bell.classical_maximum(args.form)
    maximizers = [list(a) for a in result.maximizers]
    return {
        "form": args.form,
        "max_value": result.value,
        "maximizer_count": len(maximizers),
        "first_maximizers": maximizers[:10],
    }, None


def cmd_expand(args):
    ledger = bell.expand_coefficients()
    bell.check_ledger(ledger)
    if any(ledger[a] != bell.vertex_value(a) for a in bell.ASSIGNMENTS):
        raise ConsistencyError("ledger disagrees with the vertex evaluation")
    header = ["l1", "l2", "m1", "m2", "n1", "n2", "coefficient"]
    rows = [list(a) + [c] for a, c in ledger.items()]
    hist = Counter(ledger.values())
    doc = {
        "rows": [dict(zip(header, r)) for r in rows],
        "histogram": {str(v): hist[v] for v in sorted(hist)},
        "total": sum(ledger.values()),
    }
    return doc, (header, rows)


def _search_config(args):
    if args.restarts < 1:
        raise UsageError("--restarts must be at least 1")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    return SearchConfig(
        restarts=args.restarts,
        seed=args.seed,
        noise_fraction=_noise(args),
        state=_state(args),
    )


def cmd_optimize(args):
    result = optimize_settings(_search_config(args))
    return {
        "best_settings": settings_to_doc(result.best_settings),
        "best_value": result.best_value,
        "restart_values": list(result.restart_values),
        "evaluations": result.evaluations,
        "seed": args.seed,
        "restarts": args.restarts,
        "noise": _noise(args),
    }, None


def cmd_noise_threshold(args):
    if (args.settings is None) == (not args.optimize):
        raise UsageError("give exactly one of --settings PATH or --optimize")
    state = _state(args)
    if args.optimize:
        config = _search_config(args)
        if config.noise_fraction != 0.0:
            raise UsageError("--noise does not apply to noise-threshold")
        settings = optimize_settings(config).best_settings
    else:
        settings = load_settings(args.settings)
    result = noise_threshold(settings, state)
    return {
        "settings": settings_to_doc(settings),
        "f_min": result.f_min,
        "f_min_bisection": result.f_min_bisection,
        "value_at_zero_noise": result.value_at_zero_noise,
    }, None


def build_parser():
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv", "text"), default="json")
    state = _Parser(add_help=False)
    state.add_argument("--state", metavar="PATH", help="27 [re, im] amplitudes; GHZ if omitted")
    noise = _Parser(add_help=False)
    noise.add_argument("--noise", type=float, metavar="F", help="white-noise fraction in [0, 1]")
    search = _Parser(add_help=False)
    search.add_argument("--restarts", type=int, default=100)
    search.add_argument("--seed", type=int, default=42)

    parser = _Parser(prog="qutrit-bell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("paper-demo", parents=[fmt], help="violation and threshold at the reference settings")
    p.set_defaults(func=cmd_paper_demo)

    p = sub.add_parser("eval", parents=[fmt, state, noise], help="evaluate a settings file")
    p.add_argument("--settings", metavar="PATH", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classical-max", parents=[fmt], help="maximum over deterministic strategies")
    p.add_argument("--form", choices=("prob", "corr"), default="prob")
    p.set_defaults(func=cmd_classical_max)

    p = sub.add_parser("expand", parents=[fmt], help="coefficient ledger of the expanded inequality")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("optimize", parents=[fmt, state, noise, search], help="search phase settings")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("noise-threshold", parents=[fmt, state, noise, search],
                       help="critical noise fraction")
    p.add_argument("--settings", metavar="PATH")
    p.add_argument("--optimize", action="store_true")
    p.set_defaults(func=cmd_noise_threshold)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        doc, table = args.func(args)
    except UsageError as exc:
        print(f"qutrit-bell: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"qutrit-bell: input error: {exc}", file=stderr)
        return EXIT_INPUT
    except (ConsistencyError, ValueError) as exc:
        print(f"qutrit-bell: internal consistency failure: {exc}", file=stderr)
        return EXIT_INTERNAL
    buf = io.StringIO()
    _emit(doc, args.format, buf, table)
    stdout.write(buf.getvalue())
    return EXIT_OK


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
