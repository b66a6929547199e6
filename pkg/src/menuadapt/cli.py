"""Command-line entry point: ``menuadapt {trace,adapt,compare,sweep,verify,variants}``.

Exit status is 0 on success, 1 for bad input (unknown label, invalid bundle,
bad flags) and 2 when an internal cross-check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from .adaptation import (
    BenefitMode,
    expected_selection_time,
    greedy_adaptation,
    monte_carlo_estimate,
    select_adaptation,
    table_to_csv,
    utility_table,
)
from .errors import InvariantViolation, MenuAdaptError
from .oracle import CANONICAL, naive_cost, report_to_csv, variant_report
from .scenarios import SCENARIO3_T_INSPECT, SCENARIO3_T_SELECT_CORRECT, load_bundle
from .simulation import CostParams, format_trace, interaction_cost, simulate_trace, trace_cost

EXIT_OK, EXIT_INVALID, EXIT_INVARIANT = 0, 1, 2
DEFAULT_BUNDLE = "walkthrough.json"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _ms_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated milliseconds, got {text!r}") from None
    if not values or any(not math.isfinite(v) or v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"grid values must be non-negative numbers: {text!r}")
    return values


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args):
    bundle = load_bundle(args.bundle_pos or args.bundle, renormalize=args.renormalize)
    scenario = bundle.scenario(getattr(args, "scenario_pos", None) or args.scenario)
    return bundle, scenario


def _mode(args, scenario) -> BenefitMode:
    return BenefitMode(args.mode) if args.mode else scenario.mode


def cmd_trace(args) -> int:
    items = args.items
    if len(items) == 4:
        args.bundle_pos, args.scenario_pos, start, target = items
    elif len(items) == 2:
        args.bundle_pos, args.scenario_pos = None, None
        start, target = items
    else:
        raise _UsageError("trace takes START TARGET or BUNDLE SCENARIO START TARGET")
    bundle, scenario = _load(args)
    trace = simulate_trace(bundle.menu, scenario.costs, start, target)
    _emit(format_trace(bundle.menu, trace), args.out)
    return EXIT_OK


def cmd_adapt(args) -> int:
    bundle, scenario = _load(args)
    mode = _mode(args, scenario)
    table = utility_table(bundle.menu, scenario.costs, bundle.dist, mode)
    result = select_adaptation(table)
    label = bundle.menu.label(result.selected)
    header = f"selected: {label}\nutility_ms: {result.utility:.3f}\nmode: {mode.value}\n"
    if result.tie_broken:
        header += "tie_broken: yes\n"
    csv_text = table_to_csv(table, result.selected)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        sys.stdout.write(header)
    else:
        sys.stdout.write(header + "\n" + csv_text)
    return EXIT_OK


def cmd_compare(args) -> int:
    bundle, scenario = _load(args)
    mode = _mode(args, scenario)
    tree, costs, dist = bundle.menu, scenario.costs, bundle.dist
    greedy = greedy_adaptation(tree, dist)
    best = select_adaptation(utility_table(tree, costs, dist, mode)).selected
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["policy", "selected", "expected_time_ms"])
    for policy, node in (("greedy", greedy), ("utility", best)):
        w.writerow([policy, tree.label(node), f"{expected_selection_time(tree, costs, dist, node):.3f}"])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    bundle = load_bundle(args.bundle_pos or args.bundle, renormalize=args.renormalize)
    inspect = args.t_inspect or list(SCENARIO3_T_INSPECT)
    select = args.t_select or list(SCENARIO3_T_SELECT_CORRECT)
    modes = [BenefitMode(args.mode)] if args.mode else list(BenefitMode)
    points = []
    for ti in inspect:
        for ts in select:
            for tc in args.t_correct or [ts]:  # no --t-correct: tie it to t_select
                points.append(CostParams(ti, ts, tc))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t_inspect_ms", "t_select_ms", "t_correct_ms", "mode", "selected"])
    tree, dist = bundle.menu, bundle.dist
    for costs in points:
        for mode in modes:
            node = select_adaptation(utility_table(tree, costs, dist, mode)).selected
            w.writerow([f"{costs.t_inspect:.3f}", f"{costs.t_select:.3f}", f"{costs.t_correct:.3f}", mode.value, tree.label(node)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def run_checks(bundle, seed: int, samples: int) -> list[tuple[str, bool, str]]:
    """Oracle and Monte Carlo cross-checks for every scenario in ``bundle``."""
    tree, dist = bundle.menu, bundle.dist
    results = []
    pairs = [(s, t) for s in range(len(tree)) for t in tree.leaves]
    for sc in bundle.scenarios:
        worst_oracle = worst_trace = 0.0
        for s, t in pairs:
            closed = interaction_cost(tree, sc.costs, s, t)
            worst_oracle = max(worst_oracle, abs(naive_cost(tree, sc.costs, s, t, CANONICAL) - closed))
            worst_trace = max(worst_trace, abs(trace_cost(simulate_trace(tree, sc.costs, s, t)) - closed))
        results.append((f"{sc.name}: oracle == closed form on {len(pairs)} pairs", worst_oracle <= 1e-9, f"max dev {worst_oracle:.3g} ms"))
        results.append((f"{sc.name}: trace == closed form on {len(pairs)} pairs", worst_trace <= 1e-9, f"max dev {worst_trace:.3g} ms"))

        chosen = select_adaptation(utility_table(tree, sc.costs, dist, sc.mode)).selected
        est = monte_carlo_estimate(tree, sc.costs, dist, chosen, samples, seed)
        exact = expected_selection_time(tree, sc.costs, dist, chosen)
        gap = abs(est.mean - exact)
        ok = gap <= 3 * est.standard_error or gap <= 1e-9
        results.append(
            (
                f"{sc.name}: Monte Carlo at {tree.label(chosen)} within 3 SE",
                ok,
                f"mean {est.mean:.3f} vs exact {exact:.3f} (se {est.standard_error:.3f})",
            )
        )
    return results


def cmd_verify(args) -> int:
    bundle = load_bundle(args.bundle_pos or args.bundle, renormalize=args.renormalize)
    results = run_checks(bundle, args.seed, args.samples)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})" for name, ok, detail in results]
    failed = sum(1 for _, ok, _ in results if not ok)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    if failed:
        raise InvariantViolation(f"{failed} cross-check(s) failed")
    return EXIT_OK


def cmd_variants(args) -> int:
    bundle = load_bundle(args.bundle_pos or args.bundle, renormalize=args.renormalize)
    mode = BenefitMode(args.mode) if args.mode else bundle.scenarios[0].mode
    rows = variant_report(bundle.menu, {s.name: s.costs for s in bundle.scenarios}, bundle.dist, mode)
    _emit(report_to_csv(rows), args.out)
    return EXIT_OK


class _UsageError(MenuAdaptError):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bundle", default=DEFAULT_BUNDLE, help="scenario bundle JSON (default: bundled walkthrough)")
    common.add_argument("--scenario", help="scenario name (default: first in bundle)")
    common.add_argument("--mode", choices=[m.value for m in BenefitMode], help="override the scenario's benefit mode")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=100_000)
    common.add_argument("--renormalize", action="store_true", help="rescale probabilities that do not sum to 1")

    parser = _Parser(prog="menuadapt", description="Cost-aware adaptation of hierarchical menus.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trace", parents=[common], help="print the simulated action sequence")
    p.add_argument("items", nargs="+", metavar="ARG", help="[BUNDLE SCENARIO] START TARGET")
    p.set_defaults(func=cmd_trace)

    for name, func, text in (
        ("adapt", cmd_adapt, "select the adaptation and print its utility table"),
        ("compare", cmd_compare, "greedy vs utility-based policy"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("bundle_pos", nargs="?", metavar="BUNDLE")
        p.add_argument("scenario_pos", nargs="?", metavar="SCENARIO")
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", parents=[common], help="selected adaptation over a cost grid")
    p.add_argument("bundle_pos", nargs="?", metavar="BUNDLE")
    p.add_argument("--t-inspect", type=_ms_list, help="comma-separated inspection costs (ms)")
    p.add_argument("--t-select", type=_ms_list, help="comma-separated selection costs (ms)")
    p.add_argument("--t-correct", type=_ms_list, help="comma-separated correction costs; omitted = same as selection")
    p.set_defaults(func=cmd_sweep)

    for name, func, text in (
        ("verify", cmd_verify, "run oracle and Monte Carlo cross-checks"),
        ("variants", cmd_variants, "compare interpretations of the cost formulas"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("bundle_pos", nargs="?", metavar="BUNDLE")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.samples < 1:
        print("menuadapt: error: --samples must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"menuadapt: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (MenuAdaptError, ValueError, KeyError) as exc:
        print(f"menuadapt: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
