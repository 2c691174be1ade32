#!/usr/bin/env python3
"""
Scheduled Convergence Check
Runs the full sweep over every grey cell, checks that bisector samples close
in on the L_0 bisector as |p| shrinks and writes the sweep CSV.
Designed to run in CI; exits 1 when any check fails.
"""
import argparse
import sys
import os
from datetime import datetime

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from lpvoronoi.analysis.convergence import (
    check_containment,
    check_error_budget,
    check_monotone,
    converge_sweep,
)
from lpvoronoi.config import get_settings
from lpvoronoi.errors import LpVoronoiError
from lpvoronoi.reports import write_sweep_csv


def main():
    parser = argparse.ArgumentParser(description='Run the L_p to L_0 convergence sweep')
    parser.add_argument('--u', type=float, default=2.0, help='Canonical half-width (default: 2)')
    parser.add_argument('--threshold', type=float, default=None,
                        help='Final deviation threshold (default: LPV_FINAL_THRESHOLD)')
    parser.add_argument('--output', default='convergence.csv', help='Sweep CSV path (default: convergence.csv)')
    args = parser.parse_args()

    print("=" * 60)
    print("Scheduled Convergence Check")
    print(f"Started at: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print("=" * 60)
    print()

    settings = get_settings()
    threshold = settings.final_threshold if args.threshold is None else args.threshold
    print(f"u = {args.u:g}, tol = {settings.tol:g}, final threshold = {threshold:g}")
    print()

    try:
        report = converge_sweep(args.u)
        verdicts = check_monotone(report, final_threshold=threshold)
    except LpVoronoiError as e:
        print(f"❌ {e.describe()}")
        sys.exit(1)

    write_sweep_csv(report, args.output)
    budget_violations = check_error_budget(report)
    containment_violations = check_containment(report)
    failed = [verdict for verdict in verdicts if not verdict.passed]

    for verdict in failed[:10]:
        print(f"❌ {verdict.cell.value} x={verdict.x:g} sign={verdict.sign:+d}: {verdict.reason}")
    for row, budget in budget_violations[:10]:
        print(f"❌ {row.cell.value} x={row.x:g} p={row.p:g}: deviation {row.deviation:.3g} "
              f"above budget {budget.budget:.3g}")
    for row in containment_violations[:10]:
        print(f"❌ {row.cell.value} x={row.x:g} p={row.p:g}: y_p={row.y_p:.6g} outside its interval")

    print()
    print("=" * 60)
    print("Convergence Check Complete")
    print("=" * 60)
    print(f"Sweep rows: {len(report.rows)} ({len(report.noroot_rows())} without a root)")
    print(f"✅ Series passed: {len(verdicts) - len(failed)}/{len(verdicts)}")
    print(f"❌ Series failed: {len(failed)}")
    print(f"❌ Error budget violations: {len(budget_violations)}")
    print(f"❌ Containment violations: {len(containment_violations)}")
    print(f"Report written to {args.output}")
    print("=" * 60)

    # Exit with error code if any check failed (for monitoring)
    if failed or budget_violations or containment_violations:
        sys.exit(1)
    else:
        sys.exit(0)


if __name__ == '__main__':
    main()
