#!/usr/bin/env python3
"""Run the closed-form vs covariance audit and print the summary.

Exit status 0 when every required term agrees within tolerance, 2 otherwise.
"""

import argparse
import sys

from wiretap_rates.audit import (
    DEFAULT_DRAWS,
    DEFAULT_SEED,
    format_report,
    run_audit,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--draws", type=int, default=DEFAULT_DRAWS)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()
    report = run_audit(args.seed, args.draws)
    print(format_report(report, verbose=args.verbose))
    return 0 if report.passed else 2


if __name__ == "__main__":
    sys.exit(main())
