#!/usr/bin/env python3
"""Regenerate both bundled rate-vs-power sweeps (CSV and SVG)."""

import argparse
import sys
from pathlib import Path

from wiretap_rates.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="out", help="directory for the outputs")
    args = ap.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in ("fig3a", "fig3b"):
        rc = cli_main([
            "sweep", "--config", name,
            "--out", str(outdir / f"{name}.csv"),
            "--svg", str(outdir / f"{name}.svg"),
        ])
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
