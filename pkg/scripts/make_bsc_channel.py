#!/usr/bin/env python3
"""Regenerate the bundled degraded binary-symmetric channel file.

Main link BSC(0.1); each eavesdropper listens through an independent
BSC(0.3).  The collusion links are single-valued, so the eavesdroppers
learn nothing from each other and the file exercises the degraded case
whose sup-inf rate has a known closed form.
"""

import argparse
import sys

import numpy as np

from wiretap_rates.discrete import DMChannel, build_orthogonal_dm


def bsc(p: float) -> np.ndarray:
    return np.array([[1.0 - p, p], [p, 1.0 - p]])


def build(p_main: float, p_eve: float) -> DMChannel:
    # main[y_l, y_1m, y_2m, x_l]: product of the three listening links
    main = np.einsum("al,bl,cl->abcl", bsc(p_main), bsc(p_eve), bsc(p_eve))
    collusion = np.ones((1, 1, 1, 1))
    return build_orthogonal_dm(main, collusion)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-main", type=float, default=0.1)
    ap.add_argument("--p-eve", type=float, default=0.3)
    ap.add_argument("--out", default="src/wiretap_rates/configs/bsc_degraded.dmc")
    args = ap.parse_args()
    ch = build(args.p_main, args.p_eve)
    with open(args.out, "w") as fh:
        fh.write(ch.to_text())
    print(f"wrote {args.out}  sizes={ch.transition.shape}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
