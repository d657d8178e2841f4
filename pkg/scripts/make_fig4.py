#!/usr/bin/env python3
"""Generate the heralding-rate table (fig4a.csv), the dephasing lower
bound (fig4b.csv), and a Monte-Carlo-vs-closed-form comparison."""

import argparse
import math
from pathlib import Path

from phonon_qram.analytics import (
    dephasing_sweep_rows,
    heralding_sweep_rows,
    success_prob_hybrid,
    write_dephasing_csv,
    write_heralding_csv,
)
from phonon_qram.noise import NoiseModel, estimate_success_prob
from phonon_qram.qram import QramConfig
from phonon_qram.qram_types import Encoding


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--t", type=float, default=350.0, help="routing step, ns")
    ap.add_argument("--nmax", type=int, default=10)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ns = range(1, args.nmax + 1)

    rows = []
    for T1m in (0.5, 2.0, 10.0, math.inf):
        rows.extend(heralding_sweep_rows(ns, args.t, 100.0, T1m))
    write_heralding_csv(rows, out / "fig4a.csv",
                        meta=f"T1_q=100us, t={args.t}ns, hybrid dual-rail")
    print(f"wrote {out / 'fig4a.csv'} ({len(rows)} rows)")

    drows = dephasing_sweep_rows(ns, args.t, [100.0, 300.0, 1000.0])
    write_dephasing_csv(drows, out / "fig4b.csv",
                        meta=f"t={args.t}ns, T2_m=inf")
    print(f"wrote {out / 'fig4b.csv'} ({len(drows)} rows)")

    print("\nMonte Carlo vs closed form (hybrid):")
    for i, (n, T1q, T1m) in enumerate([(2, 100.0, 100.0), (4, 100.0, 2.0),
                                       (7, 100.0, 2.0)]):
        cfg = QramConfig(n=n, t=args.t, encoding=Encoding.HYBRID_DUAL_RAIL)
        p, _, _ = success_prob_hybrid(n, args.t, T1q, T1m)
        p_hat, se = estimate_success_prob(
            cfg, NoiseModel(T1_q=T1q, T1_m=T1m), args.trials, (args.seed, i)
        )
        dev = abs(p_hat - p) / se if se else 0.0
        print(f"  n={n} T1q={T1q} T1m={T1m}: "
              f"closed={p:.5f} mc={p_hat:.5f}±{se:.5f} ({dev:.2f} sigma)")


if __name__ == "__main__":
    main()
