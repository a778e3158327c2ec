"""Total time steps per decoder for a grid of list sizes, with tau measured at 2.0 dB.

    python3 scripts/latency_table.py --N 1024 --K 768 --tau-frames 200
"""

import argparse

from polarlist import make_code_spec
from polarlist.latency import LATENCY_VARIANTS, LatencyConfig, total_steps
from polarlist.sim import measure_tau


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--N", type=int, default=1024)
    ap.add_argument("--K", type=int, default=768)
    ap.add_argument("--lists", type=int, nargs="+", default=[2, 4, 8, 16])
    ap.add_argument("--tau-frames", type=int, default=200)
    ap.add_argument("--tau-snr", type=float, default=2.0)
    ap.add_argument("--tmax", type=int)
    ap.add_argument("--imax", type=int)
    ap.add_argument("--baseline", default="sota-tsp22")
    args = ap.parse_args()

    spec = make_code_spec(args.N, args.K, 8)
    print("L,variant,steps,saving_vs_" + args.baseline)
    for L in args.lists:
        tau = measure_tau(spec, L, args.tau_snr, frames=args.tau_frames, t_max=args.tmax) if args.tau_frames else {}
        cfg = LatencyConfig(t_max=args.tmax, i_max=args.imax, tau=tau)
        base = total_steps(spec, args.baseline, L, cfg)
        for v in LATENCY_VARIANTS:
            rep = total_steps(spec, v, L, cfg)
            print(f"{L},{v},{rep.total},{100 * rep.reduction_vs(base):.1f}%")


if __name__ == "__main__":
    main()
