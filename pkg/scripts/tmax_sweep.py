"""FER and latency of SR1 FSL under different splitting caps, paired against the uncapped decoder.

    python3 scripts/tmax_sweep.py --N 512 --K 256 --L 8 --caps 2 4 8 --ebn0 1.5 2.0 --frames 5000
"""

import argparse

from polarlist import make_code_spec
from polarlist.decoder import DecoderConfig
from polarlist.latency import LatencyConfig, total_steps
from polarlist.sim import SimConfig, run_fer


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--N", type=int, default=512)
    ap.add_argument("--K", type=int, default=256)
    ap.add_argument("--L", type=int, default=8)
    ap.add_argument("--caps", type=int, nargs="+", default=[2, 4, 8])
    ap.add_argument("--ebn0", type=float, nargs="+", default=[1.5, 2.0])
    ap.add_argument("--frames", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    spec = make_code_spec(args.N, args.K, 8)
    free = DecoderConfig(variant="fsl", L=args.L)
    sota = total_steps(spec, "sota-tsp22", args.L).total
    print("t_max,snr_db,frames,fer,uncapped_fer,disagreements,steps,sota_tsp22_steps")
    for cap in args.caps:
        steps = total_steps(spec, "fsl", args.L, LatencyConfig(t_max=cap)).total
        cfg = SimConfig(spec, DecoderConfig(variant="fsl", L=args.L, t_max=cap), tuple(args.ebn0),
                        max_frames=args.frames, max_errors=None, seed=args.seed, baseline=free)
        for p in run_fer(cfg).points:
            print(f"{cap},{p.snr_db},{p.frames},{p.fer:.5f},{p.base_fer:.5f},{p.disagreements},{steps},{sota}")


if __name__ == "__main__":
    main()
