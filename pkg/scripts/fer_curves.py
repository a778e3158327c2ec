"""Paired FER/BER runs of CA-SCL and the proposed decoders on identical noise.

Writes one CSV per decoder (plus its JSON mirror) into --out-dir.

    python3 scripts/fer_curves.py --N 512 --K 256 --L 4 --ebn0 1.0 1.5 2.0 --frames 10000
"""

import argparse
from pathlib import Path

from polarlist import make_code_spec
from polarlist.decoder import DecoderConfig
from polarlist.sim import SimConfig, run_fer


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--N", type=int, default=512)
    ap.add_argument("--K", type=int, default=256)
    ap.add_argument("--L", type=int, default=4)
    ap.add_argument("--ebn0", type=float, nargs="+", default=[1.0, 1.5, 2.0])
    ap.add_argument("--frames", type=int, default=10_000)
    ap.add_argument("--max-errors", type=int, default=None)
    ap.add_argument("--variants", default="fsl,fpl-f,sota-tsp22")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    spec = make_code_spec(args.N, args.K, 8)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = DecoderConfig(variant="ca-scl", L=args.L)
    print("variant,snr_db,frames,fer,ca_scl_fer,disagreements")
    for variant in args.variants.split(","):
        cfg = SimConfig(spec, DecoderConfig(variant=variant, L=args.L), tuple(args.ebn0), max_frames=args.frames,
                        max_errors=args.max_errors, seed=args.seed, baseline=base)
        res = run_fer(cfg)
        stem = out / f"fer_{args.N}_{args.K}_L{args.L}_{variant}"
        stem.with_suffix(".csv").write_text(res.to_csv())
        stem.with_suffix(".json").write_text(res.to_json())
        for p in res.points:
            print(f"{variant},{p.snr_db},{p.frames},{p.fer:.5f},{p.base_fer:.5f},{p.disagreements}")


if __name__ == "__main__":
    main()
