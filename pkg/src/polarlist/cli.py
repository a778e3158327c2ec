"""Command-line entry point: construct, encode, decode, simulate, mcs-gen, latency."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .construction import CodeSpec, make_code_spec
from .decoder import VARIANTS, DecoderConfig, ListDecoder
from .latency import LATENCY_VARIANTS, LatencyConfig, total_steps
from .mcs import gen_mcs_r1, gen_mcs_spc, restrict_mcs
from .nodes import build_tree
from .sim import SimConfig, awgn_llr, measure_tau, random_frames, run_fer
from .sr1spc import RSR1_RULES

DEFAULTS = {"N": 128, "K": 64, "r": 8, "design_snr_db": 2.0, "L": 4, "variant": "fsl", "mode": "hwf",
            "ebn0_db": [2.0], "max_frames": 10_000, "max_errors": 100, "min_frames": 0, "batch": 200,
            "seed": 0}


def _load_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(json.loads(Path(args.config).read_text()))
    for key in ("N", "K", "r", "L", "variant", "seed", "mode", "tmax", "imax", "upsilon", "rsr1_rule", "baseline",
                "max_frames", "max_errors", "min_frames", "batch"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if getattr(args, "ebn0", None):
        cfg["ebn0_db"] = args.ebn0
    return cfg


def _spec(cfg: dict) -> CodeSpec:
    if "code" in cfg:
        return CodeSpec.from_dict(cfg["code"])
    if "spec_file" in cfg:
        return CodeSpec.from_json(Path(cfg["spec_file"]).read_text())
    return make_code_spec(int(cfg["N"]), int(cfg["K"]), int(cfg["r"]),
                          design_snr_db=float(cfg.get("design_snr_db", 2.0)))


def _decoder_cfg(cfg: dict, variant: str | None = None) -> DecoderConfig:
    return DecoderConfig(variant=variant or cfg["variant"], L=int(cfg["L"]), mode=cfg.get("mode", "hwf"),
                         t_max=cfg.get("tmax"), i_max=cfg.get("imax"), upsilon=cfg.get("upsilon"),
                         rsr1_rule=cfg.get("rsr1_rule", "bound"))


def _bits(text: str) -> np.ndarray:
    return np.array([int(c) for c in text.strip() if c in "01"], dtype=np.uint8)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_construct(args) -> int:
    cfg = _load_config(args)
    spec = _spec(cfg)
    out = spec.to_dict()
    if args.variant or args.nodes:
        from .decoder import variant_policy
        tree = build_tree(spec, variant_policy(cfg["variant"]))
        out["census"] = tree.census()
        if args.nodes:
            out["nodes"] = tree.to_list()
    _emit(json.dumps(out), args.out)
    return 0


def cmd_encode(args) -> int:
    cfg = _load_config(args)
    spec = _spec(cfg)
    rng = np.random.default_rng(cfg["seed"])
    if args.msg:
        msg = _bits(args.msg)
        u = np.zeros(spec.N, dtype=np.uint8)
        u[spec.info_set] = spec.crc_attach(msg)
        from .kernel import polar_transform
        x = polar_transform(u)
    else:
        msg, x = random_frames(spec, 1, rng)
        msg, x = msg[0], x[0]
    out = {"msg": "".join(map(str, msg)), "codeword": "".join(map(str, x))}
    if args.ebn0 is not None:
        llr = awgn_llr(x, args.ebn0[0], spec.K / spec.N, rng)
        out["llr"] = [float(v) for v in llr]
    _emit(json.dumps(out), args.out)
    return 0


def cmd_decode(args) -> int:
    cfg = _load_config(args)
    spec = _spec(cfg)
    text = Path(args.llr).read_text() if args.llr != "-" else sys.stdin.read()
    try:
        data = json.loads(text)
        llr = np.asarray(data["llr"] if isinstance(data, dict) else data, dtype=float)
    except json.JSONDecodeError:
        llr = np.array([[float(v) for v in line.replace(",", " ").split()] for line in text.splitlines()
                        if line.strip()])
    llr = np.atleast_2d(llr)
    est = ListDecoder(spec, _decoder_cfg(cfg)).decode(llr)
    _emit("\n".join("".join(map(str, row)) for row in est), args.out)
    return 0


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    spec = _spec(cfg)
    base = _decoder_cfg(cfg, cfg["baseline"]) if cfg.get("baseline") else None
    max_err = cfg["max_errors"]
    sim = SimConfig(spec, _decoder_cfg(cfg), tuple(float(v) for v in cfg["ebn0_db"]),
                    max_frames=int(cfg["max_frames"]), max_errors=int(max_err) if max_err else None,
                    min_frames=int(cfg["min_frames"]), batch=int(cfg["batch"]), seed=int(cfg["seed"]),
                    baseline=base)
    res = run_fer(sim)
    _emit(res.to_csv(), args.out)
    if args.json:
        Path(args.json).write_text(res.to_json())
    elif args.out:
        Path(args.out).with_suffix(".json").write_text(res.to_json())
    return 0


def cmd_mcs_gen(args) -> int:
    if args.kind == "spc":
        mcs = gen_mcs_spc(args.list_size, args.gamma)
    else:
        mcs = gen_mcs_r1(args.list_size)
    if args.i_max is not None:
        mcs = restrict_mcs(mcs, args.i_max)
    _emit(json.dumps([list(f) for f in mcs]), args.out)
    return 0


def cmd_latency(args) -> int:
    cfg = _load_config(args)
    spec = _spec(cfg)
    L = int(cfg["L"])
    variants = args.variants.split(",") if args.variants else [cfg["variant"]]
    tau = {}
    if "fsl" in variants and args.tau_frames > 0:
        tau = measure_tau(spec, L, args.tau_snr, frames=args.tau_frames, seed=cfg["seed"],
                          rsr1_rule=cfg.get("rsr1_rule", "bound"))
    lcfg = LatencyConfig(t_max=cfg.get("tmax"), i_max=cfg.get("imax"), upsilon=cfg.get("upsilon"), tau=tau)
    parts = []
    for i, v in enumerate(variants):
        csv_text = total_steps(spec, v, L, lcfg).to_csv()
        parts.append(csv_text if i == 0 else csv_text.split("\n", 1)[1])
    _emit("".join(parts), args.out)
    return 0


def _common(p: argparse.ArgumentParser, code: bool = True) -> None:
    p.add_argument("--config", help="JSON file with code/decoder/simulation settings")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write output here instead of stdout")
    if code:
        p.add_argument("--N", type=int)
        p.add_argument("--K", type=int, help="information bits including CRC")
        p.add_argument("--r", type=int, help="CRC length (8 or 0)")


def _decoder_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--L", type=int, dest="L", help="list size")
    p.add_argument("--mode", choices=("hwf", "exact"))
    p.add_argument("--tmax", type=int)
    p.add_argument("--imax", type=int)
    p.add_argument("--upsilon", type=int)
    p.add_argument("--rsr1-rule", choices=RSR1_RULES, help="RSR1 FSL split rule")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polarlist", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("construct", help="frozen set (and node census) of a code")
    _common(p)
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--nodes", action="store_true", help="include the special-node list")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("encode", help="encode a message (random if omitted)")
    _common(p)
    p.add_argument("--msg", help="message bits as a 0/1 string, without CRC")
    p.add_argument("--ebn0", type=float, nargs=1, help="also emit channel LLRs at this Eb/N0")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode LLR frames (JSON list or whitespace rows)")
    _common(p)
    _decoder_args(p)
    p.add_argument("llr", help="LLR file or - for stdin")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="FER/BER over BPSK-AWGN")
    _common(p)
    _decoder_args(p)
    p.add_argument("--ebn0", type=float, nargs="+", help="Eb/N0 grid in dB")
    p.add_argument("--max-frames", type=int, dest="max_frames")
    p.add_argument("--max-errors", type=int, dest="max_errors")
    p.add_argument("--min-frames", type=int, dest="min_frames")
    p.add_argument("--batch", type=int)
    p.add_argument("--baseline", choices=VARIANTS, help="paired run against this variant")
    p.add_argument("--json", help="JSON mirror path (default: next to --out)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mcs-gen", help="print a minimum-combination set as JSON")
    p.add_argument("--kind", choices=("spc", "r1"), required=True)
    p.add_argument("--list-size", type=int, required=True)
    p.add_argument("--gamma", type=int, choices=(0, 1), default=0)
    p.add_argument("--i-max", type=int, dest="i_max")
    p.add_argument("--out")
    p.set_defaults(func=cmd_mcs_gen)

    p = sub.add_parser("latency", help="time-step counts per node as CSV")
    _common(p)
    _decoder_args(p)
    p.set_defaults(variant=None)
    p.add_argument("--variants", help=f"comma-separated subset of {','.join(LATENCY_VARIANTS)}")
    p.add_argument("--tau-frames", type=int, default=0, help="frames simulated to measure RSR1 FSL steps")
    p.add_argument("--tau-snr", type=float, default=2.0)
    p.set_defaults(func=cmd_latency)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
