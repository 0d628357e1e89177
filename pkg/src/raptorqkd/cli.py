"""Command-line harness for designs, efficiency sweeps and key-rate curves.

Every output file starts with '#'-prefixed metadata lines carrying the
seed and a hash of the resolved configuration, and contains nothing
time- or host-dependent, so reruns with the same flags are byte
identical.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .channel import db_to_linear
from .codec.decoder import RaptorCode
from .codec.precode import PrecodeError, PrecodeSpec
from .degree import DegreeDistribution, DistributionError
from .design import (DesignError, DesignSpecGeneral, DesignSpecLowSnr,
                     efficiency_ceiling, optimize_general, optimize_low_snr)
from .exitchart import capacity
from .experiments import measure_efficiency
from .qkd import QkdError, key_rate_vs_distance, run_reconciliation

_ERRORS = (DistributionError, DesignError, QkdError, PrecodeError, ValueError, OSError)


def _config_hash(payload: dict) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path, meta: dict, header: list, rows) -> None:
    lines = [f"# {key}={value}" for key, value in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(lines) + "\n")


def _resolved(args, skip=("func",)) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_design(args) -> int:
    if args.low_snr == args.general:
        print("error: choose exactly one of --low-snr / --general", file=sys.stderr)
        return 2
    if args.low_snr:
        spec = DesignSpecLowSnr(max_degree=args.max_degree, mu_o=args.mu_o,
                                eps=args.eps, n_grid=args.n_grid)
        result = optimize_low_snr(spec)
    else:
        if args.snr_db is None or args.alpha is None:
            print("error: --general needs --snr-db and --alpha", file=sys.stderr)
            return 2
        spec = DesignSpecGeneral(alpha=args.alpha, max_degree=args.max_degree,
                                 mu_o=args.mu_o, gamma=db_to_linear(args.snr_db),
                                 n_grid=args.n_grid, seed=args.seed)
        result = optimize_general(spec)
    if not result.feasible:
        print(f"design infeasible: {result.diagnostics}", file=sys.stderr)
        return 2

    payload = {
        "config_hash": _config_hash(_resolved(args)),
        "seed": args.seed,
        "eta": result.eta,
        "beta": result.beta,
        "design_rate": result.design_rate,
        "feasible": result.feasible,
        "distribution": result.distribution.to_json(),
        "diagnostics": result.diagnostics,
    }
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    out_json = Path(args.out_dir) / (args.out_json or "design.json")
    out_dist = Path(args.out_dir) / (args.out_dist or "design.dist")
    out_json.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    result.distribution.save(out_dist)
    print(f"eta={result.eta:.6f} beta={result.beta:.6f} -> {out_json}, {out_dist}")
    return 0


def _precode_spec(k: int, rate) -> PrecodeSpec | None:
    return None if rate is None else PrecodeSpec(k, rate=rate)


def cmd_efficiency(args) -> int:
    dist = DegreeDistribution.load(args.dist)
    rows = []
    trial_rows = []
    for snr_db in args.snr_db:
        gamma = db_to_linear(snr_db)
        code = RaptorCode(args.k, dist, seed=args.seed,
                          precode_spec=_precode_spec(args.k, args.precoder_rate))
        summary = measure_efficiency(
            code, gamma, args.trials, args.seed,
            max_blocks=args.max_blocks,
            max_iters=args.max_iters,
            skip_above=args.skip_above,
            jobs=args.jobs,
        )
        rows.append((float(snr_db), args.k, args.trials, summary.mean_n,
                     summary.realized_rate, summary.efficiency))
        trial_rows.extend((float(snr_db), r.trial, r.n, r.iterations, r.blocks,
                           int(r.success)) for r in summary.per_trial)
        print(f"snr_db={snr_db} efficiency={summary.efficiency:.4f} "
              f"wer={summary.wer:.3f} mean_n={summary.mean_n:.1f}")
    meta = {"config_hash": _config_hash(_resolved(args)), "seed": args.seed}
    _write_csv(args.out, meta,
               ["snr_db", "k", "trials", "mean_n", "realized_rate", "efficiency"],
               rows)
    if args.per_trial:
        _write_csv(args.per_trial, meta,
                   ["snr_db", "trial", "n", "iterations", "blocks", "success"],
                   trial_rows)
    print(f"wrote {args.out}")
    return 0


def cmd_keyrate(args) -> int:
    table_raw = json.loads(Path(args.i_e_table).read_text())
    if not table_raw:
        print("error: the eavesdropper-information table is empty; supply a JSON "
              'object {"<distance_km>": I_E, ...} computed externally',
              file=sys.stderr)
        return 2
    i_e_table = {float(d): float(v) for d, v in table_raw.items()}
    distances = args.distances if args.distances else sorted(i_e_table)
    records = key_rate_vs_distance(
        distances, i_e_table, args.v_a_grid,
        eta=args.eta, p_w=args.p_w,
        excess_noise=args.excess_noise,
        homodyne_eff=args.homodyne_eff,
        electronic_noise=args.electronic_noise,
        attenuation_db_per_km=args.attenuation,
    )
    meta = {"config_hash": _config_hash(_resolved(args)), "seed": args.seed}
    _write_csv(args.out, meta,
               ["distance_km", "gamma", "v_a", "eta", "i_ab", "i_e", "p_w", "key_rate"],
               [(r.distance_km, r.gamma, r.v_a, r.eta, r.i_ab, r.i_e, r.p_w, r.key_rate)
                for r in records])
    for r in records:
        print(f"distance={r.distance_km}km gamma={r.gamma:.5f} key_rate={r.key_rate:.6g}")
    print(f"wrote {args.out}")
    return 0


def cmd_decode_demo(args) -> int:
    if args.dist:
        dist = DegreeDistribution.load(args.dist)
        skip_above = args.skip_above
    else:
        spec = DesignSpecLowSnr(max_degree=100, mu_o=30.0, eps=0.01)
        design = optimize_low_snr(spec)
        dist = design.distribution
        skip_above = efficiency_ceiling(dist, spec.mu_o, spec.eps)
        print(f"designed distribution: eta={design.eta:.4f} beta={design.beta:.4f}")
    gamma = db_to_linear(args.snr_db)
    code = RaptorCode(args.k, dist, seed=args.seed,
                      precode_spec=_precode_spec(args.k, args.precoder_rate))
    transcript = run_reconciliation(code, gamma, args.seed, skip_above=skip_above)
    print(f"snr_db={args.snr_db} gamma={gamma:.6g} capacity={capacity(gamma):.6g}")
    print(f"success={transcript.success} keys_match={transcript.keys_match}")
    print(f"n_total={transcript.n_total} blocks={transcript.blocks_used} "
          f"iterations={transcript.iterations_total}")
    print(f"efficiency={transcript.efficiency:.4f} leaked={transcript.leaked_symbols}")
    return 0


def _float_list(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raptorqkd",
        description="rateless reconciliation toolkit: degree design, efficiency "
                    "measurement and key-rate curves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="optimize an output degree distribution")
    p.add_argument("--low-snr", action="store_true")
    p.add_argument("--general", action="store_true")
    p.add_argument("--D", dest="max_degree", type=int, required=True)
    p.add_argument("--mu-o", dest="mu_o", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--snr-db", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--n-grid", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--out-json", default=None)
    p.add_argument("--out-dist", default=None)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("efficiency", help="measure realized efficiency over trials")
    p.add_argument("--snr-db", type=_float_list, required=True,
                   help="comma-separated dB values, e.g. -20,-25,-30")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--dist", required=True, help="distribution file from design")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-blocks", type=int, default=40)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--skip-above", type=float, default=None,
                   help="skip decoding while target efficiency exceeds this")
    p.add_argument("--precoder-rate", type=float, default=None,
                   help="override the precoder design rate (default 0.95)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--per-trial", default=None, help="optional per-trial CSV path")
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("keyrate", help="secret key rate versus distance")
    p.add_argument("--i-e-table", required=True,
                   help='JSON file {"<distance_km>": I_E}')
    p.add_argument("--distances", type=_float_list, default=None)
    p.add_argument("--v-a-grid", type=_float_list,
                   default=[round(0.5 + 0.25 * i, 2) for i in range(63)])
    p.add_argument("--eta", type=float, default=0.95)
    p.add_argument("--p-w", dest="p_w", type=float, default=0.0)
    p.add_argument("--excess-noise", type=float, default=0.01)
    p.add_argument("--homodyne-eff", type=float, default=0.6)
    p.add_argument("--electronic-noise", type=float, default=0.01)
    p.add_argument("--attenuation", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keyrate)

    p = sub.add_parser("decode-demo", help="one reconciliation session, verbose")
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--snr-db", type=float, default=-20.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", default=None)
    p.add_argument("--skip-above", type=float, default=None)
    p.add_argument("--precoder-rate", type=float, default=None,
                   help="override the precoder design rate (default 0.95)")
    p.set_defaults(func=cmd_decode_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
