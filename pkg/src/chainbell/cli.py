"""Command-line front end.

Exit codes: 0 success or consistent verdict, 1 signaling detected,
2 configuration error, 3 contradictory verdict, 4 insufficient data.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import VERDICT_CSV_HEADER, ExtensionClaim, check_extension
from .chainedbell import figure3_curve, minimize_I_over_N
from .config import ConfigError, ExperimentConfig
from .estimators import estimate_I, fit_visibility, nonsignaling_test
from .montecarlo import InsufficientDataError, run_all_pairs, run_chain, run_trials, scan_phase
from .spacetime import EPS_T

EXIT_OK = 0
EXIT_SIGNALING = 1
EXIT_CONFIG = 2
EXIT_CONTRADICTORY = 3
EXIT_INSUFFICIENT = 4


def write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if getattr(args, "config", None) else ExperimentConfig()
    overrides = {k: getattr(args, k) for k in ("seed", "trials", "out_dir", "workers") if getattr(args, k, None) is not None}
    if overrides:
        data = cfg.to_dict()
        data.update(overrides)
        cfg = ExperimentConfig.from_dict(data)
    return cfg


def cmd_timing(args, out) -> int:
    cfg = _load_config(args)
    if not cfg.has_geometry():
        raise ConfigError("geometry: the timing command needs alice_t, alice_x, bob_t, bob_x, beta_A, beta_B")
    g = cfg.geometry()
    times = g.frame_times()
    for key, value in times.items():
        print(f"{key} = {value!r}", file=out)
    tc = cfg.timing_class()
    tie = abs(times["t_a(A)"] - times["t_b(A)"]) <= EPS_T and abs(times["t_b(B)"] - times["t_a(B)"]) <= EPS_T
    print(f"timing: {tc.name}{' (simultaneity tie)' if tie else ''}", file=out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    cfg = _load_config(args)
    model = cfg.build_model()
    settings = cfg.settings()
    timing = cfg.timing_class()
    if cfg.setting_choice == "per-pair":
        counts = run_chain(model, settings, timing, cfg.trials, cfg.seed, workers=cfg.workers)
    else:
        counts = run_trials(model, settings, timing, cfg.trials, cfg.seed, workers=cfg.workers)
    out_dir = Path(cfg.out_dir)
    write_csv(out_dir / "counts.csv", ("alice_setting", "bob_setting", "n_pp", "n_pm", "n_mp", "n_mm", "n"), counts.rows())
    report = estimate_I(counts, cfg.chained())
    write_csv(out_dir / "inequality.csv", ("N", "I_hat", "std_err"), [(report.N, report.value_I, report.std_error)])
    print(f"model: {model.name}  timing: {timing.name}", file=out)
    print(f"I_hat(N={report.N}) = {report.value_I:.6f} +/- {report.std_error:.6f}", file=out)
    print(f"violation: {'yes' if report.is_violation else 'no'}", file=out)
    return EXIT_OK


def cmd_scan_phase(args, out) -> int:
    cfg = _load_config(args)
    phases = cfg.phases if cfg.phases is not None else [2 * math.pi * k / cfg.n_phases for k in range(cfg.n_phases)]
    if len(phases) < 8:
        raise ConfigError(f"phases: need >= 8 phase points, got {len(phases)}")
    rows = scan_phase(cfg.build_model(), phases, cfg.timing_class(), cfg.trials, cfg.seed, workers=cfg.workers)
    write_csv(Path(cfg.out_dir) / "phase_scan.csv", ("phi", "p_equal", "std_err", "n"), rows)
    try:
        est = fit_visibility(rows)
    except ValueError as exc:
        raise ConfigError(f"phases: {exc}") from None
    print(f"V_hat = {est.value:.6f} +/- {est.std_error:.6f}", file=out)
    return EXIT_OK


def cmd_figure3(args, out) -> int:
    out_dir = Path(args.out_dir or ".")
    minima = []
    for V in args.V:
        if not 0.0 <= V <= 1.0:
            raise ConfigError(f"V: {V} outside [0, 1]")
        Ns, values = figure3_curve(V, args.n_max)
        write_csv(out_dir / f"figure3_V{V:g}.csv", ("N", "I(N,pi)"), zip(Ns.tolist(), values.tolist()))
        m = minimize_I_over_N(V, math.pi, args.n_max)
        minima.append((V, m.N_star, m.I_min, m.monotone_flag))
    write_csv(out_dir / "figure3_minima.csv", ("V", "N_star", "I_min", "monotone"), minima)
    print(f"{'V':>8} {'N_star':>7} {'I_min':>10}  note", file=out)
    for V, n_star, i_min, mono in minima:
        note = "monotone (no interior minimum)" if mono else ""
        print(f"{V:>8g} {n_star:>7d} {i_min:>10.4f}  {note}".rstrip(), file=out)
    return EXIT_OK


def cmd_check_extension(args, out) -> int:
    try:
        claim = ExtensionClaim(args.D, args.V, args.theta, args.n_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    verdict = check_extension(claim)
    out.write(verdict.to_text())
    if args.csv:
        write_csv(Path(args.csv), VERDICT_CSV_HEADER, [verdict.csv_row()])
    return EXIT_CONTRADICTORY if verdict.contradictory else EXIT_OK


def cmd_nonsignaling(args, out) -> int:
    cfg = _load_config(args)
    counts = run_all_pairs(cfg.build_model(), cfg.settings(), cfg.timing_class(), cfg.trials, cfg.seed, workers=cfg.workers)
    result = nonsignaling_test(counts, cfg.z_threshold)
    text = result.to_text()
    path = Path(cfg.out_dir) / "nonsignaling.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    out.write(text)
    return EXIT_OK if result.passed else EXIT_SIGNALING


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON experiment config")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--trials", type=int, default=argparse.SUPPRESS, help="trials per setting pair / phase point")
    common.add_argument("--out-dir", dest="out_dir", default=argparse.SUPPRESS)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="chainbell", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("timing", parents=[common], help="frame times and timing class of a geometry").set_defaults(func=cmd_timing)
    sub.add_parser("simulate", parents=[common], help="run a chained Bell experiment").set_defaults(func=cmd_simulate)
    sub.add_parser("scan-phase", parents=[common], help="fringe scan and visibility fit").set_defaults(func=cmd_scan_phase)
    sub.add_parser("nonsignaling", parents=[common], help="marginal independence test").set_defaults(
        func=cmd_nonsignaling
    )

    p = sub.add_parser("figure3", parents=[common], help="I(N, pi) curves and minima")
    p.add_argument("--V", type=float, nargs="+", default=[0.97, 0.99, 0.999, 1.0])
    p.add_argument("--n-max", dest="n_max", type=int, default=1000)
    p.set_defaults(func=cmd_figure3)

    p = sub.add_parser("check-extension", parents=[common], help="self-contradiction verdict for a claimed distance")
    p.add_argument("--D", type=float, required=True, help="claimed variational distance")
    p.add_argument("--V", type=float, required=True, help="visibility")
    p.add_argument("--theta", type=float, default=math.pi)
    p.add_argument("--n-max", dest="n_max", type=int, default=1000)
    p.add_argument("--csv", default=None, help="also write the verdict as a CSV row")
    p.set_defaults(func=cmd_check_extension)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
