"""Command line front end.

Subcommands: ``decompose``, ``reconstruct``, ``gamma``, ``circle-demo``,
``anomaly-demo``.  Flag values override config-file values, which
override defaults.  Exit codes: 0 success, 2 I/O or usage error, 3
numerical precondition failure (the message names the precondition).
Set ``NSPYR_LOG`` to a level name (debug/info/warning) for logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import geometry, svgplot
from .decimation import filter_metadata, solve_gamma, write_filter_csv
from .errors import BadParamsError, NspyrError
from .geometry import (
    PlanarCurve,
    WAVY_PRESETS,
    circularity_report,
    curve_pyramid,
    perturb_quadrant,
    perturb_wavy,
    read_curve_csv,
    sample_circle,
    write_curve_csv,
)
from .pyramid import Pyramid, analyze, detail_decay_report, synthesize
from .sequences import FinSeq, PeriodicSeq, read_sequence_csv, write_sequence_csv
from .subdivision import Conic, NS4Point, NSCubic, Stationary

log = logging.getLogger("nspyr")

_DEFAULTS = {
    "family": "conic",
    "theta": None,
    "levels": 4,
    "epsilon": 1e-15,
    "boundary": "periodic",
    "plot": False,
    "n": 256,
    "radius": 1.0,
    "amplitude": 0.01,
    "frequency": 12,
    "threshold_ratio": 50.0,
}


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Apply precedence flags > config file > defaults."""
    file_conf = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            file_conf = json.load(fh)
    for key, default in _DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, file_conf.get(key, default))
    return args


def _validate(args) -> None:
    if not 0.0 < args.epsilon < 1.0:
        raise BadParamsError(f"epsilon must lie in (0, 1), got {args.epsilon}")
    if args.levels < 1:
        raise BadParamsError(f"levels must be >= 1, got {args.levels}")


def _build_family(kind: str, theta, data_n=None, levels=None):
    """Family from its CLI name, inferring the tension when omitted.

    For conic analysis of periodic data the default tension matches the
    coarse sample count, which is what keeps sampled circles exact.
    """
    if kind.startswith("stationary:"):
        seq = read_sequence_csv(kind.split(":", 1)[1])
        if not isinstance(seq, FinSeq):
            raise BadParamsError("stationary mask file must hold a "
                                 "finite sequence")
        return Stationary(seq)
    if kind == "ns4pt":
        return NS4Point(0.0 if theta is None else theta)
    if kind == "nscubic":
        return NSCubic(1.0 if theta is None else math.cos(theta))
    if kind == "conic":
        if theta is None:
            if data_n is None:
                theta = 2.0 * math.pi / 16.0
            else:
                n0 = data_n // (2 ** levels)
                if n0 < 1:
                    raise BadParamsError(
                        f"{data_n} samples cannot support {levels} levels")
                theta = 2.0 * math.pi / n0
        return Conic(math.cos(theta))
    raise BadParamsError(f"unknown family {kind!r}")


def _read_input(path):
    """Sniff the CSV kind: curve, periodic sequence, or finite sequence."""
    with open(path, "r", encoding="utf-8") as fh:
        head = fh.readline().strip()
    if head.startswith("#") and "closed=" in head:
        return read_curve_csv(path)
    return read_sequence_csv(path)


def _norms_csv(path, report) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("level,linf,l1,avg_l2\n")
        for i in range(report.levels):
            fh.write(f"{i + 1},{report.per_level_inf[i]!r},"
                     f"{report.per_level_l1[i]!r},"
                     f"{report.per_level_avg_l2[i]!r}\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_decompose(args) -> int:
    data = _read_input(args.infile)
    if isinstance(data, PlanarCurve):
        if not data.closed:
            raise BadParamsError(
                "open curve: periodic analysis needs closed=true")
        boundary = "periodic"
        family = _build_family(args.family, args.theta, data.n, args.levels)
        payload = data.points
    elif isinstance(data, PeriodicSeq):
        boundary = "periodic"
        family = _build_family(args.family, args.theta, data.period,
                               args.levels)
        payload = data
    else:
        boundary = "finite"
        family = _build_family(args.family, args.theta)
        payload = data
    if args.boundary != boundary:
        log.info("boundary %s inferred from input, overriding flag",
                 boundary)
    pyr = analyze(payload, family, args.levels, args.epsilon, boundary)
    out = Path(args.outfile)
    out.write_text(pyr.to_json(), encoding="utf-8")
    report = detail_decay_report(pyr)
    _norms_csv(out.with_name(out.stem + "_norms.csv"), report)
    if args.plot:
        svg = svgplot.bar_chart_svg(report.per_level_avg_l2,
                                    title="per-level average detail norm")
        out.with_name(out.stem + "_details.svg").write_text(
            svg, encoding="utf-8")
    log.info("wrote %s (%d levels)", out, pyr.levels)
    return 0


def cmd_reconstruct(args) -> int:
    pyr = Pyramid.from_json(Path(args.infile).read_text(encoding="utf-8"))
    comps = synthesize(pyr)
    if pyr.n_components == 2 and pyr.boundary == "periodic":
        arr = np.stack([c.values for c in comps], axis=1)
        write_curve_csv(args.outfile, PlanarCurve(arr, closed=True))
    elif pyr.n_components == 1:
        write_sequence_csv(args.outfile, comps[0])
    else:
        raise BadParamsError(
            f"cannot serialize {pyr.n_components}-component "
            f"{pyr.boundary} data as CSV")
    return 0


def cmd_gamma(args) -> int:
    family = _build_family(args.family, args.theta)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for level in range(1, args.levels + 1):
        mask = family.mask_at_level(level - 1)
        filt = solve_gamma(mask, args.epsilon)
        write_filter_csv(outdir / f"zeta_level_{level}.csv", filt)
        meta = filter_metadata(filt)
        meta["level"] = level
        (outdir / f"zeta_level_{level}.json").write_text(
            json.dumps(meta, indent=1), encoding="utf-8")
        log.info("level %d: %d nonzero coefficients, residual %.3e",
                 level, filt.nonzero_count, filt.residual_l1)
    return 0


def _wavy_case(task):
    name, amplitude, frequency, n, levels, epsilon, radius = task
    curve = perturb_wavy(sample_circle(n, radius), amplitude, frequency)
    report = circularity_report(curve, levels, epsilon)
    return name, amplitude, frequency, curve, report


def cmd_circle_demo(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    n, levels, eps, radius = args.n, args.levels, args.epsilon, args.radius

    clean = sample_circle(n, radius)
    clean_pyr = curve_pyramid(clean, levels, eps)
    clean_report = circularity_report(clean, levels, eps)

    tasks = [(name, amp, freq, n, levels, eps, radius)
             for name, amp, freq in WAVY_PRESETS]
    with ThreadPoolExecutor(max_workers=min(4, len(tasks))) as pool:
        wavy = list(pool.map(_wavy_case, tasks))

    report = {
        "n": n,
        "levels": levels,
        "epsilon": eps,
        "radius": radius,
        "clean": {
            "per_level_l1": clean_report.per_level_l1,
            "per_level_avg_l2": clean_report.per_level_avg_l2,
            "verdict_scale": clean_report.verdict_scale,
        },
        "wavy": [
            {
                "name": name,
                "amplitude": amp,
                "frequency": freq,
                "per_level_l1": rep.per_level_l1,
                "per_level_avg_l2": rep.per_level_avg_l2,
                "verdict_scale": rep.verdict_scale,
            }
            for name, amp, freq, _, rep in wavy
        ],
    }
    (outdir / "circle_report.json").write_text(
        json.dumps(report, indent=1), encoding="utf-8")

    (outdir / "clean_curve.svg").write_text(
        svgplot.curve_overlay_svg(clean.points,
                                  clean_pyr.coarse_array(),
                                  title=f"circle, {n} samples, "
                                        f"{clean_pyr.coarse_array().shape[0]}"
                                        " coarse points"),
        encoding="utf-8")
    (outdir / "clean_details.svg").write_text(
        svgplot.bar_chart_svg(clean_report.per_level_avg_l2,
                              title="clean circle: avg detail norm"),
        encoding="utf-8")
    for name, amp, freq, curve, rep in wavy:
        pyr = curve_pyramid(curve, levels, eps)
        (outdir / f"{name}_curve.svg").write_text(
            svgplot.curve_overlay_svg(curve.points, pyr.coarse_array(),
                                      title=f"{name} (a={amp}, f={freq})"),
            encoding="utf-8")
        (outdir / f"{name}_details.svg").write_text(
            svgplot.bar_chart_svg(rep.per_level_avg_l2,
                                  title=f"{name}: avg detail norm"),
            encoding="utf-8")

    l1_series = {"clean": clean_report.per_level_l1}
    avg_series = {"clean": clean_report.per_level_avg_l2}
    for name, _, _, _, rep in wavy:
        l1_series[name] = rep.per_level_l1
        avg_series[name] = rep.per_level_avg_l2
    (outdir / "log_l1.svg").write_text(
        svgplot.log_lines_svg(l1_series, title="detail decay (l1 norms)"),
        encoding="utf-8")
    (outdir / "log_avg_l2.svg").write_text(
        svgplot.log_lines_svg(avg_series,
                              title="detail decay (avg coefficient norms)"),
        encoding="utf-8")
    log.info("circle demo written to %s", outdir)
    return 0


def cmd_anomaly_demo(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    n, levels, eps = args.n, args.levels, args.epsilon
    curve = perturb_quadrant(sample_circle(n, args.radius),
                             args.amplitude, args.frequency)
    pyr = curve_pyramid(curve, levels, eps)
    norms = pyr.detail_norms(levels)
    ranges = geometry.anomaly_localize(
        curve, levels, eps, threshold_ratio=args.threshold_ratio)
    window = geometry.quadrant_window(n) > 0.0

    report = {
        "n": n,
        "levels": levels,
        "epsilon": eps,
        "amplitude": args.amplitude,
        "frequency": args.frequency,
        "threshold_ratio": args.threshold_ratio,
        "ranges": [list(r) for r in ranges],
        "range_angles": [[2.0 * math.pi * s / n, 2.0 * math.pi * e / n]
                         for s, e in ranges],
        "perturbed_window_indices": [int(i)
                                     for i in np.nonzero(window)[0]],
    }
    (outdir / "anomaly_report.json").write_text(
        json.dumps(report, indent=1), encoding="utf-8")
    (outdir / "anomaly_curve.svg").write_text(
        svgplot.curve_overlay_svg(curve.points, pyr.coarse_array(),
                                  title="quadrant-perturbed circle"),
        encoding="utf-8")
    (outdir / "anomaly_details.svg").write_text(
        svgplot.index_profile_svg(norms.tolist()),
        encoding="utf-8")
    log.info("anomaly demo written to %s (%d range(s))", outdir, len(ranges))
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default=None,
                   help="ns4pt | nscubic | conic | stationary:<maskfile>")
    p.add_argument("--theta", type=float, default=None,
                   help="tension angle; conic/nscubic use cos(theta)")
    p.add_argument("--levels", "-J", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--boundary", choices=("finite", "periodic"), default=None)
    p.add_argument("--config", default=None, help="JSON config file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nspyr",
        description="Nonstationary subdivision pyramids and "
                    "circle-geometry analysis")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="analyze a CSV into a pyramid")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.add_argument("--plot", action="store_true", default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="synthesize a pyramid JSON")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("gamma", help="export decimation filters")
    _add_common(p)
    p.add_argument("--out", dest="outdir", required=True)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("circle-demo", help="circle and wavy-circle reports")
    _add_common(p)
    p.add_argument("--out", dest="outdir", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--radius", type=float, default=None)
    p.set_defaults(func=cmd_circle_demo)

    p = sub.add_parser("anomaly-demo", help="quadrant-anomaly localization")
    _add_common(p)
    p.add_argument("--out", dest="outdir", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--amplitude", type=float, default=None)
    p.add_argument("--frequency", type=int, default=None)
    p.add_argument("--threshold-ratio", dest="threshold_ratio",
                   type=float, default=None)
    p.set_defaults(func=cmd_anomaly_demo)
    return ap


def main(argv=None) -> int:
    level = os.environ.get("NSPYR_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    args = build_parser().parse_args(argv)
    try:
        args = _merge_config(args)
        _validate(args)
        return args.func(args)
    except NspyrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
