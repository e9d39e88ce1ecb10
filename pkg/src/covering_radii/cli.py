"""Command-line interface: ``covering-radii <command> ...``.

Commands
    elliptic   K, K', phi or phi^{-1} at full double precision
    bounds     the bracket [m(x, Q), M(x, k)] and the Mori-type bound
    radius     univalent-disk radius d_f(z0) of a map
    verify     theorem checks as a JSON report (exit 0 pass, 1 fail, 2 bad config)
    plot       SVG image of a polar grid with covering-disk overlays

Exit codes: 0 success, 1 failed check or estimator failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds, elliptic, radii, verify
from .errors import DegeneracyError, DomainError, QuadratureError, RayLiftError, UnsupportedVariantError
from .mappings import (
    AnalyticPart,
    HAlpha,
    HarmonicKoebe,
    PommerenkeKn,
    ScaledCombo,
    evaluate,
    identity,
    map_from_dict,
    map_to_dict,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

FIG_K = 0.25
FIG_ALPHA = 2.0
FIG_N = 2

PRESET_MAPS = {
    "identity": identity,
    "harmonic-koebe": HarmonicKoebe,
    "k2": lambda: PommerenkeKn(FIG_N),
    "h2": lambda: AnalyticPart(ScaledCombo(PommerenkeKn(FIG_N), FIG_K, -1)),
    "f2": lambda: ScaledCombo(PommerenkeKn(FIG_N), FIG_K, -1),
    "h-alpha": lambda: AnalyticPart(ScaledCombo(HAlpha(FIG_ALPHA), FIG_K, 1)),
    "p": lambda: ScaledCombo(HAlpha(FIG_ALPHA), FIG_K, 1),
}

# figure presets: map preset and the window half-width in image units
FIGURES = {
    "fig1a": ("h2", 0.8),
    "fig1b": ("f2", 0.8),
    "fig4a": ("h-alpha", 0.5),
    "fig4b": ("p", 0.5),
}

CURVE_POINTS = 512


class ConfigError(Exception):
    """Bad command-line input; reported with exit code 2."""


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True)


def parse_q(text):
    """'inf', decimals and fractions such as '5/3'."""
    text = text.strip()
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(Fraction(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse number {text!r}") from None


def parse_list(text):
    return [parse_q(part) for part in text.split(",") if part.strip()]


def parse_complex(text):
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if len(parts) == 1:
        parts.append("0")
    if len(parts) != 2:
        raise ConfigError(f"expected 're,im', got {text!r}")
    return complex(parse_q(parts[0]), parse_q(parts[1]))


def load_map(source):
    """A map from a JSON descriptor file or a preset name."""
    path = Path(source)
    if path.is_file():
        try:
            return map_from_dict(json.loads(path.read_text()))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: invalid JSON ({exc})") from None
    if source in PRESET_MAPS:
        return PRESET_MAPS[source]()
    raise ConfigError(f"{source!r} is neither a map file nor a preset ({', '.join(sorted(PRESET_MAPS))})")


# -- elliptic ----------------------------------------------------------------------


def cmd_elliptic(args, out):
    which, value = next((name, getattr(args, name)) for name in ("k", "kprime", "phi", "phi_inv")
                        if getattr(args, name) is not None)
    funcs = {"k": elliptic.ellip_k, "kprime": elliptic.ellip_k_comp, "phi": elliptic.phi,
             "phi_inv": elliptic.phi_inv}
    result = funcs[which](value)
    if args.json:
        payload = {"function": which.replace("_", "-"), "argument": value, "value": float(result)}
        if which == "phi_inv":
            payload["complement"] = result.tc
        out.write(_dump(payload) + "\n")
    else:
        out.write(repr(float(result)) + "\n")
    return EXIT_OK


# -- bounds ------------------------------------------------------------------------

BOUND_FIELDS = ("x", "Q", "k", "m", "M", "one_minus_k", "one_plus_k", "mori", "m_error", "m_evals")


def bound_row(x, Q):
    k = bounds.k_from_q(Q)
    m, info = bounds.lower_bound_m(x, Q, full_output=True)
    mori = None if math.isinf(Q) else bounds.mori_upper_bound_on_ratio(x, Q)
    return {
        "x": x,
        "Q": Q,
        "k": k,
        "m": m,
        "M": bounds.upper_bound_M(x, k),
        "one_minus_k": 1.0 - k,
        "one_plus_k": 1.0 + k,
        "mori": mori,
        "m_error": info.get("error", 0.0),
        "m_evals": info.get("n_evals", 0),
    }


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.12g}"
    return str(v)


def cmd_bounds(args, out):
    xs = [i / (args.grid - 1) for i in range(args.grid)] if args.grid else parse_list(args.x)
    qs = parse_list(args.q)
    if not xs or not qs:
        raise ConfigError("need at least one x and one Q")
    rows = [bound_row(x, Q) for Q in qs for x in xs]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BOUND_FIELDS)
        for row in rows:
            w.writerow([_csv_cell(row[f]) for f in BOUND_FIELDS])
        out.write(buf.getvalue())
    else:
        meta = {
            "quad_tol": bounds.quad_tolerance(),
            "endpoint_delta": bounds.ENDPOINT_DELTA,
            "scheme": "adaptive Gauss-Legendre",
            "mori_breakpoint": "16**-Q",
        }
        rows = [{k: _json_number(v) for k, v in r.items()} for r in rows]
        out.write(_dump({"rows": rows, "metadata": meta}) + "\n")
    return EXIT_OK


def _json_number(v):
    # JSON has no infinity; Q = inf is the only infinite field
    return "inf" if isinstance(v, float) and math.isinf(v) else v


# -- radius ------------------------------------------------------------------------


def cmd_radius(args, out):
    f = load_map(args.map)
    z0 = parse_complex(args.z0)
    if args.analytic:
        est = radii.analytic_radius(f, z0)
    else:
        settings = radii.LiftSettings(n_directions=args.directions, refine=args.refine)
        est = radii.univalent_disk_radius(f, z0, settings=settings)
        if args.path_csv and est.argmin_direction is not None:
            # stop just past the estimate: rays fixed by a ceiling may run far on
            lift = radii.ray_lift(f, z0, est.argmin_direction, cap=1.01 * est.value + est.error)
            _write_path_csv(args.path_csv, lift)
    payload = est.to_dict()
    payload["map"] = map_to_dict(f)
    payload["z0"] = [z0.real, z0.imag]
    out.write(_dump(payload) + "\n")
    return EXIT_FAIL if est.lower_bound_only else EXIT_OK


def _write_path_csv(path, lift):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("index", "re", "im"))
        for i, z in enumerate(lift.path_samples):
            w.writerow((i, f"{z.real:.12g}", f"{z.imag:.12g}"))


# -- verify ------------------------------------------------------------------------


def cmd_verify(args, out):
    params = {}
    if args.params:
        try:
            text = Path(args.params).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.params}: {exc}") from None
        try:
            params = json.loads(text)
        except json.JSONDecodeError:
            raise ConfigError(f"{args.params}: not a JSON object (empty or malformed)") from None
    reports = verify.run_suite(args.suite, params)
    out.write(_dump([r.to_dict() for r in reports]) + "\n")
    return EXIT_FAIL if any(r.status == verify.FAIL for r in reports) else EXIT_OK


# -- plot --------------------------------------------------------------------------


def _fmt(v):
    return f"{v:.7g}"


def _subpaths(w, window, center):
    """Split a sampled curve into runs of finite points inside the window."""
    good = np.isfinite(w) & (np.abs(w.real - center.real) <= window) & (np.abs(w.imag - center.imag) <= window)
    runs, cur = [], []
    for ok, p in zip(good, w):
        if ok:
            cur.append(p)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return [r for r in runs if len(r) >= 2]


def _path_d(runs):
    parts = []
    for run in runs:
        pts = [f"{_fmt(p.real)},{_fmt(p.imag)}" for p in run]
        parts.append(f"M {pts[0]} L {' '.join(pts[1:])}")
    return " ".join(parts)


def grid_curves(f, n_radii, n_rays, r_max, n_points=CURVE_POINTS):
    """Images of the circles |z| = r_j and the radii arg z = theta_j."""
    th = 2.0 * math.pi * np.arange(n_points + 1) / n_points
    curves = []
    for j in range(1, n_radii + 1):
        r = r_max * j / n_radii
        curves.append(evaluate(f, r * np.exp(1j * th)))
    rad = np.linspace(0.0, r_max, n_points)
    for j in range(n_rays):
        t = 2.0 * math.pi * j / n_rays
        curves.append(evaluate(f, rad * np.exp(1j * t)))
    return curves


def render_svg(f, n_radii, n_rays, r_max, overlays, size, window, center=0j):
    """SVG 1.1 text of the polar-grid image with overlay circles (y axis pointing up)."""
    if not 0.0 < r_max < 1.0:
        raise ConfigError("r_max must lie in (0, 1)")
    if n_radii < 2 or n_rays < 2:
        raise ConfigError("n_radii and n_rays must be at least 2")
    if any(r <= 0 for _, r in overlays):
        raise ConfigError("overlay radii must be positive")
    curves = grid_curves(f, n_radii, n_rays, r_max)
    stroke = _fmt(window / 400.0)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="{_fmt(center.real - window)} {_fmt(-center.imag - window)} {_fmt(2 * window)} {_fmt(2 * window)}">',
        f'<g transform="scale(1,-1)" fill="none" stroke="black" stroke-width="{stroke}">',
    ]
    for w in curves:
        runs = _subpaths(np.asarray(w, dtype=complex), window, center)
        if runs:
            lines.append(f'<path d="{_path_d(runs)}"/>')
    lines.append("</g>")
    lines.append(f'<g transform="scale(1,-1)" fill="none" stroke="red" stroke-width="{stroke}">')
    for c, r in overlays:
        lines.append(f'<circle cx="{c.real!r}" cy="{c.imag!r}" r="{float(r)!r}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _parse_overlay(text):
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 3:
        raise ConfigError(f"overlay must be 'cx,cy,r', got {text!r}")
    cx, cy, r = (parse_q(p) for p in parts)
    return complex(cx, cy), r


def cmd_plot(args, out):
    overlays = [_parse_overlay(o) for o in args.overlay]
    window = args.window
    if args.preset:
        name, default_window = FIGURES[args.preset]
        f = PRESET_MAPS[name]()
        overlays.insert(0, (0j, radii.analytic_radius(f).value))
        window = window or default_window
    elif args.map:
        f = load_map(args.map)
    else:
        raise ConfigError("plot needs --preset or --map")
    if window is None:
        window = 1.2 * max([abs(c) + r for c, r in overlays] + [1.0])
    svg = render_svg(f, args.n_radii, args.n_rays, args.r_max, overlays, args.size, window)
    if args.output == "-":
        out.write(svg)
    else:
        Path(args.output).write_text(svg)
    return EXIT_OK


# -- entry point -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="covering-radii", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("elliptic", help="complete elliptic integrals and the modulus function")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=float, help="K(t) for modulus t in [0, 1)")
    g.add_argument("--kprime", type=float, help="K'(t) = K(sqrt(1 - t^2)) for t in (0, 1]")
    g.add_argument("--phi", type=float, help="phi(t) = (pi/2) K'(t)/K(t) for t in (0, 1)")
    g.add_argument("--phi-inv", type=float, help="the modulus t with phi(t) = s, s > 0")
    p.add_argument("--json", action="store_true", help="print a JSON object")
    p.set_defaults(func=cmd_elliptic)

    p = sub.add_parser(
        "bounds",
        help="bracket [m, M] of d_f/d_h",
        description="Print m(x, Q), M(x, k), 1-k, 1+k and the Mori-type bound. "
        "The Mori-type bound splits its integral at t = 16**-Q; the breakpoint is "
        "sometimes printed as 1/16**-Q, which is inconsistent with |F| <= 16 t**(1/Q) <= 1. "
        "HR_QUAD_TOL overrides the quadrature tolerance (default 1e-10).",
    )
    p.add_argument("--x", default="0", help="comma-separated x values in [0, 1]")
    p.add_argument("--q", default="1", help="comma-separated Q values >= 1; 'inf' and fractions like 5/3 allowed")
    p.add_argument("--grid", type=int, help="use GRID evenly spaced x values in [0, 1] instead of --x")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("radius", help="univalent-disk radius d_f(z0)")
    p.add_argument("--map", required=True, help=f"JSON descriptor file or preset ({', '.join(sorted(PRESET_MAPS))})")
    p.add_argument("--z0", default="0,0", help="'re,im'")
    p.add_argument("--directions", type=int, default=radii.DEFAULT_DIRECTIONS)
    p.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True,
                   help="refine around the shortest ray")
    p.add_argument("--analytic", action="store_true", help="closed-form radius of a recognized extremal map")
    p.add_argument("--path-csv", help="write the lifted shortest ray to this CSV file")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("verify", help="run theorem checks")
    p.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    p.add_argument("--params", help="JSON object overriding k, alpha, n, b, n_directions")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="SVG of the image of a polar grid")
    p.add_argument("--preset", choices=sorted(FIGURES))
    p.add_argument("--map", help="JSON descriptor file or preset map name")
    p.add_argument("--n-radii", type=int, default=10)
    p.add_argument("--n-rays", type=int, default=24)
    p.add_argument("--r-max", type=float, default=0.95)
    p.add_argument("--overlay", action="append", default=[], help="'cx,cy,r' circle; repeatable")
    p.add_argument("--window", type=float, help="half-width of the square view in image units")
    p.add_argument("--size", type=int, default=600, help="width and height in pixels")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (ConfigError, DomainError, UnsupportedVariantError, DegeneracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RayLiftError, QuadratureError) as exc:
        status = getattr(exc, "status", "quadrature")
        print(f"error ({status}): {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
