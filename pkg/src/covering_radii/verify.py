"""Checks of the covering theorems on concrete maps.

Every check returns a :class:`VerificationReport` whose status is 'pass',
'fail' or 'indeterminate'.  Indeterminate means the measurement itself could
not be made (estimator or quadrature failure, vanishing tangent); it is never
folded into 'fail'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds, radii
from .errors import DomainError, QuadratureError, RayLiftError, UnsupportedVariantError
from .mappings import (
    Affine,
    AnalyticPart,
    HAlpha,
    HarmonicKoebe,
    PommerenkeKn,
    ScaledCombo,
    dilatation,
    identity,
    koebe_transform,
    qc_constant,
)

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"

QC_SLACK = 1e-9
SHARPNESS_RTOL = 1e-3
EQUALITY_RTOL = 1e-3
CONVEXITY_SAMPLES = 4096
TURN_STEP_TOL = 1e-6
TURN_TOTAL_TOL = 1e-4
TANGENT_FLOOR = 1e-12

DEFAULT_PARAMS = {"k": 0.25, "alpha": 2.0, "n": 2, "b": 0.5, "n_directions": radii.DEFAULT_DIRECTIONS}


@dataclass
class VerificationReport:
    check_name: str
    predicted: float | tuple
    measured: float
    tolerance: float
    status: str
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == PASS

    def to_dict(self):
        pred = list(self.predicted) if isinstance(self.predicted, tuple) else self.predicted
        return {
            "check_name": self.check_name,
            "predicted": pred,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "status": self.status,
            "metadata": self.metadata,
        }


def _settings(settings):
    return settings if settings is not None else radii.LiftSettings()


def _settings_meta(settings):
    return {"n_directions": settings.n_directions, "refine": settings.refine}


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def check_theorem1(f, z0=0j, alpha=1.0, Q=1.0, settings=None, name=None, method="ray-lift"):
    """Is d_f(z0)/d_h(z0) inside [m(x, Q), M(x, k)] with x = |omega(z0)|/k?

    Off the origin the map is first recentred with a Koebe transform, which
    leaves the ratio unchanged.  The slack is the estimator's own error plus
    the quadrature error of m and a relative rounding floor of 1e-12.
    """
    settings = _settings(settings)
    z0 = complex(z0)
    k = bounds.k_from_q(Q)
    qc = qc_constant(f)
    if qc > k + QC_SLACK:
        raise DomainError(f"sup |omega| = {qc:.6g} exceeds k = {k:.6g} for Q = {Q}")
    omega = float(abs(complex(dilatation(f, z0))))
    if k == 1.0:
        x = omega
    elif k == 0.0:
        x = 0.0
    else:
        x = min(omega / k, 1.0)
    meta = {"z0": _pair(z0), "alpha": alpha, "Q": Q, "k": k, "x": x, "method": method, **_settings_meta(settings)}
    name = name or "theorem1"
    try:
        m, info = bounds.lower_bound_m(x, Q, full_output=True)
        M = bounds.upper_bound_M(x, k)
        F = f if z0 == 0 else koebe_transform(f, z0, 0.0, "directional-deriv")
        ratio, err, (ef, eh) = radii.ratio_df_dh(F, 0j, method=method, settings=settings)
    except (RayLiftError, QuadratureError, UnsupportedVariantError) as exc:
        meta["error"] = str(exc)
        return VerificationReport(name, (math.nan, math.nan), math.nan, math.nan, INDETERMINATE, meta)
    # a relative 1e-12 floor absorbs rounding in exact closed-form ratios
    slack = err + info.get("error", 0.0) + 1e-12 * M
    meta.update({"d_f": ef.value, "d_h": eh.value, "m_quadrature_error": info.get("error", 0.0)})
    meta["at_upper_edge"] = abs(ratio - M) <= slack
    meta["at_lower_edge"] = abs(ratio - m) <= slack
    status = PASS if m - slack <= ratio <= M + slack else FAIL
    return VerificationReport(name, (m, M), ratio, slack, status, meta)


def check_theorem2(f, z0=0j, alpha=1.0, settings=None, name=None, method="ray-lift"):
    """Is d_f(z0) >= (1 - |omega(z0)|)/(2 alpha) ((1 - |z0|)/(1 + |z0|))^alpha?"""
    settings = _settings(settings)
    z0 = complex(z0)
    omega = float(abs(complex(dilatation(f, z0))))
    predicted = bounds.theorem2_lower(omega, alpha, abs(z0))
    meta = {"z0": _pair(z0), "alpha": alpha, "omega_abs": omega, "method": method, **_settings_meta(settings)}
    name = name or "theorem2"
    try:
        est = radii.estimate_radius(f, z0, method=method, settings=settings)
    except (RayLiftError, UnsupportedVariantError) as exc:
        meta["error"] = str(exc)
        return VerificationReport(name, predicted, math.nan, math.nan, INDETERMINATE, meta)
    err = est.error
    meta["equality"] = abs(est.value - predicted) <= max(err, EQUALITY_RTOL * predicted)
    status = PASS if est.value >= predicted - err else FAIL
    return VerificationReport(name, predicted, est.value, err, status, meta)


def tangent_turning(f, z0, r, n_samples=CONVEXITY_SAMPLES):
    """Per-sample increments of arg T along theta -> f(z0 + r e^{i theta}), and min |T|.

    T(theta) = i r e^{i theta} h'(z) + conj(i r e^{i theta} g'(z)).  The
    increments include the closing step from the last sample back to the first.
    """
    th = 2.0 * math.pi * np.arange(n_samples) / n_samples
    e = 1j * r * np.exp(1j * th)
    z = complex(z0) + r * np.exp(1j * th)
    if not np.all(f.in_domain(z)):
        raise DomainError(f"the circle |z - {complex(z0)}| = {r} leaves the domain")
    hp, gp = f.derivs(z)
    T = e * hp + np.conj(e * gp)
    steps = np.angle(np.roll(T, -1) / T)
    return steps, float(np.min(np.abs(T)))


def check_theorem3_convexity(f, z0=0j, alpha=1.0, Q=1.0, n_samples=CONVEXITY_SAMPLES, radius=None, name=None):
    """Is f convex on the disk D(z0, R(z0))?

    Convexity of the smooth closed curve f(z0 + r e^{i theta}) is tested by
    the tangent argument: every step must be >= -1e-6 and the total turning
    must equal 2 pi within 1e-4.  ``radius`` overrides R(z0).
    """
    z0 = complex(z0)
    r = bounds.convexity_radius_at(abs(z0), alpha, Q) if radius is None else float(radius)
    meta = {"z0": _pair(z0), "alpha": alpha, "Q": Q, "radius": r, "n_samples": n_samples,
            "radius_source": "R(z0)" if radius is None else "override"}
    name = name or "theorem3"
    steps, tmin = tangent_turning(f, z0, r, n_samples)
    total = float(np.sum(steps))
    meta["min_step"] = float(np.min(steps))
    meta["min_tangent"] = tmin
    if tmin < TANGENT_FLOOR:
        return VerificationReport(name, 2.0 * math.pi, total, TURN_TOTAL_TOL, INDETERMINATE, meta)
    ok = meta["min_step"] >= -TURN_STEP_TOL and abs(total - 2.0 * math.pi) < TURN_TOTAL_TOL
    return VerificationReport(name, 2.0 * math.pi, total, TURN_TOTAL_TOL, PASS if ok else FAIL, meta)


def is_convex_at(f, z0, r, n_samples=CONVEXITY_SAMPLES):
    steps, tmin = tangent_turning(f, z0, r, n_samples)
    return (tmin >= TANGENT_FLOOR and float(np.min(steps)) >= -TURN_STEP_TOL
            and abs(float(np.sum(steps)) - 2.0 * math.pi) < TURN_TOTAL_TOL)


def first_nonconvex_radius(f, z0, r_convex, r_nonconvex, tol=1e-6, n_samples=CONVEXITY_SAMPLES):
    """Bisect for the radius where the tangent test first fails.

    This is an empirical threshold for the given map, not a theorem.
    """
    lo, hi = float(r_convex), float(r_nonconvex)
    if not is_convex_at(f, z0, lo, n_samples) or is_convex_at(f, z0, hi, n_samples):
        raise DomainError("the bracket must be convex at its lower and non-convex at its upper end")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_convex_at(f, z0, mid, n_samples):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sharpness_cases(k=0.25, alpha=2.0, n=2, b=0.5):
    """(name, map, closed-form radius) for the seven extremal constants."""
    if not 0.0 <= k < 1.0 or not alpha >= 1.0 or int(n) != n or n < 1 or not 0.0 <= b < 1.0:
        raise DomainError("need k in [0, 1), alpha >= 1, integer n >= 1, b in [0, 1)")
    n = int(n)
    Q = bounds.q_from_k(k)
    fn = ScaledCombo(PommerenkeKn(n), k, -1)
    p = ScaledCombo(HAlpha(alpha), k, 1)
    return [
        (f"sharpness:d_k{n}(0)", PommerenkeKn(n), 1.0 / (2 * n)),
        (f"sharpness:d_h{n}(0)", AnalyticPart(fn), 1.0 / (2 * n * (1.0 - k))),
        (f"sharpness:d_f{n}(0)", fn, Q / (2 * n)),
        ("sharpness:d_f(0) lower extremal", p, 1.0 / (2.0 * alpha * Q)),
        ("sharpness:d_h(0) lower extremal", AnalyticPart(p), 1.0 / (2.0 * alpha * (1.0 + k))),
        ("sharpness:d_F(0) harmonic Koebe", HarmonicKoebe(), 1.0 / 6.0),
        ("sharpness:d_F(0) affine Koebe", Affine(HarmonicKoebe(), -b, normalize=False), (1.0 - b) / 6.0),
    ]


def run_sharpness_suite(k=0.25, alpha=2.0, n=2, b=0.5, settings=None):
    """Compare each closed-form radius with the ray-lifting estimate (relative 1e-3)."""
    settings = _settings(settings)
    reports = []
    for name, f, exact in sharpness_cases(k, alpha, n, b):
        meta = {"variant": type(f).__name__, "k": k, "alpha": alpha, "n": n, "b": b, **_settings_meta(settings)}
        try:
            meta["analytic_radius"] = radii.analytic_radius(f).value
        except UnsupportedVariantError:
            meta["analytic_radius"] = None
        tol = SHARPNESS_RTOL * exact
        try:
            est = radii.univalent_disk_radius(f, 0j, settings=settings)
        except RayLiftError as exc:
            meta["error"] = str(exc)
            reports.append(VerificationReport(name, exact, math.nan, tol, INDETERMINATE, meta))
            continue
        meta["estimator_error"] = est.error
        ok = abs(est.value - exact) <= tol and meta["analytic_radius"] == exact
        reports.append(VerificationReport(name, exact, est.value, tol, PASS if ok else FAIL, meta))
    return reports


# -- named suites (the CLI surface) ------------------------------------------------

SUITES = ("theorem1", "theorem2", "theorem3", "sharpness")


def validate_params(params):
    """Merge ``params`` over the defaults; unknown keys or bad values raise DomainError."""
    if not isinstance(params, dict):
        raise DomainError("parameters must be a JSON object")
    unknown = set(params) - set(DEFAULT_PARAMS)
    if unknown:
        raise DomainError(f"unknown parameter(s): {sorted(unknown)}")
    p = {**DEFAULT_PARAMS, **params}
    try:
        p["k"], p["alpha"], p["b"] = float(p["k"]), float(p["alpha"]), float(p["b"])
        p["n"] = int(p["n"])
        p["n_directions"] = int(p["n_directions"])
    except (TypeError, ValueError):
        raise DomainError("k, alpha, b must be numbers and n, n_directions integers") from None
    sharpness_cases(p["k"], p["alpha"], p["n"], p["b"])
    if p["n_directions"] < 4:
        raise DomainError("n_directions must be at least 4")
    return p


def run_suite(suite="all", params=None):
    """Run one named suite (or 'all') and return its reports sorted by name."""
    p = validate_params(params or {})
    if suite != "all" and suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; expected 'all' or one of {SUITES}")
    chosen = SUITES if suite == "all" else (suite,)
    settings = radii.LiftSettings(n_directions=p["n_directions"])
    k, alpha, n, b = p["k"], p["alpha"], p["n"], p["b"]
    Q = bounds.q_from_k(k)
    fn = ScaledCombo(PommerenkeKn(n), k, -1)
    p_low = ScaledCombo(HAlpha(alpha), k, 1)
    reports = []
    if "theorem1" in chosen:
        reports.append(check_theorem1(fn, 0j, n, Q, settings, f"theorem1:f{n} upper edge"))
        reports.append(check_theorem1(p_low, 0j, alpha, Q, settings, "theorem1:lower extremal"))
        reports.append(check_theorem1(HAlpha(alpha), 0.3, alpha, 1.0, settings, "theorem1:analytic Q=1"))
    if "theorem2" in chosen:
        p_plain = Affine(HAlpha(alpha), k, normalize=False)
        koebe_b = Affine(HarmonicKoebe(), -b, normalize=False)
        reports.append(check_theorem2(p_plain, 0j, alpha, settings, "theorem2:h_alpha + k conj h_alpha"))
        reports.append(check_theorem2(koebe_b, 0j, 3.0, settings, "theorem2:affine Koebe"))
        reports.append(check_theorem2(identity(), 0j, 1.0, settings, "theorem2:identity"))
    if "theorem3" in chosen:
        cases = [
            (f"h{n}", AnalyticPart(fn), n, 1.0),
            (f"f{n}", fn, n, Q),
            ("h_alpha/(1+k)", AnalyticPart(p_low), alpha, 1.0),
            ("(h_alpha + k conj h_alpha)/(1+k)", p_low, alpha, Q),
        ]
        for label, f, a, q in cases:
            for z0 in (0.0, 0.3):
                reports.append(check_theorem3_convexity(f, z0, a, q, name=f"theorem3:{label} at {z0}"))
    if "sharpness" in chosen:
        reports.extend(run_sharpness_suite(k, alpha, n, b, settings))
    return sorted(reports, key=lambda r: r.check_name)
