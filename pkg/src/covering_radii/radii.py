"""Radius d_f(z0) of the largest univalent disk centred at f(z0).

The numerical estimator lifts straight image rays w = f(z0) + s e^{i psi}
back to the disk.  Along the lift z(s),

    h'(z) z' + conj(g'(z) z') = e^{i psi}
    =>  z' = (conj(h'(z)) e^{i psi} - conj(g'(z)) e^{-i psi}) / J_f(z),

which is integrated with classical RK4.  The step in s is
min(max(h_max, c (s - L)), c (1 - |z|) (|h'| - |g'|)), so one step moves z by at
most c (1 - |z|).  L = 2 (|h'(z0)| + |g'(z0)|)(1 - |z0|^2) is a length scale
of the map at z0; beyond it the cap grows geometrically with s so that
unbounded rays reach the rim in logarithmically many steps.  A ray escapes when |z| reaches 1 - delta; its escape length is
the image distance travelled.  d_f(z0) is estimated as the minimum escape
length over a sweep of directions.

That this minimum equals d_f(z0) is an assumption, checked against the known
closed-form radii of the extremal families, not a theorem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RayLiftError, UnsupportedVariantError
from .mappings import (
    Affine,
    AnalyticPart,
    HAlpha,
    HarmonicKoebe,
    PommerenkeKn,
    ScaledCombo,
    Series,
    analytic_part,
    deriv_h,
    jacobian,
)

STEP_FACTOR = 0.1
H_MAX = 1e-3
DELTA = 1e-6
MAX_STEPS = 10_000_000
DEFAULT_DIRECTIONS = 720
ANGLE_TOL = 1e-5
# 2 pi / sqrt(27): |a1|^2 + |b1|^2 >= 27/(4 pi^2) for harmonic self-maps of the disk onto itself fixing 0
HEINZ = 2.0 * math.pi / math.sqrt(27.0)

_ACTIVE, _ESCAPED, _CAPPED, _STEP_LIMIT, _SINGULAR = range(5)
_STATUS_NAMES = {
    _ACTIVE: "active",
    _ESCAPED: "escaped",
    _CAPPED: "capped",
    _STEP_LIMIT: "step-limit",
    _SINGULAR: "singular",
}


@dataclass
class RayLift:
    """One lifted ray.

    ``escape_length`` is the image distance s* at which the lift reached
    |z| = 1 - delta (plus the residual estimate beyond it).  ``status`` is
    'escaped', 'capped' (stopped once longer than a known shorter ray),
    'step-limit' (escape_length is then only a lower bound) or 'singular'.
    ``ceiling`` is the smallest upper bound on d_f(z0) met along the ray.
    """

    direction: float
    escape_length: float
    status: str
    error: float = 0.0
    n_steps: int = 0
    path_samples: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=complex))
    ceiling: float = math.inf


@dataclass
class RadiusEstimate:
    value: float
    method: str
    error: float
    directions_used: int = 0
    argmin_direction: float | None = None
    lower_bound_only: bool = False
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "value": self.value,
            "method": self.method,
            "error": self.error,
            "directions_used": self.directions_used,
            "argmin_direction": self.argmin_direction,
            "lower_bound_only": self.lower_bound_only,
            "metadata": self.metadata,
        }


@dataclass(frozen=True)
class LiftSettings:
    """Knobs of the ray-lifting estimator."""

    n_directions: int = DEFAULT_DIRECTIONS
    refine: bool = True
    step_factor: float = STEP_FACTOR
    h_max: float = H_MAX
    delta: float = DELTA
    max_steps: int = MAX_STEPS
    angle_tol: float = ANGLE_TOL


@dataclass
class _Lifts:
    lengths: np.ndarray
    errors: np.ndarray
    status: np.ndarray
    steps: np.ndarray
    path: list | None
    ceilings: np.ndarray
    gaps: np.ndarray

    def reach(self):
        """Per-ray upper bound on d_f(z0) with its error: the escape length or the ceiling, whichever is smaller."""
        esc = np.where(self.status == _ESCAPED, self.lengths, math.inf)
        use_ceiling = self.ceilings < esc
        value = np.where(use_ceiling, self.ceilings, esc)
        err = np.where(use_ceiling, self.gaps, self.errors)
        return value, err, use_ceiling


def _lift_rays(f, z0, psis, cap=math.inf, step_factor=STEP_FACTOR, h_max=H_MAX, delta=DELTA,
               max_steps=MAX_STEPS, record_path=False, dynamic_cap=True, self_cap=False):
    """Integrate the lifts of all rays in ``psis`` simultaneously.

    Rays longer than the best upper bound on d_f(z0) so far (or than ``cap``)
    are stopped with status 'capped'.  ``dynamic_cap=False`` keeps only the
    fixed ``cap``; ``self_cap`` then also stops each ray at its own ceiling.
    ``step_factor`` and ``h_max`` may be per-ray arrays.
    Besides escape lengths, each ray records the smallest ceiling
    s + HEINZ sqrt(|h'|^2 + |g'|^2)(R^2 - |z|^2)/R met along it, and the
    second term at that point as ``gaps``.
    """
    psis = np.atleast_1d(np.asarray(psis, dtype=float))
    n = psis.size
    e = np.exp(1j * psis)
    ec = np.conj(e)
    sf = np.broadcast_to(np.asarray(step_factor, dtype=float), (n,))
    hm = np.broadcast_to(np.asarray(h_max, dtype=float), (n,))
    R = f.domain_radius
    exit_radius = R - delta
    z = np.full(n, complex(z0))
    s = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    status = np.full(n, _ACTIVE)
    lengths = np.full(n, math.inf)
    errors = np.zeros(n)
    ceilings = np.full(n, math.inf)
    gaps = np.full(n, math.inf)
    best = float(cap)
    path = [complex(z0)] if record_path else None
    hp0, gp0 = (abs(complex(np.asarray(d).ravel()[0])) for d in f.derivs(np.array([complex(z0)])))
    scale = 2.0 * (hp0 + gp0) * (R * R - abs(complex(z0)) ** 2) / R

    def velocity(zz, ee, eec):
        hp, gp = f.derivs(zz)
        jac = np.abs(hp) ** 2 - np.abs(gp) ** 2
        v = (np.conj(hp) * ee - np.conj(gp) * eec) / jac
        return v, hp, gp, jac

    while True:
        idx = np.flatnonzero(status == _ACTIVE)
        if idx.size == 0:
            break
        zi = z[idx]
        ei, eci = e[idx], ec[idx]
        k1, hp, gp, jac = velocity(zi, ei, eci)
        sing = ~(jac > 0.0)
        if np.any(sing):
            status[idx[sing]] = _SINGULAR
            lengths[idx[sing]] = s[idx[sing]]
            keep = ~sing
            idx, zi, ei, eci, k1, hp, gp, jac = (a[keep] for a in (idx, zi, ei, eci, k1, hp, gp, jac))
            if idx.size == 0:
                continue
        ahp, agp = np.abs(hp), np.abs(gp)
        gap = HEINZ * np.hypot(ahp, agp) * (R * R - np.abs(zi) ** 2) / R
        lower = s[idx] + gap < ceilings[idx]
        if np.any(lower):
            li = idx[lower]
            ceilings[li] = s[li] + gap[lower]
            gaps[li] = gap[lower]
            if dynamic_cap:
                best = min(best, float(np.min(ceilings[li])))
        h = np.minimum(np.maximum(hm[idx], sf[idx] * (s[idx] - scale)),
                       sf[idx] * (R - np.abs(zi)) * jac / (ahp + agp))
        pending = np.ones(idx.size, dtype=bool)
        z_new = np.empty_like(zi)
        for _ in range(60):
            p = np.flatnonzero(pending)
            hh = h[p]
            zp, ep, ecp, k1p = zi[p], ei[p], eci[p], k1[p]
            with np.errstate(all="ignore"):
                z2 = zp + 0.5 * hh * k1p
                ok = f.in_domain(z2)
                k2 = velocity(np.where(ok, z2, zp), ep, ecp)[0]
                z3 = zp + 0.5 * hh * k2
                ok &= f.in_domain(z3)
                k3 = velocity(np.where(ok, z3, zp), ep, ecp)[0]
                z4 = zp + hh * k3
                ok &= f.in_domain(z4)
                k4 = velocity(np.where(ok, z4, zp), ep, ecp)[0]
                zn = zp + hh / 6.0 * (k1p + 2.0 * k2 + 2.0 * k3 + k4)
                ok &= np.isfinite(k2) & np.isfinite(k3) & np.isfinite(k4) & f.in_domain(zn)
            z_new[p[ok]] = zn[ok]
            pending[p[ok]] = False
            if not np.any(pending):
                break
            h[p[~ok]] *= 0.25
        else:
            bad = idx[pending]
            status[bad] = _SINGULAR
            lengths[bad] = s[bad]
        done = ~pending
        idx, zi, h, z_new = idx[done], zi[done], h[done], z_new[done]
        z[idx] = z_new
        s[idx] += h
        steps[idx] += 1
        if record_path:
            path.append(complex(z_new[0]) if idx.size else path[-1])
        out = np.abs(z_new) >= exit_radius
        if np.any(out):
            ids = idx[out]
            zo = z_new[out]
            hp_o, gp_o = (np.abs(d) for d in f.derivs(zo))
            remaining = R - np.abs(zo)
            lengths[ids] = s[ids] + (hp_o - gp_o) * remaining
            errors[ids] = (hp_o + gp_o) * remaining
            status[ids] = _ESCAPED
            if dynamic_cap:
                best = min(best, float(np.min(lengths[ids])))
        active = status == _ACTIVE
        capped = active & (s >= best)
        if self_cap:
            capped |= active & (s >= ceilings)
        status[capped] = _CAPPED
        limited = active & ~capped & (steps >= max_steps)
        status[limited] = _STEP_LIMIT
        lengths[limited] = s[limited]
    return _Lifts(lengths, errors, status, steps, path, ceilings, gaps)


def ray_lift(f, z0, psi, step_factor=STEP_FACTOR, h_max=H_MAX, delta=DELTA, max_steps=MAX_STEPS, cap=math.inf):
    """Lift the single image ray f(z0) + s e^{i psi}, s >= 0, and record its path."""
    z0 = complex(z0)
    if not abs(z0) < f.domain_radius:
        raise DomainError(f"z0 = {z0} lies outside the domain")
    if not float(jacobian(f, z0)) > 0.0:
        raise RayLiftError(f"Jacobian is not positive at z0 = {z0}")
    lifts = _lift_rays(
        f, z0, [psi], cap=cap, step_factor=step_factor, h_max=h_max, delta=delta,
        max_steps=max_steps, record_path=True, dynamic_cap=False,
    )
    return RayLift(
        direction=float(psi),
        escape_length=float(lifts.lengths[0]),
        status=_STATUS_NAMES[int(lifts.status[0])],
        error=float(lifts.errors[0]),
        n_steps=int(lifts.steps[0]),
        path_samples=np.array(lifts.path, dtype=complex),
        ceiling=float(lifts.ceilings[0]),
    )


def _raise_if_singular(lifts, psis):
    if np.any(lifts.status == _SINGULAR):
        j = int(np.flatnonzero(lifts.status == _SINGULAR)[0])
        raise RayLiftError(f"lifted ray at psi = {psis[j]} met a non-positive Jacobian")


def _section_refine(f, z0, psi0, width, best, settings, n_points=16):
    """Shrink a bracket around the best direction.

    Each round lifts ``n_points`` equally spaced interior directions in one
    vectorized call and recentres the bracket, one spacing wide on each side,
    on the best direction found so far; the bracket shrinks by (n_points+1)/2
    per round until the spacing drops below ``settings.angle_tol``.
    """
    kw = dict(step_factor=settings.step_factor, h_max=settings.h_max, delta=settings.delta,
              max_steps=settings.max_steps)
    best_psi = psi0
    n_eval = 0
    lo, hi = psi0 - width, psi0 + width
    while True:
        spacing = (hi - lo) / (n_points + 1)
        pts = lo + spacing * np.arange(1, n_points + 1)
        lifts = _lift_rays(f, z0, pts, cap=best, **kw)
        n_eval += n_points
        _raise_if_singular(lifts, pts)
        values = lifts.reach()[0]
        j = int(np.argmin(values))
        if values[j] < best:
            best, best_psi = float(values[j]), float(pts[j])
        if spacing <= settings.angle_tol:
            return best, best_psi, n_eval
        lo, hi = best_psi - spacing, best_psi + spacing


def univalent_disk_radius(f, z0=0j, n_directions=DEFAULT_DIRECTIONS, refine=True, settings=None):
    """Ray-lifting estimate of d_f(z0).

    Sweeps psi = 2 pi j / n_directions (so n_directions divisible by 4 keeps the
    coordinate directions on the grid), then optionally refines around the
    best direction by a vectorized section search.  Each ray contributes the
    smaller of its escape length and its ceiling; both bound d_f(z0) from
    above.  The error combines the residual beyond 1 - delta (or the ceiling
    gap) with the change in the value when the winning ray is re-integrated at
    half the step size.
    """
    if settings is None:
        settings = LiftSettings(n_directions=n_directions, refine=refine)
    z0 = complex(z0)
    if not abs(z0) < f.domain_radius:
        raise DomainError(f"z0 = {z0} lies outside the domain")
    if not float(jacobian(f, z0)) > 0.0:
        raise RayLiftError(f"Jacobian is not positive at z0 = {z0}")
    n = int(settings.n_directions)
    if n < 1:
        raise DomainError("need at least one direction")
    psis = 2.0 * math.pi * np.arange(n) / n
    kw = dict(step_factor=settings.step_factor, h_max=settings.h_max, delta=settings.delta,
              max_steps=settings.max_steps)
    lifts = _lift_rays(f, z0, psis, **kw)
    _raise_if_singular(lifts, psis)
    escaped = lifts.status == _ESCAPED
    limited = lifts.status == _STEP_LIMIT
    meta = {
        "n_directions": n,
        "refine": bool(settings.refine),
        "step_factor": settings.step_factor,
        "h_max": settings.h_max,
        "delta": settings.delta,
        "max_steps_taken": int(lifts.steps.max()),
    }
    if not np.any(escaped) and np.any(limited):
        meta["status"] = "step-limit"
        return RadiusEstimate(float(np.min(lifts.lengths[limited])), "ray-lift", math.inf, n, None, True, meta)
    values = lifts.reach()[0]
    j = int(np.argmin(values))
    best, best_psi = float(values[j]), float(psis[j])
    n_used = n
    if settings.refine and n > 1:
        val, psi_r, n_eval = _section_refine(f, z0, best_psi, 2.0 * math.pi / n, best, settings)
        n_used += n_eval
        if val < best:
            best, best_psi = val, psi_r
    # half-step re-integration of the winning ray; 2|difference| bounds the
    # discretization error for any convergence order >= 1
    check = _lift_rays(
        f, z0, [best_psi, best_psi], cap=1.01 * best,
        step_factor=[settings.step_factor, 0.5 * settings.step_factor],
        h_max=[settings.h_max, 0.5 * settings.h_max],
        delta=settings.delta, max_steps=settings.max_steps, dynamic_cap=False, self_cap=True,
    )
    v, e, from_ceiling = check.reach()
    err = float(e[0]) + 2.0 * abs(float(v[1]) - float(v[0])) + float(e[1])
    if not math.isfinite(err):
        err = float(e[0])
    meta["status"] = "escaped"
    meta["source"] = "ceiling" if from_ceiling[0] else "escape"
    return RadiusEstimate(best, "ray-lift", err, n_used, best_psi, False, meta)


def boundary_distance(f, z0=0j, n_samples=100_000, r=1.0 - 1e-9):
    """min over theta of |f(r e^{i theta}) - f(z0)|: the distance to the image boundary.

    Valid as d_f(z0) only for univalent maps whose boundary values are
    approximated by the circle of radius r.
    """
    th = 2.0 * math.pi * np.arange(n_samples) / n_samples
    w = r * np.exp(1j * th)
    with np.errstate(all="ignore"):
        vals = f.h(w) + np.conj(f.g(w))
    z0 = complex(z0)
    w0 = complex(f.h(z0) + np.conj(f.g(z0)))
    d = np.abs(vals - w0)
    return float(np.nanmin(d))


# -- closed forms ----------------------------------------------------------------


def _unwrap_analytic_part(f):
    return f.base if isinstance(f, AnalyticPart) else None


def analytic_radius(f, z0=0j):
    """Exact d_f(0) for the recognized extremal variants.

    k_n -> 1/(2n); k_n/(1-k) -> 1/(2n(1-k)); f_n -> Q/(2n);
    (h_a + k conj h_a)/(1+k) -> 1/(2 a Q); h_a/(1+k) -> 1/(2 a (1+k));
    h_a -> 1/(2a); h_a + k conj h_a -> (1-k)/(2a); harmonic Koebe -> 1/6;
    its affine deformation F - b conj(F) -> (1-b)/6; identity -> 1.
    """
    if complex(z0) != 0:
        raise UnsupportedVariantError("closed-form radii are only known at z0 = 0")
    value = _closed_form(f)
    if value is None:
        raise UnsupportedVariantError(f"no closed-form radius for {type(f).__name__}")
    return RadiusEstimate(value, "analytic", 0.0, 0, None, False, {"variant": type(f).__name__})


def _closed_form(f):
    if isinstance(f, PommerenkeKn):
        return 1.0 / (2 * f.n)
    if isinstance(f, HAlpha):
        return 1.0 / (2.0 * f.alpha)
    if isinstance(f, HarmonicKoebe):
        return 1.0 / 6.0
    if isinstance(f, Series):
        if f.rho == 1.0 and f.h_coeffs[0] == 1 and all(c == 0 for c in f.h_coeffs[1:] + f.g_coeffs):
            return 1.0
        return None
    if isinstance(f, ScaledCombo):
        k = f.k
        if isinstance(f.base, PommerenkeKn) and f.sign == -1:
            return (1.0 + k) / (2 * f.base.n * (1.0 - k))
        if isinstance(f.base, HAlpha) and f.sign == 1:
            return (1.0 - k) / (2.0 * f.base.alpha * (1.0 + k))
        return None
    base = _unwrap_analytic_part(f)
    if base is not None:
        if isinstance(base, ScaledCombo):
            inner = _closed_form(base.base)
            return None if inner is None else inner * base.scale
        return _closed_form(base)
    if isinstance(f, Affine):
        eps = f.eps
        if eps.imag != 0 or f.denom != 1:
            return None
        if isinstance(f.base, HAlpha) and 0 <= eps.real < 1:
            return (1.0 - eps.real) / (2.0 * f.base.alpha)
        if isinstance(f.base, HarmonicKoebe) and -1 < eps.real <= 0:
            return (1.0 + eps.real) / 6.0
    return None


def conformal_radius(f, z):
    """|h'(z)| (1 - |z|^2): the Schwarz-lemma ceiling for d_h(z)."""
    z = complex(z)
    return abs(complex(deriv_h(f, z))) * (1.0 - abs(z) ** 2)


def pommerenke_lower(f, z, alpha):
    """|h'(z)| (1 - |z|^2) / (2 alpha): lower bound of d_h(z) in the universal family of order alpha."""
    if not alpha >= 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    return conformal_radius(f, z) / (2.0 * alpha)


def estimate_radius(f, z0=0j, method="auto", settings=None):
    """d_f(z0) by ``method``: 'analytic', 'ray-lift', or 'auto' (analytic when available)."""
    if method == "analytic":
        return analytic_radius(f, z0)
    if method == "auto":
        try:
            return analytic_radius(f, z0)
        except UnsupportedVariantError:
            pass
    elif method != "ray-lift":
        raise DomainError(f"unknown method {method!r}")
    settings = settings or LiftSettings()
    return univalent_disk_radius(f, z0, settings=settings)


def ratio_df_dh(f, z0=0j, method="auto", settings=None):
    """d_f(z0)/d_h(z0) with the estimates for f and its analytic part h.

    Returns (ratio, error, (estimate_f, estimate_h)).
    """
    ef = estimate_radius(f, z0, method, settings)
    eh = estimate_radius(analytic_part(f), z0, method, settings)
    ratio = ef.value / eh.value
    err = ratio * (ef.error / ef.value + eh.error / eh.value)
    return ratio, err, (ef, eh)
