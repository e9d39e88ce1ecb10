"""Covering-radius bounds, distortion constants and convexity radii.

Notation: Q >= 1 is the quasiconformality constant, k = (Q - 1)/(Q + 1) the
dilatation bound, x = |omega(z)|/k the normalized dilatation, alpha >= 1 the
order of the linear invariant family.  Q = math.inf is allowed wherever the
bound has a meaning there and corresponds to k = 1.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import elliptic
from .errors import DomainError, SenseReversingError
from .mappings import deriv_g, deriv_h
from .quadrature import adaptive_gauss_legendre

INF = math.inf

DEFAULT_QUAD_TOL = 1e-10
ENDPOINT_DELTA = 1e-8


def quad_tolerance():
    """Quadrature tolerance, overridable through the HR_QUAD_TOL environment variable."""
    raw = os.environ.get("HR_QUAD_TOL")
    if not raw:
        return DEFAULT_QUAD_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise DomainError(f"HR_QUAD_TOL must be a positive number, got {raw!r}") from None
    if not tol > 0:
        raise DomainError(f"HR_QUAD_TOL must be a positive number, got {raw!r}")
    return tol


def k_from_q(Q):
    """k = (Q - 1)/(Q + 1); k_from_q(inf) = 1."""
    Q = float(Q)
    if math.isnan(Q) or Q < 1.0:
        raise DomainError(f"Q must be >= 1, got {Q!r}")
    if math.isinf(Q):
        return 1.0
    return (Q - 1.0) / (Q + 1.0)


def q_from_k(k):
    """Q = (1 + k)/(1 - k); q_from_k(1) = inf."""
    k = float(k)
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"k must lie in [0, 1], got {k!r}")
    if k == 1.0:
        return INF
    return (1.0 + k) / (1.0 - k)


def _check_unit(name, v, closed_right=True):
    v = float(v)
    ok = 0.0 <= v <= 1.0 if closed_right else 0.0 <= v < 1.0
    if not ok:
        interval = "[0, 1]" if closed_right else "[0, 1)"
        raise DomainError(f"{name} must lie in {interval}, got {v!r}")
    return v


@dataclass(frozen=True)
class FamilyParams:
    """Scalars governing the families: order alpha, Q (with k derived), normalized dilatation x."""

    alpha: float = 1.0
    Q: float = 1.0
    x: float = 0.0
    k: float = field(init=False)

    def __post_init__(self):
        if not self.alpha >= 1.0:
            raise DomainError(f"alpha must be >= 1, got {self.alpha!r}")
        _check_unit("x", self.x)
        object.__setattr__(self, "k", k_from_q(self.Q))

    @classmethod
    def from_k(cls, k, alpha=1.0, x=0.0):
        return cls(alpha=alpha, Q=q_from_k(k), x=x)


@dataclass(frozen=True)
class BoundPair:
    """A lower/upper pair.  For the distortion ratio d_f/d_h these are m and M."""

    lower: float
    upper: float
    params: FamilyParams | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise DomainError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    def contains(self, value, slack=0.0):
        return self.lower - slack <= value <= self.upper + slack


def _ratio_integral(x):
    """int_0^1 (t + x)/(1 + x t) dt."""
    if x == 0.0:
        return 0.5
    if x < 0.05:
        # 1/2 + sum_{n>=2} (-1)^n 2 x^{n-1} / (n^2 - 1); the closed form cancels here
        return 0.5 + sum((-1) ** n * 2.0 * x ** (n - 1) / (n * n - 1) for n in range(2, 16))
    return (1.0 - (1.0 / x - x) * math.log1p(x)) / x


def upper_bound_M(x, k):
    """M(x, k) = 1 + (k/x)(1 - (1/x - x) log(1 + x)), with M(0, k) = 1 + k/2.

    Equal to 1 + k int_0^1 (t + x)/(1 + x t) dt; increasing in x, M(1, k) = 1 + k.
    """
    x = _check_unit("x", x)
    k = _check_unit("k", k)
    if x == 1.0:
        return 1.0 + k
    return 1.0 + k * _ratio_integral(x)


def _ratio_integrand(y, x, k):
    return (1.0 + y * x) / (1.0 - k * x + y * (x - k))


def lower_bound_m(x, Q, tol=None, full_output=False):
    """m(x, Q): the sharp lower bound of d_f/d_h.

    1/m(x, Q) = int_0^1 (1 + y x)/(1 - k x + y (x - k)) dt with
    y = phi^{-1}(phi(t)/Q).  The integral runs over [delta, 1 - delta]
    (delta = 1e-8) by adaptive Gauss-Legendre; the end pieces use the limits
    1/(1 - kx) at t = 0 and 1/(1 - k) at t = 1.  m(x, inf) = 0.

    With ``full_output`` returns ``(m, info)`` where info holds the requested
    tolerance, the achieved error estimate on m and the evaluation count.
    """
    x = _check_unit("x", x)
    Q = float(Q)
    k = k_from_q(Q)
    tol = quad_tolerance() if tol is None else float(tol)
    info = {"tol": tol, "error": 0.0, "n_evals": 0, "delta": ENDPOINT_DELTA, "scheme": "adaptive Gauss-Legendre (10-point)"}
    if math.isinf(Q):
        m = 0.0
    elif k == 0.0:
        m = 1.0
    elif x == 1.0:
        # integrand is identically 1/(1 - k)
        m = 1.0 - k
    else:
        d = ENDPOINT_DELTA

        def integrand(t):
            return _ratio_integrand(elliptic.qc_distortion(t, Q), x, k)

        res = adaptive_gauss_legendre(integrand, d, 1.0 - d, tol=tol)
        lim0 = 1.0 / (1.0 - k * x)
        lim1 = 1.0 / (1.0 - k)
        ends = integrand(np.array([d, 1.0 - d]))
        end_err = d * (abs(ends[0] - lim0) + abs(ends[1] - lim1))
        total = res.value + d * (lim0 + lim1)
        m = 1.0 / total
        info["error"] = (res.error + end_err) / total ** 2
        info["n_evals"] = res.n_evals + 2
    if full_output:
        return m, info
    return m


def mori_upper_bound_on_ratio(x, Q, tol=1e-12):
    """Elementary upper bound on d_h/d_f built on Mori's |F(z)| <= 16 |z|^{1/Q}.

    (1/(1-k)) (1 - T + (1-k) int_0^T (1 + y x)/(1 - kx + y(x - k)) dt),
    y = 16 t^{1/Q}, T = 16^{-Q}.  Dominates 1/m(x, Q) and is at most 1/(1-k).
    """
    x = _check_unit("x", x)
    Q = float(Q)
    if math.isinf(Q):
        raise DomainError("the Mori bound requires finite Q")
    k = k_from_q(Q)
    if k == 0.0:
        return 1.0
    T = 16.0 ** (-Q)
    # t = T u^Q turns y into u and dt into T Q u^(Q-1) du
    res = adaptive_gauss_legendre(lambda u: _ratio_integrand(u, x, k) * u ** (Q - 1.0), 0.0, 1.0, tol=tol)
    integral = T * Q * res.value
    return (1.0 - T + (1.0 - k) * integral) / (1.0 - k)


def ratio_bracket(x, Q, tol=None):
    """BoundPair(m(x, Q), M(x, k)) bracketing d_f/d_h."""
    k = k_from_q(Q)
    return BoundPair(lower_bound_m(x, Q, tol=tol), upper_bound_M(x, k), FamilyParams(Q=Q, x=x))


def starkov_bounds(f, z, alpha, Q):
    """Two-sided estimate of d_f(z) for f in H(alpha, Q).

    lower = (1 - |z|^2)(|h'| + |g'|)/(2 alpha Q), upper = Q (1 - |z|^2)(|h'| - |g'|).
    """
    if not alpha >= 1.0 or not Q >= 1.0:
        raise DomainError("starkov_bounds requires alpha >= 1 and Q >= 1")
    z = complex(z)
    hp = abs(complex(deriv_h(f, z)))
    gp = abs(complex(deriv_g(f, z)))
    if gp > hp:
        raise SenseReversingError(f"|g'| = {gp} exceeds |h'| = {hp} at z = {z}")
    c = 1.0 - abs(z) ** 2
    return BoundPair(c * (hp + gp) / (2.0 * alpha * Q), Q * c * (hp - gp), FamilyParams(alpha=alpha, Q=Q))


def theorem2_lower(omega_abs, alpha, z_abs):
    """(1 - |omega|)/(2 alpha) ((1 - |z|)/(1 + |z|))^alpha: lower bound of d_f(z) in an affine-linear invariant family."""
    omega_abs = _check_unit("|omega|", omega_abs, closed_right=False)
    z_abs = _check_unit("|z|", z_abs, closed_right=False)
    if not alpha >= 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    return (1.0 - omega_abs) / (2.0 * alpha) * ((1.0 - z_abs) / (1.0 + z_abs)) ** alpha


def schwarz_pick_dilatation_bound(u_abs, k, z_abs):
    """k (|z| + |u|)/(1 + |u||z|): pointwise bound on |omega(z)| given u = omega(0)/k."""
    u_abs = _check_unit("|u|", u_abs)
    k = _check_unit("k", k)
    z_abs = _check_unit("|z|", z_abs, closed_right=False)
    return k * (z_abs + u_abs) / (1.0 + u_abs * z_abs)


def growth_bounds_hprime(alpha, z_abs):
    """((1-r)^(a-1)/(1+r)^(a+1), (1+r)^(a-1)/(1-r)^(a+1)) bracketing |h'(z)|, r = |z|."""
    if not alpha >= 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    r = _check_unit("|z|", z_abs, closed_right=False)
    lower = (1.0 - r) ** (alpha - 1.0) / (1.0 + r) ** (alpha + 1.0)
    upper = (1.0 + r) ** (alpha - 1.0) / (1.0 - r) ** (alpha + 1.0)
    return lower, upper


def _order_increment(k):
    # (1 - sqrt(1 - k^2))/k rewritten without cancellation; -> 0 as k -> 0
    return k / (1.0 + math.sqrt((1.0 - k) * (1.0 + k)))


def affine_hull_order(alpha, k):
    """alpha + (1 - sqrt(1 - k^2))/k: order bound of the affine hull; tends to alpha as k -> 0."""
    if not alpha >= 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    k = _check_unit("k", k)
    return alpha + _order_increment(k)


def _radius_from_order(a1):
    # a1 - sqrt(a1^2 - 1) == 1/(a1 + sqrt(a1^2 - 1))
    return 1.0 / (a1 + math.sqrt((a1 - 1.0) * (a1 + 1.0)))


def convexity_radius_r0(alpha, Q):
    """R0 = a1 - sqrt(a1^2 - 1) with a1 = alpha + (1 - sqrt(1 - k^2))/k.

    At Q = 1 this is exactly alpha - sqrt(alpha^2 - 1); otherwise the
    reciprocal form 1/(a1 + sqrt(a1^2 - 1)) avoids cancellation.
    """
    if not alpha >= 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    k = k_from_q(Q)
    if k == 0.0:
        # the univalent subfamily's radius, returned in its literal form
        return alpha - math.sqrt(alpha * alpha - 1.0)
    return _radius_from_order(affine_hull_order(alpha, k))


def convexity_radius_r0_literal(alpha, Q):
    """R0 evaluated term by term as alpha + 1/k - sqrt(1/k^2 - 1) - sqrt((...)^2 - 1).

    Kept as a cross-check of :func:`convexity_radius_r0`; falls back to
    alpha - sqrt(alpha^2 - 1) at k = 0 where 1/k is undefined.
    """
    if not alpha >= 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    k = k_from_q(Q)
    if k == 0.0:
        return alpha - math.sqrt(alpha * alpha - 1.0)
    a1 = alpha + 1.0 / k - math.sqrt(1.0 / (k * k) - 1.0)
    return a1 - math.sqrt(a1 * a1 - 1.0)


def convexity_radius_at(z_abs, alpha, Q):
    """R(z) = (R0 + 1/R0 - sqrt((R0 - 1/R0)^2 + 4|z|^2))/2."""
    z_abs = _check_unit("|z|", z_abs, closed_right=False)
    r0 = convexity_radius_r0(alpha, Q)
    if z_abs == 0.0:
        return r0
    s = r0 + 1.0 / r0
    disc = math.sqrt((r0 - 1.0 / r0) ** 2 + 4.0 * z_abs * z_abs)
    # smaller root of R^2 - s R + (1 - |z|^2) = 0, in the cancellation-free form
    return 2.0 * (1.0 - z_abs * z_abs) / (s + disc)


@dataclass(frozen=True)
class ConvexityRadii:
    """Convexity radii of H(alpha, Q): R0 at the origin and R(|z|) elsewhere."""

    alpha: float
    Q: float

    @property
    def r0(self):
        return convexity_radius_r0(self.alpha, self.Q)

    def at(self, z_abs):
        return convexity_radius_at(z_abs, self.alpha, self.Q)
