"""Complete elliptic integral of the first kind and the modulus function phi.

    K(t)  = int_0^{pi/2} dx / sqrt(1 - t^2 sin^2 x)
    K'(t) = K(sqrt(1 - t^2))
    phi(t) = (pi/2) K'(t) / K(t)

Both K and K' reduce to arithmetic-geometric means,

    K(t) = pi / (2 agm(1, t')),   K'(t) = pi / (2 agm(1, t)),

so phi(t) = (pi/2) agm(1, t') / agm(1, t) with t' = sqrt(1 - t^2).  Near
t = 1 the complement t' cannot be recovered from a double t, so
:func:`phi_inv` returns an :class:`EllipticModulus` that carries t' exactly
and :func:`phi` uses it when present.
"""

import math

import numpy as np

from .errors import DivergenceError, DomainError

HALF_PI = 0.5 * math.pi
QUARTER_PI_SQ = HALF_PI * HALF_PI

AGM_TOL = 1e-15
AGM_MAX_ITER = 64

# plain-float moduli this close to an endpoint are rejected by phi
ENDPOINT_EPS = 1e-12


class EllipticModulus(float):
    """A modulus t in [0, 1] that optionally remembers its complement sqrt(1 - t^2).

    Behaves as a float.  The complement is kept exactly when the modulus came
    out of :func:`phi_inv` for small phi values, where t rounds to 1.
    """

    __slots__ = ("complement",)

    def __new__(cls, t, complement=None):
        t = float(t)
        if not 0.0 <= t <= 1.0 or math.isnan(t):
            raise DomainError(f"elliptic modulus must lie in [0, 1], got {t!r}")
        obj = super().__new__(cls, t)
        if complement is None:
            obj.complement = None
        else:
            complement = float(complement)
            if not 0.0 <= complement <= 1.0:
                raise DomainError(f"complementary modulus must lie in [0, 1], got {complement!r}")
            obj.complement = complement
        return obj

    @property
    def tc(self):
        """The complementary modulus sqrt(1 - t^2)."""
        if self.complement is not None:
            return self.complement
        t = float(self)
        return math.sqrt((1.0 - t) * (1.0 + t))

    def __repr__(self):
        return f"EllipticModulus({float(self)!r}, complement={self.tc!r})"


def _agm_array(a, b):
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    for _ in range(AGM_MAX_ITER):
        if np.all(np.abs(a - b) <= AGM_TOL * a):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def agm(a, b):
    """Arithmetic-geometric mean of two positive reals."""
    a = float(a)
    b = float(b)
    if not (a > 0.0 and b > 0.0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"agm requires finite positive arguments, got ({a!r}, {b!r})")
    for _ in range(AGM_MAX_ITER):
        if abs(a - b) <= AGM_TOL * max(a, b):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def ellip_k(t):
    """Complete elliptic integral of the first kind K(t), t in [0, 1)."""
    t = float(t)
    if t == 1.0:
        raise DivergenceError("K(t) diverges at t = 1")
    if not 0.0 <= t < 1.0:
        raise DomainError(f"ellip_k requires t in [0, 1), got {t!r}")
    return math.pi / (2.0 * agm(1.0, math.sqrt((1.0 - t) * (1.0 + t))))


def ellip_k_comp(t):
    """Complementary integral K'(t) = K(sqrt(1 - t^2)), t in (0, 1]."""
    t = float(t)
    if t == 0.0:
        raise DivergenceError("K'(t) diverges at t = 0")
    if not 0.0 < t <= 1.0:
        raise DomainError(f"ellip_k_comp requires t in (0, 1], got {t!r}")
    return math.pi / (2.0 * agm(1.0, t))


def _phi_pair(t, tc):
    """phi from a modulus and its complement (arrays, no checks)."""
    return HALF_PI * _agm_array(1.0, tc) / _agm_array(1.0, t)


def phi(t):
    """The modulus function phi(t) = (pi/2) K'(t)/K(t) on (0, 1).

    Strictly decreasing from +inf to 0.  Plain floats within 1e-12 of either
    endpoint raise :class:`DivergenceError`; an :class:`EllipticModulus`
    carrying its complement is accepted up to the endpoints themselves.
    """
    if isinstance(t, EllipticModulus) and t.complement is not None:
        tv, tc = float(t), t.complement
        if tv <= 0.0 or tc <= 0.0:
            raise DivergenceError("phi diverges (t -> 0) or vanishes (t -> 1) at the endpoints")
    else:
        tv = float(t)
        if math.isnan(tv) or tv < 0.0 or tv > 1.0:
            raise DomainError(f"phi requires t in (0, 1), got {tv!r}")
        if tv <= ENDPOINT_EPS or tv >= 1.0 - ENDPOINT_EPS:
            raise DivergenceError(f"phi is not evaluated within {ENDPOINT_EPS} of the endpoints, got {tv!r}")
        tc = math.sqrt((1.0 - tv) * (1.0 + tv))
    return HALF_PI * agm(1.0, tc) / agm(1.0, tv)


def phi_derivative(t):
    """d phi / dt = -pi^2 / (4 t t'^2 K(t)^2)."""
    t = float(t)
    if not 0.0 < t < 1.0:
        raise DomainError(f"phi_derivative requires t in (0, 1), got {t!r}")
    tc2 = (1.0 - t) * (1.0 + t)
    k = ellip_k(t)
    return -math.pi ** 2 / (4.0 * t * tc2 * k * k)


def _phi_inv_small_modulus(s):
    """Solve phi(t) = s for s >= pi/2 (so t <= 1/sqrt(2)), vectorized.

    Works in u = log t.  Uses the bracket log(1/t) < phi(t) < log(4/t),
    i.e. u in [-s, log 4 - s], with Newton steps that fall back to bisection
    whenever they leave the bracket.
    """
    s = np.asarray(s, dtype=float)
    lo = -s.copy()
    hi = np.minimum(math.log(4.0) - s, -0.5 * math.log(2.0))
    # asymptotic seed t ~ 4 exp(-s)
    u = np.clip(math.log(4.0) - s, lo, hi)
    for _ in range(100):
        t = np.exp(u)
        tc2 = (1.0 - t) * (1.0 + t)
        tc = np.sqrt(tc2)
        a_t = _agm_array(1.0, t)
        a_tc = _agm_array(1.0, tc)
        resid = HALF_PI * a_tc / a_t - s
        # phi(e^u) is decreasing in u
        hi = np.where(resid < 0.0, u, hi)
        lo = np.where(resid > 0.0, u, lo)
        kt = math.pi / (2.0 * a_tc)
        dphi_du = -(math.pi ** 2) / (4.0 * tc2 * kt * kt)
        u_new = u - resid / dphi_du
        outside = (u_new <= lo) | (u_new >= hi) | ~np.isfinite(u_new)
        u_new = np.where(outside, 0.5 * (lo + hi), u_new)
        u_new = np.where(resid == 0.0, u, u_new)
        step = np.abs(u_new - u)
        u = u_new
        if np.all(step <= 4e-16 * np.maximum(1.0, np.abs(u))):
            break
    t = np.exp(u)
    return t, np.sqrt((1.0 - t) * (1.0 + t))


def phi_inv_array(s):
    """Vectorized inverse of phi.  Returns the pair (t, sqrt(1 - t^2))."""
    s = np.asarray(s, dtype=float)
    if np.any(~(s > 0.0)) or np.any(~np.isfinite(s)):
        raise DomainError("phi_inv requires finite s > 0")
    t = np.empty_like(s)
    tc = np.empty_like(s)
    big = s >= HALF_PI
    if np.any(big):
        t[big], tc[big] = _phi_inv_small_modulus(s[big])
    if np.any(~big):
        # phi(t) phi(t') = (pi/2)^2 swaps the roles of t and t'
        tc[~big], t[~big] = _phi_inv_small_modulus(QUARTER_PI_SQ / s[~big])
    return t, tc


def phi_inv(s):
    """Inverse of :func:`phi`: the modulus t with phi(t) = s, for s > 0."""
    s = float(s)
    if not s > 0.0 or math.isinf(s):
        raise DomainError(f"phi_inv requires finite s > 0, got {s!r}")
    t, tc = phi_inv_array(np.array([s]))
    t, tc = float(t[0]), float(tc[0])
    if t == 0.0:
        raise DivergenceError(f"phi_inv({s!r}) underflows to t = 0")
    return EllipticModulus(t, complement=tc)


def qc_distortion(t, Q):
    """phi^{-1}(phi(t)/Q): the sharp quasiconformal Schwarz-lemma bound at radius t (vectorized)."""
    t = np.asarray(t, dtype=float)
    tc = np.sqrt((1.0 - t) * (1.0 + t))
    return phi_inv_array(_phi_pair(t, tc) / Q)[0]
