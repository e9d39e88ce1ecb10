"""Harmonic mappings f = h + conj(g) of the unit disk.

Each variant is an immutable dataclass exposing the analytic part ``h``, the
co-analytic part ``g`` and their derivatives as vectorized methods (they
accept Python complex numbers or complex numpy arrays).  Those methods do not
check the domain; the module-level functions (:func:`evaluate`,
:func:`deriv_h`, :func:`dilatation`, ...) do.

Closed-form families::

    PommerenkeKn(n)   k_n(z) = (i/2n) [((1 - iz)/(1 + iz))^n - 1]
    HAlpha(alpha)     h_a(z) = (1/2ia) [((1 + iz)/(1 - iz))^a - 1]
    HarmonicKoebe     h = (z - z^2/2 + z^3/6)/(1-z)^3,  g = (z^2/2 + z^3/6)/(1-z)^3

Complex powers use the principal branch; the bases (1 +- iz)/(1 -+ iz) have
positive real part on the disk, so the branch is continuous there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegeneracyError, DomainError

NORM_TOL = 1e-12


def _as_complex(z):
    if isinstance(z, (list, tuple)):
        z = np.asarray(z, dtype=complex)
    if isinstance(z, np.ndarray):
        return z.astype(complex, copy=False)
    return complex(z)


def _cplx_pair(w):
    w = complex(w)
    return [w.real, w.imag]


def _from_pair(p):
    if isinstance(p, (list, tuple)):
        re, im = p
        return complex(float(re), float(im))
    return complex(p)


class HarmonicMap:
    """Base class of all map variants."""

    domain_radius = 1.0

    def h(self, z):
        raise NotImplementedError

    def g(self, z):
        raise NotImplementedError

    def dh(self, z):
        raise NotImplementedError

    def dg(self, z):
        raise NotImplementedError

    def derivs(self, z):
        """(h'(z), g'(z)) in one call; composite variants share the base evaluation."""
        return self.dh(z), self.dg(z)

    def in_domain(self, z):
        return np.abs(z) < self.domain_radius

    @property
    def covers_disk(self):
        """True when the map is defined on the whole unit disk."""
        return self.domain_radius >= 1.0

    def __call__(self, z):
        return evaluate(self, z)

    @property
    def is_analytic(self):
        """True when the co-analytic part vanishes identically."""
        return False

    def params(self):
        return {}

    def to_dict(self):
        return {"variant": type(self).__name__, "params": self.params()}


@dataclass(frozen=True)
class PommerenkeKn(HarmonicMap):
    """Pommerenke's extremal function k_n of order n."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"PommerenkeKn requires an integer n >= 1, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    def h(self, z):
        w = (1 - 1j * z) / (1 + 1j * z)
        return 1j / (2 * self.n) * (w ** self.n - 1)

    def dh(self, z):
        return (1 - 1j * z) ** (self.n - 1) / (1 + 1j * z) ** (self.n + 1)

    def g(self, z):
        return 0 * z

    dg = g

    @property
    def is_analytic(self):
        return True

    def params(self):
        return {"n": self.n}


@dataclass(frozen=True)
class HAlpha(HarmonicMap):
    """The extremal function h_alpha of the universal family of order alpha."""

    alpha: float

    def __post_init__(self):
        if not self.alpha >= 1.0:
            raise DomainError(f"HAlpha requires alpha >= 1, got {self.alpha!r}")
        object.__setattr__(self, "alpha", float(self.alpha))

    def _base(self, z):
        return (1 + 1j * z) / (1 - 1j * z)

    def h(self, z):
        a = self.alpha
        return (self._base(z) ** a - 1) / (2j * a)

    def dh(self, z):
        a = self.alpha
        return self._base(z) ** (a - 1) / (1 - 1j * z) ** 2

    def g(self, z):
        return 0 * z

    dg = g

    @property
    def is_analytic(self):
        return True

    def params(self):
        return {"alpha": self.alpha}


@dataclass(frozen=True)
class HarmonicKoebe(HarmonicMap):
    """The harmonic Koebe function; maps the disk onto C minus (-inf, -1/6]."""

    def h(self, z):
        return (z - z ** 2 / 2 + z ** 3 / 6) / (1 - z) ** 3

    def g(self, z):
        return (z ** 2 / 2 + z ** 3 / 6) / (1 - z) ** 3

    def dh(self, z):
        return (1 + z) / (1 - z) ** 4

    def dg(self, z):
        return z * (1 + z) / (1 - z) ** 4


@dataclass(frozen=True)
class Series(HarmonicMap):
    """Truncated power series h(z) = sum a_j z^j, g(z) = sum b_j z^j, j >= 1.

    ``h_coeffs[0]`` is the coefficient of z.  The shorter list is zero-padded
    so both parts share one truncation order.  Evaluation beyond ``rho`` is
    refused.
    """

    h_coeffs: tuple = (1.0,)
    g_coeffs: tuple = (0.0,)
    rho: float = 0.95

    def __post_init__(self):
        hc = [complex(c) for c in self.h_coeffs]
        gc = [complex(c) for c in self.g_coeffs]
        n = max(len(hc), len(gc), 1)
        hc += [0j] * (n - len(hc))
        gc += [0j] * (n - len(gc))
        if not 0.0 < self.rho <= 1.0:
            raise DomainError(f"reliable radius must lie in (0, 1], got {self.rho!r}")
        object.__setattr__(self, "h_coeffs", tuple(hc))
        object.__setattr__(self, "g_coeffs", tuple(gc))

    @property
    def domain_radius(self):
        return self.rho

    @staticmethod
    def _poly(coeffs, z):
        # coeffs[j] multiplies z^(j+1)
        return z * np.polyval(np.array(coeffs[::-1]), z)

    @staticmethod
    def _dpoly(coeffs, z):
        d = [(j + 1) * c for j, c in enumerate(coeffs)]
        return np.polyval(np.array(d[::-1]), z)

    def h(self, z):
        return self._poly(self.h_coeffs, z)

    def g(self, z):
        return self._poly(self.g_coeffs, z)

    def dh(self, z):
        return self._dpoly(self.h_coeffs, z)

    def dg(self, z):
        return self._dpoly(self.g_coeffs, z)

    @property
    def is_analytic(self):
        return all(c == 0 for c in self.g_coeffs)

    def params(self):
        return {"rho": self.rho}

    def to_dict(self):
        d = super().to_dict()
        d["h_coeffs"] = [_cplx_pair(c) for c in self.h_coeffs]
        d["g_coeffs"] = [_cplx_pair(c) for c in self.g_coeffs]
        return d


@dataclass(frozen=True)
class Affine(HarmonicMap):
    """The affine deformation (f + eps conj(f)) / D of a base map.

    D = 1 + eps g'(0) when ``normalize`` is set, else 1.  In terms of the
    parts: H = (h + eps g)/D and G = (g + conj(eps) h)/conj(D).
    """

    base: HarmonicMap
    eps: complex = 0j
    normalize: bool = True

    def __post_init__(self):
        object.__setattr__(self, "eps", complex(self.eps))
        if not abs(self.eps) < 1.0:
            raise DomainError(f"affine parameter must satisfy |eps| < 1, got {self.eps!r}")

    @cached_property
    def denom(self):
        if not self.normalize:
            return 1 + 0j
        d = 1 + self.eps * complex(self.base.dg(0j))
        if abs(d) < 1e-14:
            raise DegeneracyError("affine normalizer 1 + eps g'(0) vanishes")
        return d

    @property
    def domain_radius(self):
        return self.base.domain_radius

    def in_domain(self, z):
        return self.base.in_domain(z)

    @property
    def covers_disk(self):
        return self.base.covers_disk

    def h(self, z):
        return (self.base.h(z) + self.eps * self.base.g(z)) / self.denom

    def g(self, z):
        return (self.base.g(z) + self.eps.conjugate() * self.base.h(z)) / self.denom.conjugate()

    def dh(self, z):
        return (self.base.dh(z) + self.eps * self.base.dg(z)) / self.denom

    def dg(self, z):
        return (self.base.dg(z) + self.eps.conjugate() * self.base.dh(z)) / self.denom.conjugate()

    def derivs(self, z):
        bh, bg = self.base.derivs(z)
        return (bh + self.eps * bg) / self.denom, (bg + self.eps.conjugate() * bh) / self.denom.conjugate()

    @property
    def is_analytic(self):
        return self.eps == 0 and self.base.is_analytic

    def params(self):
        return {"base": self.base.to_dict(), "eps": _cplx_pair(self.eps), "normalize": self.normalize}


@dataclass(frozen=True)
class ScaledCombo(HarmonicMap):
    """(b + sign*k*conj(b)) / (1 + sign*k) for an analytic base b.

    sign = -1 gives f_n = (k_n - k conj(k_n))/(1 - k); sign = +1 gives
    (h_a + k conj(h_a))/(1 + k).  Both satisfy a_1 + a_{-1} = 1 and have the
    constant dilatation sign*k.
    """

    base: HarmonicMap
    k: float
    sign: int = 1

    def __post_init__(self):
        if not 0.0 <= self.k < 1.0:
            raise DomainError(f"ScaledCombo requires k in [0, 1), got {self.k!r}")
        if self.sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {self.sign!r}")
        if not self.base.is_analytic:
            raise DomainError("ScaledCombo requires an analytic base map")
        object.__setattr__(self, "k", float(self.k))

    @property
    def scale(self):
        return 1.0 / (1.0 + self.sign * self.k)

    @property
    def Q(self):
        return (1.0 + self.k) / (1.0 - self.k)

    @property
    def domain_radius(self):
        return self.base.domain_radius

    def in_domain(self, z):
        return self.base.in_domain(z)

    @property
    def covers_disk(self):
        return self.base.covers_disk

    def h(self, z):
        return self.scale * self.base.h(z)

    def g(self, z):
        return (self.sign * self.k * self.scale) * self.base.h(z)

    def dh(self, z):
        return self.scale * self.base.dh(z)

    def dg(self, z):
        return (self.sign * self.k * self.scale) * self.base.dh(z)

    def derivs(self, z):
        bh = self.base.dh(z)
        return self.scale * bh, (self.sign * self.k * self.scale) * bh

    @property
    def is_analytic(self):
        return self.k == 0.0

    def params(self):
        return {"base": self.base.to_dict(), "k": self.k, "sign": self.sign}


@dataclass(frozen=True)
class AnalyticPart(HarmonicMap):
    """The analytic part h of a base map f = h + conj(g), as a map on its own."""

    base: HarmonicMap

    @property
    def domain_radius(self):
        return self.base.domain_radius

    def in_domain(self, z):
        return self.base.in_domain(z)

    @property
    def covers_disk(self):
        return self.base.covers_disk

    def h(self, z):
        return self.base.h(z)

    def dh(self, z):
        return self.base.dh(z)

    def g(self, z):
        return 0 * z

    dg = g

    @property
    def is_analytic(self):
        return True

    def params(self):
        return {"base": self.base.to_dict()}


KOEBE_NORMALIZATIONS = ("analytic-deriv", "directional-deriv")


@dataclass(frozen=True)
class Koebe(HarmonicMap):
    """Koebe transform F(z) = (f(phi(z)) - f(phi(0))) / N, phi(z) = e^{i theta}(z + a)/(1 + conj(a) z).

    N = h'(phi(0)) phi'(0) for ``analytic-deriv``, or
    N = d_theta f(phi(0)) |phi'(0)| for ``directional-deriv``.
    """

    base: HarmonicMap
    a: complex = 0j
    theta: float = 0.0
    normalization: str = "directional-deriv"

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "theta", float(self.theta))
        if not abs(self.a) < 1.0:
            raise DomainError(f"Koebe transform requires |a| < 1, got {self.a!r}")
        if self.normalization not in KOEBE_NORMALIZATIONS:
            raise DomainError(f"unknown normalization {self.normalization!r}")

    @cached_property
    def _rot(self):
        return cmath.exp(1j * self.theta)

    @cached_property
    def center(self):
        return self._rot * self.a

    @cached_property
    def _h0(self):
        return complex(self.base.h(self.center))

    @cached_property
    def _g0(self):
        return complex(self.base.g(self.center))

    @cached_property
    def N(self):
        c = self.center
        dphi0 = self._rot * (1 - abs(self.a) ** 2)
        if self.normalization == "analytic-deriv":
            n = complex(self.base.dh(c)) * dphi0
        else:
            n = directional_derivative(self.base, c, self.theta) * abs(dphi0)
        if abs(n) < 1e-300:
            raise DegeneracyError("Koebe transform normalizer vanishes")
        return n

    def _phi(self, z):
        return self._rot * (z + self.a) / (1 + self.a.conjugate() * z)

    def _dphi(self, z):
        return self._rot * (1 - abs(self.a) ** 2) / (1 + self.a.conjugate() * z) ** 2

    @property
    def covers_disk(self):
        return self.base.covers_disk

    def in_domain(self, z):
        inside = np.abs(z) < 1.0
        if self.base.covers_disk:
            return inside
        w = np.where(inside, self._phi(np.where(inside, z, 0)), 0)
        return inside & self.base.in_domain(w)

    def h(self, z):
        return (self.base.h(self._phi(z)) - self._h0) / self.N

    def g(self, z):
        return (self.base.g(self._phi(z)) - self._g0) / self.N.conjugate()

    def dh(self, z):
        return self.base.dh(self._phi(z)) * self._dphi(z) / self.N

    def dg(self, z):
        return self.base.dg(self._phi(z)) * self._dphi(z) / self.N.conjugate()

    def derivs(self, z):
        bh, bg = self.base.derivs(self._phi(z))
        dphi = self._dphi(z)
        return bh * dphi / self.N, bg * dphi / self.N.conjugate()

    @property
    def is_analytic(self):
        return self.base.is_analytic

    def params(self):
        return {
            "base": self.base.to_dict(),
            "a": _cplx_pair(self.a),
            "theta": self.theta,
            "normalization": self.normalization,
        }


def identity():
    """The identity map as a one-term series."""
    return Series((1.0,), (0.0,), rho=1.0)


# -- checked operations ------------------------------------------------------


def _check(f, z):
    z = _as_complex(z)
    ok = f.in_domain(z)
    if not np.all(ok):
        raise DomainError(f"point(s) outside the domain of {type(f).__name__} (radius {f.domain_radius})")
    return z


def evaluate(f, z):
    """f(z) = h(z) + conj(g(z))."""
    z = _check(f, z)
    return f.h(z) + np.conj(f.g(z))


def deriv_h(f, z):
    """h'(z)."""
    return f.dh(_check(f, z))


def deriv_g(f, z):
    """g'(z)."""
    return f.dg(_check(f, z))


def dilatation(f, z):
    """The complex dilatation omega(z) = g'(z)/h'(z)."""
    z = _check(f, z)
    hp = f.dh(z)
    if np.any(np.abs(hp) == 0.0):
        raise DegeneracyError("h'(z) vanishes; dilatation undefined")
    return f.dg(z) / hp


def jacobian(f, z):
    """J_f(z) = |h'(z)|^2 - |g'(z)|^2."""
    z = _check(f, z)
    return np.abs(f.dh(z)) ** 2 - np.abs(f.dg(z)) ** 2


def directional_derivative(f, z, theta):
    """d_theta f(z) = h'(z) e^{i theta} + conj(g'(z) e^{i theta})."""
    z = _check(f, z)
    e = np.exp(1j * np.asarray(theta, dtype=float))
    return f.dh(z) * e + np.conj(f.dg(z) * e)


def koebe_transform(f, a, theta=0.0, normalization="directional-deriv"):
    """Koebe transform of ``f`` by the automorphism e^{i theta}(z + a)/(1 + conj(a) z)."""
    return Koebe(f, complex(a), float(theta), normalization)


def inverse_automorphism(a, theta):
    """Parameters (a', theta') of the inverse of e^{i theta}(z + a)/(1 + conj(a) z)."""
    a = complex(a)
    return -a * cmath.exp(1j * theta), -float(theta)


def affine_transform(f, eps, normalize=True):
    """Affine deformation (f + eps conj(f)) / (1 + eps g'(0))."""
    return Affine(f, complex(eps), normalize)


def analytic_part(f):
    """The analytic part h of f, as a map."""
    if f.is_analytic:
        return f
    return AnalyticPart(f)


def qc_constant(f, n_radii=200, n_angles=256, r_max=0.999):
    """Grid estimate of sup |omega| over the disk |z| <= r_max.

    Exact for constant-dilatation maps; otherwise a lower estimate of the
    supremum over the full disk that depends on the stated grid.
    """
    r_max = min(float(r_max), f.domain_radius * (1 - 1e-12))
    r = np.linspace(0.0, r_max, int(n_radii))
    th = np.linspace(0.0, 2 * math.pi, int(n_angles), endpoint=False)
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    return float(np.max(np.abs(dilatation(f, z))))


def normalizations(f):
    """Which coefficient normalizations f satisfies: subset of {'f(0)=0', 'a1=1', 'a1+a-1=1'}."""
    tags = set()
    if abs(complex(evaluate(f, 0j))) < NORM_TOL:
        tags.add("f(0)=0")
    a1 = complex(f.dh(0j))
    am1 = complex(f.dg(0j)).conjugate()
    if abs(a1 - 1) < NORM_TOL:
        tags.add("a1=1")
    if abs(a1 + am1 - 1) < NORM_TOL:
        tags.add("a1+a-1=1")
    return frozenset(tags)


# -- JSON descriptors ----------------------------------------------------------

VARIANTS = {
    cls.__name__: cls
    for cls in (PommerenkeKn, HAlpha, HarmonicKoebe, Series, Affine, ScaledCombo, AnalyticPart, Koebe)
}


def map_to_dict(f):
    """Descriptor {variant, params[, h_coeffs, g_coeffs]}; complex numbers as [re, im]."""
    return f.to_dict()


def map_from_dict(d):
    """Inverse of :func:`map_to_dict`."""
    try:
        name = d["variant"]
    except (KeyError, TypeError):
        raise DomainError("map descriptor needs a 'variant' field") from None
    if name not in VARIANTS:
        raise DomainError(f"unknown map variant {name!r}; expected one of {sorted(VARIANTS)}")
    p = dict(d.get("params") or {})
    if "base" in p:
        p["base"] = map_from_dict(p["base"])
    if name == "Series":
        return Series(
            tuple(_from_pair(c) for c in d.get("h_coeffs", [[1, 0]])),
            tuple(_from_pair(c) for c in d.get("g_coeffs", [[0, 0]])),
            rho=float(p.get("rho", 0.95)),
        )
    for key in ("eps", "a"):
        if key in p:
            p[key] = _from_pair(p[key])
    try:
        return VARIANTS[name](**p)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name}: {exc}") from None
