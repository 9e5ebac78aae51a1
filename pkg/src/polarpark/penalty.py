"""Cost-on-control functions and their Legendre-Fenchel transforms.

A penalty eta is a class K-infinity function on [0, a) whose derivative
eta' is also class K-infinity on [0, a); a may be finite or infinite.  Its
Legendre-Fenchel transform is

    lf(r) = integral_0^r (eta')^{-1}(s) ds,

defined for all r >= 0 because (eta')^{-1} maps [0, inf) into [0, a).  The
pair (eta, lf) satisfies the Fenchel-Young equality
lf(eta'(r)) + eta(r) = r * eta'(r), which is what makes the feedback laws
built on these functions optimal for the matching trajectory cost.

Four built-ins are provided:

==================  ==========================  =======================
name                eta'(r)                     (eta')^{-1}(r)
==================  ==========================  =======================
Quadratic           r                           r
HyperbolicCosine    sinh(r)                     arcsinh(r)
LogCosine           tan(r), a = pi/2            arctan(r)
RelayApprox         e/(e^(1/r) - e), a = 1      1/(1 + ln(1 + 1/r))
==================  ==========================  =======================

RelayApprox has no elementary closed form for eta or lf; both are obtained
by quadrature, with cached Hermite tables (built lazily, thread-safe) for
the simulation hot path and exact quadrature available for verification.
Its derivative is infinitely flat at 0 and blows up at r = 1, so its
derivative-inverse saturates at 1: small inputs are nearly free while
magnitudes approaching 1 are infinitely expensive.

User-supplied penalties subclass :class:`PenaltyFunction` and provide eta
and eta_prime; inversion (bracketed root finding) and lf (adaptive
quadrature) then work generically.
"""

from __future__ import annotations

import math
import threading

from scipy.integrate import quad
from scipy.optimize import brentq

_QUAD_TOL = 1e-12


class PenaltyFunction:
    """Behavioral contract for a cost-on-control function.

    Subclasses must define ``eta`` and ``eta_prime`` and set
    ``domain_limit`` (``math.inf`` for globally defined penalties).
    ``inv_eta_prime`` and ``lf`` have numeric defaults; built-ins override
    them with closed forms.  Instances are immutable after construction and
    safe to share across threads.
    """

    name = "custom"
    domain_limit = math.inf

    def eta(self, r: float) -> float:
        raise NotImplementedError

    def eta_prime(self, r: float) -> float:
        raise NotImplementedError

    def inv_eta_prime(self, r: float) -> float:
        """Solve eta_prime(s) = r for s in [0, domain_limit).

        Default: bracketed root finding, tightening toward the domain limit
        until the bracket contains the root (eta' is unbounded as s -> a).
        """
        if r < 0.0:
            raise ValueError(f"inverse argument must be nonnegative, got {r}")
        if r == 0.0:
            return 0.0
        a = self.domain_limit
        if math.isinf(a):
            hi = 1.0
            while self.eta_prime(hi) < r:
                hi *= 2.0
        else:
            hi = 0.999999 * a
            while self.eta_prime(hi) < r:
                hi = a - (a - hi) / 16.0
                if a - hi <= 1e-15 * a:
                    return hi
        return brentq(lambda s: self.eta_prime(s) - r, 0.0, hi, xtol=1e-12, rtol=8.9e-16)

    def lf(self, r: float) -> float:
        """Legendre-Fenchel transform by adaptive quadrature of inv_eta_prime."""
        if r < 0.0:
            raise ValueError(f"lf argument must be nonnegative, got {r}")
        if r == 0.0:
            return 0.0
        val, _ = quad(self.inv_eta_prime, 0.0, r, epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=200)
        return val

    def lf_over_r(self, r: float) -> float:
        """lf(r)/r with the continuous extension 0 at r = 0."""
        if r == 0.0:
            return 0.0
        return self.lf(r) / r

    # Fast variants used inside the simulation loop; identical to the exact
    # forms unless a subclass substitutes cached tables.
    def eta_fast(self, r: float) -> float:
        return self.eta(r)

    def lf_fast(self, r: float) -> float:
        return self.lf(r)

    def lf_over_r_fast(self, r: float) -> float:
        return self.lf_over_r(r)

    def __repr__(self):
        return f"{type(self).__name__}()"


def _check_nonneg(r: float, what: str) -> None:
    if r < 0.0:
        raise ValueError(f"{what} argument must be nonnegative, got {r}")


class Quadratic(PenaltyFunction):
    """eta(r) = r^2/2; the classical quadratic cost, linear feedback."""

    name = "Quadratic"

    def eta(self, r):
        return 0.5 * r * r

    def eta_prime(self, r):
        return r

    def inv_eta_prime(self, r):
        _check_nonneg(r, "inverse")
        return r

    def lf(self, r):
        _check_nonneg(r, "lf")
        return 0.5 * r * r

    def lf_over_r(self, r):
        return 0.5 * r


class HyperbolicCosine(PenaltyFunction):
    """eta(r) = cosh(r) - 1; sublinear (arcsinh) feedback."""

    name = "HyperbolicCosine"

    def eta(self, r):
        return math.cosh(r) - 1.0

    def eta_prime(self, r):
        return math.sinh(r)

    def inv_eta_prime(self, r):
        _check_nonneg(r, "inverse")
        return math.asinh(r)

    def lf(self, r):
        # integral of arcsinh: r*arcsinh(r) - (sqrt(r^2+1) - 1)
        _check_nonneg(r, "lf")
        return r * math.asinh(r) - (math.hypot(r, 1.0) - 1.0)

    def lf_over_r(self, r):
        if r == 0.0:
            return 0.0
        return math.asinh(r) - r / (1.0 + math.hypot(r, 1.0))


class LogCosine(PenaltyFunction):
    """eta(r) = -ln(cos(r)) on [0, pi/2); bounded (arctan) feedback."""

    name = "LogCosine"
    domain_limit = math.pi / 2.0

    def eta(self, r):
        if r >= self.domain_limit:
            return math.inf
        return -math.log(math.cos(r))

    def eta_prime(self, r):
        if r >= self.domain_limit:
            return math.inf
        return math.tan(r)

    def inv_eta_prime(self, r):
        _check_nonneg(r, "inverse")
        return math.atan(r)

    def lf(self, r):
        # integral of arctan: r*arctan(r) - ln(1+r^2)/2
        _check_nonneg(r, "lf")
        return r * math.atan(r) - 0.5 * math.log1p(r * r)

    def lf_over_r(self, r):
        if r == 0.0:
            return 0.0
        return math.atan(r) - 0.5 * math.log1p(r * r) / r


class RelayApprox(PenaltyFunction):
    """Relay-approximating penalty with unit saturation, a = 1.

    eta'(r) = e/(e^(1/r) - e), extended by continuity with eta'(0) = 0; it
    is infinitely flat near the origin and blows up at r = 1.  The
    derivative-inverse has the closed form 1/(1 + ln(1 + 1/r)), which maps
    [0, inf) onto [0, 1) and is what enters the feedback law.  eta and lf
    carry no elementary closed form and are integrated numerically.

    The cached tables honor lf_fast to 1e-9 relative and eta_fast to 1e-9
    absolute / 1e-6 relative (eta is infinitely flat near 0, where only its
    absolute accuracy matters for cost accumulation).
    """

    name = "RelayApprox"
    domain_limit = 1.0

    # Hermite tables: eta on r = 1 - exp(-y) (resolves the blow-up at 1),
    # lf on r = exp(s) (resolves the infinite slope of the inverse at 0).
    _ETA_Y_MAX = 16.0
    _ETA_STEP = 0.002
    _LF_S_MIN = math.log(1e-12)
    _LF_STEP = 0.01

    def __init__(self):
        self._lock = threading.Lock()
        self._eta_table = None
        self._lf_table = None
        self._lf_s_max = math.log(256.0)

    def eta_prime(self, r):
        if r <= 0.0:
            return 0.0
        if r >= 1.0:
            return math.inf
        x = 1.0 / r
        if x > 700.0:
            # e/(e^x - e) ~ e^(1 - x) to within a factor (1 - e^(1-x))
            return math.exp(1.0 - x)
        return math.e / (math.exp(x) - math.e)

    def inv_eta_prime(self, r):
        if r < 0.0:
            raise ValueError(f"inverse argument must be nonnegative, got {r}")
        if r == 0.0:
            return 0.0
        return 1.0 / (1.0 + math.log1p(1.0 / r))

    def eta(self, r):
        if r < 0.0:
            raise ValueError(f"eta argument must be nonnegative, got {r}")
        if r == 0.0:
            return 0.0
        if r >= 1.0:
            return math.inf
        # Integrate in y with r = 1 - exp(-y); the transformed integrand
        # eta'(r)*(1 - r) stays O(1) even as r approaches the blow-up at 1.
        y_max = -math.log1p(-r)
        val, _ = quad(lambda y: self.eta_prime(-math.expm1(-y)) * math.exp(-y),
                      0.0, y_max, epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=200)
        return val

    # -- cached tables ---------------------------------------------------

    def _build_eta_table(self):
        # Cumulative 5-point Gauss-Legendre in y, where r = 1 - exp(-y):
        # d(eta)/dy = eta'(r) * (1 - r) is smooth and O(1) on the whole grid.
        nodes = (-0.9061798459386640, -0.5384693101056831, 0.0,
                 0.5384693101056831, 0.9061798459386640)
        weights = (0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                   0.4786286704993665, 0.2369268850561891)
        h = self._ETA_STEP
        n = int(round(self._ETA_Y_MAX / h))

        def dfdy(y):
            r = -math.expm1(-y)
            return self.eta_prime(r) * (1.0 - r)

        ys = [i * h for i in range(n + 1)]
        vals = [0.0] * (n + 1)
        derivs = [dfdy(y) for y in ys]
        acc = 0.0
        for i in range(n):
            mid = ys[i] + 0.5 * h
            acc += 0.5 * h * sum(w * dfdy(mid + 0.5 * h * t) for w, t in zip(weights, nodes))
            vals[i + 1] = acc
        return h, vals, derivs

    def _build_lf_table(self, s_max):
        nodes = (-0.9061798459386640, -0.5384693101056831, 0.0,
                 0.5384693101056831, 0.9061798459386640)
        weights = (0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                   0.4786286704993665, 0.2369268850561891)
        h = self._LF_STEP
        n = int(math.ceil((s_max - self._LF_S_MIN) / h))

        def dfds(s):
            r = math.exp(s)
            return self.inv_eta_prime(r) * r

        ss = [self._LF_S_MIN + i * h for i in range(n + 1)]
        vals = [0.0] * (n + 1)
        derivs = [dfds(s) for s in ss]
        acc = self.lf(math.exp(self._LF_S_MIN))
        vals[0] = acc
        for i in range(n):
            mid = ss[i] + 0.5 * h
            acc += 0.5 * h * sum(w * dfds(mid + 0.5 * h * t) for w, t in zip(weights, nodes))
            vals[i + 1] = acc
        return h, vals, derivs

    @staticmethod
    def _hermite(x0, h, vals, derivs, x):
        i = int((x - x0) / h)
        if i < 0:
            i = 0
        elif i >= len(vals) - 1:
            i = len(vals) - 2
        xl = x0 + i * h
        t = (x - xl) / h
        f0, f1 = vals[i], vals[i + 1]
        d0, d1 = derivs[i] * h, derivs[i + 1] * h
        t2 = t * t
        t3 = t2 * t
        return ((2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * d0
                + (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * d1)

    def eta_fast(self, r):
        if r <= 0.0:
            return 0.0
        if r >= 1.0:
            return math.inf
        if self._eta_table is None:
            with self._lock:
                if self._eta_table is None:
                    self._eta_table = self._build_eta_table()
        h, vals, derivs = self._eta_table
        y = -math.log1p(-r)
        if y >= self._ETA_Y_MAX:
            return self.eta(r)
        return self._hermite(0.0, h, vals, derivs, y)

    def lf_fast(self, r):
        if r <= 0.0:
            return 0.0
        s = math.log(r)
        if s <= self._LF_S_MIN:
            # lf(r) <= r * inv_eta_prime(r) < 0.05 * r here; the bound is tight
            return r * self.inv_eta_prime(r)
        if s >= self._lf_s_max or self._lf_table is None:
            with self._lock:
                while s >= self._lf_s_max:
                    self._lf_s_max += math.log(4.0)
                    self._lf_table = None
                if self._lf_table is None:
                    self._lf_table = self._build_lf_table(self._lf_s_max)
        h, vals, derivs = self._lf_table
        return self._hermite(self._LF_S_MIN, h, vals, derivs, s)


_BUILTINS = {p.name: p for p in (Quadratic(), HyperbolicCosine(), LogCosine(), RelayApprox())}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_penalty(name: str) -> PenaltyFunction:
    """Look up a built-in penalty by name; raises ValueError for unknown names."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise ValueError(
            f"unknown penalty {name!r}; available: {', '.join(BUILTIN_NAMES)}") from None


def lf_transform(p: PenaltyFunction, r: float) -> float:
    """Legendre-Fenchel transform lf(r) of the penalty p at r >= 0."""
    return p.lf(r)


def inv_eta_prime(p: PenaltyFunction, r: float) -> float:
    """Inverse of the penalty derivative at r >= 0; lands in [0, domain_limit)."""
    return p.inv_eta_prime(r)
