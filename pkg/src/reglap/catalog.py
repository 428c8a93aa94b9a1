"""Closed-form constants and the explicit power-type test functions whose
operator images are known, used to cross-check the operator module.

Constants follow the conventions:
  A(n,-alpha) = alpha * 2^{alpha-1} * Gamma((n+alpha)/2)
                / (pi^{n/2} * Gamma(1-alpha/2))
  gamma(alpha,p)    = int_0^1 (t^p-1)(1-t^{alpha-p-1})(1-t)^{-1-alpha} dt
  gammabar(alpha,p) = same numerator over (1+t)^{1+alpha}
  C(n,alpha,p)  = A * (omega_{n-1}/2) * B((alpha+1)/2,(n-1)/2) * gamma
  S(n,alpha)    = hemisphere moment of y_n^alpha (Dirac convention at n=1)
  Lambda        = (p*A/alpha) * I(p) * S          (killed / full space)
  Lambdabar     = (A/alpha) * (1 + p*I(p)) * S    (regional half-space)
with I(p) = int_0^1 (y^{alpha-p-1} - y^{p-1}) |y-1|^{-alpha} dy.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .quadrature import (DomainError, QuadratureSpec, beta_fn, gamma_fn,
                         integrate_singular)


class ConvergenceError(RuntimeError):
    """A constant's quadrature failed to converge; carries the result."""

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


def _check_alpha(alpha):
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"alpha must lie in (0,2), got {alpha}")


def normalization_constant(n, alpha):
    """A(n,-alpha), the PV normalization of the fractional Laplacian."""
    _check_alpha(alpha)
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n}")
    return (alpha * 2.0 ** (alpha - 1.0) * gamma_fn((n + alpha) / 2.0)
            / (math.pi ** (n / 2.0) * gamma_fn(1.0 - alpha / 2.0)))


def sphere_measure(m):
    """Surface measure of the unit sphere S^{m-1} in R^m; 2 when m = 1."""
    if m < 1:
        raise DomainError("sphere_measure needs m >= 1")
    return 2.0 * math.pi ** (m / 2.0) / gamma_fn(m / 2.0)


def lateral_factor(n, alpha):
    """K_n = (omega_{n-1}/2) * B((alpha+1)/2, (n-1)/2); K_1 = 1.

    The constant produced by integrating |x-y|^{-n-alpha} over the lateral
    coordinates, reducing half-space integrals to one dimension:
    int_{R^{n-1}} (|z|^2 + s^2)^{-(n+alpha)/2} dz = K_n |s|^{-1-alpha}.
    """
    _check_alpha(alpha)
    if n == 1:
        return 1.0
    return 0.5 * sphere_measure(n - 1) * beta_fn((alpha + 1.0) / 2.0,
                                                 (n - 1.0) / 2.0)


def _converged_value(result, what):
    if not result.converged:
        raise ConvergenceError(
            f"{what} quadrature did not converge "
            f"(error estimate {result.error_estimate:.2e})", result)
    return result.value


def gamma_coeff(alpha, p):
    """gamma(alpha, p); integrable for p in (-1, alpha).

    Split at 1/2 with the strong (1-t)^{1-alpha} singularity mapped to the
    origin via w = 1-t, evaluated in cancellation-free form.
    """
    _check_alpha(alpha)
    if not (-1.0 < p < alpha):
        raise DomainError(f"gamma_coeff needs p in (-1, alpha), got {p}")
    q = alpha - p - 1.0
    if q == 0.0:
        return 0.0

    def lower(t):
        return (t ** p - 1.0) * (1.0 - t ** q) * (1.0 - t) ** (-1.0 - alpha)

    def upper(w):
        lt = np.log1p(-w)
        return (np.expm1(p * lt) / w) * (-np.expm1(q * lt) / w) \
            * w ** (1.0 - alpha)

    s1 = integrate_singular(
        lower, 0.0, 0.5, QuadratureSpec(endpoint_exponents=(min(p, q), 0.0)))
    s2 = integrate_singular(
        upper, 0.0, 0.5,
        QuadratureSpec(endpoint_exponents=(1.0 - alpha, 0.0)))
    _converged_value(s1, "gamma lower half")
    _converged_value(s2, "gamma upper half")
    return s1.value + s2.value


def gamma_bar_coeff(alpha, p):
    """gammabar(alpha, p): the (1+t)^{-1-alpha} variant, no singularity
    at t = 1."""
    _check_alpha(alpha)
    if not (-1.0 < p < alpha):
        raise DomainError(f"gamma_bar_coeff needs p in (-1, alpha), got {p}")
    q = alpha - p - 1.0

    def f(t):
        return (t ** p - 1.0) * (1.0 - t ** q) * (1.0 + t) ** (-1.0 - alpha)

    s = integrate_singular(
        f, 0.0, 1.0, QuadratureSpec(endpoint_exponents=(min(p, q, 0.0), 0.0)))
    return _converged_value(s, "gamma_bar")


def c_half_space(n, alpha, p):
    """C(n,alpha,p): regional half-space image constant of w_p."""
    if n < 2:
        raise DomainError("c_half_space uses the omega_{n-1} convention "
                          "and needs n >= 2")
    return (normalization_constant(n, alpha) * lateral_factor(n, alpha)
            * gamma_coeff(alpha, p))


def c_half_space_reflected(n, alpha, p):
    """The gammabar-based constant for the pure reflected-part kernel
    |x-y|^{n+alpha}/|x-ybar|^{n+alpha} acting on w_p."""
    return (normalization_constant(n, alpha) * lateral_factor(n, alpha)
            * gamma_bar_coeff(alpha, p))


def _gamma_bar_pv(alpha, p):
    """int_0^infty (s^p - 1)(1+s)^{-1-alpha} ds, the full-line form of the
    reflected-part constant; equals gammabar by the s -> 1/s symmetry.
    Kept as an independent cross-check oracle."""
    from .quadrature import integrate_to_infinity
    f = lambda s: (s ** p - 1.0) * (1.0 + s) ** (-1.0 - alpha)
    s1 = integrate_singular(
        f, 0.0, 1.0, QuadratureSpec(endpoint_exponents=(p, 0.0)))
    s2 = integrate_to_infinity(f, 1.0, 1.0 + alpha - p)
    _converged_value(s1, "gamma_bar_pv lower")
    _converged_value(s2, "gamma_bar_pv tail")
    return s1.value + s2.value


def hemisphere_moment(n, alpha):
    """S(n,alpha) = int over the upper unit hemisphere of y_n^alpha.

    n = 1 uses the Dirac convention (value 1); n >= 2 reduces to a Beta
    function: omega_{n-1} * B((alpha+1)/2, (n-1)/2) / 2.
    """
    _check_alpha(alpha)
    if n == 1:
        return 1.0
    return 0.5 * sphere_measure(n - 1) * beta_fn((alpha + 1.0) / 2.0,
                                                 (n - 1.0) / 2.0)


def i_coeff(alpha, p):
    """I(p) = int_0^1 (y^{alpha-p-1} - y^{p-1}) |y-1|^{-alpha} dy."""
    _check_alpha(alpha)
    if not (0.0 < p < alpha):
        raise DomainError(f"i_coeff needs p in (0, alpha), got {p}")
    a1 = alpha - p - 1.0
    a2 = p - 1.0
    if a1 == a2:
        return 0.0

    def lower(y):
        return (y ** a1 - y ** a2) * (1.0 - y) ** (-alpha)

    def upper(w):
        lt = np.log1p(-w)
        return (np.exp(a2 * lt) * np.expm1((a1 - a2) * lt) / w
                * w ** (1.0 - alpha))

    s1 = integrate_singular(
        lower, 0.0, 0.5,
        QuadratureSpec(endpoint_exponents=(min(a1, a2), 0.0)))
    s2 = integrate_singular(
        upper, 0.0, 0.5,
        QuadratureSpec(endpoint_exponents=(1.0 - alpha, 0.0)))
    _converged_value(s1, "i_coeff lower half")
    _converged_value(s2, "i_coeff upper half")
    return s1.value + s2.value


def lambda_killed(n, alpha, p):
    """Lambda(n,alpha,p): full-space image constant of w_p (killed case)."""
    return (p * normalization_constant(n, alpha) / alpha * i_coeff(alpha, p)
            * hemisphere_moment(n, alpha))


def lambda_regional(n, alpha, p):
    """Lambdabar(n,alpha,p): regional half-space image constant of w_p."""
    return (normalization_constant(n, alpha) / alpha
            * (1.0 + p * i_coeff(alpha, p)) * hemisphere_moment(n, alpha))


@dataclass(frozen=True)
class ConstantsTable:
    n: int
    alpha: float
    p: float
    a_norm: float
    omega: float
    beta_factor: float
    gamma: float
    gamma_bar: float
    c_halfspace: float
    hemisphere: float
    lambda_killed: float
    lambda_regional: float


def constants_table(n, alpha, p):
    """All the closed-form constants for one (n, alpha, p) triple."""
    omega = sphere_measure(n - 1) if n >= 2 else float("nan")
    bf = beta_fn((alpha + 1.0) / 2.0, (n - 1.0) / 2.0) if n >= 2 \
        else float("nan")
    c_hs = c_half_space(n, alpha, p) if n >= 2 else float("nan")
    lk = lambda_killed(n, alpha, p) if 0.0 < p < alpha else float("nan")
    lr = lambda_regional(n, alpha, p) if 0.0 < p < alpha else float("nan")
    return ConstantsTable(
        n=n, alpha=alpha, p=p,
        a_norm=normalization_constant(n, alpha),
        omega=omega, beta_factor=bf,
        gamma=gamma_coeff(alpha, p),
        gamma_bar=gamma_bar_coeff(alpha, p),
        c_halfspace=c_hs,
        hemisphere=hemisphere_moment(n, alpha),
        lambda_killed=lk,
        lambda_regional=lr,
    )


# ---------------------------------------------------------------------------
# explicit test functions


class PowerFunction:
    """Power-type test function with known structure.

    kind "w":   w_p(y) = y_n^p on the half-space, 0 below it.
    kind "h":   h_p(y) = (y_n - Gamma(y~))^p * 1{|y~| < lateral_cutoff}.
    kind "u":   u_p(y) = h_p with the cutoff ball B(center, 2/3) instead.
    Calling the object evaluates it at a point.
    """

    def __init__(self, kind, p, domain=None, lateral_cutoff=2.0,
                 ball_center=None, ball_radius=2.0 / 3.0):
        if kind not in ("w", "h", "u"):
            raise ValueError(f"unknown PowerFunction kind {kind!r}")
        self.kind = kind
        self.p = float(p)
        self.domain = domain
        self.lateral_cutoff = float(lateral_cutoff)
        self.ball_radius = float(ball_radius)
        self.ball_center = (None if ball_center is None
                            else np.asarray(ball_center, dtype=float))

    def height(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "w" or self.domain is None:
            return float(y[-1])
        return geometry.height(self.domain, y)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        h = self.height(y)
        if h <= 0.0:
            return 0.0
        if self.kind == "w":
            return h ** self.p
        if self.kind == "h":
            if np.linalg.norm(y[:-1]) >= self.lateral_cutoff:
                return 0.0
            return h ** self.p
        # kind "u"
        c = (np.zeros_like(y) if self.ball_center is None
             else self.ball_center)
        if np.linalg.norm(y - c) >= self.ball_radius:
            return 0.0
        return h ** self.p

    def many(self, Y):
        """Vectorized evaluation over rows of Y."""
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        if self.kind == "w" or self.domain is None:
            h = Y[:, -1].copy()
        else:
            h = geometry.height_many(self.domain, Y)
        mask = h > 0.0
        if self.kind == "h":
            mask &= np.linalg.norm(Y[:, :-1], axis=1) < self.lateral_cutoff
        elif self.kind == "u":
            c = (np.zeros(Y.shape[1]) if self.ball_center is None
                 else self.ball_center)
            mask &= np.linalg.norm(Y - c, axis=1) < self.ball_radius
        out = np.zeros(len(Y))
        out[mask] = h[mask] ** self.p
        return out

    # profile hooks used by the half-space reduced operator path ------

    def profile(self, s):
        """w_p as a function of the vertical coordinate alone ("w" only)."""
        if self.kind != "w":
            raise ValueError("profile is defined for half-space powers only")
        s = np.asarray(s, dtype=float)
        return np.where(s > 0.0, np.abs(s) ** self.p, 0.0)

    def profile_pair_diff(self, t, w):
        """Stable u(t+w) + u(t-w) - 2u(t) for the vertical profile.

        Valid for 0 < w < t.  For moderate w/t the expm1/log1p form keeps
        full relative precision; for small w/t even that drowns in the
        ulp of the first-order terms, so the even binomial series
        2*sum_k binom(p,2k) v^{2k} takes over (it converges like v^2 per
        term and has no cancellation at all).
        """
        t = float(t)
        p = self.p
        w = np.atleast_1d(np.asarray(w, dtype=float))
        v = w / t
        out = np.empty_like(v)
        small = v < 1e-3
        if small.any():
            vs = v[small]
            acc = np.zeros_like(vs)
            coef = 1.0
            vpow = np.ones_like(vs)
            for k in range(1, 9):
                # binom(p, 2k) = binom(p, 2k-2) * (p-2k+2)(p-2k+1)/((2k-1)2k)
                coef *= (p - 2 * k + 2) * (p - 2 * k + 1) \
                    / ((2 * k - 1) * (2 * k))
                vpow = vpow * vs * vs
                term = coef * vpow
                acc += term
                if np.max(np.abs(term)) < 1e-30:
                    break
            out[small] = 2.0 * acc
        big = ~small
        if big.any():
            vb = v[big]
            out[big] = (np.expm1(p * np.log1p(vb))
                        + np.expm1(p * np.log1p(-vb)))
        return t ** p * out


def w_power(p):
    """Half-space power w_p(y) = y_n^p."""
    return PowerFunction("w", p)


def h_power(p, domain, lateral_cutoff=2.0):
    """Graph-height power with lateral cutoff |y~| < lateral_cutoff."""
    return PowerFunction("h", p, domain=domain, lateral_cutoff=lateral_cutoff)


def u_power(p, domain, center=None, radius=2.0 / 3.0):
    """Truncated height power supported on the ball B(center, radius)."""
    return PowerFunction("u", p, domain=domain, ball_center=center,
                         ball_radius=radius)


def smooth_cap(y):
    """C^2 function equal to |y~|^2 inside the unit ball, capped into [1,2]
    outside.

    The transition uses a quintic smoothstep of |y| on [1, 2], which keeps
    two continuous derivatives at both junctions.
    """
    y = np.asarray(y, dtype=float)
    r = float(np.linalg.norm(y))
    lat2 = float(np.sum(y[:-1] ** 2))
    if r < 1.0:
        return lat2
    if r >= 2.0:
        return 1.5
    s = r - 1.0
    blend = s ** 3 * (10.0 - 15.0 * s + 6.0 * s ** 2)
    # lat2 <= r^2 <= 4 here; squash toward the band [1, 2]
    inner = min(max(lat2, 0.0), 2.0)
    return (1.0 - blend) * inner + blend * 1.5


class BarrierFunction:
    """Barrier combinations used for the box hitting bounds.

    v1 = u_{alpha-1} + u_p
    v2 = u_{alpha-1} - u_p/(2 A4^2) + 12 k1^{-2} A4^3 * smooth_cap
    v3 = v2 * 1{|x| < 1/2} + 1{|x| >= 1/2}   (on the domain)
    The constants A4 and k1 are unspecified in the source material beyond
    existence; they are explicit knobs here.
    """

    def __init__(self, kind, alpha, p, domain, a4=2.0, k1=0.25):
        if kind not in ("v1", "v2", "v3"):
            raise ValueError(f"unknown barrier kind {kind!r}")
        self.kind = kind
        self.alpha = float(alpha)
        self.p = float(p)
        self.domain = domain
        self.a4 = float(a4)
        self.k1 = float(k1)
        self._u_lead = u_power(alpha - 1.0, domain)
        self._u_p = u_power(p, domain)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "v1":
            return self._u_lead(y) + self._u_p(y)
        v2 = (self._u_lead(y) - self._u_p(y) / (2.0 * self.a4 ** 2)
              + 12.0 * self.k1 ** -2 * self.a4 ** 3 * smooth_cap(y))
        if self.kind == "v2":
            return v2
        if not geometry.contains(self.domain, y):
            return 0.0
        return v2 if np.linalg.norm(y) < 0.5 else 1.0


def catalog_eval(f, y):
    """Evaluate a catalog function at a point."""
    return float(f(np.asarray(y, dtype=float)))


def catalog_image(f, n, alpha, operator="regional"):
    """Closed-form operator image (constant, exponent) where one exists.

    For w_p the image of the regional half-space operator is
    C(n,alpha,p) * x_n^{p-alpha} (kappa == 1), Lambda * x_n^{p-alpha} for
    the full-space operator, and the gammabar constant for the pure
    reflected kernel.  Height powers h_p/u_p admit only bounds; returns
    None for them.
    """
    if not isinstance(f, PowerFunction) or f.kind != "w":
        return None
    if operator == "regional":
        return (c_half_space(n, alpha, f.p), f.p - alpha)
    if operator == "fullspace":
        return (lambda_killed(n, alpha, f.p), f.p - alpha)
    if operator == "reflected":
        return (c_half_space_reflected(n, alpha, f.p), f.p - alpha)
    raise ValueError(f"unknown operator tag {operator!r}")
