"""Special functions and one-dimensional quadrature with endpoint
singularities.

The integrals driving everything else in this package have algebraic
endpoint behaviour ``(t-a)^e`` with a *known* exponent ``e > -1``, so the
integrator grades geometrically toward a declared singular endpoint and uses
Gauss-Legendre panels on each graded cell.  The error estimate is the
difference between two panel orders plus a bound on the dropped sliver at
the singular endpoint.
"""

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Argument outside the mathematical domain of a special function."""


def gamma_fn(x):
    """Euler Gamma for x > 0."""
    if x <= 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def beta_fn(a, b):
    """Beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b) for a, b > 0."""
    if a <= 0 or b <= 0:
        raise DomainError(f"beta_fn requires a, b > 0, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and grading controls for integrate_singular.

    endpoint_exponents declare the integrable algebraic behaviour of the
    integrand at (a, b): f ~ (t-a)^{e0} near a and (b-t)^{e1} near b,
    each exponent > -1.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 400
    endpoint_exponents: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")
        e0, e1 = self.endpoint_exponents
        if e0 <= -1 or e1 <= -1:
            raise ValueError(
                f"endpoint exponents must be > -1 for integrability, "
                f"got {self.endpoint_exponents}")


@dataclass
class IntegralResult:
    value: float
    error_estimate: float
    converged: bool
    evaluations: int = 0


_GL_CACHE = {}


def _gauss(npts):
    try:
        return _GL_CACHE[npts]
    except KeyError:
        x, w = np.polynomial.legendre.leggauss(npts)
        _GL_CACHE[npts] = (x, w)
        return x, w


def _eval(f, nodes, counter):
    counter[0] += len(nodes)
    try:
        out = np.asarray(f(nodes), dtype=float)
        if out.shape != nodes.shape:
            raise TypeError
    except (TypeError, ValueError):
        # scalar-only integrand; fall back to a loop
        out = np.array([float(f(t)) for t in nodes])
    return out


def _graded_cells(a, b, e0, e1, ratio, max_cells):
    """Cell edges on (a,b), graded toward each singular endpoint.

    Returns (edges, sliver_lo, sliver_hi): the edges cover
    (a + sliver_lo, b - sliver_hi); slivers are zero where no grading was
    needed.  Grading depth is limited by float resolution at a nonzero
    endpoint; an endpoint at exactly 0 can be graded arbitrarily deep, so
    callers should place hard singularities at 0 when they can.
    """
    length = b - a
    half = length / 2.0

    def grading_depth(endpoint, e):
        if e >= 0 and float(e).is_integer():
            return 0
        # grade until the dropped sliver's contribution ~ cell^(1+e)
        # falls below ~1e-16 of the half-interval scale
        depth = int(math.ceil(16.0 / ((1.0 + e) * -math.log10(ratio)))) + 1
        if endpoint != 0.0:
            # offsets below float spacing of the endpoint collapse
            min_off = abs(endpoint) * 4e-16
            resolvable = int(math.floor(math.log(min_off / half, ratio)))
            depth = min(depth, max(resolvable, 1))
        # graded cells are cheap; cap by double-precision range, not by
        # the subdivision budget (which is for adaptive refinement)
        return min(depth, 360)

    d0 = grading_depth(a, e0)
    d1 = grading_depth(b, e1)

    if d0:
        lo_edges = [a + half * ratio ** j for j in range(d0, -1, -1)]
        sliver_lo = half * ratio ** d0
    else:
        lo_edges = [a, a + half]
        sliver_lo = 0.0
    if d1:
        hi_edges = [b - half * ratio ** j for j in range(0, d1 + 1)]
        sliver_hi = half * ratio ** d1
    else:
        hi_edges = [b - half, b]
        sliver_hi = 0.0

    edges = np.array(lo_edges + hi_edges[1:])
    edges = np.unique(edges)
    return edges, sliver_lo, sliver_hi


def integrate_singular(f, a, b, spec=None):
    """Integrate f over (a, b) with declared endpoint singularities.

    The integrand must be finite on the open interval; behaviour at the
    endpoints no worse than the exponents declared in spec. Vectorized f
    (ndarray -> ndarray) is used when available.
    """
    if spec is None:
        spec = QuadratureSpec()
    if not b > a:
        if b == a:
            return IntegralResult(0.0, 0.0, True, 0)
        raise ValueError(f"need b > a, got ({a}, {b})")

    e0, e1 = spec.endpoint_exponents
    counter = [0]
    ratio = 0.15

    edges, sliver_lo, sliver_hi = _graded_cells(
        a, b, e0, e1, ratio, spec.max_subdivisions)

    refine = 1
    while True:
        lo_val = 0.0
        hi_val = 0.0
        for i in range(len(edges) - 1):
            ca, cb = edges[i], edges[i + 1]
            mid = 0.5 * (ca + cb)
            hw = 0.5 * (cb - ca)
            for npts, acc in ((12, "lo"), (24, "hi")):
                x, w = _gauss(npts)
                vals = _eval(f, mid + hw * x, counter)
                s = hw * float(np.dot(w, vals))
                if acc == "lo":
                    lo_val += s
                else:
                    hi_val += s

        # sliver bound: |f| ~ C (t-a)^e near a; estimate C from the nearest
        # evaluated cell edge and bound the dropped piece by C d^(1+e)/(1+e)
        sliver_err = 0.0
        if sliver_lo > 0:
            t0 = a + sliver_lo * 1.5
            fa = abs(float(np.atleast_1d(f(np.array([t0])))[0]))
            c_coef = fa / (sliver_lo * 0.5) ** e0 if e0 < 0 else fa
            sliver_err += abs(c_coef) * sliver_lo ** (1.0 + e0) / (1.0 + e0)
        if sliver_hi > 0:
            t1 = b - sliver_hi * 1.5
            fb = abs(float(np.atleast_1d(f(np.array([t1])))[0]))
            c_coef = fb / (sliver_hi * 0.5) ** e1 if e1 < 0 else fb
            sliver_err += abs(c_coef) * sliver_hi ** (1.0 + e1) / (1.0 + e1)

        err = abs(hi_val - lo_val) + sliver_err
        tol = max(spec.abs_tol, spec.rel_tol * abs(hi_val))
        if err <= tol:
            return IntegralResult(hi_val, err, True, counter[0])
        if len(edges) - 1 >= spec.max_subdivisions or refine >= 4:
            return IntegralResult(hi_val, err, False, counter[0])
        # halve every cell and retry
        new_edges = np.empty(2 * len(edges) - 1)
        new_edges[0::2] = edges
        new_edges[1::2] = 0.5 * (edges[:-1] + edges[1:])
        edges = new_edges
        refine += 1


def integrate_to_infinity(f, a, decay_exponent, spec=None):
    """Integrate f over (a, infinity) where f(t) ~ t^{-decay_exponent} with
    decay_exponent > 1.

    Substitutes t = a/v, v in (0, 1], turning the tail into an integral with
    endpoint exponent decay_exponent - 2 > -1 at v = 0.  A sequence of
    exponents may be given when f is a sum of power tails; grading then
    targets the fractional term even if the leading decay is an integer.
    """
    if a <= 0:
        raise ValueError("integrate_to_infinity requires a > 0")
    decays = np.atleast_1d(np.asarray(decay_exponent, dtype=float))
    if np.any(decays <= 1):
        raise ValueError("tail decay exponent must exceed 1 for integrability")
    if spec is None:
        spec = QuadratureSpec()
    exps = decays - 2.0
    frac = exps[np.abs(exps - np.round(exps)) > 1e-12]
    endpoint = float(frac.min()) if frac.size else float(exps.min())
    sub_spec = QuadratureSpec(
        abs_tol=spec.abs_tol,
        rel_tol=spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
        endpoint_exponents=(endpoint, 0.0),
    )

    def g(v):
        v = np.asarray(v, dtype=float)
        return f(a / v) * a / v ** 2

    return integrate_singular(g, 0.0, 1.0, sub_spec)
