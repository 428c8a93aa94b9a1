"""Jump-density factors kappa(x,y) and sampled checkers for the regularity
conditions they are supposed to satisfy.

Kernels are symmetric, bounded between two positive constants, and may carry
extra structure: a reduced form a + b*|x-y|^{n+alpha}/|x-ybar|^{n+alpha} on
the half-space (used by the fast operator path) and composite-form metadata
(psi1, psi2, C', delta).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import geometry


@dataclass(frozen=True)
class Kernel:
    """Symmetric jump-density factor with two-sided bounds.

    reduced_form, when set, is the pair (a, b) meaning
    kappa(x,y) = a + b * |x-y|^{n+alpha} / |x-ybar|^{n+alpha}
    on the half-space (ybar the reflection of y); this unlocks exact
    dimensional reduction in the operator module.
    """

    eval: object
    c1: float
    c2: float
    name: str = "kernel"
    reduced_form: tuple = None
    composite_parts: tuple = None
    tail_bound: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.c1 <= self.c2):
            raise ValueError("need 0 < C1 <= C2")

    def __call__(self, x, y):
        return float(self.eval(np.asarray(x, float), np.asarray(y, float)))


def kernel_constant():
    """kappa == 1, the homogeneous censored/killed case."""
    return Kernel(eval=lambda x, y: 1.0, c1=1.0, c2=1.0,
                  name="constant", reduced_form=(1.0, 0.0))


def _reflected_ratio(n, alpha, x, y):
    """|x-y|^{n+alpha} / |x-ybar|^{n+alpha} on the half-space.

    Written directly from the flat-boundary reflection ybar = (y~, -y_n);
    the expression is symmetric in (x, y) because |x - ybar| depends on
    y_n + x_n only.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    d2 = float(np.sum((x - y) ** 2))
    lat2 = float(np.sum((x[:-1] - y[:-1]) ** 2))
    dbar2 = lat2 + (x[-1] + y[-1]) ** 2
    if dbar2 == 0.0:
        raise ValueError("reflected distance vanishes: both points on the "
                         "boundary")
    return (d2 / dbar2) ** (0.5 * (n + alpha))


def kernel_halfspace_subordinate(n, alpha):
    """kappa(x,y) = 1 + |x-y|^{n+alpha}/|x-ybar|^{n+alpha} on HalfSpace(n).

    The jump kernel of the subordinate reflected Brownian motion on the
    half-space; bounded between 1 and 2 since |x-y| <= |x-ybar| for
    interior pairs.
    """

    def ev(x, y):
        return 1.0 + _reflected_ratio(n, alpha, x, y)

    return Kernel(eval=ev, c1=1.0, c2=2.0, name="halfspace_subordinate",
                  reduced_form=(1.0, 1.0),
                  composite_parts=(lambda x, y: 1.0, lambda x, y: 1.0,
                                   0.0, math.inf))


def kernel_halfspace_reflected(n, alpha):
    """Just the reflected part |x-y|^{n+alpha}/|x-ybar|^{n+alpha}.

    Unbounded below (it vanishes as points separate vertically), so c1 is
    nominal; used for operator identity checks, not for simulation.
    """

    def ev(x, y):
        return _reflected_ratio(n, alpha, x, y)

    return Kernel(eval=ev, c1=1e-12, c2=1.0, name="halfspace_reflected",
                  reduced_form=(0.0, 1.0))


def kernel_interval_periodic(alpha, truncation):
    """Periodic-reflection kernel on (0,1), truncated at |k| <= truncation.

    kappa(x,y) = sum_k |x-y|^{1+alpha} (|x-y+2k|^{-1-alpha}
                                        + |x+y+2k|^{-1-alpha});
    the k = 0 difference term equals 1, so kappa >= 1.  The dropped tail is
    bounded by 2*(2K-1)^{-alpha}/alpha (integral comparison with
    |x-y|^{1+alpha} <= 1 on the unit interval).
    """
    K = int(truncation)
    if K < 1:
        raise ValueError("truncation must be >= 1")
    tail = 2.0 * (2.0 * K - 1.0) ** (-alpha) / alpha

    def ev(x, y):
        x = float(np.atleast_1d(x)[0])
        y = float(np.atleast_1d(y)[0])
        base = abs(x - y) ** (1.0 + alpha)
        total = 0.0
        for k in range(-K, K + 1):
            d1 = abs(x - y + 2.0 * k)
            d2 = abs(x + y + 2.0 * k)
            if d1 > 0.0:
                total += base / d1 ** (1.0 + alpha)
            if d2 > 0.0:
                total += base / d2 ** (1.0 + alpha)
        return total

    return Kernel(eval=ev, c1=1.0, c2=2.0 + tail, name="interval_periodic",
                  tail_bound=tail)


def sample_interior_pairs(dom, n_pairs, seed, scale=1.0):
    """Quasi-deterministic interior point pairs for the sampled checkers."""
    rng = np.random.default_rng(seed)
    n = dom.n
    pairs = []
    attempts = 0
    while len(pairs) < n_pairs:
        attempts += 1
        if attempts > 200 * n_pairs:
            raise RuntimeError("could not draw interior pairs; check the "
                               "domain/scale combination")
        x = rng.uniform(-scale, scale, size=n)
        y = rng.uniform(-scale, scale, size=n)
        if isinstance(dom, geometry.Ball):
            x = dom.center_array + x * dom.radius / scale
            y = dom.center_array + y * dom.radius / scale
        else:
            x[-1] = abs(x[-1]) + 1e-6
            y[-1] = abs(y[-1]) + 1e-6
        if geometry.contains(dom, x) and geometry.contains(dom, y) \
                and not np.array_equal(x, y):
            pairs.append((x, y))
    return pairs


def check_condition_class(kernel, dom, samples, c1, c2, c3, gamma_exp):
    """Sampled check of condition [C1, C2, C3, gamma].

    Verifies c1 < kappa < c2 and the weighted increment bound
    |kappa(x,y) - kappa(x,x)| < C3 * (rho(x)^gamma or 1) * |x-y| over the
    given sample pairs.  Report-only: returns worst margins, never raises.
    """
    worst_lower = math.inf
    worst_upper = -math.inf
    worst_increment = -math.inf
    worst_pair = None
    for x, y in samples:
        v = kernel(x, y)
        worst_lower = min(worst_lower, v - c1)
        worst_upper = max(worst_upper, v - c2)
        rho = geometry.distance(dom, x)
        weight = max(rho ** gamma_exp, 1.0)
        lhs = abs(kernel(x, y) - kernel(x, x))
        margin = lhs - c3 * weight * float(
            np.linalg.norm(np.asarray(x, float) - np.asarray(y, float)))
        if margin > worst_increment:
            worst_increment = margin
            worst_pair = (np.asarray(x, float), np.asarray(y, float))
    return {
        "n_samples": len(samples),
        "lower_ok": worst_lower > 0.0,
        "upper_ok": worst_upper < 0.0,
        "increment_ok": worst_increment < 0.0,
        "worst_lower_margin": worst_lower,
        "worst_upper_margin": worst_upper,
        "worst_increment_margin": worst_increment,
        "worst_increment_pair": worst_pair,
        "passes": (worst_lower > 0.0 and worst_upper < 0.0
                   and worst_increment < 0.0),
    }


def check_boundary_form(kernel, psi1, psi2, dom, c_prime, delta, samples,
                        n, alpha):
    """Sampled check of the composite boundary form of the kernel.

    Near the boundary (rho(x) < delta) the kernel should satisfy
    |kappa(x,y) - psi1(x,y) - psi2(x,y)*|x-y|^{n+alpha}/|x-ybar|^{n+alpha}|
        <= C' * |x-y|.
    Report-only.
    """
    worst = -math.inf
    used = 0
    worst_pair = None
    for x, y in samples:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        if geometry.distance(dom, x) >= delta:
            continue
        used += 1
        ratio = _reflected_ratio(n, alpha, x, y)
        resid = abs(kernel(x, y) - float(psi1(x, y))
                    - float(psi2(x, y)) * ratio)
        margin = resid - c_prime * float(np.linalg.norm(x - y))
        if margin > worst:
            worst = margin
            worst_pair = (x, y)
    return {
        "n_samples_in_collar": used,
        "worst_margin": worst,
        "worst_pair": worst_pair,
        "passes": used > 0 and worst <= 1e-12,
    }
