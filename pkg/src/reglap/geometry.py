"""Domain geometry: half-spaces, boundary-graph domains, balls, Lipschitz
wedges, and boundary-adapted boxes.

Every domain answers membership, distance-to-boundary, and (where it makes
sense) height, nearest boundary point and reflection queries.  Graph domains
carry the boundary as a callable pair (value, gradient); the built-in family
c*|x~|^beta covers the curved-domain experiments.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize


class AmbiguityError(RuntimeError):
    """Nearest boundary point is not unique at the queried location."""


def _tilde(x):
    """Lateral coordinates: everything but the last component."""
    x = np.asarray(x, dtype=float)
    return x[:-1]


@dataclass(frozen=True)
class BoundaryGraph:
    """Boundary graph y_n = Gamma(y~) with C^{1,beta-1} regularity data.

    value/gradient act on the (n-1)-dim lateral coordinate.  hoelder_order
    is the beta of the C^{1,beta-1} class (beta in (1,2]), hoelder_norm the
    seminorm bound on the gradient increments.
    """

    dimension: int
    value: object
    gradient: object
    hoelder_order: float
    hoelder_norm: float
    normalized: bool = True
    value_many: object = None  # optional vectorized value over (m, n-1) rows

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if not (1.0 < self.hoelder_order <= 2.0):
            raise ValueError("hoelder_order must lie in (1, 2]")
        if self.hoelder_norm < 0:
            raise ValueError("hoelder_norm must be nonnegative")
        if self.normalized:
            z0 = np.zeros(self.dimension - 1)
            if abs(float(self.value(z0))) > 1e-12:
                raise ValueError("normalized graph requires Gamma(0)=0")
            if np.max(np.abs(np.asarray(self.gradient(z0), dtype=float)),
                      initial=0.0) > 1e-12:
                raise ValueError("normalized graph requires grad Gamma(0)=0")

    def check_hoelder(self, grid_points):
        """Worst sampled Hoelder quotient of the gradient over point pairs.

        Returns (worst_quotient, ok) where ok means the quotient never
        exceeds 1.05 * hoelder_norm on the grid.
        """
        pts = [np.atleast_1d(np.asarray(p, dtype=float)) for p in grid_points]
        worst = 0.0
        expo = self.hoelder_order - 1.0
        for i in range(len(pts)):
            gi = np.asarray(self.gradient(pts[i]), dtype=float)
            for j in range(i + 1, len(pts)):
                d = np.linalg.norm(pts[i] - pts[j])
                if d == 0.0:
                    continue
                gj = np.asarray(self.gradient(pts[j]), dtype=float)
                q = np.linalg.norm(gi - gj) / d ** expo
                worst = max(worst, q)
        return worst, worst <= 1.05 * self.hoelder_norm


def graph_zero(n):
    """Flat boundary Gamma == 0 (the half-space as a graph domain)."""
    return BoundaryGraph(
        dimension=n,
        value=lambda z: 0.0,
        gradient=lambda z: np.zeros(n - 1),
        hoelder_order=2.0,
        hoelder_norm=0.0,
        value_many=lambda Z: np.zeros(len(Z)),
    )


def graph_power(n, c, beta):
    """Gamma(z) = c * |z|^beta, the C^{1,beta-1} model graph, beta in (1,2]."""
    if not (1.0 < beta <= 2.0):
        raise ValueError("graph_power needs beta in (1, 2]")

    def value(z):
        return c * np.linalg.norm(np.atleast_1d(z)) ** beta

    def gradient(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        r = np.linalg.norm(z)
        if r == 0.0:
            return np.zeros(n - 1)
        return c * beta * r ** (beta - 2.0) * z

    def value_many(Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        return c * np.linalg.norm(Z, axis=1) ** beta

    # |grad(z1) - grad(z2)| <= c*beta*(something)*|z1-z2|^{beta-1}; the
    # constant 3 is a safe bound for the radial power family
    return BoundaryGraph(n, value, gradient, beta, 3.0 * abs(c) * beta,
                         value_many=value_many)


@dataclass(frozen=True)
class HalfSpace:
    """Open upper half-space {x_n > 0} in R^n."""

    n: int


@dataclass(frozen=True)
class Ball:
    """Open ball B(center, radius)."""

    center: tuple
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @property
    def n(self):
        return len(self.center)

    @property
    def center_array(self):
        return np.asarray(self.center, dtype=float)


@dataclass(frozen=True)
class GraphDomain:
    """Open region above a boundary graph: {x_n > Gamma(x~)}."""

    graph: BoundaryGraph

    @property
    def n(self):
        return self.graph.dimension


@dataclass(frozen=True)
class LipschitzWedge:
    """Open region above the Lipschitz cone {x_n > slope * |x~|}."""

    n: int
    slope: float

    def __post_init__(self):
        if self.slope <= 0:
            raise ValueError("slope must be positive")


def height_many(dom, Y):
    """Vectorized height over rows of Y (graph-type domains)."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if isinstance(dom, HalfSpace):
        return Y[:, -1].copy()
    if isinstance(dom, LipschitzWedge):
        return Y[:, -1] - dom.slope * np.linalg.norm(Y[:, :-1], axis=1)
    if isinstance(dom, GraphDomain):
        g = dom.graph
        if g.value_many is not None:
            gv = np.asarray(g.value_many(Y[:, :-1]), dtype=float)
        else:
            gv = np.array([float(g.value(z)) for z in Y[:, :-1]])
        return Y[:, -1] - gv
    raise TypeError("height_many is defined for graph-type domains only")


def contains_many(dom, Y):
    """Vectorized open-set membership over rows of Y."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if isinstance(dom, Ball):
        return np.linalg.norm(Y - dom.center_array, axis=1) < dom.radius
    return height_many(dom, Y) > 0.0


def contains(dom, x):
    """Open-set membership test, exact by the variant formula."""
    x = np.asarray(x, dtype=float)
    if isinstance(dom, HalfSpace):
        return bool(x[-1] > 0.0)
    if isinstance(dom, Ball):
        return bool(np.linalg.norm(x - dom.center_array) < dom.radius)
    if isinstance(dom, GraphDomain):
        return bool(x[-1] > float(dom.graph.value(_tilde(x))))
    if isinstance(dom, LipschitzWedge):
        return bool(x[-1] > dom.slope * np.linalg.norm(_tilde(x)))
    raise TypeError(f"unknown domain variant: {type(dom)!r}")


def height(dom, x):
    """Height x_n - Gamma(x~) above the boundary graph (graph-type domains)."""
    x = np.asarray(x, dtype=float)
    if isinstance(dom, HalfSpace):
        return float(x[-1])
    if isinstance(dom, GraphDomain):
        return float(x[-1] - dom.graph.value(_tilde(x)))
    if isinstance(dom, LipschitzWedge):
        return float(x[-1] - dom.slope * np.linalg.norm(_tilde(x)))
    raise TypeError("height is defined for graph-type domains only")


def _wedge_distance(dom, x):
    """Distance to the cone boundary {x_n = slope*|x~|}, closed form.

    Reduce to the (r, x_n) half-plane with r = |x~| >= 0.  The boundary is
    the ray {(s, slope*s), s >= 0} plus, for n = 2, its mirror image.
    """
    lam = dom.slope
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(_tilde(x)))
    h = float(x[-1])
    root = math.sqrt(1.0 + lam * lam)
    # foot of the perpendicular on the ray (s, lam*s) is at
    # s* = (r + lam*h)/(1+lam^2) >= 0, so no vertex clamp is needed
    # on the near side
    d_near = abs(lam * r - h) / root
    if dom.n == 2:
        # the far branch of the wedge: ray (s, -lam*s), s <= 0 in signed
        # coordinates; foot s* = (r - lam*h)/(1+lam^2), clamp to the vertex
        s_far = (r - lam * h) / (1.0 + lam * lam)
        if s_far <= 0.0:
            d_far = abs(-lam * r - h) / root
        else:
            d_far = math.hypot(r, h)
        return min(d_near, d_far)
    # n >= 3: the cone is a single rotational surface; the reduced ray
    # already covers all boundary directions
    return d_near


def _graph_nearest_lateral(dom, x, n_starts=5, check_unique=True):
    """Lateral coordinate of the nearest boundary point on a GraphDomain.

    Multistart quasi-Newton minimization of |x - (z, Gamma(z))|^2, seeded
    from a coarse grid; falls back to grid refinement if the optimizer
    fails.  Raises AmbiguityError when two separated minimizers tie.
    """
    g = dom.graph
    x = np.asarray(x, dtype=float)
    xt = _tilde(x)
    xn = float(x[-1])
    m = g.dimension - 1

    def objective(z):
        dz = xt - z
        dh = xn - float(g.value(z))
        return float(dz @ dz + dh * dh)

    def grad(z):
        dh = xn - float(g.value(z))
        return -2.0 * (xt - z) - 2.0 * dh * np.asarray(
            g.gradient(z), dtype=float)

    # coarse grid window sized by the vertical gap
    h0 = abs(xn - float(g.value(xt))) + 1e-12
    span = 2.0 * h0
    axes = [np.linspace(c - span, c + span, 21) for c in xt]
    if m == 1:
        grid = axes[0].reshape(-1, 1)
    else:
        mesh = np.meshgrid(*axes, indexing="ij")
        grid = np.stack([mm.ravel() for mm in mesh], axis=1)
    vals = np.array([objective(z) for z in grid])
    order = np.argsort(vals)
    seeds = [grid[i] for i in order[:n_starts]] + [xt]

    cands = []
    approx = False
    for z0 in seeds:
        res = optimize.minimize(objective, z0, jac=grad, method="L-BFGS-B",
                                options={"ftol": 1e-16, "gtol": 1e-12})
        if res.success:
            cands.append((float(res.fun), np.asarray(res.x, dtype=float)))
    if not cands:
        # grid + refine fallback, flagged approximate
        warnings.warn("nearest-point optimizer failed; using refined grid "
                      "search (approximate)", RuntimeWarning)
        approx = True
        best = grid[order[0]]
        width = span / 10.0
        for _ in range(12):
            axes = [np.linspace(c - width, c + width, 11) for c in best]
            if m == 1:
                fine = axes[0].reshape(-1, 1)
            else:
                mesh = np.meshgrid(*axes, indexing="ij")
                fine = np.stack([mm.ravel() for mm in mesh], axis=1)
            fv = np.array([objective(z) for z in fine])
            best = fine[int(np.argmin(fv))]
            width /= 5.0
        cands = [(objective(best), best)]

    cands.sort(key=lambda t: t[0])
    fbest, zbest = cands[0]
    dbest = math.sqrt(max(fbest, 0.0))
    if check_unique:
        for fv, z in cands[1:]:
            d = math.sqrt(max(fv, 0.0))
            if (d - dbest < 1e-9
                    and np.linalg.norm(z - zbest) > 1e-6 * (1 + dbest)):
                raise AmbiguityError(
                    f"two nearest boundary points within tolerance at {x}")
    return zbest, dbest, approx


def distance(dom, x):
    """rho(x) = dist(x, boundary of dom) for x inside dom."""
    x = np.asarray(x, dtype=float)
    if isinstance(dom, HalfSpace):
        return float(x[-1])
    if isinstance(dom, Ball):
        return float(dom.radius - np.linalg.norm(x - dom.center_array))
    if isinstance(dom, LipschitzWedge):
        return _wedge_distance(dom, x)
    if isinstance(dom, GraphDomain):
        _, d, _ = _graph_nearest_lateral(dom, x, check_unique=False)
        return d
    raise TypeError(f"unknown domain variant: {type(dom)!r}")


def nearest_boundary_point(dom, x):
    """The unique nearest boundary point xi(x); AmbiguityError on ties."""
    x = np.asarray(x, dtype=float)
    if isinstance(dom, HalfSpace):
        out = x.copy()
        out[-1] = 0.0
        return out
    if isinstance(dom, Ball):
        c = dom.center_array
        v = x - c
        r = np.linalg.norm(v)
        if r == 0.0:
            raise AmbiguityError("ball center is equidistant from the "
                                 "whole boundary sphere")
        return c + dom.radius * v / r
    if isinstance(dom, LipschitzWedge):
        lam = dom.slope
        xt = _tilde(x)
        r = float(np.linalg.norm(xt))
        if r == 0.0:
            raise AmbiguityError("wedge axis points have a ring of nearest "
                                 "boundary points")
        # for interior points the near face always wins: its distance is
        # (h - lam*r)/sqrt(1+lam^2) versus (h + lam*r)/sqrt(1+lam^2) for
        # the far face, so only r == 0 is ambiguous (handled above)
        s_star = (r + lam * float(x[-1])) / (1.0 + lam * lam)
        out = np.empty_like(x)
        out[:-1] = xt * (s_star / r)
        out[-1] = lam * s_star
        return out
    if isinstance(dom, GraphDomain):
        z, _, _ = _graph_nearest_lateral(dom, x)
        out = np.empty_like(x)
        out[:-1] = z
        out[-1] = float(dom.graph.value(z))
        return out
    raise TypeError(f"unknown domain variant: {type(dom)!r}")


def reflect(dom, x):
    """Reflection point 2*xi(x) - x across the nearest boundary point."""
    x = np.asarray(x, dtype=float)
    return 2.0 * nearest_boundary_point(dom, x) - x


@dataclass(frozen=True)
class BoxRegion:
    """Boundary-adapted box {0 < y_n - Gamma(y~) < a, |y~ - base~| < r}."""

    base: tuple
    a: float
    r: float
    parent: object

    def __post_init__(self):
        if self.a <= 0 or self.r <= 0:
            raise ValueError("box height and radius must be positive")
        object.__setattr__(self, "base", tuple(float(c) for c in self.base))


def box(base, a, r, parent):
    """Construct the box Delta(base, a, r) over a graph-type domain."""
    base = np.asarray(base, dtype=float)
    hb = height(parent, base)
    if abs(hb) > 1e-9:
        raise ValueError(f"box base must sit on the boundary graph "
                         f"(height {hb:.2e})")
    return BoxRegion(tuple(base), float(a), float(r), parent)


def box_contains(region, y):
    """Membership in the boundary-adapted box."""
    y = np.asarray(y, dtype=float)
    h = height(region.parent, y)
    lat = np.linalg.norm(_tilde(y) - _tilde(np.asarray(region.base)))
    return bool(0.0 < h < region.a and lat < region.r)
