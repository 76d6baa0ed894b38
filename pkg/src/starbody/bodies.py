"""Body representations, primitive bodies, and elementary body algebra.

A ``StarBody`` is an immutable wrapper around a vectorised radial evaluator
``rho(directions) -> radii``; a ``ConvexBodyH`` wraps a support evaluator.
Primitive constructors (balls, ellipsoids, lp balls, cubes, polytope hulls,
perturbed balls) install exact closed-form evaluators, exact radial bounds
and, where available, exact uniform samplers.  Derived operations compose
evaluators and never mutate their inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import SphereGrid, omega

__all__ = [
    "StarBody",
    "ConvexBodyH",
    "Ellipsoid",
    "LinearMap",
    "apply_map",
    "scale_body",
    "radial_sum",
    "union_body",
    "polar_body",
    "support_of_star",
    "convexity_defect_radial",
    "convexity_defect_support",
    "tabulate_star_body",
    "make_ball",
    "make_ellipsoid",
    "make_lp_ball",
    "make_cube",
    "make_polytope_hull",
    "make_perturbed_ball",
    "body_from_spec",
    "load_body_spec",
    "catalog_bodies",
]

DEGENERATE_RADIAL_RATIO = 1e6


def _as_directions(dirs, dim):
    """Coerce input to an (m, dim) array of unit rows."""
    arr = np.atleast_2d(np.asarray(dirs, dtype=float))
    if arr.shape[1] != dim:
        raise ValueError(f"directions have dimension {arr.shape[1]}, body has {dim}")
    norms = np.linalg.norm(arr, axis=1)
    if np.any(norms < 1e-300):
        raise ValueError("zero vector is not a direction")
    return arr / norms[:, None], norms


class StarBody:
    """Symmetric star body given by a positive radial function.

    ``radial_fn`` must accept an (m, n) array of unit rows and return (m,)
    positive values.  Optional attributes carried for efficiency: an exact
    upper bound on rho (``radial_bound``), an exact uniform sampler
    ``sampler(count, rng)``, and the backing ``Ellipsoid`` when the body is
    one (so downstream code can use closed forms).
    """

    def __init__(self, dim, radial_fn, label="", radial_bound=None, sampler=None, ellipsoid=None):
        self.dim = int(dim)
        self._radial = radial_fn
        self.label = label
        self.radial_bound = radial_bound
        self.sampler = sampler
        self.ellipsoid = ellipsoid
        self._grid_cache = {}

    def radial(self, dirs):
        """rho_K along the given directions (rows are normalised first)."""
        unit, _ = _as_directions(dirs, self.dim)
        out = np.asarray(self._radial(unit), dtype=float)
        return out if out.ndim else out.reshape(1)

    def radial_on(self, grid: SphereGrid):
        """Radial values on a grid, cached per grid object."""
        key = id(grid)
        if key not in self._grid_cache:
            self._grid_cache[key] = self.radial(grid.nodes)
        return self._grid_cache[key]

    def gauge(self, points):
        """Minkowski functional ||x||_K = ||x||_2 / rho_K(x/||x||_2)."""
        arr = np.atleast_2d(np.asarray(points, dtype=float))
        norms = np.linalg.norm(arr, axis=1)
        out = np.zeros(len(arr))
        nz = norms > 1e-300
        if np.any(nz):
            out[nz] = norms[nz] / self.radial(arr[nz])
        return out

    def contains(self, points, tol=1e-12):
        return self.gauge(points) <= 1.0 + tol

    def __repr__(self):
        return f"StarBody(dim={self.dim}, label={self.label!r})"


class ConvexBodyH:
    """Symmetric convex body given by its support function."""

    def __init__(self, dim, support_fn, label=""):
        self.dim = int(dim)
        self._support = support_fn
        self.label = label

    def support(self, dirs):
        unit, _ = _as_directions(dirs, self.dim)
        out = np.asarray(self._support(unit), dtype=float)
        return out if out.ndim else out.reshape(1)

    def __repr__(self):
        return f"ConvexBodyH(dim={self.dim}, label={self.label!r})"


class Ellipsoid:
    """Centered ellipsoid {x : x^T A^{-1} x <= 1} with A symmetric positive
    definite.  rho(theta) = (theta^T A^{-1} theta)^{-1/2},
    h(theta) = (theta^T A theta)^{1/2}, volume = omega_n sqrt(det A)."""

    def __init__(self, shape, label=""):
        a = np.asarray(shape, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"shape matrix must be square, got {a.shape}")
        if np.abs(a - a.T).max() > 1e-10 * max(1.0, np.abs(a).max()):
            raise ValueError("shape matrix must be symmetric")
        evals = np.linalg.eigvalsh(a)
        if evals.min() <= 0:
            raise ValueError(f"shape matrix not positive definite (min eig {evals.min():.3e})")
        self.shape_matrix = 0.5 * (a + a.T)
        self.inverse_shape = np.linalg.inv(self.shape_matrix)
        self.dim = a.shape[0]
        self.label = label

    @staticmethod
    def ball(n, radius=1.0, label=""):
        return Ellipsoid(radius**2 * np.eye(n), label=label or f"ball(r={radius})")

    def radial(self, dirs):
        unit, _ = _as_directions(dirs, self.dim)
        q = np.einsum("ij,jk,ik->i", unit, self.inverse_shape, unit)
        return q**-0.5

    def support(self, dirs):
        unit, _ = _as_directions(dirs, self.dim)
        q = np.einsum("ij,jk,ik->i", unit, self.shape_matrix, unit)
        return q**0.5

    def volume(self) -> float:
        return omega(self.dim) * float(np.sqrt(np.linalg.det(self.shape_matrix)))

    def principal_map(self) -> np.ndarray:
        """Symmetric T with T B_2^n = E (the matrix square root of A)."""
        evals, evecs = np.linalg.eigh(self.shape_matrix)
        return evecs @ np.diag(np.sqrt(evals)) @ evecs.T

    def section(self, subspace) -> float:
        """Exact volume of the central section by a subspace (frame (n, m))."""
        f = subspace.frame
        q = f.T @ self.inverse_shape @ f
        return omega(f.shape[1]) / float(np.sqrt(np.linalg.det(q)))

    def as_star_body(self) -> StarBody:
        bound = float(np.sqrt(np.linalg.eigvalsh(self.shape_matrix).max()))
        t = self.principal_map()

        def sampler(count, rng, _t=t, _n=self.dim):
            g = rng.standard_normal((count, _n))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            r = rng.random(count) ** (1.0 / _n)
            return (g * r[:, None]) @ _t.T

        return StarBody(
            self.dim,
            self.radial,
            label=self.label or "ellipsoid",
            radial_bound=bound,
            sampler=sampler,
            ellipsoid=self,
        )

    def as_convex_body(self) -> ConvexBodyH:
        return ConvexBodyH(self.dim, self.support, label=self.label or "ellipsoid")

    def __repr__(self):
        return f"Ellipsoid(dim={self.dim}, label={self.label!r})"


class LinearMap:
    """Invertible linear map with cached determinant and inverse."""

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got {m.shape}")
        det = float(np.linalg.det(m))
        if abs(det) < 1e-12 * max(1.0, np.abs(m).max() ** m.shape[0]):
            raise ValueError(f"matrix is numerically singular (det={det:.3e})")
        self.matrix = m
        self.det = det
        self.inverse = np.linalg.inv(m)
        roundtrip = np.abs(m @ self.inverse - np.eye(m.shape[0])).max()
        if roundtrip > 1e-10:
            raise ValueError(f"inverse round-trip defect {roundtrip:.2e} exceeds 1e-10")
        self.dim = m.shape[0]

    @staticmethod
    def identity(n):
        return LinearMap(np.eye(n))


def _coerce_map(transform, dim) -> LinearMap:
    if isinstance(transform, LinearMap):
        t = transform
    else:
        t = LinearMap(transform)
    if t.dim != dim:
        raise ValueError(f"map dim {t.dim} != body dim {dim}")
    return t


def apply_map(body: StarBody, transform) -> StarBody:
    """Linear image T K of a star body: ||x||_{TK} = ||T^{-1} x||_K."""
    t = _coerce_map(transform, body.dim)
    if body.ellipsoid is not None:
        e = body.ellipsoid
        shape = t.matrix @ e.shape_matrix @ t.matrix.T
        return Ellipsoid(shape, label=f"map({body.label})").as_star_body()
    t_inv = t.inverse

    def radial_fn(unit, _inner=body, _ti=t_inv):
        y = unit @ _ti.T
        norms = np.linalg.norm(y, axis=1)
        return _inner.radial(y) / norms

    bound = None
    if body.radial_bound is not None:
        bound = float(np.linalg.norm(t.matrix, 2)) * body.radial_bound
    sampler = None
    if body.sampler is not None:
        sampler = lambda count, rng, _s=body.sampler, _m=t.matrix: _s(count, rng) @ _m.T
    return StarBody(
        body.dim,
        radial_fn,
        label=f"map({body.label})",
        radial_bound=bound,
        sampler=sampler,
    )


def scale_body(body: StarBody, factor: float) -> StarBody:
    """Dilation t K (closed form, keeps exact samplers and bounds)."""
    if factor <= 0:
        raise ValueError(f"scale factor must be positive, got {factor}")
    if body.ellipsoid is not None:
        return Ellipsoid(
            factor**2 * body.ellipsoid.shape_matrix, label=f"{body.label}*{factor:.4g}"
        ).as_star_body()
    sampler = None
    if body.sampler is not None:
        sampler = lambda count, rng, _s=body.sampler, _f=factor: _f * _s(count, rng)
    return StarBody(
        body.dim,
        lambda unit, _inner=body, _f=factor: _f * _inner.radial(unit),
        label=f"{body.label}*{factor:.4g}",
        radial_bound=None if body.radial_bound is None else factor * body.radial_bound,
        sampler=sampler,
    )


def _common_dim(bodies):
    if not bodies:
        raise ValueError("need at least one body")
    dim = bodies[0].dim
    for b in bodies:
        if b.dim != dim:
            raise ValueError(f"mixed dimensions: {b.dim} != {dim}")
    return dim


def radial_sum(bodies, k: int) -> StarBody:
    """k-radial sum: rho^k = sum of the summands' rho^k."""
    bodies = list(bodies)
    dim = _common_dim(bodies)
    if k < 1:
        raise ValueError(f"radial sum order must be >= 1, got {k}")
    if len(bodies) == 1:
        return bodies[0]

    def radial_fn(unit, _bodies=tuple(bodies), _k=k):
        acc = np.zeros(len(unit))
        for b in _bodies:
            acc += b.radial(unit) ** _k
        return acc ** (1.0 / _k)

    bound = None
    if all(b.radial_bound is not None for b in bodies):
        bound = float(sum(b.radial_bound**k for b in bodies) ** (1.0 / k))
    return StarBody(dim, radial_fn, label=f"radial_sum_{k}[{len(bodies)}]", radial_bound=bound)


def union_body(bodies) -> StarBody:
    """Union of star bodies: rho = pointwise max of the radials."""
    bodies = list(bodies)
    dim = _common_dim(bodies)
    if len(bodies) == 1:
        return bodies[0]

    def radial_fn(unit, _bodies=tuple(bodies)):
        return np.max(np.stack([b.radial(unit) for b in _bodies]), axis=0)

    bound = None
    if all(b.radial_bound is not None for b in bodies):
        bound = float(max(b.radial_bound for b in bodies))
    return StarBody(dim, radial_fn, label=f"union[{len(bodies)}]", radial_bound=bound)


def polar_body(body: ConvexBodyH, grid: SphereGrid | None = None, check=True) -> StarBody:
    """Polar of a convex body: rho_{K poliar}(theta) = 1/h_K(theta)."""
    if check:
        if grid is None:
            raise ValueError("polar_body needs a grid to validate the convexity witness")
        if len(grid) < 100 * body.dim:
            raise ValueError(
                f"grid too coarse for polar: {len(grid)} nodes < 100*n = {100 * body.dim}"
            )
        defect = convexity_defect_support(body, grid)
        if defect > 1e-6:
            raise ValueError(f"convexity witness fails (defect {defect:.2e}); polar rejected")
    return StarBody(
        body.dim,
        lambda unit, _b=body: 1.0 / _b.support(unit),
        label=f"polar({body.label})",
    )


def support_of_star(body: StarBody, grid: SphereGrid) -> ConvexBodyH:
    """Support function of the convex hull of the grid sampling of K:
    h(theta) = max_i rho(x_i) <x_i, theta> (an inner approximation)."""
    if len(grid) < 100 * body.dim:
        raise ValueError(
            f"grid too coarse for support recovery: {len(grid)} nodes < {100 * body.dim}"
        )
    points = grid.nodes * body.radial_on(grid)[:, None]

    def support_fn(unit, _pts=points):
        out = np.empty(len(unit))
        step = max(1, 4_000_000 // max(len(_pts), 1))
        for i in range(0, len(unit), step):
            out[i : i + step] = (unit[i : i + step] @ _pts.T).max(axis=1)
        return out

    return ConvexBodyH(body.dim, support_fn, label=f"hull({body.label})")


def _pair_indices(count, limit, rng):
    if count * count <= limit:
        i, j = np.triu_indices(count, k=1)
        return i, j
    m = int(limit)
    return rng.integers(0, count, m), rng.integers(0, count, m)


def convexity_defect_radial(body: StarBody, grid: SphereGrid, pair_limit=4_000_000, seed=0):
    """Max violation of midpoint convexity for boundary points on the grid.

    For boundary points x, y the midpoint (x+y)/2 must lie in the body; the
    defect is max(gauge(midpoint) - 1), so values <= 0 certify the witness.
    """
    rng = np.random.default_rng(seed)
    rho = body.radial_on(grid)
    pts = grid.nodes * rho[:, None]
    i, j = _pair_indices(len(pts), pair_limit, rng)
    mids = 0.5 * (pts[i] + pts[j])
    norms = np.linalg.norm(mids, axis=1)
    ok = norms > 1e-9 * rho.max()
    defect = -np.inf
    step = 500_000
    idx = np.nonzero(ok)[0]
    for s in range(0, len(idx), step):
        chunk = idx[s : s + step]
        defect = max(defect, float((body.gauge(mids[chunk]) - 1.0).max()))
    return defect


def convexity_defect_support(body: ConvexBodyH, grid: SphereGrid, pair_limit=2_000_000, seed=0):
    """Max violation of subadditivity of the 1-homogeneous extension of h
    over grid node pairs, relative to the body scale."""
    rng = np.random.default_rng(seed)
    h = body.support(grid.nodes)
    scale = h.max()
    i, j = _pair_indices(len(grid), pair_limit, rng)
    sums = grid.nodes[i] + grid.nodes[j]
    norms = np.linalg.norm(sums, axis=1)
    ok = norms > 1e-9
    i, j, sums, norms = i[ok], j[ok], sums[ok], norms[ok]
    defect = -np.inf
    step = 500_000
    for s in range(0, len(i), step):
        sl = slice(s, s + step)
        hw = body.support(sums[sl]) * norms[sl]
        defect = max(defect, float((hw - h[i[sl]] - h[j[sl]]).max() / scale))
    return defect


def tabulate_star_body(body: StarBody, grid: SphereGrid, neighbors: int = 4) -> StarBody:
    """Freeze a star body onto a grid with inverse-squared-angle interpolation
    between the nearest antipodal-pair representatives.  Useful when the
    exact evaluator is expensive (section-volume bodies, solver outputs)."""
    half = grid.half
    values = body.radial_on(grid)[: len(half)]
    return interpolated_star_body(
        body.dim, half, values, label=f"tab({body.label})", neighbors=neighbors
    )


def interpolated_star_body(dim, half_nodes, values, label="", neighbors=4) -> StarBody:
    n = dim
    area_per_node = n * omega(n) / 2.0 / max(len(half_nodes), 1)
    spacing = area_per_node ** (1.0 / (n - 1))

    def radial_fn(unit, _h=half_nodes, _v=values, _eps=0.2 * spacing, _p=neighbors):
        sim = np.abs(unit @ _h.T)
        np.clip(sim, 0.0, 1.0, out=sim)
        dist = np.arccos(sim)
        idx = np.argpartition(dist, min(_p, dist.shape[1] - 1), axis=1)[:, :_p]
        d = np.take_along_axis(dist, idx, axis=1)
        wgt = 1.0 / (d * d + _eps * _eps)
        wgt /= wgt.sum(axis=1, keepdims=True)
        return np.sum(wgt * _v[idx], axis=1)

    return StarBody(dim, radial_fn, label=label, radial_bound=float(np.max(values)))


# ---------------------------------------------------------------------------
# Primitive bodies


def make_ball(n: int, radius: float = 1.0, label: str = "") -> StarBody:
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    return Ellipsoid.ball(n, radius, label=label or f"ball(r={radius:g})").as_star_body()


def make_ellipsoid(shape_matrix, label: str = "") -> StarBody:
    return Ellipsoid(shape_matrix, label=label or "ellipsoid").as_star_body()


def make_lp_ball(n: int, p: float, scale: float = 1.0, label: str = "") -> StarBody:
    """Scaled lp ball {||x||_p <= scale}; exact sampler via the Gamma trick."""
    if p <= 0:
        raise ValueError(f"lp ball needs p > 0, got {p}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")

    def radial_fn(unit, _p=p, _s=scale):
        return _s / (np.abs(unit) ** _p).sum(axis=1) ** (1.0 / _p)

    def sampler(count, rng, _p=p, _s=scale, _n=n):
        g = rng.gamma(1.0 / _p, size=(count, _n)) ** (1.0 / _p)
        g *= rng.choice([-1.0, 1.0], size=(count, _n))
        y = g / np.linalg.norm(g, ord=_p, axis=1, keepdims=True)
        return _s * y * rng.random((count, 1)) ** (1.0 / _n)

    # max of rho: at axis vectors for p <= 2, at the diagonal for p > 2
    bound = scale if p <= 2 else scale * n ** (0.5 - 1.0 / p)
    return StarBody(
        n,
        radial_fn,
        label=label or f"lp(p={p:g})",
        radial_bound=float(bound) * (1 + 1e-12),
        sampler=sampler,
    )


def make_cube(n: int, half_side: float = 1.0, label: str = "") -> StarBody:
    if half_side <= 0:
        raise ValueError(f"half_side must be positive, got {half_side}")

    def radial_fn(unit, _s=half_side):
        return _s / np.abs(unit).max(axis=1)

    def sampler(count, rng, _s=half_side, _n=n):
        return rng.uniform(-_s, _s, size=(count, _n))

    return StarBody(
        n,
        radial_fn,
        label=label or f"cube(s={half_side:g})",
        radial_bound=half_side * math.sqrt(n),
        sampler=sampler,
    )


def make_polytope_hull(points, label: str = "") -> StarBody:
    """Symmetric convex hull of the given points (and their negatives)."""
    from scipy.spatial import ConvexHull

    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("polytope hull needs an (m, n) point array")
    sym = np.vstack([pts, -pts])
    hull = ConvexHull(sym)
    # facets: a.x <= b with b > 0 (origin interior); symmetrise exactly
    a = hull.equations[:, :-1]
    b = -hull.equations[:, -1]
    if b.min() <= 1e-12:
        raise ValueError("origin is not interior to the hull; not a star body")
    a = np.vstack([a, -a])
    b = np.concatenate([b, b])

    def radial_fn(unit, _a=a, _b=b):
        ratios = (unit @ _a.T) / _b
        return 1.0 / ratios.max(axis=1)

    return StarBody(
        pts.shape[1],
        radial_fn,
        label=label or f"hull[{len(pts)}]",
        radial_bound=float(np.linalg.norm(sym, axis=1).max()),
    )


def make_perturbed_ball(n: int, radius: float = 1.0, quadratic=(), quartic=(), label: str = "") -> StarBody:
    """Ball with a smooth even polynomial perturbation of the radial function:
    rho = radius * (1 + sum_j q_j (theta_j^2 - 1/n) + sum_j c_j (theta_j^4 - 3/(n(n+2)))).
    Coefficients are validated so rho stays positive."""
    quad = np.asarray(list(quadratic), dtype=float)
    quart = np.asarray(list(quartic), dtype=float)
    if len(quad) > n or len(quart) > n:
        raise ValueError("more perturbation coefficients than axes")
    total = np.abs(quad).sum() + np.abs(quart).sum()
    if total >= 0.9:
        raise ValueError(f"perturbation too large (sum |c| = {total:.3f} >= 0.9)")

    def radial_fn(unit, _r=radius, _q=quad, _c=quart, _n=n):
        out = np.ones(len(unit))
        if len(_q):
            out += (unit[:, : len(_q)] ** 2 - 1.0 / _n) @ _q
        if len(_c):
            out += (unit[:, : len(_c)] ** 4 - 3.0 / (_n * (_n + 2))) @ _c
        return _r * out

    return StarBody(
        n,
        radial_fn,
        label=label or "perturbed-ball",
        radial_bound=radius * (1.0 + total),
    )


# ---------------------------------------------------------------------------
# Body specs (human-writable JSON descriptions) and the fixed catalog


class SpecError(ValueError):
    """Raised when a body spec is malformed; carries the offending field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"spec field '{field}': {message}")


def _spec_param(params, name, kind, default=None, required=False):
    if name not in params:
        if required:
            raise SpecError(f"params.{name}", "missing")
        return default
    value = params[name]
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"params.{name}", f"cannot parse {value!r}: {exc}") from exc


def body_from_spec(spec: dict):
    """Instantiate (StarBody, ConvexBodyH | None) from a spec dictionary.

    Spec format: {"type": ..., "dim": n, "params": {...}, "label": ...}.
    Convex support views are attached when a closed form exists.
    """
    if not isinstance(spec, dict):
        raise SpecError("<root>", "spec must be a JSON object")
    kind = spec.get("type")
    if kind is None:
        raise SpecError("type", "missing")
    dim = spec.get("dim")
    if not isinstance(dim, int) or dim < 2:
        raise SpecError("dim", f"need an integer >= 2, got {dim!r}")
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise SpecError("params", "must be an object")
    label = spec.get("label", kind)

    if kind == "ball":
        r = _spec_param(params, "radius", float, default=1.0)
        if r <= 0:
            raise SpecError("params.radius", "must be positive")
        e = Ellipsoid.ball(dim, r, label=label)
        return e.as_star_body(), e.as_convex_body()
    if kind == "ellipsoid":
        mat = _spec_param(params, "matrix", np.asarray, required=True)
        try:
            e = Ellipsoid(np.asarray(mat, dtype=float), label=label)
        except ValueError as exc:
            raise SpecError("params.matrix", str(exc)) from exc
        if e.dim != dim:
            raise SpecError("params.matrix", f"matrix is {e.dim}x{e.dim}, dim says {dim}")
        return e.as_star_body(), e.as_convex_body()
    if kind == "lp_ball":
        p = _spec_param(params, "p", float, required=True)
        scale = _spec_param(params, "scale", float, default=1.0)
        try:
            star = make_lp_ball(dim, p, scale, label=label)
        except ValueError as exc:
            raise SpecError("params.p", str(exc)) from exc
        convex = None
        if p >= 1.0:
            q = np.inf if p == 1.0 else p / (p - 1.0)
            convex = ConvexBodyH(
                dim,
                lambda unit, _q=q, _s=scale: _s * np.linalg.norm(unit, ord=_q, axis=1),
                label=label,
            )
        return star, convex
    if kind == "cube":
        s = _spec_param(params, "half_side", float, default=1.0)
        if s <= 0:
            raise SpecError("params.half_side", "must be positive")
        star = make_cube(dim, s, label=label)
        convex = ConvexBodyH(
            dim, lambda unit, _s=s: _s * np.abs(unit).sum(axis=1), label=label
        )
        return star, convex
    if kind == "polytope_hull":
        pts = _spec_param(params, "points", np.asarray, required=True)
        pts = np.asarray(pts, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != dim:
            raise SpecError("params.points", f"need an (m, {dim}) array")
        star = make_polytope_hull(pts, label=label)
        sym = np.vstack([pts, -pts])
        convex = ConvexBodyH(
            dim, lambda unit, _v=sym: (unit @ _v.T).max(axis=1), label=label
        )
        return star, convex
    if kind == "perturbed_ball":
        r = _spec_param(params, "radius", float, default=1.0)
        quad = params.get("quadratic", ())
        quart = params.get("quartic", ())
        try:
            star = make_perturbed_ball(dim, r, quad, quart, label=label)
        except ValueError as exc:
            raise SpecError("params.quadratic", str(exc)) from exc
        return star, None
    raise SpecError("type", f"unknown body type {kind!r}")


def load_body_spec(path):
    with open(path) as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError("<json>", str(exc)) from exc
    return body_from_spec(spec)


def _rotation_for(n: int) -> np.ndarray:
    """Fixed deterministic rotation used by the catalog (no RNG involved)."""
    m = np.sin(1.0 + 3.0 * np.arange(n)[:, None] + 7.0 * np.arange(n)[None, :])
    q, r = np.linalg.qr(m)
    return q * np.sign(np.diag(r))


def catalog_bodies(n: int):
    """The fixed, versioned test-body catalog at dimension n.

    Returns a list of (name, StarBody, ConvexBodyH | None).  Acceptance
    numbers are tied to this list; new bodies enter only via spec files.
    """
    axes = np.ones(n)
    axes[0] = 2.0
    e1 = Ellipsoid(np.diag(axes**2), label="ellipsoid-axis")
    q = _rotation_for(n)
    semi = 1.0 + 0.5 * np.arange(n) / max(n - 1, 1)
    e2 = Ellipsoid(q @ np.diag(semi**2) @ q.T, label="ellipsoid-rotated")
    entries = [
        ("ball", *body_from_spec({"type": "ball", "dim": n, "params": {}, "label": "ball"})),
        ("ellipsoid-axis", e1.as_star_body(), e1.as_convex_body()),
        ("ellipsoid-rotated", e2.as_star_body(), e2.as_convex_body()),
        ("cube", *body_from_spec({"type": "cube", "dim": n, "params": {"half_side": 1.0}, "label": "cube"})),
        ("l1-ball", *body_from_spec({"type": "lp_ball", "dim": n, "params": {"p": 1.0}, "label": "l1-ball"})),
        ("l4-ball", *body_from_spec({"type": "lp_ball", "dim": n, "params": {"p": 4.0}, "label": "l4-ball"})),
        (
            "perturbed-ball",
            *body_from_spec(
                {
                    "type": "perturbed_ball",
                    "dim": n,
                    "params": {"quadratic": [0.12, -0.08], "quartic": [0.05]},
                    "label": "perturbed-ball",
                }
            ),
        ),
    ]
    return entries


def validate_star_body(body: StarBody, grid: SphereGrid):
    """Reject asymmetric, nonpositive, or numerically degenerate bodies."""
    rho_plus = body.radial(grid.half)
    rho_minus = body.radial(-grid.half)
    if rho_plus.min() <= 0:
        raise ValueError("radial function is not positive")
    asym = np.abs(rho_plus - rho_minus).max() / rho_plus.max()
    if asym > 1e-9:
        raise ValueError(f"radial function is not symmetric (defect {asym:.2e})")
    ratio = rho_plus.max() / rho_plus.min()
    if ratio > DEGENERATE_RADIAL_RATIO:
        raise ValueError(
            f"degenerate body: radial ratio {ratio:.3e} exceeds {DEGENERATE_RADIAL_RATIO:.0e}"
        )
    return float(ratio)
