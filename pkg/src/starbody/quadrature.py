"""Quadrature on spheres and Grassmannians, plus volume and moment functionals.

Conventions used throughout the package:

* ``sigma`` denotes the rotation-invariant *probability* measure on the unit
  sphere; every grid carries weights summing to 1.
* ``omega(n)`` is the volume of the unit Euclidean ball, so the surface area
  of the unit sphere is ``n * omega(n)``.
* Directions are stored as rows of ``(m, n)`` arrays with unit Euclidean norm.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, ndtri
from scipy.stats import qmc

__all__ = [
    "omega",
    "SphereGrid",
    "build_sphere_grid",
    "Subspace",
    "GrassmannSample",
    "sample_grassmannian",
    "subsphere_nodes",
    "volume",
    "m_p",
    "w_p",
    "e_p",
    "e_p_ball",
    "mean_width",
    "body_covariance",
    "sample_uniform_in_body",
    "scale_to_volume",
    "write_grid",
]

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def omega(n: int) -> float:
    """Volume of the unit Euclidean ball in dimension n (n >= 0)."""
    return float(np.exp(0.5 * n * np.log(np.pi) - gammaln(0.5 * n + 1.0)))


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature nodes and weights on the unit sphere.

    Nodes are antipodally paired: ``nodes[half + i] == -nodes[i]`` where
    ``half = len(nodes) // 2``, and weights are equal within each pair.
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    seed: int = 0
    label: str = ""

    def __len__(self):
        return len(self.nodes)

    @property
    def half(self) -> np.ndarray:
        """One representative per antipodal pair (the first half of nodes)."""
        return self.nodes[: len(self.nodes) // 2]

    def second_moment_defect(self) -> float:
        """Max-entry deviation of sum_i w_i x_i x_i^T from Identity/n."""
        s = (self.nodes * self.weights[:, None]).T @ self.nodes
        return float(np.abs(s - np.eye(self.dim) / self.dim).max())


def _whiten_nodes(nodes, weights, tol=1e-13, iters=40):
    """Iteratively renormalise a symmetric node set so its second moment
    matches Identity/n to machine precision.  Preserves antipodal pairing
    (the map is linear followed by row normalisation)."""
    n = nodes.shape[1]
    for _ in range(iters):
        s = n * ((nodes * weights[:, None]).T @ nodes)
        if np.abs(s - np.eye(n)).max() < tol:
            break
        evals, evecs = np.linalg.eigh(s)
        amap = evecs @ np.diag(evals**-0.5) @ evecs.T
        nodes = nodes @ amap
        nodes /= np.linalg.norm(nodes, axis=1, keepdims=True)
    return nodes


def build_sphere_grid(n: int, resolution: int, seed: int = 0) -> SphereGrid:
    """Build a quadrature grid approximating sigma on S^{n-1}.

    n = 2 uses equally spaced angles, n = 3 a Fibonacci layout on the upper
    hemisphere, n >= 4 scrambled-Sobol points pushed through the Gaussian
    map.  All node sets are antipodally symmetrised, carry uniform weights,
    and (for n >= 3) are post-processed so the second-moment isotropy
    identity holds to machine precision.
    """
    if n < 2:
        raise ValueError(f"sphere grid needs dimension >= 2, got n={n}")
    if resolution < 50 * n:
        raise ValueError(
            f"resolution {resolution} below floor 50*n={50 * n} for n={n}"
        )
    half = (resolution + 1) // 2
    if n == 2:
        angles = np.pi * (np.arange(half) + 0.5) / half
        pos = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    elif n == 3:
        j = np.arange(half)
        z = (j + 0.5) / half
        phi = 2.0 * np.pi * j * GOLDEN
        r = np.sqrt(1.0 - z * z)
        pos = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    else:
        # Sobol points come in powers of two; round the pair count up.
        m = 1 << int(np.ceil(np.log2(max(half, 2))))
        eng = qmc.Sobol(d=n, scramble=True, seed=seed)
        u = eng.random(m)
        g = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
        norms = np.linalg.norm(g, axis=1)
        norms[norms < 1e-12] = 1.0
        pos = g / norms[:, None]
    nodes = np.vstack([pos, -pos])
    weights = np.full(len(nodes), 1.0 / len(nodes))
    if n >= 3:
        nodes = _whiten_nodes(nodes, weights)
    return SphereGrid(dim=n, nodes=nodes, weights=weights, seed=seed)


@dataclass(frozen=True)
class Subspace:
    """A k-dimensional linear subspace of R^n given by an orthonormal frame.

    ``frame`` has shape (n, k) with orthonormal columns.
    """

    frame: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def __post_init__(self):
        f = self.frame
        if f.ndim != 2 or f.shape[0] < f.shape[1]:
            raise ValueError(f"frame must be (n, k) with k <= n, got {f.shape}")
        defect = np.abs(f.T @ f - np.eye(f.shape[1])).max()
        if defect > 1e-10:
            raise ValueError(f"frame columns not orthonormal (defect {defect:.2e})")

    def orthocomplement(self) -> "Subspace":
        """The (n-k)-dimensional orthogonal complement."""
        n, k = self.frame.shape
        q, _ = np.linalg.qr(np.hstack([self.frame, np.eye(n)]))
        return Subspace(q[:, k:n])

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T


def span_of(*vectors) -> Subspace:
    """Subspace spanned by the given vectors (orthonormalised)."""
    a = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
    q, r = np.linalg.qr(a)
    keep = np.abs(np.diag(r)) > 1e-12
    return Subspace(q[:, keep])


@dataclass(frozen=True)
class GrassmannSample:
    """A seeded i.i.d. Haar sample from the Grassmannian G_{n,k}."""

    subspaces: list
    seed: int
    count: int = field(default=0)

    def __post_init__(self):
        if self.count == 0:
            object.__setattr__(self, "count", len(self.subspaces))

    def __len__(self):
        return len(self.subspaces)

    def __iter__(self):
        return iter(self.subspaces)

    def complements(self) -> "GrassmannSample":
        return GrassmannSample(
            [f.orthocomplement() for f in self.subspaces], seed=self.seed
        )

    def mean_projector_defect(self) -> float:
        subs = self.subspaces
        n = subs[0].ambient_dim
        k = subs[0].dim
        mean = sum(f.projector() for f in subs) / len(subs)
        return float(np.abs(mean - k * np.eye(n) / n).max())


def sample_grassmannian(n: int, k: int, count: int, seed: int = 0) -> GrassmannSample:
    """Haar sample of k-dimensional subspaces via QR of Gaussian matrices."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    subs = []
    for _ in range(count):
        g = rng.standard_normal((n, k))
        q, r = np.linalg.qr(g)
        q = q * np.sign(np.diag(r))
        subs.append(Subspace(q))
    return GrassmannSample(subs, seed=seed)


_UNIT_GRID_CACHE = {}


def _unit_sphere_nodes(k: int, resolution: int, seed: int):
    """Cached quadrature nodes/weights on S^{k-1}; handles k = 1 directly."""
    key = (k, resolution, seed)
    hit = _UNIT_GRID_CACHE.get(key)
    if hit is not None:
        return hit
    if k == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([0.5, 0.5])
    else:
        grid = build_sphere_grid(k, max(resolution, 50 * k), seed=seed)
        nodes, weights = grid.nodes, grid.weights
    _UNIT_GRID_CACHE[key] = (nodes, weights)
    return nodes, weights


def subsphere_nodes(subspace: Subspace, resolution: int = 0, seed: int = 0):
    """Quadrature nodes (in ambient coordinates) and weights on S^{n-1}
    intersected with the given subspace."""
    k = subspace.dim
    if resolution <= 0:
        resolution = max(128, 60 * k)
    unit, weights = _unit_sphere_nodes(k, resolution, seed)
    return unit @ subspace.frame.T, weights


def volume(body, grid: SphereGrid) -> float:
    """Volume of a star body: omega_n * sum_i w_i rho(theta_i)^n."""
    _check_dims(body, grid)
    rho = body.radial(grid.nodes)
    return float(omega(grid.dim) * np.sum(grid.weights * rho**grid.dim))


def _check_dims(body, grid):
    if body.dim != grid.dim:
        raise ValueError(f"body dim {body.dim} != grid dim {grid.dim}")


def _check_p(p: float):
    if abs(p) < 1e-3:
        raise ValueError(f"exponent p={p} too close to 0; the p=0 limit is not supported")


def m_p(body, p: float, grid: SphereGrid) -> float:
    """Radial moment ( integral of ||theta||_C^p dsigma )^{1/p} with
    ||theta||_C = 1/rho_C(theta)."""
    _check_dims(body, grid)
    _check_p(p)
    if p < -grid.dim:
        warnings.warn(
            f"m_p with p={p} < -n={-grid.dim}: the continuum integral may diverge",
            stacklevel=2,
        )
    rho = body.radial(grid.nodes)
    return float(np.sum(grid.weights * rho ** (-p)) ** (1.0 / p))


def w_p(body, p: float, grid: SphereGrid, check_convexity: bool = True) -> float:
    """Support moment ( integral of h_C^p dsigma )^{1/p} for a convex body."""
    _check_p(p)
    if body.dim != grid.dim:
        raise ValueError(f"body dim {body.dim} != grid dim {grid.dim}")
    if check_convexity:
        from .bodies import convexity_defect_support

        defect = convexity_defect_support(body, grid)
        if defect > 1e-6:
            raise ValueError(f"support function fails convexity witness (defect {defect:.2e})")
    h = body.support(grid.nodes)
    return float(np.sum(grid.weights * h**p) ** (1.0 / p))


def mean_width(body, grid: SphereGrid, check_convexity: bool = True) -> float:
    return w_p(body, 1.0, grid, check_convexity=check_convexity)


def e_p(body, p: float, grid: SphereGrid, volume_tol: float = 1e-3) -> float:
    """Euclidean-norm moment ( integral over K of ||x||_2^p dx )^{1/p} for a
    volume-1 star body, computed in polar coordinates."""
    _check_dims(body, grid)
    _check_p(p)
    n = grid.dim
    if p <= -n:
        raise ValueError(f"need p > -n, got p={p}, n={n}")
    vol = volume(body, grid)
    if abs(vol - 1.0) > volume_tol:
        raise ValueError(
            f"e_p needs a volume-1 body; measured volume {vol:.6f} (tolerance {volume_tol})"
        )
    rho = body.radial(grid.nodes)
    val = n * omega(n) / (n + p) * np.sum(grid.weights * rho ** (n + p))
    return float(val ** (1.0 / p))


def e_p_ball(n: int, p: float) -> float:
    """Closed form of e_p for the volume-1 Euclidean ball."""
    return float((n / (n + p)) ** (1.0 / p) * omega(n) ** (-1.0 / n))


def body_covariance(body, grid: SphereGrid) -> np.ndarray:
    """Covariance integral_K x x^T dx / |K| by sphere quadrature."""
    _check_dims(body, grid)
    n = grid.dim
    rho = body.radial(grid.nodes)
    mom = np.einsum(
        "i,ij,ik->jk", grid.weights * rho ** (n + 2), grid.nodes, grid.nodes
    ) * (n * omega(n) / (n + 2))
    return mom / volume(body, grid)


def scale_to_volume(body, grid: SphereGrid, target: float = 1.0):
    """Dilate a star body so its quadrature volume equals target."""
    from .bodies import scale_body

    vol = volume(body, grid)
    return scale_body(body, (target / vol) ** (1.0 / grid.dim))


def sample_uniform_in_body(body, count: int, seed: int = 0, grid: SphereGrid | None = None):
    """Uniform samples in a star body.

    Bodies constructed from closed-form specs carry exact samplers; the
    generic fallback is polar rejection (direction density proportional to
    rho^n, radius rho * u^{1/n}) against the body's radial bound.
    """
    rng = np.random.default_rng(seed)
    sampler = getattr(body, "sampler", None)
    if sampler is not None:
        return sampler(count, rng)
    n = body.dim
    bound = getattr(body, "radial_bound", None)
    if bound is None:
        if grid is None:
            grid = build_sphere_grid(n, max(50 * n, 1000), seed=seed)
        bound = 1.05 * float(body.radial(grid.nodes).max())
    out = np.empty((count, n))
    got = 0
    while got < count:
        m = max(2 * (count - got), 1024)
        g = rng.standard_normal((m, n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        rho = body.radial(g)
        if rho.max() > bound * (1 + 1e-9):
            raise RuntimeError("radial bound violated during rejection sampling")
        acc = rng.random(m) <= (rho / bound) ** n
        pts = g[acc] * (rho[acc] * rng.random(acc.sum()) ** (1.0 / n))[:, None]
        take = min(len(pts), count - got)
        out[got : got + take] = pts[:take]
        got += take
    return out


def write_grid(grid: SphereGrid, path):
    """Columnar text export: one node per line, coordinates then weight."""
    with open(path, "w") as fh:
        for node, weight in zip(grid.nodes, grid.weights):
            coords = " ".join(repr(float(c)) for c in node)
            fh.write(f"{coords} {weight!r}\n")
