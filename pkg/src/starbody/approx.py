"""Covering-based approximation of convex bodies by k-radial sums of
ellipsoids, and the outer-volume-ratio estimate.

Pipeline: put the body in isotropic position at ball volume, cover it by
t-balls with centers found greedily on a probe cloud, enclose each
translated ball in a centered ellipsoid, take the k-radial sum of the
ellipsoids, and dilate by e.  The result contains the body by construction
and its outer volume ratio is compared against sqrt(n/k log(en/k)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .bodies import (
    Ellipsoid,
    StarBody,
    convexity_defect_radial,
    radial_sum,
    scale_body,
)
from .positions import isotropic_position
from .quadrature import SphereGrid, omega, sample_uniform_in_body, volume

__all__ = [
    "Covering",
    "greedy_cover",
    "enclosing_ellipsoid",
    "normalize_position",
    "BPApproximant",
    "bp_approximant",
    "bp_curve",
    "ovr_bound",
    "star_distance",
    "minkowski_ball_ratios",
    "box_ball_sum_volume",
]


@dataclass
class Covering:
    """Greedy covering of a probe cloud in K by t-balls centered in K."""

    centers: np.ndarray
    radius: float
    count: int
    probe_count: int
    complete: bool = True
    warning: str = ""


def greedy_cover(body: StarBody, t: float, probes: int = 200_000, seed: int = 0,
                 extra_points=None, abort_count: int | None = None) -> Covering:
    """Cover a dense probe cloud of K by balls of radius t.

    The origin is always the first center; afterwards the lowest-index
    uncovered probe becomes the next center, so the covering is a valid
    covering of the cloud with all centers inside K, and its size is an
    upper estimate of the covering number at radius t.  With ``abort_count``
    the loop stops early once the count exceeds the threshold (useful for
    ladder searches that only need to know "more than N").
    """
    if t <= 0:
        raise ValueError(f"covering radius must be positive, got {t}")
    cloud = sample_uniform_in_body(body, probes, seed=seed)
    if extra_points is not None:
        cloud = np.vstack([cloud, np.asarray(extra_points, dtype=float)])
    warning = ""
    if probes < 2000 * body.dim:
        warning = f"probe cloud of {probes} points may be too sparse in dimension {body.dim}"
        warnings.warn(warning, stacklevel=2)
    reach = t * (1.0 + 1e-12)  # guard the knife edge of exact-boundary probes
    centers = [np.zeros(body.dim)]
    uncovered = np.linalg.norm(cloud, axis=1) > reach
    while np.any(uncovered):
        if abort_count is not None and len(centers) > abort_count:
            return Covering(
                centers=np.array(centers),
                radius=t,
                count=len(centers),
                probe_count=len(cloud),
                complete=False,
                warning=warning,
            )
        idx = int(np.argmax(uncovered))
        z = cloud[idx]
        centers.append(z)
        still = np.nonzero(uncovered)[0]
        hit = np.linalg.norm(cloud[still] - z, axis=1) <= reach
        uncovered[still[hit]] = False
    return Covering(
        centers=np.array(centers),
        radius=t,
        count=len(centers),
        probe_count=len(cloud),
        complete=True,
        warning=warning,
    )


def enclosing_ellipsoid(z, t: float) -> Ellipsoid:
    """Centered ellipsoid containing z + t B and contained in the symmetric
    convex hull of +-2z + 2 sqrt(2) t B: semi-axis sqrt(2)(||z||+t) along z,
    sqrt(2) t orthogonal (a ball of radius sqrt(2) t when z = 0)."""
    if t <= 0:
        raise ValueError(f"need t > 0, got {t}")
    z = np.asarray(z, dtype=float)
    n = len(z)
    norm = np.linalg.norm(z)
    if norm < 1e-14:
        return Ellipsoid(2.0 * t * t * np.eye(n), label="tube-ellipsoid")
    u = z / norm
    axial = 2.0 * (norm + t) ** 2
    shape = 2.0 * t * t * np.eye(n) + (axial - 2.0 * t * t) * np.outer(u, u)
    return Ellipsoid(shape, label="tube-ellipsoid")


def normalize_position(body: StarBody, grid: SphereGrid, samples: int = 200_000,
                       seed: int = 0, witness_tol: float = 1e-6) -> StarBody:
    """Isotropic position rescaled to ball volume |K| = omega_n.

    This is a measurable surrogate for the covering-optimal position; the
    covering bound downstream is measured, not assumed.
    """
    defect = convexity_defect_radial(body, grid, seed=seed)
    if defect > witness_tol:
        raise ValueError(f"convexity witness fails (defect {defect:.2e})")
    iso = isotropic_position(body, grid, samples=samples, seed=seed)
    from .bodies import apply_map

    moved = apply_map(body, iso.transform)
    scale = (omega(body.dim) / volume(moved, grid)) ** (1.0 / body.dim)
    return scale_body(moved, scale)


def ovr_bound(n: int, k: int) -> float:
    """The comparison curve sqrt(n/k * log(e n / k))."""
    return math.sqrt(n / k * math.log(math.e * n / k))


def analytic_cover_radius(n: int, k: int) -> float:
    """The proof-side covering radius t = (n/(k(2-a)))^{1/a} with
    a = 2 - 1/log(en/k); reported for comparison only (it embeds an
    unknown absolute constant)."""
    alpha = 2.0 - 1.0 / math.log(math.e * n / k)
    return (n / (k * (2.0 - alpha))) ** (1.0 / alpha)


@dataclass
class BPApproximant:
    """A k-radial sum of explicit ellipsoids, dilated by e, containing K."""

    body: StarBody
    ellipsoids: list
    cover_radius: float
    cover_count: int
    ovr: float
    bound: float
    analytic_radius: float
    contained: bool
    k: int
    diagnostics: dict = field(default_factory=dict)

    def write(self, path):
        """Structured text export: t, N, ovr, then one shape matrix per block."""
        with open(path, "w") as fh:
            fh.write(f"k {self.k}\nt {self.cover_radius!r}\nN {self.cover_count}\n")
            fh.write(f"ovr {self.ovr!r}\nbound {self.bound!r}\n")
            for e in self.ellipsoids:
                fh.write("ellipsoid\n")
                for row in e.shape_matrix:
                    fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def _cover_ladder(body: StarBody, grid: SphereGrid, probes: int, seed: int,
                  k_values, ladder_base: float = 1.25):
    """Walk the covering-radius ladder once and record counts; coverings are
    k-independent so all requested k can share them."""
    n = body.dim
    boundary = grid.nodes * body.radial_on(grid)[:, None]
    abort = int(math.floor(math.exp(max(k_values)))) + 1
    t_max = max(4.0 * math.sqrt(n / k * math.log(math.e * n / k)) for k in k_values)
    ladder = []
    t = 1.0
    while True:
        cover = greedy_cover(
            body, t, probes=probes, seed=seed, extra_points=boundary, abort_count=abort
        )
        ladder.append((t, cover))
        if cover.complete and cover.count == 1:
            break
        if t > t_max:
            break
        t *= ladder_base
    return ladder


def _assemble(body: StarBody, grid: SphereGrid, k: int, t: float, cover: Covering) -> BPApproximant:
    n = body.dim
    ellipsoids = [enclosing_ellipsoid(z, t) for z in cover.centers]
    summed = radial_sum([e.as_star_body() for e in ellipsoids], k)
    dilated = scale_body(summed, math.e)
    rho_k = body.radial_on(grid)
    rho_c = dilated.radial(grid.nodes)
    slack = float((rho_c - rho_k).min())
    contained = slack >= -1e-9 * rho_k.max()
    ovr = (volume(dilated, grid) / volume(body, grid)) ** (1.0 / n)
    return BPApproximant(
        body=dilated,
        ellipsoids=ellipsoids,
        cover_radius=t,
        cover_count=cover.count,
        ovr=float(ovr),
        bound=ovr_bound(n, k),
        analytic_radius=analytic_cover_radius(n, k),
        contained=contained,
        k=k,
        diagnostics={"containment_slack": slack, "probe_count": cover.probe_count},
    )


def bp_approximant(body: StarBody, k: int, grid: SphereGrid, probes: int = 200_000,
                   seed: int = 0, normalized: bool = False, samples: int = 200_000) -> BPApproximant:
    """Run the covering pipeline for one k: normalise position, find the
    smallest ladder radius with log(cover count) <= k, enclose the cover in
    ellipsoids, k-radial-sum them and dilate by e."""
    n = body.dim
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    k_body = body if normalized else normalize_position(body, grid, samples=samples, seed=seed)
    ladder = _cover_ladder(k_body, grid, probes, seed, [k])
    budget = math.floor(math.exp(k))
    for t, cover in ladder:
        if cover.complete and cover.count <= budget:
            return _assemble(k_body, grid, k, t, cover)
    raise RuntimeError(
        f"no ladder radius up to {ladder[-1][0]:.3f} achieved log(count) <= k={k}"
    )


def bp_curve(body: StarBody, k_values, grid: SphereGrid, probes: int = 200_000,
             seed: int = 0, samples: int = 200_000) -> list:
    """bp_approximant over several k sharing one position and one ladder."""
    k_values = sorted(set(int(k) for k in k_values))
    n = body.dim
    if any(k < 1 or k > n - 1 for k in k_values):
        raise ValueError(f"k values must lie in [1, {n - 1}]")
    k_body = normalize_position(body, grid, samples=samples, seed=seed)
    ladder = _cover_ladder(k_body, grid, probes, seed, k_values)
    out = []
    for k in k_values:
        budget = math.floor(math.exp(k))
        chosen = None
        for t, cover in ladder:
            if cover.complete and cover.count <= budget:
                chosen = (t, cover)
                break
        if chosen is None:
            raise RuntimeError(f"ladder exhausted before log(count) <= k={k}")
        out.append(_assemble(k_body, grid, k, *chosen))
    return out


def star_distance(first: StarBody, second: StarBody, grid: SphereGrid) -> float:
    """sup over the grid of max(rho_1/rho_2, rho_2/rho_1) (multiplicative
    distance; 1/d V1 is contained in V2 is contained in d V1)."""
    r1 = first.radial_on(grid)
    r2 = second.radial_on(grid)
    ratio = r1 / r2
    return float(max(ratio.max(), (1.0 / ratio).max()))


def box_ball_sum_volume(sides, t: float) -> float:
    """Exact volume of (box with given full side lengths) + t B via the
    tube formula: sum_j e_j(sides) omega_{n-j} t^{n-j}."""
    sides = np.asarray(sides, dtype=float)
    n = len(sides)
    # elementary symmetric polynomials via the product expansion
    coeffs = np.array([1.0])
    for s in sides:
        coeffs = np.convolve(coeffs, [1.0, s])
    total = 0.0
    for j in range(n + 1):
        e_j = coeffs[j]  # coefficient of the degree-j elementary symmetric term
        total += e_j * omega(n - j) * t ** (n - j)
    return float(total)


def minkowski_ball_ratios(body: StarBody, support, t_values, grid: SphereGrid,
                          mc_samples: int = 200_000, seed: int = 0) -> list:
    """Ratios |K + t B|^{1/n} / (t |K|^{1/n}) for a convex body normalised to
    ball volume.  The sum's support is h_K + t; its volume comes from
    support-to-radial recovery (n <= 3) or Monte Carlo rejection against the
    grid-direction outer polytope (n >= 4)."""
    n = body.dim
    vol_k = volume(body, grid)
    if abs(vol_k - omega(n)) > 1e-2 * omega(n):
        raise ValueError(f"body must be normalised to ball volume (got {vol_k:.4f})")
    h = support.support(grid.nodes)
    rng = np.random.default_rng(seed)
    out = []
    for t in t_values:
        ht = h + t
        if n <= 3:
            dots = grid.nodes @ grid.nodes.T
            with np.errstate(divide="ignore"):
                ratios = np.where(dots > 1e-9, ht[None, :] / dots, np.inf)
            rho = ratios.min(axis=1)
            vol_sum = float(omega(n) * np.sum(grid.weights * rho**n))
        else:
            bound = float(ht.max()) * 1.02
            pts = rng.uniform(-bound, bound, size=(mc_samples, n))
            inside = np.ones(len(pts), dtype=bool)
            step = max(1, 20_000_000 // len(grid))
            for i in range(0, len(pts), step):
                chunk = pts[i : i + step]
                inside[i : i + step] = ((chunk @ grid.nodes.T) <= ht[None, :]).all(axis=1)
            vol_sum = float(inside.mean() * (2.0 * bound) ** n)
        out.append(float(vol_sum ** (1.0 / n) / (t * vol_k ** (1.0 / n))))
    return out
