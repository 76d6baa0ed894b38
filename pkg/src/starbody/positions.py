"""Isotropic position, isotropic constant, L_p-centroid bodies, projections,
and the section/shadow product checks.

The isotropic constant is computed from the covariance of the uniform
measure (volume-normalised); for convex bodies this matches the infimum
definition over volume-preserving maps, for non-convex star bodies the
covariance value is what is reported (IsotropicData.definition records this).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bodies import ConvexBodyH, Ellipsoid, LinearMap, StarBody, apply_map
from .quadrature import (
    SphereGrid,
    Subspace,
    omega,
    sample_uniform_in_body,
    volume,
)
from .quadrature import _unit_sphere_nodes
from .sections import section_volume

__all__ = [
    "IsotropicData",
    "isotropic_position",
    "centroid_body",
    "centroid_body_support",
    "centroid_ratio_bounds",
    "project_body",
    "projection_volume",
    "section_shadow_products",
    "volume_product",
]


@dataclass
class IsotropicData:
    """Transform into isotropic position plus the measured constant."""

    transform: LinearMap
    constant: float  # L_K
    covariance: np.ndarray  # covariance of the input body (uniform measure)
    stderr: float  # batch standard error of the constant
    definition: str = "covariance"
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "transform": self.transform.matrix.tolist(),
                "constant": self.constant,
                "covariance": self.covariance.tolist(),
                "stderr": self.stderr,
                "definition": self.definition,
                "diagnostics": self.diagnostics,
            },
            sort_keys=True,
        )


def _second_moment(body: StarBody, grid: SphereGrid) -> float:
    """integral over K of ||x||^2 dx by polar quadrature (no volume gate)."""
    n = grid.dim
    rho = body.radial_on(grid)
    return float(n * omega(n) / (n + 2) * np.sum(grid.weights * rho ** (n + 2)))


def isotropic_position(body: StarBody, grid: SphereGrid, samples: int = 200_000,
                       seed: int = 0, batches: int = 10) -> IsotropicData:
    """Estimate the covariance of the uniform measure on K by Monte Carlo and
    return T = s Cov^{-1/2} scaled so |T K| = 1, together with
    L_K = E_2(TK) / sqrt(n)."""
    n = body.dim
    if grid.dim != n:
        raise ValueError(f"grid dim {grid.dim} != body dim {n}")
    if body.ellipsoid is not None:
        # exact covariance of the uniform measure on T B: (T T^T)/(n+2)
        cov = body.ellipsoid.shape_matrix / (n + 2)
        pts = None
    else:
        pts = sample_uniform_in_body(body, samples, seed=seed)
        cov = pts.T @ pts / len(pts)
    evals = np.linalg.eigvalsh(cov)
    if evals.min() <= 1e-10 * evals.max():
        raise ValueError(
            f"near-singular covariance (eigenvalue ratio {evals.min() / evals.max():.2e}); "
            "degenerate body rejected"
        )

    def position_from(cov_hat):
        e, v = np.linalg.eigh(cov_hat)
        inv_sqrt = v @ np.diag(e**-0.5) @ v.T
        moved = apply_map(body, LinearMap(inv_sqrt))
        scale = volume(moved, grid) ** (-1.0 / n)
        t = scale * inv_sqrt
        final = apply_map(body, LinearMap(t))
        l_val = float(np.sqrt(_second_moment(final, grid) / n))
        return t, final, l_val

    t_matrix, transformed, constant = position_from(cov)

    if pts is None:
        stderr = 0.0
    else:
        batch_vals = []
        size = len(pts) // batches
        for b in range(batches):
            chunk = pts[b * size : (b + 1) * size]
            cov_b = chunk.T @ chunk / len(chunk)
            batch_vals.append(position_from(cov_b)[2])
        stderr = float(np.std(batch_vals) / np.sqrt(batches))

    check = sample_uniform_in_body(transformed, min(samples, 100_000), seed=seed + 1)
    cov_check = check.T @ check / len(check)
    iso_defect = float(
        np.abs(cov_check / constant**2 - np.eye(n)).max()
    )
    return IsotropicData(
        transform=LinearMap(t_matrix),
        constant=constant,
        covariance=cov,
        stderr=stderr,
        definition="covariance",
        diagnostics={
            "volume_after": volume(transformed, grid),
            "isotropy_defect": iso_defect,
            "samples": samples,
            "seed": seed,
        },
    )


def _require_volume_one(body: StarBody, grid: SphereGrid, tol=1e-3):
    vol = volume(body, grid)
    if abs(vol - 1.0) > tol:
        raise ValueError(f"body must have volume 1 (measured {vol:.6f})")


def centroid_body(body: StarBody, p: float, grid: SphereGrid,
                  samples: int = 200_000, seed: int = 0) -> ConvexBodyH:
    """L_p-centroid body by Monte Carlo:
    h(theta) = ( mean over uniform samples of |<x, theta>|^p )^{1/p}.

    The estimator is an L_p norm of the sample inner products, hence exactly
    convex for p >= 1 regardless of sample noise.
    """
    if p < 1:
        raise ValueError(f"centroid body needs p >= 1, got {p}")
    _require_volume_one(body, grid)
    pts = sample_uniform_in_body(body, samples, seed=seed)

    def support_fn(unit, _x=pts, _p=p):
        out = np.empty(len(unit))
        step = max(1, 20_000_000 // max(len(_x), 1))
        for i in range(0, len(unit), step):
            dots = np.abs(_x @ unit[i : i + step].T)
            out[i : i + step] = (dots**_p).mean(axis=0) ** (1.0 / _p)
        return out

    return ConvexBodyH(body.dim, support_fn, label=f"Z_{p:g}({body.label})")


def centroid_body_support(body: StarBody, p: float, grid: SphereGrid) -> ConvexBodyH:
    """Deterministic twin of centroid_body via polar quadrature:
    h(theta)^p = n omega_n/(n+p) * sum_i w_i rho_i^{n+p} |<u_i, theta>|^p.

    For p = 2 this is the covariance ellipsoid and closed forms are attached.
    """
    if p < 1:
        raise ValueError(f"centroid body needs p >= 1, got {p}")
    _require_volume_one(body, grid)
    n = body.dim
    rho = body.radial_on(grid)
    coeff = n * omega(n) / (n + p) * grid.weights * rho ** (n + p)
    if p == 2:
        mom = np.einsum("i,ij,ik->jk", coeff, grid.nodes, grid.nodes)
        convex = Ellipsoid(mom, label=f"Z_2({body.label})").as_convex_body()
        convex.ellipsoid = Ellipsoid(mom, label=f"Z_2({body.label})")
        return convex

    def support_fn(unit, _c=coeff, _nodes=grid.nodes, _p=p):
        out = np.empty(len(unit))
        step = max(1, 20_000_000 // max(len(_nodes), 1))
        for i in range(0, len(unit), step):
            dots = np.abs(unit[i : i + step] @ _nodes.T)
            out[i : i + step] = (dots**_p @ _c) ** (1.0 / _p)
        return out

    return ConvexBodyH(n, support_fn, label=f"Z_{p:g}({body.label})")


def centroid_ratio_bounds(body: StarBody, k: int, grid: SphereGrid,
                          method: str = "quadrature", samples: int = 200_000,
                          seed: int = 0) -> dict:
    """Pointwise bounds of h_{Z_k}/h_{Z_2} over the grid for an isotropic
    volume-1 body; the sandwich Z_2 <= Z_k <= c k Z_2 predicts a minimum
    ratio >= 1 and the measured constant is (max ratio)/k."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if method == "quadrature":
        z2 = centroid_body_support(body, 2.0, grid)
        zk = centroid_body_support(body, float(k), grid)
    else:
        z2 = centroid_body(body, 2.0, grid, samples=samples, seed=seed)
        zk = centroid_body(body, float(k), grid, samples=samples, seed=seed)
    ratios = zk.support(grid.nodes) / z2.support(grid.nodes)
    return {
        "min_ratio": float(ratios.min()),
        "max_ratio": float(ratios.max()),
        "measured_constant": float(ratios.max() / k),
    }


def project_body(body: ConvexBodyH, subspace: Subspace) -> ConvexBodyH:
    """Orthogonal shadow P_F C as a body in frame coordinates: the support
    function of the projection is the restriction of the support to F."""
    if body.dim != subspace.ambient_dim:
        raise ValueError(f"body dim {body.dim} != subspace ambient {subspace.ambient_dim}")
    frame = subspace.frame

    def support_fn(unit, _b=body, _f=frame):
        return _b.support(unit @ _f.T)

    shadow = ConvexBodyH(subspace.dim, support_fn, label=f"proj({body.label})")
    ell = getattr(body, "ellipsoid", None)
    if ell is not None:
        shadow.ellipsoid = Ellipsoid(frame.T @ ell.shape_matrix @ frame)
    return shadow


def projection_volume(body: ConvexBodyH, subspace: Subspace,
                      resolution: int = 0, seed: int = 0) -> float:
    """Volume of the shadow P_F C for dim F <= 3 (support-to-radial recovery
    followed by polar integration); ellipsoid shadows use the closed form."""
    k = subspace.dim
    ell = getattr(body, "ellipsoid", None)
    if ell is not None:
        q = subspace.frame.T @ ell.shape_matrix @ subspace.frame
        return float(omega(k) * np.sqrt(np.linalg.det(q)))
    if k == 1:
        u = subspace.frame[:, 0]
        return float(body.support(np.vstack([u, -u])).sum())
    if k > 3:
        raise ValueError(f"projection volume limited to dim <= 3, got {k}")
    shadow = project_body(body, subspace)
    nodes, weights = _unit_sphere_nodes(k, resolution if resolution else (1440 if k == 2 else 2000), seed)
    h = shadow.support(nodes)
    dots = nodes @ nodes.T
    with np.errstate(divide="ignore"):
        ratios = np.where(dots > 1e-9, h[None, :] / dots, np.inf)
    rho = ratios.min(axis=1)
    return float(omega(k) * np.sum(weights * rho**k))


def section_shadow_products(body: StarBody, k: int, sample, grid: SphereGrid,
                            method: str = "quadrature", samples: int = 200_000,
                            seed: int = 0, resolution: int = 0) -> np.ndarray:
    """Products |K cap F_perp|^{1/k} |P_F Z_k(K)|^{1/k} over the sampled
    k-dimensional subspaces F (dimension-free up to constants for volume-1
    convex bodies)."""
    if method == "quadrature":
        zk = centroid_body_support(body, float(k), grid)
    else:
        zk = centroid_body(body, float(k), grid, samples=samples, seed=seed)
    out = np.empty(len(sample))
    for j, sub in enumerate(sample):
        if sub.dim != k:
            raise ValueError(f"sampled subspace has dim {sub.dim}, expected {k}")
        sec = section_volume(body, sub.orthocomplement(), resolution=resolution, seed=seed)
        shadow = projection_volume(zk, sub, resolution=resolution, seed=seed)
        out[j] = (sec * shadow) ** (1.0 / k)
    return out


def volume_product(body: StarBody, support: ConvexBodyH, grid: SphereGrid) -> float:
    """n (|C| |C_polar|)^{1/n} from the radial view of C and 1/h for the polar."""
    n = grid.dim
    vol = volume(body, grid)
    rho_polar = 1.0 / support.support(grid.nodes)
    vol_polar = float(omega(n) * np.sum(grid.weights * rho_polar**n))
    return float(n * (vol * vol_polar) ** (1.0 / n))
