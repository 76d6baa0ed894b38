"""Central section volumes, the spherical Radon transform, and construction
of k-intersection bodies, including the regularized inverse problem.

Two conventions are exposed for hyperplane intersection bodies:

* ``intersection_body`` (classical): the radius in direction xi equals the
  full (n-1)-dimensional volume of the section perpendicular to xi.
* the ``ik_*`` family (normalized): the body whose k-dimensional central
  sections match the (n-k)-dimensional sections of K, i.e.
  |I_k(K) cap F| = |K cap F_perp|.  For k = 1 this is exactly half the
  classical body; the factor is a classic source of bugs, so both are kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .bodies import Ellipsoid, StarBody, interpolated_star_body
from .quadrature import (
    GrassmannSample,
    SphereGrid,
    Subspace,
    omega,
    subsphere_nodes,
)

__all__ = [
    "section_volume",
    "section_function",
    "SectionFunction",
    "radon_transform",
    "intersection_body",
    "ik_ball",
    "ik_ellipsoid",
    "ik_solve",
    "IkResult",
    "section_extremes",
    "SectionExtremes",
    "orthobasis_of_direction",
]


def orthobasis_of_direction(direction) -> Subspace:
    """Orthonormal basis of the hyperplane perpendicular to a vector,
    via a Householder reflection mapping e_1 to the direction."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    n = len(u)
    e1 = np.zeros(n)
    e1[0] = 1.0
    if abs(u[0] - 1.0) < 1e-14:
        q = np.eye(n)
    else:
        v = e1 - u
        v /= np.linalg.norm(v)
        q = np.eye(n) - 2.0 * np.outer(v, v)
    return Subspace(q[:, 1:])


def section_volume(body: StarBody, subspace: Subspace, resolution: int = 0, seed: int = 0) -> float:
    """Volume of the central section K cap F.

    Ellipsoid-backed bodies use the closed form; otherwise the section is a
    k-dimensional star body integrated on a sub-sphere grid:
    |K cap F| = omega_k * mean_i rho_K(frame u_i)^k.  For k = 1 the section
    is a segment of length rho(f) + rho(-f).
    """
    if body.dim != subspace.ambient_dim:
        raise ValueError(f"body dim {body.dim} != subspace ambient {subspace.ambient_dim}")
    if body.ellipsoid is not None:
        return body.ellipsoid.section(subspace)
    k = subspace.dim
    if k == 1:
        f = subspace.frame[:, 0]
        rho = body.radial(np.vstack([f, -f]))
        return float(rho.sum())
    nodes, weights = subsphere_nodes(subspace, resolution, seed)
    rho = body.radial(nodes)
    return float(omega(k) * np.sum(weights * rho**k))


@dataclass
class SectionFunction:
    """Per-subspace section volumes |K cap F_perp| over a Grassmann sample."""

    k: int
    sample: GrassmannSample
    values: np.ndarray

    def write(self, path):
        """Columnar export: flattened frame entries then the value."""
        with open(path, "w") as fh:
            for sub, val in zip(self.sample, self.values):
                entries = " ".join(repr(float(x)) for x in sub.frame.ravel(order="F"))
                fh.write(f"{entries} {val!r}\n")


def section_function(body: StarBody, sample: GrassmannSample, resolution: int = 0, seed: int = 0) -> SectionFunction:
    """Section volumes of K by the orthocomplements of the sampled subspaces."""
    k = sample.subspaces[0].dim
    vals = np.array(
        [
            section_volume(body, sub.orthocomplement(), resolution=resolution, seed=seed)
            for sub in sample
        ]
    )
    return SectionFunction(k=k, sample=sample, values=vals)


def radon_transform(f, order: int, sample: GrassmannSample, grid: SphereGrid | None = None,
                    resolution: int = 0, seed: int = 0) -> np.ndarray:
    """Spherical Radon transform of order m over a Grassmann sample:
    R_m f(F) = |S^{m-1}| * mean of f over the sub-sphere S^{n-1} cap F.

    ``f`` is either a vectorised evaluator on directions, or an array of
    values on ``grid`` (then evaluated off-grid by nearest-node lookup).
    """
    if callable(f):
        evaluate = f
    else:
        values = np.asarray(f, dtype=float)
        if grid is None or len(values) != len(grid):
            raise ValueError("grid-sampled f needs the matching SphereGrid")

        def evaluate(dirs, _nodes=grid.nodes, _vals=values):
            nearest = np.argmax(dirs @ _nodes.T, axis=1)
            return _vals[nearest]

    surface = order * omega(order)
    out = np.empty(len(sample))
    for j, sub in enumerate(sample):
        if sub.dim != order:
            raise ValueError(f"subspace dim {sub.dim} != radon order {order}")
        nodes, weights = subsphere_nodes(sub, resolution, seed)
        out[j] = surface * float(np.sum(weights * np.asarray(evaluate(nodes), dtype=float)))
    return out


def intersection_body(body: StarBody, resolution: int = 0, seed: int = 0) -> StarBody:
    """Classical intersection body: rho(xi) = |K cap xi_perp|."""
    n = body.dim

    def radial_fn(unit, _b=body, _res=resolution, _seed=seed):
        out = np.empty(len(unit))
        for i, u in enumerate(unit):
            out[i] = section_volume(_b, orthobasis_of_direction(u), resolution=_res, seed=_seed)
        return out

    return StarBody(n, radial_fn, label=f"I({body.label})")


def ik_ball(n: int, k: int, radius: float = 1.0) -> float:
    """Radius of the k-intersection body of a centered ball:
    omega_k rho^k = omega_{n-k} R^{n-k}."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    return float((omega(n - k) * radius ** (n - k) / omega(k)) ** (1.0 / k))


def ik_ellipsoid(ellipsoid, k: int) -> Ellipsoid:
    """k-intersection body of an ellipsoid T B_2^n, using the linear-image
    law I_k(T K) = |det T|^{1/k} T^{-T} I_k(K) (forced by the defining
    section identity together with the dilation law I_k(tK) = t^{(n-k)/k} I_k(K))."""
    ell = ellipsoid.ellipsoid if isinstance(ellipsoid, StarBody) else ellipsoid
    if ell is None:
        raise ValueError("ik_ellipsoid needs an ellipsoid-backed body")
    n = ell.dim
    r = ik_ball(n, k)
    det_t = float(np.sqrt(np.linalg.det(ell.shape_matrix)))
    c = r * det_t ** (1.0 / k)
    # T symmetric: T^{-T} E-ball of radius c has shape c^2 (T T^T)^{-1} = c^2 A^{-1}
    return Ellipsoid(c * c * ell.inverse_shape, label=f"I_{k}({ell.label})")


@dataclass
class IkResult:
    """Outcome of the inverse-Radon solve for a k-intersection body candidate."""

    body: StarBody
    residual: float
    negativity: float
    regularization: float
    halvings: int
    condition: float
    residual_threshold: float = 5e-2
    negativity_threshold: float = 1e-2
    diagnostics: dict = field(default_factory=dict)

    @property
    def exists_numerically(self) -> bool:
        """Diagnostic only: a large residual or clipped mass flags that no
        nonnegative solution fits the section data at this resolution."""
        return (
            self.residual <= self.residual_threshold
            and self.negativity <= self.negativity_threshold
        )


def _interp_matrix(dirs, half_nodes, neighbors=4):
    """Sparse row-stochastic matrix carrying values on antipodal-pair
    representatives to arbitrary directions (inverse-squared-angle weights)."""
    n = half_nodes.shape[1]
    area = n * omega(n) / 2.0 / len(half_nodes)
    eps = 0.2 * area ** (1.0 / (n - 1))
    sim = np.abs(dirs @ half_nodes.T)
    np.clip(sim, 0.0, 1.0, out=sim)
    dist = np.arccos(sim)
    p = min(neighbors, dist.shape[1] - 1)
    idx = np.argpartition(dist, p, axis=1)[:, :p]
    d = np.take_along_axis(dist, idx, axis=1)
    wgt = 1.0 / (d * d + eps * eps)
    wgt /= wgt.sum(axis=1, keepdims=True)
    rows = np.repeat(np.arange(len(dirs)), p)
    return rows, idx.ravel(), wgt.ravel()


def _neighbor_laplacian(half_nodes, degree=6):
    sim = np.abs(half_nodes @ half_nodes.T)
    np.fill_diagonal(sim, -1.0)
    nb = np.argpartition(-sim, degree, axis=1)[:, :degree]
    m = len(half_nodes)
    rows = np.repeat(np.arange(m), degree)
    w = sp.coo_matrix((np.ones(m * degree), (rows, nb.ravel())), shape=(m, m))
    w = w.maximum(w.T)
    return (sp.diags(np.asarray(w.sum(axis=1)).ravel()) - w).tocsr()


def _forward_operator(k, sample, half_nodes, resolution, seed):
    """Sparse discretisation of phi -> R_k phi over the sampled subspaces."""
    row_parts, col_parts, val_parts = [], [], []
    for j, sub in enumerate(sample):
        if k == 1:
            dirs = sub.frame.T
        else:
            dirs, _ = subsphere_nodes(sub, resolution, seed)
        r, c, v = _interp_matrix(dirs, half_nodes)
        row_parts.append(np.full(len(v), j))
        col_parts.append(c)
        val_parts.append(v * (k * omega(k) / len(dirs)))
    return sp.coo_matrix(
        (np.concatenate(val_parts), (np.concatenate(row_parts), np.concatenate(col_parts))),
        shape=(len(sample), len(half_nodes)),
    ).tocsr()


def ik_solve(body: StarBody, k: int, grid: SphereGrid, sample: GrassmannSample,
             regularization: float | None = None, resolution: int = 0, seed: int = 0,
             max_halvings: int = 6, residual_threshold: float = 5e-2,
             negativity_threshold: float = 1e-2) -> IkResult:
    """Recover a k-intersection body candidate from section data.

    Solves for a nonnegative grid function phi approximating rho^k from
    R_k phi(F) = k |K cap F_perp| in regularized least squares, with a
    neighbor-graph smoothness penalty; nonnegativity is enforced by
    projection, and the clipped mass is reported.  The regularization weight
    starts at 1e-3 times the mean diagonal of the normal matrix and is
    halved until the relative residual stabilizes.
    """
    n = body.dim
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    floor = 20 * len(grid) // n
    if len(sample) < floor:
        raise ValueError(
            f"Grassmann sample too small: {len(sample)} < 20 * resolution / n = {floor}"
        )
    half = grid.half
    g = np.array(
        [section_volume(body, sub.orthocomplement(), resolution=resolution, seed=seed) for sub in sample]
    )
    b = k * g
    a_op = _forward_operator(k, sample, half, resolution, seed)
    lap = _neighbor_laplacian(half)
    ata = (a_op.T @ a_op).toarray()
    atb = a_op.T @ b
    lap_dense = lap.toarray()
    lam0 = regularization if regularization is not None else 1e-3 * float(np.mean(np.diag(ata)))
    lam = lam0
    b_norm = float(np.linalg.norm(b))

    def solve_at(lam_value):
        phi = np.linalg.solve(ata + lam_value * lap_dense, atb)
        clipped = np.maximum(phi, 0.0)
        resid = float(np.linalg.norm(a_op @ clipped - b)) / b_norm
        return phi, resid

    phi, resid = solve_at(lam)
    halvings = 0
    while halvings < max_halvings:
        cand_lam = lam / 2.0
        cand_phi, cand_resid = solve_at(cand_lam)
        if resid - cand_resid < 0.05 * resid:
            break
        lam, phi, resid = cand_lam, cand_phi, cand_resid
        halvings += 1

    total = float(np.abs(phi).sum())
    negativity = float(np.maximum(-phi, 0.0).sum() / total) if total > 0 else 0.0
    clipped = np.maximum(phi, 1e-12 * max(float(phi.max()), 1e-300))
    condition = float(np.linalg.cond(ata + lam * lap_dense))
    rho_vals = clipped ** (1.0 / k)
    candidate = interpolated_star_body(n, half, rho_vals, label=f"I_{k}({body.label})~")
    return IkResult(
        body=candidate,
        residual=resid,
        negativity=negativity,
        regularization=lam,
        halvings=halvings,
        condition=condition,
        residual_threshold=residual_threshold,
        negativity_threshold=negativity_threshold,
        diagnostics={
            "grid_nodes": len(grid),
            "sample_count": len(sample),
            "ill_conditioned": condition > 1e10,
            "initial_regularization": lam0,
        },
    )


@dataclass(frozen=True)
class SectionExtremes:
    """Extremes of k-dimensional central section volumes over a sample."""

    minimum: float
    maximum: float
    ratio: float
    delta: float  # ratio^{1/k}, the per-dimension section spread


def section_extremes(body: StarBody, k: int, sample: GrassmannSample,
                     resolution: int = 0, seed: int = 0) -> SectionExtremes:
    vals = np.array(
        [section_volume(body, sub, resolution=resolution, seed=seed) for sub in sample]
    )
    lo, hi = float(vals.min()), float(vals.max())
    ratio = hi / lo
    return SectionExtremes(lo, hi, ratio, ratio ** (1.0 / k))
