"""Radial, geometric, and Banach-Mazur distances between star bodies, and
the section-spread roundness checks for intersection-body candidates.

Banach-Mazur values produced here are always upper bounds: a derivative-free
search over invertible maps can only certify that some map achieves a given
geometric distance, never that none does better.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bodies import (
    StarBody,
    convexity_defect_radial,
    make_ball,
    tabulate_star_body,
)
from .quadrature import SphereGrid, body_covariance
from .sections import ik_solve, section_extremes

__all__ = [
    "d_radial",
    "d_geometric",
    "DistanceReport",
    "d_bm_upper",
    "roundness_from_sections",
    "intersection_roundness",
]


def d_radial(first: StarBody, second: StarBody, grid: SphereGrid) -> float:
    """Radial metric: max over the grid of |rho_1 - rho_2|."""
    return float(np.abs(first.radial_on(grid) - second.radial_on(grid)).max())


def d_geometric(first: StarBody, second: StarBody, grid: SphereGrid) -> float:
    """Geometric distance: the least r admitting a sandwich
    K1 inside a K2 inside r K1; equals (max rho_1/rho_2)(max rho_2/rho_1)
    and is achieved at a = max rho_1/rho_2."""
    ratio = first.radial_on(grid) / second.radial_on(grid)
    return float(ratio.max() * (1.0 / ratio).max())


@dataclass
class DistanceReport:
    kind: str
    value: float
    witness: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "kind": self.kind,
            "value": self.value,
            "witness": None if self.witness is None else self.witness.tolist(),
            "diagnostics": self.diagnostics,
        }


def _sqrt_spd(mat):
    evals, evecs = np.linalg.eigh(mat)
    evals = np.maximum(evals, 1e-300)
    return evecs @ np.diag(np.sqrt(evals)) @ evecs.T


def _random_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def d_bm_upper(first: StarBody, second: StarBody, grid: SphereGrid,
               restarts: int = 12, seed: int = 0, sweeps: int | None = None,
               step0: float = 0.15, search_grid: SphereGrid | None = None) -> DistanceReport:
    """Upper bound on the Banach-Mazur distance by derivative-free descent of
    d_geometric(K1, T K2) over matrix entries of T.

    Starts: identity, the covariance-matching map, and covariance-matching
    maps twisted by seeded random orthogonals.  Each sweep probes every
    entry with a quadratic fit; the step halves after a stagnant sweep.
    """
    if first.dim != second.dim:
        raise ValueError(f"dimension mismatch {first.dim} != {second.dim}")
    n = first.dim
    if sweeps is None:
        sweeps = 8 * n * n
    rng = np.random.default_rng(seed)
    work = search_grid if search_grid is not None else grid
    nodes = work.nodes
    rho1 = first.radial(nodes)

    def objective(t_mat):
        det = np.linalg.det(t_mat)
        if abs(det) < 1e-9:
            return np.inf
        y = nodes @ np.linalg.inv(t_mat).T
        norms = np.linalg.norm(y, axis=1)
        rho2 = second.radial(y) / norms
        ratio = rho1 / rho2
        return float(ratio.max() * (1.0 / ratio).max())

    cov1 = body_covariance(first, work)
    cov2 = body_covariance(second, work)
    match = _sqrt_spd(cov1) @ np.linalg.inv(_sqrt_spd(cov2))

    starts = [np.eye(n), match]
    while len(starts) < restarts:
        starts.append(_sqrt_spd(cov1) @ _random_orthogonal(n, rng) @ np.linalg.inv(_sqrt_spd(cov2)))

    best_t, best_val, best_idx = None, np.inf, -1
    evaluations = 0
    for idx, start in enumerate(starts[:restarts]):
        t_mat = start / np.linalg.norm(start, "fro") * np.sqrt(n)
        val = objective(t_mat)
        step = step0
        for _ in range(sweeps):
            improved = False
            for i in range(n):
                for j in range(n):
                    base = t_mat[i, j]
                    t_mat[i, j] = base + step
                    up = objective(t_mat)
                    t_mat[i, j] = base - step
                    down = objective(t_mat)
                    evaluations += 2
                    curv = up + down - 2.0 * val
                    cand = base
                    cand_val = val
                    if np.isfinite(up) and np.isfinite(down) and curv > 1e-12:
                        delta = np.clip(-step * (up - down) / (2.0 * curv), -2 * step, 2 * step)
                        t_mat[i, j] = base + delta
                        quad = objective(t_mat)
                        evaluations += 1
                        if quad < cand_val:
                            cand, cand_val = base + delta, quad
                    if up < cand_val:
                        cand, cand_val = base + step, up
                    if down < cand_val:
                        cand, cand_val = base - step, down
                    t_mat[i, j] = cand
                    if cand_val < val - 1e-12:
                        val = cand_val
                        improved = True
            if not improved:
                step *= 0.5
                if step < 1e-5:
                    break
        if val < best_val - 1e-12:
            best_val, best_t, best_idx = val, t_mat.copy(), idx
    final = d_geometric(first, _mapped_body(second, best_t), grid)
    baseline = d_geometric(first, second, grid)
    no_improvement = final >= baseline - 1e-12
    if no_improvement:
        identity = np.eye(n)
        if d_geometric(first, _mapped_body(second, identity), grid) <= final:
            best_t, final = identity, baseline
    return DistanceReport(
        kind="banach_mazur_upper",
        value=float(final),
        witness=best_t,
        diagnostics={
            "restarts": restarts,
            "sweep_budget": sweeps,
            "evaluations": evaluations,
            "best_start": best_idx,
            "search_nodes": len(work),
            "no_improvement": bool(no_improvement),
        },
    )


def _mapped_body(body: StarBody, t_mat) -> StarBody:
    from .bodies import LinearMap, apply_map

    return apply_map(body, LinearMap(t_mat))


def roundness_from_sections(body: StarBody, k: int, sample, grid: SphereGrid,
                            resolution: int = 0, seed: int = 0) -> dict:
    """Geometric distance to the ball against the section-spread bound:
    with delta^k the max/min ratio of k-section volumes over the sample,
    d_G(K, B) should not exceed k delta^k."""
    if body.dim < 3 or not 2 <= k <= body.dim - 1:
        raise ValueError(f"need n >= 3 and 2 <= k <= n-1, got n={body.dim}, k={k}")
    ext = section_extremes(body, k, sample, resolution=resolution, seed=seed)
    ball = make_ball(body.dim)
    d_g = d_geometric(body, ball, grid)
    bound = k * ext.delta**k
    return {
        "delta": ext.delta,
        "section_min": ext.minimum,
        "section_max": ext.maximum,
        "d_geometric": d_g,
        "bound": bound,
        "ok": d_g <= bound * (1.0 + 1e-9),
    }


def intersection_roundness(body: StarBody, k: int, grid: SphereGrid, sample,
                           extreme_sample=None, resolution: int = 0, seed: int = 0,
                           convexity_tol: float = 2e-3, restarts: int = 6,
                           search_grid: SphereGrid | None = None) -> dict:
    """Distance-to-ball checks for the numerically recovered k-intersection
    body of K: requires the solve to succeed and the candidate to pass the
    convexity witness (both are hypotheses, not theorems), then reports
    d_G(candidate, ball), a Banach-Mazur upper bound, and the section-spread
    bound k delta^k computed from the candidate itself."""
    result = ik_solve(body, k, grid, sample, resolution=resolution, seed=seed)
    row = {
        "residual": result.residual,
        "negativity": result.negativity,
        "solver_ok": result.exists_numerically,
    }
    candidate = result.body
    defect = convexity_defect_radial(candidate, grid, seed=seed)
    scale = float(candidate.radial_on(grid).max())
    row["convexity_defect"] = defect
    convex_ok = defect <= convexity_tol
    row["convex_ok"] = bool(convex_ok)
    if not (result.exists_numerically and convex_ok):
        row["hypotheses_met"] = False
        return row
    row["hypotheses_met"] = True
    ball = make_ball(body.dim)
    row["d_geometric"] = d_geometric(candidate, ball, grid)
    report = d_bm_upper(candidate, ball, grid, restarts=restarts, seed=seed,
                        search_grid=search_grid)
    row["d_bm_upper"] = report.value
    if extreme_sample is not None and k >= 2:
        spread = roundness_from_sections(candidate, k, extreme_sample, grid,
                                         resolution=resolution, seed=seed)
        row["delta"] = spread["delta"]
        row["spread_bound"] = spread["bound"]
        row["spread_ok"] = spread["ok"]
    return row
