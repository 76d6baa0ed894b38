"""Verification suites over the built-in body catalog.

Each suite produces ReportRows; hard assertions get status pass/fail,
measured constants get status info.  All randomness is derived from the
RunConfig seed through fixed per-stage offsets, so a config reproduces its
report bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

from . import bodies as bd
from . import quadrature as qd
from .approx import (
    bp_curve,
    box_ball_sum_volume,
    enclosing_ellipsoid,
    greedy_cover,
    minkowski_ball_ratios,
    normalize_position,
    star_distance,
)
from .distances import (
    d_bm_upper,
    d_geometric,
    d_radial,
    intersection_roundness,
    roundness_from_sections,
)
from .positions import (
    centroid_body,
    centroid_body_support,
    centroid_ratio_bounds,
    isotropic_position,
    projection_volume,
    section_shadow_products,
    volume_product,
)
from .quadrature import omega
from .report import Report, ReportRow, RunConfig
from .sections import (
    ik_ball,
    ik_ellipsoid,
    ik_solve,
    intersection_body,
    orthobasis_of_direction,
    radon_transform,
    section_extremes,
    section_function,
    section_volume,
)

SUITES = ("identities", "inequalities", "ik", "bp", "distances", "all")

CONVEX_CATALOG = ("ball", "ellipsoid-axis", "ellipsoid-rotated", "cube", "l1-ball", "l4-ball", "perturbed-ball")


class SuiteContext:
    """Caches grids, catalogs, and derived bodies across suites."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._grids = {}
        self._catalogs = {}
        self._normalized = {}
        self._samples = {}
        self._intersections = {}

    def grid(self, n: int, resolution: int | None = None) -> qd.SphereGrid:
        res = resolution if resolution else max(self.config.grid_resolution, 50 * n)
        key = (n, res)
        if key not in self._grids:
            self._grids[key] = qd.build_sphere_grid(n, res, seed=self.config.seed)
        return self._grids[key]

    def catalog(self, n: int):
        if n not in self._catalogs:
            self._catalogs[n] = bd.catalog_bodies(n)
        return self._catalogs[n]

    def normalized(self, name: str, n: int) -> bd.StarBody:
        """Volume-1 version of a catalog body."""
        key = (name, n)
        if key not in self._normalized:
            star = dict((e[0], e[1]) for e in self.catalog(n))[name]
            self._normalized[key] = qd.scale_to_volume(star, self.grid(n))
        return self._normalized[key]

    def convex_of(self, name: str, n: int):
        entry = dict((e[0], (e[1], e[2])) for e in self.catalog(n))[name]
        star, convex = entry
        if convex is None:
            convex = bd.support_of_star(star, self.grid(n))
        return star, convex

    def grassmann(self, n: int, k: int, count: int, offset: int = 0) -> qd.GrassmannSample:
        key = (n, k, count, offset)
        if key not in self._samples:
            self._samples[key] = qd.sample_grassmannian(
                n, k, count, seed=self.config.seed + 1000 * n + 10 * k + offset
            )
        return self._samples[key]

    def intersection(self, name: str, n: int, resolution: int = 0) -> bd.StarBody:
        """Tabulated classical intersection body of the volume-1 catalog body."""
        key = (name, n, resolution)
        if key not in self._intersections:
            body = self.normalized(name, n)
            grid = self.grid(n)
            raw = intersection_body(body, resolution=resolution, seed=self.config.seed)
            self._intersections[key] = bd.tabulate_star_body(raw, grid)
        return self._intersections[key]


def _row(report, check_id, anchor, ok=None, value=None, target=None, inputs=None,
         extras=None, error=None, sensitivity=None, seed=0, info=False):
    status = "info" if info else ("pass" if ok else "fail")
    report.add(
        ReportRow(
            check_id=check_id,
            anchor=anchor,
            status=status,
            value=None if value is None else float(value),
            target=None if target is None else float(target),
            inputs=inputs or {},
            extras=extras or {},
            error=error,
            sensitivity=sensitivity,
            seed=seed,
        )
    )


# ---------------------------------------------------------------------------
# identities


def identities_suite(ctx: SuiteContext) -> Report:
    cfg = ctx.config
    report = Report(config=cfg, suite="identities")
    tol = cfg.tolerance_scale

    for n in range(2, 7):
        grid = ctx.grid(n)
        _row(report, f"grid-isotropy/n={n}", "grid-isotropy",
             ok=grid.second_moment_defect() <= 1e-2,
             value=grid.second_moment_defect(), target=1e-2,
             inputs={"n": n, "nodes": len(grid)}, seed=cfg.seed)

        for name, star, convex in ctx.catalog(n):
            vol = qd.volume(star, grid)
            lhs = qd.m_p(star, -n, grid)
            rhs = (omega(n) / vol) ** (1.0 / n)
            rel = abs(lhs - rhs) / lhs
            _row(report, f"volume-moment-identity/{name}/n={n}", "volume-moment-identity",
                 ok=rel <= 1e-6, value=rel, target=1e-6,
                 inputs={"n": n, "body": name}, seed=cfg.seed)

        # closed-form volumes (quadrature accuracy, not an internal identity)
        closed = {
            "ball": omega(n),
            "cube": 2.0**n,
            "l1-ball": 2.0**n / math.factorial(n),
            "ellipsoid-axis": omega(n) * 2.0,
        }
        vol_grid = grid if n <= 3 else ctx.grid(n, max(cfg.grid_resolution * 4, 8192))
        for name, star, _ in ctx.catalog(n):
            if name not in closed:
                continue
            vol = qd.volume(star, vol_grid)
            rel = abs(vol - closed[name]) / closed[name]
            half_grid = ctx.grid(n, max(len(vol_grid) // 2, 50 * n))
            delta = abs(qd.volume(star, half_grid) - vol) / closed[name]
            hard = n <= 4 or name in ("ball", "ellipsoid-axis")
            _row(report, f"volume-closed-form/{name}/n={n}", "volume-closed-form",
                 ok=(rel <= 2e-2 * tol) if hard else None, info=not hard,
                 value=rel, target=2e-2 * tol, sensitivity=delta,
                 inputs={"n": n, "body": name, "nodes": len(vol_grid)}, seed=cfg.seed)

    # Haar sample consistency
    sample = ctx.grassmann(4, 2, max(cfg.grassmann_count, 500))
    defect = sample.mean_projector_defect()
    _row(report, "haar-consistency/n=4,k=2", "haar-consistency",
         ok=defect <= 5e-2, value=defect, target=5e-2,
         inputs={"count": len(sample)}, seed=cfg.seed)

    # moment closed forms
    g3 = ctx.grid(3)
    ball3 = dict((e[0], e[1]) for e in ctx.catalog(3))["ball"]
    for p in (-2.0, -1.0, 1.0, 2.0):
        val = qd.m_p(ball3, p, g3)
        _row(report, f"norm-moment-closed-form/ball/m_p/p={p:g}", "norm-moment-closed-form",
             ok=abs(val - 1.0) <= 1e-9, value=val, target=1.0,
             inputs={"n": 3, "p": p}, seed=cfg.seed)
        dn = bd.make_ball(3, omega(3) ** (-1.0 / 3.0))
        got = qd.e_p(dn, p, g3)
        want = qd.e_p_ball(3, p)
        _row(report, f"norm-moment-closed-form/ball/e_p/p={p:g}", "norm-moment-closed-form",
             ok=abs(got - want) / want <= 1e-6, value=got, target=want,
             inputs={"n": 3, "p": p}, seed=cfg.seed)
    g2 = ctx.grid(2)
    square = ctx.convex_of("cube", 2)[1]
    w1 = qd.w_p(square, 1.0, g2, check_convexity=False)
    _row(report, "norm-moment-closed-form/square/w_1", "norm-moment-closed-form",
         ok=abs(w1 - 4.0 / math.pi) <= 1e-3, value=w1, target=4.0 / math.pi,
         inputs={"n": 2}, seed=cfg.seed)
    cube3 = ctx.normalized("cube", 3)
    e2 = qd.e_p(cube3, 2.0, g3)
    _row(report, "norm-moment-closed-form/cube/e_2", "norm-moment-closed-form",
         ok=abs(e2 - math.sqrt(3.0 / 12.0)) <= 1e-2, value=e2, target=math.sqrt(3.0 / 12.0),
         inputs={"n": 3}, seed=cfg.seed)

    # Radon transform: constants, linearity, and the section normalization chain
    sample32 = ctx.grassmann(3, 2, 40)
    const = radon_transform(lambda d: np.ones(len(d)), 2, sample32)
    _row(report, "radon-normalization/constant", "radon-normalization",
         ok=np.abs(const - 2 * omega(2)).max() <= 1e-9,
         value=float(const[0]), target=2 * omega(2), seed=cfg.seed)
    cube_star = dict((e[0], e[1]) for e in ctx.catalog(3))["cube"]
    chain = radon_transform(lambda d: cube_star.radial(d) ** 2, 2, sample32) / 2.0
    direct = np.array([section_volume(cube_star, s) for s in sample32])
    _row(report, "radon-normalization/section-chain", "radon-normalization",
         ok=np.abs(chain - direct).max() <= 1e-9,
         value=float(np.abs(chain - direct).max()), target=1e-9, seed=cfg.seed)

    # section closed forms at n=3
    sec_ball = section_volume(ball3, orthobasis_of_direction([0.0, 0.0, 1.0]))
    _row(report, "section-closed-form/ball", "section-closed-form",
         ok=abs(sec_ball - math.pi) <= 1e-9, value=sec_ball, target=math.pi, seed=cfg.seed)
    sec_axis = section_volume(cube_star, orthobasis_of_direction([0.0, 0.0, 1.0]))
    _row(report, "section-closed-form/cube-axis", "section-closed-form",
         ok=abs(sec_axis - 4.0) <= 2e-2, value=sec_axis, target=4.0, seed=cfg.seed)
    diag = np.ones(3) / math.sqrt(3.0)
    sec_diag = section_volume(cube_star, orthobasis_of_direction(diag), resolution=2000)
    _row(report, "section-closed-form/cube-diagonal", "section-closed-form",
         ok=abs(sec_diag - 3.0 * math.sqrt(3.0)) <= 1e-2,
         value=sec_diag, target=3.0 * math.sqrt(3.0), seed=cfg.seed)

    # body algebra: map composition, rotation invariance, polar round trips
    rot = bd._rotation_for(3)
    scalemat = np.diag([1.5, 0.8, 1.1])
    k1 = bd.apply_map(bd.apply_map(cube_star, scalemat), rot)
    k2 = bd.apply_map(cube_star, rot @ scalemat)
    comp = float(np.abs(k1.radial(g3.nodes) - k2.radial(g3.nodes)).max())
    _row(report, "body-algebra/map-composition", "body-algebra",
         ok=comp <= 1e-10, value=comp, target=1e-10, seed=cfg.seed)
    rotated = bd.apply_map(cube_star, rot)
    vol_defect = abs(qd.volume(rotated, g3) - qd.volume(cube_star, g3)) / qd.volume(cube_star, g3)
    _row(report, "body-algebra/rotation-invariance/volume", "body-algebra",
         ok=vol_defect <= 2e-2 * tol, value=vol_defect, target=2e-2 * tol, seed=cfg.seed)

    # smooth bodies recover at second order in grid spacing; polytopes only
    # at first order (hull support is exact at facet normals, not vertices)
    for name, limit in (("ball", 2e-2), ("ellipsoid-axis", 2e-2), ("cube", 6e-2)):
        star, convex = ctx.convex_of(name, 3)
        back = bd.polar_body(
            bd.support_of_star(bd.polar_body(convex, g3, check=False), g3), g3, check=False
        )
        dr = d_radial(star, back, g3) / float(star.radial_on(g3).max())
        _row(report, f"polar-duality/roundtrip/{name}", "polar-duality",
             ok=dr <= limit * tol, value=dr, target=limit * tol,
             inputs={"n": 3, "body": name}, seed=cfg.seed)

    # averaged section identity: both routes equal a dimension constant
    n = 4
    grid4 = ctx.grid(n)
    count = cfg.grassmann_count
    for k in (1, 2, 3):
        constant = ((n - k) * omega(n - k) / (n * omega(n))) ** (1.0 / k)
        sample = ctx.grassmann(n, k, count)
        for name, _, _ in ctx.catalog(n):
            body = ctx.normalized(name, n)
            fn = section_function(body, sample, seed=cfg.seed)
            lhs = qd.e_p(body, -float(k), grid4) * float(fn.values.mean()) ** (1.0 / k)
            rel = abs(lhs - constant) / constant
            bar = None
            if name != "ball":
                boot = fn.values.reshape(10, -1).mean(axis=1) ** (1.0 / k)
                bar = float(np.std(boot) / math.sqrt(10) / fn.values.mean() ** (1.0 / k))
            limit = 1e-6 if name == "ball" else 2e-2 * tol
            _row(report, f"section-average-identity/{name}/n={n},k={k}",
                 "section-average-identity", ok=rel <= limit, value=rel, target=limit,
                 inputs={"n": n, "k": k, "body": name, "sample": count},
                 error=bar, seed=cfg.seed)

    # averaged identity for normalized intersection bodies of ellipsoids
    for n in (3, 4):
        gridn = ctx.grid(n)
        for k in (1, 2):
            rad = ik_ball(n, k)
            lhs_ball = (1.0 / rad) * (omega(n - k)) ** (1.0 / k)
            want = omega(k) ** (1.0 / k)
            _row(report, f"ik-average-identity/ball/n={n},k={k}", "ik-average-identity",
                 ok=abs(lhs_ball - want) / want <= 1e-9, value=lhs_ball, target=want,
                 inputs={"n": n, "k": k}, seed=cfg.seed)
            for name in ("ellipsoid-axis", "ellipsoid-rotated"):
                star = dict((e[0], e[1]) for e in ctx.catalog(n))[name]
                ik = ik_ellipsoid(star.ellipsoid, k).as_star_body()
                sample = ctx.grassmann(n, k, min(cfg.grassmann_count, 800), offset=3)
                secs = np.array([star.ellipsoid.section(s.orthocomplement()) for s in sample])
                lhs = qd.m_p(ik, -float(k), gridn) * float(secs.mean()) ** (1.0 / k)
                rel = abs(lhs - want) / want
                _row(report, f"ik-average-identity/{name}/n={n},k={k}", "ik-average-identity",
                     ok=rel <= 3e-2 * tol, value=rel, target=3e-2 * tol,
                     inputs={"n": n, "k": k, "body": name}, seed=cfg.seed)
    return report


# ---------------------------------------------------------------------------
# inequalities


def inequalities_suite(ctx: SuiteContext) -> Report:
    cfg = ctx.config
    tol = cfg.tolerance_scale
    report = Report(config=cfg, suite="inequalities")
    ps = (-2.0, -1.0, 1.0, 2.0)

    for n in (3, 4):
        grid = ctx.grid(n)
        for name, star, _ in ctx.catalog(n):
            body = ctx.normalized(name, n)
            # radial moments are power means on one quadrature: monotone exactly
            vals = {p: qd.m_p(body, p, grid) for p in ps}
            gaps = [vals[q] - vals[p] for p, q in zip(ps, ps[1:])]
            mono = all(g >= -1e-12 for g in gaps)
            if name == "ball":
                ok = mono and max(abs(g) for g in gaps) <= 1e-9
            else:
                ok = mono and min(gaps) >= 1e-5
            _row(report, f"moment-monotonicity/{name}/n={n}", "moment-monotonicity",
                 ok=ok, value=min(gaps), target=0.0,
                 inputs={"n": n, "body": name}, seed=cfg.seed)

            evals = {p: qd.e_p(body, p, grid) for p in ps}
            ball_vals = {p: qd.e_p_ball(n, p) for p in ps}
            margin = min(evals[p] - ball_vals[p] for p in ps)
            if name == "ball":
                ok = max(abs(evals[p] - ball_vals[p]) for p in ps) <= 1e-6
            else:
                ok = margin >= 1e-4
            _row(report, f"norm-moment-lower-bound/{name}/n={n}", "norm-moment-lower-bound",
                 ok=ok, value=margin, target=0.0,
                 inputs={"n": n, "body": name}, seed=cfg.seed)

            ratio_margin = math.inf
            for i, p in enumerate(ps):
                for q in ps[i + 1 :]:
                    lhs = evals[p] / evals[q]
                    rhs = ball_vals[p] / ball_vals[q]
                    ratio_margin = min(ratio_margin, rhs - lhs)
            if name == "ball":
                ok = abs(ratio_margin) <= 1e-6
            else:
                ok = ratio_margin >= -1e-9
            _row(report, f"norm-moment-ratio/{name}/n={n}", "norm-moment-ratio",
                 ok=ok, value=ratio_margin, target=0.0,
                 inputs={"n": n, "body": name}, seed=cfg.seed)

    # centroid bodies: Monte Carlo vs quadrature twin, sandwich bounds
    g3 = ctx.grid(3)
    cube1 = ctx.normalized("cube", 3)
    z2_mc = centroid_body(cube1, 2.0, g3, samples=min(cfg.mc_count, 100_000), seed=cfg.seed)
    z2_quad = centroid_body_support(cube1, 2.0, g3)
    probe = g3.nodes[:: max(1, len(g3) // 200)]
    twin = float(np.abs(z2_mc.support(probe) / z2_quad.support(probe) - 1.0).max())
    _row(report, "centroid-closed-form/mc-vs-quadrature", "centroid-closed-form",
         ok=twin <= 2e-2 * tol, value=twin, target=2e-2 * tol, seed=cfg.seed)
    want = 1.0 / math.sqrt(12.0)
    got = float(np.abs(z2_quad.support(probe) - want).max())
    _row(report, "centroid-closed-form/cube-z2", "centroid-closed-form",
         ok=got <= 1e-3, value=got, target=1e-3, seed=cfg.seed)

    for n in (3, 4):
        grid = ctx.grid(n)
        for name in ("cube", "l1-ball", "l4-ball"):
            body = ctx.normalized(name, n)
            for k in (2, 3):
                bounds = centroid_ratio_bounds(body, k, grid)
                ok = bounds["min_ratio"] >= 1.0 - 1e-3 and bounds["measured_constant"] <= 10.0
                _row(report, f"centroid-sandwich/{name}/n={n},k={k}", "centroid-sandwich",
                     ok=ok, value=bounds["measured_constant"],
                     target=10.0, extras=bounds,
                     inputs={"n": n, "k": k, "body": name}, seed=cfg.seed)

    # isotropic constants
    for n in (3, 4):
        grid = ctx.grid(n)
        l_ball = omega(n) ** (-1.0 / n) / math.sqrt(n + 2)
        for name in ("ball", "ellipsoid-rotated", "cube", "l1-ball"):
            body = ctx.normalized(name, n)
            iso = isotropic_position(body, grid, samples=cfg.mc_count, seed=cfg.seed)
            extras = {"stderr": iso.stderr, "isotropy_defect": iso.diagnostics["isotropy_defect"]}
            if name == "ball":
                ok = abs(iso.constant - l_ball) / l_ball <= 1e-6
            elif name == "ellipsoid-rotated":
                ok = abs(iso.constant - l_ball) / l_ball <= 2e-2 * tol
            elif name == "cube":
                ok = abs(iso.constant - math.sqrt(1.0 / 12.0)) <= 1e-2 * tol
            else:
                ok = iso.constant >= l_ball * (1.0 - 3e-2)
            _row(report, f"isotropic-constant/{name}/n={n}", "isotropic-constant",
                 ok=ok, value=iso.constant, target=l_ball,
                 inputs={"n": n, "body": name}, extras=extras,
                 error=iso.stderr, seed=cfg.seed)
        iso_cube = isotropic_position(ctx.normalized("cube", n), grid,
                                      samples=cfg.mc_count, seed=cfg.seed)
        z2 = centroid_body_support(ctx.normalized("cube", n), 2.0, grid)
        ratio = z2.support(grid.nodes[:100]) / iso_cube.constant
        _row(report, f"isotropic-constant/z2-ball/n={n}", "isotropic-constant",
             ok=float(np.abs(ratio - 1.0).max()) <= 3e-2 * tol,
             value=float(np.abs(ratio - 1.0).max()), target=3e-2 * tol,
             inputs={"n": n}, seed=cfg.seed)

    # volume products (polar duality at the volume level)
    for n in (3, 4):
        grid = ctx.grid(n)
        upper = n * omega(n) ** (2.0 / n)
        for name in CONVEX_CATALOG:
            star, convex = ctx.convex_of(name, n)
            val = volume_product(star, convex, grid)
            ok = 4.0 <= val <= upper * (1.0 + 2e-2 * tol)
            _row(report, f"volume-product-range/{name}/n={n}", "volume-product-range",
                 ok=ok, value=val, target=upper,
                 inputs={"n": n, "body": name}, seed=cfg.seed)
        ell, ell_c = ctx.convex_of("ellipsoid-axis", n)
        ball, ball_c = ctx.convex_of("ball", n)
        inv = abs(volume_product(ell, ell_c, grid) - volume_product(ball, ball_c, grid))
        _row(report, f"volume-product-range/linear-invariance/n={n}", "volume-product-range",
             ok=inv <= 2e-2 * upper * tol, value=inv, target=2e-2 * upper,
             inputs={"n": n}, seed=cfg.seed)

    # slab sandwich in the last coordinate, and the two-subspace ratio chain
    for n in (3, 4):
        grid = ctx.grid(n)
        e_last = np.zeros(n)
        e_last[-1] = 1.0
        base = qd.Subspace(np.eye(n)[:, : n - 1])
        for name in ("cube", "l1-ball", "l4-ball", "ellipsoid-axis"):
            star, convex = ctx.convex_of(name, n)
            r = float(star.radial(e_last)[0])
            big_r = float(convex.support(e_last)[0])
            mid = section_volume(star, base)
            vol = qd.volume(star, grid)
            lo = 2.0 * r / n * mid
            hi = 2.0 * big_r * mid
            ok = lo <= vol * (1.0 + 2e-2 * tol) and vol <= hi * (1.0 + 2e-2 * tol)
            _row(report, f"slab-sandwich/{name}/n={n}", "slab-sandwich",
                 ok=ok, value=vol, extras={"lower": lo, "upper": hi},
                 inputs={"n": n, "body": name}, seed=cfg.seed)

        rng = np.random.default_rng(cfg.seed + 77)
        for name in ("cube", "l1-ball", "ellipsoid-axis"):
            star, _ = ctx.convex_of(name, n)
            rho = star.radial_on(grid)
            theta1 = grid.nodes[int(np.argmax(rho))]
            theta2 = grid.nodes[int(np.argmin(rho))]
            big_r, small_r = float(rho.max()), float(rho.min())
            if abs(abs(theta1 @ theta2) - 1.0) < 1e-9:
                continue
            for k in (2, min(3, n - 1)):
                raw = np.column_stack([theta1, theta2, rng.standard_normal((n, k - 1))])
                q, _ = np.linalg.qr(raw)
                extra = q[:, 2 : k + 1]
                f1 = qd.span_of(theta1, *extra.T)
                f2 = qd.span_of(theta2, *extra.T)
                ratio = section_volume(star, f1) / section_volume(star, f2)
                lo = big_r / (k * small_r)
                hi = k * big_r / small_r
                ok = lo * (1.0 - 2e-2 * tol) <= ratio <= hi * (1.0 + 2e-2 * tol)
                _row(report, f"slab-sandwich/ratio-chain/{name}/n={n},k={k}", "slab-sandwich",
                     ok=ok, value=ratio, extras={"lower": lo, "upper": hi},
                     inputs={"n": n, "k": k, "body": name}, seed=cfg.seed)

    # section/shadow products stay in a narrow band
    n = 4
    grid4 = ctx.grid(n)
    for k in (1, 2):
        sample = ctx.grassmann(n, k, 200, offset=5)
        for name, _, _ in ctx.catalog(n):
            body = ctx.normalized(name, n)
            prods = section_shadow_products(body, k, sample, grid4, seed=cfg.seed)
            band = float(prods.max() / prods.min())
            ok = band <= 4.0
            if name == "ball":
                # constant across subspaces up to the quadrature noise floor
                ok = ok and band <= 1.0 + 3e-2 * tol
            _row(report, f"section-shadow-product/{name}/n={n},k={k}", "section-shadow-product",
                 ok=ok, value=band, target=4.0,
                 extras={"min": float(prods.min()), "max": float(prods.max())},
                 inputs={"n": n, "k": k, "body": name, "sample": len(sample)}, seed=cfg.seed)
    # invariance of the product under a volume-preserving map of an ellipsoid
    ball1 = ctx.normalized("ball", n)
    stretched = bd.apply_map(ball1, np.diag([2.0, 0.5, 1.0, 1.0]))
    sample = ctx.grassmann(n, 2, 60, offset=6)
    p_ball = section_shadow_products(ball1, 2, sample, grid4, seed=cfg.seed)
    p_str = section_shadow_products(stretched, 2, sample, grid4, seed=cfg.seed)
    shift = abs(float(np.log(p_str.mean() / p_ball.mean())))
    _row(report, "section-shadow-product/map-invariance", "section-shadow-product",
         ok=shift <= 5e-2 * tol, value=shift, target=5e-2, seed=cfg.seed)
    return report


# ---------------------------------------------------------------------------
# intersection bodies


def ik_suite(ctx: SuiteContext) -> Report:
    cfg = ctx.config
    tol = cfg.tolerance_scale
    report = Report(config=cfg, suite="ik")

    for n in (3, 4, 5):
        for k in range(1, n):
            rad = ik_ball(n, k)
            defect = abs(omega(k) * rad**k - omega(n - k))
            _row(report, f"ik-closed-form/ball/n={n},k={k}", "ik-closed-form",
                 ok=defect <= 1e-12, value=rad, target=defect, seed=cfg.seed)

    # solver recovery of closed forms
    solve_res = {2: 120, 3: 600, 4: 1200, 5: 800}
    for n in (2, 3, 4):
        grid = ctx.grid(n, solve_res[n])
        for k in range(1, n):
            sample = ctx.grassmann(n, k, 20 * len(grid) // n, offset=1)
            ball = dict((e[0], e[1]) for e in ctx.catalog(n))["ball"]
            out = ik_solve(ball, k, grid, sample, seed=cfg.seed)
            rel = float(np.abs(out.body.radial(grid.half) - ik_ball(n, k)).max()) / ik_ball(n, k)
            _row(report, f"ik-solver-recovery/ball/n={n},k={k}", "ik-solver-recovery",
                 ok=rel <= 1e-2 and out.exists_numerically, value=rel, target=1e-2,
                 extras={"residual": out.residual, "negativity": out.negativity},
                 inputs={"n": n, "k": k, "nodes": len(grid)}, seed=cfg.seed)

    n = 3
    grid = ctx.grid(n, 1200)
    sample_cache = {}
    for k in (1, 2):
        sample_cache[k] = ctx.grassmann(n, k, 20 * len(grid) // n, offset=2)
    for name in ("ellipsoid-axis", "ellipsoid-rotated"):
        star = dict((e[0], e[1]) for e in ctx.catalog(n))[name]
        for k in (1, 2):
            out = ik_solve(star, k, grid, sample_cache[k], seed=cfg.seed)
            target = ik_ellipsoid(star.ellipsoid, k).as_star_body()
            ref = target.radial(grid.half)
            rel = float(np.abs(out.body.radial(grid.half) - ref).max() / ref.max())
            _row(report, f"ik-solver-recovery/{name}/n={n},k={k}", "ik-solver-recovery",
                 ok=rel <= 2e-2 * tol and out.exists_numerically, value=rel, target=2e-2 * tol,
                 extras={"residual": out.residual, "negativity": out.negativity},
                 inputs={"n": n, "k": k, "body": name}, seed=cfg.seed)

    # linear-image law checked against the defining sections
    for k in (1, 2):
        star = dict((e[0], e[1]) for e in ctx.catalog(3))["ellipsoid-axis"]
        ik = ik_ellipsoid(star.ellipsoid, k)
        sample = ctx.grassmann(3, k, 100, offset=4)
        lhs = np.array([ik.section(s) for s in sample])
        rhs = np.array([star.ellipsoid.section(s.orthocomplement()) for s in sample])
        rel = float(np.abs(lhs / rhs - 1.0).max())
        _row(report, f"ik-linear-image/ellipsoid/k={k}", "ik-linear-image",
             ok=rel <= 1e-2, value=rel, target=1e-2, seed=cfg.seed)

    # dilation covariance of the solver
    cube = dict((e[0], e[1]) for e in ctx.catalog(3))["cube"]
    scaled = bd.scale_body(cube, 1.3)
    for k in (1, 2):
        out1 = ik_solve(cube, k, grid, sample_cache[k], seed=cfg.seed)
        out2 = ik_solve(scaled, k, grid, sample_cache[k], seed=cfg.seed)
        factor = 1.3 ** ((3.0 - k) / k)
        ratio = out2.body.radial(grid.half) / out1.body.radial(grid.half)
        rel = float(np.abs(ratio / factor - 1.0).max())
        _row(report, f"ik-scaling/cube/k={k}", "ik-scaling",
             ok=rel <= 2e-2 * tol, value=rel, target=2e-2 * tol,
             inputs={"t": 1.3, "k": k}, seed=cfg.seed)

    # convention factor: classical body is twice the k=1 normalized solve
    lut = bd.tabulate_star_body(intersection_body(cube, seed=cfg.seed), grid)
    out1 = ik_solve(cube, 1, grid, sample_cache[1], seed=cfg.seed)
    rel = float(
        np.abs(2.0 * out1.body.radial(grid.half) - lut.radial(grid.half)).max()
        / lut.radial(grid.half).max()
    )
    _row(report, "ik-convention-factor/cube", "ik-convention-factor",
         ok=rel <= 2e-2 * tol, value=rel, target=2e-2 * tol, seed=cfg.seed)

    # convexity of classical intersection bodies of convex bodies,
    # plus the distance-to-ball bound preserved from the hyperplane case
    for n in (3, 4):
        gridn = ctx.grid(n)
        search = ctx.grid(n, 50 * n * 4)
        for name in ("ball", "ellipsoid-axis", "cube", "l1-ball", "l4-ball"):
            ik_body = ctx.intersection(name, n)
            defect = bd.convexity_defect_radial(ik_body, gridn, seed=cfg.seed)
            _row(report, f"intersection-convexity/{name}/n={n}", "intersection-convexity",
                 ok=defect <= 2e-3 * tol, value=defect, target=2e-3 * tol,
                 inputs={"n": n, "body": name}, seed=cfg.seed)
            ball = bd.make_ball(n)
            rep = d_bm_upper(ik_body, ball, gridn, restarts=3, seed=cfg.seed,
                             sweeps=2 * n * n, search_grid=search)
            _row(report, f"intersection-roundness/bm/{name}/n={n}", "intersection-roundness",
                 ok=rep.value <= 5.0, value=rep.value, target=5.0,
                 extras={"d_geometric": d_geometric(ik_body, ball, gridn)},
                 inputs={"n": n, "body": name}, seed=cfg.seed)

    # solver-based roundness rows (hypotheses checked, not assumed)
    rows = intersection_roundness(
        ctx.normalized("cube", 3), 2, grid, sample_cache[2],
        extreme_sample=ctx.grassmann(3, 2, 300, offset=7),
        seed=cfg.seed, search_grid=ctx.grid(3, 600),
    )
    met = rows["hypotheses_met"]
    _row(report, "intersection-roundness/solver/cube/n=3,k=2", "intersection-roundness",
         ok=rows.get("spread_ok", True) if met else None, info=not met,
         value=rows.get("d_geometric"), target=rows.get("spread_bound"),
         extras=rows, seed=cfg.seed)

    # volume-radius comparisons for normalized intersection bodies
    for n in (3, 4):
        gridn = ctx.grid(n)
        r_n = omega(n) ** (-1.0 / n)
        l_ball = omega(n) ** (-1.0 / n) / math.sqrt(n + 2)
        ik_dn_vol = {k: omega(n) * ik_ball(n, k, r_n) ** n for k in (1, 2)}
        for name in ("ellipsoid-axis", "ellipsoid-rotated"):
            body = ctx.normalized(name, n)
            iso = isotropic_position(body, gridn, samples=cfg.mc_count, seed=cfg.seed)
            for k in (1, 2):
                ik = ik_ellipsoid(body.ellipsoid, k)
                lhs = (ik.volume() / ik_dn_vol[k]) ** (1.0 / n)
                rhs = l_ball / iso.constant
                rel = abs(lhs - rhs)
                _row(report, f"ik-volume-ratio-lower/{name}/n={n},k={k}",
                     "ik-volume-ratio-lower", ok=rel <= 2e-2 * tol,
                     value=lhs, target=rhs, error=iso.stderr,
                     inputs={"n": n, "k": k, "body": name}, seed=cfg.seed)
        for name in ("cube", "l1-ball"):
            body = ctx.normalized(name, n)
            iso = isotropic_position(body, gridn, samples=cfg.mc_count, seed=cfg.seed)
            ik_body = bd.scale_body(ctx.intersection(name, n), 0.5)
            lhs = (qd.volume(ik_body, gridn) / ik_dn_vol[1]) ** (1.0 / n)
            rhs = l_ball / iso.constant
            _row(report, f"ik-volume-ratio-lower/{name}/n={n},k=1", "ik-volume-ratio-lower",
                 ok=lhs >= rhs + 5e-3, value=lhs, target=rhs,
                 error=iso.stderr, inputs={"n": n, "k": 1, "body": name}, seed=cfg.seed)
            ball = bd.make_ball(n)
            rep = d_bm_upper(ik_body, ball, gridn, restarts=3, seed=cfg.seed,
                             sweeps=2 * n * n, search_grid=ctx.grid(n, 50 * n * 4))
            fitted = lhs / math.log1p(rep.value)
            trend = math.log(n)  # the k log k branch degenerates at k = 1
            _row(report, f"ik-volume-ratio-upper/{name}/n={n},k=1", "ik-volume-ratio-upper",
                 info=True, value=fitted, target=trend,
                 extras={"lhs": lhs, "d_bm_upper": rep.value},
                 inputs={"n": n, "k": 1, "body": name}, seed=cfg.seed)
    return report


# ---------------------------------------------------------------------------
# covering approximants


def bp_suite(ctx: SuiteContext) -> Report:
    cfg = ctx.config
    tol = cfg.tolerance_scale
    report = Report(config=cfg, suite="bp")
    rng = np.random.default_rng(cfg.seed + 11)

    # tube ellipsoid inclusions on random (z, t) pairs
    worst_inner, worst_outer = math.inf, math.inf
    for _ in range(100):
        n = int(rng.integers(2, 7))
        z = rng.standard_normal(n) * (3.0 * rng.random())
        t = 0.1 + 3.0 * rng.random()
        ell = enclosing_ellipsoid(z, t)
        u = rng.standard_normal((1000, n))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        pts = z + t * u
        inner = 1.0 - float(np.einsum("ij,jk,ik->i", pts, ell.inverse_shape, pts).max())
        th = rng.standard_normal((1000, n))
        th /= np.linalg.norm(th, axis=1, keepdims=True)
        outer = float((2.0 * np.abs(th @ z) + 2.0 * math.sqrt(2.0) * t - ell.support(th)).min())
        worst_inner = min(worst_inner, inner)
        worst_outer = min(worst_outer, outer)
    _row(report, "tube-ellipsoid-inclusion/inner", "tube-ellipsoid-inclusion",
         ok=worst_inner >= -1e-9, value=worst_inner, target=-1e-9, seed=cfg.seed)
    _row(report, "tube-ellipsoid-inclusion/outer", "tube-ellipsoid-inclusion",
         ok=worst_outer >= -1e-9, value=worst_outer, target=-1e-9, seed=cfg.seed)

    # union vs radial sum
    g3 = ctx.grid(3)
    parts = [
        bd.make_ellipsoid(np.diag([4.0, 0.25, 0.25])),
        bd.make_ellipsoid(np.diag([0.25, 4.0, 0.25])),
        bd.make_ellipsoid(np.diag([0.25, 0.25, 4.0])),
    ]
    union = bd.union_body(parts)
    for k in (1, 2, 3):
        summed = bd.radial_sum(parts, k)
        ru = union.radial(g3.nodes)
        rs = summed.radial(g3.nodes)
        bound = len(parts) ** (1.0 / k)
        ok = bool(np.all(ru <= rs * (1 + 1e-12)) and np.all(rs <= bound * ru * (1 + 1e-12)))
        _row(report, f"union-radial-sum-distance/bounds/k={k}", "union-radial-sum-distance",
             ok=ok, value=float((rs / ru).max()), target=bound, seed=cfg.seed)
    seven = [bd.make_ball(3) for _ in range(7)]
    d_val = star_distance(bd.union_body(seven), bd.radial_sum(seven, 2), g3)
    _row(report, "union-radial-sum-distance/log-bound", "union-radial-sum-distance",
         ok=d_val <= math.e, value=d_val, target=math.e,
         inputs={"count": 7, "k": 2}, seed=cfg.seed)

    # disk covering sanity against the planar oracle window
    disk = bd.make_ball(2)
    cover = greedy_cover(disk, 0.5, probes=min(cfg.probe_count, 50_000), seed=cfg.seed)
    _row(report, "outer-volume-ratio/disk-cover", "outer-volume-ratio",
         ok=4 <= cover.count <= 12, value=cover.count, target=12, seed=cfg.seed)

    # ball pipeline: single-ellipsoid path
    ball4 = bd.make_ball(4)
    grid4 = ctx.grid(4)
    curve = bp_curve(ball4, [1, 2], grid4, probes=min(cfg.probe_count, 50_000), seed=cfg.seed)
    for item in curve:
        ok = (
            item.cover_count == 1
            and abs(item.cover_radius - 1.0) <= 1e-12
            and abs(item.ovr - math.e * math.sqrt(2.0)) <= 1e-6
            and item.contained
        )
        _row(report, f"outer-volume-ratio/ball/k={item.k}", "outer-volume-ratio",
             ok=ok, value=item.ovr, target=math.e * math.sqrt(2.0), seed=cfg.seed)

    # main pipeline: cube and l1 ball across dimensions
    fitted = 0.0
    for n in (4, 5, 6):
        gridn = ctx.grid(n)
        for name in ("cube", "l1-ball"):
            star = dict((e[0], e[1]) for e in ctx.catalog(n))[name]
            curve = bp_curve(star, range(1, n), gridn, probes=cfg.probe_count,
                             seed=cfg.seed, samples=cfg.mc_count)
            prev = None
            for item in curve:
                fitted = max(fitted, item.ovr / item.bound)
                mono = prev is None or item.ovr <= prev * 1.10
                _row(report, f"outer-volume-ratio/{name}/n={n},k={item.k}",
                     "outer-volume-ratio",
                     ok=item.contained and mono, value=item.ovr, target=30.0 * item.bound,
                     extras={
                         "t": item.cover_radius,
                         "N": item.cover_count,
                         "bound": item.bound,
                         "analytic_t": item.analytic_radius,
                         "slack": item.diagnostics["containment_slack"],
                     },
                     inputs={"n": n, "k": item.k, "body": name}, seed=cfg.seed)
                prev = item.ovr
    _row(report, "outer-volume-ratio/fitted-constant", "outer-volume-ratio",
         ok=fitted <= 30.0, value=fitted, target=30.0, seed=cfg.seed)

    # volume growth under ball sums
    g3 = ctx.grid(3)
    ball3, ball3_c = ctx.convex_of("ball", 3)
    ratios = minkowski_ball_ratios(ball3, ball3_c, [1.0, 2.0], g3, seed=cfg.seed)
    ok = abs(ratios[0] - 2.0) <= 1e-6 and abs(ratios[1] - 1.5) <= 1e-6
    _row(report, "ball-sum-growth/ball-closed-form", "ball-sum-growth",
         ok=ok, value=ratios[0], target=2.0, seed=cfg.seed)
    cube3, cube3_c = ctx.convex_of("cube", 3)
    norm = normalize_position(cube3, g3, samples=cfg.mc_count, seed=cfg.seed)
    side = 2.0 * (omega(3) / 8.0) ** (1.0 / 3.0)
    got = minkowski_ball_ratios(norm, bd.support_of_star(norm, g3), [1.0], g3, seed=cfg.seed)[0]
    oracle = box_ball_sum_volume([side] * 3, 1.0) ** (1.0 / 3.0) / omega(3) ** (1.0 / 3.0)
    _row(report, "ball-sum-growth/cube-tube-formula", "ball-sum-growth",
         ok=abs(got - oracle) / oracle <= 2e-2 * tol, value=got, target=oracle,
         seed=cfg.seed)
    grid4 = ctx.grid(4)
    cube4, _ = ctx.convex_of("cube", 4)
    norm4 = normalize_position(cube4, grid4, samples=cfg.mc_count, seed=cfg.seed)
    ts = [1.0, 1.5, 2.0]
    vals = minkowski_ball_ratios(norm4, bd.support_of_star(norm4, grid4), ts, grid4,
                                 mc_samples=cfg.mc_count, seed=cfg.seed)
    _row(report, "ball-sum-growth/cube-n=4-bounded", "ball-sum-growth",
         ok=max(vals) <= 4.0, value=max(vals), target=4.0,
         extras={"ratios": vals, "t": ts}, seed=cfg.seed)
    return report


# ---------------------------------------------------------------------------
# distances


def distances_suite(ctx: SuiteContext) -> Report:
    cfg = ctx.config
    tol = cfg.tolerance_scale
    report = Report(config=cfg, suite="distances")
    g3 = ctx.grid(3)
    names3 = dict((e[0], e[1]) for e in ctx.catalog(3))

    cube = names3["cube"]
    ball = names3["ball"]
    _row(report, "distance-metric-properties/scale-invariance", "distance-metric-properties",
         ok=abs(d_geometric(cube, bd.scale_body(cube, 3.7), g3) - 1.0) <= 1e-12,
         value=d_geometric(cube, bd.scale_body(cube, 3.7), g3), target=1.0, seed=cfg.seed)
    trio = [ball, names3["ellipsoid-axis"], cube]
    d12 = d_geometric(trio[0], trio[1], g3)
    d23 = d_geometric(trio[1], trio[2], g3)
    d13 = d_geometric(trio[0], trio[2], g3)
    _row(report, "distance-metric-properties/multiplicative-triangle",
         "distance-metric-properties", ok=d13 <= d12 * d23 * (1.0 + 1e-12),
         value=d13, target=d12 * d23, seed=cfg.seed)
    got = d_geometric(cube, ball, g3)
    _row(report, "distance-metric-properties/cube-ball", "distance-metric-properties",
         ok=abs(got - math.sqrt(3.0)) / math.sqrt(3.0) <= 2e-2 * tol,
         value=got, target=math.sqrt(3.0), seed=cfg.seed)
    radii = d_radial(bd.make_ball(3, 2.0), ball, g3)
    _row(report, "distance-metric-properties/radial-balls", "distance-metric-properties",
         ok=abs(radii - 1.0) <= 1e-12, value=radii, target=1.0, seed=cfg.seed)

    # Banach-Mazur anchors
    g2 = ctx.grid(2)
    square = dict((e[0], e[1]) for e in ctx.catalog(2))["cube"]
    planted = bd.apply_map(square, np.array([[1.0, 0.3], [0.0, 1.0]]))
    rep = d_bm_upper(square, planted, g2, restarts=6, seed=cfg.seed)
    _row(report, "bm-upper-anchor/planted", "bm-upper-anchor",
         ok=rep.value <= 1.02, value=rep.value, target=1.02, seed=cfg.seed)
    rep = d_bm_upper(names3["ellipsoid-rotated"], ball, g3, restarts=2, seed=cfg.seed)
    _row(report, "bm-upper-anchor/ellipsoid-ball", "bm-upper-anchor",
         ok=rep.value <= 1.02, value=rep.value, target=1.02, seed=cfg.seed)
    rep_cube = d_bm_upper(cube, ball, g3, restarts=4, seed=cfg.seed)
    _row(report, "bm-upper-anchor/cube-ball", "bm-upper-anchor",
         ok=rep_cube.value <= math.sqrt(3.0) * (1.0 + 2e-2), value=rep_cube.value,
         target=math.sqrt(3.0), seed=cfg.seed)
    witness_gap = abs(
        d_geometric(cube, bd.apply_map(ball, rep_cube.witness), g3) - rep_cube.value
    )
    _row(report, "bm-upper-anchor/witness-reproduces", "bm-upper-anchor",
         ok=witness_gap <= 1e-6, value=witness_gap, target=1e-6, seed=cfg.seed)
    moved = bd.apply_map(cube, np.array([[1.2, 0.1, 0.0], [0.0, 0.9, 0.05], [0.0, 0.0, 1.1]]))
    rep_moved = d_bm_upper(moved, ball, g3, restarts=4, seed=cfg.seed)
    drift = abs(rep_moved.value - rep_cube.value) / rep_cube.value
    _row(report, "bm-upper-anchor/map-invariance", "bm-upper-anchor",
         ok=drift <= 2e-2, value=drift, target=2e-2,
         extras={"moved": rep_moved.value, "base": rep_cube.value}, seed=cfg.seed)

    # section extremes anchors
    sample31 = ctx.grassmann(3, 1, 200, offset=8)
    ext = section_extremes(ball, 1, sample31)
    _row(report, "section-spread/ball", "section-spread",
         ok=abs(ext.ratio - 1.0) <= 1e-9, value=ext.ratio, target=1.0, seed=cfg.seed)
    ext = section_extremes(names3["ellipsoid-axis"], 1, sample31)
    _row(report, "section-spread/ellipsoid-lines", "section-spread",
         ok=abs(ext.ratio - 2.0) <= 2e-2, value=ext.ratio, target=2.0,
         extras={"delta": ext.delta}, seed=cfg.seed)

    # section-spread roundness bound over the convex catalog
    for n in (3, 4, 5):
        gridn = ctx.grid(n)
        for k in range(2, n):
            sample = ctx.grassmann(n, k, 500, offset=9)
            for name in CONVEX_CATALOG:
                star = dict((e[0], e[1]) for e in ctx.catalog(n))[name]
                res = roundness_from_sections(star, k, sample, gridn, seed=cfg.seed)
                _row(report, f"section-spread-roundness/{name}/n={n},k={k}",
                     "section-spread-roundness", ok=res["ok"],
                     value=res["d_geometric"], target=res["bound"],
                     extras={"delta": res["delta"]},
                     inputs={"n": n, "k": k, "body": name, "sample": len(sample)},
                     seed=cfg.seed)
    return report


_SUITE_FNS = {
    "identities": identities_suite,
    "inequalities": inequalities_suite,
    "ik": ik_suite,
    "bp": bp_suite,
    "distances": distances_suite,
}


def run_suite(name: str, config: RunConfig) -> Report:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    ctx = SuiteContext(config)
    if name != "all":
        return _SUITE_FNS[name](ctx)
    merged = Report(config=config, suite="all")
    for part in ("identities", "inequalities", "ik", "bp", "distances"):
        sub = _SUITE_FNS[part](ctx)
        merged.rows.extend(sub.rows)
    return merged
