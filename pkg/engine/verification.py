"""
Invariant suites behind the `verify` command.

Each suite is a function of a RunConfig returning CheckResults: a measured
residual and the threshold it must not exceed. Every suite seeds its own
generator from the configuration, so suites give identical numbers whether
run alone or as part of "all".
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from . import (boundary, core_models, domains, earthquake_lab, geodesics_duality,
               mgh_holonomy, surfaces_gauss)
from .circle_maps import CircleMap
from .config_loader import RunConfig
from .core_models import (GEN_U, GEN_V, Isometry, MatPoint, QuadricPoint, TangentVector,
                          inner, matrix_of, q22, vector_of)
from .errors import AdsError, DegenerateLattice, Inconclusive, UnknownSuite
from .hyperbolic import OrientedGeodesic, cayley_inverse, mobius, rp1_act, rp1_angle, rp1_distance

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    residual: float
    threshold: float
    passed: bool

    def to_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "residual": self.residual,
                "threshold": self.threshold, "passed": self.passed}


class _Checks:
    """
    Collects results for one suite.

    `alg` and `fd` thresholds are multiples of the configured algebraic and
    finite-difference tolerances; `add` takes a fixed threshold.
    """

    def __init__(self, suite: str, cfg: Optional[RunConfig] = None):
        self.suite = suite
        self.cfg = cfg if cfg is not None else RunConfig()
        self.results: List[CheckResult] = []

    def add(self, name: str, residual: float, threshold: float) -> None:
        residual = float(residual)
        passed = bool(np.isfinite(residual) and residual <= threshold)
        self.results.append(CheckResult(self.suite, name, residual, threshold, passed))
        log.debug("%s/%s residual %.3e threshold %.1e", self.suite, name, residual, threshold)

    def alg(self, name: str, residual: float, scale: float = 1.0) -> None:
        self.add(name, residual, scale * self.cfg.tol_alg)

    def fd(self, name: str, residual: float, scale: float = 1.0) -> None:
        self.add(name, residual, scale * self.cfg.tol_fd)

    def flag(self, name: str, ok: bool) -> None:
        self.add(name, 0.0 if ok else 1.0, 0.0)


def _rng(cfg: RunConfig) -> np.random.Generator:
    return np.random.default_rng(cfg.seed)


def _random_isometry(rng: np.random.Generator) -> Isometry:
    return Isometry(core_models.random_sl2(rng, 0.5), core_models.random_sl2(rng, 0.5))


def _leaf_away_from_i(rng: np.random.Generator) -> OrientedGeodesic:
    """Random leaf with i strictly on its right."""
    while True:
        a, b = rng.uniform(0, 2 * math.pi, size=2)
        leaf = OrientedGeodesic(a, b)
        if leaf.is_degenerate(0.8):
            continue
        s = leaf.side(1j)
        if abs(s) > 0.1:
            return leaf if s > 0 else leaf.reversed()


def _disc_sample(rng: np.random.Generator, radius: float = 0.9) -> complex:
    r = radius * math.sqrt(rng.random())
    w = r * cmath.exp(2j * math.pi * rng.random())
    return 1j * (1 + w) / (1 - w)


# =============================================================================
# Suites
# =============================================================================

def suite_core(cfg: RunConfig) -> List[CheckResult]:
    checks = _Checks("core", cfg)
    rng = _rng(cfg)
    points = [core_models.random_point(rng) for _ in range(1000)]
    checks.add("det-identity", max(abs(np.linalg.det(p.matrix()) - 1) for p in points), 1e-12)
    checks.add("matrix-roundtrip", max(
        min(np.linalg.norm(core_models.quadric_from_mat(core_models.mat_from_quadric(p, cfg.tol_alg), cfg.tol_alg).x - s * p.x)
            for s in (1.0, -1.0)) for p in points[:200]), 1e-12)

    vs, ws = rng.normal(size=(200, 4)), rng.normal(size=(200, 4))
    checks.add("inner-polarisation", max(
        abs(inner(v, w) - core_models.mat_inner(matrix_of(v), matrix_of(w))) for v, w in zip(vs, ws)), 1e-12)

    worst = 0.0
    for p in points[:200]:
        g = _random_isometry(rng)
        u = core_models.random_tangent(rng, p).v
        v = core_models.random_tangent(rng, p).v
        worst = max(worst, abs(inner(g.act_vector(u), g.act_vector(v)) - inner(u, v)))
    checks.alg("isometry-inner", worst)

    worst = 0.0
    for p in points:
        u = core_models.random_tangent(rng, p).v
        v = core_models.random_tangent(rng, p).v
        gram = inner(u, u) * inner(v, v) - inner(u, v) ** 2
        if abs(gram) < 1e-3 * (np.linalg.norm(u) * np.linalg.norm(v)) ** 2:
            continue
        worst = max(worst, abs(core_models.sectional_curvature(p, u, v, cfg.tol_alg) + 1))
    checks.alg("sectional-curvature", worst, 0.1)

    worst, done = 0.0, 0
    while done < 20:
        c = rng.uniform(-1, 1, size=3)
        u, v = rng.normal(size=3), rng.normal(size=3)
        g = core_models.cover_metric_callable(c)
        gram = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
        if abs(gram) < 0.1:
            continue
        k = core_models.christoffel_curvature(core_models.cover_metric_callable, c, u, v, h=cfg.fd_step)
        worst = max(worst, abs(k + 1))
        done += 1
    checks.fd("christoffel-curvature", worst, 100)

    checks.alg("cover-roundtrip", max(
        np.linalg.norm(core_models.cover_project(core_models.cover_lift(p, k)).x - p.x)
        for p in points[:200] for k in (-1, 0, 2)), 0.1)

    worst = 0.0
    for _ in range(20):
        a, b, t = rng.uniform(-1, 1, size=3)
        fd = core_models.pullback_metric(core_models.cover_chart_embedding, (a, b, t), h=cfg.fd_step)
        worst = max(worst, float(np.max(np.abs(fd - core_models.cover_chart_metric(a, b)))))
    checks.fd("cover-metric", worst)
    return checks.results


def suite_geodesics(cfg: RunConfig) -> List[CheckResult]:
    checks = _Checks("geodesics", cfg)
    rng = _rng(cfg)
    ts = np.linspace(-2.0, 2.0, 41)
    worst_q = worst_period = worst_dual = 0.0
    for _ in range(50):
        g = _random_isometry(rng)
        x = QuadricPoint(g.act_vector(vector_of(np.eye(2))))
        for gen in (GEN_U, GEN_V, GEN_U + GEN_V):
            v = TangentVector(x, g.act_vector(vector_of(gen)), tol=1e-8)
            for t in ts:
                worst_q = max(worst_q, geodesics_duality.exp_point(x, v, float(t)).residual())
        time = geodesics_duality.exp_point(x, g.act_vector(vector_of(GEN_U)), math.pi)
        worst_period = max(worst_period, float(np.linalg.norm(time.x + x.x)))
        antipode = geodesics_duality.exp_point(x, g.act_vector(vector_of(GEN_U)), math.pi / 2)
        worst_dual = max(worst_dual, abs(inner(antipode.x, x.x)))
    checks.alg("quadric-along-geodesics", worst_q, 0.1)
    checks.alg("timelike-period", worst_period)
    checks.alg("dual-plane-antipode", worst_dual)

    worst_pair = worst_orth = 0.0
    for _ in range(20):
        l1 = _leaf_away_from_i(rng)
        l2 = _leaf_away_from_i(rng)
        g = geodesics_duality.spacelike_geodesic(l1, l2)
        r1, r2 = g.hyperbolic_pair()
        worst_pair = max(worst_pair, *(
            min(abs(a - b) % (2 * math.pi), 2 * math.pi - abs(a - b) % (2 * math.pi))
            for a, b in ((r1.start, l1.start), (r1.end, l1.end), (r2.start, l2.start), (r2.end, l2.end))))
        dual = geodesics_duality.dual_geodesic(g)
        for s in (-1.0, 0.0, 0.7):
            for t in (-0.5, 0.0, 1.2):
                worst_orth = max(worst_orth, abs(inner(g.point(s).x, dual.point(t).x)))
    checks.alg("spacelike-endpoints", worst_pair, 10)
    checks.alg("dual-geodesic-orthogonal", worst_orth)

    worst = 0.0
    for _ in range(10):
        p = complex(rng.normal(), math.exp(rng.normal() * 0.5))
        q = complex(rng.normal(), math.exp(rng.normal() * 0.5))
        g = geodesics_duality.timelike_geodesic(p, q)
        for t in np.linspace(0, math.pi, 7):
            m = matrix_of(g.point(float(t)).x)
            worst = max(worst, abs(complex(mobius(m, q)) - p))
    checks.alg("timelike-membership", worst, 10)
    return checks.results


def suite_boundary(cfg: RunConfig) -> List[CheckResult]:
    checks = _Checks("boundary", cfg)
    rng = _rng(cfg)
    pts = [boundary.BoundaryPoint(*rng.uniform(0, math.pi, size=2)) for _ in range(200)]
    adjugate = np.array([[0.0, -1.0], [1.0, 0.0]])
    checks.alg("swap", max(
        boundary.boundary_from_rank1(adjugate @ p.matrix().T @ adjugate.T, cfg.tol_alg).distance(boundary.boundary_swap(p))
        for p in pts), 0.1)

    worst = 0.0
    for p in pts:
        a, b = core_models.random_sl2(rng, 0.5), core_models.random_sl2(rng, 0.5)
        image = boundary.boundary_from_rank1(a @ p.matrix() @ np.linalg.inv(b), cfg.tol_alg)
        worst = max(worst, image.distance(p.transform(a, b)))
    checks.alg("equivariance", worst)

    checks.alg("null-vectors", max(
        abs(q22(p.null_vector())) + boundary.boundary_from_rank1(matrix_of(p.null_vector())).distance(p)
        for p in pts), 0.1)

    worst = 0.0
    for _ in range(10):
        a, b = core_models.random_sl2(rng, 0.5), core_models.random_sl2(rng, 0.5)
        seq = [a @ np.diag([math.exp(n), math.exp(-n)]) @ np.linalg.inv(b) for n in range(8, 15)]
        limit = boundary.boundary_limit(seq)
        expected = boundary.BoundaryPoint(0.0, math.pi / 2).transform(a, b)
        worst = max(worst, math.inf if isinstance(limit, boundary.NoLimit) else limit.distance(expected))
    checks.add("sequence-limit", worst, 1e-6)
    checks.flag("bounded-sequence-no-limit",
                isinstance(boundary.boundary_limit([np.eye(2)] * 4), boundary.NoLimit))

    checks.flag("two-step-proper", boundary.two_step_meridian(math.pi / 2, 0.0).is_proper(cfg.samples))
    checks.flag("lightlike-plane-improper",
                not boundary.lightlike_plane_meridian(0.3, 1.1).is_proper(cfg.samples))

    graph = boundary.graph_meridian(core_models.random_sl2(rng, 0.5), cfg.samples)
    curve = graph.boundary_points(64)
    violations = sum(
        boundary.causal_sign(p, q) is not boundary.CausalRelation.SPACELIKE
        for p, q in zip(curve, curve[1:]))
    checks.add("graph-achronal", violations, 0)
    return checks.results


def _wobble_map(rng: np.random.Generator, samples: int) -> CircleMap:
    eps = rng.uniform(0.05, 0.3)
    shift = rng.uniform(0, math.pi)
    m = core_models.random_sl2(rng, 0.4)
    return CircleMap.from_function(lambda a: rp1_act(m, a + eps * np.sin(2 * a) + shift), samples)


def suite_domains(cfg: RunConfig) -> List[CheckResult]:
    checks = _Checks("domains", cfg)
    rng = _rng(cfg)
    agree = total = 0
    for _ in range(max(cfg.check_points, 500)):
        meridian = boundary.meridian_from_homeo(_wobble_map(rng, cfg.samples))
        x = core_models.random_point(rng, radius=1.0)
        pairing = meridian.null_vectors(cfg.samples) @ (core_models.ETA @ x.x)
        if np.abs(pairing).min() < 1e-4:
            continue
        try:
            a = domains.in_invisible_domain(x, meridian, cfg.samples, cfg.tol_alg)
            b = domains.dual_plane_disjoint(x, meridian, cfg.samples, cfg.tol_alg)
        except Inconclusive:
            continue
        total += 1
        agree += a == b
    checks.add("invisible-tests-agree", 1 - agree / max(total, 1), 0.01)

    two_step = boundary.two_step_meridian(math.pi / 2, 0.0)
    hull = domains.convex_hull_oracle(two_step, cfg.hull_samples)
    kinds = [f.kind for f in hull.facets()]
    checks.add("two-step-facets", abs(len(kinds) - 4) + abs(kinds.count("lightlike") - 4), 0)
    checks.add("two-step-width",
               abs(domains.width_estimate(two_step, cfg.hull_samples, cfg.width_starts) - math.pi / 2), 1e-6)
    graph = boundary.graph_meridian(core_models.random_sl2(rng, 0.5), cfg.samples)
    checks.alg("mobius-width", domains.width_estimate(graph, cfg.hull_samples, cfg.width_starts), 10)

    wobble = boundary.meridian_from_homeo(_wobble_map(rng, cfg.samples))
    f_minus, f_plus = domains.extremal_extensions(wobble, domains.disc_grid(cfg.grid), cfg.samples,
                                                  cfg.workers)
    checks.add("extensions-ordered", max(0.0, float(np.max(f_minus - f_plus))), 1e-12)
    witness = wobble.properness_witness(cfg.samples, cfg.tol_alg)
    checks.flag("witness-invisible",
                domains.lift_membership(MatPoint(witness.centre).quadric(), wobble, cfg.samples))
    checks.add("sawteeth", abs(len(domains.detect_sawteeth(boundary.sawtooth_meridian(1.0))) - 1)
               + abs(len(domains.detect_sawteeth(two_step)) - 4), 0)
    return checks.results


GAUSS_SURFACES = ("plane", "umbilic:0.3", "graph", "tetra-slice:0.7853981633974483")


def suite_gauss(cfg: RunConfig) -> List[CheckResult]:
    checks = _Checks("gauss", cfg)
    for label in GAUSS_SURFACES:
        sigma = surfaces_gauss.named_surface(label)
        name = label.split(":")[0]
        params = [sigma.centre()] + sigma.grid(2, margin=0.3)
        worst_pi = worst_det = 0.0
        for u in params:
            formula = surfaces_gauss.pullback_metrics(sigma, u)
            measured = surfaces_gauss.fd_projection_pullbacks(sigma, u)
            for f, m in zip(formula, measured):
                worst_pi = max(worst_pi, np.linalg.norm(f - m) / max(np.linalg.norm(f), 1e-12))
            f = surfaces_gauss.forms(sigma, u)
            for sign in (1.0, -1.0):
                worst_det = max(worst_det, abs(np.linalg.det(f.B + sign * f.J) - 1 - np.linalg.det(f.B)))
        checks.fd(f"pi-formula:{name}", worst_pi, 100)
        checks.alg(f"det-identity:{name}", worst_det)
        u = sigma.centre()
        checks.fd(f"gauss-equation:{name}", surfaces_gauss.gauss_residual(sigma, u), 200)
        checks.fd(f"codazzi:{name}", surfaces_gauss.codazzi_residual(sigma, u), 100)

    maximal = surfaces_gauss.tetra_slice_surface(math.pi / 4)
    checks.fd("tetra-maximal", abs(surfaces_gauss.mean_curvature(maximal, maximal.centre())), 0.1)
    worst_det = worst_k = worst_h = 0.0
    for z in (0.4, 0.6, 0.9, 1.1):
        sigma = surfaces_gauss.tetra_slice_surface(z)
        u = sigma.centre()
        f = surfaces_gauss.forms(sigma, u)
        worst_det = max(worst_det, abs(np.linalg.det(f.B) + 1))
        worst_k = max(worst_k, abs(surfaces_gauss.intrinsic_curvature(sigma, u)))
        worst_h = max(worst_h, abs(np.trace(f.B) - 2 / math.tan(2 * z)))
    checks.fd("tetra-det-b", worst_det, 200)
    checks.fd("tetra-flat", worst_k, 200)
    checks.fd("tetra-mean", worst_h, 100)

    checks.flag("cgc-cmc-convention",
                surfaces_gauss.resolve_cgc_cmc_convention() == surfaces_gauss.CGC_CMC_CONVENTION)
    worst = 0.0
    for k in (0.5, 2.0, 4.0):
        t, h = surfaces_gauss.cgc_cmc_pair(k)
        spread, mean = surfaces_gauss.umbilic_evolution_spread(k, t)
        worst = max(worst, spread, abs(abs(mean) - abs(h)))
    checks.fd("cgc-cmc-evolution", worst, 100)
    return checks.results


def suite_mgh(cfg: RunConfig) -> List[CheckResult]:
    checks = _Checks("mgh", cfg)
    rng = _rng(cfg)
    chart = mgh_holonomy.TetraChart()
    worst = 0.0
    for _ in range(50):
        x, y = rng.uniform(-1, 1, size=2)
        z = rng.uniform(0.1, 1.4)
        fd = core_models.pullback_metric(lambda a, b, c: mgh_holonomy.tetra_embed(chart, a, b, c).x,
                                         (x, y, z), h=cfg.fd_step)
        worst = max(worst, float(np.max(np.abs(fd - mgh_holonomy.tetra_metric(z)))))
    checks.fd("tetra-metric", worst, 1e-3)
    samples = np.linspace(-2, 2, 9)
    checks.alg("tetra-orthogonal", mgh_holonomy.check_orthogonal(chart, samples, samples))

    worst, failures = 0.0, 0
    for _ in range(20):
        while True:
            v1, v2 = tuple(rng.uniform(-1, 1, size=2)), tuple(rng.uniform(-1, 1, size=2))
            try:
                h = mgh_holonomy.TorusHolonomy(v1, v2)
                break
            except DegenerateLattice:
                continue
        report = mgh_holonomy.genus1_report(h)
        failures += not (report.free and report.min_displacement > 0)
        p = (rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.2, 1.3))
        q = (rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.2, 1.3))
        k1, k2 = (int(k) for k in rng.integers(-2, 3, size=2))
        before = inner(mgh_holonomy.tetra_embed(chart, *p).x, mgh_holonomy.tetra_embed(chart, *q).x)
        gp = mgh_holonomy.torus_translate(h, k1, k2, p)
        gq = mgh_holonomy.torus_translate(h, k1, k2, q)
        after = inner(mgh_holonomy.tetra_embed(chart, *gp).x, mgh_holonomy.tetra_embed(chart, *gq).x)
        worst = max(worst, abs(after - before) / max(1.0, abs(before)))
    checks.alg("torus-isometric", worst, 0.1)
    checks.add("torus-free", failures, 0)
    try:
        mgh_holonomy.TorusHolonomy((1.0, 2.0), (2.0, 4.0))
        checks.flag("torus-degenerate-rejected", False)
    except DegenerateLattice:
        checks.flag("torus-degenerate-rejected", True)
    standard = mgh_holonomy.genus1_report(mgh_holonomy.TorusHolonomy((1.0, 0.0), (0.0, 1.0)))
    checks.add("genus1-area", abs(standard.area - 0.5), 1e-12)

    gens = mgh_holonomy.fuchsian_octagon()
    checks.alg("octagon-relator", mgh_holonomy.relator_residual(gens), 10)
    checks.add("octagon-traces", max(0.0, 2.1 - min(abs(np.trace(g)) for g in gens)), 0)

    length = min(cfg.word_length, 8)
    same = mgh_holonomy.limit_curve(mgh_holonomy.FuchsianPair(gens, gens), length, cfg.workers)
    checks.alg("limit-diagonal", float(np.max(rp1_distance(same.left, same.right))))

    g = core_models.random_sl2(rng, 0.5)
    g_inv = np.linalg.inv(g)
    conj = mgh_holonomy.limit_curve(
        mgh_holonomy.FuchsianPair(gens, [g @ a @ g_inv for a in gens]), length, cfg.workers)
    checks.alg("limit-conjugate", float(np.max(rp1_distance(conj.right, rp1_act(g, conj.left)))), 10)

    deformed = mgh_holonomy.fuchsian_octagon("right", (0.02, -0.01, 0.015, 0.0))
    try:
        curve = mgh_holonomy.limit_curve(mgh_holonomy.FuchsianPair(gens, deformed), length, cfg.workers)
        pts = [boundary.BoundaryPoint(a, b) for a, b in zip(curve.left, curve.right)]
        violations = sum(boundary.causal_sign(p, q) is not boundary.CausalRelation.SPACELIKE
                         for p, q in zip(pts, pts[1:]))
    except AdsError:
        violations = -1
    checks.add("limit-perturbed-achronal", violations if violations >= 0 else math.inf, 0)
    return checks.results


def suite_quake(cfg: RunConfig) -> List[CheckResult]:
    checks = _Checks("quake", cfg)
    rng = _rng(cfg)
    worst_eq = worst_dist = 0.0
    endpoint_gap = 0.0
    for _ in range(5):
        leaf = _leaf_away_from_i(rng)
        d = float(rng.uniform(0.3, 1.5))
        surface = earthquake_lab.pleat_single(leaf, d)
        lamination = earthquake_lab.FiniteLamination([(leaf, d)])
        worst_dist = max(worst_dist, abs(surface.dual_distance() - d))
        for bp in surface.bending.endpoints():
            endpoint_gap = max(endpoint_gap, float(rp1_distance(bp.xi, bp.eta)))
        per_side = {True: 0, False: 0}
        while min(per_side.values()) < cfg.check_points // 5:
            p = _disc_sample(rng)
            s = leaf.side(p)
            if abs(s) < 1e-6:
                continue
            per_side[s < 0] += 1
            worst_eq = max(worst_eq, abs(earthquake_lab.earthquake(lamination, p)
                                         - earthquake_lab.pleated_composition(surface, p)))
    checks.alg("single-leaf-dictionary", worst_eq, 0.1)
    checks.alg("bend-equals-dual-distance", worst_dist)
    checks.alg("bending-endpoints-diagonal", endpoint_gap)

    leaf = _leaf_away_from_i(rng)
    zero = earthquake_lab.FiniteLamination([(leaf, 0.0)])
    split = earthquake_lab.FiniteLamination([(leaf, 0.4), (leaf, 0.7)])
    whole = earthquake_lab.FiniteLamination([(leaf, 1.1)])
    worst_zero = worst_split = 0.0
    for _ in range(50):
        p = _disc_sample(rng)
        if abs(leaf.side(p)) < 1e-6:
            continue
        worst_zero = max(worst_zero, abs(earthquake_lab.earthquake(zero, p) - p))
        for side in earthquake_lab.SIDES:
            worst_split = max(worst_split, abs(earthquake_lab.earthquake(split, p, side)
                                               - earthquake_lab.earthquake(whole, p, side)))
    checks.add("zero-weight-identity", worst_zero, 1e-12)
    checks.alg("weight-additivity", worst_split, 0.1)

    nested = earthquake_lab.FiniteLamination([
        (OrientedGeodesic(0.2, 1.2), 0.5), (OrientedGeodesic(0.1, 1.5), 0.3)])
    base = complex(cayley_inverse(0.5 * cmath.exp(0.75j)))
    worst = 0.0
    for _ in range(50):
        p = _disc_sample(rng)
        try:
            direct = earthquake_lab.stratum_map(nested, p, basepoint=base)
            via_i = (np.linalg.inv(earthquake_lab.stratum_map(nested, base))
                     @ earthquake_lab.stratum_map(nested, p))
        except AdsError:
            continue
        worst = max(worst, abs(complex(mobius(direct, p)) - complex(mobius(via_i, p))))
    checks.alg("basepoint-cocycle", worst, 0.1)

    a, b = core_models.random_sl2(rng, 0.5), core_models.random_sl2(rng, 0.5)
    mob = CircleMap.from_matrix(a @ b)
    checks.alg("crossratio-mobius", earthquake_lab.cross_ratio_norm(mob, 2000, cfg.seed))
    stretch = CircleMap.from_function(_half_stretch)
    base = earthquake_lab.cross_ratio_norm(stretch, 2000, cfg.seed)
    checks.alg("crossratio-post-invariance",
               abs(earthquake_lab.cross_ratio_norm(stretch.compose_left(a), 2000, cfg.seed) - base))
    checks.alg("crossratio-mobius-two-sided",
               earthquake_lab.cross_ratio_norm(mob.compose_left(b).compose_right(a), 2000, cfg.seed))
    dense = earthquake_lab.cross_ratio_norm(stretch, earthquake_lab.DENSE_QUADRUPLES, cfg.seed, cfg.workers)
    estimate = earthquake_lab.cross_ratio_norm(stretch, 50_000, cfg.seed, cfg.workers)
    checks.add("crossratio-stretch-dense", (dense - estimate) / dense, 0.02)
    pre_dense = earthquake_lab.cross_ratio_norm(stretch.compose_right(b), earthquake_lab.DENSE_QUADRUPLES,
                                                cfg.seed, cfg.workers)
    checks.add("crossratio-pre-invariance", abs(pre_dense - dense) / dense, 0.02)
    isometry = earthquake_lab.disc_isometry(0.3 + 0.2j, 0.7)
    checks.add("crossratio-disc-isometry",
               earthquake_lab.cross_ratio_norm(earthquake_lab.disc_to_rp1_map(isometry), 500, cfg.seed), 1e-9)

    checks.fd("dilatation-isometry", abs(earthquake_lab.max_dilatation(isometry, 300, cfg.seed) - 1), 0.1)
    checks.add("dilatation-stretch", abs(earthquake_lab.max_dilatation(
        lambda z: complex(2 * z.real, z.imag), 300, cfg.seed, domain="half-plane") - 2), 1e-6)

    two = earthquake_lab.FiniteLamination([(OrientedGeodesic(0.3, 1.4), 0.6), (OrientedGeodesic(2.5, 4.0), 0.8)])
    try:
        earthquake_lab.earthquake_boundary_map(two, cfg.samples)
        checks.flag("boundary-map-monotone", True)
    except AdsError:
        checks.flag("boundary-map-monotone", False)
    return checks.results


def _half_stretch(psi: np.ndarray) -> np.ndarray:
    """x -> 2x on the positive half-line, identity on the negative one."""
    c, s = np.cos(psi), np.sin(psi)
    return rp1_angle(np.stack([np.where(c >= 0, 2 * c, c), s], axis=-1))


SUITES: Dict[str, Callable[[RunConfig], List[CheckResult]]] = {
    "core": suite_core,
    "geodesics": suite_geodesics,
    "boundary": suite_boundary,
    "domains": suite_domains,
    "gauss": suite_gauss,
    "mgh": suite_mgh,
    "quake": suite_quake,
}


def run_suite(name: str, cfg: RunConfig) -> List[CheckResult]:
    """
    Run one suite, or every suite in order for "all".

    Raises:
        UnknownSuite: for any other name
    """
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise UnknownSuite(f"unknown suite '{name}' (choose from {', '.join(SUITES)}, all)")
    results: List[CheckResult] = []
    for suite in names:
        log.info("running suite %s", suite)
        results.extend(SUITES[suite](cfg))
    return results


def verification_report(name: str, cfg: RunConfig, results: List[CheckResult]) -> dict:
    return {
        "command": "verify",
        "suite": name,
        "config": cfg.to_dict(),
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
