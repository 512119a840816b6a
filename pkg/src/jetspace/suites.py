"""Seeded randomized property suites over the whole library.

Each suite draws its inputs from a spawned child of one master seed, checks a
mathematical guarantee (an inequality with relative slack, or agreement of
independent computation routes within a relative tolerance), and reports
trial/failure counts, the worst margin seen, and serialized witnesses for
replay.  All suites are deterministic functions of (seed, trials).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cubes import Cube, cube_distance, uniform_norm, weighted_cube_distance
from .geodesic import (
    Chain,
    d_lower,
    d_upper,
    gauge_chain_inequality,
    interval_chain_inequality,
    verify_chain_bound,
)
from .jets import (
    Jet,
    core_up_to,
    gauge,
    gauge_inverse,
    jet_distance,
    jet_distance_componentwise,
    jet_distance_via_value_gauge,
    scale,
    sobolev_distance,
    zygmund_distance,
)
from .modulus import Modulus
from .numerics import within_slack
from .poly import Poly, mi_order, multi_indices
from .serialize import cube_to_dict, jet_to_dict, modulus_to_dict
from .whitney import PolyField, lipschitz_forms, lo_seminorm

DEFAULT_SEED = 123456789

INEQ_SLACK = 1e-9
AGREE_TOL = 1e-8

# moduli exercised by the metric suites; the table entry caps the sampling
# ranges so integrals stay inside its domain
TRIANGLE_MATRIX: list[tuple[str, Modulus, float, float]] = [
    ("power_q1_m1", Modulus.power(1.0, 1), 1.5, 1.0),
    ("power_q05_m1", Modulus.power(0.5, 1), 1.5, 1.0),
    ("power_q1_m2", Modulus.power(1.0, 2), 1.5, 1.0),
    ("power_q2_m2", Modulus.power(2.0, 2), 1.5, 1.0),
    ("power_q25_m3", Modulus.power(2.5, 3), 1.5, 1.0),
    (
        "table_m2",
        Modulus.table([(0.5, 0.6), (1.0, 1.0), (2.0, 1.6), (4.0, 2.2), (16.0, 4.0)], 2),
        1.2,
        1.0,
    ),
]

CHAIN_MATRIX = [
    (n, k, m) for n in (1, 2) for k in (0, 1) for m in (1, 2)
]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    failures: int
    metric: str  # "min_slack" | "max_rel_dev" | custom
    worst: float
    detail: str
    witnesses: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return self.failures == 0


# ---------------------------------------------------------------------------
# random generators


def _rng_for(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _random_cube(rng, n: int, r_hi: float, c_scale: float) -> Cube:
    center = tuple(rng.uniform(-c_scale, c_scale, size=n).tolist())
    radius = float(rng.uniform(0.05, r_hi))
    return Cube(center=center, radius=radius)


def _random_poly(rng, n: int, degree: int, scale_coef: float = 2.0) -> Poly:
    coef = {}
    for alpha in multi_indices(n, degree):
        coef[alpha] = float(rng.uniform(-scale_coef, scale_coef))
    return Poly(n=n, degree=degree, coef=coef)


def _random_jet(rng, n: int, degree: int, r_hi: float = 1.5, c_scale: float = 1.0) -> Jet:
    return Jet(poly=_random_poly(rng, n, degree), cube=_random_cube(rng, n, r_hi, c_scale))


def _power_core_vec(q: float, m: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    p = q - m + 1.0
    if p == 0.0:
        return np.log(b / a)
    return (b**p - a**p) / p


# ---------------------------------------------------------------------------
# suite implementations


def suite_triangle_cube(
    seed: int, trials: int = 100_000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Triangle inequality, symmetry and identity for the logarithmic cube
    distance on random triples (dimension mixed over 1 and 2)."""
    rng = _rng_for(seed, 1)
    failures = 0
    worst = math.inf
    witnesses = []
    for t in range(trials):
        n = 1 + t % 2
        q = [_random_cube(rng, n, 4.0, 3.0) for _ in range(3)]
        d01 = cube_distance(q[0], q[1])
        d12 = cube_distance(q[1], q[2])
        d02 = cube_distance(q[0], q[2])
        worst = min(worst, d01 + d12 - d02)
        ok = within_slack(d02, d01 + d12, slack)
        ok = ok and cube_distance(q[1], q[0]) == d01 and cube_distance(q[0], q[0]) == 0.0
        if not ok:
            failures += 1
            if len(witnesses) < 3:
                witnesses.append({"cubes": [cube_to_dict(c) for c in q]})
    return SuiteResult(
        "triangle_cube", trials, failures, "min_slack", worst,
        "log cube distance is a metric on random triples", tuple(witnesses),
    )


def suite_triangle_weighted(
    seed: int, trials: int = 100_000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Triangle inequality for the weighted cube distance, per modulus in the
    test matrix.  Power-family integrals are evaluated vectorized; the table
    modulus is checked scalar."""
    failures = 0
    worst = math.inf
    witnesses = []
    total = 0
    for idx, (name, mod, r_hi, c_scale) in enumerate(TRIANGLE_MATRIX):
        rng = _rng_for(seed, 100 + idx)
        n = 2
        if mod.family == "power":
            centers = rng.uniform(-c_scale, c_scale, size=(trials, 3, n))
            radii = rng.uniform(0.05, r_hi, size=(trials, 3))

            def dvec(i, j):
                sep = np.max(np.abs(centers[:, i] - centers[:, j]), axis=1)
                lo = np.minimum(radii[:, i], radii[:, j])
                hi = radii[:, i] + radii[:, j] + sep
                return _power_core_vec(mod.q, mod.m, lo, hi)

            d01, d12, d02 = dvec(0, 1), dvec(1, 2), dvec(0, 2)
            margin = d01 + d12 - d02
            scale_arr = np.maximum(np.abs(d02), np.abs(d01 + d12))
            bad = (d02 - (d01 + d12)) > slack * scale_arr + 1e-300
            failures += int(np.count_nonzero(bad))
            worst = min(worst, float(np.min(margin)))
            total += trials
            if np.any(bad) and len(witnesses) < 3:
                i = int(np.flatnonzero(bad)[0])
                witnesses.append(
                    {
                        "modulus": modulus_to_dict(mod),
                        "centers": centers[i].tolist(),
                        "radii": radii[i].tolist(),
                    }
                )
        else:
            scalar_trials = trials
            for _ in range(scalar_trials):
                q = [_random_cube(rng, n, r_hi, c_scale) for _ in range(3)]
                d01 = weighted_cube_distance(mod, q[0], q[1])
                d12 = weighted_cube_distance(mod, q[1], q[2])
                d02 = weighted_cube_distance(mod, q[0], q[2])
                worst = min(worst, d01 + d12 - d02)
                if not within_slack(d02, d01 + d12, slack):
                    failures += 1
                    if len(witnesses) < 3:
                        witnesses.append(
                            {
                                "modulus": modulus_to_dict(mod),
                                "cubes": [cube_to_dict(c) for c in q],
                            }
                        )
            total += scalar_trials
    return SuiteResult(
        "triangle_weighted", total, failures, "min_slack", worst,
        "weighted cube distance is a metric for every matrix modulus", tuple(witnesses),
    )


def suite_same_poly_identity(seed: int, trials: int = 10_000) -> SuiteResult:
    """Jets sharing one polynomial: jet distance equals the weighted cube
    distance to 1e-10."""
    rng = _rng_for(seed, 2)
    failures = 0
    worst = 0.0
    witnesses = []
    for t in range(trials):
        n = 1 + t % 2
        m = 1 + t % 2
        k = t % 2
        mod = Modulus.power(float(rng.uniform(0.2, m)), m)
        degree = k + m - 1
        poly = _random_poly(rng, n, degree)
        q1 = _random_cube(rng, n, 1.5, 1.0)
        q2 = _random_cube(rng, n, 1.5, 1.0)
        lhs = jet_distance(mod, Jet(poly, q1), Jet(poly, q2))
        rhs = weighted_cube_distance(mod, q1, q2)
        dev = abs(lhs - rhs) / max(abs(rhs), 1e-300) if rhs else abs(lhs)
        worst = max(worst, dev)
        if dev > 1e-10:
            failures += 1
            if len(witnesses) < 3:
                witnesses.append(
                    {"modulus": modulus_to_dict(mod), "cubes": [cube_to_dict(q1), cube_to_dict(q2)]}
                )
    return SuiteResult(
        "same_poly_identity", trials, failures, "max_rel_dev", worst,
        "fixed-polynomial jet distance collapses to the cube distance", tuple(witnesses),
    )


def suite_zygmund_agreement(seed: int, trials: int = 10_000) -> SuiteResult:
    """Generic jet distance with w(t) = t^(m-1) against the closed-form
    exponential-gauge formula, over (n, m) in {1,2} x {2,3}."""
    rng = _rng_for(seed, 3)
    combos = [(n, m) for n in (1, 2) for m in (2, 3)]
    per = trials // len(combos)
    failures = 0
    worst = 0.0
    witnesses = []
    total = 0
    for n, m in combos:
        mod = Modulus.power(float(m - 1), m)
        degree = m - 1
        for _ in range(per):
            t1 = _random_jet(rng, n, degree)
            t2 = _random_jet(rng, n, degree)
            a = jet_distance(mod, t1, t2)
            b = zygmund_distance(t1, t2, m)
            dev = abs(a - b) / max(abs(a), abs(b), 1e-300)
            worst = max(worst, dev)
            total += 1
            if dev > AGREE_TOL:
                failures += 1
                if len(witnesses) < 3:
                    witnesses.append(
                        {"n": n, "m": m, "jets": [jet_to_dict(t1), jet_to_dict(t2)]}
                    )
    return SuiteResult(
        "zygmund_agreement", total, failures, "max_rel_dev", worst,
        "pure-power modulus specializes to the exponential-gauge closed form",
        tuple(witnesses),
    )


def suite_sobolev_agreement(seed: int, trials: int = 10_000) -> SuiteResult:
    """Generic jet distance with w(t) = t at order 1 against the root-exponent
    closed form, over k in {1, 2} and n in {1, 2}."""
    rng = _rng_for(seed, 4)
    combos = [(n, k) for n in (1, 2) for k in (1, 2)]
    per = trials // len(combos)
    mod1 = Modulus.power(1.0, 1)
    failures = 0
    worst = 0.0
    witnesses = []
    total = 0
    for n, k in combos:
        for _ in range(per):
            t1 = _random_jet(rng, n, k)
            t2 = _random_jet(rng, n, k)
            a = jet_distance(mod1, t1, t2)
            b = sobolev_distance(t1, t2, k)
            dev = abs(a - b) / max(abs(a), abs(b), 1e-300)
            worst = max(worst, dev)
            total += 1
            if dev > AGREE_TOL:
                failures += 1
                if len(witnesses) < 3:
                    witnesses.append(
                        {"n": n, "k": k, "jets": [jet_to_dict(t1), jet_to_dict(t2)]}
                    )
    return SuiteResult(
        "sobolev_agreement", total, failures, "max_rel_dev", worst,
        "unit-kernel modulus specializes to the root-exponent closed form",
        tuple(witnesses),
    )


def suite_value_gauge_agreement(seed: int, trials: int = 10_000) -> SuiteResult:
    """Pointwise jet distance: the discrepancy-scale route, the componentwise
    route and the value-gauge route agree to relative 1e-8."""
    rng = _rng_for(seed, 5)
    combos = [(1, 0, 2), (1, 1, 2), (2, 0, 2), (1, 1, 1), (2, 1, 1), (1, 0, 3)]
    per = trials // len(combos)
    failures = 0
    worst = 0.0
    witnesses = []
    total = 0
    for n, k, m in combos:
        degree = k + m - 1
        for _ in range(per):
            q = float(rng.uniform(0.3 * m, m))
            mod = Modulus.power(q, m)
            t1 = _random_jet(rng, n, degree)
            t2 = _random_jet(rng, n, degree)
            y = tuple(rng.uniform(-1.0, 1.0, size=n).tolist())
            a = jet_distance(mod, t1, t2, at=y)
            b = jet_distance_componentwise(mod, t1, t2, at=y)
            c = jet_distance_via_value_gauge(mod, t1, t2, y)
            hi = max(a, b, c)
            lo = min(a, b, c)
            dev = (hi - lo) / max(hi, 1e-300)
            worst = max(worst, dev)
            total += 1
            if dev > AGREE_TOL:
                failures += 1
                if len(witnesses) < 3:
                    witnesses.append(
                        {
                            "modulus": modulus_to_dict(mod),
                            "jets": [jet_to_dict(t1), jet_to_dict(t2)],
                            "at": list(y),
                        }
                    )
    return SuiteResult(
        "value_gauge_agreement", total, failures, "max_rel_dev", worst,
        "three computation routes for the pointwise jet distance agree",
        tuple(witnesses),
    )


def suite_chain_scaling(
    seed: int, trials: int = 10_000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Endpoint jet distance is bounded by the chain sum of the e^n-scaled
    links, over the (n, k, m) matrix, chains of two to five jets."""
    rng = _rng_for(seed, 6)
    per = trials // len(CHAIN_MATRIX)
    failures = 0
    worst = math.inf
    witnesses = []
    total = 0
    for n, k, m in CHAIN_MATRIX:
        degree = k + m - 1
        for _ in range(per):
            q = float(rng.uniform(0.3 * m, m))
            mod = Modulus.power(q, m)
            length = int(rng.integers(2, 6))
            jets = tuple(_random_jet(rng, n, degree) for _ in range(length))
            res = verify_chain_bound(mod, Chain(jets), rel_slack=slack)
            worst = min(worst, res.slack)
            total += 1
            if not res.ok:
                failures += 1
                if len(witnesses) < 3:
                    witnesses.append(
                        {
                            "modulus": modulus_to_dict(mod),
                            "jets": [jet_to_dict(j) for j in jets],
                        }
                    )
    return SuiteResult(
        "chain_scaling", total, failures, "min_slack", worst,
        "scaled chain sums dominate the endpoint jet distance", tuple(witnesses),
    )


def suite_interval_chain(
    seed: int, trials: int = 100_000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Interval splitting inequality on random scale/step tuples, including
    the pure triangle instance with zero extra steps."""
    rng = _rng_for(seed, 7)
    failures = 0
    worst = math.inf
    witnesses = []
    for t in range(trials):
        m = 1 + t % 3
        q = float(rng.uniform(0.2 * m, m))
        mod = Modulus.power(q, m)
        links = int(rng.integers(2, 6))
        b = rng.uniform(0.05, 3.0, size=links + 1).tolist()
        if t % 3 == 0:
            # triangle-type instance: no extra steps, three scales
            b = rng.uniform(0.05, 3.0, size=3).tolist()
            a = rng.uniform(0.0, 3.0, size=2).tolist()
            c = [0.0, 0.0]
        else:
            a = rng.uniform(0.0, 3.0, size=len(b) - 1).tolist()
            c = rng.uniform(0.0, 3.0, size=len(b) - 1).tolist()
        res = interval_chain_inequality(mod, b, a, c, rel_slack=slack)
        worst = min(worst, res.slack)
        if not res.ok:
            failures += 1
            if len(witnesses) < 3:
                witnesses.append(
                    {"modulus": modulus_to_dict(mod), "b": b, "a": a, "c": c}
                )
    return SuiteResult(
        "interval_chain", trials, failures, "min_slack", worst,
        "weighted integral over a merged interval splits along the chain",
        tuple(witnesses),
    )


def suite_derivative_chain(
    seed: int, trials: int = 10_000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Derivative of an end-to-end polynomial difference is bounded by e^n
    times the worst accumulated link discrepancy over step powers."""
    rng = _rng_for(seed, 8)
    failures = 0
    worst = math.inf
    witnesses = []
    for t in range(trials):
        n = 1 + t % 2
        degree = int(rng.integers(1, 4 if n == 1 else 3))
        length = int(rng.integers(2, 5))
        polys = [_random_poly(rng, n, degree) for _ in range(length + 1)]
        xs = [tuple(rng.uniform(-2.0, 2.0, size=n).tolist()) for _ in range(length + 1)]
        step_sum = sum(
            uniform_norm(tuple(a - b for a, b in zip(xs[i], xs[i + 1])))
            for i in range(length)
        )
        ok_all = True
        slack_min = math.inf
        for alpha in multi_indices(n, degree):
            lhs = abs((polys[0] - polys[-1]).deriv_eval(alpha, xs[0]))
            rhs = 0.0
            for beta in multi_indices(n, degree - mi_order(alpha)):
                gamma = tuple(a + b for a, b in zip(alpha, beta))
                acc = sum(
                    abs((polys[i] - polys[i + 1]).deriv_eval(gamma, xs[i]))
                    for i in range(length)
                )
                rhs = max(rhs, acc * step_sum ** mi_order(beta))
            rhs *= math.exp(n)
            slack_min = min(slack_min, rhs - lhs)
            if not within_slack(lhs, rhs, slack):
                ok_all = False
        worst = min(worst, slack_min)
        if not ok_all:
            failures += 1
            if len(witnesses) < 3:
                witnesses.append({"n": n, "degree": degree, "xs": [list(x) for x in xs]})
    return SuiteResult(
        "derivative_chain", trials, failures, "min_slack", worst,
        "chain bound for derivative discrepancies of polynomial families",
        tuple(witnesses),
    )


def suite_gauge_shift(
    seed: int, trials: int = 10_000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Single-step gauge inequality: absorbing a step power R^|b| into the
    gauge-inverse costs at most the larger of the step integral and the
    higher-order gauge-inverse integral."""
    rng = _rng_for(seed, 9)
    failures = 0
    worst = math.inf
    witnesses = []
    for t in range(trials):
        m = 1 + t % 3
        q = float(rng.uniform(0.2 * m, m))
        mod = Modulus.power(q, m)
        top = int(rng.integers(1, 5))
        a_ord = int(rng.integers(0, top + 1))
        b_ord = int(rng.integers(0, top - a_ord + 1))
        v = float(rng.uniform(0.05, 2.0))
        r = float(rng.uniform(0.01, 3.0))
        # draw the discrepancy inside the gauge's range
        u = gauge(mod, top, a_ord + b_ord, float(rng.uniform(0.0, 4.0)), v)
        lhs_t = gauge_inverse(mod, top, a_ord, r**b_ord * u, v)
        lhs = core_up_to(mod, v, lhs_t)
        rhs1 = mod.integral_core(v, v + r)
        rhs_t = gauge_inverse(mod, top, a_ord + b_ord, u, v)
        rhs2 = core_up_to(mod, v, rhs_t)
        rhs = max(rhs1, rhs2)
        worst = min(worst, rhs - lhs)
        if not within_slack(lhs, rhs, slack):
            failures += 1
            if len(witnesses) < 3:
                witnesses.append(
                    {
                        "modulus": modulus_to_dict(mod),
                        "top": top, "a": a_ord, "b": b_ord, "v": v, "R": r, "u": u,
                    }
                )
    return SuiteResult(
        "gauge_shift", trials, failures, "min_slack", worst,
        "step powers are absorbed by the max of step and shifted gauge terms",
        tuple(witnesses),
    )


def suite_gauge_chain(
    seed: int, trials: int = 10_000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Chain splitting inequality for the integrated gauge inverse."""
    rng = _rng_for(seed, 10)
    failures = 0
    worst = math.inf
    witnesses = []
    for t in range(trials):
        m = 1 + t % 2
        q = float(rng.uniform(0.2 * m, m))
        mod = Modulus.power(q, m)
        top = int(rng.integers(0, 4))
        a_ord = int(rng.integers(0, top + 1))
        length = int(rng.integers(1, 5))
        b = rng.uniform(0.05, 2.0, size=length + 1).tolist()
        u = [
            gauge(mod, top, a_ord, float(rng.uniform(0.0, 3.0)), min(bi, bj))
            for bi, bj in zip(b, b[1:])
        ]
        res = gauge_chain_inequality(mod, top, a_ord, b, u, rel_slack=slack)
        worst = min(worst, res.slack)
        if not res.ok:
            failures += 1
            if len(witnesses) < 3:
                witnesses.append(
                    {"modulus": modulus_to_dict(mod), "top": top, "a": a_ord, "b": b, "u": u}
                )
    return SuiteResult(
        "gauge_chain", trials, failures, "min_slack", worst,
        "integrated gauge inverse of summed discrepancies splits along links",
        tuple(witnesses),
    )


def suite_point_shift_scaling(
    seed: int, trials: int = 10_000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Moving the evaluation point of the pointwise jet distance is dominated
    by scaling the polynomials by max(1, e^n * step^L / span^L)."""
    rng = _rng_for(seed, 11)
    failures = 0
    worst = math.inf
    witnesses = []
    combos = [(1, 0, 2), (1, 1, 1), (2, 0, 2), (2, 1, 1)]
    per = trials // len(combos)
    total = 0
    for n, k, m in combos:
        degree = k + m - 1
        for _ in range(per):
            q = float(rng.uniform(0.3 * m, m))
            mod = Modulus.power(q, m)
            t1 = _random_jet(rng, n, degree)
            t2 = _random_jet(rng, n, degree)
            y = tuple(rng.uniform(-1.5, 1.5, size=n).tolist())
            z = tuple(rng.uniform(-1.5, 1.5, size=n).tolist())
            span = max(t1.cube.radius, t2.cube.radius) + uniform_norm(
                tuple(a - b for a, b in zip(t1.cube.center, t2.cube.center))
            )
            step = uniform_norm(tuple(a - b for a, b in zip(y, z)))
            gamma = math.exp(n) * max(1.0, step**degree / span**degree)
            lhs = jet_distance(mod, t1, t2, at=z)
            rhs = jet_distance(mod, scale(gamma, t1), scale(gamma, t2), at=y)
            worst = min(worst, rhs - lhs)
            total += 1
            if not within_slack(lhs, rhs, slack):
                failures += 1
                if len(witnesses) < 3:
                    witnesses.append(
                        {
                            "modulus": modulus_to_dict(mod),
                            "jets": [jet_to_dict(t1), jet_to_dict(t2)],
                            "y": list(y),
                            "z": list(z),
                        }
                    )
    return SuiteResult(
        "point_shift_scaling", total, failures, "min_slack", worst,
        "evaluation-point moves are dominated by explicit polynomial scaling",
        tuple(witnesses),
    )


def _random_field(rng, n: int, k: int, m: int, size: int) -> PolyField:
    degree = k + m - 1
    entries = []
    seen = set()
    while len(entries) < size:
        cube = _random_cube(rng, n, 1.5, 1.0)
        if cube in seen:
            continue
        seen.add(cube)
        entries.append((cube, _random_poly(rng, n, degree)))
    return PolyField(n=n, k=k, m=m, entries=tuple(entries))


def suite_lipschitz_forms(
    seed: int, fields: int = 1000, lams_per_field: int = 10
) -> SuiteResult:
    """The ratio form and the metric form of the scaled Lipschitz condition
    agree for random fields and scales, and the seminorm is their shared
    threshold."""
    rng = _rng_for(seed, 12)
    failures = 0
    worst = 0.0
    witnesses = []
    trials = 0
    for t in range(fields):
        n = 1 + t % 2
        k = 0
        m = 1 + t % 2
        q = float(rng.uniform(0.3 * m, m))
        mod = Modulus.power(q, m)
        field = _random_field(rng, n, k, m, size=3)
        lam_star = lo_seminorm(field, mod).value
        if lam_star <= 0:
            continue
        for _ in range(lams_per_field):
            lam = lam_star * float(rng.uniform(0.3, 3.0))
            if abs(lam - lam_star) < 1e-9 * lam_star:
                continue
            ratio_ok, metric_ok = lipschitz_forms(field, mod, lam)
            trials += 1
            if ratio_ok != metric_ok:
                failures += 1
                if len(witnesses) < 3:
                    witnesses.append({"modulus": modulus_to_dict(mod), "lam": lam})
        # threshold sandwich around the seminorm
        hi = lipschitz_forms(field, mod, lam_star * (1 + 1e-6))
        lo = lipschitz_forms(field, mod, lam_star * (1 - 1e-6))
        trials += 2
        if hi != (True, True) or lo != (False, False):
            failures += 1
            if len(witnesses) < 3:
                witnesses.append(
                    {"modulus": modulus_to_dict(mod), "lam_star": lam_star, "kind": "threshold"}
                )
    return SuiteResult(
        "lipschitz_forms", trials, failures, "bool_agreement", float(failures),
        "ratio and metric forms of the Lipschitz condition agree with a shared threshold",
        tuple(witnesses),
    )


def suite_halfspace_equivalence(
    seed: int, trials: int = 100_000
) -> SuiteResult:
    """Sampled ratio of the cube metric to 1 + the Poincare distance stays in
    a narrow positive interval, and the interval is stable when the sample is
    doubled."""
    rng = _rng_for(seed, 13)
    n = 2

    def draw(count: int) -> np.ndarray:
        bases = rng.normal(0.0, 3.0, size=(count, 2, n))
        heights = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=(count, 2)))
        sep = np.max(np.abs(bases[:, 0] - bases[:, 1]), axis=1)
        hmin = np.minimum(heights[:, 0], heights[:, 1])
        hmax = np.maximum(heights[:, 0], heights[:, 1])
        varrho = np.log1p((hmax + sep) / hmin)
        d2 = np.sum((bases[:, 0] - bases[:, 1]) ** 2, axis=1)
        bdist = np.sqrt(d2 + (heights[:, 0] - heights[:, 1]) ** 2)
        adist = np.sqrt(d2 + (heights[:, 0] + heights[:, 1]) ** 2)
        ph = np.log((adist + bdist) ** 2 / (4.0 * heights[:, 0] * heights[:, 1]))
        return varrho / (1.0 + ph)

    first = draw(trials)
    second = np.concatenate([first, draw(trials)])
    c1, c2 = float(np.min(first)), float(np.max(first))
    c1d, c2d = float(np.min(second)), float(np.max(second))
    move = max(abs(c1 - c1d) / c1, abs(c2 - c2d) / c2)
    spread = c2 / c1
    ok = c1 > 0 and spread < 20.0 and move < 0.05
    detail = (
        f"ratio interval [{c1:.6g}, {c2:.6g}], spread {spread:.3f}, "
        f"doubling moved endpoints by {move:.2%}"
    )
    return SuiteResult(
        "halfspace_equivalence", trials, 0 if ok else 1, "interval", spread, detail, ()
    )


def suite_scale_monotonicity(
    seed: int, trials: int = 1000, slack: float = INEQ_SLACK
) -> SuiteResult:
    """Shrinking both polynomials by a growing factor never increases the jet
    distance, and the cube term is its floor."""
    rng = _rng_for(seed, 14)
    failures = 0
    worst = math.inf
    witnesses = []
    for t in range(trials):
        n = 1 + t % 2
        m = 1 + t % 2
        k = t % 2
        degree = k + m - 1
        mod = Modulus.power(float(rng.uniform(0.3 * m, m)), m)
        t1 = _random_jet(rng, n, degree)
        t2 = _random_jet(rng, n, degree)
        floor = weighted_cube_distance(mod, t1.cube, t2.cube)
        prev = math.inf
        ok = True
        for lam in (0.25, 0.5, 1.0, 2.0, 4.0, 16.0):
            val = jet_distance(mod, scale(1.0 / lam, t1), scale(1.0 / lam, t2))
            if val > prev * (1 + 1e-12) or not within_slack(floor, val, slack):
                ok = False
            worst = min(worst, prev - val if prev < math.inf else math.inf, val - floor)
            prev = val
        if not ok:
            failures += 1
            if len(witnesses) < 3:
                witnesses.append(
                    {"modulus": modulus_to_dict(mod), "jets": [jet_to_dict(t1), jet_to_dict(t2)]}
                )
    return SuiteResult(
        "scale_monotonicity", trials, failures, "min_slack", worst,
        "jet distance is non-increasing under polynomial shrinking with the cube floor",
        tuple(witnesses),
    )


def suite_geodesic_sandwich(
    seed: int, trials: int = 500, slack: float = INEQ_SLACK
) -> SuiteResult:
    """d_lower <= d_upper <= direct jet distance, and adding candidates never
    increases d_upper."""
    rng = _rng_for(seed, 15)
    failures = 0
    worst = math.inf
    witnesses = []
    for t in range(trials):
        n = 1 + t % 2
        m = 1 + t % 2
        k = t % 2
        degree = k + m - 1
        mod = Modulus.power(float(rng.uniform(0.3 * m, m)), m)
        t1 = _random_jet(rng, n, degree)
        t2 = _random_jet(rng, n, degree)
        cands = [_random_jet(rng, n, degree) for _ in range(3)]
        direct = jet_distance(mod, t1, t2)
        up_small = d_upper(mod, t1, t2, cands[:1])
        up_full = d_upper(mod, t1, t2, cands)
        low = d_lower(mod, t1, t2)
        ok = (
            within_slack(low, up_full, slack)
            and within_slack(up_full, direct, slack)
            and within_slack(up_full, up_small, slack)
        )
        worst = min(worst, up_full - low, direct - up_full, up_small - up_full)
        if not ok:
            failures += 1
            if len(witnesses) < 3:
                witnesses.append(
                    {"modulus": modulus_to_dict(mod), "jets": [jet_to_dict(t1), jet_to_dict(t2)]}
                )
    return SuiteResult(
        "geodesic_sandwich", trials, failures, "min_slack", worst,
        "bracket ordering and candidate antitonicity for the geodesic bounds",
        tuple(witnesses),
    )


# ---------------------------------------------------------------------------
# registry

SUITES: dict[str, Callable[..., SuiteResult]] = {
    "triangle_cube": suite_triangle_cube,
    "triangle_weighted": suite_triangle_weighted,
    "same_poly_identity": suite_same_poly_identity,
    "zygmund_agreement": suite_zygmund_agreement,
    "sobolev_agreement": suite_sobolev_agreement,
    "value_gauge_agreement": suite_value_gauge_agreement,
    "chain_scaling": suite_chain_scaling,
    "interval_chain": suite_interval_chain,
    "derivative_chain": suite_derivative_chain,
    "gauge_shift": suite_gauge_shift,
    "gauge_chain": suite_gauge_chain,
    "point_shift_scaling": suite_point_shift_scaling,
    "lipschitz_forms": suite_lipschitz_forms,
    "halfspace_equivalence": suite_halfspace_equivalence,
    "scale_monotonicity": suite_scale_monotonicity,
    "geodesic_sandwich": suite_geodesic_sandwich,
}


_SLACK_SUITES = {
    "triangle_cube", "triangle_weighted", "chain_scaling", "interval_chain",
    "derivative_chain", "gauge_shift", "gauge_chain", "point_shift_scaling",
    "scale_monotonicity", "geodesic_sandwich",
}


def run_all(
    seed: int = DEFAULT_SEED,
    trials: int | None = None,
    slack: float | None = None,
) -> list[SuiteResult]:
    """Run every suite with its default trial count (or a uniform override).

    ``slack`` overrides the relative slack of the inequality suites; the
    agreement suites keep their pinned tolerances.
    """
    results = []
    for name, fn in SUITES.items():
        kwargs = {}
        if slack is not None and name in _SLACK_SUITES:
            kwargs["slack"] = slack
        if trials is None:
            results.append(fn(seed, **kwargs))
        elif name == "lipschitz_forms":
            results.append(fn(seed, fields=max(trials // 10, 1)))
        else:
            results.append(fn(seed, trials, **kwargs))
    return results
