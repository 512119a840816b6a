"""Selection LP, membership blocks, subset experiment, counterexample table."""

import math

import numpy as np
import pytest

from jetspace.cubes import Cube
from jetspace.lp import LPBuilder, lp_solve
from jetspace.modulus import Modulus
from jetspace.poly import Poly, multi_indices
from jetspace.selection import (
    ConvexSetSpec,
    SelectionInstance,
    best_selection,
    counterexample_family,
    finiteness_experiment,
    membership_block,
    relaxed_feasible,
    selection_field,
)
from jetspace.whitney import lo_seminorm

MOD1 = Modulus.power(1, 1)


def singleton(n, k, coef):
    return ConvexSetSpec(base=Poly(n, k, coef))


def interval_set(lo, hi):
    """Constant polynomials with value in [lo, hi]."""
    return ConvexSetSpec(
        base=Poly.zero(1, 0),
        directions=(Poly(1, 0, {(0,): 1.0}),),
        inequalities=(((1.0,), hi), ((-1.0,), -lo)),
    )


def test_convex_set_validation():
    with pytest.raises(ValueError):
        ConvexSetSpec(
            base=Poly.zero(1, 1),
            directions=(Poly(1, 1, {(1,): 1.0}), Poly(1, 1, {(1,): 2.0})),
        )
    with pytest.raises(ValueError):
        ConvexSetSpec(
            base=Poly.zero(1, 0),
            directions=(Poly(1, 0, {(0,): 1.0}),),
            inequalities=(((1.0, 2.0), 1.0),),
        )


def test_instance_validation():
    with pytest.raises(ValueError):
        SelectionInstance(n=1, k=0, m=1, modulus=MOD1, nodes=())
    q = Cube((0.0,), 1.0)
    with pytest.raises(ValueError):
        SelectionInstance(
            n=1, k=0, m=1, modulus=MOD1,
            nodes=((singleton(1, 0, {}), q), (singleton(1, 0, {}), q)),
        )
    with pytest.raises(ValueError):
        SelectionInstance(
            n=1, k=0, m=2, modulus=MOD1, nodes=((singleton(1, 0, {}), q),)
        )


def _singleton_instance():
    nodes = (
        (singleton(1, 1, {(0,): 0.0, (1,): 0.0}), Cube((0.0,), 1.0)),
        (singleton(1, 1, {(0,): 1.0, (1,): 0.5}), Cube((2.0,), 0.5)),
        (singleton(1, 1, {(0,): -1.0, (1,): 2.0}), Cube((-1.0,), 2.0)),
    )
    return SelectionInstance(n=1, k=1, m=1, modulus=MOD1, nodes=nodes)


def test_singleton_selection_matches_seminorm():
    inst = _singleton_instance()
    res = best_selection(inst)
    assert res.status == "optimal"
    field = selection_field(inst, res.polys)
    assert res.lam == pytest.approx(lo_seminorm(field, MOD1).value, abs=1e-10)
    # the sets are points, so the polynomials are pinned
    for (spec, _), poly in zip(inst.nodes, res.polys):
        for a in multi_indices(1, 1):
            assert poly.coef.get(a, 0.0) == pytest.approx(
                spec.base.coef.get(a, 0.0), abs=1e-9
            )


def test_full_space_selection_reaches_zero():
    full = ConvexSetSpec(
        base=Poly.zero(1, 1),
        directions=(Poly(1, 1, {(0,): 1.0}), Poly(1, 1, {(1,): 1.0})),
    )
    nodes = tuple(
        (full, c) for c in (Cube((0.0,), 1.0), Cube((2.0,), 0.5), Cube((-1.0,), 2.0))
    )
    inst = SelectionInstance(n=1, k=1, m=1, modulus=MOD1, nodes=nodes)
    res = best_selection(inst)
    assert res.lam <= 1e-10


def _interval_instance():
    nodes = (
        (interval_set(0.0, 0.2), Cube((0.0,), 1.0)),
        (interval_set(1.0, 1.5), Cube((1.0,), 1.0)),
        (interval_set(-2.0, -1.2), Cube((3.0,), 0.5)),
    )
    return SelectionInstance(n=1, k=0, m=1, modulus=MOD1, nodes=nodes)


def _grid_oracle(inst, bounds, rounds=8, grid=9):
    """Nested grid refinement over the affine coordinates (sets are pinned
    once theta is fixed, because the context has order 1)."""
    from jetspace.jets import gauge

    def objective(thetas):
        polys = []
        for (spec, _), th in zip(inst.nodes, thetas):
            p = spec.base
            for d, t in zip(spec.directions, (th,)):
                p = p + d.scale(t)
            polys.append(p)
        worst = 0.0
        deg = inst.top_degree
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                qi, qj = inst.nodes[i][1], inst.nodes[j][1]
                sep = max(abs(a - b) for a, b in zip(qi.center, qj.center))
                t = max(qi.radius, qj.radius) + sep
                v = min(qi.radius, qj.radius)
                diff = polys[i] - polys[j]
                for al in multi_indices(inst.n, deg):
                    w = gauge(inst.modulus, deg, al, t, v)
                    for y in (qi.center, qj.center):
                        worst = max(worst, abs(diff.deriv_eval(al, y)) / w)
        return worst

    centers = [0.5 * (lo + hi) for lo, hi in bounds]
    widths = [0.5 * (hi - lo) for lo, hi in bounds]
    best = math.inf
    for _ in range(rounds):
        axes = [
            np.clip(np.linspace(c - w, c + w, grid), lo, hi)
            for c, w, (lo, hi) in zip(centers, widths, bounds)
        ]
        best_pt = None
        for a in axes[0]:
            for b in axes[1]:
                for c in axes[2]:
                    val = objective((a, b, c))
                    if val < best:
                        best, best_pt = val, (a, b, c)
        if best_pt is not None:
            centers = list(best_pt)
        widths = [w / 4 for w in widths]
    return best


def test_interval_instance_matches_grid_oracle():
    inst = _interval_instance()
    res = best_selection(inst)
    oracle = _grid_oracle(inst, [(0.0, 0.2), (1.0, 1.5), (-2.0, -1.2)])
    assert res.lam == pytest.approx(oracle, abs=1e-4)


def test_random_interval_instances_match_grid_oracle():
    rng = np.random.default_rng(37)
    for _ in range(15):
        bounds = []
        nodes = []
        for j in range(3):
            lo = float(rng.uniform(-2, 2))
            hi = lo + float(rng.uniform(0.05, 1.0))
            bounds.append((lo, hi))
            nodes.append(
                (
                    interval_set(lo, hi),
                    Cube((float(rng.uniform(-3, 3)) + 2.5 * j,), float(rng.uniform(0.2, 1.5))),
                )
            )
        inst = SelectionInstance(n=1, k=0, m=1, modulus=MOD1, nodes=tuple(nodes))
        lam = best_selection(inst).lam
        oracle = _grid_oracle(inst, bounds)
        assert lam == pytest.approx(oracle, abs=1e-4)


def test_selection_invariant_under_reordering():
    inst = _interval_instance()
    lam = best_selection(inst).lam
    perm = SelectionInstance(
        n=1, k=0, m=1, modulus=MOD1, nodes=(inst.nodes[2], inst.nodes[0], inst.nodes[1])
    )
    assert best_selection(perm).lam == pytest.approx(lam, rel=1e-10)


def test_selection_invariant_under_translation():
    inst = _interval_instance()
    lam = best_selection(inst).lam
    shift = 5.0
    nodes = tuple(
        (spec, Cube((cube.center[0] + shift,), cube.radius)) for spec, cube in inst.nodes
    )
    moved = SelectionInstance(n=1, k=0, m=1, modulus=MOD1, nodes=nodes)
    assert best_selection(moved).lam == pytest.approx(lam, rel=1e-9)


def test_selection_lambda_equals_field_seminorm():
    inst = _interval_instance()
    res = best_selection(inst)
    field = selection_field(inst, res.polys)
    assert res.lam == pytest.approx(lo_seminorm(field, MOD1).value, abs=1e-9)


# -- membership blocks --------------------------------------------------------------


def test_membership_block_exact_singleton():
    spec = singleton(1, 0, {(0,): 2.0})
    cube = Cube((0.0,), 1.0)
    b = LPBuilder()
    cvars, _ = membership_block(b, "x", spec, cube, MOD1, 0, 0, 0.0)
    b.minimize({})
    sol = lp_solve(b.build())
    assert sol.status == "optimal"
    assert sol.x[cvars[0]] == pytest.approx(2.0, abs=1e-10)


def test_membership_relaxation_nested():
    # an out-of-interval target becomes reachable once the slack is wide enough
    spec = interval_set(0.0, 1.0)
    cube = Cube((0.0,), 1.0)
    for lam, feasible in ((0.1, False), (5.0, True)):
        b = LPBuilder()
        cvars, _ = membership_block(b, "x", spec, cube, MOD1, 0, 0, lam)
        b.add_eq({cvars[0]: 1.0}, 3.0)  # force the polynomial value to 3
        b.minimize({})
        assert (lp_solve(b.build()).status == "optimal") == feasible


def test_membership_block_above_order_content():
    # a set living above the Taylor order forces infeasibility at lam = 0
    spec = singleton(1, 1, {(1,): 1.0})
    cube = Cube((0.0,), 1.0)
    b = LPBuilder()
    membership_block(b, "x", spec, cube, MOD1, 0, 1, 0.0)
    b.minimize({})
    assert lp_solve(b.build()).status == "infeasible"


def test_relaxed_feasible_threshold():
    inst = _interval_instance()
    lam = best_selection(inst).lam
    assert relaxed_feasible(inst, lam * 1.05).status == "optimal"
    assert relaxed_feasible(inst, lam * 0.5).status == "infeasible"


def test_relaxed_feasibility_is_monotone_in_scale():
    # the relaxed sets are nested, so feasibility never flips back off
    inst = _interval_instance()
    lam = best_selection(inst).lam
    seen_feasible = False
    for factor in (0.2, 0.6, 0.9, 1.1, 2.0, 10.0):
        ok = relaxed_feasible(inst, lam * factor).status == "optimal"
        assert not (seen_feasible and not ok)
        seen_feasible = seen_feasible or ok
    assert seen_feasible


# -- finiteness experiment ------------------------------------------------------------


def test_finiteness_singletons_pairwise_max():
    inst = _singleton_instance()
    rep = finiteness_experiment(inst, ell=0)
    assert rep.subset_size_bound == 2
    assert rep.exhaustive and rep.subset_count == 3
    assert rep.gamma_hat == pytest.approx(1.0, abs=1e-9)


def test_finiteness_interval_instance():
    nodes = (
        (interval_set(0.0, 0.2), Cube((0.0,), 1.0)),
        (interval_set(1.0, 1.5), Cube((1.0,), 1.0)),
        (interval_set(-2.0, -1.2), Cube((3.0,), 0.5)),
        (interval_set(0.5, 0.6), Cube((-2.0,), 1.0)),
    )
    inst = SelectionInstance(n=1, k=0, m=1, modulus=MOD1, nodes=nodes)
    # constants: the polynomial space is one-dimensional, so the bound is 2
    rep = finiteness_experiment(inst)
    assert rep.subset_size_bound == 2
    assert rep.exhaustive and rep.subset_count == 6
    assert rep.gamma_hat >= 1.0 - 1e-9
    assert rep.lam_full >= rep.max_subset_lam - 1e-12


def test_finiteness_budget_sampling():
    rng = np.random.default_rng(31)
    nodes = tuple(
        (interval_set(float(v), float(v) + 0.1), Cube((float(x),), 1.0))
        for v, x in zip(rng.uniform(-2, 2, size=8), np.arange(8) * 1.5)
    )
    inst = SelectionInstance(n=1, k=0, m=1, modulus=MOD1, nodes=nodes)
    rep = finiteness_experiment(inst, ell=3, budget=10, seed=7)
    # bound stays at 2 (dim of constants is 1): plenty of pairs, tiny budget
    assert not rep.exhaustive
    assert rep.subset_count <= 10
    rep2 = finiteness_experiment(inst, ell=3, budget=10, seed=7)
    assert rep.subset_lams == rep2.subset_lams  # seeded determinism


def test_finiteness_instance_too_small():
    inst = _interval_instance()
    sub = inst.subset([0])
    with pytest.raises(ValueError):
        finiteness_experiment(sub, ell=0)


# -- counterexample table ---------------------------------------------------------------


def test_counterexample_values():
    rows = counterexample_family(8)
    for row in rows:
        assert row.step_distance == math.ldexp(1.0, -row.i * row.i)
        assert row.log_distance == pytest.approx(
            math.log1p(2.0 ** (2 * row.i + 1)), abs=1e-12
        )
    assert rows[0].log_distance == pytest.approx(math.log(9.0), rel=1e-12)
    assert rows[1].log_distance == pytest.approx(math.log(33.0), rel=1e-12)


def test_counterexample_monotonicity():
    rows = counterexample_family(10)
    steps = [r.step_distance for r in rows]
    logs = [r.log_distance for r in rows]
    assert all(a > b for a, b in zip(steps, steps[1:]))
    assert all(a < b for a, b in zip(logs, logs[1:]))


def test_counterexample_bounds():
    with pytest.raises(ValueError):
        counterexample_family(0)
    with pytest.raises(ValueError):
        counterexample_family(31)
    assert len(counterexample_family(30)) == 30
