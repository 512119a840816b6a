"""Trace checking on finite sets: differences, local fits, condition sweeps.

Given samples of a function (or of its jets) on a finite point set, this
module builds a polynomial field over a family of cubes centered at the
samples -- one sup-norm best-fit polynomial per cube -- and measures the
smallest multiplier that makes the field satisfy the pointwise-boundedness and
pairwise-growth conditions characterizing traces of smooth functions.  The
fitted field is a surrogate for near-best local approximations of an ambient
function; reports are labeled accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .cubes import Cube, Point, as_point, point_sub, uniform_norm, weighted_cube_distance
from .jets import Jet, gauge, jet_distance, scale
from .lp import LPBuilder, lp_solve
from .modulus import Modulus
from .poly import MultiIndex, Poly, mi_order, multi_indices


# ---------------------------------------------------------------------------
# sample sets and polynomial fields


@dataclass(frozen=True)
class SampleSet:
    """A finite point set with scalar values or jet (polynomial) data."""

    n: int
    points: tuple[Point, ...]
    values: tuple[float, ...] | None = None
    jets: tuple[Poly, ...] | None = None

    def __post_init__(self) -> None:
        pts = tuple(as_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise ValueError("sample points must be distinct")
        if any(len(p) != self.n for p in pts):
            raise ValueError("sample point dimension mismatch")
        if (self.values is None) == (self.jets is None):
            raise ValueError("provide exactly one of scalar values or jet data")
        if self.values is not None:
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
            if len(self.values) != len(pts):
                raise ValueError("values misaligned with points")
        else:
            object.__setattr__(self, "jets", tuple(self.jets))
            if len(self.jets) != len(pts):
                raise ValueError("jet data misaligned with points")
            if any(p.n != self.n for p in self.jets):
                raise ValueError("jet data dimension mismatch")

    def value_at(self, x: Sequence[float]) -> float:
        idx = self.points.index(as_point(x))
        return self.values[idx]

    def jet_at(self, x: Sequence[float]) -> Poly:
        idx = self.points.index(as_point(x))
        return self.jets[idx]


@dataclass(frozen=True)
class PolyField:
    """A finite mapping cube -> polynomial within one (n, k, m) context."""

    n: int
    k: int
    m: int
    entries: tuple[tuple[Cube, Poly], ...]

    def __post_init__(self) -> None:
        if self.k < 0 or self.m < 1:
            raise ValueError("need k >= 0 and m >= 1")
        ents = tuple(self.entries)
        object.__setattr__(self, "entries", ents)
        seen = set()
        for cube, poly in ents:
            if cube.dim != self.n or poly.n != self.n:
                raise ValueError("field entry dimension mismatch")
            if poly.degree != self.top_degree:
                raise ValueError("field polynomials must carry the context degree bound")
            if cube in seen:
                raise ValueError("duplicate cube in field")
            seen.add(cube)

    @property
    def top_degree(self) -> int:
        return self.k + self.m - 1

    def jets(self) -> list[Jet]:
        return [Jet(poly=p, cube=q) for q, p in self.entries]

    def scale(self, gamma: float) -> "PolyField":
        return PolyField(
            n=self.n,
            k=self.k,
            m=self.m,
            entries=tuple((q, p.scale(gamma)) for q, p in self.entries),
        )


# ---------------------------------------------------------------------------
# finite differences and sampled norms


def finite_difference(
    f: Callable[[Sequence[float]], float],
    x: Sequence[float],
    h: Sequence[float],
    m: int,
) -> float:
    """m-th order difference of f at x with step h: the alternating binomial
    sum of f(x), f(x+h), ..., f(x+mh).  Annihilates polynomials of degree < m."""
    if m < 1:
        raise ValueError("difference order must be >= 1")
    x = as_point(x)
    h = as_point(h)
    total = 0.0
    for i in range(m + 1):
        pt = tuple(a + i * b for a, b in zip(x, h))
        total += (-1) ** (m - i) * math.comb(m, i) * f(pt)
    return total


@dataclass(frozen=True)
class SeminormEstimate:
    """Sampled norm estimate; a lower bound for the true supremum norm."""

    sup_term: float
    diff_term: float

    @property
    def total(self) -> float:
        return self.sup_term + self.diff_term


def seminorm_estimate(
    derivs: Mapping[MultiIndex, Callable[[Sequence[float]], float]],
    box: Sequence[tuple[float, float]],
    mod: Modulus,
    k: int,
    n_x: int = 60,
    n_h: int = 60,
    seed: int = 0,
) -> SeminormEstimate:
    """Sampled smoothness norm: the summed sampled sup of all derivatives of
    order <= k plus, for each top-order derivative, the sampled sup of
    |m-th difference| / w(step size).

    Box corners and extreme steps enter the sample deterministically; the rest
    is seeded uniform sampling.  Being a sampled supremum over a bounded
    region, the result only ever underestimates the true norm.
    """
    n = len(box)
    m = mod.m
    for alpha in multi_indices(n, k):
        if alpha not in derivs:
            raise KeyError(f"missing derivative handle for order {alpha}")
    rng = np.random.default_rng(seed)
    lows = np.array([lo for lo, _ in box], dtype=float)
    highs = np.array([hi for _, hi in box], dtype=float)
    sizes = highs - lows

    corners = (
        [tuple(pt) for pt in _corner_points(lows, highs)] if n <= 12 else []
    )
    xs = corners + [
        tuple(lows + rng.uniform(size=n) * sizes) for _ in range(n_x)
    ]
    h_corners = (
        [tuple(pt) for pt in _corner_points(-sizes, sizes)] if n <= 12 else []
    )
    hs = [h for h in h_corners if any(c != 0.0 for c in h)]
    hs += [
        tuple(rng.uniform(-1.0, 1.0, size=n) * sizes) for _ in range(n_h)
    ]
    hs = [h for h in hs if any(c != 0.0 for c in h)]

    sup_term = 0.0
    for alpha in multi_indices(n, k):
        handle = derivs[alpha]
        sup_term += max(abs(handle(x)) for x in xs)

    diff_term = 0.0
    for alpha in multi_indices(n, k):
        if mi_order(alpha) != k:
            continue
        handle = derivs[alpha]
        worst = 0.0
        for x in xs:
            for h in hs:
                wh = mod.eval(uniform_norm(h))
                diff = finite_difference(handle, x, h, m)
                if wh == 0.0:
                    if abs(diff) > 1e-12:
                        raise ValueError("modulus vanishes at a nonzero step")
                    continue
                worst = max(worst, abs(diff) / wh)
        diff_term += worst
    return SeminormEstimate(sup_term=sup_term, diff_term=diff_term)


def _corner_points(lows: np.ndarray, highs: np.ndarray):
    n = lows.size
    for mask in range(2**n):
        yield np.array(
            [highs[i] if (mask >> i) & 1 else lows[i] for i in range(n)]
        )


# ---------------------------------------------------------------------------
# local polynomial fitting


def _scaled_basis(n: int, degree: int, cube: Cube) -> list[Poly]:
    """Cube-local polynomial basis ((y - x_Q)/r_Q)^beta, expanded exactly.

    On the cube every basis value lies in [-1, 1], which keeps the fitting
    LPs well conditioned regardless of the cube's scale or position.
    """
    out = []
    x = cube.center
    inv_r = 1.0 / cube.radius
    for beta in multi_indices(n, degree):
        # expand (y - x)^beta through exact binomials, scaled by r^-|beta|
        coef: dict[MultiIndex, float] = {}
        for gamma in _sub_indices(beta):
            c = inv_r ** mi_order(beta)
            for bi, gi, xi in zip(beta, gamma, x):
                c *= math.comb(bi, gi)
                if bi - gi:
                    c *= (-xi) ** (bi - gi)
            if c != 0.0:
                coef[gamma] = coef.get(gamma, 0.0) + c
        out.append(Poly(n, degree, coef))
    return out


def _sub_indices(beta: MultiIndex):
    from itertools import product as _product

    return _product(*(range(b + 1) for b in beta))


def _two_stage_sup_fit(
    n: int,
    degree: int,
    basis: list[Poly],
    rows: list[list[float]],
    targets: list[float],
    weights: list[float],
    eq_rows: list[tuple[list[float], float]],
) -> Poly:
    """min-sup-residual fit with an l1-minimal tie-break.

    Rows constrain |row . d - target| <= eps * weight over basis coordinates
    d; equality rows pin row . d = target.  Stage one minimizes eps; stage two
    re-solves at the optimal eps minimizing the l1 mass of d, which (in the
    cube-local basis) keeps radius-weighted derivative magnitudes small.
    """
    b = LPBuilder()
    dvars = [b.var(f"d{j}") for j in range(len(basis))]
    evar = b.var("eps")
    for row, target, weight in zip(rows, targets, weights):
        coeffs = {dvars[j]: row[j] for j in range(len(basis)) if row[j] != 0.0}
        b.add_le({**coeffs, evar: -weight}, target)
        b.add_le({**{j: -v for j, v in coeffs.items()}, evar: -weight}, -target)
    b.add_ge({evar: 1.0}, 0.0)
    for row, target in eq_rows:
        b.add_eq({dvars[j]: row[j] for j in range(len(basis)) if row[j] != 0.0}, target)
    b.minimize({evar: 1.0})
    sol = lp_solve(b.build())
    if sol.status != "optimal":
        raise ArithmeticError(f"sup-norm fit LP ended with status {sol.status}")
    eps_star = max(sol.objective, 0.0)

    eps_fix = eps_star + 1e-11 * (1.0 + eps_star)
    b2 = LPBuilder()
    pos = [b2.var(f"p{j}") for j in range(len(basis))]
    neg = [b2.var(f"m{j}") for j in range(len(basis))]
    for j in range(len(basis)):
        b2.add_ge({pos[j]: 1.0}, 0.0)
        b2.add_ge({neg[j]: 1.0}, 0.0)
    for row, target, weight in zip(rows, targets, weights):
        coeffs = {}
        for j in range(len(basis)):
            if row[j] != 0.0:
                coeffs[pos[j]] = row[j]
                coeffs[neg[j]] = -row[j]
        b2.add_le(dict(coeffs), target + eps_fix * weight)
        b2.add_le({jj: -v for jj, v in coeffs.items()}, eps_fix * weight - target)
    for row, target in eq_rows:
        coeffs = {}
        for j in range(len(basis)):
            if row[j] != 0.0:
                coeffs[pos[j]] = row[j]
                coeffs[neg[j]] = -row[j]
        b2.add_eq(coeffs, target)
    b2.minimize({v: 1.0 for v in pos + neg})
    sol2 = lp_solve(b2.build())
    if sol2.status != "optimal":
        raise ArithmeticError(f"tie-break LP ended with status {sol2.status}")
    result = Poly.zero(n, degree)
    for j, base in enumerate(basis):
        d = float(sol2.x[pos[j]] - sol2.x[neg[j]])
        if d != 0.0:
            result = result + base.scale(d)
    return result


def local_fit(
    sample: SampleSet,
    cube: Cube,
    degree: int,
    interpolate_center: bool = False,
) -> Poly:
    """Sup-norm best polynomial fit to the scalar samples inside the cube.

    Minimizes the maximum absolute residual over the captured points by
    linear programming in cube-local scaled coordinates; ties are broken by a
    second solve minimizing the sum of absolute local coefficients at the
    optimal residual.  With ``interpolate_center`` the fit is pinned to the
    sample value at the cube center (which must itself be a sample point).
    """
    if sample.values is None:
        raise ValueError("scalar sample data required (use jet_fit for jet data)")
    pts = [p for p in sample.points if cube.contains(p)]
    if not pts:
        raise ValueError("cube captures no sample points")
    basis = _scaled_basis(sample.n, degree, cube)
    rows = [[base.eval(p) for base in basis] for p in pts]
    targets = [sample.value_at(p) for p in pts]
    eq_rows = []
    if interpolate_center:
        eq_rows.append(
            ([base.eval(cube.center) for base in basis], sample.value_at(cube.center))
        )
    return _two_stage_sup_fit(
        sample.n, degree, basis, rows, targets, [1.0] * len(rows), eq_rows
    )


def jet_fit(
    sample: SampleSet,
    cube: Cube,
    k: int,
    degree: int,
    mod: Modulus,
    interpolate_center: bool = False,
) -> Poly:
    """Best fit to jet data inside the cube: minimizes the largest scaled
    deviation |D^a(P - P_y)(y)| / (r^(k-|a|) w(r)) over captured points y and
    orders |a| <= k.  With ``interpolate_center`` the degree-k Taylor part at
    the center is pinned to the center's data polynomial."""
    if sample.jets is None:
        raise ValueError("jet sample data required")
    pts = [p for p in sample.points if cube.contains(p)]
    if not pts:
        raise ValueError("cube captures no sample points")
    low_orders = multi_indices(sample.n, k)
    r = cube.radius
    wr = mod.eval(r)
    if wr == 0.0:
        raise ValueError("modulus vanishes at the cube radius")
    basis = _scaled_basis(sample.n, degree, cube)
    rows, targets, weights = [], [], []
    for p in pts:
        data = sample.jet_at(p)
        for alpha in low_orders:
            rows.append([base.deriv_eval(alpha, p) for base in basis])
            targets.append(data.deriv_eval(alpha, p))
            weights.append(r ** (k - mi_order(alpha)) * wr)
    eq_rows = []
    if interpolate_center:
        data = sample.jet_at(cube.center)
        for alpha in low_orders:
            eq_rows.append(
                (
                    [base.deriv_eval(alpha, cube.center) for base in basis],
                    data.deriv_eval(alpha, cube.center),
                )
            )
    return _two_stage_sup_fit(sample.n, degree, basis, rows, targets, weights, eq_rows)


def fit_field(
    sample: SampleSet,
    cubes: Sequence[Cube],
    k: int,
    m: int,
    mod: Modulus | None = None,
    interpolate_center: bool = False,
) -> PolyField:
    """Fit one polynomial per cube and assemble the field."""
    degree = k + m - 1
    entries = []
    for cube in cubes:
        if sample.values is not None:
            poly = local_fit(sample, cube, degree, interpolate_center)
        else:
            if mod is None:
                raise ValueError("jet data fitting needs the modulus")
            poly = jet_fit(sample, cube, k, degree, mod, interpolate_center)
        entries.append((cube, poly))
    return PolyField(n=sample.n, k=k, m=m, entries=tuple(entries))


# ---------------------------------------------------------------------------
# condition sweeps


@dataclass(frozen=True)
class ConditionStat:
    """Worst ratio of one condition family with its witness."""

    name: str
    lambda_hat: float
    witness: dict | None


@dataclass(frozen=True)
class CheckReport:
    """Aggregated trace-condition report; lambda_hat is the smallest
    multiplier making every checked inequality hold (max of the family
    maxima)."""

    lambda_hat: float
    pointwise: ConditionStat
    pairwise: ConditionStat
    interpolation: tuple[tuple[Cube, float], ...] | None
    fit_mode: str | None
    notes: tuple[str, ...]


def check_conditions(
    sample: SampleSet | None,
    field: PolyField,
    mod: Modulus,
    k: int,
    fit_mode: str | None = None,
) -> CheckReport:
    """Sweep the trace conditions over the field.

    * pointwise bounds: for every cube with radius <= 1 and every derivative
      order up to the degree bound, the derivative at the center scaled by
      the radius power it may legally grow with;
    * pairwise growth: for every ordered cube pair and order, the derivative
      discrepancy at the first center divided by its gauge;
    * interpolation residuals |P_Q(x_Q) - f(x_Q)| when scalar data is given.

    A zero gauge denominator cannot occur for distinct cubes of positive
    radius, so no ratio is ever indeterminate.
    """
    if k != field.k:
        raise ValueError("context k mismatch")
    if mod.m != field.m:
        raise ValueError("modulus order does not match the field context")
    top = field.top_degree
    n = field.n

    worst_pt = 0.0
    wit_pt = None
    for idx, (cube, poly) in enumerate(field.entries):
        if cube.radius > 1.0:
            continue
        for gamma in multi_indices(n, top):
            e = max(0, mi_order(gamma) - k)
            ratio = abs(poly.deriv_eval(gamma, cube.center)) * cube.radius**e
            if ratio > worst_pt:
                worst_pt = ratio
                wit_pt = {"cube_index": idx, "order": gamma, "ratio": ratio}

    worst_pair = 0.0
    wit_pair = None
    ents = field.entries
    for i, (q1, p1) in enumerate(ents):
        for j, (q2, p2) in enumerate(ents):
            if i == j:
                continue
            sep = uniform_norm(point_sub(q1.center, q2.center))
            t = max(q1.radius, q2.radius) + sep
            v = min(q1.radius, q2.radius)
            diff = p1 - p2
            for alpha in multi_indices(n, top):
                denom = gauge(mod, top, alpha, t, v)
                ratio = abs(diff.deriv_eval(alpha, q1.center)) / denom
                if ratio > worst_pair:
                    worst_pair = ratio
                    wit_pair = {
                        "cube_indices": (i, j),
                        "order": alpha,
                        "ratio": ratio,
                    }

    interpolation = None
    if sample is not None and sample.values is not None:
        interpolation = tuple(
            (cube, abs(poly.eval(cube.center) - sample.value_at(cube.center)))
            for cube, poly in field.entries
        )

    notes = (
        "field polynomials are best-fit surrogates over cube captures",
        "sampled quantities are lower bounds for the corresponding suprema",
    )
    return CheckReport(
        lambda_hat=max(worst_pt, worst_pair),
        pointwise=ConditionStat("pointwise_bounds", worst_pt, wit_pt),
        pairwise=ConditionStat("pairwise_growth", worst_pair, wit_pair),
        interpolation=interpolation,
        fit_mode=fit_mode,
        notes=notes,
    )


def lipschitz_forms(field: PolyField, mod: Modulus, lam: float) -> tuple[bool, bool]:
    """Evaluate the two equivalent forms of the scaled Lipschitz condition.

    Returns (ratio form, metric form): the ratio form compares every
    derivative discrepancy against lam times its gauge; the metric form
    compares the jet distance of the 1/lam-scaled jets against the weighted
    cube distance.  The two booleans agree for every field and lam > 0.
    """
    if lam <= 0:
        raise ValueError("scale must be positive")
    if mod.m != field.m:
        raise ValueError("modulus order does not match the field context")
    top = field.top_degree
    n = field.n
    jets = field.jets()

    ratio_ok = True
    for i, (q1, p1) in enumerate(field.entries):
        for j, (q2, p2) in enumerate(field.entries):
            if i == j:
                continue
            sep = uniform_norm(point_sub(q1.center, q2.center))
            t = max(q1.radius, q2.radius) + sep
            v = min(q1.radius, q2.radius)
            diff = p1 - p2
            for alpha in multi_indices(n, top):
                if abs(diff.deriv_eval(alpha, q1.center)) > lam * gauge(
                    mod, top, alpha, t, v
                ):
                    ratio_ok = False
                    break
            if not ratio_ok:
                break
        if not ratio_ok:
            break

    metric_ok = True
    inv = 1.0 / lam
    for i in range(len(jets)):
        for j in range(i + 1, len(jets)):
            lhs = jet_distance(mod, scale(inv, jets[i]), scale(inv, jets[j]))
            rhs = weighted_cube_distance(mod, jets[i].cube, jets[j].cube)
            if lhs > rhs:
                metric_ok = False
                break
        if not metric_ok:
            break
    return ratio_ok, metric_ok


@dataclass(frozen=True)
class LoSeminorm:
    """Scale seminorm of a field with its geodesic bracket.

    ``value`` is the exact threshold for the pairwise (quasi-distance) form;
    the geodesic form lies within [value * e^-n, value].
    """

    value: float
    lower: float
    upper: float


def lo_seminorm(field: PolyField, mod: Modulus) -> LoSeminorm:
    """Smallest multiplier whose reciprocal scaling makes the field
    1-Lipschitz in the quasi-distance sense: the maximum over cube pairs,
    derivative orders and both centers of discrepancy / gauge."""
    if mod.m != field.m:
        raise ValueError("modulus order does not match the field context")
    top = field.top_degree
    n = field.n
    worst = 0.0
    ents = field.entries
    for i in range(len(ents)):
        q1, p1 = ents[i]
        for j in range(i + 1, len(ents)):
            q2, p2 = ents[j]
            sep = uniform_norm(point_sub(q1.center, q2.center))
            t = max(q1.radius, q2.radius) + sep
            v = min(q1.radius, q2.radius)
            diff = p1 - p2
            for alpha in multi_indices(n, top):
                denom = gauge(mod, top, alpha, t, v)
                for y in (q1.center, q2.center):
                    worst = max(worst, abs(diff.deriv_eval(alpha, y)) / denom)
    return LoSeminorm(value=worst, lower=worst * math.exp(-n), upper=worst)


@dataclass(frozen=True)
class StarNorm:
    """Sup of center derivatives scaled by admissible radius powers, over
    cubes of radius <= 1; ``empty_sup`` flags that no cube qualified."""

    value: float
    empty_sup: bool


def star_norm(field: PolyField, k: int) -> StarNorm:
    if k != field.k:
        raise ValueError("context k mismatch")
    top = field.top_degree
    value = 0.0
    any_small = False
    for cube, poly in field.entries:
        if cube.radius > 1.0:
            continue
        any_small = True
        for gamma in multi_indices(field.n, top):
            e = max(0, mi_order(gamma) - k)
            value = max(
                value, abs(poly.deriv_eval(gamma, cube.center)) * cube.radius**e
            )
    return StarNorm(value=value, empty_sup=not any_small)


def lo_norm_full(field: PolyField, mod: Modulus) -> float:
    """Full field norm: star norm plus scale seminorm."""
    return star_norm(field, field.k).value + lo_seminorm(field, mod).value


# ---------------------------------------------------------------------------
# limit jets


@dataclass(frozen=True)
class LimitJetRow:
    order: MultiIndex
    radius: float
    difference: float
    envelope: float

    @property
    def ratio(self) -> float:
        return self.difference / self.envelope if self.envelope > 0 else math.inf


@dataclass(frozen=True)
class LimitJetResult:
    """Limit polynomial at a center with shrinking radii, plus per-order
    successive differences against the radius-power times modulus envelope."""

    poly: Poly
    rows: tuple[LimitJetRow, ...]

    @property
    def envelope_constant(self) -> float:
        return max((row.ratio for row in self.rows), default=0.0)


def limit_jet(field: PolyField, mod: Modulus, x: Sequence[float], k: int) -> LimitJetResult:
    """Taylor part at x of the smallest-radius entry centered at x, with a
    convergence diagnostic from the successive entries.

    Needs at least three distinct radii at the center.  For each derivative
    order up to k and each consecutive radius pair, the difference of center
    derivatives is compared against r^(k - order) * w(r) at the larger radius.
    """
    if k != field.k:
        raise ValueError("context k mismatch")
    x = as_point(x)
    stack = sorted(
        ((q.radius, p) for q, p in field.entries if q.center == x),
        key=lambda t: -t[0],
    )
    if len({r for r, _ in stack}) < 3:
        raise ValueError("need at least three radii at the center")
    rows = []
    for (r_big, p_big), (_, p_small) in zip(stack, stack[1:]):
        for alpha in multi_indices(field.n, k):
            diff = abs(p_big.deriv_eval(alpha, x) - p_small.deriv_eval(alpha, x))
            env = r_big ** (k - mi_order(alpha)) * mod.eval(r_big)
            rows.append(
                LimitJetRow(order=alpha, radius=r_big, difference=diff, envelope=env)
            )
    limit_poly = stack[-1][1].taylor(x, k)
    return LimitJetResult(poly=limit_poly, rows=tuple(rows))
