"""Dense linear programming for desk-scale problems.

Two-phase primal simplex on a dense tableau with Bland's anti-cycling rule.
Variables are free reals (internally split into positive parts); constraints
are linear inequalities (<=) and equalities.  Exact vertex optima at the
problem sizes used here (up to a few thousand constraints).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_PIVOT_TOL = 1e-10
_COST_TOL = 1e-9
_FEAS_TOL = 1e-8


@dataclass
class LPProblem:
    """min objective . x over free x subject to a_ub x <= b_ub, a_eq x = b_eq."""

    objective: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float)
        n = self.objective.size
        self.a_ub = np.asarray(self.a_ub, dtype=float).reshape(-1, n)
        self.b_ub = np.asarray(self.b_ub, dtype=float).reshape(-1)
        self.a_eq = np.asarray(self.a_eq, dtype=float).reshape(-1, n)
        self.b_eq = np.asarray(self.b_eq, dtype=float).reshape(-1)
        if self.a_ub.shape[0] != self.b_ub.size or self.a_eq.shape[0] != self.b_eq.size:
            raise ValueError("constraint matrix/vector shape mismatch")


@dataclass
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    objective: float | None = None


@dataclass
class LPBuilder:
    """Incremental construction of an LPProblem over named free variables."""

    _names: dict[str, int] = field(default_factory=dict)
    _obj: dict[int, float] = field(default_factory=dict)
    _ub_rows: list[tuple[dict[int, float], float]] = field(default_factory=list)
    _eq_rows: list[tuple[dict[int, float], float]] = field(default_factory=list)

    def var(self, name: str) -> int:
        if name not in self._names:
            self._names[name] = len(self._names)
        return self._names[name]

    @property
    def num_vars(self) -> int:
        return len(self._names)

    def add_le(self, coeffs: dict[int, float], rhs: float) -> None:
        self._ub_rows.append((dict(coeffs), float(rhs)))

    def add_ge(self, coeffs: dict[int, float], rhs: float) -> None:
        self._ub_rows.append(({j: -c for j, c in coeffs.items()}, -float(rhs)))

    def add_eq(self, coeffs: dict[int, float], rhs: float) -> None:
        self._eq_rows.append((dict(coeffs), float(rhs)))

    def minimize(self, coeffs: dict[int, float]) -> None:
        self._obj = dict(coeffs)

    def build(self) -> LPProblem:
        n = self.num_vars
        c = np.zeros(n)
        for j, v in self._obj.items():
            c[j] = v

        def pack(rows):
            a = np.zeros((len(rows), n))
            b = np.zeros(len(rows))
            for i, (coeffs, rhs) in enumerate(rows):
                for j, v in coeffs.items():
                    a[i, j] = v
                b[i] = rhs
            return a, b

        a_ub, b_ub = pack(self._ub_rows)
        a_eq, b_eq = pack(self._eq_rows)
        return LPProblem(objective=c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq)


def lp_solve(problem: LPProblem) -> LPSolution:
    """Solve the problem by two-phase dense simplex with Bland's rule."""
    n = problem.objective.size
    m_ub = problem.a_ub.shape[0]
    m_eq = problem.a_eq.shape[0]
    m = m_ub + m_eq
    if m == 0:
        # objective over free variables with no constraints
        if np.any(problem.objective != 0.0):
            return LPSolution(status="unbounded")
        return LPSolution(status="optimal", x=np.zeros(n), objective=0.0)

    # row equilibration: scale every constraint to unit max-norm so pivot
    # tolerances are meaningful across badly mixed data scales
    a_ub, b_ub = problem.a_ub.copy(), problem.b_ub.copy()
    a_eq, b_eq = problem.a_eq.copy(), problem.b_eq.copy()
    for mat, vec in ((a_ub, b_ub), (a_eq, b_eq)):
        if mat.size:
            norms = np.max(np.abs(mat), axis=1)
            keep = norms > 0
            mat[keep] /= norms[keep, None]
            vec[keep] /= norms[keep]

    # standard form: x = xp - xm, slack s >= 0 on inequality rows
    n_split = 2 * n
    a = np.zeros((m, n_split + m_ub))
    b = np.zeros(m)
    a[:m_ub, :n] = a_ub
    a[:m_ub, n:n_split] = -a_ub
    a[:m_ub, n_split : n_split + m_ub] = np.eye(m_ub)
    b[:m_ub] = b_ub
    a[m_ub:, :n] = a_eq
    a[m_ub:, n:n_split] = -a_eq
    b[m_ub:] = b_eq

    flipped = b < 0
    a[flipped] *= -1.0
    b[flipped] *= -1.0

    # initial basis: surviving slack columns where possible, artificials elsewhere
    basis = np.full(m, -1, dtype=int)
    needs_art = []
    for i in range(m):
        if i < m_ub and not flipped[i]:
            basis[i] = n_split + i
        else:
            needs_art.append(i)
    n_core = n_split + m_ub
    n_art = len(needs_art)
    tableau = np.zeros((m, n_core + n_art + 1))
    tableau[:, :n_core] = a
    tableau[:, -1] = b
    for k, i in enumerate(needs_art):
        tableau[i, n_core + k] = 1.0
        basis[i] = n_core + k

    if n_art:
        phase1_cost = np.zeros(n_core + n_art)
        phase1_cost[n_core:] = 1.0
        status = _simplex(tableau, basis, phase1_cost, restrict=None)
        if status != "optimal":
            raise ArithmeticError("phase-1 simplex failed to terminate")
        scale = max(1.0, float(np.max(np.abs(b))))
        if float(phase1_cost[basis] @ tableau[:, -1]) > _FEAS_TOL * scale:
            return LPSolution(status="infeasible")
        _drive_out_artificials(tableau, basis, n_core)

    cost = np.zeros(tableau.shape[1] - 1)
    cost[:n] = problem.objective
    cost[n:n_split] = -problem.objective
    status = _simplex(tableau, basis, cost, restrict=n_core)
    if status == "unbounded":
        return LPSolution(status="unbounded")

    full = np.zeros(tableau.shape[1] - 1)
    full[basis] = tableau[:, -1]
    x = full[:n] - full[n:n_split]
    # verify against the (equilibrated) constraints: a corrupted tableau must
    # fail loudly, never return a silently infeasible "optimum"
    tol = 1e-6 * max(1.0, float(np.max(np.abs(x))) if x.size else 1.0)
    if a_ub.size and float(np.max(a_ub @ x - b_ub)) > tol:
        raise ArithmeticError("simplex lost primal feasibility (inequalities)")
    if a_eq.size and float(np.max(np.abs(a_eq @ x - b_eq))) > tol:
        raise ArithmeticError("simplex lost primal feasibility (equalities)")
    return LPSolution(status="optimal", x=x, objective=float(problem.objective @ x))


def _simplex(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray, restrict) -> str:
    """Run primal simplex to optimality on a tableau in canonical form.

    ``restrict`` limits entering candidates to columns < restrict (used in
    phase 2 to keep artificial columns out of the basis).  Ordinarily the
    entering column is the most negative reduced cost and ratio-test ties are
    broken on the largest pivot (numerical stability); when the objective
    stalls on degenerate pivots the rule switches to Bland's smallest-index
    selection, whose termination guarantee breaks the cycle.
    """
    m = tableau.shape[0]
    ncols = tableau.shape[1] - 1
    limit = ncols if restrict is None else restrict
    max_iter = 20000 + 200 * (m + ncols)
    in_basis = np.zeros(ncols, dtype=bool)
    in_basis[basis] = True
    stall = 0
    last_obj = math.inf
    for _ in range(max_iter):
        cb = cost[basis]
        reduced = cost[:limit] - cb @ tableau[:, :limit]
        reduced[in_basis[:limit]] = 0.0
        bland = stall > 40
        entering = -1
        if bland:
            for j in range(limit):
                if reduced[j] < -_COST_TOL:
                    entering = j
                    break
        else:
            j = int(np.argmin(reduced))
            if reduced[j] < -_COST_TOL:
                entering = j
        if entering < 0:
            return "optimal"
        col = tableau[:, entering]
        rhs = tableau[:, -1]
        best_ratio = math.inf
        for i in range(m):
            if col[i] > _PIVOT_TOL:
                best_ratio = min(best_ratio, max(rhs[i], 0.0) / col[i])
        if not math.isfinite(best_ratio):
            return "unbounded"
        tie = best_ratio + 1e-9 * max(1.0, best_ratio)
        leaving = -1
        for i in range(m):
            if col[i] > _PIVOT_TOL and max(rhs[i], 0.0) / col[i] <= tie:
                if leaving < 0:
                    leaving = i
                elif bland:
                    if basis[i] < basis[leaving]:
                        leaving = i
                elif col[i] > col[leaving]:
                    leaving = i
        in_basis[basis[leaving]] = False
        in_basis[entering] = True
        _pivot(tableau, basis, leaving, entering)
        obj = float(cost[basis] @ tableau[:, -1])
        if obj < last_obj - 1e-12 * (1.0 + abs(obj)):
            stall = 0
        else:
            stall += 1
        last_obj = obj
    raise ArithmeticError("simplex iteration limit exceeded")


def _pivot(tableau: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    piv = tableau[row]
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i] -= tableau[i, col] * piv
    basis[row] = col
    rhs = tableau[:, -1]
    rhs[np.abs(rhs) < 1e-13] = 0.0


def _drive_out_artificials(tableau: np.ndarray, basis: np.ndarray, n_core: int) -> None:
    """Pivot degenerate artificials out of the basis; zero redundant rows."""
    for i in range(tableau.shape[0]):
        if basis[i] >= n_core:
            row = tableau[i, :n_core]
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > _PIVOT_TOL:
                _pivot(tableau, basis, i, j)
            else:
                # redundant constraint row (rows are equilibrated, so entries
                # this small are noise); neutralize it
                tableau[i, :] = 0.0
                tableau[i, basis[i]] = 1.0
