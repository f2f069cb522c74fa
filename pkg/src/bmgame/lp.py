"""Exact linear programming by the two-phase simplex method.

Everything is computed over the rationals: the optimum, the witness point,
and the dual multipliers are exact, and the pivot rule is Bland's rule, so
the solver cannot cycle and is fully deterministic.  Problems are stated as

    minimize    c . x
    subject to  A_ub x <= b_ub
                A_eq x  = b_eq

with free variables by default; ``nonneg=True`` restricts all variables to
x >= 0 without spending rows on bound constraints (the shape every gauge
LP in this package uses).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatchError
from .linalg import Matrix, vec_dot
from .ratio import ONE, ZERO, Q, qof

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    objective: tuple
    a_ub: Matrix
    b_ub: tuple
    a_eq: Matrix
    b_eq: tuple
    nonneg: bool = False

    def __post_init__(self):
        n = len(self.objective)
        if self.a_ub.cols != n or self.a_eq.cols != n:
            raise DimensionMismatchError("constraint matrices do not match variable count")
        if self.a_ub.rows != len(self.b_ub) or self.a_eq.rows != len(self.b_eq):
            raise DimensionMismatchError("constraint right-hand sides do not match row counts")

    @staticmethod
    def build(objective: Sequence, ub=(), eq=(), nonneg: bool = False) -> "LpProblem":
        """Assemble a problem from (coefficients, rhs) pairs."""
        c = tuple(qof(v) for v in objective)
        n = len(c)
        ub_rows = [(tuple(qof(v) for v in row), qof(rhs)) for row, rhs in ub]
        eq_rows = [(tuple(qof(v) for v in row), qof(rhs)) for row, rhs in eq]
        for row, _ in ub_rows + eq_rows:
            if len(row) != n:
                raise DimensionMismatchError("constraint row length does not match objective")
        a_ub = Matrix.from_rows([r for r, _ in ub_rows], cols=n)
        a_eq = Matrix.from_rows([r for r, _ in eq_rows], cols=n)
        return LpProblem(c, a_ub, tuple(r for _, r in ub_rows), a_eq, tuple(r for _, r in eq_rows), nonneg)


@dataclass(frozen=True)
class LpOutcome:
    status: str
    value: Q | None = None
    witness: tuple | None = None
    dual_ub: tuple | None = None
    dual_eq: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dense simplex tableau over exact rationals."""

    def __init__(self, rows: list[list], basis: list[int], ncols: int):
        self.rows = rows          # each: ncols coefficients + rhs
        self.basis = basis        # basic column index per row
        self.ncols = ncols

    def pivot(self, row: int, col: int):
        pivot_row = self.rows[row]
        inv = ONE / pivot_row[col]
        self.rows[row] = pivot_row = [inv * v for v in pivot_row]
        for i, other in enumerate(self.rows):
            if i != row and other[col] != 0:
                factor = other[col]
                self.rows[i] = [a - factor * b for a, b in zip(other, pivot_row)]
        self.basis[row] = col

    def solve(self, cost: list, banned: set[int]) -> str:
        """Run simplex with Bland's rule on the given cost vector.

        Returns OPTIMAL or UNBOUNDED; mutates the tableau in place.
        ``cost`` has one entry per column (no rhs entry).
        """
        while True:
            # reduced costs: c_j - c_B . column_j
            basis_cost = [cost[b] for b in self.basis]
            entering = -1
            for j in range(self.ncols):
                if j in banned or j in self.basis:
                    continue
                rc = cost[j]
                if any(bc != 0 for bc in basis_cost):
                    rc = rc - sum(bc * self.rows[i][j] for i, bc in enumerate(basis_cost) if bc != 0)
                if rc < 0:
                    entering = j
                    break  # Bland: smallest improving index
            if entering < 0:
                return OPTIMAL
            leaving = -1
            best_ratio = None
            for i, row in enumerate(self.rows):
                coef = row[entering]
                if coef > 0:
                    ratio = row[-1] / coef
                    if best_ratio is None or ratio < best_ratio or (
                        ratio == best_ratio and self.basis[i] < self.basis[leaving]
                    ):
                        best_ratio = ratio
                        leaving = i
            if leaving < 0:
                return UNBOUNDED
            self.pivot(leaving, entering)


def lp_solve(problem: LpProblem) -> LpOutcome:
    """Exact optimum, witness, and duals, or an Infeasible/Unbounded verdict."""
    n = len(problem.objective)
    m_ub = problem.a_ub.rows
    m_eq = problem.a_eq.rows
    m = m_ub + m_eq

    # Standard-form columns: original variables (split into +/- when free),
    # then one slack per inequality, then one artificial per row that needs it.
    nvar = n if problem.nonneg else 2 * n

    def expand_row(row: Sequence) -> list:
        if problem.nonneg:
            return list(row)
        out = []
        for v in row:
            out.append(v)
        for v in row:
            out.append(-v)
        return out

    rows: list[list] = []
    flipped: list[bool] = []
    for i in range(m_ub):
        base = expand_row(problem.a_ub.entries[i])
        slack = [ZERO] * m_ub
        slack[i] = ONE
        rhs = problem.b_ub[i]
        row = base + slack + [rhs]
        if rhs < 0:
            row = [-v for v in row]
            flipped.append(True)
        else:
            flipped.append(False)
        rows.append(row)
    for i in range(m_eq):
        base = expand_row(problem.a_eq.entries[i])
        rhs = problem.b_eq[i]
        row = base + [ZERO] * m_ub + [rhs]
        if rhs < 0:
            row = [-v for v in row]
            flipped.append(True)
        else:
            flipped.append(False)
        rows.append(row)

    needs_artificial = [flipped[i] if i < m_ub else True for i in range(m)]
    n_art = sum(needs_artificial)
    ncols = nvar + m_ub + n_art
    art_col: dict[int, int] = {}
    next_art = nvar + m_ub
    basis: list[int] = []
    for i in range(m):
        art = [ZERO] * n_art
        if needs_artificial[i]:
            art_col[i] = next_art
            art[next_art - (nvar + m_ub)] = ONE
            basis.append(next_art)
            next_art += 1
        else:
            basis.append(nvar + i)  # the slack
        rhs = rows[i].pop()
        rows[i] = rows[i] + art + [rhs]

    tableau = _Tableau(rows, basis, ncols)

    if n_art:
        phase1_cost = [ZERO] * ncols
        for i in range(m):
            if needs_artificial[i]:
                phase1_cost[art_col[i]] = ONE
        status = tableau.solve(phase1_cost, banned=set())
        assert status == OPTIMAL  # phase 1 is bounded below by 0
        infeas = sum(tableau.rows[i][-1] for i in range(m) if tableau.basis[i] >= nvar + m_ub)
        if infeas != 0:
            return LpOutcome(INFEASIBLE)
        # Drive any artificial still in the basis (at zero) out, when possible.
        for i in range(m):
            if tableau.basis[i] >= nvar + m_ub:
                for j in range(nvar + m_ub):
                    if tableau.rows[i][j] != 0:
                        tableau.pivot(i, j)
                        break

    banned = set(art_col.values())
    phase2_cost = [ZERO] * ncols
    for j in range(n):
        phase2_cost[j] = problem.objective[j]
        if not problem.nonneg:
            phase2_cost[n + j] = -problem.objective[j]
    status = tableau.solve(phase2_cost, banned=banned)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED)

    solution = [ZERO] * ncols
    for i, b in enumerate(tableau.basis):
        solution[b] = tableau.rows[i][-1]
    if problem.nonneg:
        witness = tuple(solution[j] for j in range(n))
    else:
        witness = tuple(solution[j] - solution[n + j] for j in range(n))
    value = vec_dot(problem.objective, witness) if n else ZERO

    # Duals from marker-column reduced costs: the artificial (or slack) of
    # standardized row i carries +/- e_i, so its reduced cost reveals y_i.
    basis_cost = [phase2_cost[b] for b in tableau.basis]

    def reduced_cost(j: int):
        return phase2_cost[j] - sum(bc * tableau.rows[i][j] for i, bc in enumerate(basis_cost) if bc != 0)

    y = []
    for i in range(m):
        if needs_artificial[i]:
            y.append(-reduced_cost(art_col[i]))
        else:
            y.append(-reduced_cost(nvar + i))
    dual = [(-y[i] if flipped[i] else y[i]) for i in range(m)]
    return LpOutcome(
        OPTIMAL,
        value=value,
        witness=witness,
        dual_ub=tuple(dual[:m_ub]),
        dual_eq=tuple(dual[m_ub:]),
    )
