"""Minimization of weighted L1 objectives over affine subspaces.

Two independent routes are provided and cross-checked by the test suite:

* :func:`solve_simplex` -- exact rational simplex (gmpy2 rationals, Bland's
  rule, two phases) on the positive/negative-part splitting, returning the
  optimum together with a dual vector whose feasibility certifies optimality.
* :func:`solve_subgradient` -- a float64 projected subgradient method whose
  inner loop lives in :mod:`sunorm._kernels` (numba-compiled when available).
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from . import _kernels
from .errors import InfeasibleProblem, UnboundedProblem, UsageError


@dataclass
class L1Problem:
    """minimize sum_j weights[j] * |x_j|  subject to  constraints . x = rhs."""

    weights: list
    constraints: list
    rhs: list
    labels: list = None

    def __post_init__(self):
        self.weights = [Fraction(w) for w in self.weights]
        self.constraints = [[Fraction(a) for a in row] for row in self.constraints]
        self.rhs = [Fraction(v) for v in self.rhs]
        n = len(self.weights)
        if any(len(row) != n for row in self.constraints):
            raise UsageError("constraint row length does not match variable count")
        if len(self.rhs) != len(self.constraints):
            raise UsageError("rhs length does not match constraint count")
        if any(w < 0 for w in self.weights):
            raise UsageError("weights must be nonnegative")

    @property
    def nvars(self):
        return len(self.weights)


@dataclass
class SimplexSolution:
    value: Fraction
    x: list
    dual: list
    iterations: int
    dual_feasible: bool
    strong_duality: bool


@dataclass
class SubgradientResult:
    value: float
    x: np.ndarray
    iterations: int


def _to_mpq(f: Fraction):
    return mpq(f.numerator, f.denominator)


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def solve_simplex(prob: L1Problem) -> SimplexSolution:
    """Exact optimum by two-phase simplex with Bland's rule.

    Each variable is split into positive and negative parts, giving a
    standard-form LP with nonnegative costs.  All arithmetic is exact, so the
    returned dual certificate is checked with equality, not tolerance.
    """
    n = prob.nvars
    m = len(prob.constraints)
    ncols = 2 * n + m  # split variables then one artificial per row
    zero, one = mpq(0), mpq(1)

    cost = [_to_mpq(w) for w in prob.weights]
    cost = cost + cost + [zero] * m
    rows = []
    flips = []
    for i in range(m):
        a = [_to_mpq(v) for v in prob.constraints[i]]
        b = _to_mpq(prob.rhs[i])
        row = a + [-v for v in a] + [zero] * m + [b]
        if b < 0:
            row = [-v for v in row]
            flips.append(-1)
        else:
            flips.append(1)
        row[2 * n + i] = one
        rows.append(row)
    basis = [2 * n + i for i in range(m)]

    # Phase-1 reduced costs: c1 = e_artificials; subtract each row once.
    r1 = [zero] * (ncols + 1)
    for j in range(2 * n):
        r1[j] = -sum(rows[i][j] for i in range(m))
    r1[ncols] = -sum(rows[i][ncols] for i in range(m))
    r2 = list(cost) + [zero]

    def pivot(pi, pj):
        prow = rows[pi]
        inv = one / prow[pj]
        rows[pi] = [v * inv for v in prow]
        prow = rows[pi]
        for i in range(m):
            if i != pi and rows[i][pj] != 0:
                f = rows[i][pj]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        for rc in (r1, r2):
            if rc[pj] != 0:
                f = rc[pj]
                for j in range(ncols + 1):
                    rc[j] -= f * prow[j]
        basis[pi] = pj

    def run_phase(rc, allowed_cols, iteration_start):
        iters = iteration_start
        while True:
            enter = -1
            for j in range(allowed_cols):
                if rc[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return iters
            leave, best = -1, None
            for i in range(m):
                a = rows[i][enter]
                if a > 0:
                    ratio = rows[i][ncols] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        leave, best = i, ratio
            if leave < 0:
                raise UnboundedProblem("objective is unbounded below")
            pivot(leave, enter)
            iters += 1

    iters = run_phase(r1, 2 * n, 0)
    phase1_obj = -r1[ncols]
    if phase1_obj != 0:
        raise InfeasibleProblem("equality constraints are inconsistent")
    # Pivot any basic artificial out on a non-artificial column if possible;
    # rows with no such column are redundant and stay parked at level zero.
    for i in range(m):
        if basis[i] >= 2 * n:
            for j in range(2 * n):
                if rows[i][j] != 0:
                    pivot(i, j)
                    iters += 1
                    break

    iters = run_phase(r2, 2 * n, iters)

    xsplit = [zero] * ncols
    for i in range(m):
        xsplit[basis[i]] = rows[i][ncols]
    x = [_to_fraction(xsplit[j] - xsplit[n + j]) for j in range(n)]
    value = _to_fraction(sum(cost[basis[i]] * rows[i][ncols] for i in range(m)))

    dual = []
    for i in range(m):
        yi = -r2[2 * n + i]
        dual.append(_to_fraction(yi) * flips[i])

    dual_feasible = True
    for j in range(n):
        yaj = sum(dual[i] * prob.constraints[i][j] for i in range(m))
        if abs(yaj) > prob.weights[j]:
            dual_feasible = False
            break
    ydotb = sum(dual[i] * prob.rhs[i] for i in range(m))
    return SimplexSolution(
        value=value,
        x=x,
        dual=dual,
        iterations=iters,
        dual_feasible=dual_feasible,
        strong_duality=(ydotb == value),
    )


def solve_subgradient(prob: L1Problem, iters: int = 100_000,
                      schedule: str = "geometric", eta0: float = None) -> SubgradientResult:
    """Projected subgradient descent onto the affine subspace.

    The default schedule runs stages of fixed step size, shrinking the step
    geometrically between stages; on these sharp polyhedral objectives that
    converges to well below 1e-9 within the iteration budget.  ``harmonic``
    selects the classical 1/t step for comparison.
    """
    n = prob.nvars
    w = np.array([float(v) for v in prob.weights])
    if not prob.constraints:
        x = np.zeros(n)
        return SubgradientResult(0.0, x, 0)
    A = np.array([[float(v) for v in row] for row in prob.constraints])
    b = np.array([float(v) for v in prob.rhs])
    pinv = np.linalg.pinv(A)
    x = pinv @ b
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    if float(np.max(np.abs(A @ x - b))) > 1e-7 * scale:
        raise InfeasibleProblem("affine projection cannot satisfy the constraints")
    P = np.eye(n) - pinv @ A

    f0 = float(np.dot(w, np.abs(x)))
    best_f, best_x = f0, x.copy()
    used = 0

    if schedule == "harmonic":
        c = eta0 if eta0 is not None else max(1.0, f0)
        for t in range(1, iters + 1):
            x -= (c / t) * (P @ (w * np.sign(x)))
            f = float(np.dot(w, np.abs(x)))
            if f < best_f:
                best_f, best_x = f, x.copy()
        return SubgradientResult(best_f, best_x, iters)
    if schedule != "geometric":
        raise UsageError(f"unknown step schedule {schedule!r}")

    eta = eta0 if eta0 is not None else 0.5 * max(1.0, f0)
    eta_min = 1e-16 * max(1.0, f0)
    inner = max(60, 3 * n)
    while eta > eta_min and used < iters:
        k = min(inner, iters - used)
        f, bx, x = _kernels.stage_loop(P, w, x, eta, k)
        used += k
        if f < best_f:
            best_f, best_x = f, bx
        # undo float drift off the affine subspace before the next stage
        x = x - pinv @ (A @ x - b)
        eta *= 0.7
    return SubgradientResult(best_f, best_x, used)
