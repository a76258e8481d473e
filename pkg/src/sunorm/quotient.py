"""Quotient norms modulo subfield S-unit subspaces.

Everything here works on the sorted valuation matrix of a vector over the
fixture field L relative to a base subfield K: for each place v of K in S,
the [L:K] absolute values extending v are listed with multiplicity (a place w
of L above v is repeated [L_w : K_v] times), scaled by the local degree d_v,
and sorted ascending.  Row sums s_i are then increasing, and

* the L1 quotient norm is  (1/[L:Q]) sum_i |s_i|,
* an explicit minimizer x (one coordinate per base place) is pinned between
  the k-th and (k+1)-st columns where s_k <= 0 <= s_{k+1},
* among all minimizers there is one of minimal height, computed by a greedy
  clamp-and-fill whose value is  max(sum_v 2 a_{v,k}^+, sum_v 2 a_{v,k+1}^-).
"""

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from .certreal import CReal, ball_sum, mpf_to_fraction, working_precision
from .errors import SupportError, UsageError
from .field_model import LogVector, SubfieldDescriptor
from .heights import h_p
from . import lp_core


@dataclass
class _Row:
    rep: int             # least place id of the base fiber
    fiber: tuple
    d_v: int             # local degree of the base place
    entries: list        # [L:K] certified values, ascending


@dataclass
class AMatrix:
    base: SubfieldDescriptor
    rows: list
    ext_count: int
    fixture: object = field(repr=False)
    provenance: LogVector = field(repr=False, default=None)

    @property
    def degree_l(self) -> int:
        return self.fixture.degree

    def row_sums(self):
        """s_i = sum over base places of the i-th smallest extension value."""
        return [
            ball_sum([row.entries[i] for row in self.rows])
            for i in range(self.ext_count)
        ]


def a_matrix(vec: LogVector, base, s_places=None) -> AMatrix:
    """Sorted valuation matrix of ``vec`` relative to the base subfield.

    ``s_places`` defaults to the smallest union of base fibers containing the
    archimedean places and the support of ``vec``; passing a larger
    Galois-stable place set only adds all-zero rows.
    """
    fx = vec.fixture
    base = fx.subfield_by(base)
    with working_precision(fx.precision):
        if s_places is None:
            wanted = set(fx.arch_ids) | set(fx.core_s) | vec.support()
            fibers = [f for f in base.fibers if any(w in wanted for w in f)]
        else:
            fibers = base.fibers_within(set(s_places))
        covered = set()
        for f in fibers:
            covered |= set(f)
        stray = vec.support() - covered
        if stray:
            raise SupportError(f"vector has support outside S at places {sorted(stray)}")

        rows = []
        for f in fibers:
            d_v = int(base.fiber_degree(f))
            entries = []
            for w in f:
                mult = fx.place(w).local_degree // d_v
                val = vec.log_coord(w).scale(d_v)
                entries.extend([val] * mult)
            if len(entries) != base.order:
                raise UsageError("fiber multiplicities do not add up to [L:K]")
            entries.sort(key=CReal.sort_key)
            rows.append(_Row(rep=f[0], fiber=f, d_v=d_v, entries=entries))
        return AMatrix(base=base, rows=rows, ext_count=base.order, fixture=fx, provenance=vec)


@dataclass
class QuotientSolution:
    """Solution bundle for one quotient-norm instance."""

    qnorm: CReal                 # h1-normalized quotient value
    qnorm_raw: CReal             # sum_i |s_i|
    k: int
    x: dict                      # base place rep -> certified coordinate
    x_exact: bool
    eta: LogVector = None        # minimizer as a vector over the fixture field
    eta_height: CReal = None     # h1(eta)
    eta_height_raw: CReal = None  # sum_v |x_v|
    height_formula: CReal = None  # max(sum 2a_{v,k}^+, sum 2a_{v,k+1}^-)
    amatrix: AMatrix = None


def quotient_norm(A: AMatrix) -> CReal:
    """Distance in h1 from the vector to the closure of V_{K,S}."""
    with working_precision(A.fixture.precision):
        total = ball_sum([abs(s) for s in A.row_sums()])
        return total.scale(Fraction(1, A.degree_l))


def _pivot_index(sums):
    neg = 0
    for s in sums:
        if s.mid < 0:
            neg += 1
        else:
            break
    return neg


def _eta_vector(A: AMatrix, x: dict) -> LogVector:
    fin_approx = {}
    arch = {}
    for row in A.rows:
        coord = x[row.rep].scale(Fraction(1, row.d_v))
        for w in row.fiber:
            if A.fixture.place(w).is_arch:
                arch[w] = coord
            else:
                fin_approx[w] = coord
    return LogVector(A.fixture, None, arch, fin_approx)


def minimizer_x(A: AMatrix) -> QuotientSolution:
    """The explicit interpolated minimizer pinned at the pivot index."""
    with working_precision(A.fixture.precision):
        sums = A.row_sums()
        m = A.ext_count
        k = _pivot_index(sums)
        nrows = len(A.rows)
        x = {}
        if k == 0:
            shift = sums[0].scale(Fraction(1, nrows))
            for row in A.rows:
                x[row.rep] = row.entries[0] - shift
        elif k == m:
            shift = sums[m - 1].scale(Fraction(1, nrows))
            for row in A.rows:
                x[row.rep] = row.entries[m - 1] - shift
        else:
            sk, sk1 = sums[k - 1], sums[k]
            denom = sk1 - sk
            degenerate = denom.sign() is None or denom.sign() == 0
            t = None if degenerate else (-sk) / denom
            for row in A.rows:
                lo, hi = row.entries[k - 1], row.entries[k]
                if degenerate:
                    x[row.rep] = lo
                else:
                    x[row.rep] = lo + (hi - lo) * t
        raw = ball_sum([abs(s) for s in sums])
        return QuotientSolution(
            qnorm=raw.scale(Fraction(1, A.degree_l)),
            qnorm_raw=raw,
            k=k,
            x=x,
            x_exact=all(v.rad == 0 for v in x.values()),
            eta=_eta_vector(A, x),
            amatrix=A,
        )


def eta_min_height(A: AMatrix) -> QuotientSolution:
    """The doubly minimal eta: quotient-optimal and of least height among such.

    The optimal set is the box [a_{v,k}, a_{v,k+1}] (one side unbounded when
    k is extreme) intersected with the zero-sum hyperplane; the least-L1 point
    of that slice is found by clamping zero into every box and greedily
    shifting the imbalance at unit cost, smallest base place first.
    """
    with working_precision(A.fixture.precision):
        sums = A.row_sums()
        m = A.ext_count
        k = _pivot_index(sums)
        zero = CReal.zero()

        lows, highs = {}, {}
        for row in A.rows:
            lows[row.rep] = row.entries[k - 1] if k >= 1 else None
            highs[row.rep] = row.entries[k] if k <= m - 1 else None

        x = {}
        for row in A.rows:
            lo, hi = lows[row.rep], highs[row.rep]
            if lo is not None and lo.mid > 0:
                x[row.rep] = lo
            elif hi is not None and hi.mid < 0:
                x[row.rep] = hi
            else:
                x[row.rep] = zero

        total = ball_sum(list(x.values()))
        if total.mid > 0:
            # shift mass down toward the lower bounds, unit cost per unit
            remaining = total
            for row in A.rows:
                if remaining.mid <= 0:
                    break
                lo = lows[row.rep]
                cap = None if lo is None else x[row.rep] - lo
                if cap is not None and cap.mid <= 0:
                    continue
                amt = remaining if (cap is None or cap.mid >= remaining.mid) else cap
                x[row.rep] = x[row.rep] - amt
                remaining = remaining - amt
        elif total.mid < 0:
            remaining = -total
            for row in A.rows:
                if remaining.mid <= 0:
                    break
                hi = highs[row.rep]
                cap = None if hi is None else hi - x[row.rep]
                if cap is not None and cap.mid <= 0:
                    continue
                amt = remaining if (cap is None or cap.mid >= remaining.mid) else cap
                x[row.rep] = x[row.rep] + amt
                remaining = remaining - amt

        raw_height = ball_sum([abs(v) for v in x.values()])
        pos_terms, neg_terms = [], []
        for row in A.rows:
            if k >= 1:
                e = row.entries[k - 1]
                pos_terms.append(abs(e) if e.mid > 0 else zero)
            if k <= m - 1:
                e = row.entries[k]
                neg_terms.append(abs(e) if e.mid < 0 else zero)
        formula_pos = ball_sum(pos_terms).scale(2) if pos_terms else zero
        formula_neg = ball_sum(neg_terms).scale(2) if neg_terms else zero
        formula = formula_pos if formula_pos.mid >= formula_neg.mid else formula_neg

        raw = ball_sum([abs(s) for s in sums])
        base_degree = A.fixture.degree // A.base.order
        return QuotientSolution(
            qnorm=raw.scale(Fraction(1, A.degree_l)),
            qnorm_raw=raw,
            k=k,
            x=x,
            x_exact=all(v.rad == 0 for v in x.values()),
            eta=_eta_vector(A, x),
            eta_height=raw_height.scale(Fraction(1, base_degree)),
            eta_height_raw=raw_height,
            height_formula=formula,
            amatrix=A,
        )


def residual_l1(A: AMatrix, x: dict) -> CReal:
    """Direct evaluation of ||a - x||_1 for a base-coordinate vector x."""
    with working_precision(A.fixture.precision):
        terms = []
        for row in A.rows:
            xv = x[row.rep]
            for e in row.entries:
                terms.append(abs(e - xv))
        return ball_sum(terms)


def quotient_units_special(vec: LogVector, v: int):
    """Distance to the unit span for a vector supported on {arch} + one finite place.

    Returns ``(value, beta)`` where the minimizer ``beta`` is attained in the
    unit span itself: x_w = a_w - s/n at the archimedean places, zero at v.
    """
    fx = vec.fixture
    place = fx.place(v)
    if place.is_arch:
        raise UsageError(f"place {v} is not finite")
    extra = vec.finite_support() - {v}
    if extra:
        raise SupportError(f"vector is supported at finite places {sorted(extra)} besides {v}")
    with working_precision(fx.precision):
        arch = {w: vec.log_coord(w).scale(fx.place(w).local_degree) for w in fx.arch_ids}
        s = ball_sum(list(arch.values()))
        av = vec.log_coord(v).scale(place.local_degree)
        value = (abs(av) + abs(s)).scale(Fraction(1, fx.degree))
        n_arch = len(fx.arch_ids)
        beta_arch = {}
        for w in fx.arch_ids:
            xw = arch[w] - s.scale(Fraction(1, n_arch))
            beta_arch[w] = xw.scale(Fraction(1, fx.place(w).local_degree))
        beta = LogVector(fx, None, beta_arch, None)
        return value, beta


# ---------------------------------------------------------------------------
# Independent LP oracles for the same minimization


def quotient_l1_problem(A: AMatrix) -> lp_core.L1Problem:
    """The quotient instance as a generic weighted-L1 problem.

    Variables are the base coordinates x_v (free, weight 0) followed by one
    residual r_{v,i} per matrix entry (weight 1); constraints say
    r_{v,i} + x_v = a_{v,i} and sum_v x_v = 0.  Certified entries are
    replaced by their exact midpoints.
    """
    nrows = len(A.rows)
    m = A.ext_count
    nvars = nrows + nrows * m
    weights = [Fraction(0)] * nrows + [Fraction(1)] * (nrows * m)
    cons, rhs = [], []
    for ri, row in enumerate(A.rows):
        for i, e in enumerate(row.entries):
            c = [Fraction(0)] * nvars
            c[ri] = Fraction(1)
            c[nrows + ri * m + i] = Fraction(1)
            cons.append(c)
            rhs.append(mpf_to_fraction(e.mid))
    c = [Fraction(0)] * nvars
    for ri in range(nrows):
        c[ri] = Fraction(1)
    cons.append(c)
    rhs.append(Fraction(0))
    labels = [("x", row.rep) for row in A.rows] + [
        ("r", row.rep, i) for row in A.rows for i in range(m)
    ]
    return lp_core.L1Problem(weights=weights, constraints=cons, rhs=rhs, labels=labels)


def quotient_norm_via_simplex(A: AMatrix) -> Fraction:
    """Raw quotient value (sum_i |s_i|) via the exact simplex oracle."""
    return lp_core.solve_simplex(quotient_l1_problem(A)).value


def quotient_norm_via_subgradient(A: AMatrix, **kw) -> float:
    """Raw quotient value via the projected-subgradient oracle."""
    return lp_core.solve_subgradient(quotient_l1_problem(A), **kw).value
