"""The extremal Mahler norm m~1 by subfield decomposition.

For a vector over a Galois fixture field K, the norm is the optimum of

    minimize   sum_F [F:Q] * h1(y^F)
    subject to sum_F y^F = a,   y^F in W_F for every subfield F of K,

where W_F is the subspace of vectors constant on F's fibers with weighted sum
zero, and a is the coordinate vector over the Galois-stable place set S built
from the support.  Parts that happen to lie in a smaller subfield's subspace
are routed there automatically by the weights, so the optimum equals the
infimum over all factorizations weighted by orbit degrees.

The LP is solved exactly on rationalized data; finite-place coordinates are
kept in valuation units (multiples of log p), so those constraints are exact
and only the archimedean midpoints and the log p symbols carry perturbation,
which is folded into the reported error bound.

A returned decomposition is post-processed so that each part's height equals
its quotient norm modulo every proper subfield: whenever the check fails, the
minimal-height quotient minimizer is transferred from the part to the
subfield's part, which never increases the objective.
"""

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .certreal import CReal, ball_sum, mpf_to_fraction, working_precision
from .errors import InfeasibleProblem, LPError, SupportError, UsageError
from .field_model import FieldFixture, LogVector, log_prime
from .heights import delta, h_p
from .quotient import a_matrix, eta_min_height, quotient_norm
from . import lp_core


def build_S(fix: FieldFixture, vec: LogVector) -> frozenset:
    """Smallest Galois-stable place set holding the archimedean places and
    the support: a union of full fibers over rational primes."""
    ids = set(fix.arch_ids)
    for w in vec.finite_support():
        ids |= set(fix.places_over[fix.place(w).over])
    return frozenset(ids)


@dataclass
class DecompositionPart:
    subfield: object
    vector: LogVector
    height: CReal
    weight: int
    certificates: dict            # proper-subfield index -> bool
    certified: bool


@dataclass
class DecompositionResult:
    total: CReal
    parts: list
    s_used: frozenset
    lp_value: Fraction
    lp_error: float
    certified: bool
    sandwich_low: CReal           # h1(alpha)
    sandwich_high: CReal          # delta(alpha) * h1(alpha)
    repair_rounds: int
    attained_rational: bool

    def part_for(self, subfield_name: str):
        for p in self.parts:
            if p.subfield.name == subfield_name:
                return p
        return None


def decomposition_problem(fix: FieldFixture, vec: LogVector, S):
    """Assemble the weighted-L1 LP; returns (problem, var metadata, error terms)."""
    S = sorted(S)
    sset = set(S)
    if vec.finite_support() - sset:
        raise SupportError("vector support is not contained in S")
    n = fix.degree

    def unit_of(place):
        if place.is_arch:
            return Fraction(1), CReal(1, 0)
        ball = log_prime(place.over)
        return mpf_to_fraction(ball.mid), ball

    # rationalized plain-log coordinates of vec, in per-place units
    a_unit = {}
    pert = {}
    for w in S:
        place = fix.place(w)
        if place.is_arch:
            ball = vec.log_coord(w)
            a_unit[w] = mpf_to_fraction(ball.mid)
            pert[w] = ball.rad
        else:
            if w in vec.fin_approx:
                raise UsageError("decomposition needs exact finite valuations")
            m = vec.fin.get(w, Fraction(0))
            a_unit[w] = Fraction(-m, place.ram_index)
            pert[w] = log_prime(place.over).rad * abs(mp.mpf(float(a_unit[w])))

    variables = []   # (subfield, fiber, unit_fraction, unit_ball, weight_fraction)
    for sf in fix.subfields:
        for fiber in sf.fibers_within(sset):
            place = fix.place(fiber[0])
            u_frac, u_ball = unit_of(place)
            d_total = sum(fix.place(w).local_degree for w in fiber)
            weight = Fraction(sf.degree * d_total, n) * u_frac
            variables.append((sf, fiber, u_frac, u_ball, weight))

    var_index = {}
    for i, (sf, fiber, _, _, _) in enumerate(variables):
        var_index[(sf.index, fiber)] = i

    nvars = len(variables)
    cons, rhs = [], []
    # one zero-sum constraint per subfield
    for sf in fix.subfields:
        row = [Fraction(0)] * nvars
        for fiber in sf.fibers_within(sset):
            i = var_index[(sf.index, fiber)]
            d_total = sum(fix.place(w).local_degree for w in fiber)
            row[i] = d_total * variables[i][2]
        cons.append(row)
        rhs.append(Fraction(0))
    # coupling constraints, one arch place dropped (implied by the others)
    w0 = max(fix.arch_ids)
    for w in S:
        if w == w0:
            continue
        row = [Fraction(0)] * nvars
        for sf in fix.subfields:
            fiber = sf.fibers[sf.fiber_of[w]]
            row[var_index[(sf.index, fiber)]] += Fraction(1)
        cons.append(row)
        rhs.append(a_unit[w])

    weights = [v[4] for v in variables]
    labels = [(sf.index, fiber) for sf, fiber, _, _, _ in variables]
    prob = lp_core.L1Problem(weights=weights, constraints=cons, rhs=rhs, labels=labels)

    # first-order error budget: data perturbation plus the residual of the
    # implied (dropped) coupling row under the rationalized product formula
    rho = Fraction(0)
    for w in S:
        place = fix.place(w)
        u_frac, _ = unit_of(place)
        rho += place.local_degree * u_frac * a_unit[w]
    err_static = sum(
        float(fix.place(w).local_degree) * float(pert[w]) for w in S
    ) + abs(float(rho))
    return prob, variables, err_static


def _parts_from_solution(fix, variables, x):
    grouped = {}
    for (sf, fiber, _, _, _), z in zip(variables, x):
        if z == 0:
            continue
        grouped.setdefault(sf.index, []).append((sf, fiber, z))
    parts = {}
    for idx, items in grouped.items():
        sf = items[0][0]
        fin, arch = {}, {}
        for _, fiber, z in items:
            for w in fiber:
                place = fix.place(w)
                if place.is_arch:
                    arch[w] = CReal.from_fraction(z)
                else:
                    fin[w] = -z * place.ram_index
        vec = LogVector(fix, fin, arch)
        if not vec.is_zero():
            parts[idx] = vec
    return parts


def _repair_sweep(fix, parts, S, tol, max_rounds=32):
    """Make every part's height equal its quotient norm modulo every proper
    subfield, by transferring minimal-height quotient minimizers downward."""
    rounds = 0
    proper = {
        sf.index: [e for e in fix.subfields if e.elements > sf.elements]
        for sf in fix.subfields
    }
    for rounds in range(1, max_rounds + 1):
        changed = False
        for sf in sorted(fix.subfields, key=lambda s: -s.degree):
            vec = parts.get(sf.index)
            if vec is None or vec.is_zero():
                continue
            for sub in proper[sf.index]:
                A = a_matrix(vec, sub, S)
                qn = quotient_norm(A)
                h1 = h_p(vec, 1).value
                gap = h1 - qn
                if gap.mid > gap.rad + mp.mpf(tol):
                    sol = eta_min_height(A)
                    eta = sol.eta
                    vec = vec / eta
                    parts[sf.index] = vec
                    prev = parts.get(sub.index)
                    parts[sub.index] = eta if prev is None else prev * eta
                    changed = True
        if not changed:
            return rounds - 1, parts
    return max_rounds, parts


def extremal_m1(fix: FieldFixture, vec: LogVector, S=None, tol: float = 1e-9,
                repair: bool = True) -> DecompositionResult:
    """Evaluate m~1 and return the certified subfield decomposition."""
    with working_precision(fix.precision):
        if S is None:
            S = build_S(fix, vec)
        else:
            S = frozenset(S)
            if vec.finite_support() - S:
                S = S | build_S(fix, vec)
                if vec.finite_support() - S:
                    raise SupportError("support cannot be covered even after expanding S")

        h1 = h_p(vec, 1).value
        d = delta(vec)
        high = h1.scale(d)

        if vec.is_zero():
            zero = CReal.zero()
            return DecompositionResult(
                total=zero, parts=[], s_used=S, lp_value=Fraction(0), lp_error=0.0,
                certified=True, sandwich_low=zero, sandwich_high=zero,
                repair_rounds=0, attained_rational=True,
            )

        prob, variables, err_static = decomposition_problem(fix, vec, S)
        try:
            sol = lp_core.solve_simplex(prob)
        except InfeasibleProblem as exc:
            raise LPError(f"internal error: decomposition LP infeasible ({exc})") from exc

        err = err_static
        for (sf, fiber, _, u_ball, _), z in zip(variables, sol.x):
            if z != 0 and u_ball.rad != 0:
                d_total = sum(fix.place(w).local_degree for w in fiber)
                err += 2.0 * sf.degree * d_total / fix.degree * float(u_ball.rad) * abs(float(z))

        parts = _parts_from_solution(fix, variables, sol.x)
        rounds = 0
        if repair:
            rounds, parts = _repair_sweep(fix, parts, S, tol)

        part_list = []
        all_ok = True
        rational = True
        height_terms = []
        for sf in fix.subfields:
            pvec = parts.get(sf.index)
            if pvec is None or pvec.is_zero():
                continue
            height = h_p(pvec, 1).value
            if height.mid <= 4 * height.rad + 8 * mp.mpf(err):
                # rationalization dust, indistinguishable from the zero part
                continue
            height_terms.append(height.scale(sf.degree))
            certs = {}
            for sub in fix.subfields:
                if not (sub.elements > sf.elements):
                    continue
                qn = quotient_norm(a_matrix(pvec, sub, S))
                gap = height - qn
                certs[sub.index] = bool(abs(gap.mid) <= gap.rad + mp.mpf(tol))
            ok = all(certs.values())
            all_ok = all_ok and ok
            rational = rational and pvec.is_exact_fin and all(
                x.rad == 0 for x in pvec.arch.values()
            )
            part_list.append(DecompositionPart(
                subfield=sf, vector=pvec, height=height,
                weight=sf.degree, certificates=certs, certified=ok,
            ))

        total = ball_sum(height_terms) if height_terms else CReal.zero()
        lp_ball = CReal(CReal.from_fraction(sol.value).mid, mp.mpf(err))
        agree = total - lp_ball
        if abs(agree.mid) > agree.rad + mp.mpf(tol):
            raise LPError("internal error: recomputed total disagrees with the LP optimum")
        return DecompositionResult(
            total=total,
            parts=part_list,
            s_used=S,
            lp_value=sol.value,
            lp_error=err,
            certified=all_ok,
            sandwich_low=h1,
            sandwich_high=high,
            repair_rounds=rounds,
            attained_rational=rational,
        )


SURD = "surd"
PISOT_SALEM = "pisot_salem"


def closed_form_check(vec: LogVector, kind: str, house=None) -> CReal:
    """Closed-form values used as acceptance oracles against extremal_m1.

    Surds (orbit degree 1) have m~1 = h1; a Pisot/Salem class with largest
    conjugate modulus ``house`` has m~1 = 2 log house.  The surd claim is
    verified; the Pisot/Salem claim is taken on trust from fixture metadata.
    """
    kind = kind.lower()
    with working_precision(vec.fixture.precision):
        if kind == SURD:
            d = delta(vec)
            if d != 1:
                raise UsageError(f"not a surd: orbit degree is {d}")
            return h_p(vec, 1).value
        if kind == PISOT_SALEM:
            if house is None:
                raise UsageError("pisot_salem needs the house (largest conjugate modulus)")
            if isinstance(house, str):
                house = CReal.from_decimal(house)
            elif not isinstance(house, CReal):
                house = CReal(house, 0)
            return house.log_pos().scale(2)
    raise UsageError(f"unknown closed form kind {kind!r}")


def extremal_p_bounds(vec: LogVector, p):
    """For p != 1 only the sandwich [h_p, delta * h_p] is exposed."""
    h = h_p(vec, p).value
    return h, h.scale(delta(vec))
