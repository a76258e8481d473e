"""Projections onto subfield subspaces and onto the S-unit subspace.

``proj_field`` averages a vector over the orbit of the subgroup fixing the
subfield; in coordinates that is the mean over each fiber, which lands the
result in the subspace of fiber-constant vectors and never increases any
L^p height.

``proj_sunits`` strips the valuation of a vector at every finite place
outside S by dividing out powers of the generator system {alpha_v}: one
generator per place, built from the fixture's principal-ideal data, adjusted
to be nonnegative on S, symmetrized over the place stabilizer, and spread to
conjugate places by the Galois action.
"""

from dataclasses import dataclass
from fractions import Fraction

from .certreal import ball_sum, working_precision
from .errors import InvariantViolation, PrecisionError, SupportError, UsageError
from .field_model import FieldFixture, LogVector, act, _sym_add, _sym_scale
from .heights import h_p, delta
from .quotient import quotient_units_special


def proj_field(subfield, vec: LogVector) -> LogVector:
    """P_F: average the vector over the fibers of the subfield descriptor."""
    fx = vec.fixture
    sf = fx.subfield_by(subfield)
    with working_precision(fx.precision):
        fin = {}
        arch = {}
        fin_approx = {}
        sym = {} if vec.arch_sym is not None else None
        support = vec.support()
        for fiber in sf.fibers:
            if not any(w in support for w in fiber):
                continue
            k = Fraction(1, len(fiber))
            if fx.place(fiber[0]).is_arch:
                balls = [vec.log_coord(w) for w in fiber]
                first = balls[0]
                if all(b.mid == first.mid and b.rad == first.rad for b in balls):
                    mean = first  # averaging equal values is the identity
                else:
                    mean = ball_sum(balls).scale(k)
                fiber_sym = None
                if sym is not None:
                    acc = ()
                    for w in fiber:
                        acc = _sym_add(acc, vec.arch_sym.get(w, ()))
                    fiber_sym = _sym_scale(acc, k)
                for w in fiber:
                    arch[w] = mean
                    if sym is not None:
                        sym[w] = fiber_sym
            elif all(w not in vec.fin_approx for w in fiber):
                mean = sum((vec.fin.get(w, Fraction(0)) for w in fiber), Fraction(0)) * k
                for w in fiber:
                    fin[w] = mean
            else:
                mean = ball_sum([vec.log_coord(w) for w in fiber]).scale(k)
                for w in fiber:
                    fin_approx[w] = mean
        return LogVector(fx, fin, arch, fin_approx, None, sym)


@dataclass
class AlphaVSystem:
    """Galois-equivariant generator system for the places outside S."""

    fixture: FieldFixture
    s_places: frozenset
    vectors: dict          # place id -> LogVector alpha_v
    representatives: dict  # rational prime -> chosen place id
    spread: dict           # place id -> Galois element index used to reach it


def alpha_v(fix: FieldFixture, v: int, s_places) -> LogVector:
    """The generator alpha_v for one finite place v outside S.

    Built from the fixture's principal-ideal generator of P_v^h scaled by
    1/h, multiplied by a unit-span minimizer when some archimedean log is not
    certifiably nonnegative, then symmetrized by P_H for H the stabilizer of
    v.  The result has ||.||_v < 1, trivial valuation at the other finite
    places outside S, and nonnegative logs on S.
    """
    s_places = frozenset(s_places)
    place = fix.place(v)
    if place.is_arch:
        raise UsageError(f"place {v} is archimedean")
    if v in s_places:
        raise UsageError(f"place {v} lies inside S")
    if v not in fix.prime_generators:
        raise SupportError(f"fixture carries no prime generator for place {v}")
    h, gen = fix.prime_generators[v]
    with working_precision(fix.precision):
        beta = gen.power(Fraction(1, h)) if h != 1 else gen

        def arch_ok(w):
            s = beta.log_coord(w).sign()
            return s == 0 or s == 1

        if not all(arch_ok(w) for w in fix.arch_ids):
            _, unit_min = quotient_units_special(beta, v)
            beta = beta / unit_min

        out = proj_field(fix.stabilizer_subfield(v), beta)
        _check_alpha_v(fix, out, v, s_places)
        return out


def _check_alpha_v(fix, vec, v, s_places):
    extra = sorted((set(vec.fin) | set(vec.fin_approx)) - {v})
    if extra:
        raise InvariantViolation("alpha_v support", f"finite support {extra} beyond {v}")
    if vec.log_coord(v).sign() != -1:
        raise InvariantViolation("alpha_v", f"||alpha_v||_{v} is not < 1")
    for w in sorted(s_places):
        if fix.place(w).is_arch:
            s = vec.log_coord(w).sign()
            if s == -1:
                raise InvariantViolation("alpha_v", f"coordinate at S-place {w} is negative")
            if s is None:
                raise PrecisionError(
                    f"cannot certify the sign of alpha_v at place {w} at this precision"
                )
    val, _ = quotient_units_special(vec, v)
    h1 = h_p(vec, 1).value
    diff = h1 - val
    if abs(diff.mid) > diff.rad + 1e-12:
        raise InvariantViolation(
            "alpha_v minimality", "h1(alpha_v) differs from its quotient norm mod V_{K,S}"
        )


def build_alpha_v_system(fix: FieldFixture, s_places) -> AlphaVSystem:
    """One alpha_v per finite place outside S, spread Galois-equivariantly.

    For each rational prime with places outside S the least place id is the
    representative; conjugates get act(sigma, alpha_v) for the least group
    element with sigma(v) = w.
    """
    s_places = frozenset(s_places)
    vectors, reps, spread = {}, {}, {}
    outside = [p for p in fix.places if not p.is_arch and p.id not in s_places]
    with working_precision(fix.precision):
        by_prime = {}
        for p in outside:
            by_prime.setdefault(p.over, []).append(p.id)
        for prime, ids in sorted(by_prime.items()):
            rep = min(ids)
            reps[prime] = rep
            base_vec = alpha_v(fix, rep, s_places)
            vectors[rep] = base_vec
            spread[rep] = fix.action.identity_index
            for w in sorted(ids):
                if w == rep:
                    continue
                sigma = next(
                    i for i, perm in enumerate(fix.action.element_table) if perm[rep] == w
                )
                moved = act(sigma, base_vec)
                _check_alpha_v(fix, moved, w, s_places)
                vectors[w] = moved
                spread[w] = sigma
        system = AlphaVSystem(fix, s_places, vectors, reps, spread)
        _check_system_degrees(fix, system)
        return system


def _check_system_degrees(fix, system):
    for w, vec in system.vectors.items():
        expected = len(fix.places_over[fix.place(w).over])
        got = delta(vec)
        if got != expected:
            raise InvariantViolation(
                "alpha_v orbit",
                f"delta(alpha_{w}) = {got}, expected the number of places over the prime ({expected})",
            )


def n_v(vec: LogVector, alpha: LogVector, v: int) -> Fraction:
    """The exact exponent with ||vec * alpha^-n||_v = 1."""
    if v not in alpha.fin:
        raise UsageError(f"alpha_v has no exact valuation at place {v}")
    return vec.fin.get(v, Fraction(0)) / alpha.fin[v]


def proj_sunits(fix: FieldFixture, s_places, system: AlphaVSystem, vec: LogVector) -> LogVector:
    """P_S: divide out alpha_v^{n_v} for every finite place outside S.

    The exponents are exact rationals read off the finite parts, so the
    result has exactly trivial valuation outside S.
    """
    s_places = frozenset(s_places)
    if not vec.is_exact_fin:
        raise UsageError("P_S needs exact finite valuations")
    with working_precision(fix.precision):
        out = vec
        for v in sorted(vec.finite_support() - s_places):
            alpha = system.vectors.get(v)
            if alpha is None:
                raise SupportError(f"alpha_v system does not cover place {v}")
            exp = n_v(vec, alpha, v)
            if exp != 0:
                out = out.combine(alpha.power(-exp))
        stray = out.finite_support() - s_places
        if stray:
            raise InvariantViolation("s-unit projection", f"support {sorted(stray)} survived P_S")
        return out
