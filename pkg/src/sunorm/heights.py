"""Weil heights, Galois-orbit degree, and the trivial extremal-norm bound.

Heights use the per-Q normalization: each place contributes with weight
``d_w / [K:Q]`` where ``d_w`` is the local degree, so the value does not
depend on which field the vector is presented over.  The sup height ``p=inf``
is the unweighted maximum of ``|log||a||_w|``.
"""

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf

from .certreal import CReal, ball_sum, ball_max, working_precision
from .errors import AmbiguousComparison, UsageError
from .field_model import LogVector, act

INFINITY = float("inf")


@dataclass
class HeightValue:
    """A certified height together with the exponent it was computed at."""

    value: CReal
    p: object
    normalization: str = "per-Q"

    def __float__(self):
        return float(self.value)


def _as_exponent(p):
    if p == "inf" or p == INFINITY:
        return INFINITY
    p = Fraction(p) if not isinstance(p, float) else p
    if p < 1:
        raise UsageError(f"height exponent p = {p} is below 1")
    return p


def h_p(vec: LogVector, p=1) -> HeightValue:
    """The L^p Weil height of the class represented by ``vec``."""
    p = _as_exponent(p)
    fx = vec.fixture
    n = fx.degree
    with working_precision(fx.precision):
        support = sorted(vec.support())
        mags = [(w, abs(vec.log_coord(w))) for w in support]
        if p is INFINITY:
            return HeightValue(ball_max([m for _, m in mags]), "inf")
        terms = []
        for w, m in mags:
            weight = Fraction(fx.place(w).local_degree, n)
            if p == 1:
                terms.append(m.scale(weight))
            else:
                terms.append(m.pow_pos(p).scale(weight))
        total = ball_sum(terms)
        if p == 1:
            return HeightValue(total, 1)
        if isinstance(p, Fraction):
            inv = mpf(p.denominator) / mpf(p.numerator)
        else:
            inv = mpf(1) / mpf(p)
        return HeightValue(total.pow_pos(inv), p)


def delta(vec: LogVector, _retried: bool = False) -> int:
    """Size of the Galois orbit of the class: [K_alpha : Q].

    Finite parts are compared exactly; archimedean parts via certified
    intervals.  An overlapping-but-unproven comparison triggers one retry at
    doubled working precision (possible when the vector carries basis
    coordinates), then raises :class:`AmbiguousComparison`.
    """
    fx = vec.fixture
    orbit = []
    try:
        with working_precision(fx.precision):
            for idx in range(len(fx.action)):
                moved = act(idx, vec)
                known = False
                for rep in orbit:
                    eq = moved.eq3(rep)
                    if eq is True:
                        known = True
                        break
                    if eq is None:
                        raise AmbiguousComparison(
                            "orbit membership is ambiguous at the current precision"
                        )
                if not known:
                    orbit.append(moved)
    except AmbiguousComparison:
        if _retried or vec.basis_coords is None or fx.source is None:
            raise
        refix = fx.reload(fx.precision * 2)
        return delta(refix.combo(vec.basis_coords), _retried=True)
    return len(orbit)


def mahler_upper(vec: LogVector, p=1) -> HeightValue:
    """``delta(vec) * h_p(vec)``: the single-term factorization bound."""
    h = h_p(vec, p)
    return HeightValue(h.value.scale(delta(vec)), h.p)
