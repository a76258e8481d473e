"""Certified real arithmetic: midpoint-radius balls over mpmath floats.

A :class:`CReal` stores an mpf midpoint ``mid`` and a nonnegative mpf radius
``rad`` with the contract ``|true_value - mid| <= rad``.  Every operation
propagates radii conservatively and adds a small slop term covering mpmath's
rounding, so the contract survives arbitrary chains of operations.  The payoff
is that comparisons are three-valued: certainly true, certainly false, or
"too close to call" (returned as ``None`` and normally escalated by callers).

All operations use the *current* mpmath working precision; use
:func:`working_precision` around a computation to pin it.
"""

import re
from contextlib import contextmanager
from fractions import Fraction

from mpmath import mp, mpf

from .errors import PrecisionError

DEFAULT_PRECISION = 200  # bits

_DECIMAL_RE = re.compile(r"^[+-]?(\d+)(\.(\d+))?$")

# Radius bookkeeping is done in floating point rounded to nearest, so every
# radius combination is inflated by a hair to stay an upper bound.
_INFLATE = None
_INFLATE_PREC = None


def _inflate():
    global _INFLATE, _INFLATE_PREC
    if _INFLATE_PREC != mp.prec:
        _INFLATE = mpf(1) + mpf(2) ** (-40)
        _INFLATE_PREC = mp.prec
    return _INFLATE


def _slop(m):
    """Rounding slop for a freshly computed midpoint ``m``."""
    if m == 0:
        return mpf(0)
    return abs(m) * mpf(2) ** (-mp.prec + 6)


def _rad(*terms, slop=None):
    total = mpf(0)
    for t in terms:
        total += t
    if slop is not None:
        total += slop
    if total == 0:
        return total
    return total * _inflate()


@contextmanager
def working_precision(bits: int):
    """Run a block at ``bits`` of mpmath precision."""
    if bits < 53:
        raise PrecisionError(f"working precision {bits} bits is too low")
    with mp.workprec(bits):
        yield


def mpf_to_fraction(x) -> Fraction:
    """Exact dyadic value of an mpf (mpf values are always exact rationals)."""
    sign, man, exp, _ = mpf(x)._mpf_
    if man == 0:
        return Fraction(0)
    val = Fraction(man) * (Fraction(2) ** exp)
    return -val if sign else val


class CReal:
    """A certified real number: midpoint +/- radius."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpf(mid)
        self.rad = mpf(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    # ---- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "CReal":
        return CReal(0, 0)

    @staticmethod
    def from_fraction(q: Fraction) -> "CReal":
        q = Fraction(q)
        if q == 0:
            return CReal.zero()
        mid = mpf(q.numerator) / mpf(q.denominator)
        if mpf_to_fraction(mid) == q:
            return CReal(mid, 0)
        return CReal(mid, _rad(slop=_slop(mid)))

    @staticmethod
    def from_decimal(text: str) -> "CReal":
        """Parse a fixture decimal string.

        Strings with a fractional part are treated as approximations accurate
        to one unit in the last printed digit; bare integers are exact.
        """
        text = text.strip()
        m = _DECIMAL_RE.match(text)
        if m is None:
            raise ValueError(f"not a plain decimal literal: {text!r}")
        mid = mpf(text)
        if m.group(3) is None:
            exact = mpf_to_fraction(mid) == Fraction(int(text))
            return CReal(mid, 0 if exact else _rad(slop=_slop(mid)))
        ulp = mpf(10) ** (-len(m.group(3)))
        return CReal(mid, _rad(ulp, slop=_slop(mid)))

    @staticmethod
    def log_int(n: int) -> "CReal":
        """Certified natural log of a positive integer."""
        if n <= 0:
            raise ValueError("log_int needs a positive integer")
        if n == 1:
            return CReal.zero()
        mid = mp.ln(n)
        return CReal(mid, _rad(slop=_slop(mid)))

    # ---- arithmetic ----------------------------------------------------

    def __add__(self, other: "CReal") -> "CReal":
        mid = self.mid + other.mid
        return CReal(mid, _rad(self.rad, other.rad, slop=_slop(mid)))

    def __sub__(self, other: "CReal") -> "CReal":
        mid = self.mid - other.mid
        return CReal(mid, _rad(self.rad, other.rad, slop=_slop(mid)))

    def __neg__(self) -> "CReal":
        return CReal(-self.mid, self.rad)

    def __mul__(self, other: "CReal") -> "CReal":
        mid = self.mid * other.mid
        cross = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
        return CReal(mid, _rad(cross, slop=_slop(mid)))

    def __truediv__(self, other: "CReal") -> "CReal":
        lo = abs(other.mid) - other.rad
        if lo <= 0:
            raise PrecisionError("division by an interval containing zero")
        mid = self.mid / other.mid
        err = (self.rad * abs(other.mid) + abs(self.mid) * other.rad) / (abs(other.mid) * lo)
        return CReal(mid, _rad(err, slop=_slop(mid)))

    def scale(self, q) -> "CReal":
        """Multiply by an exact rational (or int)."""
        q = Fraction(q)
        if q == 0:
            return CReal.zero()
        if q == 1:
            return self
        if q.denominator == 1:
            mid = self.mid * q.numerator
        else:
            mid = self.mid * q.numerator / q.denominator
        aq = abs(Fraction(q))
        r = self.rad * aq.numerator
        if aq.denominator != 1:
            r = r / aq.denominator
        return CReal(mid, _rad(r, slop=_slop(mid)))

    def __abs__(self) -> "CReal":
        lo = self.mid - self.rad
        hi = self.mid + self.rad
        if lo >= 0:
            return CReal(self.mid, self.rad)
        if hi <= 0:
            return CReal(-self.mid, self.rad)
        top = max(hi, -lo)
        half = top / 2
        return CReal(half, _rad(half, slop=_slop(half)))

    def log_pos(self) -> "CReal":
        """Natural log of a certified strictly positive value."""
        lo = self.mid - self.rad
        if lo <= 0:
            raise PrecisionError("log of an interval touching zero")
        mid = mp.ln(self.mid)
        err = self.rad / lo
        return CReal(mid, _rad(err, slop=_slop(mid)))

    def pow_pos(self, p) -> "CReal":
        """``x**p`` for a certified ``x >= 0`` and a real exponent ``p > 0``."""
        lo = self.mid - self.rad
        hi = self.mid + self.rad
        if hi < 0:
            raise ValueError("pow_pos needs a nonnegative interval")
        lo = max(lo, mpf(0))
        pm = mpf(p) if not isinstance(p, Fraction) else mpf(p.numerator) / mpf(p.denominator)
        plo = mp.power(lo, pm) if lo > 0 else (mpf(0) if hi > 0 or pm > 0 else mpf(1))
        phi = mp.power(hi, pm) if hi > 0 else mpf(0)
        mid = (plo + phi) / 2
        half = (phi - plo) / 2
        return CReal(mid, _rad(half, slop=_slop(phi) * 4))

    # ---- interval queries ----------------------------------------------

    def lower(self):
        return self.mid - self.rad

    def upper(self):
        return self.mid + self.rad

    def is_exact(self) -> bool:
        return self.rad == 0

    def sign(self):
        """Certified sign: -1, 0 (only for the exact zero), or None if unknown."""
        if self.mid == 0 and self.rad == 0:
            return 0
        if self.mid - self.rad > 0:
            return 1
        if self.mid + self.rad < 0:
            return -1
        return None

    def eq3(self, other: "CReal"):
        """Three-valued equality.

        Bit-identical balls are taken as equal: fixture coordinates that agree
        by symmetry are constructed through identical operation chains, so
        genuine equalities surface as identical representations.  Disjoint
        intervals are certainly unequal.  Anything else is ``None``.
        """
        if self.mid == other.mid and self.rad == other.rad:
            return True
        if abs(self.mid - other.mid) > self.rad + other.rad:
            return False
        return None

    def is_zero3(self):
        if self.mid == 0 and self.rad == 0:
            return True
        if abs(self.mid) > self.rad:
            return False
        return None

    def lt_certain(self, other: "CReal") -> bool:
        return self.mid + self.rad < other.mid - other.rad

    def within(self, value, tol) -> bool:
        """|self - value| <= tol, allowing for the certified radius."""
        return abs(self.mid - mpf(value)) <= mpf(tol) + self.rad

    def contains(self, value) -> bool:
        return abs(self.mid - mpf(value)) <= self.rad

    # ---- misc ------------------------------------------------------------

    def sort_key(self):
        return (self.mid, self.rad)

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"CReal({mp.nstr(self.mid, 20)} +/- {mp.nstr(self.rad, 3)})"

    def str_pair(self, digits=None):
        """Deterministic (value, error) decimal strings for reporting."""
        if digits is None:
            digits = max(17, int(mp.prec * 0.30103) - 8)
        v = mp.nstr(self.mid, digits, strip_zeros=False)
        e = "0" if self.rad == 0 else mp.nstr(self.rad, 3)
        return v, e


def ball_sum(items) -> CReal:
    """Sum a collection of balls in a canonical order.

    Sorting by (mid, rad) before folding makes the result independent of the
    caller's iteration order, so coordinates that are equal by symmetry come
    out bit-identical (which `eq3` then recognizes).
    """
    items = sorted(items, key=CReal.sort_key)
    if not items:
        return CReal.zero()
    if len(items) == 1:
        return items[0]
    total = items[0]
    for it in items[1:]:
        total = total + it
    return total


def ball_max(items) -> CReal:
    items = list(items)
    if not items:
        return CReal.zero()
    lo = max(x.mid - x.rad for x in items)
    hi = max(x.mid + x.rad for x in items)
    mid = (lo + hi) / 2
    half = (hi - lo) / 2
    return CReal(mid, _rad(half, slop=_slop(mid)))
