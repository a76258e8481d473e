"""Galois number-field fixtures and log-valuation vectors.

A fixture file fully describes one Galois number field ``K``: its places with
local degrees and ramification indices, the Galois group as permutations of
place ids, the complete subgroup list (hence the subfield lattice), a basis of
the S-unit vector space, and a principal-ideal generator for every finite
place carried by the fixture.

Elements of ``K^x`` modulo torsion are represented purely by their
log-valuation vectors (:class:`LogVector`): finite places carry exact rational
multiplicities ``m`` meaning ``log||a||_w = -(m/e_w) log p``, archimedean
places carry certified real logs.  A vector whose coordinates all vanish is
the torsion class, so nothing else about torsion representatives is stored.
"""

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from .certreal import CReal, ball_sum, working_precision, DEFAULT_PRECISION
from .errors import (
    FixtureParseError,
    InvariantViolation,
    PrecisionError,
    SupportError,
    UsageError,
)

INF = "inf"

DEFAULT_TOLERANCE = 1e-12

_LOG_PRIME_CACHE = {}


def log_prime(p: int) -> CReal:
    """Certified log of a rational prime, cached per working precision."""
    key = (p, mp.prec)
    val = _LOG_PRIME_CACHE.get(key)
    if val is None:
        val = CReal.log_int(p)
        _LOG_PRIME_CACHE[key] = val
    return val


@dataclass(frozen=True)
class Place:
    """One place of the fixture field."""

    id: int
    over: object  # rational prime (int) or the string "inf"
    local_degree: int
    ram_index: int = 1

    @property
    def is_arch(self) -> bool:
        return self.over == INF


# ---------------------------------------------------------------------------
# Galois action


def _compose(p, q):
    # (p o q)(i) = p[q[i]]
    return tuple(p[i] for i in q)


def _invert(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


class GaloisAction:
    """The Galois group acting on place ids, stored as a closed permutation table."""

    def __init__(self, group_order: int, generators, n_places: int):
        self.group_order = group_order
        self.generators = tuple(tuple(g) for g in generators)
        identity = tuple(range(n_places))
        table = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.generators:
                    q = _compose(g, p)
                    if q not in table:
                        table.add(q)
                        nxt.append(q)
            frontier = nxt
            if len(table) > group_order:
                break
        self.element_table = tuple(sorted(table))
        self._index = {p: i for i, p in enumerate(self.element_table)}
        self.identity_index = self._index[identity]

    def __len__(self):
        return len(self.element_table)

    def index_of(self, perm) -> int:
        try:
            return self._index[tuple(perm)]
        except KeyError:
            raise UsageError(f"permutation {perm} is not a group element") from None

    def compose(self, i: int, j: int) -> int:
        return self._index[_compose(self.element_table[i], self.element_table[j])]

    def invert(self, i: int) -> int:
        return self._index[_invert(self.element_table[i])]

    def orbits(self, elements, ids):
        """Orbits of the subgroup ``elements`` (index set) on the given place ids."""
        ids = sorted(ids)
        seen = set()
        out = []
        for w in ids:
            if w in seen:
                continue
            orbit = {self.element_table[e][w] for e in elements}
            seen |= orbit
            out.append(tuple(sorted(orbit)))
        return out


def enumerate_subgroups(action: GaloisAction):
    """All subgroups of the action's group, by brute-force closure (|G| <= 24)."""
    n = len(action)
    if n > 24:
        raise UsageError("subgroup enumeration is limited to groups of order <= 24")
    comp = [[action.compose(i, j) for j in range(n)] for i in range(n)]

    def close(seed):
        group = set(seed)
        frontier = list(group)
        while frontier:
            nxt = []
            for a in list(group):
                for b in frontier:
                    for c in (comp[a][b], comp[b][a]):
                        if c not in group:
                            group.add(c)
                            nxt.append(c)
            frontier = nxt
        return frozenset(group)

    found = {close({action.identity_index})}
    changed = True
    while changed:
        changed = False
        for h in list(found):
            for g in range(n):
                if g in h:
                    continue
                new = close(h | {g})
                if new not in found:
                    found.add(new)
                    changed = True
    return sorted(found, key=lambda h: (len(h), sorted(h)))


# ---------------------------------------------------------------------------
# Log-valuation vectors


def _sym_scale(sym, r):
    if r == 0:
        return ()
    return tuple((atom, c * r) for atom, c in sym)


def _sym_add(a, b):
    acc = dict(a)
    for atom, c in b:
        c2 = acc.get(atom, Fraction(0)) + c
        if c2 == 0:
            acc.pop(atom, None)
        else:
            acc[atom] = c2
    return tuple(sorted(acc.items()))


class LogVector:
    """A place-indexed vector of log absolute values, tied to one fixture.

    ``fin`` maps finite place ids to exact rationals ``m`` (the scaled
    valuation: ``log||a||_w = -(m/e_w) log p``).  ``arch`` maps archimedean
    place ids to certified logs.  Elements of completions that are not exact
    rational powers at finite places use ``fin_approx`` (certified logs at
    finite places) instead; those vectors support heights and quotient norms
    but not the operations that require exact valuations.

    Vectors reachable from fixture data by exact algebra additionally carry
    ``arch_sym``: each archimedean coordinate as a formal rational combination
    of the fixture's decimal-string atoms.  Two such coordinates are equal as
    real numbers exactly when their formal sums agree (barring multiplicative
    relations between atoms, which fall back to interval comparison), so orbit
    computations stay decidable under any operation order.
    """

    __slots__ = ("fixture", "fin", "arch", "fin_approx", "basis_coords", "arch_sym")

    def __init__(self, fixture, fin=None, arch=None, fin_approx=None, basis_coords=None,
                 arch_sym=None):
        self.fixture = fixture
        self.fin = {}
        self.arch = {}
        self.fin_approx = {}
        for w, m in (fin or {}).items():
            m = Fraction(m)
            place = fixture.place(w)
            if place.is_arch:
                raise SupportError(f"place {w} is archimedean, not finite")
            if m != 0:
                self.fin[w] = m
        for w, x in (arch or {}).items():
            if not fixture.place(w).is_arch:
                raise SupportError(f"place {w} is finite, not archimedean")
            if not (x.mid == 0 and x.rad == 0):
                self.arch[w] = x
        for w, x in (fin_approx or {}).items():
            if fixture.place(w).is_arch:
                raise SupportError(f"place {w} is archimedean, not finite")
            if w in self.fin:
                raise UsageError(f"place {w} has both exact and approximate parts")
            if not (x.mid == 0 and x.rad == 0):
                self.fin_approx[w] = x
        self.basis_coords = tuple(Fraction(c) for c in basis_coords) if basis_coords else None
        if arch_sym is None:
            self.arch_sym = None
        else:
            self.arch_sym = {w: tuple(s) for w, s in arch_sym.items() if s}

    # -- queries ---------------------------------------------------------

    @property
    def is_exact_fin(self) -> bool:
        return not self.fin_approx

    def support(self):
        """Ids of places where the vector is (possibly) nonzero."""
        return set(self.fin) | set(self.arch) | set(self.fin_approx)

    def finite_support(self):
        return set(self.fin) | set(self.fin_approx)

    def is_zero(self) -> bool:
        if self.fin:
            return False
        return all(x.is_zero3() is True for x in list(self.arch.values()) + list(self.fin_approx.values()))

    def log_coord(self, w: int) -> CReal:
        """Certified value of ``log||a||_w``."""
        if w in self.arch:
            return self.arch[w]
        if w in self.fin:
            place = self.fixture.place(w)
            m = self.fin[w]
            with working_precision(self._precision()):
                return log_prime(place.over).scale(Fraction(-m, place.ram_index))
        if w in self.fin_approx:
            return self.fin_approx[w]
        return CReal.zero()

    def _precision(self) -> int:
        return getattr(self.fixture, "precision", DEFAULT_PRECISION)

    def product_formula_residual(self) -> CReal:
        with working_precision(self._precision()):
            terms = []
            for w in sorted(self.support()):
                d = self.fixture.place(w).local_degree
                terms.append(self.log_coord(w).scale(d))
            return ball_sum(terms)

    # -- group/vector-space operations ------------------------------------

    def combine(self, other: "LogVector") -> "LogVector":
        """Product of the underlying classes: coordinate-wise sum of logs."""
        if other.fixture is not self.fixture:
            raise UsageError("vectors belong to different fixtures")
        with working_precision(self._precision()):
            fin = dict(self.fin)
            for w, m in other.fin.items():
                fin[w] = fin.get(w, Fraction(0)) + m
            arch = dict(self.arch)
            for w, x in other.arch.items():
                arch[w] = (arch[w] + x) if w in arch else x
            fa = dict(self.fin_approx)
            for w, x in other.fin_approx.items():
                fa[w] = (fa[w] + x) if w in fa else x
            for w in list(fa):
                if w in fin:
                    fa[w] = fa[w] + log_prime(self.fixture.place(w).over).scale(
                        Fraction(-fin.pop(w), self.fixture.place(w).ram_index)
                    )
            coords = None
            if self.basis_coords and other.basis_coords:
                coords = [a + b for a, b in zip(self.basis_coords, other.basis_coords)]
            sym = None
            if self.arch_sym is not None and other.arch_sym is not None:
                sym = {
                    w: _sym_add(self.arch_sym.get(w, ()), other.arch_sym.get(w, ()))
                    for w in set(self.arch_sym) | set(other.arch_sym)
                }
            return LogVector(self.fixture, fin, arch, fa, coords, sym)

    def power(self, r) -> "LogVector":
        """Rational power of the class: scale every coordinate by ``r``."""
        r = Fraction(r)
        if r == 0:
            return LogVector(self.fixture)
        with working_precision(self._precision()):
            fin = {w: m * r for w, m in self.fin.items()}
            arch = {w: x.scale(r) for w, x in self.arch.items()}
            fa = {w: x.scale(r) for w, x in self.fin_approx.items()}
            coords = [c * r for c in self.basis_coords] if self.basis_coords else None
            sym = None
            if self.arch_sym is not None:
                sym = {w: _sym_scale(s, r) for w, s in self.arch_sym.items()}
            return LogVector(self.fixture, fin, arch, fa, coords, sym)

    def inverse(self) -> "LogVector":
        return self.power(-1)

    def __mul__(self, other):
        return self.combine(other)

    def __pow__(self, r):
        return self.power(r)

    def __truediv__(self, other):
        return self.combine(other.inverse())

    def close_to(self, other: "LogVector", tol=1e-9) -> bool:
        """Exact equality on finite parts, midpoint agreement within tol on the rest."""
        if other.fixture is not self.fixture:
            return False
        if self.fin != other.fin:
            return False
        tol = mp.mpf(tol)
        for w in (set(self.arch) | set(other.arch) | set(self.fin_approx) | set(other.fin_approx)):
            d = self.log_coord(w) - other.log_coord(w)
            if abs(d.mid) > d.rad + tol:
                return False
        return True

    def eq3(self, other: "LogVector"):
        """Three-valued equality; exact on finite parts, certified on arch parts."""
        if other.fixture is not self.fixture:
            return False
        if not self.is_exact_fin or not other.is_exact_fin:
            raise UsageError("equality requires exact finite parts")
        if self.fin != other.fin:
            return False
        both_sym = self.arch_sym is not None and other.arch_sym is not None
        verdict = True
        for w in set(self.arch) | set(other.arch):
            if both_sym and self.arch_sym.get(w, ()) == other.arch_sym.get(w, ()):
                continue
            a = self.arch.get(w, CReal.zero())
            b = other.arch.get(w, CReal.zero())
            got = a.eq3(b)
            if got is False:
                return False
            if got is None:
                verdict = None
        return verdict

    def __repr__(self):
        fin = {w: str(m) for w, m in sorted(self.fin.items())}
        arch = {w: mp.nstr(x.mid, 12) for w, x in sorted(self.arch.items())}
        return f"LogVector(fin={fin}, arch={arch})"


def act(sigma, vec: LogVector) -> LogVector:
    """Apply a Galois element: coordinate ``w`` of the result is coordinate
    ``sigma^-1 w`` of the input (equivalently, entry ``w`` moves to ``sigma w``)."""
    fx = vec.fixture
    if isinstance(sigma, int):
        perm = fx.action.element_table[sigma]
    else:
        perm = tuple(sigma)
    fin = {perm[w]: m for w, m in vec.fin.items()}
    arch = {perm[w]: x for w, x in vec.arch.items()}
    fa = {perm[w]: x for w, x in vec.fin_approx.items()}
    sym = None
    if vec.arch_sym is not None:
        sym = {perm[w]: s for w, s in vec.arch_sym.items()}
    return LogVector(fx, fin, arch, fa, None, sym)


# ---------------------------------------------------------------------------
# Subfields


@dataclass
class SubfieldDescriptor:
    """A subgroup H of the Galois group together with its derived data.

    The fixed field F of H has places in bijection with the H-orbits
    ("fibers") of the fixture's places; ``degree`` is [F:Q].
    """

    index: int
    name: str
    elements: frozenset
    degree: int
    fibers: tuple
    fiber_of: dict = field(repr=False)
    fixture: object = field(repr=False, default=None)

    @property
    def order(self) -> int:
        return len(self.elements)

    def fibers_within(self, place_ids):
        ids = set(place_ids)
        out = []
        for f in self.fibers:
            inside = sum(1 for w in f if w in ids)
            if inside == len(f):
                out.append(f)
            elif inside:
                raise SupportError(f"place set splits the fiber {f}")
        return out

    def fiber_degree(self, fiber) -> Fraction:
        """Local degree of the base place corresponding to one fiber."""
        d_w = self.fixture.place(fiber[0]).local_degree
        d = Fraction(d_w * len(fiber), self.order)
        if d.denominator != 1:
            raise InvariantViolation("fiber degree", f"non-integral local degree for fiber {fiber}")
        return d

    def constant_on_fibers(self, vec: LogVector, tol=DEFAULT_TOLERANCE) -> bool:
        """Membership test for span(W_F): coordinates constant on every fiber."""
        for f in self.fibers:
            exact = [vec.fin.get(w) for w in f]
            if any(m is not None for m in exact):
                vals = set()
                for w, m in zip(f, exact):
                    e = self.fixture.place(w).ram_index
                    vals.add(Fraction(m if m is not None else 0, e))
                if len(vals) > 1:
                    return False
            balls = [vec.log_coord(w) for w in f]
            for x in balls[1:]:
                d = x - balls[0]
                if abs(d.mid) > d.rad + mp.mpf(tol):
                    return False
        return True

    def w_basis(self, place_ids):
        """Rational basis of {x constant on fibers, sum d_w x_w = 0} over the ids."""
        fibers = self.fibers_within(place_ids)
        if len(fibers) <= 1:
            return []
        weights = [sum(self.fixture.place(w).local_degree for w in f) for f in fibers]
        last = fibers[-1]
        basis = []
        for f, wt in zip(fibers[:-1], weights[:-1]):
            vec = {w: Fraction(1) for w in f}
            scale = Fraction(-wt, weights[-1])
            for w in last:
                vec[w] = scale
            basis.append(vec)
        return basis


# ---------------------------------------------------------------------------
# The fixture itself


class FieldFixture:
    """Immutable bundle of everything the computations need about one field."""

    def __init__(self, label, degree, places, action, subfields, basis,
                 class_number, prime_generators, elements, pisot_houses,
                 core_s, source, path, precision):
        self.label = label
        self.degree = degree
        self.places = tuple(places)
        self.action = action
        self.subfields = subfields
        self.s_unit_basis = tuple(basis)
        self.class_number = class_number
        self.prime_generators = prime_generators
        self.named_elements = elements
        self.pisot_houses = pisot_houses
        self.core_s = frozenset(core_s)
        self.source = source
        self.path = path
        self.precision = precision
        self._by_id = {p.id: p for p in self.places}
        self.arch_ids = tuple(p.id for p in self.places if p.is_arch)
        over = {}
        for p in self.places:
            over.setdefault(p.over, []).append(p.id)
        self.places_over = {k: tuple(v) for k, v in over.items()}

    # -- lookups -----------------------------------------------------------

    def place(self, w: int) -> Place:
        try:
            return self._by_id[w]
        except KeyError:
            raise UsageError(f"fixture {self.label} has no place with id {w}") from None

    def subfield_by(self, spec) -> SubfieldDescriptor:
        if isinstance(spec, SubfieldDescriptor):
            return spec
        if isinstance(spec, int):
            try:
                return self.subfields[spec]
            except IndexError:
                raise UsageError(f"no subfield with index {spec}") from None
        if isinstance(spec, frozenset):
            for sf in self.subfields:
                if sf.elements == spec:
                    return sf
            raise UsageError("no subfield with that subgroup")
        for sf in self.subfields:
            if sf.name == spec:
                return sf
        raise UsageError(f"no subfield named {spec!r}")

    def stabilizer_subfield(self, place_id: int) -> SubfieldDescriptor:
        stab = frozenset(
            i for i, perm in enumerate(self.action.element_table) if perm[place_id] == place_id
        )
        return self.subfield_by(stab)

    # -- vector construction -------------------------------------------------

    def vector(self, fin=None, arch=None, fin_approx=None, basis_coords=None) -> LogVector:
        return LogVector(self, fin, arch, fin_approx, basis_coords)

    def zero_vector(self) -> LogVector:
        return LogVector(self, arch_sym={})

    def combo(self, coords) -> LogVector:
        """Exact rational combination of the fixture's S-unit basis."""
        coords = [Fraction(c) for c in coords]
        if len(coords) != len(self.s_unit_basis):
            raise UsageError(
                f"expected {len(self.s_unit_basis)} basis coordinates, got {len(coords)}"
            )
        with working_precision(self.precision):
            fin = {}
            arch_terms = {}
            sym = {}
            symbolic = all(u.arch_sym is not None for u in self.s_unit_basis)
            for c, u in zip(coords, self.s_unit_basis):
                if c == 0:
                    continue
                for w, m in u.fin.items():
                    fin[w] = fin.get(w, Fraction(0)) + c * m
                for w, x in u.arch.items():
                    arch_terms.setdefault(w, []).append(x.scale(c))
                    if symbolic:
                        sym[w] = _sym_add(sym.get(w, ()), _sym_scale(u.arch_sym.get(w, ()), c))
            arch = {w: ball_sum(terms) for w, terms in arch_terms.items()}
            return LogVector(self, fin, arch, None, coords, sym if symbolic else None)

    def element(self, spec) -> LogVector:
        """Resolve a named element or a comma-separated basis-coordinate list."""
        if isinstance(spec, LogVector):
            return spec
        if isinstance(spec, str) and spec in self.named_elements:
            return self.named_elements[spec]
        if isinstance(spec, (list, tuple)):
            return self.combo(spec)
        if isinstance(spec, str):
            parts = [s.strip() for s in spec.split(",")]
            try:
                coords = [Fraction(s) for s in parts]
            except ValueError:
                raise UsageError(f"unknown element {spec!r}") from None
            return self.combo(coords)
        raise UsageError(f"cannot resolve element {spec!r}")

    def reload(self, precision: int) -> "FieldFixture":
        """Re-parse the fixture's raw data at a different working precision."""
        return load_fixture(self.source, precision=precision, path=self.path)


def subfield_lattice(fix: FieldFixture):
    """All subfields of the fixture field, ordered by degree (Q first, K last)."""
    return list(fix.subfields)


# ---------------------------------------------------------------------------
# Loading and validation


def _parse_logvector(fix_stub, data, what):
    fin = {}
    for k, v in (data.get("fin") or {}).items():
        try:
            fin[int(k)] = Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise FixtureParseError(f"{what}: bad rational {v!r} at place {k}") from exc
    arch = {}
    sym = {}
    for k, v in (data.get("arch") or {}).items():
        try:
            arch[int(k)] = CReal.from_decimal(v)
        except ValueError as exc:
            raise FixtureParseError(f"{what}: bad decimal {v!r} at place {k}") from exc
        text = v.strip()
        # the printed magnitude is the interned atom; signs live in the coefficient
        if text.lstrip("+-").strip("0").strip(".") != "":
            atom = text.lstrip("+-")
            coeff = Fraction(-1 if text.startswith("-") else 1)
            sym[int(k)] = ((atom, coeff),)
    return LogVector(fix_stub, fin, arch, None, None, sym)


def _check_product_formula(vec: LogVector, what: str, tol: float):
    resid = vec.product_formula_residual()
    if resid.rad > mp.mpf(tol):
        raise PrecisionError(
            f"{what}: archimedean error bounds (radius {mp.nstr(resid.rad, 5)}) are too wide "
            f"to certify the product formula at tolerance {tol}"
        )
    if abs(resid.mid) > resid.rad + mp.mpf(tol):
        raise InvariantViolation(
            "product formula",
            f"{what}: weighted log sum is {mp.nstr(resid.mid, 8)}, not 0",
        )


def _certified_rank(rows):
    """Rank of a matrix of CReal entries, by interval Gaussian elimination."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    top = 0
    for col in range(ncols):
        best, best_val = None, None
        for i in range(top, len(rows)):
            entry = rows[i][col]
            if entry.sign() is not None and entry.sign() != 0:
                mag = abs(entry.mid)
                if best is None or mag > best_val:
                    best, best_val = i, mag
        if best is None:
            undecided = [
                i for i in range(top, len(rows)) if rows[i][col].is_zero3() is None
            ]
            if undecided:
                raise PrecisionError(
                    f"rank computation: entry in column {col} is ambiguously zero"
                )
            continue
        rows[top], rows[best] = rows[best], rows[top]
        pivot = rows[top][col]
        for i in range(top + 1, len(rows)):
            factor = rows[i][col] / pivot
            rows[i] = [rows[i][j] - factor * rows[top][j] for j in range(ncols)]
            rows[i][col] = CReal.zero()
        rank += 1
        top += 1
        if top == len(rows):
            break
    return rank


def load_fixture(source, precision: int = DEFAULT_PRECISION, tol: float = DEFAULT_TOLERANCE,
                 path=None) -> FieldFixture:
    """Load and fully validate a fixture from a path, JSON text, or dict."""
    if isinstance(source, dict):
        raw = source
    else:
        text = None
        if isinstance(source, (str, os.PathLike)) and os.path.exists(str(source)):
            path = str(source)
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        elif isinstance(source, str):
            text = source
        else:
            raise FixtureParseError(f"cannot read fixture from {source!r}")
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FixtureParseError(f"invalid JSON: {exc}") from exc

    with working_precision(precision):
        return _build_fixture(raw, precision, tol, path)


def _build_fixture(raw, precision, tol, path):
    for key in ("label", "degree", "places", "galois", "subgroups", "s_unit_basis"):
        if key not in raw:
            raise FixtureParseError(f"missing required field {key!r}")
    label = raw["label"]
    degree = int(raw["degree"])

    places = []
    for i, pd in enumerate(raw["places"]):
        over = pd["over"]
        if over != INF:
            over = int(over)
        place = Place(
            id=int(pd["id"]),
            over=over,
            local_degree=int(pd["local_degree"]),
            ram_index=int(pd.get("ram_index", 1)),
        )
        if place.id != i:
            raise InvariantViolation("place ids", f"place at position {i} has id {place.id}")
        if place.local_degree < 1 or place.ram_index < 1:
            raise InvariantViolation("place degrees", f"place {place.id} has nonpositive data")
        if place.is_arch and place.ram_index != 1:
            raise InvariantViolation("place degrees", f"archimedean place {place.id} has e != 1")
        places.append(place)

    by_over = {}
    for p in places:
        by_over.setdefault(p.over, []).append(p)
    for over, group in by_over.items():
        total = sum(p.local_degree for p in group)
        if total != degree:
            raise InvariantViolation(
                "local degree sum",
                f"sum of local degrees over {over} is {total}, expected {degree}",
            )

    gal = raw["galois"]
    order = int(gal["group_order"])
    if order != degree:
        raise InvariantViolation("galois order", f"|G| = {order} but [K:Q] = {degree}")
    n = len(places)
    for g in gal.get("generators", []):
        if sorted(g) != list(range(n)):
            raise InvariantViolation("galois generators", f"{g} is not a permutation of place ids")
        for w in range(n):
            if places[g[w]].over != places[w].over:
                raise InvariantViolation(
                    "galois fibers", f"generator {g} moves place {w} across rational primes"
                )
    action = GaloisAction(order, gal.get("generators", []), n)
    if len(action) != order:
        raise InvariantViolation(
            "galois closure",
            f"generators produce {len(action)} elements, expected {order}",
        )
    for over, group in by_over.items():
        ids = [p.id for p in group]
        orbit = {perm[ids[0]] for perm in action.element_table}
        if orbit != set(ids):
            raise InvariantViolation(
                "galois transitivity", f"action is not transitive on places over {over}"
            )

    known = enumerate_subgroups(action) if order <= 24 else None
    descriptors = []
    seen_subgroups = set()
    for k, sg in enumerate(raw["subgroups"]):
        elems = frozenset(action.index_of(p) for p in sg["elements"])
        if action.identity_index not in elems:
            raise InvariantViolation("subgroup", f"subgroup #{k} misses the identity")
        for a in elems:
            for b in elems:
                if action.compose(a, b) not in elems:
                    raise InvariantViolation("subgroup", f"subgroup #{k} is not closed")
        if elems in seen_subgroups:
            raise InvariantViolation("subgroup", f"subgroup #{k} repeats an earlier one")
        seen_subgroups.add(elems)
        if order % len(elems) != 0:
            raise InvariantViolation("subgroup", f"subgroup #{k} order does not divide |G|")
        descriptors.append((sg.get("name", f"subfield{k}"), elems))
    if known is not None and seen_subgroups != set(known):
        raise InvariantViolation(
            "subgroup list",
            f"fixture lists {len(seen_subgroups)} subgroups but the group has {len(known)}",
        )

    subfields = []
    order_key = sorted(range(len(descriptors)), key=lambda k: (order // len(descriptors[k][1]), k))
    fix_stub = FieldFixture.__new__(FieldFixture)
    fix_stub._by_id = {p.id: p for p in places}
    fix_stub.label = label
    fix_stub.precision = precision
    for idx, k in enumerate(order_key):
        name, elems = descriptors[k]
        fibers = tuple(action.orbits(elems, range(n)))
        fiber_of = {}
        for fi, f in enumerate(fibers):
            for w in f:
                fiber_of[w] = fi
        subfields.append(
            SubfieldDescriptor(
                index=idx,
                name=name,
                elements=elems,
                degree=order // len(elems),
                fibers=fibers,
                fiber_of=fiber_of,
            )
        )

    basis = []
    for j, bd in enumerate(raw["s_unit_basis"]):
        vec = _parse_logvector(fix_stub, bd, f"s_unit_basis[{j}]")
        vec.basis_coords = tuple(
            Fraction(1) if i == j else Fraction(0) for i in range(len(raw["s_unit_basis"]))
        )
        _check_product_formula(vec, f"s_unit_basis[{j}]", tol)
        basis.append(vec)

    core_s = set(p.id for p in places if p.is_arch)
    for vec in basis:
        core_s |= set(vec.fin)
    n_core = len(core_s)
    if len(basis) != n_core - 1:
        raise InvariantViolation(
            "s-unit rank",
            f"{len(basis)} basis vectors but #S_K - 1 = {n_core - 1}",
        )
    rows = [[vec.log_coord(w) for w in sorted(core_s)] for vec in basis]
    if _certified_rank(rows) != len(basis):
        raise InvariantViolation("s-unit rank", "s_unit_basis vectors are linearly dependent")

    class_number = int(raw.get("class_number", 1))
    if class_number < 1:
        raise InvariantViolation("class number", f"h = {class_number}")
    prime_generators = {}
    for k, gd in (raw.get("prime_generators") or {}).items():
        w = int(k)
        place = fix_stub._by_id.get(w)
        if place is None or place.is_arch:
            raise InvariantViolation("prime generator", f"place {k} is not a finite place")
        vec = _parse_logvector(fix_stub, gd["vector"], f"prime_generators[{k}]")
        h = int(gd.get("h", class_number))
        if set(vec.fin) != {w}:
            raise InvariantViolation(
                "prime generator", f"generator for place {w} has finite support {sorted(vec.fin)}"
            )
        if vec.fin[w] <= 0:
            raise InvariantViolation(
                "prime generator", f"generator for place {w} has nonpositive valuation"
            )
        _check_product_formula(vec, f"prime_generators[{k}]", tol)
        prime_generators[w] = (h, vec)

    elements = {}
    for name, ed in (raw.get("elements") or {}).items():
        if "basis" in ed:
            coords = [Fraction(c) for c in ed["basis"]]
            if len(coords) != len(basis):
                raise FixtureParseError(f"element {name!r}: wrong coordinate count")
            elements[name] = ("basis", coords)
        else:
            vec = _parse_logvector(fix_stub, ed, f"element {name!r}")
            _check_product_formula(vec, f"element {name!r}", tol)
            elements[name] = ("vector", vec)

    pisot = {}
    for name, house in (raw.get("pisot_salem") or {}).items():
        if name not in elements:
            raise FixtureParseError(f"pisot_salem entry {name!r} is not a named element")
        pisot[name] = CReal.from_decimal(house)

    fixture = FieldFixture(
        label=label,
        degree=degree,
        places=places,
        action=action,
        subfields=subfields,
        basis=basis,
        class_number=class_number,
        prime_generators=prime_generators,
        elements={},
        pisot_houses=pisot,
        core_s=core_s,
        source=raw,
        path=path,
        precision=precision,
    )
    for sf in subfields:
        sf.fixture = fixture
    rebound = {}
    for name, (kind, val) in elements.items():
        if kind == "basis":
            rebound[name] = fixture.combo(val)
        else:
            rebound[name] = LogVector(fixture, val.fin, val.arch, None, None, val.arch_sym)
    fixture.named_elements = rebound
    for vec in fixture.s_unit_basis:
        vec.fixture = fixture
    for h, vec in fixture.prime_generators.values():
        vec.fixture = fixture
    return fixture


def shipped_fixture_path(name: str) -> str:
    """Path of a fixture bundled with the package (by label, e.g. 'qsqrt2')."""
    here = os.path.join(os.path.dirname(__file__), "fixtures")
    candidate = os.path.join(here, name.replace("-", "_") + ".json")
    if not os.path.exists(candidate):
        raise UsageError(f"no shipped fixture named {name!r}")
    return candidate
