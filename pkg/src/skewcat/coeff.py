"""Exact coefficient rings and the twisting maps between them.

Scalars are plain values (``Fraction`` or ``int``) interpreted by a scalar
ring object.  Coefficient elements (functions on a point set, univariate
polynomials, formal symbols) are immutable values with ring operators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .category import FinCategory, NotComposable


class RingMismatch(Exception):
    pass


class WrongObject(Exception):
    pass


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % k == 0:
            return False
        k += 1
    return True


# -- scalar rings ------------------------------------------------------------


@dataclass(frozen=True)
class Rationals:
    name = "Q"
    is_field = True
    is_integral_domain = True
    is_finite = False
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, v) -> Fraction:
        return Fraction(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def elements(self):
        raise TypeError("the rationals cannot be enumerated")

    def random(self, rng, bound: int = 3) -> Fraction:
        return Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 2, 3)))

    def fmt(self, a) -> str:
        return str(a)

    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class IntegersMod:
    """``Z/m``; a field exactly when ``m`` is prime."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    @property
    def name(self) -> str:
        return f"Fp {self.modulus}" if self.is_field else f"Zmod {self.modulus}"

    @property
    def is_field(self) -> bool:
        return _is_prime(self.modulus)

    is_integral_domain = is_field
    is_finite = True
    zero = 0
    one = 1

    def coerce(self, v) -> int:
        if isinstance(v, Fraction):
            if v.denominator != 1:
                return v.numerator * pow(v.denominator, -1, self.modulus) % self.modulus
            v = v.numerator
        return int(v) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def inv(self, a):
        return pow(a, -1, self.modulus)

    def elements(self):
        return range(self.modulus)

    def random(self, rng, bound: int = 0) -> int:
        return rng.randrange(self.modulus)

    def fmt(self, a) -> str:
        return str(a)

    def __str__(self) -> str:
        return self.name


def GF(p: int) -> IntegersMod:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return IntegersMod(p)


QQ = Rationals()


# -- function rings ----------------------------------------------------------


class FnRingElem:
    """A function ``space[obj] -> R`` stored as a tuple aligned with the space."""

    __slots__ = ("ring", "obj", "values")

    def __init__(self, ring: "FunctionRing", obj: str, values: Iterable):
        self.ring = ring
        self.obj = obj
        self.values = tuple(values)

    @property
    def points(self) -> tuple:
        return self.ring.sys.space[self.obj]

    def __call__(self, x):
        return self.values[self.ring.sys.point_index[self.obj][x]]

    def _same(self, other: "FnRingElem") -> None:
        if not isinstance(other, FnRingElem) or other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatch("elements of different rings")
        if other.obj != self.obj:
            raise WrongObject(f"functions on {self.obj} and {other.obj}")

    def __add__(self, other):
        self._same(other)
        add = self.ring.scalars.add
        return FnRingElem(self.ring, self.obj, map(add, self.values, other.values))

    def __sub__(self, other):
        self._same(other)
        sub = self.ring.scalars.sub
        return FnRingElem(self.ring, self.obj, map(sub, self.values, other.values))

    def __mul__(self, other):
        self._same(other)
        mul = self.ring.scalars.mul
        return FnRingElem(self.ring, self.obj, map(mul, self.values, other.values))

    def __neg__(self):
        return FnRingElem(self.ring, self.obj, map(self.ring.scalars.neg, self.values))

    def scale(self, c):
        mul = self.ring.scalars.mul
        return FnRingElem(self.ring, self.obj, (mul(c, v) for v in self.values))

    def is_zero(self) -> bool:
        z = self.ring.scalars.zero
        return all(v == z for v in self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FnRingElem):
            return NotImplemented
        return self.obj == other.obj and self.values == other.values and self.ring.scalars == other.ring.scalars

    def __hash__(self):
        return hash((self.obj, self.values))

    def __repr__(self) -> str:
        body = ", ".join(f"{x}:{self.ring.scalars.fmt(v)}" for x, v in zip(self.points, self.values))
        return "{" + body + "}@" + self.obj


class FunctionRing:
    """All functions ``space[e] -> R`` at every object of a system.

    With ``constants_only`` the ring at each object is the constant functions;
    that subring is closed under every twist but does not separate points.
    """

    def __init__(self, sys, scalars, constants_only: bool = False):
        self.sys = sys
        self.scalars = scalars
        self.constants_only = constants_only

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FunctionRing)
            and other.sys is self.sys
            and other.scalars == self.scalars
            and other.constants_only == self.constants_only
        )

    def __hash__(self):
        return hash((id(self.sys), self.scalars, self.constants_only))

    def element(self, e: str, values) -> FnRingElem:
        pts = self.sys.space[e]
        if isinstance(values, Mapping):
            values = [values[x] for x in pts]
        values = [self.scalars.coerce(v) for v in values]
        if len(values) != len(pts):
            raise WrongObject(f"need {len(pts)} values on {e}")
        return FnRingElem(self, e, values)

    def zero(self, e: str) -> FnRingElem:
        return FnRingElem(self, e, [self.scalars.zero] * len(self.sys.space[e]))

    def one(self, e: str) -> FnRingElem:
        return FnRingElem(self, e, [self.scalars.one] * len(self.sys.space[e]))

    def const(self, e: str, c) -> FnRingElem:
        return FnRingElem(self, e, [self.scalars.coerce(c)] * len(self.sys.space[e]))

    def indicator(self, e: str, x) -> FnRingElem:
        z, o = self.scalars.zero, self.scalars.one
        return FnRingElem(self, e, [o if y == x else z for y in self.sys.space[e]])

    def basis(self, e: str) -> list[FnRingElem]:
        if self.constants_only:
            return [self.one(e)]
        return [self.indicator(e, x) for x in self.sys.space[e]]

    def dim(self, e: str) -> int:
        return 1 if self.constants_only else len(self.sys.space[e])

    def sigma(self, n: str, f: FnRingElem) -> FnRingElem:
        return sigma_fn(self, n, f)

    def random(self, e: str, rng) -> FnRingElem:
        if self.constants_only:
            return self.const(e, self.scalars.random(rng))
        return FnRingElem(self, e, [self.scalars.random(rng) for _ in self.sys.space[e]])

    def elements(self, e: str):
        """Every element of the ring at ``e`` (finite scalars only)."""
        if self.constants_only:
            for c in self.scalars.elements():
                yield self.const(e, c)
            return
        for vals in product(self.scalars.elements(), repeat=len(self.sys.space[e])):
            yield FnRingElem(self, e, vals)


FunctionRingSpec = FunctionRing


def sigma_fn(ring: FunctionRing, n: str, f: FnRingElem) -> FnRingElem:
    """Precompose ``f`` (on ``d(n)``) with the system map of ``n``."""
    cat = ring.sys.cat
    if f.obj != cat.dom(n):
        raise WrongObject(f"sigma({n}) expects a function on {cat.dom(n)}, got one on {f.obj}")
    c = cat.cod(n)
    s = ring.sys.action[n]
    return FnRingElem(ring, c, (f(s[x]) for x in ring.sys.space[c]))


def support(f: FnRingElem) -> frozenset:
    z = f.ring.scalars.zero
    return frozenset(x for x, v in zip(f.points, f.values) if v != z)


def in_annihilator(x, y, scalars=None) -> bool:
    """Whether ``x * y == 0``; plain scalars need their ``scalars`` ring."""
    if scalars is not None:
        return scalars.mul(scalars.coerce(x), scalars.coerce(y)) == scalars.zero
    if type(x) is not type(y):
        raise RingMismatch(f"{type(x).__name__} and {type(y).__name__}")
    try:
        return (x * y).is_zero()
    except WrongObject as exc:
        raise RingMismatch(str(exc)) from None


# -- univariate polynomials over Q ------------------------------------------


class PolyElem:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, deg: int, c=1) -> "PolyElem":
        return cls([0] * deg + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyElem(self.coeff(k) + other.coeff(k) for k in range(n))

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyElem(self.coeff(k) - other.coeff(k) for k in range(n))

    def __neg__(self):
        return PolyElem(-c for c in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, PolyElem):
            return PolyElem(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return PolyElem()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyElem(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyElem):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}{mon}" if c.denominator == 1 else f"({c}){mon}")
        return " + ".join(parts).replace("+ -", "- ")


_POLY_TERM = re.compile(r"^(?P<c>[0-9]+(?:/[0-9]+)?)?\*?(?P<x>X(?:\^(?P<e>[0-9]+))?)?$")


def parse_poly(text: str) -> PolyElem:
    """Parse a literal such as ``1 + 2X - X^2`` or ``(1/2)X^3``."""
    s = text.replace(" ", "").replace("(", "").replace(")", "")
    if not s:
        raise ValueError("empty polynomial literal")
    if s[0] not in "+-":
        s = "+" + s
    out = PolyElem()
    for sign, term in re.findall(r"([+-])([^+-]+)", s):
        m = _POLY_TERM.match(term)
        if not m or not (m.group("c") or m.group("x")):
            raise ValueError(f"bad polynomial term {term!r}")
        c = Fraction(m.group("c") or 1)
        k = 0
        if m.group("x"):
            k = int(m.group("e") or 1)
        out = out + PolyElem.monomial(k, -c if sign == "-" else c)
    if "".join(sign + term for sign, term in re.findall(r"([+-])([^+-]+)", s)) != s:
        raise ValueError(f"bad polynomial literal {text!r}")
    return out


def sigma_poly(n: int, z, p: PolyElem) -> PolyElem:
    """``p(X) -> p(z^n X)``: the degree-k coefficient is scaled by ``z^(n k)``."""
    if n < 0:
        raise ValueError("monoid degree must be nonnegative")
    zn = Fraction(z) ** n
    return PolyElem(c * zn**k for k, c in enumerate(p.coeffs))


# -- formal symbolic coefficients -------------------------------------------


@dataclass(frozen=True, order=True)
class Gen:
    """The symbol ``base o s(morph)``, living at ``c(morph)``; ``d(morph)`` is home."""

    base: str
    morph: str


class FormalElem:
    """Polynomial with rational coefficients in commuting generators ``Gen``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, Fraction] = {}
        for mon, c in items:
            acc[mon] = acc.get(mon, Fraction(0)) + Fraction(c)
        self.terms = tuple(sorted((m, c) for m, c in acc.items() if c != 0))

    @classmethod
    def const(cls, c=1) -> "FormalElem":
        return cls({(): c})

    @classmethod
    def gen(cls, base: str, morph: str) -> "FormalElem":
        return cls({((Gen(base, morph), 1),): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def generators(self) -> set[Gen]:
        return {g for mon, _ in self.terms for g, _ in mon}

    def __add__(self, other):
        return FormalElem(self.terms + other.terms)

    def __sub__(self, other):
        return FormalElem(self.terms + tuple((m, -c) for m, c in other.terms))

    def __neg__(self):
        return FormalElem((m, -c) for m, c in self.terms)

    def __mul__(self, other):
        out = []
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                out.append((_mon_mul(m1, m2), c1 * c2))
        return FormalElem(out)

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalElem):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self) -> str:
        return format_formal(self)


def _mon_mul(m1: tuple, m2: tuple) -> tuple:
    d: dict[Gen, int] = {}
    for g, k in m1 + m2:
        d[g] = d.get(g, 0) + k
    return tuple(sorted(d.items()))


class FormalRing:
    """Symbolic coefficients over a bare category.

    ``homes`` records the object each base symbol lives on; the generator
    ``Gen(b, m)`` is only meaningful when ``d(m) == homes[b]``.
    """

    def __init__(self, cat: FinCategory, homes: Mapping[str, str] | None = None):
        self.cat = cat
        self.homes: dict[str, str] = dict(homes or {})
        self.scalars = QQ

    def symbol(self, base: str, home: str) -> FormalElem:
        known = self.homes.setdefault(base, home)
        if known != home:
            raise WrongObject(f"symbol {base} lives on {known}, not {home}")
        return FormalElem.gen(base, self.cat.identity[home])

    def zero(self, e: str) -> FormalElem:
        return FormalElem()

    def one(self, e: str) -> FormalElem:
        return FormalElem.const(1)

    def sigma(self, n: str, x: FormalElem) -> FormalElem:
        return sigma_formal(self.cat, n, x)


def sigma_formal(cat: FinCategory, n: str, x: FormalElem) -> FormalElem:
    """Rewrite each ``Gen(b, m)`` to ``Gen(b, n m)``; constants are untouched."""
    out = []
    for mon, c in x.terms:
        new = []
        for g, k in mon:
            if not cat.composable(n, g.morph):
                raise NotComposable(f"sigma({n}) applied to {format_gen(cat, g)}")
            new.append((Gen(g.base, cat.compose(n, g.morph)), k))
        out.append((_mon_mul(tuple(new), ()), c))
    return FormalElem(out)


def format_gen(cat: FinCategory | None, g: Gen) -> str:
    if cat is not None and cat.is_identity(g.morph):
        return g.base
    if cat is None and g.morph.startswith("id_"):
        return g.base
    return f"{g.base}∘{g.morph}"


def format_formal(x: FormalElem, cat: FinCategory | None = None) -> str:
    if not x.terms:
        return "0"
    parts = []
    for mon, c in x.terms:
        facs = []
        # plain symbols before pulled-back ones
        for g, k in sorted(mon, key=lambda gk: ("∘" in format_gen(cat, gk[0]), gk[0])):
            s = format_gen(cat, g)
            if "∘" in s and (len(mon) > 1 or k > 1):
                s = f"({s})"
            facs.append(s + (f"^{k}" if k > 1 else ""))
        body = " ".join(facs)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c} {body}")
    return " + ".join(parts).replace("+ -", "- ")


_FORMAL_FACTOR = re.compile(r"\s*(?:(?P<num>[0-9]+(?:/[0-9]+)?)|\(\s*(?P<pb>[A-Za-z_][\w']*)\s*(?:∘|\.)\s*(?P<pm>[A-Za-z_][\w']*)\s*\)|(?P<b>[A-Za-z_][\w']*)(?:\s*(?:∘|\.)\s*(?P<m>[A-Za-z_][\w']*))?)\s*")


def parse_formal(text: str, ring: FormalRing, home: str | None) -> FormalElem:
    """Parse a sum of products such as ``f_X g_X' + h_X (f_Y'∘sqr)``.

    A bare symbol lives at ``home``; ``b∘m`` (or ``b.m``) is the symbol ``b``
    pulled back along ``m`` and ``b`` must then live at ``d(m)``.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty formal literal")
    if s[0] not in "+-":
        s = "+" + s
    out = FormalElem()
    pos = 0
    term_re = re.compile(r"\s*([+-])")
    while pos < len(s):
        m = term_re.match(s, pos)
        if not m:
            raise ValueError(f"expected + or - at position {pos} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        pos = m.end()
        term = FormalElem.const(sign)
        nfac = 0
        while pos < len(s) and s[pos] not in "+-":
            f = _FORMAL_FACTOR.match(s, pos)
            if not f or f.end() == pos:
                raise ValueError(f"bad formal factor at position {pos} in {text!r}")
            pos = f.end()
            nfac += 1
            if f.group("num"):
                term = term * FormalElem.const(Fraction(f.group("num")))
                continue
            base = f.group("pb") or f.group("b")
            morph = f.group("pm") or f.group("m")
            if morph is None:
                if home is None:
                    raise ValueError(f"symbol {base} needs a home object")
                term = term * ring.symbol(base, home)
            else:
                d = ring.cat.dom(morph)
                ring.symbol(base, d)
                term = term * FormalElem.gen(base, morph)
        if nfac == 0:
            raise ValueError(f"empty term in {text!r}")
        out = out + term
    return out
