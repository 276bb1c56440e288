"""Skew category algebras: finite formal sums ``sum a_n u_n`` with ``a_n`` in ``A_c(n)``.

The product of ``a u_m`` and ``b u_m2`` is ``a sigma(m)(b) u_(m m2)`` when
``d(m) == c(m2)`` and zero otherwise.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .category import FinCategory, is_groupoid
from .coeff import FnRingElem, FormalElem, FormalRing, FunctionRing, PolyElem, format_formal, sigma_poly


class ContextMismatch(Exception):
    pass


class NotGroupoid(Exception):
    pass


class ZeroElement(Exception):
    pass


class TruncationExceeded(Exception):
    pass


class SkewAlgebra:
    """``A ⋊ G`` for a category ``cat`` and a coefficient system ``coeffs``.

    ``coeffs`` provides ``zero(e)``, ``one(e)`` and ``sigma(n, a)``; a
    :class:`FunctionRing` additionally gives the indicator basis used by the
    linear-algebra routines.
    """

    def __init__(self, cat: FinCategory, coeffs):
        self.cat = cat
        self.coeffs = coeffs
        self._inverse: dict | None | bool = False
        self._coords = None
        self._basis_products = None

    @classmethod
    def of_system(cls, sys, scalars, constants_only: bool = False) -> "SkewAlgebra":
        return cls(sys.cat, FunctionRing(sys, scalars, constants_only))

    @property
    def sys(self):
        return getattr(self.coeffs, "sys", None)

    @property
    def scalars(self):
        return self.coeffs.scalars

    @property
    def is_formal(self) -> bool:
        return isinstance(self.coeffs, FormalRing)

    @property
    def inverse(self) -> dict | None:
        if self._inverse is False:
            self._inverse = is_groupoid(self.cat)
        return self._inverse

    # -- construction ------------------------------------------------------
    def element(self, terms: Mapping | Iterable) -> "SkewElem":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[str, object] = {}
        for n, a in items:
            if n in acc:
                acc[n] = acc[n] + a
            else:
                acc[n] = a
        return SkewElem(self, acc)

    def zero(self) -> "SkewElem":
        return SkewElem(self, {})

    def u(self, n: str, a=None) -> "SkewElem":
        """``a u_n``; ``a`` defaults to the unit of ``A_c(n)``."""
        if a is None:
            a = self.coeffs.one(self.cat.cod(n))
        return SkewElem(self, {n: a})

    def identity_element(self) -> "SkewElem":
        return SkewElem(self, {self.cat.identity[e]: self.coeffs.one(e) for e in self.cat.objects})

    def local_unit(self, objs: Iterable[str]) -> "SkewElem":
        return SkewElem(self, {self.cat.identity[e]: self.coeffs.one(e) for e in objs})

    # -- indicator coordinates (function rings only) -------------------------
    @property
    def coords(self) -> list[tuple[str, object]]:
        """Basis ``chi_x u_n`` ordered by object of ``c(n)``, then morphism, then point."""
        if self._coords is None:
            if not isinstance(self.coeffs, FunctionRing) or self.coeffs.constants_only:
                raise TypeError("indicator coordinates need a full function ring")
            cat, sys = self.cat, self.sys
            obj_ix = {e: i for i, e in enumerate(cat.objects)}
            mors = sorted(cat.morphisms, key=lambda n: (obj_ix[cat.cod(n)], cat.index[n]))
            self._coords = [(n, x) for n in mors for x in sys.space[cat.cod(n)]]
            self._coord_index = {c: i for i, c in enumerate(self._coords)}
        return self._coords

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def a_coords(self) -> list[int]:
        """Indices of the coordinates spanning ``A`` (identity morphisms)."""
        return [i for i, (n, _) in enumerate(self.coords) if self.cat.is_identity(n)]

    def to_vector(self, x: "SkewElem") -> tuple:
        F = self.scalars
        v = [F.zero] * self.dim
        self.coords  # builds the index
        ix = self._coord_index
        for n, a in x.terms:
            for pt, val in zip(a.points, a.values):
                v[ix[n, pt]] = val
        return tuple(v)

    def from_vector(self, v) -> "SkewElem":
        R = self.coeffs
        vals: dict[str, list] = {}
        for (n, pt), c in zip(self.coords, v):
            vals.setdefault(n, []).append(c)
        return SkewElem(self, {n: R.element(self.cat.cod(n), cs) for n, cs in vals.items()})

    def basis(self) -> list["SkewElem"]:
        R = self.coeffs
        return [self.u(n, R.indicator(self.cat.cod(n), x)) for n, x in self.coords]

    def a_basis(self) -> list["SkewElem"]:
        R = self.coeffs
        return [self.u(n, R.indicator(self.cat.cod(n), x)) for n, x in self.coords if self.cat.is_identity(n)]

    def basis_products(self) -> list[list[int | None]]:
        """``table[i][j]`` is the coordinate index of ``b_i b_j``, or None when zero.

        Products of indicator basis elements are again basis elements or zero
        (coefficients lie in {0, 1}); this is checked as the table is built.
        """
        if self._basis_products is None:
            B = self.basis()
            one = self.scalars.one
            table = []
            for bi in B:
                row = []
                for bj in B:
                    v = self.to_vector(bi * bj)
                    nz = [k for k, c in enumerate(v) if c != self.scalars.zero]
                    if not nz:
                        row.append(None)
                    else:
                        assert len(nz) == 1 and v[nz[0]] == one
                        row.append(nz[0])
                table.append(row)
            self._basis_products = table
        return self._basis_products

    def random_element(self, rng, density: float = 0.5) -> "SkewElem":
        R = self.coeffs
        terms = {}
        for n in self.cat.morphisms:
            if rng.random() < density:
                terms[n] = R.random(self.cat.cod(n), rng)
        return SkewElem(self, terms)

    def format_coeff(self, a) -> str:
        if isinstance(a, FormalElem):
            s = format_formal(a, self.cat)
            return f"({s})" if len(a.terms) > 1 else s
        return repr(a)


class SkewElem:
    """An immutable element of a :class:`SkewAlgebra`.

    ``terms`` is a tuple of ``(morphism, coefficient)`` sorted by morphism
    index with zero coefficients removed.
    """

    __slots__ = ("alg", "terms", "_map")

    def __init__(self, alg: SkewAlgebra, terms: Mapping[str, object]):
        self.alg = alg
        idx = alg.cat.index
        items = [(n, a) for n, a in terms.items() if not a.is_zero()]
        items.sort(key=lambda t: idx[t[0]])
        self.terms: tuple = tuple(items)
        self._map = dict(items)

    def coeff(self, n: str):
        a = self._map.get(n)
        return a if a is not None else self.alg.coeffs.zero(self.alg.cat.cod(n))

    @property
    def support(self) -> list[str]:
        return [n for n, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other) -> None:
        if not isinstance(other, SkewElem) or other.alg is not self.alg:
            raise ContextMismatch("elements of different skew algebras")

    def __add__(self, other: "SkewElem") -> "SkewElem":
        self._check(other)
        acc = dict(self._map)
        for n, b in other.terms:
            acc[n] = acc[n] + b if n in acc else b
        return SkewElem(self.alg, acc)

    def __neg__(self) -> "SkewElem":
        return SkewElem(self.alg, {n: -a for n, a in self.terms})

    def __sub__(self, other: "SkewElem") -> "SkewElem":
        return self + (-other)

    def __mul__(self, other: "SkewElem") -> "SkewElem":
        return mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewElem):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{self.alg.format_coeff(a)} u[{n}]" for n, a in self.terms)


def add(x: SkewElem, y: SkewElem) -> SkewElem:
    return x + y


def mul(x: SkewElem, y: SkewElem) -> SkewElem:
    """Sum over composable support pairs ``(m, m2)`` of ``a_m sigma(m)(b_m2) u_(m m2)``."""
    x._check(y)
    alg = x.alg
    cat, sigma = alg.cat, alg.coeffs.sigma
    acc: dict[str, object] = {}
    for m, a in x.terms:
        dm = cat.dom(m)
        for m2, b in y.terms:
            if cat.cod(m2) != dm:
                continue
            n = cat.compose(m, m2)
            t = a * sigma(m, b)
            acc[n] = acc[n] + t if n in acc else t
    return SkewElem(alg, acc)


def mul_groupoid(x: SkewElem, y: SkewElem) -> SkewElem:
    """Groupoid product: coefficient of ``u_n`` is ``sum_{c(m)=c(n)} a_m sigma(m)(b_(m^-1 n))``."""
    x._check(y)
    alg = x.alg
    inv = alg.inverse
    if inv is None:
        raise NotGroupoid("the category has a non-invertible morphism")
    cat, sigma = alg.cat, alg.coeffs.sigma
    out: dict[str, object] = {}
    for n in cat.morphisms:
        cn = cat.cod(n)
        total = None
        for m, a in x.terms:
            if cat.cod(m) != cn:
                continue
            b = y._map.get(cat.compose(inv[m], n))
            if b is None:
                continue
            t = a * sigma(m, b)
            total = t if total is None else total + t
        if total is not None:
            out[n] = total
    return SkewElem(alg, out)


def dom(x: SkewElem) -> set[str]:
    return {x.alg.cat.dom(n) for n, _ in x.terms}


def cod(x: SkewElem) -> set[str]:
    return {x.alg.cat.cod(n) for n, _ in x.terms}


def left_unit(x: SkewElem) -> SkewElem:
    """``sum_{e in cod(x)} 1_e u_e``."""
    if x.is_zero():
        raise ZeroElement("left unit of zero")
    cat = x.alg.cat
    return x.alg.local_unit(e for e in cat.objects if e in cod(x))


def right_unit(x: SkewElem) -> SkewElem:
    if x.is_zero():
        raise ZeroElement("right unit of zero")
    cat = x.alg.cat
    return x.alg.local_unit(e for e in cat.objects if e in dom(x))


def identity_element(alg: SkewAlgebra) -> SkewElem:
    return alg.identity_element()


def grading_check(x: SkewElem, y: SkewElem) -> bool:
    """Homogeneous ``x``, ``y``: the product lives in degree ``m m2`` or is zero.

    Zero factors are homogeneous of every degree and pass trivially.
    """
    if len(x.terms) > 1 or len(y.terms) > 1:
        raise ValueError("grading_check needs homogeneous elements")
    p = x * y
    if x.is_zero() or y.is_zero():
        return p.is_zero()
    cat = x.alg.cat
    (m, _), (m2, _) = x.terms[0], y.terms[0]
    if not cat.composable(m, m2):
        return p.is_zero()
    return set(p.support) <= {cat.compose(m, m2)}


# -- the degree-truncated monoid algebra Q[X] ⋊ N ---------------------------


class NatSkewAlgebra:
    """``Q[X] ⋊ N`` with ``sigma(n)(p)(X) = p(z^n X)``, kept to degrees ``<= bound``.

    Products that would leave the truncation raise :class:`TruncationExceeded`.
    """

    def __init__(self, z=2, bound: int = 8):
        self.z = z
        self.bound = bound

    def element(self, terms: Mapping[int, PolyElem]) -> "NatSkewElem":
        return NatSkewElem(self, terms)

    def u(self, n: int, p: PolyElem | None = None) -> "NatSkewElem":
        return NatSkewElem(self, {n: p if p is not None else PolyElem([1])})

    def random_element(self, rng, max_poly_degree: int = 8, coeff_bound: int = 5) -> "NatSkewElem":
        terms = {}
        for n in range(self.bound + 1):
            if rng.random() < 0.5:
                deg = rng.randint(0, max_poly_degree)
                terms[n] = PolyElem(rng.randint(-coeff_bound, coeff_bound) for _ in range(deg + 1))
        return NatSkewElem(self, terms)


class NatSkewElem:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: NatSkewAlgebra, terms: Mapping[int, PolyElem]):
        for n in terms:
            if not 0 <= n <= alg.bound:
                raise TruncationExceeded(f"degree {n} outside 0..{alg.bound}")
        self.alg = alg
        self.terms = {n: p for n, p in sorted(terms.items()) if not p.is_zero()}

    def coeff(self, n: int) -> PolyElem:
        return self.terms.get(n, PolyElem())

    def __add__(self, other):
        acc = dict(self.terms)
        for n, p in other.terms.items():
            acc[n] = acc[n] + p if n in acc else p
        return NatSkewElem(self.alg, acc)

    def __mul__(self, other):
        if other.alg is not self.alg:
            raise ContextMismatch("different truncated algebras")
        acc: dict[int, PolyElem] = {}
        for m, a in self.terms.items():
            for m2, b in other.terms.items():
                n = m + m2
                if n > self.alg.bound:
                    raise TruncationExceeded(f"product reaches degree {n} > {self.alg.bound}")
                t = a * sigma_poly(m, self.alg.z, b)
                acc[n] = acc[n] + t if n in acc else t
        return NatSkewElem(self.alg, acc)

    def __eq__(self, other):
        return isinstance(other, NatSkewElem) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({p}) u[{n}]" for n, p in self.terms.items())
