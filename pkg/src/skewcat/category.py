"""Finite categories given by explicit composition tables.

A morphism ``n`` has a domain ``d(n)`` and a codomain ``c(n)``.  The product
``compose(m, m2)`` is ``m`` after ``m2`` and is defined exactly when
``d(m) == c(m2)``; it has domain ``d(m2)`` and codomain ``c(m)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

ID_PREFIX = "id_"


class CategoryError(Exception):
    pass


class NotComposable(CategoryError):
    pass


class UnknownObject(CategoryError):
    pass


class UnknownMorphism(CategoryError):
    pass


@dataclass(frozen=True)
class Violation:
    """One failed category or action law, with the morphisms that witness it."""

    kind: str
    witness: tuple
    detail: str = ""

    def __str__(self) -> str:
        w = ",".join(str(x) for x in self.witness)
        return f"{self.kind}({w})" + (f": {self.detail}" if self.detail else "")


class FinCategory:
    """A small category with finitely many objects and morphisms.

    ``morphisms`` maps each name to ``(dom, cod)`` and its insertion order is
    the canonical morphism order.  Identities missing from ``identities`` are
    synthesized as ``id_<object>``; table entries involving identities are
    filled in when absent.  Explicit entries are kept verbatim, so a wrong
    entry surfaces through :func:`validate_category` instead of being masked.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Mapping[str, tuple[str, str]],
        table: Mapping[tuple[str, str], str],
        identities: Mapping[str, str] | None = None,
    ):
        self.objects: tuple[str, ...] = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise CategoryError("duplicate object names")
        identities = dict(identities or {})
        mors: dict[str, tuple[str, str]] = {}
        for e in self.objects:
            if not e:
                raise CategoryError("empty object name")
            name = identities.setdefault(e, ID_PREFIX + e)
            if name in morphisms and tuple(morphisms[name]) != (e, e):
                raise CategoryError(f"identity {name} must be an endomorphism of {e}")
            mors[name] = (e, e)
        for name, (d, c) in morphisms.items():
            if not name:
                raise CategoryError("empty morphism name")
            if d not in identities or c not in identities:
                raise UnknownObject(f"morphism {name}: {d} -> {c} uses an undeclared object")
            mors.setdefault(name, (d, c))
        # identities first, then the declared order of the remaining morphisms
        order = [identities[e] for e in self.objects]
        order += [n for n in morphisms if n not in order]
        self._dc: dict[str, tuple[str, str]] = {n: mors[n] for n in order}
        self.morphisms: tuple[str, ...] = tuple(order)
        self.identity: dict[str, str] = {e: identities[e] for e in self.objects}
        self._id_set = frozenset(self.identity.values())
        self.index = {n: i for i, n in enumerate(self.morphisms)}

        tab = {tuple(k): v for k, v in table.items()}
        for n in self.morphisms:
            d, c = self._dc[n]
            tab.setdefault((self.identity[c], n), n)
            tab.setdefault((n, self.identity[d]), n)
        self.table: dict[tuple[str, str], str] = tab

    # -- structure -------------------------------------------------------
    def dom(self, n: str) -> str:
        try:
            return self._dc[n][0]
        except KeyError:
            raise UnknownMorphism(n) from None

    def cod(self, n: str) -> str:
        try:
            return self._dc[n][1]
        except KeyError:
            raise UnknownMorphism(n) from None

    def is_identity(self, n: str) -> bool:
        return n in self._id_set

    def composable(self, m: str, m2: str) -> bool:
        return self.dom(m) == self.cod(m2)

    def compose(self, m: str, m2: str) -> str:
        if not self.composable(m, m2):
            raise NotComposable(f"{m} . {m2}: d({m})={self.dom(m)} but c({m2})={self.cod(m2)}")
        try:
            return self.table[m, m2]
        except KeyError:
            raise CategoryError(f"composition table has no entry for {m} . {m2}") from None

    def composable_pairs(self):
        """All ``(m, m2)`` with ``d(m) == c(m2)``, in canonical order."""
        return [(m, m2) for m, m2 in product(self.morphisms, repeat=2) if self.composable(m, m2)]

    def hom(self, src: str, dst: str) -> list[str]:
        return [n for n in self.morphisms if self._dc[n] == (src, dst)]

    def endomorphisms(self, e: str) -> list[str]:
        if e not in self.identity:
            raise UnknownObject(e)
        return self.hom(e, e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self._dc == other._dc
            and self.identity == other.identity
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.objects, self.morphisms))

    def __repr__(self) -> str:
        return f"FinCategory(objects={list(self.objects)}, morphisms={len(self.morphisms)})"


def validate_category(cat: FinCategory) -> list[Violation]:
    """Check the composition table against the category axioms.

    Returns every violation found; an empty list means the table is a category.
    """
    out: list[Violation] = []
    mors = cat.morphisms
    known = set(mors)
    for (m, m2), n in cat.table.items():
        if m not in known or m2 not in known or n not in known:
            out.append(Violation("unknown-morphism", (m, m2, n)))
            continue
        if not cat.composable(m, m2):
            out.append(Violation("defined-on-noncomposable", (m, m2), f"= {n}"))
            continue
        if cat.dom(n) != cat.dom(m2) or cat.cod(n) != cat.cod(m):
            out.append(
                Violation(
                    "composite-dom-cod",
                    (m, m2, n),
                    f"expected {cat.dom(m2)} -> {cat.cod(m)}, got {cat.dom(n)} -> {cat.cod(n)}",
                )
            )
    for m, m2 in product(mors, repeat=2):
        if cat.composable(m, m2) and (m, m2) not in cat.table:
            out.append(Violation("missing-composite", (m, m2)))
    for n in mors:
        left = cat.table.get((cat.identity[cat.cod(n)], n))
        right = cat.table.get((n, cat.identity[cat.dom(n)]))
        if left != n:
            out.append(Violation("left-identity", (cat.identity[cat.cod(n)], n), f"= {left}"))
        if right != n:
            out.append(Violation("right-identity", (n, cat.identity[cat.dom(n)]), f"= {right}"))
    tab = cat.table
    for m, n in product(mors, repeat=2):
        mn = tab.get((m, n))
        if mn is None or mn not in known or not cat.composable(m, n):
            continue
        for p in mors:
            if not cat.composable(n, p):
                continue
            np_ = tab.get((n, p))
            if np_ is None or np_ not in known:
                continue
            lhs = tab.get((mn, p))
            rhs = tab.get((m, np_))
            if lhs != rhs:
                out.append(Violation("associativity", (m, n, p), f"(mn)p={lhs}, m(np)={rhs}"))
    return out


def is_groupoid(cat: FinCategory) -> dict[str, str] | None:
    """Return the inverse table if every morphism is an isomorphism, else None."""
    inv: dict[str, str] = {}
    for n in cat.morphisms:
        d, c = cat.dom(n), cat.cod(n)
        found = None
        for k in cat.hom(c, d):
            if cat.compose(n, k) == cat.identity[c] and cat.compose(k, n) == cat.identity[d]:
                found = k
                break
        if found is None:
            return None
        inv[n] = found
    return inv


@dataclass(frozen=True)
class EndoMonoid:
    object: str
    identity: str
    elements: tuple[str, ...]
    table: dict = field(hash=False, compare=True)

    def mul(self, m: str, n: str) -> str:
        return self.table[m, n]

    def __len__(self) -> int:
        return len(self.elements)


def endo_monoid(cat: FinCategory, e: str) -> EndoMonoid:
    elems = tuple(cat.endomorphisms(e))
    table = {(m, n): cat.compose(m, n) for m in elems for n in elems}
    return EndoMonoid(e, cat.identity[e], elems, table)


def is_divisible(mon: EndoMonoid) -> bool:
    """For distinct ``m, n`` some ``p`` has ``m == n p`` or ``n == m p``."""
    els = mon.elements
    for i, m in enumerate(els):
        for n in els[i + 1:]:
            if not any(mon.mul(n, p) == m or mon.mul(m, p) == n for p in els):
                return False
    return True


def opposite(cat: FinCategory) -> FinCategory:
    morphisms = {n: (cat.cod(n), cat.dom(n)) for n in cat.morphisms}
    table = {(m2, m): n for (m, m2), n in cat.table.items()}
    return FinCategory(cat.objects, morphisms, table, identities=cat.identity)


def group_category(
    elements: Iterable[str], mul: Mapping[tuple[str, str], str], unit: str, obj: str = "*"
) -> FinCategory:
    """One-object category whose morphisms are the elements of a group or monoid."""
    elements = list(elements)
    morphisms = {g: (obj, obj) for g in elements}
    return FinCategory([obj], morphisms, dict(mul), identities={obj: unit})
