"""Finite discrete category dynamical systems and partially defined systems.

A system assigns a finite point set ``space[e]`` to each object and a set map
``action[n]: space[c(n)] -> space[d(n)]`` to each morphism, contravariantly:
``action[m n] == action[n] o action[m]``.  All spaces are discrete, so a
subset is dense only when it is the whole space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .category import (
    CategoryError,
    FinCategory,
    UnknownObject,
    Violation,
    opposite,
    validate_category,
)

Point = Hashable


class NotEndomorphism(CategoryError):
    pass


class UnknownPoint(CategoryError):
    pass


class NotClosed(CategoryError):
    pass


class FinDynSys:
    def __init__(
        self,
        cat: FinCategory,
        space: Mapping[str, Iterable[Point]],
        action: Mapping[str, Mapping[Point, Point]],
    ):
        self.cat = cat
        self.space: dict[str, tuple] = {e: tuple(space[e]) for e in cat.objects}
        act = {n: dict(f) for n, f in action.items()}
        for e in cat.objects:
            act.setdefault(cat.identity[e], {x: x for x in self.space[e]})
        self.action: dict[str, dict] = act
        self.point_index = {e: {x: i for i, x in enumerate(pts)} for e, pts in self.space.items()}

    def s(self, n: str, x: Point) -> Point:
        return self.action[n][x]

    def __repr__(self) -> str:
        sizes = {e: len(p) for e, p in self.space.items()}
        return f"FinDynSys({self.cat!r}, spaces={sizes})"


def validate_action(sys: FinDynSys) -> list[Violation]:
    """Check identities, typing of each map and the contravariant functor law."""
    cat = sys.cat
    out: list[Violation] = []
    for n in cat.morphisms:
        f = sys.action.get(n)
        if f is None:
            out.append(Violation("missing-map", (n,)))
            continue
        src, dst = sys.space[cat.cod(n)], set(sys.space[cat.dom(n)])
        for x in src:
            if x not in f:
                out.append(Violation("map-not-total", (n, x)))
            elif f[x] not in dst:
                out.append(Violation("map-off-target", (n, x), f"-> {f[x]!r}"))
        extra = set(f) - set(src)
        if extra:
            out.append(Violation("map-extra-points", (n,), repr(sorted(map(repr, extra)))))
    for e in cat.objects:
        i = cat.identity[e]
        for x in sys.space[e]:
            if sys.action.get(i, {}).get(x) != x:
                out.append(Violation("identity-action", (i, x)))
    if out:
        return out
    for m, n in cat.composable_pairs():
        mn = cat.table.get((m, n))
        if mn is None:
            continue
        sm, sn, smn = sys.action[m], sys.action[n], sys.action[mn]
        for x in sys.space[cat.cod(m)]:
            if smn[x] != sn[sm[x]]:
                out.append(Violation("functor-law", (m, n, x), f"s({mn})={smn[x]!r}, s({n})s({m})={sn[sm[x]]!r}"))
    return out


def _check_endo(sys: FinDynSys, e: str, n: str) -> None:
    if e not in sys.space:
        raise UnknownObject(e)
    if sys.cat.dom(n) != e or sys.cat.cod(n) != e:
        raise NotEndomorphism(f"{n} is not an endomorphism of {e}")


def per_set(sys: FinDynSys, e: str, n: str) -> frozenset:
    """Points of ``space[e]`` fixed by ``s(n)``."""
    _check_endo(sys, e, n)
    f = sys.action[n]
    return frozenset(x for x in sys.space[e] if f[x] == x)


def sep_set(sys: FinDynSys, e: str, n: str) -> frozenset:
    """Points of ``space[e]`` moved by ``s(n)``."""
    _check_endo(sys, e, n)
    f = sys.action[n]
    return frozenset(x for x in sys.space[e] if f[x] != x)


def per_A_set(sys: FinDynSys, ring, e: str, n: str) -> frozenset:
    """Points where every coefficient function agrees with its twist by ``n``.

    ``ring`` supplies ``basis(e)`` and ``sigma(n, f)``; the defining condition
    is linear in the function, so quantifying over a spanning set suffices.
    """
    _check_endo(sys, e, n)
    basis = [(f, ring.sigma(n, f)) for f in ring.basis(e)]
    return frozenset(x for x in sys.space[e] if all(f(x) == g(x) for f, g in basis))


def sep_A_set(sys: FinDynSys, ring, e: str, n: str) -> frozenset:
    _check_endo(sys, e, n)
    basis = [(f, ring.sigma(n, f)) for f in ring.basis(e)]
    return frozenset(x for x in sys.space[e] if any(f(x) != g(x) for f, g in basis))


def aperiodic_set(sys: FinDynSys, e: str) -> frozenset:
    """Intersection of the moved-point sets over nonidentity endomorphisms of e.

    With no nonidentity endomorphism the intersection is the whole space.
    """
    pts = frozenset(sys.space[e]) if e in sys.space else None
    if pts is None:
        raise UnknownObject(e)
    for n in sys.cat.endomorphisms(e):
        if not sys.cat.is_identity(n):
            pts &= sep_set(sys, e, n)
    return pts


@dataclass
class FreenessReport:
    free: bool
    witnesses: list[tuple[str, Point, str]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.free


def topological_freeness(sys: FinDynSys) -> FreenessReport:
    """Freeness with every periodic point listed as ``(object, point, morphism)``."""
    wit = []
    for e in sys.cat.objects:
        ap = aperiodic_set(sys, e)
        for x in sys.space[e]:
            if x in ap:
                continue
            for n in sys.cat.endomorphisms(e):
                if not sys.cat.is_identity(n) and sys.action[n][x] == x:
                    wit.append((e, x, n))
                    break
    return FreenessReport(not wit, wit)


def is_topologically_free(sys: FinDynSys) -> bool:
    return all(aperiodic_set(sys, e) == frozenset(sys.space[e]) for e in sys.cat.objects)


def orbit(sys: FinDynSys, e: str, x: Point) -> frozenset:
    if e not in sys.space:
        raise UnknownObject(e)
    if x not in sys.point_index[e]:
        raise UnknownPoint(f"{x!r} is not a point of {e}")
    return frozenset(sys.action[n][x] for n in sys.cat.endomorphisms(e))


# -- constructors ----------------------------------------------------------


def from_group_action(
    elements: Iterable[str],
    mul: Mapping[tuple[str, str], str],
    inverse: Mapping[str, str],
    unit: str,
    points: Iterable[Point],
    act: Mapping[str, Mapping[Point, Point]],
    obj: str = "*",
) -> FinDynSys:
    """Turn a left action ``act[g]`` of a finite group into a system.

    The system map of ``h`` is ``act[h^-1]``, which converts the left action
    into the contravariant convention used here.
    """
    from .category import group_category

    cat = group_category(elements, mul, unit, obj)
    action = {h: dict(act[inverse[h]]) for h in cat.morphisms}
    return FinDynSys(cat, {obj: list(points)}, action)


@dataclass(frozen=True)
class PartialMap:
    name: str
    dom: frozenset
    cod: frozenset
    graph: tuple  # sorted (x, f(x)) pairs

    @staticmethod
    def make(name: str, dom: Iterable, cod: Iterable, graph: Mapping) -> "PartialMap":
        return PartialMap(name, frozenset(dom), frozenset(cod), tuple(sorted(graph.items(), key=_pkey)))

    @property
    def fn(self) -> dict:
        return dict(self.graph)

    @property
    def key(self) -> tuple:
        return (self.dom, self.cod, self.graph)

    def is_identity(self) -> bool:
        return self.dom == self.cod and all(a == b for a, b in self.graph)


def _pkey(item):
    x = item[0] if isinstance(item, tuple) else item
    return (type(x).__name__, x) if not isinstance(x, (int, float)) else ("", x)


def _sorted_points(pts: Iterable) -> list:
    return sorted(pts, key=lambda x: _pkey((x,)))


@dataclass
class PartialSystem:
    """A family of maps between subsets of a finite ambient set.

    ``set_names`` optionally names the subsets; unnamed subsets are printed
    as ``{a,b}``.
    """

    ambient: tuple
    maps: tuple[PartialMap, ...]
    set_names: dict = field(default_factory=dict)

    def name_of(self, s: frozenset) -> str:
        if s in self.set_names:
            return self.set_names[s]
        return "{" + ",".join(str(x) for x in _sorted_points(s)) + "}"

    def check(self) -> list[str]:
        errs = []
        amb = set(self.ambient)
        for f in self.maps:
            fn = f.fn
            if not f.dom <= amb or not f.cod <= amb:
                errs.append(f"{f.name}: domain or codomain not inside the ambient set")
            if set(fn) != set(f.dom):
                errs.append(f"{f.name}: graph is not total on its domain")
            if any(v not in f.cod for v in fn.values()):
                errs.append(f"{f.name}: graph leaves its codomain")
        return errs


def _compose_maps(f: PartialMap, g: PartialMap, name: str) -> PartialMap:
    ff, gg = f.fn, g.fn
    return PartialMap.make(name, g.dom, f.cod, {x: ff[gg[x]] for x in g.dom})


def close_partial_system(p: PartialSystem) -> PartialSystem:
    """Least extension containing identities of all (co)domains and all composites.

    Maps are identified by their underlying function (domain, codomain and
    graph); given names win over synthesized ones.
    """
    errs = p.check()
    if errs:
        raise CategoryError("; ".join(errs))
    by_key: dict[tuple, PartialMap] = {}
    for f in p.maps:
        by_key.setdefault(f.key, f)
    changed = True
    while changed:
        changed = False
        current = list(by_key.values())
        sets = {f.dom for f in current} | {f.cod for f in current}
        for s in sorted(sets, key=lambda s: (len(s), _sorted_points(s))):
            ident = PartialMap.make("id_" + p.name_of(s), s, s, {x: x for x in s})
            if ident.key not in by_key:
                by_key[ident.key] = ident
                changed = True
        current = list(by_key.values())
        for f in current:
            for g in current:
                if f.dom != g.cod:
                    continue
                h = _compose_maps(f, g, f"{f.name}∘{g.name}")
                if h.key not in by_key:
                    by_key[h.key] = h
                    changed = True
    return PartialSystem(p.ambient, tuple(by_key.values()), dict(p.set_names))


def is_closed(p: PartialSystem) -> bool:
    keys = {f.key for f in p.maps}
    for f in p.maps:
        for s in (f.dom, f.cod):
            if (s, s, tuple(sorted(((x, x) for x in s), key=_pkey))) not in keys:
                return False
        for g in p.maps:
            if f.dom == g.cod and _compose_maps(f, g, "").key not in keys:
                return False
    return True


def partial_periodic_points(p: PartialSystem) -> frozenset:
    """Points fixed by some nonidentity map whose domain equals its codomain."""
    out = set()
    for f in p.maps:
        if f.dom == f.cod and not f.is_identity():
            out |= {x for x, y in f.graph if x == y}
    return frozenset(out)


def partial_is_topologically_free(p: PartialSystem) -> bool:
    return not partial_periodic_points(p)


def partial_to_category_system(p: PartialSystem) -> FinDynSys:
    """The system on the opposite of the category formed by the maps of ``p``.

    In that category ``d(f)`` is the codomain set of ``f`` and ``c(f)`` its
    domain set, and each map acts by its own graph.
    """
    if not is_closed(p):
        raise NotClosed("partial system is not closed under identities and composition")
    sets = []
    for f in p.maps:
        for s in (f.dom, f.cod):
            if s not in sets:
                sets.append(s)
    names = {s: p.name_of(s) for s in sets}
    if len(set(names.values())) != len(names):
        raise CategoryError("two distinct subsets share a name")
    ident = {}
    for f in p.maps:
        if f.is_identity():
            ident[names[f.dom]] = f.name
    by_key = {f.key: f.name for f in p.maps}
    # order: identities by object, then the remaining maps in given order
    morphisms = {f.name: (names[f.dom], names[f.cod]) for f in p.maps}
    if len(morphisms) != len(p.maps):
        raise CategoryError("duplicate map names")
    table = {}
    for f in p.maps:
        for g in p.maps:
            if f.dom == g.cod:
                table[f.name, g.name] = by_key[_compose_maps(f, g, "").key]
    objects = [names[s] for s in sets]
    pcat = FinCategory(objects, morphisms, table, identities=ident)
    cat = opposite(pcat)
    space = {names[s]: _sorted_points(s) for s in sets}
    action = {f.name: f.fn for f in p.maps}
    return FinDynSys(cat, space, action)


def transformation_system(
    points: Iterable[Point], maps: Mapping[str, Mapping[Point, Point]], obj: str = "*"
) -> FinDynSys:
    """One-object system generated by self-maps of a finite set.

    The monoid of maps is closed under composition; ``maps`` supplies names
    for generators and the rest get composite names.
    """
    pts = list(points)
    p = PartialSystem(
        tuple(pts),
        tuple(PartialMap.make(n, pts, pts, f) for n, f in maps.items()),
        {frozenset(pts): obj},
    )
    return partial_to_category_system(close_partial_system(p))


def check_category_and_action(sys: FinDynSys) -> list[Violation]:
    return validate_category(sys.cat) + validate_action(sys)
