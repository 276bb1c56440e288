"""Worked instances defined in code: the square/root/absolute-value system and small groups."""

from __future__ import annotations

from itertools import product

from .category import FinCategory, opposite
from .coeff import FormalElem, FormalRing, parse_formal
from .dynsys import FinDynSys, PartialMap, PartialSystem, from_group_action, partial_to_category_system
from .skewalg import SkewAlgebra

# Partial composition table of the maps themselves, ``row o column``; None marks
# the undefined entries.
SQR_TABLE_ROWS = ("id_X", "id_Y", "sqr", "sqrt", "abs")
SQR_TABLE = {
    "id_X": ("id_X", None, None, "sqrt", "abs"),
    "id_Y": (None, "id_Y", "sqr", None, None),
    "sqr": ("sqr", None, None, "id_Y", "sqr"),
    "sqrt": (None, "sqrt", "abs", None, None),
    "abs": ("abs", None, None, "sqrt", "abs"),
}


def sqr_maps_category() -> FinCategory:
    """The category of maps: ``sqr: X -> Y``, ``sqrt: Y -> X``, ``abs: X -> X``."""
    morphisms = {"sqr": ("X", "Y"), "sqrt": ("Y", "X"), "abs": ("X", "X")}
    table = {}
    for row, entries in SQR_TABLE.items():
        for col, val in zip(SQR_TABLE_ROWS, entries):
            if val is not None:
                table[row, col] = val
    return FinCategory(["X", "Y"], morphisms, table)


def sqr_category() -> FinCategory:
    """The opposite of :func:`sqr_maps_category`; coefficients of ``u_sqr`` live on X."""
    return opposite(sqr_maps_category())


DISCRETE_X = (-1, 0, 1)
DISCRETE_Y = (0, 1)


def sqr_partial_system() -> PartialSystem:
    X, Y = frozenset(DISCRETE_X), frozenset(DISCRETE_Y)
    maps = (
        PartialMap.make("sqr", X, Y, {x: x * x for x in DISCRETE_X}),
        PartialMap.make("sqrt", Y, X, {y: y for y in DISCRETE_Y}),
        PartialMap.make("abs", X, X, {x: abs(x) for x in DISCRETE_X}),
    )
    return PartialSystem(DISCRETE_X, maps, {X: "X", Y: "Y"})


def sqr_discrete_system() -> FinDynSys:
    """X = {-1, 0, 1}, Y = {0, 1} with the evident square, root and absolute value."""
    cat = sqr_category()
    action = {
        "sqr": {x: x * x for x in DISCRETE_X},
        "sqrt": {y: y for y in DISCRETE_Y},
        "abs": {x: abs(x) for x in DISCRETE_X},
    }
    return FinDynSys(cat, {"X": DISCRETE_X, "Y": DISCRETE_Y}, action)


def sqr_discrete_from_partial() -> FinDynSys:
    from .dynsys import close_partial_system

    return partial_to_category_system(close_partial_system(sqr_partial_system()))


# -- symbolic product ----------------------------------------------------------

SYMBOLIC_FACTORS = {
    "B1": [("id_X", "f_X"), ("abs", "g_X"), ("sqr", "h_X"), ("id_Y", "f_Y"), ("sqrt", "g_Y")],
    "B2": [("id_X", "f_X'"), ("abs", "g_X'"), ("sqr", "h_X'"), ("id_Y", "f_Y'"), ("sqrt", "g_Y'")],
}

# Expected coefficients of B1 B2, transcribed term by term.
SYMBOLIC_PRODUCT = {
    "id_X": "f_X f_X'",
    "abs": "f_X g_X' + g_X (f_X'∘abs) + g_X (g_X'∘abs) + h_X (g_Y'∘sqr)",
    "sqr": "f_X h_X' + h_X (f_Y'∘sqr) + g_X (h_X'∘abs)",
    "id_Y": "f_Y f_Y' + g_Y (h_X'∘sqrt)",
    "sqrt": "f_Y g_Y' + g_Y (f_X'∘sqrt) + g_Y (g_X'∘sqrt)",
}


def symbolic_algebra() -> SkewAlgebra:
    cat = sqr_category()
    return SkewAlgebra(cat, FormalRing(cat))


def symbolic_factor(alg: SkewAlgebra, name: str):
    ring: FormalRing = alg.coeffs
    terms = {}
    for n, sym in SYMBOLIC_FACTORS[name]:
        terms[n] = ring.symbol(sym, alg.cat.cod(n))
    return alg.element(terms)


def expected_symbolic_product(alg: SkewAlgebra) -> dict[str, FormalElem]:
    return {n: parse_formal(text, alg.coeffs, alg.cat.cod(n)) for n, text in SYMBOLIC_PRODUCT.items()}


# -- small groups --------------------------------------------------------------


def cyclic_group(n: int):
    """Elements ``g0..g{n-1}`` with ``g0`` the unit."""
    els = [f"g{i}" for i in range(n)]
    mul = {(f"g{i}", f"g{j}"): f"g{(i + j) % n}" for i in range(n) for j in range(n)}
    inv = {f"g{i}": f"g{(-i) % n}" for i in range(n)}
    return els, mul, inv, "g0"


def z2_swap_system() -> FinDynSys:
    els, mul, inv, unit = cyclic_group(2)
    act = {"g0": {0: 0, 1: 1}, "g1": {0: 1, 1: 0}}
    return from_group_action(els, mul, inv, unit, [0, 1], act)


def z2_trivial_point_system() -> FinDynSys:
    els, mul, inv, unit = cyclic_group(2)
    act = {"g0": {0: 0}, "g1": {0: 0}}
    return from_group_action(els, mul, inv, unit, [0], act)


def z4_mod2_system() -> FinDynSys:
    """Z/4 acting on {0, 1} through its quotient Z/2."""
    els, mul, inv, unit = cyclic_group(4)
    act = {f"g{i}": {0: i % 2, 1: (1 + i) % 2} for i in range(4)}
    return from_group_action(els, mul, inv, unit, [0, 1], act)


def const_monoid_system() -> FinDynSys:
    """The monoid ``{id, const0}`` of self-maps of {0, 1}."""
    from .dynsys import transformation_system

    return transformation_system([0, 1], {"const0": {0: 0, 1: 0}})


def permutation_group(degree: int, generators):
    """Closure of permutations (tuples) under composition; names ``p0`` (unit), ``p1``..."""
    ident = tuple(range(degree))
    elems = [ident]
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in generators]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(g[a[i]] for i in range(degree))
                if c not in seen:
                    seen.add(c)
                    elems.append(c)
                    nxt.append(c)
        frontier = nxt
    names = {p: f"p{i}" for i, p in enumerate(elems)}
    mul = {}
    for a, b in product(elems, repeat=2):
        # (a b)(i) = a(b(i))
        mul[names[a], names[b]] = names[tuple(a[b[i]] for i in range(degree))]
    inv = {}
    for a in elems:
        ai = [0] * degree
        for i, v in enumerate(a):
            ai[v] = i
        inv[names[a]] = names[tuple(ai)]
    return [names[p] for p in elems], mul, inv, names[ident], {names[p]: p for p in elems}
