"""Seeded random systems for the cross-validation harness.

Every generator builds its category from group multiplication or from
composition of actual set maps, so the category and functor laws hold by
construction.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .category import FinCategory
from .dynsys import (
    FinDynSys,
    PartialMap,
    PartialSystem,
    close_partial_system,
    from_group_action,
    partial_to_category_system,
    transformation_system,
)
from .fixtures import permutation_group

PROFILES = ("group-action", "multi-object-groupoid", "transformation-monoid", "partial-system")


def _quaternion_perms():
    units = [(s, u) for s in (1, -1) for u in "1ijk"]
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def mul(a, b):
        s, u = table[a[1], b[1]]
        return (a[0] * b[0] * s, u)

    idx = {q: n for n, q in enumerate(units)}
    return [tuple(idx[mul(g, q)] for q in units) for g in ((1, "i"), (1, "j"))]


GROUP_GENERATORS = {
    "C1": (1, [(0,)]),
    "C2": (2, [(1, 0)]),
    "C3": (3, [(1, 2, 0)]),
    "C4": (4, [(1, 2, 3, 0)]),
    "V4": (4, [(1, 0, 3, 2), (2, 3, 0, 1)]),
    "C5": (5, [(1, 2, 3, 4, 0)]),
    "C6": (6, [(1, 2, 3, 4, 5, 0)]),
    "S3": (3, [(1, 2, 0), (1, 0, 2)]),
    "C7": (7, [(1, 2, 3, 4, 5, 6, 0)]),
    "C8": (8, [(1, 2, 3, 4, 5, 6, 7, 0)]),
    "C4xC2": (6, [(1, 2, 3, 0, 4, 5), (0, 1, 2, 3, 5, 4)]),
    "C2^3": (6, [(1, 0, 2, 3, 4, 5), (0, 1, 3, 2, 4, 5), (0, 1, 2, 3, 5, 4)]),
    "D4": (4, [(1, 2, 3, 0), (0, 3, 2, 1)]),
    "Q8": (8, _quaternion_perms()),
}


@lru_cache(maxsize=None)
def small_group(name: str):
    """``(elements, mul, inverse, unit, perms)`` for a group in the library."""
    degree, gens = GROUP_GENERATORS[name]
    return permutation_group(degree, gens)


def _subgroup(name: str, seeds) -> frozenset:
    els, mul, _, unit, _ = small_group(name)
    out = {unit}
    frontier = [unit]
    seeds = list(seeds)
    while frontier:
        nxt = []
        for a in frontier:
            for g in seeds:
                c = mul[a, g]
                if c not in out:
                    out.add(c)
                    nxt.append(c)
        frontier = nxt
    return frozenset(out)


def coset_action(name: str, subgroups) -> tuple[list[int], dict]:
    """Left action of the group on the disjoint union of coset spaces ``G/H``."""
    els, mul, _, _, _ = small_group(name)
    cosets = []
    for k, H in enumerate(subgroups):
        seen = []
        for a in els:
            c = frozenset(mul[a, h] for h in H)
            if c not in seen:
                seen.append(c)
        cosets.extend((k, c) for c in seen)
    index = {kc: i for i, kc in enumerate(cosets)}
    act = {}
    for g in els:
        act[g] = {index[k, c]: index[k, frozenset(mul[g, a] for a in c)] for k, c in cosets}
    return list(range(len(cosets))), act


def _random_action(rng: random.Random, group: str, max_orbits: int = 2):
    els = small_group(group)[0]
    subs = []
    for _ in range(rng.randint(1, max_orbits)):
        k = rng.choice((0, 0, 1, 1, 2))
        subs.append(_subgroup(group, rng.sample(els, min(k, len(els)))))
    return coset_action(group, subs)


def _group_action(rng: random.Random) -> FinDynSys:
    name = rng.choice(list(GROUP_GENERATORS))
    els, mul, inv, unit, _ = small_group(name)
    points, act = _random_action(rng, name)
    return from_group_action(els, mul, inv, unit, points, act)


def _groupoid(rng: random.Random) -> FinDynSys:
    objects, morphisms, table, identities = [], {}, {}, {}
    space, action = {}, {}
    for comp in range(rng.choice((1, 1, 2))):
        name = rng.choice(["C1", "C2", "C2", "C3", "C4", "V4", "S3"])
        els, mul, inv, unit, _ = small_group(name)
        points, act = _random_action(rng, name, max_orbits=1 if comp else 2)
        r = rng.randint(1, 2 if comp else 3)
        objs = [f"o{comp}{i}" for i in range(r)]
        perms = []
        for _ in objs:
            p = points[:]
            rng.shuffle(p)
            perms.append(p)  # perms[i][x] relabels abstract point x on object i
        unrel = [{v: x for x, v in enumerate(p)} for p in perms]

        def mname(i, j, h):
            return f"{h}:{objs[i]}<{objs[j]}"

        for i in range(r):
            objects.append(objs[i])
            space[objs[i]] = list(points)
            identities[objs[i]] = mname(i, i, unit)
        for i in range(r):
            for j in range(r):
                for h in els:
                    n = mname(i, j, h)
                    morphisms[n] = (objs[j], objs[i])
                    hinv = act[inv[h]]
                    action[n] = {y: perms[j][hinv[unrel[i][y]]] for y in points}
                    for k in range(r):
                        for h2 in els:
                            table[n, mname(j, k, h2)] = mname(i, k, mul[h, h2])
    cat = FinCategory(objects, morphisms, table, identities=identities)
    return FinDynSys(cat, space, action)


def _random_map(rng: random.Random, dom: list, cod: list) -> dict:
    return {x: rng.choice(cod) for x in dom}


def _transformation_monoid(rng: random.Random) -> FinDynSys:
    size = rng.choice((1, 2, 2, 3, 3, 4))
    pts = list(range(size))
    maps = {}
    for g in range(rng.randint(1, 2)):
        if rng.random() < 0.4:
            p = pts[:]
            rng.shuffle(p)
            maps[f"t{g}"] = dict(zip(pts, p))
        else:
            maps[f"t{g}"] = _random_map(rng, pts, pts)
    return transformation_system(pts, maps)


def _partial_system(rng: random.Random) -> FinDynSys:
    size = rng.randint(2, 4)
    amb = list(range(size))

    def subset():
        k = rng.randint(1, size)
        return sorted(rng.sample(amb, k))

    maps = []
    for g in range(rng.randint(1, 3)):
        d, c = subset(), subset()
        if rng.random() < 0.4:
            c = d
        maps.append(PartialMap.make(f"f{g}", d, c, _random_map(rng, d, c)))
    p = close_partial_system(PartialSystem(tuple(amb), tuple(maps)))
    return partial_to_category_system(p)


_BUILDERS = {
    "group-action": _group_action,
    "multi-object-groupoid": _groupoid,
    "transformation-monoid": _transformation_monoid,
    "partial-system": _partial_system,
}


def algebra_dim(sys: FinDynSys) -> int:
    return sum(len(sys.space[sys.cat.cod(n)]) for n in sys.cat.morphisms)


def random_instance(seed: int, profile: str, max_dim: int | None = 32) -> FinDynSys:
    """A deterministic random system; draws are repeated until the algebra fits ``max_dim``."""
    if profile not in _BUILDERS:
        raise ValueError(f"unknown profile {profile!r}; choose from {', '.join(PROFILES)}")
    rng = random.Random(f"{profile}:{seed}")
    while True:
        sys = _BUILDERS[profile](rng)
        if max_dim is None or algebra_dim(sys) <= max_dim:
            return sys


def random_partial_system(seed: int) -> PartialSystem:
    """An unclosed random partial system (for testing closure)."""
    rng = random.Random(f"partial-raw:{seed}")
    size = rng.randint(2, 4)
    amb = list(range(size))
    maps = []
    for g in range(rng.randint(1, 3)):
        d = sorted(rng.sample(amb, rng.randint(1, size)))
        c = sorted(rng.sample(amb, rng.randint(1, size)))
        maps.append(PartialMap.make(f"f{g}", d, c, _random_map(rng, d, c)))
    return PartialSystem(tuple(amb), tuple(maps))
