import random

import pytest
from hypothesis import given, strategies as st

from skewcat.coeff import GF, QQ, PolyElem
from skewcat.fixtures import (
    cyclic_group,
    expected_symbolic_product,
    sqr_discrete_system,
    symbolic_algebra,
    symbolic_factor,
    z2_swap_system,
    z2_trivial_point_system,
)
from skewcat.dynsys import from_group_action
from skewcat.instances import PROFILES, random_instance
from skewcat.linalg import nullspace
from skewcat.skewalg import (
    ContextMismatch,
    NatSkewAlgebra,
    NotGroupoid,
    SkewAlgebra,
    TruncationExceeded,
    ZeroElement,
    cod,
    dom,
    grading_check,
    identity_element,
    left_unit,
    mul,
    mul_groupoid,
    right_unit,
)

import oracles

FIELDS = [GF(2), GF(3), QQ]


def sqr_f2():
    return SkewAlgebra.of_system(sqr_discrete_system(), GF(2))


@st.composite
def algebras(draw, groupoid=False):
    profiles = ["group-action", "multi-object-groupoid"] if groupoid else PROFILES
    sys = random_instance(draw(st.integers(0, 10**6)), draw(st.sampled_from(profiles)), max_dim=32)
    return SkewAlgebra.of_system(sys, draw(st.sampled_from(FIELDS)))


@st.composite
def triples(draw, groupoid=False):
    alg = draw(algebras(groupoid))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return alg, [alg.random_element(rng) for _ in range(3)]


def test_addition_examples():
    alg = sqr_f2()
    R = alg.coeffs
    x = alg.u("abs", R.indicator("X", 0))
    assert x + alg.zero() == x
    assert (x + (-x)).is_zero()
    y = alg.u("abs", R.indicator("X", 1))
    assert x + y == alg.u("abs", R.indicator("X", 0) + R.indicator("X", 1))


def test_symbolic_product_matches_every_coefficient():
    alg = symbolic_algebra()
    p = symbolic_factor(alg, "B1") * symbolic_factor(alg, "B2")
    expected = expected_symbolic_product(alg)
    assert set(p.support) == set(expected)
    for n, c in expected.items():
        assert p.coeff(n) == c, n


def test_abs_product_over_f2():
    alg = sqr_f2()
    R = alg.coeffs
    x = alg.u("abs", R.indicator("X", -1))
    y = alg.u("abs", R.indicator("X", 1))
    assert x * y == x


def test_unit_times_anything():
    alg = sqr_f2()
    rng = random.Random(0)
    one = identity_element(alg)
    assert one == alg.u("id_X") + alg.u("id_Y")
    for _ in range(100):
        x = alg.random_element(rng)
        assert one * x == x == x * one


def test_group_algebra_square_of_generator():
    s = z2_trivial_point_system()
    alg = SkewAlgebra.of_system(s, GF(2))
    assert mul_groupoid(alg.u("g1"), alg.u("g1")) == alg.u("g0")
    assert alg.u("g1") * alg.u("g1") == alg.u("g0")


def test_swap_groupoid_product():
    alg = SkewAlgebra.of_system(z2_swap_system(), GF(2))
    R = alg.coeffs
    x = alg.u("g1", R.indicator("*", 0))
    y = alg.u("g1", R.indicator("*", 1))
    assert mul_groupoid(x, y) == alg.u("g0", R.indicator("*", 0)) == x * y


def test_groupoid_product_needs_groupoid():
    alg = sqr_f2()
    with pytest.raises(NotGroupoid):
        mul_groupoid(alg.u("abs"), alg.u("abs"))


def test_mixing_algebras_fails():
    a, b = sqr_f2(), sqr_f2()
    with pytest.raises(ContextMismatch):
        a.u("abs") * b.u("abs")
    with pytest.raises(ContextMismatch):
        a.u("abs") + b.u("abs")


def test_units_of_homogeneous_elements():
    alg = sqr_f2()
    R = alg.coeffs
    x = alg.u("id_X", R.indicator("X", 0))
    assert left_unit(x) == right_unit(x) == alg.u("id_X")
    f = alg.u("sqr", R.indicator("X", -1))
    assert cod(f) == {"X"} and dom(f) == {"Y"}
    assert left_unit(f) == alg.u("id_X")
    assert right_unit(f) == alg.u("id_Y")
    both = f + alg.u("id_Y", R.indicator("Y", 0))
    assert left_unit(both) == alg.u("id_X") + alg.u("id_Y")
    with pytest.raises(ZeroElement):
        left_unit(alg.zero())
    with pytest.raises(ZeroElement):
        right_unit(alg.zero())


def test_grading_on_all_sqr_pairs():
    alg = sqr_f2()
    R = alg.coeffs
    cat = alg.cat
    pairs = 0
    for m in cat.morphisms:
        for n in cat.morphisms:
            x = alg.u(m, R.one(cat.cod(m)))
            y = alg.u(n, R.one(cat.cod(n)))
            assert grading_check(x, y)
            if not cat.composable(m, n):
                assert (x * y).is_zero()
            pairs += 1
    assert pairs == 25
    p = alg.u("sqr") * alg.u("sqrt")
    assert p.support == [cat.compose("sqr", "sqrt")]


def test_grading_rejects_inhomogeneous_input():
    alg = sqr_f2()
    with pytest.raises(ValueError):
        grading_check(alg.u("abs") + alg.u("sqr"), alg.u("abs"))


@given(triples())
def test_associativity_and_distributivity(t):
    alg, (x, y, z) = t
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z
    assert (x * alg.zero()).is_zero() and (alg.zero() * x).is_zero()


@given(triples(groupoid=True))
def test_groupoid_formula_agrees(t):
    _, (x, y, _) = t
    assert mul_groupoid(x, y) == mul(x, y)


def test_groupoid_formula_exhaustive_on_swap():
    alg = SkewAlgebra.of_system(z2_swap_system(), GF(2))
    B = alg.basis()
    for x in B:
        for y in B:
            assert mul_groupoid(x, y) == x * y


def test_cyclic_group_algebra_is_convolution():
    for k in (2, 3, 5):
        els, mul_t, inv, unit = cyclic_group(k)
        s = from_group_action(els, mul_t, inv, unit, [0], {g: {0: 0} for g in els})
        alg = SkewAlgebra.of_system(s, QQ)
        rng = random.Random(k)
        for _ in range(20):
            a = [rng.randint(-3, 3) for _ in range(k)]
            b = [rng.randint(-3, 3) for _ in range(k)]
            x = alg.element({f"g{i}": alg.coeffs.element("*", [a[i]]) for i in range(k)})
            y = alg.element({f"g{i}": alg.coeffs.element("*", [b[i]]) for i in range(k)})
            conv = [sum(a[i] * b[(j - i) % k] for i in range(k)) for j in range(k)]
            p = mul_groupoid(x, y)
            assert [p.coeff(f"g{j}").values[0] for j in range(k)] == conv


@given(triples())
def test_local_units(t):
    alg, (x, y, z) = t
    if x.is_zero():
        return
    l, r = left_unit(x), right_unit(x)
    if y and cod(y) == cod(x):
        assert l * y == y
    if z and dom(z) == dom(x):
        assert z * r == z
    assert l * x == x == x * r


@given(algebras(), st.integers(0, 2**32))
def test_identity_element_law(alg, seed):
    rng = random.Random(seed)
    one = identity_element(alg)
    for _ in range(5):
        x = alg.random_element(rng)
        assert one * x == x == x * one


@given(algebras(), st.integers(0, 2**32))
def test_homogeneous_products_are_graded(alg, seed):
    rng = random.Random(seed)
    R = alg.coeffs
    for m in alg.cat.morphisms:
        n = rng.choice(alg.cat.morphisms)
        x = alg.u(m, R.random(alg.cat.cod(m), rng))
        y = alg.u(n, R.random(alg.cat.cod(n), rng))
        assert grading_check(x, y)


def _left_unit_solutions(alg, e, coords):
    """Solutions of ``u y = y`` for every basis ``y`` with ``cod(y) = {e}``, ``u`` supported on ``coords``."""
    F = alg.scalars
    B = alg.basis()
    ys = [y for y in B if cod(y) == {e}]
    d = alg.dim
    rows = []
    for y in ys:
        prods = [alg.to_vector(B[i] * y) for i in coords]
        target = alg.to_vector(y)
        for k in range(d):
            rows.append([p[k] for p in prods] + [F.neg(target[k])])
    return nullspace(F, rows, len(coords) + 1)


@pytest.mark.parametrize("which", ["sqr", "swap", "groupoid"])
def test_left_unit_is_unique_over_f2(which):
    s = {
        "sqr": sqr_discrete_system,
        "swap": z2_swap_system,
        "groupoid": lambda: random_instance(3, "multi-object-groupoid", max_dim=16),
    }[which]()
    alg = SkewAlgebra.of_system(s, GF(2))
    F = alg.scalars
    cat = alg.cat
    for e in cat.objects:
        x = alg.u(cat.identity[e])
        # components on morphisms with domain other than e multiply every such y to zero
        free = [i for i, (n, _) in enumerate(alg.coords) if cat.dom(n) != e]
        sol = _left_unit_solutions(alg, e, list(range(alg.dim)))
        assert len(sol) == 1 + len(free)
        assert sum(1 for v in sol if v[-1] != F.zero) == 1
        # restricted to morphisms into e the solution is unique and equals l(x)
        keep = [i for i in range(alg.dim) if i not in set(free)]
        sol = _left_unit_solutions(alg, e, keep)
        assert len(sol) == 1 and sol[0][-1] != F.zero
        v = [F.zero] * alg.dim
        for i, c in zip(keep, sol[0]):
            v[i] = F.mul(c, F.inv(sol[0][-1]))
        assert alg.from_vector(v) == left_unit(x)


def test_product_agrees_with_pointwise_oracle():
    for seed in range(30):
        s = random_instance(seed, PROFILES[seed % len(PROFILES)], max_dim=32)
        alg = SkewAlgebra.of_system(s, GF(3))
        F = alg.scalars
        rng = random.Random(seed)
        for _ in range(5):
            x, y = alg.random_element(rng), alg.random_element(rng)
            dx = {c: v for c, v in zip(alg.coords, alg.to_vector(x)) if v != F.zero}
            dy = {c: v for c, v in zip(alg.coords, alg.to_vector(y)) if v != F.zero}
            want = oracles.naive_product(s, F.add, F.mul, F.zero, dx, dy)
            got = {c: v for c, v in zip(alg.coords, alg.to_vector(x * y)) if v != F.zero}
            assert got == want


def test_basis_products_are_basis_elements():
    alg = sqr_f2()
    basis, table = oracles.f2_structure(alg.sys)
    ours = alg.basis_products()
    pos = {c: i for i, c in enumerate(alg.coords)}
    for i, b in enumerate(basis):
        for j, c in enumerate(basis):
            k = table[i, j]
            got = ours[pos[b]][pos[c]]
            assert (got is None) == (k is None)
            if k is not None:
                assert alg.coords[got] == basis[k]


def test_vector_roundtrip():
    alg = SkewAlgebra.of_system(sqr_discrete_system(), QQ)
    assert alg.dim == 13
    assert len(alg.a_coords) == 5
    rng = random.Random(1)
    for _ in range(20):
        x = alg.random_element(rng)
        assert alg.from_vector(alg.to_vector(x)) == x


def test_constants_only_ring_has_no_coordinates():
    alg = SkewAlgebra.of_system(z2_swap_system(), QQ, constants_only=True)
    with pytest.raises(TypeError):
        alg.coords


def test_truncated_monoid_algebra():
    A = NatSkewAlgebra(z=2, bound=4)
    X = PolyElem([0, 1])
    assert A.u(1) * A.u(0, X) == A.u(1, PolyElem([0, 2]))
    assert A.u(0, X) * A.u(1) == A.u(1, X)
    assert A.u(2) * A.u(2) == A.u(4)
    with pytest.raises(TruncationExceeded):
        A.u(3) * A.u(2)
    with pytest.raises(TruncationExceeded):
        A.u(5)


@given(st.integers(0, 2**32))
def test_truncated_algebra_is_associative(seed):
    A = NatSkewAlgebra(z=2, bound=12)
    rng = random.Random(seed)
    x, y, z = (NatSkewAlgebra(2, 4).random_element(rng, 4) for _ in range(3))
    x, y, z = (A.element(e.terms) for e in (x, y, z))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
