"""Acceptance criteria, each run at its stated size, tolerance and time budget.

Every test prints one ``ACCEPT <n> PASS|FAIL ...`` line (also collected into
the terminal summary).  Criterion 2 is implemented as stated and currently
fails on its ideal sub-claims; the report says which ones and why.
"""

import io
import random
import time

import pytest

from skewcat import analysis as an
from skewcat.cli import main
from skewcat.coeff import GF, QQ, IntegersMod, FunctionRing, PolyElem, sigma_poly
from skewcat.dynsys import aperiodic_set, is_topologically_free, per_A_set, per_set, sep_A_set, sep_set
from skewcat.fixtures import (
    expected_symbolic_product,
    sqr_discrete_system,
    symbolic_algebra,
    symbolic_factor,
)
from skewcat.instances import random_instance
from skewcat.skewalg import NatSkewAlgebra, SkewAlgebra, cod, dom, identity_element, left_unit, mul, mul_groupoid, right_unit

from conftest import ACCEPTANCE_LINES

PROFILES_C4 = ("group-action", "multi-object-groupoid", "transformation-monoid")
GROUPOIDS = ("group-action", "multi-object-groupoid")


def report(n: int, ok: bool, summary: str, seconds: float) -> None:
    line = f"ACCEPT {n} {'PASS' if ok else 'FAIL'} {summary} ({seconds:.2f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def suite_instances():
    """The randomized instances shared by criteria 4 and 6: 100 per profile, dimension <= 32."""
    return {p: [random_instance(seed, p, max_dim=32) for seed in range(100)] for p in PROFILES_C4 + ("partial-system",)}


def test_criterion_1_symbolic_product():
    t0 = time.perf_counter()
    out = io.StringIO()
    code = main(["reproduce", "example19"], out)
    alg = symbolic_algebra()
    prod = symbolic_factor(alg, "B1") * symbolic_factor(alg, "B2")
    expected = expected_symbolic_product(alg)
    mismatched = [n for n in alg.cat.morphisms if prod.coeff(n) != expected[n]]
    extra = [n for n in prod.support if n not in expected]
    dt = time.perf_counter() - t0
    ok = code == 0 and not mismatched and not extra and len(expected) == 5 and dt < 1.0
    report(1, ok, f"symbolic product: 5 coefficients, mismatched={mismatched or 'none'} exit={code}", dt)
    assert code == 0, out.getvalue()
    assert not mismatched and not extra
    assert dt < 1.0


def test_criterion_2_discrete_model():
    t0 = time.perf_counter()
    alg = SkewAlgebra.of_system(sqr_discrete_system(), GF(2))
    top_free = is_topologically_free(alg.sys)
    max_comm = an.is_maximal_commutative(alg)
    iip = an.iip_enumeration(alg, exhaustive=True)
    comm_dim = an.commutant_per_formula(alg).dim
    ideal = an.ideal_generated(alg, [alg.u("abs")])
    meet = an.intersect_with_A(alg, ideal)
    described = an.SubspaceBasis(
        alg.scalars, alg.dim, [an._unit(alg, i) for i, (n, _) in enumerate(alg.coords) if n in {"abs", "sqr", "sqrt"}]
    )
    dt = time.perf_counter() - t0
    claims = {
        "top_free=false": top_free is False,
        "max_comm=false": max_comm is False,
        "iip=false": iip.holds is False and iip.candidates == 8191,
        "commutant_dim=7": comm_dim == 7,
        "ideal(u_abs)_dim=8": ideal.dim == 8,
        "ideal(u_abs)∩A={0}": meet.dim == 0,
        "ideal(u_abs)=A_X u_abs+A_X u_sqr+A_Y u_sqrt": ideal == described,
        "runtime<5s": dt < 5.0,
    }
    failed = [k for k, v in claims.items() if not v]
    leak = alg.u("sqrt") * alg.u("abs") * alg.u("sqr")
    detail = (
        f"failed={failed or 'none'}; measured ideal_dim={ideal.dim} meet_A_dim={meet.dim}; "
        f"u_sqrt*u_abs*u_sqr={leak!r} lies in the ideal and in A"
    )
    report(2, not failed, "discrete model " + detail, dt)
    assert not failed, detail


def test_criterion_3_truncated_monoid():
    t0 = time.perf_counter()
    X = PolyElem([0, 1])
    moved = [n for n in range(1, 9) if sigma_poly(n, 2, X) != X]
    alg = NatSkewAlgebra(z=2, bound=8)
    rng = random.Random(20240901)
    u1 = alg.u(1)
    zero_u0 = 0
    for _ in range(100):
        k = rng.randint(0, 7)
        x = an._random_nat(alg, rng, k)
        y = an._random_nat(alg, rng, 7 - k)
        if (x * u1 * y).coeff(0).is_zero():
            zero_u0 += 1
    rep = an.truncated_monoid_counterexample(bound=8, sample_count=100, seed=1)
    dt = time.perf_counter() - t0
    ok = moved == list(range(1, 9)) and zero_u0 == 100 and rep.ok and dt < 2.0
    report(3, ok, f"sigma(n)(X)!=X for n in {moved[0]}..{moved[-1]}; zero u_0 part in {zero_u0}/100 products", dt)
    assert moved == list(range(1, 9))
    assert zero_u0 == 100 and rep.ok
    assert dt < 2.0


def test_criterion_4_freeness_equals_maximality(suite_instances):
    t0 = time.perf_counter()
    checked = 0
    bad = []
    for p in PROFILES_C4:
        for seed, s in enumerate(suite_instances[p]):
            tf = is_topologically_free(s)
            for F in (GF(2), QQ):
                alg = SkewAlgebra.of_system(s, F)
                # elimination only; the fixed-point route is not consulted
                mc = an.is_maximal_commutative(alg, cross_check=False)
                checked += 1
                if tf != mc:
                    bad.append((p, seed, str(F)))
    dt = time.perf_counter() - t0
    ok = not bad and checked == 600 and dt < 60
    report(4, ok, f"{checked} instance/field pairs, discrepancies={len(bad)}", dt)
    assert not bad, bad
    assert dt < 60


def test_criterion_5_ideal_property_versus_maximality():
    t0 = time.perf_counter()
    groupoid_bad, monoid_bad = [], []
    n_groupoid = n_monoid = 0
    seen = {"iip": 0, "no_iip": 0}
    for p in GROUPOIDS:
        for seed in range(15):
            s = random_instance(seed, p, max_dim=16)
            alg = SkewAlgebra.of_system(s, GF(2))
            assert alg.dim <= 16 and alg.inverse is not None
            iip = an.brute_force_iip(alg)
            mc = an.is_maximal_commutative(alg, cross_check=False)
            seen["iip" if iip else "no_iip"] += 1
            n_groupoid += 1
            if iip != mc:
                groupoid_bad.append((p, seed))
    for seed in range(30):
        s = random_instance(seed, "transformation-monoid", max_dim=16)
        alg = SkewAlgebra.of_system(s, GF(2))
        iip = an.brute_force_iip(alg)
        mc = an.is_maximal_commutative(alg, cross_check=False)
        n_monoid += 1
        if iip and not mc:
            monoid_bad.append(seed)
    dt = time.perf_counter() - t0
    ok = not groupoid_bad and not monoid_bad and n_groupoid >= 20 and n_monoid >= 20 and dt < 120
    report(
        5,
        ok,
        f"groupoids {n_groupoid} (iip true {seen['iip']}, false {seen['no_iip']}) violations={len(groupoid_bad)}; "
        f"monoids {n_monoid} violations={len(monoid_bad)}",
        dt,
    )
    assert not groupoid_bad and not monoid_bad
    assert dt < 120


def test_criterion_6_commutant_routes_agree(suite_instances):
    t0 = time.perf_counter()
    checked = 0
    bad = []
    extra = [sqr_discrete_system()]
    for p, lst in list(suite_instances.items()) + [("fixture", extra)]:
        for seed, s in enumerate(lst):
            for F in (GF(2), QQ):
                alg = SkewAlgebra.of_system(s, F)
                if alg.dim > 32:
                    continue
                checked += 1
                if an.commutant_per_formula(alg) != an.commutant_linear(alg):
                    bad.append((p, seed, str(F)))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    report(6, ok, f"{checked} echelonized basis comparisons, mismatches={len(bad)}", dt)
    assert not bad, bad
    assert dt < 30


def test_criterion_7_point_set_identities():
    t0 = time.perf_counter()
    checks = 0
    bad = []
    profiles = GROUPOIDS + ("transformation-monoid", "partial-system")
    for seed in range(80):
        s = random_instance(seed, profiles[seed % 4], max_dim=32)
        for F in (GF(2), GF(3), QQ, IntegersMod(4)):
            ring = FunctionRing(s, F)
            for e in s.cat.objects:
                pts = frozenset(s.space[e])
                ap = aperiodic_set(s, e)
                for n in s.cat.endomorphisms(e):
                    per, sep = per_set(s, e, n), sep_set(s, e, n)
                    per_a, sep_a = per_A_set(s, ring, e, n), sep_A_set(s, ring, e, n)
                    ident = s.cat.is_identity(n)
                    conds = [
                        pts - sep_a == per_a,
                        pts - sep == per,
                        pts - per_a == sep_a,
                        pts - per == sep,
                        per <= per_a,
                        sep_a <= sep,
                        ident or ap <= sep,
                        per == per_a and sep == sep_a,
                    ]
                    checks += 1
                    if not all(conds):
                        bad.append((seed, str(F), e, n))
    dt = time.perf_counter() - t0
    ok = not bad and checks >= 1000
    report(7, ok, f"{checks} (object, endomorphism, ring) checks of eight identities, failures={len(bad)}", dt)
    assert checks >= 1000
    assert not bad, bad


def test_criterion_8_algebra_laws():
    t0 = time.perf_counter()
    rng = random.Random(8)
    profiles = GROUPOIDS + ("transformation-monoid", "partial-system")
    triples = failures = 0
    for k in range(250):
        s = random_instance(k, profiles[k % 4], max_dim=32)
        alg = SkewAlgebra.of_system(s, (GF(2), GF(3), QQ)[k % 3])
        for _ in range(4):
            x, y, z = (alg.random_element(rng) for _ in range(3))
            triples += 1
            if not ((x * y) * z == x * (y * z) and x * (y + z) == x * y + x * z and (x + y) * z == x * z + y * z):
                failures += 1

    groupoid_instances = groupoid_pairs = groupoid_bad = 0
    for k in range(100):
        s = random_instance(k, GROUPOIDS[k % 2], max_dim=32)
        alg = SkewAlgebra.of_system(s, (GF(2), QQ)[k % 2])
        groupoid_instances += 1
        if alg.dim <= 16:
            pairs = [(a, b) for a in alg.basis() for b in alg.basis()]
        else:
            pairs = [(alg.random_element(rng), alg.random_element(rng)) for _ in range(20)]
        for x, y in pairs:
            groupoid_pairs += 1
            if mul_groupoid(x, y) != mul(x, y):
                groupoid_bad += 1

    elements = unit_bad = 0
    for k in range(120):
        s = random_instance(k, profiles[k % 4], max_dim=32)
        alg = SkewAlgebra.of_system(s, (GF(2), QQ)[k % 2])
        one = identity_element(alg)
        x = alg.random_element(rng)
        if x.is_zero():
            x = alg.u(alg.cat.morphisms[-1])
        elements += 1
        l, r = left_unit(x), right_unit(x)
        ok_x = one * x == x == x * one and l * x == x == x * r
        for _ in range(3):
            y = alg.random_element(rng)
            if y and cod(y) == cod(x):
                ok_x &= l * y == y
            if y and dom(y) == dom(x):
                ok_x &= y * r == y
        unit_bad += not ok_x
    dt = time.perf_counter() - t0
    ok = not failures and not groupoid_bad and not unit_bad and triples >= 1000 and elements >= 100
    report(
        8,
        ok,
        f"{triples} triples failures={failures}; groupoid product on {groupoid_instances} instances / "
        f"{groupoid_pairs} pairs mismatches={groupoid_bad}; unit laws on {elements} elements failures={unit_bad}",
        dt,
    )
    assert triples >= 1000 and elements >= 100
    assert not failures and not groupoid_bad and not unit_bad
