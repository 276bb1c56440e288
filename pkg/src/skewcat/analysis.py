"""Commutants, ideals and the three dynamical/algebraic properties.

All linear algebra happens in the indicator basis ``chi_x u_n`` of a skew
algebra over a full function ring (see :attr:`SkewAlgebra.coords`).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .category import endo_monoid, is_divisible
from .coeff import FunctionRing, PolyElem, sigma_poly
from .dynsys import is_topologically_free, orbit, per_set
from .linalg import SubspaceBasis, nullspace
from .skewalg import NatSkewAlgebra, SkewAlgebra, SkewElem, TruncationExceeded

log = logging.getLogger(__name__)

LINEAR_CAP = 32
IIP_CAP = 16


class DimensionCap(Exception):
    pass


class FormalContext(Exception):
    pass


class NonFiniteField(Exception):
    pass


class OracleMismatch(AssertionError):
    pass


def _function_ring(alg: SkewAlgebra) -> FunctionRing:
    R = alg.coeffs
    if not isinstance(R, FunctionRing):
        raise FormalContext("this analysis needs coefficients given by functions on point sets")
    if R.constants_only:
        raise FormalContext("this analysis needs the full function ring")
    return R


def _check_cap(alg: SkewAlgebra, cap: int | None, what: str) -> None:
    if cap is not None and alg.dim > cap:
        raise DimensionCap(f"{what}: algebra dimension {alg.dim} exceeds cap {cap}")


def nonidentity_endos(cat, e: str) -> list[str]:
    return [n for n in cat.endomorphisms(e) if not cat.is_identity(n)]


def a_subspace(alg: SkewAlgebra) -> SubspaceBasis:
    one = alg.scalars.one
    vecs = []
    for i in alg.a_coords:
        v = [alg.scalars.zero] * alg.dim
        v[i] = one
        vecs.append(v)
    return SubspaceBasis(alg.scalars, alg.dim, vecs)


def _unit(alg: SkewAlgebra, i: int) -> list:
    v = [alg.scalars.zero] * alg.dim
    v[i] = alg.scalars.one
    return v


# -- commutant -----------------------------------------------------------------


def commutant_per_formula(alg: SkewAlgebra) -> SubspaceBasis:
    """Span of ``chi_x u_e`` and of ``chi_x u_n`` for endomorphisms ``n`` fixing ``x``."""
    _function_ring(alg)
    sys, cat = alg.sys, alg.cat
    keep = set()
    for e in cat.objects:
        for x in sys.space[e]:
            keep.add((cat.identity[e], x))
        for n in nonidentity_endos(cat, e):
            keep |= {(n, x) for x in per_set(sys, e, n)}
    return SubspaceBasis(alg.scalars, alg.dim, [_unit(alg, i) for i, c in enumerate(alg.coords) if c in keep])


def commutant_linear(alg: SkewAlgebra, cap: int | None = LINEAR_CAP) -> SubspaceBasis:
    """Solve ``a v == v a`` for every indicator ``a`` of ``A`` by elimination."""
    _function_ring(alg)
    _check_cap(alg, cap, "commutant_linear")
    F = alg.scalars
    if not F.is_field:
        raise NonFiniteField(f"{F} is not a field")
    B = alg.basis()
    rows = []
    for a in alg.a_basis():
        cols = [alg.to_vector(a * b - b * a) for b in B]
        rows.extend([c[k] for c in cols] for k in range(alg.dim))
    return SubspaceBasis(F, alg.dim, nullspace(F, rows, alg.dim))


def commutes_with_A(alg: SkewAlgebra, x: SkewElem) -> bool:
    return all(a * x == x * a for a in alg.a_basis())


def commutant_brute_force(alg: SkewAlgebra, limit: int = 1 << 14) -> set[tuple]:
    """Every element commuting with ``A``, by enumeration (finite scalars only)."""
    _function_ring(alg)
    F = alg.scalars
    if not F.is_finite:
        raise NonFiniteField("enumeration needs finite scalars")
    total = len(F.elements()) ** alg.dim
    if total > limit:
        raise DimensionCap(f"{total} elements exceed the enumeration limit {limit}")
    out = set()
    for v in product(F.elements(), repeat=alg.dim):
        if commutes_with_A(alg, alg.from_vector(v)):
            out.add(tuple(v))
    return out


def max_comm_annihilator(alg: SkewAlgebra) -> bool:
    """Maximal commutativity through annihilators, for finite scalar rings.

    ``A`` is maximal commutative iff for every nonidentity endomorphism ``n``
    of ``e`` and every nonzero ``a_n`` in ``A_e`` some ``a`` has
    ``sigma(n)(a) - a`` outside ``Ann(a_n)``.  The set of ``a`` satisfying
    the annihilator condition is additive, so ``a`` ranges over a basis.
    """
    from .coeff import in_annihilator

    R = _function_ring(alg)
    cat = alg.cat
    for e in cat.objects:
        basis = R.basis(e)
        for n in nonidentity_endos(cat, e):
            diffs = [R.sigma(n, a) - a for a in basis]
            for an in R.elements(e):
                if an.is_zero():
                    continue
                if all(in_annihilator(an, d) for d in diffs):
                    return False
    return True


def max_comm_by_points(alg: SkewAlgebra) -> bool:
    """Every moved-point set is a domain of uniqueness for the full function ring.

    On a finite discrete space with all functions available this means the
    fixed-point set of every nonidentity endomorphism is empty.
    """
    sys, cat = alg.sys, alg.cat
    return all(not per_set(sys, e, n) for e in cat.objects for n in nonidentity_endos(cat, e))


def is_maximal_commutative(alg: SkewAlgebra, cap: int | None = LINEAR_CAP, cross_check: bool = True) -> bool:
    """Whether the commutant of ``A`` is ``A`` itself.

    Over a field this solves the commutation equations (falling back to the
    fixed-point formula above ``cap``); over other finite rings it uses the
    annihilator criterion.  With ``cross_check`` the answer is compared with
    the fixed-point criterion when the scalars are an integral domain.
    """
    _function_ring(alg)
    F = alg.scalars
    if F.is_field:
        if cap is None or alg.dim <= cap:
            comm = commutant_linear(alg, cap=None)
        else:
            comm = commutant_per_formula(alg)
        result = comm.dim == len(alg.a_coords)
    elif F.is_finite:
        result = max_comm_annihilator(alg)
    else:
        raise NonFiniteField(f"unsupported scalars {F}")
    if cross_check and F.is_integral_domain:
        other = max_comm_by_points(alg)
        if other != result:
            raise OracleMismatch(f"commutant says {result}, fixed points say {other}")
    return result


# -- ideals --------------------------------------------------------------------


def ideal_generated(alg: SkewAlgebra, gens, cap: int | None = LINEAR_CAP) -> SubspaceBasis:
    """Smallest two-sided ideal containing ``gens``.

    Fixpoint: every vector added to the span is multiplied on both sides by
    every indicator basis element until nothing new appears.
    """
    _function_ring(alg)
    _check_cap(alg, cap, "ideal_generated")
    F = alg.scalars
    span = SubspaceBasis(F, alg.dim)
    todo = []
    for g in gens:
        v = alg.to_vector(g) if isinstance(g, SkewElem) else tuple(g)
        if span.add(v):
            todo.append(v)
    B = alg.basis()
    while todo:
        w = alg.from_vector(todo.pop())
        for b in B:
            for p in (b * w, w * b):
                v = alg.to_vector(p)
                if span.add(v):
                    todo.append(v)
    return span


def is_ideal(alg: SkewAlgebra, span: SubspaceBasis) -> bool:
    B = alg.basis()
    for r in span.rows:
        w = alg.from_vector(r)
        for b in B:
            if alg.to_vector(b * w) not in span or alg.to_vector(w * b) not in span:
                return False
    return True


def intersect_with_A(alg: SkewAlgebra, ideal: SubspaceBasis) -> SubspaceBasis:
    return ideal.intersect(a_subspace(alg))


# -- ideal intersection property -----------------------------------------------


@dataclass
class IIPResult:
    holds: bool
    candidates: int
    failures: int = 0
    witness: SkewElem | None = None

    def __bool__(self) -> bool:
        return self.holds


def _bit_layout(alg: SkewAlgebra) -> tuple[list[int], int]:
    """Bit position of each coordinate: ``A`` coordinates occupy the low bits."""
    a = alg.a_coords
    rest = [i for i in range(alg.dim) if i not in set(a)]
    pos = [0] * alg.dim
    for b, i in enumerate(a + rest):
        pos[i] = b
    return pos, len(a)


def _op_table(cols: list[int], d: int) -> np.ndarray:
    """Images of all ``2^d`` bit vectors under the GF(2)-linear map with column images ``cols``."""
    t = np.zeros(1, dtype=np.uint32)
    for k in range(d):
        t = np.concatenate([t, t ^ np.uint32(cols[k])])
    return t


def _iip_gf2(alg: SkewAlgebra, exhaustive: bool, chunk: int = 1 << 16) -> IIPResult:
    d = alg.dim
    table = alg.basis_products()
    pos, na = _bit_layout(alg)
    inv_pos = [0] * d
    for i, p in enumerate(pos):
        inv_pos[p] = i
    # left/right multiplication by basis element i, as maps on bit vectors
    left, right = [], []
    for i in range(d):
        lc = [0] * d
        rc = [0] * d
        for k in range(d):
            j = inv_pos[k]
            if table[i][j] is not None:
                lc[k] = 1 << pos[table[i][j]]
            if table[j][i] is not None:
                rc[k] = 1 << pos[table[j][i]]
        left.append(_op_table(lc, d))
        right.append(_op_table(rc, d))
    lead = np.full(1 << d, -1, dtype=np.int64)
    for k in range(d):
        lead[1 << k: 1 << (k + 1)] = k
    # distinct nonzero two-sided products b_i x b_j, as (i, j) pairs
    pairs = [(i, j) for i in range(d) for j in range(d) if left[i].any() and right[j].any()]

    failures = 0
    witness_bits = None
    total = (1 << d) - 1
    for start in range(1, 1 << d, chunk):
        xs = np.arange(start, min(start + chunk, 1 << d), dtype=np.uint32)
        basis = np.zeros((d, len(xs)), dtype=np.uint32)
        active = np.arange(len(xs))
        for step, (i, j) in enumerate(pairs):
            v = left[i][right[j][xs[active]]]
            cols = active
            for bit in range(d - 1, -1, -1):
                occ = basis[bit, cols]
                hit = ((v >> np.uint32(bit)) & np.uint32(1)).astype(bool) & (occ != 0)
                v = np.where(hit, v ^ occ, v)
            nz = v != 0
            basis[lead[v[nz]], cols[nz]] = v[nz]
            if step % 8 == 7 or step == len(pairs) - 1:
                met = (basis[:na, active] != 0).any(axis=0) if na else np.zeros(len(active), bool)
                active = active[~met]
                if not len(active):
                    break
        failures += len(active)
        if len(active) and witness_bits is None:
            witness_bits = int(xs[active[0]])
            if not exhaustive:
                break
    witness = None
    if witness_bits is not None:
        one, zero = alg.scalars.one, alg.scalars.zero
        vec = [one if (witness_bits >> pos[i]) & 1 else zero for i in range(d)]
        witness = alg.from_vector(vec)
    return IIPResult(witness is None, total, failures, witness)


def _principal_meets_A(alg: SkewAlgebra, x: tuple, layout: list[int], na: int) -> bool:
    """Whether ``span{b_i x b_j}`` meets ``A``; coordinates permuted so ``A`` comes last."""
    F = alg.scalars
    d = alg.dim
    table = alg.basis_products()
    span = SubspaceBasis(F, d)
    nz = [(k, c) for k, c in enumerate(x) if c != F.zero]
    for i in range(d):
        for j in range(d):
            acc = {}
            for k, c in nz:
                ik = table[i][k]
                if ik is None:
                    continue
                t = table[ik][j]
                if t is None:
                    continue
                acc[t] = F.add(acc.get(t, F.zero), c)
            if not acc:
                continue
            v = [F.zero] * d
            for t, c in acc.items():
                v[layout[t]] = c
            if span.add(v) and span.pivots[-1] >= d - na:
                return True
    return any(p >= d - na for p in span.pivots)


def _iip_generic(alg: SkewAlgebra, exhaustive: bool) -> IIPResult:
    F = alg.scalars
    d = alg.dim
    a = alg.a_coords
    rest = [i for i in range(d) if i not in set(a)]
    layout = [0] * d
    for p, i in enumerate(rest + a):
        layout[i] = p
    na = len(a)
    count = failures = 0
    witness = None
    # representatives up to scalars: the first nonzero coordinate is 1
    for lead in range(d):
        for tail in product(F.elements(), repeat=d - lead - 1):
            x = (F.zero,) * lead + (F.one,) + tuple(tail)
            count += 1
            if not _principal_meets_A(alg, x, layout, na):
                failures += 1
                if witness is None:
                    witness = alg.from_vector(x)
                    if not exhaustive:
                        return IIPResult(False, count, failures, witness)
    return IIPResult(witness is None, count, failures, witness)


def iip_enumeration(alg: SkewAlgebra, cap: int | None = IIP_CAP, exhaustive: bool = False) -> IIPResult:
    """Decide whether every nonzero ideal meets ``A``.

    A nonzero ideal contains the ideal generated by any of its nonzero
    elements, so it is enough that every principal ideal meets ``A``.  Every
    nonzero element is tried (up to scalar multiples for p > 2).  Without
    ``exhaustive`` the search stops at the first principal ideal missing ``A``.
    """
    _function_ring(alg)
    F = alg.scalars
    if not (F.is_field and F.is_finite):
        raise NonFiniteField(f"brute force needs a finite field, got {F}")
    _check_cap(alg, cap, "brute_force_iip")
    if cap is not None and cap > IIP_CAP and alg.dim > IIP_CAP:
        log.warning("brute-force IIP above the default cap: dimension %d", alg.dim)
    if F.modulus == 2:
        return _iip_gf2(alg, exhaustive)
    return _iip_generic(alg, exhaustive)


def brute_force_iip(alg: SkewAlgebra, cap: int | None = IIP_CAP) -> bool:
    return iip_enumeration(alg, cap).holds


def iip_search(alg: SkewAlgebra, max_support: int = 2, cap: int | None = LINEAR_CAP) -> SkewElem | None:
    """Look for a principal ideal missing ``A`` among small elements.

    Candidates have coefficients in {-1, 0, 1} on at most ``max_support``
    indicator coordinates.  Returns a witness, or None when the bounded search
    found nothing (which does not prove the property).
    """
    _function_ring(alg)
    _check_cap(alg, cap, "iip_search")
    F = alg.scalars
    d = alg.dim
    from itertools import combinations

    for size in range(1, max_support + 1):
        for idx in combinations(range(d), size):
            for signs in product((1, -1), repeat=size - 1):
                v = [F.zero] * d
                v[idx[0]] = F.one
                for k, s in zip(idx[1:], signs):
                    v[k] = F.coerce(s)
                ideal = ideal_generated(alg, [v], cap=None)
                if intersect_with_A(alg, ideal).dim == 0:
                    return alg.from_vector(v)
    return None


# -- theorem cross-checks --------------------------------------------------------


@dataclass
class TheoremVerdict:
    top_free: bool
    max_comm: bool
    iip: bool | str
    implications: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(h for _, h in self.implications)

    def lines(self) -> list[str]:
        iip = self.iip if isinstance(self.iip, str) else str(self.iip).lower()
        out = [
            f"top_free={str(self.top_free).lower()}",
            f"max_comm={str(self.max_comm).lower()}",
            f"iip={iip}",
        ]
        out += [f"check[{name}]={str(h).lower()}" for name, h in self.implications]
        return out


def divisible_obstruction(sys) -> tuple[str, object] | None:
    """An object ``e`` and point ``x`` with ``G_e`` divisible and larger than the orbit of ``x``."""
    for e in sys.cat.objects:
        mon = endo_monoid(sys.cat, e)
        if not is_divisible(mon):
            continue
        for x in sys.space[e]:
            if len(mon) > len(orbit(sys, e, x)):
                return e, x
    return None


def check_theorems(alg: SkewAlgebra, iip_cap: int = IIP_CAP, linear_cap: int = LINEAR_CAP) -> TheoremVerdict:
    """Compute the three properties independently and test every applicable implication."""
    _function_ring(alg)
    sys = alg.sys
    F = alg.scalars
    top_free = is_topologically_free(sys)
    max_comm = is_maximal_commutative(alg, cap=linear_cap, cross_check=False)
    groupoid = alg.inverse is not None
    if not (F.is_field and F.is_finite):
        iip: bool | str = "skipped:scalars are not a finite field"
    elif alg.dim > iip_cap:
        iip = f"skipped:dimension {alg.dim} exceeds cap {iip_cap}"
    else:
        iip = brute_force_iip(alg, cap=iip_cap)
    imp = []
    if isinstance(iip, bool):
        imp.append(("ii=>iii", (not iip) or max_comm))
        if groupoid:
            imp.append(("groupoid:ii<=>iii", iip == max_comm))
    if F.is_integral_domain:
        imp.append(("domain:i<=>iii", top_free == max_comm))
    if groupoid and isinstance(iip, bool) and F.is_integral_domain:
        imp.append(("groupoid:i<=>ii<=>iii", top_free == iip == max_comm))
    obs = divisible_obstruction(sys)
    if obs is not None:
        imp.append(("divisible=>not iii", not max_comm))
    return TheoremVerdict(top_free, max_comm, iip, imp)


# -- truncated N-monoid counterexample -----------------------------------------------


@dataclass
class TruncatedMonoidReport:
    bound: int
    z: object
    moved: list[tuple[int, PolyElem]]
    samples: int
    zero_constant_part: int
    nonzero_products: int

    @property
    def ok(self) -> bool:
        return len(self.moved) == self.bound and self.zero_constant_part == self.samples

    def lines(self) -> list[str]:
        out = [f"degree_bound={self.bound}", f"z={self.z}"]
        out += [f"sigma({n})(X)={p}" for n, p in self.moved]
        out += [
            f"moved_all={str(len(self.moved) == self.bound).lower()}",
            f"samples={self.samples}",
            f"samples_with_zero_u0={self.zero_constant_part}",
            f"samples_nonzero={self.nonzero_products}",
        ]
        return out


def truncated_monoid_counterexample(bound: int = 8, sample_count: int = 100, seed: int = 0, z=2) -> TruncatedMonoidReport:
    """Maximal commutativity without the ideal intersection property on ``Q[X] ⋊ N``.

    Every positive degree moves ``X``, so ``A`` is maximal commutative in the
    polynomial (integral domain) setting; products ``x u_1 y`` never reach
    degree 0, so the ideal generated by ``u_1`` misses ``A``.
    """
    if bound < 2:
        raise ValueError("degree bound must be at least 2")
    X = PolyElem([0, 1])
    moved = []
    for n in range(1, bound + 1):
        p = sigma_poly(n, z, X)
        if p != X:
            moved.append((n, p))
    alg = NatSkewAlgebra(z=z, bound=bound)
    rng = random.Random(seed)
    u1 = alg.u(1)
    zero = nonzero = 0
    for _ in range(sample_count):
        k = rng.randint(0, bound - 1)
        x = _random_nat(alg, rng, k)
        y = _random_nat(alg, rng, bound - 1 - k)
        try:
            p = x * u1 * y
        except TruncationExceeded:  # pragma: no cover - ranges are chosen to fit
            raise
        if p.coeff(0).is_zero():
            zero += 1
        if p.terms:
            nonzero += 1
    return TruncatedMonoidReport(bound, z, moved, sample_count, zero, nonzero)


# name used by the command-line contract
prop9b_counterexample = truncated_monoid_counterexample


def _random_nat(alg: NatSkewAlgebra, rng, max_degree: int):
    terms = {}
    for n in range(max_degree + 1):
        if rng.random() < 0.6:
            deg = rng.randint(0, alg.bound)
            terms[n] = PolyElem(rng.randint(-4, 4) for _ in range(deg + 1))
    return alg.element(terms)
