"""``skewcat <command> [file] [flags]``: batch checks on skew category algebras.

Reports are ``key=value`` lines.  Exit status: 0 when every check passed,
1 when a property or consistency check failed (a ``witness=`` line says
how to reproduce it), 2 for invalid input.
"""

from __future__ import annotations

import argparse
import sys as _sys

from . import analysis as an
from .category import CategoryError
from .coeff import GF, QQ, FunctionRing
from .dynsys import aperiodic_set, orbit, per_A_set, per_set, sep_A_set, sep_set, topological_freeness
from .fixtures import (
    expected_symbolic_product,
    sqr_discrete_system,
    symbolic_algebra,
    symbolic_factor,
)
from .instances import PROFILES, random_instance
from .parser import ParseError, load_system, make_algebra, parse_coeff, parse_elements
from .skewalg import SkewAlgebra


class Report:
    def __init__(self, out=None):
        self.out = out or _sys.stdout
        self.failed = False

    def kv(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = str(value).lower()
        self.out.write(f"{key}={value}\n")

    def line(self, text: str) -> None:
        self.out.write(text + "\n")

    def check(self, key: str, ok: bool, witness: str | None = None) -> None:
        self.kv(key, "pass" if ok else "fail")
        if not ok:
            self.failed = True
            if witness:
                self.kv("witness", witness)


def fmt_set(pts) -> str:
    from .dynsys import _sorted_points

    return "{" + ",".join(str(x) for x in _sorted_points(pts)) + "}"


def summary(rep: Report, alg: SkewAlgebra) -> None:
    cat = alg.cat
    rep.kv("objects", ",".join(cat.objects))
    rep.kv("morphisms", ",".join(cat.morphisms))
    rep.kv("coeff", "formal" if alg.is_formal else alg.scalars)
    if not alg.is_formal:
        s = alg.sys
        rep.kv("spaces", " ".join(f"{e}:{fmt_set(s.space[e])}" for e in cat.objects))
        rep.kv("dim", alg.dim)
        rep.kv("a_dim", len(alg.a_coords))


def fmt_vec(alg: SkewAlgebra, v) -> str:
    return repr(alg.from_vector(v)) if any(c != alg.scalars.zero for c in v) else "0"


# -- commands --------------------------------------------------------------------


def _load(args):
    sf = load_system(args.file)
    coeff = parse_coeff(args.coeff) if args.coeff else None
    return sf, make_algebra(sf, coeff)


def _need_valid(sf) -> None:
    if sf.violations:
        v = sf.violations[0]
        raise ParseError(None, f"invalid system: {v.kind} at {v.witness}: {v.detail}")


def cmd_validate(args, rep: Report) -> None:
    sf, alg = _load(args)
    summary(rep, alg)
    if sf.partial is not None:
        rep.kv("partial_closed", sf.partial_closed)
    rep.kv("violations", len(sf.violations))
    for v in sf.violations:
        rep.kv("violation", f"{v.kind} {v.witness} {v.detail}")
    rep.check("valid", not sf.violations, f"{sf.violations[0].kind} {sf.violations[0].witness}" if sf.violations else None)


def cmd_analyze(args, rep: Report) -> None:
    sf, alg = _load(args)
    _need_valid(sf)
    summary(rep, alg)
    s, cat = sf.sys, alg.cat
    ring = alg.coeffs if isinstance(alg.coeffs, FunctionRing) else FunctionRing(s, QQ)
    agree = True
    for e in cat.objects:
        for n in an.nonidentity_endos(cat, e):
            per, sep = per_set(s, e, n), sep_set(s, e, n)
            per_a, sep_a = per_A_set(s, ring, e, n), sep_A_set(s, ring, e, n)
            rep.kv(f"per[{e},{n}]", fmt_set(per))
            rep.kv(f"sep[{e},{n}]", fmt_set(sep))
            rep.kv(f"per_A[{e},{n}]", fmt_set(per_a))
            agree &= per == per_a and sep == sep_a
        rep.kv(f"aperiodic[{e}]", fmt_set(aperiodic_set(s, e)))
        seen = set()
        for x in s.space[e]:
            if x in seen:
                continue
            o = orbit(s, e, x)
            seen |= o
            rep.kv(f"orbit[{e},{x}]", fmt_set(o))
    fr = topological_freeness(s)
    rep.kv("top_free", fr.free)
    for e, x, n in fr.witnesses:
        rep.kv("periodic_point", f"{e} {x} {n}")
    # all functions separate points, so the function-detected sets must agree
    rep.check("per_A_matches_per", agree)


def cmd_commutant(args, rep: Report) -> None:
    sf, alg = _load(args)
    _need_valid(sf)
    summary(rep, alg)
    formula = an.commutant_per_formula(alg)
    rep.kv("commutant_dim", formula.dim)
    if alg.scalars.is_field:
        linear = an.commutant_linear(alg, cap=args.cap or an.LINEAR_CAP)
        rep.check("formula_matches_linear", formula == linear, "commutant bases differ" if formula != linear else None)
    mc = an.is_maximal_commutative(alg, cap=args.cap or an.LINEAR_CAP, cross_check=False)
    rep.kv("max_comm", mc)
    for r in formula.rows:
        rep.kv("basis", fmt_vec(alg, r))


def cmd_ideal(args, rep: Report) -> None:
    sf, alg = _load(args)
    _need_valid(sf)
    if not args.gens:
        raise ParseError(None, "--gens is required")
    gens = parse_elements(args.gens, alg, sf.elements)
    summary(rep, alg)
    ideal = an.ideal_generated(alg, gens, cap=args.cap or an.LINEAR_CAP)
    meet = an.intersect_with_A(alg, ideal)
    rep.kv("ideal_dim", ideal.dim)
    rep.kv("ideal_meet_A_dim", meet.dim)
    for r in ideal.rows:
        rep.kv("basis", fmt_vec(alg, r))
    for r in meet.rows:
        rep.kv("meet_A", fmt_vec(alg, r))
    rep.check("closed_under_products", an.is_ideal(alg, ideal))


def cmd_iip(args, rep: Report) -> None:
    sf, alg = _load(args)
    _need_valid(sf)
    summary(rep, alg)
    if args.search:
        w = an.iip_search(alg, cap=args.cap or an.LINEAR_CAP)
        rep.kv("method", "search")
        rep.kv("iip", "unknown" if w is None else "false")
        if w is not None:
            rep.kv("iip_witness", repr(w))
        return
    res = an.iip_enumeration(alg, cap=args.cap or an.IIP_CAP)
    rep.kv("method", "brute")
    rep.kv("candidates", res.candidates)
    rep.kv("iip", res.holds)
    if res.witness is not None:
        rep.kv("iip_witness", repr(res.witness))


def cmd_theorems(args, rep: Report) -> None:
    sf, alg = _load(args)
    _need_valid(sf)
    summary(rep, alg)
    v = an.check_theorems(alg, iip_cap=args.cap or an.IIP_CAP, linear_cap=max(args.cap or 0, an.LINEAR_CAP))
    for ln in v.lines():
        rep.line(ln)
    bad = [name for name, ok in v.implications if not ok]
    rep.check("theorems", v.ok, f"{args.file} check {bad[0]}" if bad else None)


def _instance_line(profile: str, seed: int, alg: SkewAlgebra, verdict) -> str:
    cat = alg.cat
    return (
        f"instance profile={profile} seed={seed} objects={len(cat.objects)} "
        f"morphisms={len(cat.morphisms)} dim={alg.dim} " + " ".join(verdict.lines())
    )


def cmd_random(args, rep: Report) -> None:
    scalars = parse_coeff(args.coeff or "F2")
    if scalars == "formal":
        raise ParseError(None, "random instances need scalar coefficients")
    profiles = PROFILES if args.profile == "all" else (args.profile,)
    for p in profiles:
        if p not in PROFILES:
            raise ParseError(None, f"unknown profile {p!r}; choose from all, {', '.join(PROFILES)}")
    max_dim = args.cap or an.LINEAR_CAP
    rep.kv("coeff", scalars)
    rep.kv("count", args.count)
    rep.kv("seed", args.seed)
    passed = total = 0
    first_bad = None
    for p in profiles:
        for i in range(args.count):
            seed = args.seed + i
            s = random_instance(seed, p, max_dim=max_dim)
            alg = SkewAlgebra.of_system(s, scalars)
            v = an.check_theorems(alg, linear_cap=max_dim)
            rep.line(_instance_line(p, seed, alg, v))
            total += 1
            if v.ok:
                passed += 1
            elif first_bad is None:
                first_bad = f"skewcat random --profile {p} --seed {seed} --count 1 --coeff {args.coeff or 'F2'}"
    rep.kv("passed", f"{passed}/{total}")
    rep.check("theorems", passed == total, first_bad)


# -- reproductions -----------------------------------------------------------------


def reproduce_symbolic_product(rep: Report) -> None:
    alg = symbolic_algebra()
    prod = symbolic_factor(alg, "B1") * symbolic_factor(alg, "B2")
    expected = expected_symbolic_product(alg)
    rep.kv("objects", ",".join(alg.cat.objects))
    rep.kv("morphisms", ",".join(alg.cat.morphisms))
    rep.kv("coeff", "formal")
    ok = True
    for n in alg.cat.morphisms:
        got = prod.coeff(n)
        same = got == expected[n]
        ok &= same
        rep.kv(f"coeff[{n}]", alg.format_coeff(got))
        rep.check(f"match[{n}]", same, f"expected {alg.format_coeff(expected[n])}" if not same else None)
    extra = [n for n in prod.support if n not in expected]
    rep.check("no_extra_terms", not extra, ",".join(extra) if extra else None)


def _span_of(alg: SkewAlgebra, morphisms) -> an.SubspaceBasis:
    vecs = [an._unit(alg, i) for i, (n, _) in enumerate(alg.coords) if n in morphisms]
    return an.SubspaceBasis(alg.scalars, alg.dim, vecs)


def reproduce_discrete_model(rep: Report) -> None:
    """The square/root/absolute-value system on X = {-1,0,1}, Y = {0,1} over F2."""
    alg = SkewAlgebra.of_system(sqr_discrete_system(), GF(2))
    summary(rep, alg)
    fr = topological_freeness(alg.sys)
    rep.kv("top_free", fr.free)
    for e, x, n in fr.witnesses:
        rep.kv("periodic_point", f"{e} {x} {n}")
    rep.kv("max_comm", an.is_maximal_commutative(alg))
    res = an.iip_enumeration(alg, exhaustive=True)
    rep.kv("iip", res.holds)
    rep.kv("iip_candidates", res.candidates)
    rep.kv("iip_failures", res.failures)
    if res.witness is not None:
        w = res.witness
        ideal = an.ideal_generated(alg, [w])
        rep.kv("iip_witness", repr(w))
        rep.kv("witness_ideal_dim", ideal.dim)
        rep.kv("witness_ideal_meet_A_dim", an.intersect_with_A(alg, ideal).dim)
    comm = an.commutant_per_formula(alg)
    rep.kv("commutant_dim", comm.dim)
    rep.check("commutant_formula_matches_linear", comm == an.commutant_linear(alg))

    # the ideal generated by u_abs, compared with the span A_X u_abs + A_X u_sqr + A_Y u_sqrt
    ideal = an.ideal_generated(alg, [alg.u("abs")])
    meet = an.intersect_with_A(alg, ideal)
    claimed = _span_of(alg, {"abs", "sqr", "sqrt"})
    rep.kv("ideal(u_abs)_dim", ideal.dim)
    rep.kv("ideal(u_abs)_meet_A_dim", meet.dim)
    for r in meet.rows:
        rep.kv("ideal(u_abs)_meet_A", fmt_vec(alg, r))
    rep.kv("span(abs,sqr,sqrt)_dim", claimed.dim)
    rep.kv("span(abs,sqr,sqrt)_is_ideal", an.is_ideal(alg, claimed))
    leak = alg.u("sqrt") * alg.u("sqr")
    rep.kv("u_sqrt*u_sqr", repr(leak))
    rep.check(
        "ideal(u_abs)_equals_span(abs,sqr,sqrt)",
        ideal == claimed,
        "u_sqrt*u_abs*u_sqr=" + repr(alg.u("sqrt") * alg.u("abs") * alg.u("sqr")),
    )
    rep.check("ideal(u_abs)_meets_A_trivially", meet.dim == 0)


def reproduce_truncated_monoid(rep: Report, seed: int) -> None:
    r = an.truncated_monoid_counterexample(bound=8, sample_count=100, seed=seed)
    for ln in r.lines():
        rep.line(ln)
    rep.check("every_degree_moves_X", len(r.moved) == r.bound)
    rep.check("u0_coefficient_always_zero", r.zero_constant_part == r.samples)


REPRODUCTIONS = ("example19", "example19-discrete", "prop9b")


def cmd_reproduce(args, rep: Report) -> None:
    which = args.file
    rep.kv("example", which)
    if which == "example19":
        reproduce_symbolic_product(rep)
    elif which == "example19-discrete":
        reproduce_discrete_model(rep)
    elif which == "prop9b":
        reproduce_truncated_monoid(rep, args.seed)
    else:
        raise ParseError(None, f"unknown example {which!r}; choose from {', '.join(REPRODUCTIONS)}")


COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "commutant": cmd_commutant,
    "ideal": cmd_ideal,
    "iip": cmd_iip,
    "theorems": cmd_theorems,
    "random": cmd_random,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewcat", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=list(COMMANDS))
    ap.add_argument("file", nargs="?", help="system file, or the example name for 'reproduce'")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--profile", default="all")
    ap.add_argument("--cap", type=int, default=None, help="dimension cap for linear algebra and enumeration")
    ap.add_argument("--coeff", default=None, help="Q, Fp <p>, Zmod <m> or formal")
    ap.add_argument("--gens", default=None, help="';'-separated element literals or element names")
    mode = ap.add_mutually_exclusive_group()
    mode.add_argument("--brute", action="store_true", help="exhaustive ideal enumeration (default)")
    mode.add_argument("--search", action="store_true", help="bounded search for a witness")
    return ap


def main(argv=None, out=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    rep = Report(out)
    err = _sys.stderr
    if args.command not in ("random",) and not args.file:
        err.write(f"skewcat {args.command}: missing file argument\n")
        return 2
    if args.count < 0 or (args.cap is not None and args.cap < 1):
        err.write("skewcat: --count and --cap must be positive\n")
        return 2
    default_cap = an.IIP_CAP if args.command == "iip" and not args.search else an.LINEAR_CAP
    if args.cap is not None and args.cap > default_cap:
        err.write(f"warning: --cap {args.cap} exceeds the default {default_cap}; this may be slow\n")
    rep.kv("command", " ".join([args.command] + ([args.file] if args.file else [])))
    try:
        COMMANDS[args.command](args, rep)
    except (ParseError, ValueError, CategoryError, OSError) as e:
        err.write(f"error: {e}\n")
        return 2
    except an.DimensionCap as e:
        err.write(f"error: {e}\n")
        return 2
    except (an.FormalContext, an.NonFiniteField) as e:
        err.write(f"error: {e}\n")
        return 2
    except an.OracleMismatch as e:
        rep.kv("witness", f"oracle mismatch: {e}")
        return 1
    return 1 if rep.failed else 0


def main_exit() -> None:
    raise SystemExit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
