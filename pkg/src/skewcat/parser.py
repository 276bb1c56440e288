"""Line-oriented system files and element literals.

A category file declares objects, morphisms, composites, point sets, actions
and a coefficient ring::

    object X
    object Y
    morphism sqr : Y -> X        # d(sqr) = Y, c(sqr) = X
    morphism sqrt : X -> Y
    compose sqrt . sqr = id_Y    # sqrt after sqr
    space X = {-1, 0, 1}
    space Y = {0, 1}
    map sqr : -1 -> 1, 0 -> 0, 1 -> 1   # acts from space(c) to space(d)
    coeff Fp 2
    element b = {-1:1, 1:1}@X u[sqr] + 1 u[id_Y]

A partial-system file lists maps between subsets of an ambient set; the
system is closed under identities and composites before use::

    ambient = {-1, 0, 1}
    subset Y = {0, 1}
    pmap sqr : {-1, 0, 1} -> Y ; -1 -> 1, 0 -> 0, 1 -> 1

Identities ``id_<object>`` are implicit.  Declaration order fixes the basis
order.  Points are integers when they parse as such, otherwise strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .category import CategoryError, FinCategory, Violation
from .coeff import QQ, FormalRing, FunctionRing, IntegersMod, parse_formal
from .dynsys import FinDynSys, PartialMap, PartialSystem, close_partial_system, is_closed, partial_to_category_system
from .skewalg import SkewAlgebra, SkewElem


class ParseError(ValueError):
    def __init__(self, line: int | None, msg: str):
        self.line = line
        self.msg = msg
        super().__init__(f"line {line}: {msg}" if line else msg)


_NAME = r"[A-Za-z_][\w'∘]*"


def parse_point(tok: str):
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        pass
    if not tok or any(c in tok for c in "{},:;"):
        raise ValueError(f"bad point {tok!r}")
    return tok


def parse_set(text: str) -> list:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"expected a set in braces, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return []
    pts = [parse_point(t) for t in body.split(",")]
    if len(set(pts)) != len(pts):
        raise ValueError("repeated point in set")
    return pts


def parse_pairs(text: str) -> dict:
    """``a -> b, c -> d`` as a dict."""
    out = {}
    text = text.strip()
    if not text:
        return out
    for item in text.split(","):
        if "->" not in item:
            raise ValueError(f"expected 'point -> point', got {item.strip()!r}")
        a, b = item.split("->", 1)
        a = parse_point(a)
        if a in out:
            raise ValueError(f"point {a} mapped twice")
        out[a] = parse_point(b)
    return out


_COEFF = re.compile(r"^(?:(?P<q>Q|QQ)|(?:F|Fp|GF)\s*(?P<p>\d+)|(?:Z|Zmod)\s*(?P<m>\d+)|(?P<formal>formal))$")


def parse_coeff(text: str):
    """A scalar ring (``Q``, ``Fp 2``/``F2``/``GF2``, ``Zmod 4``/``Z4``) or the string ``"formal"``."""
    m = _COEFF.match(text.strip())
    if not m:
        raise ValueError(f"unknown coefficient ring {text.strip()!r}")
    if m["q"]:
        return QQ
    if m["formal"]:
        return "formal"
    if m["p"]:
        ring = IntegersMod(int(m["p"]))
        if not ring.is_field:
            raise ValueError(f"{m['p']} is not prime")
        return ring
    return IntegersMod(int(m["m"]))


@dataclass
class SystemFile:
    sys: FinDynSys
    coeff: object = None
    elements: dict[str, tuple[int, str]] = field(default_factory=dict)
    partial: PartialSystem | None = None
    partial_closed: bool = True
    violations: list[Violation] = field(default_factory=list)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_system(text: str) -> SystemFile:
    lines = [(i + 1, _strip(raw)) for i, raw in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if any(ln.startswith(("ambient", "pmap", "subset")) for _, ln in lines):
        return _parse_partial(lines)
    return _parse_category(lines)


def _common(no: int, ln: str, out: dict) -> bool:
    """Handle ``coeff`` and ``element`` lines shared by both formats."""
    if ln.startswith("coeff ") or ln == "coeff":
        if out["coeff"] is not None:
            raise ParseError(no, "coefficient ring declared twice")
        try:
            out["coeff"] = parse_coeff(ln[5:])
        except ValueError as e:
            raise ParseError(no, str(e)) from None
        return True
    if ln.startswith("element "):
        m = re.match(rf"^element\s+({_NAME})\s*=\s*(.+)$", ln)
        if not m:
            raise ParseError(no, "expected 'element NAME = literal'")
        if m[1] in out["elements"]:
            raise ParseError(no, f"element {m[1]} defined twice")
        out["elements"][m[1]] = (no, m[2])
        return True
    return False


def _parse_category(lines) -> SystemFile:
    objects: list[str] = []
    morphisms: dict[str, tuple[str, str]] = {}
    table: dict[tuple[str, str], str] = {}
    space: dict[str, list] = {}
    action: dict[str, dict] = {}
    out = {"coeff": None, "elements": {}}
    where: dict[str, int] = {}
    for no, ln in lines:
        if _common(no, ln, out):
            continue
        try:
            if m := re.match(rf"^object\s+({_NAME})$", ln):
                if m[1] in objects:
                    raise ParseError(no, f"object {m[1]} declared twice")
                objects.append(m[1])
            elif m := re.match(rf"^morphism\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})$", ln):
                name, d, c = m.groups()
                if name in morphisms or name.startswith("id_"):
                    raise ParseError(no, f"morphism name {name} is taken")
                for o in (d, c):
                    if o not in objects:
                        raise ParseError(no, f"unknown object {o}")
                morphisms[name] = (d, c)
            elif m := re.match(rf"^compose\s+({_NAME})\s+\.\s+({_NAME})\s*=\s*({_NAME})$", ln):
                a, b, n = m.groups()
                if (a, b) in table:
                    raise ParseError(no, f"composite {a} . {b} given twice")
                table[a, b] = n
            elif m := re.match(rf"^space\s+({_NAME})\s*=\s*(.*)$", ln):
                if m[1] not in objects:
                    raise ParseError(no, f"unknown object {m[1]}")
                if m[1] in space:
                    raise ParseError(no, f"space {m[1]} given twice")
                space[m[1]] = parse_set(m[2])
            elif m := re.match(rf"^map\s+({_NAME})\s*:(.*)$", ln):
                if m[1] in action:
                    raise ParseError(no, f"map {m[1]} given twice")
                action[m[1]] = parse_pairs(m[2])
                where[m[1]] = no
            else:
                raise ParseError(no, f"cannot parse {ln!r}")
        except ValueError as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(no, str(e)) from None
    if not objects:
        raise ParseError(None, "no objects declared")
    for e in objects:
        space.setdefault(e, [])
    try:
        cat = FinCategory(objects, morphisms, table)
    except CategoryError as e:
        raise ParseError(None, str(e)) from None
    for n, no in where.items():
        if n not in cat.index:
            raise ParseError(no, f"map for unknown morphism {n}")
    sys = FinDynSys(cat, space, action)
    from .dynsys import check_category_and_action

    return SystemFile(sys, out["coeff"], out["elements"], violations=check_category_and_action(sys))


def _parse_partial(lines) -> SystemFile:
    ambient = None
    names: dict[str, frozenset] = {}
    maps: list[PartialMap] = []
    out = {"coeff": None, "elements": {}}

    def subset(tok: str, no: int) -> frozenset:
        tok = tok.strip()
        if tok in names:
            return names[tok]
        return frozenset(parse_set(tok))

    for no, ln in lines:
        if _common(no, ln, out):
            continue
        try:
            if m := re.match(r"^ambient\s*=\s*(.*)$", ln):
                if ambient is not None:
                    raise ParseError(no, "ambient set given twice")
                ambient = tuple(parse_set(m[1]))
            elif m := re.match(rf"^subset\s+({_NAME})\s*=\s*(.*)$", ln):
                if m[1] in names:
                    raise ParseError(no, f"subset {m[1]} given twice")
                s = frozenset(parse_set(m[2]))
                if s in names.values():
                    raise ParseError(no, f"subset {m[1]} repeats another name")
                names[m[1]] = s
            elif m := re.match(rf"^pmap\s+({_NAME})\s*:\s*(.+?)\s*->\s*([^;]+?)\s*;(.*)$", ln):
                name = m[1]
                if any(f.name == name for f in maps):
                    raise ParseError(no, f"map {name} given twice")
                maps.append(PartialMap.make(name, subset(m[2], no), subset(m[3], no), parse_pairs(m[4])))
            else:
                raise ParseError(no, f"cannot parse {ln!r}")
        except ValueError as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(no, str(e)) from None
    if ambient is None:
        raise ParseError(None, "missing 'ambient = {...}'")
    p = PartialSystem(ambient, tuple(maps), {s: n for n, s in names.items()})
    errs = p.check()
    if errs:
        raise ParseError(None, "; ".join(errs))
    closed = is_closed(p)
    try:
        sys = partial_to_category_system(close_partial_system(p))
    except CategoryError as e:
        raise ParseError(None, str(e)) from None
    return SystemFile(sys, out["coeff"], out["elements"], partial=p, partial_closed=closed)


def load_system(path: str) -> SystemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


def make_algebra(sf: SystemFile | FinDynSys, coeff=None) -> SkewAlgebra:
    """The skew algebra of a parsed file; ``coeff`` overrides the file's ring (default Q)."""
    sys = sf.sys if isinstance(sf, SystemFile) else sf
    ring = coeff if coeff is not None else getattr(sf, "coeff", None)
    if ring is None:
        ring = QQ
    if ring == "formal":
        return SkewAlgebra(sys.cat, FormalRing(sys.cat))
    return SkewAlgebra.of_system(sys, ring)


_TERM = re.compile(rf"^(?P<coeff>.*?)\s*\*?\s*u\[\s*(?P<m>[^\]\s]+)\s*\]$")


def _split_terms(text: str) -> list[tuple[int, str]]:
    """Top-level ``+``/``-`` separated terms with their signs."""
    out, depth, cur, sign = [], 0, [], 1
    for ch in text:
        if ch in "{([":
            depth += 1
        elif ch in "})]":
            depth -= 1
        if depth == 0 and ch in "+-" and "".join(cur).strip():
            if re.search(r"u\[[^\]]*\]\s*$", "".join(cur)):
                out.append((sign, "".join(cur).strip()))
                cur, sign = [], (1 if ch == "+" else -1)
                continue
        cur.append(ch)
    if "".join(cur).strip():
        out.append((sign, "".join(cur).strip()))
    return out


def _parse_fn(text: str, ring: FunctionRing, obj: str):
    m = re.match(rf"^(\{{.*\}})\s*(?:@\s*({_NAME}))?$", text)
    if not m:
        return None
    if m[2] is not None and m[2] != obj:
        raise ValueError(f"function lives on {m[2]} but the morphism needs {obj}")
    body = m[1][1:-1].strip()
    vals = {}
    for item in body.split(",") if body else []:
        if ":" not in item:
            raise ValueError(f"expected 'point: value', got {item.strip()!r}")
        x, v = item.rsplit(":", 1)
        x = parse_point(x)
        if x not in ring.sys.point_index[obj]:
            raise ValueError(f"point {x} is not in the space of {obj}")
        vals[x] = Fraction(v.strip())
    return ring.element(obj, [vals.get(x, 0) for x in ring.sys.space[obj]])


def parse_element(text: str, alg: SkewAlgebra) -> SkewElem:
    """Parse ``<coeff> u[n] + ...``.

    A coefficient is a scalar (a constant function), a function literal
    ``{x: v, ...}@obj`` (unlisted points are zero) or, in a formal algebra,
    a sum of symbols such as ``(f_X g_X')``.  A missing coefficient is 1.
    """
    cat = alg.cat
    text = text.strip()
    if not text:
        raise ValueError("empty element")
    if text == "0":
        return alg.zero()
    acc = alg.zero()
    for sign, term in _split_terms(text):
        neg = sign < 0
        if term.startswith("-"):
            neg, term = not neg, term[1:].strip()
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse term {term!r}")
        n = m["m"]
        if n not in cat.index:
            raise ValueError(f"unknown morphism {n}")
        home = cat.cod(n)
        ctext = m["coeff"].strip()
        if ctext.startswith("(") and ctext.endswith(")") and alg.is_formal:
            ctext = ctext[1:-1]
        if alg.is_formal:
            a = parse_formal(ctext, alg.coeffs, home) if ctext else alg.coeffs.one(home)
        else:
            ring = alg.coeffs
            if not ctext:
                a = ring.one(home)
            elif (a := _parse_fn(ctext, ring, home)) is None:
                try:
                    c = Fraction(ctext)
                except ValueError:
                    raise ValueError(f"cannot parse coefficient {ctext!r}") from None
                a = ring.const(home, c)
        if neg:
            a = -a
        acc = acc + alg.u(n, a)
    return acc


def parse_elements(text: str, alg: SkewAlgebra, named: dict | None = None) -> list[SkewElem]:
    """Semicolon separated literals; a bare name refers to an ``element`` line."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if named and part in named:
            no, lit = named[part]
            try:
                out.append(parse_element(lit, alg))
            except ValueError as e:
                raise ParseError(no, str(e)) from None
        else:
            out.append(parse_element(part, alg))
    return out
