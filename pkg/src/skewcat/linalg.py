"""Exact linear algebra over Q and prime fields.

Vectors are tuples of field values.  Subspaces are kept in reduced row
echelon form, which is canonical: two subspaces are equal iff their row
lists are equal.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class SubspaceBasis:
    def __init__(self, field, ambient: int, vectors: Iterable[Sequence] = ()):
        if not field.is_field:
            raise ValueError(f"{field} is not a field")
        self.field = field
        self.ambient = ambient
        self.rows: list[tuple] = []
        self.pivots: list[int] = []
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> list:
        F = self.field
        v = [F.coerce(a) for a in v]
        if len(v) != self.ambient:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {self.ambient}")
        z = F.zero
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != z:
                v = [F.sub(a, F.mul(c, b)) if b != z else a for a, b in zip(v, row)]
        return v

    def add(self, v: Sequence) -> bool:
        """Insert ``v``; return True when it enlarged the subspace."""
        F = self.field
        r = self.reduce(v)
        z = F.zero
        p = next((i for i, a in enumerate(r) if a != z), None)
        if p is None:
            return False
        inv = F.inv(r[p])
        r = tuple(F.mul(inv, a) for a in r)
        for k, row in enumerate(self.rows):
            c = row[p]
            if c != z:
                self.rows[k] = tuple(F.sub(a, F.mul(c, b)) if b != z else a for a, b in zip(row, r))
        k = 0
        while k < len(self.pivots) and self.pivots[k] < p:
            k += 1
        self.rows.insert(k, r)
        self.pivots.insert(k, p)
        return True

    def __contains__(self, v) -> bool:
        z = self.field.zero
        return all(a == z for a in self.reduce(v))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.field == other.field and self.ambient == other.ambient and self.rows == other.rows

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient}, field={self.field})"

    def copy(self) -> "SubspaceBasis":
        out = SubspaceBasis(self.field, self.ambient)
        out.rows = list(self.rows)
        out.pivots = list(self.pivots)
        return out

    def issubspace(self, other: "SubspaceBasis") -> bool:
        return all(r in other for r in self.rows)

    def intersect(self, other: "SubspaceBasis") -> "SubspaceBasis":
        """Intersection by solving ``sum a_i u_i == sum b_j w_j`` for the coefficients."""
        F = self.field
        k = self.dim
        cols = list(self.rows) + [tuple(F.neg(a) for a in w) for w in other.rows]
        # matrix with one equation per ambient coordinate
        mat = [[c[i] for c in cols] for i in range(self.ambient)]
        out = SubspaceBasis(F, self.ambient)
        for sol in nullspace(F, mat, len(cols)):
            v = [F.zero] * self.ambient
            for a, u in zip(sol[:k], self.rows):
                if a != F.zero:
                    v = [F.add(x, F.mul(a, y)) for x, y in zip(v, u)]
            out.add(v)
        return out


def rref(field, rows: Iterable[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a matrix given by rows."""
    F = field
    z = F.zero
    m = [[F.coerce(a) for a in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != z), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, a) for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != z:
                f = m[i][c]
                m[i] = [F.sub(a, F.mul(f, b)) if b != z else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(field, rows: Iterable[Sequence], ncols: int) -> list[list]:
    """A basis of ``{v : M v = 0}``."""
    F = field
    red, pivots = rref(F, rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        v = [F.zero] * ncols
        v[f] = F.one
        for row, p in zip(red, pivots):
            v[p] = F.neg(row[f])
        out.append(v)
    return out


def rank(field, rows: Iterable[Sequence], ncols: int) -> int:
    return len(rref(field, rows, ncols)[1])
