"""Jacobian Poisson brackets built from ``n - 2`` rational functions.

Given coprime pairs ``(s_i, t_i)`` on ``n`` variables, the bracket is

    {f, g} = (t_1 ... t_{n-2})^2 * Jac(f, g, s_1/t_1, ..., s_{n-2}/t_{n-2})

Row ``i`` of the ``(n-2) x n`` matrix ``E`` is ``t_i grad(s_i) - s_i grad(t_i)``
and ``{x_i, x_j} = (-1)^(i+j-1) E_ij``, where ``E_ij`` is the maximal minor
with columns ``i`` and ``j`` removed.  Everything else is obtained from that
table by extending biderivationally.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping, Sequence

from .parse import default_names, print_canonical
from .poly import Poly, Scalar, gcd_poly


class StructureError(ValueError):
    """Invalid data for a Poisson structure."""

    def __init__(self, message: str, pair_index: int | None = None):
        self.pair_index = pair_index
        super().__init__(message)


# -- rational functions -----------------------------------------------------


class RatFunc:
    """A reduced fraction ``num / den`` with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.nvars)
        if num.nvars != den.nvars:
            raise ValueError("numerator and denominator live in different rings")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = num, Poly.one(num.nvars)
        elif not den.is_constant():
            g = gcd_poly(num, den)
            if not g.is_constant():
                num, den = num.exquo(g), den.exquo(g)
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            other = RatFunc(other)
        if isinstance(other, (int, Fraction)):
            other = RatFunc(Poly.constant(other, self.nvars))
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return bool(self.num)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc(Poly.constant(other, self.nvars))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def diff(self, i: int) -> "RatFunc":
        return RatFunc(self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den)

    def scaled_gradient(self) -> list:
        """``den^2 * grad(num/den) = den grad(num) - num grad(den)``, as polynomials."""
        return [self.den * self.num.diff(i) - self.num * self.den.diff(i)
                for i in range(1, self.nvars + 1)]

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(point) / d

    def format(self, names: Sequence[str] | None = None) -> str:
        num = print_canonical(self.num, names)
        if self.den == 1:
            return num
        den = print_canonical(self.den, names)
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RatFunc({self.format()!r})"


# -- polynomial matrices ----------------------------------------------------


def _det_cofactor(rows: list) -> Poly:
    k = len(rows)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    nvars = rows[0][0].nvars
    total = Poly.zero(nvars)
    for c in range(k):
        a = rows[0][c]
        if not a:
            continue
        minor = _det_cofactor([row[:c] + row[c + 1:] for row in rows[1:]])
        total = total + a * minor if c % 2 == 0 else total - a * minor
    return total


def _det_bareiss(rows: list) -> Poly:
    m = [list(r) for r in rows]
    k = len(m)
    nvars = m[0][0].nvars
    sign = 1
    prev = Poly.one(nvars)
    for c in range(k - 1):
        if not m[c][c]:
            swap = next((r for r in range(c + 1, k) if m[r][c]), None)
            if swap is None:
                return Poly.zero(nvars)
            m[c], m[swap] = m[swap], m[c]
            sign = -sign
        p = m[c][c]
        for r in range(c + 1, k):
            for j in range(c + 1, k):
                m[r][j] = (p * m[r][j] - m[r][c] * m[c][j]).exquo(prev)
            m[r][c] = Poly.zero(nvars)
        prev = p
    det = m[k - 1][k - 1]
    return det if sign > 0 else -det


def determinant(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square polynomial matrix.

    Cofactor expansion up to 4x4, fraction-free (Bareiss) elimination above.
    """
    rows = [list(r) for r in matrix]
    k = len(rows)
    if k == 0:
        raise ValueError("empty matrix")
    if any(len(r) != k for r in rows):
        raise ValueError("matrix is not square")
    if k <= 4:
        return _det_cofactor(rows)
    return _det_bareiss(rows)


def polynomial_rank(matrix: Sequence[Sequence[Poly]]) -> int:
    """Rank over the fraction field, by fraction-free row reduction."""
    m = [list(r) for r in matrix]
    if not m:
        return 0
    ncols = len(m[0])
    nvars = next((e.nvars for r in m for e in r), 0)
    prev = Poly.one(nvars)
    rank = 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][c]
        for r in range(rank + 1, len(m)):
            a = m[r][c]
            m[r] = [(p * m[r][j] - a * m[rank][j]).exquo(prev) for j in range(ncols)]
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def maximal_minor(matrix: Sequence[Sequence[Poly]], i: int, j: int) -> Poly:
    """Minor of a ``(n-2) x n`` matrix with columns ``i`` and ``j`` (1-based) deleted."""
    rows = [list(r) for r in matrix]
    n = len(rows[0]) if rows else 0
    if len(rows) != n - 2:
        raise ValueError(f"expected an (n-2) x n matrix, got {len(rows)} x {n}")
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise IndexError(f"bad column pair ({i}, {j}) for {n} columns")
    keep = [c for c in range(n) if c not in (i - 1, j - 1)]
    if not keep:
        raise ValueError("matrix has no rows")
    return determinant([[r[c] for c in keep] for r in rows])


# -- the structure ----------------------------------------------------------


class PoissonStructure:
    """Immutable bracket data on ``QQ[x1..xn]``.

    Build instances with :func:`build_structure` (validated) or
    :func:`structure_from_table` (raw table, unvalidated, for negative tests).
    """

    def __init__(self, nvars: int, names: Sequence[str], table: Mapping, *,
                 pairs: Sequence | None = None, E: Sequence | None = None,
                 validated: bool = False):
        self.nvars = nvars
        self.names = tuple(names)
        self.pairs = tuple(pairs) if pairs is not None else None
        self.E = tuple(tuple(r) for r in E) if E is not None else None
        self.validated = validated
        self._table = dict(table)

    def __repr__(self) -> str:
        kind = "validated" if self.validated else "raw"
        return f"<PoissonStructure n={self.nvars} {kind}>"

    @property
    def fs(self) -> list:
        """The rational functions ``s_i / t_i``."""
        if self.pairs is None:
            raise ValueError("raw-table structure has no defining pairs")
        return [RatFunc(s, t) for s, t in self.pairs]

    def var(self, i: int) -> Poly:
        return Poly.var(i, self.nvars)

    def table(self) -> dict:
        """``{(i, j): {x_i, x_j}}`` for ``i < j``."""
        return dict(self._table)

    def generator_bracket(self, i: int, j: int) -> Poly:
        n = self.nvars
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"generator index out of range 1..{n}: ({i}, {j})")
        if i == j:
            return Poly.zero(n)
        if i < j:
            return self._table[(i, j)]
        return -self._table[(j, i)]

    def bracket(self, f: Poly, g: Poly) -> Poly:
        n = self.nvars
        if f.nvars != n or g.nvars != n:
            raise ValueError(f"variable-count mismatch: structure has {n} variables")
        df = f.gradient()
        dg = g.gradient()
        total = Poly.zero(n)
        for (i, j), b in self._table.items():
            if not b:
                continue
            coeff = df[i - 1] * dg[j - 1] - df[j - 1] * dg[i - 1]
            if coeff:
                total = total + coeff * b
        return total

    def format_poly(self, f: Poly) -> str:
        return print_canonical(f, self.names)


def _validate_pair(s: Poly, t: Poly, index: int) -> None:
    if not t:
        raise StructureError(f"pair {index}: t must be nonzero", index)
    if not s:
        # gcd(0, t) = t up to units
        if not t.is_constant():
            raise StructureError(f"pair {index}: s and t not coprime", index)
        return
    if not gcd_poly(s, t).is_constant():
        raise StructureError(f"pair {index}: s and t not coprime", index)


def build_structure(pairs: Sequence, names: Sequence[str] | None = None) -> PoissonStructure:
    """Validate ``(s_i, t_i)`` pairs and precompute ``E`` and the bracket table."""
    pairs = [(s, t) for s, t in pairs]
    if names is not None:
        n = len(names)
    elif pairs:
        n = pairs[0][0].nvars
    else:
        raise StructureError("no pairs given and no variable names to infer n from")
    if n < 3:
        raise StructureError(f"need at least 3 variables, got {n}")
    if len(pairs) != n - 2:
        raise StructureError(f"expected {n - 2} pairs for {n} variables, got {len(pairs)}")
    for k, (s, t) in enumerate(pairs, start=1):
        if s.nvars != n or t.nvars != n:
            raise StructureError(f"pair {k}: polynomials must have {n} variables", k)
        _validate_pair(s, t, k)
    E = [_scaled_row(s, t) for s, t in pairs]
    table = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        minor = maximal_minor(E, i, j)
        table[(i, j)] = minor if (i + j - 1) % 2 == 0 else -minor
    return PoissonStructure(n, names or default_names(n), table, pairs=pairs, E=E, validated=True)


def _scaled_row(s: Poly, t: Poly) -> list:
    return [t * s.diff(k) - s * t.diff(k) for k in range(1, s.nvars + 1)]


def structure_from_table(nvars: int, table: Mapping, names: Sequence[str] | None = None) -> PoissonStructure:
    """Unvalidated structure given directly by ``{(i, j): {x_i, x_j}}``.

    Missing entries are zero; entries with ``i > j`` are read antisymmetrically.
    Nothing guarantees the Jacobi identity, which is the point.
    """
    full = {(i, j): Poly.zero(nvars) for i, j in itertools.combinations(range(1, nvars + 1), 2)}
    for (i, j), b in table.items():
        if not (1 <= i <= nvars and 1 <= j <= nvars) or i == j:
            raise StructureError(f"bad table index ({i}, {j})")
        if b.nvars != nvars:
            raise StructureError(f"table entry ({i}, {j}) has the wrong variable count")
        if i < j:
            full[(i, j)] = b
        else:
            full[(j, i)] = -b
    return PoissonStructure(nvars, names or default_names(nvars), full, validated=False)


# -- operations -------------------------------------------------------------


def generator_bracket(S: PoissonStructure, i: int, j: int) -> Poly:
    return S.generator_bracket(i, j)


def bracket(S: PoissonStructure, f: Poly, g: Poly) -> Poly:
    return S.bracket(f, g)


def bracket_det_crosscheck(S: PoissonStructure, f: Poly, g: Poly) -> Poly:
    """``det J`` with rows ``grad f``, ``grad g`` and the rows of ``E``."""
    if S.E is None:
        raise ValueError("raw-table structures have no E matrix")
    if f.nvars != S.nvars or g.nvars != S.nvars:
        raise ValueError(f"variable-count mismatch: structure has {S.nvars} variables")
    return determinant([f.gradient(), g.gradient(), *S.E])


def bracket_ratfunc(S: PoissonStructure, F, G) -> RatFunc:
    """Bracket of rational functions by the quotient rule.

    ``{p/q, r/u} = (q u {p, r} - q r {p, u} - p u {q, r} + p r {q, u}) / (q u)^2``
    """
    F = F if isinstance(F, RatFunc) else RatFunc(F)
    G = G if isinstance(G, RatFunc) else RatFunc(G)
    p, q = F.num, F.den
    r, u = G.num, G.den
    b = S.bracket
    top = q * u * b(p, r) - q * r * b(p, u) - p * u * b(q, r) + p * r * b(q, u)
    den = q * u
    return RatFunc(top, den * den)


def jacobiator(S: PoissonStructure, f: Poly, g: Poly, h: Poly) -> Poly:
    b = S.bracket
    return b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g))


def plucker_minors_check(M: Sequence[Sequence[Poly]], i: int, j: int, k: int, l: int) -> Poly:
    """Three-term relation ``M_ij M_kl - M_ik M_jl + M_jk M_il`` (always zero)."""
    if not i < j < k < l:
        raise ValueError(f"indices must be strictly increasing, got ({i}, {j}, {k}, {l})")
    mm = lambda a, b: maximal_minor(M, a, b)  # noqa: E731
    return mm(i, j) * mm(k, l) - mm(i, k) * mm(j, l) + mm(j, k) * mm(i, l)


def jacobian_rank(fs: Sequence) -> int:
    """Rank of the Jacobian matrix of ``fs`` over the rational function field.

    ``fs`` are algebraically dependent exactly when the rank is below ``len(fs)``.
    """
    if not fs:
        raise ValueError("need at least one function")
    rows = [(f if isinstance(f, RatFunc) else RatFunc(f)).scaled_gradient() for f in fs]
    return polynomial_rank(rows)


def is_zero_bracket(S: PoissonStructure) -> bool:
    return all(not b for b in S.table().values())
