"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` is an immutable map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients.  Variables are numbered from 1, so
``Poly.var(1, n)`` is ``x1``; the same 1-based convention is used by
:func:`differentiate` and everywhere else in the package.

The canonical monomial order (used for printing and for normalising gcds and
denominators) is graded lexicographic with ``x1 > x2 > ... > xn``.
"""

from __future__ import annotations

import os
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

Monomial = tuple
Scalar = Union[int, Fraction]

MAX_EXPONENT = 2**31 - 1
DEFAULT_MAX_DEGREE = 64


class DegreeLimitError(ArithmeticError):
    """Raised when an intermediate result exceeds the configured degree guard."""


def max_degree() -> int:
    """Degree guard, read from ``PSPEC_MAX_DEGREE`` on every call."""
    raw = os.environ.get("PSPEC_MAX_DEGREE")
    if not raw:
        return DEFAULT_MAX_DEGREE
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"PSPEC_MAX_DEGREE must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("PSPEC_MAX_DEGREE must be positive")
    return value


def grlex_key(m: Monomial):
    return (sum(m), m)


def grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


def lex_key(m: Monomial):
    return m


canonical_key = grlex_key


def _check_exponents(m: Monomial) -> None:
    for e in m:
        if e < 0:
            raise ValueError(f"negative exponent in monomial {m}")
        if e > MAX_EXPONENT:
            raise OverflowError(f"exponent {e} does not fit in 32 bits")


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables over QQ."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Iterable[int], Scalar] | None = None, nvars: int = 0):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} has length {len(mono)}, expected {nvars}")
            _check_exponents(mono)
            c = Fraction(c)
            if c:
                c = clean.get(mono, 0) + c
                if c:
                    clean[mono] = c
                else:
                    clean.pop(mono, None)
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Poly":
        # terms must already be canonical: tuple keys, nonzero Fraction values
        p = object.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c: Scalar, nvars: int) -> "Poly":
        c = Fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls.constant(1, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        if not 1 <= i <= nvars:
            raise IndexError(f"variable index {i} out of range 1..{nvars}")
        mono = tuple(1 if k == i - 1 else 0 for k in range(nvars))
        return cls._raw({mono: Fraction(1)}, nvars)

    @classmethod
    def gens(cls, nvars: int) -> list:
        return [cls.var(i, nvars) for i in range(1, nvars + 1)]

    # -- basic protocol -----------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial; raises if it is not constant."""
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .parse import print_canonical

        return f"Poly({print_canonical(self)!r}, nvars={self.nvars})"

    def __str__(self) -> str:
        from .parse import print_canonical

        return print_canonical(self)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            c = out.get(m, 0) + c
            if c:
                out[m] = c
            else:
                out.pop(m, None)
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw({m: v * c for m, v in self._terms.items()}, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return Poly.zero(self.nvars)
        if self.total_degree() + other.total_degree() > max_degree():
            raise DegreeLimitError(
                f"product degree {self.total_degree() + other.total_degree()} exceeds "
                f"PSPEC_MAX_DEGREE={max_degree()}"
            )
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                c = out.get(m, 0) + ca * cb
                if c:
                    out[m] = c
                else:
                    del out[m]
        return Poly._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {k!r}")
        if k > MAX_EXPONENT:
            raise OverflowError(f"exponent {k} does not fit in 32 bits")
        if k and self.total_degree() * k > max_degree():
            raise DegreeLimitError(
                f"power degree {self.total_degree() * k} exceeds PSPEC_MAX_DEGREE={max_degree()}"
            )
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- structure ----------------------------------------------------------

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        self._check_index(i)
        return max((m[i - 1] for m in self._terms), default=-1)

    def variables(self) -> list:
        """1-based indices of the variables that actually occur."""
        return [i + 1 for i in range(self.nvars) if any(m[i] for m in self._terms)]

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.nvars:
            raise IndexError(f"variable index {i} out of range 1..{self.nvars}")

    def leading_term(self, key=canonical_key) -> tuple:
        """(monomial, coefficient) of the largest term under ``key``."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=key)
        return m, self._terms[m]

    def leading_coefficient(self, key=canonical_key) -> Fraction:
        return self.leading_term(key)[1]

    def monic(self, key=canonical_key) -> "Poly":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient(key))

    def sorted_terms(self, key=canonical_key) -> list:
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    # -- calculus and evaluation -------------------------------------------

    def diff(self, i: int) -> "Poly":
        self._check_index(i)
        k = i - 1
        out = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                out[m[:k] + (e - 1,) + m[k + 1:]] = c * e
        return Poly._raw(out, self.nvars)

    def gradient(self) -> list:
        return [self.diff(i) for i in range(1, self.nvars + 1)]

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        point = [Fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= x**e
            total += v
        return total

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute ``images[i-1]`` for ``x_i``."""
        if len(images) != self.nvars:
            raise ValueError(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0].nvars
        result = Poly.zero(target)
        cache: dict = {}
        for m, c in self._terms.items():
            term = Poly.constant(c, target)
            for k, e in enumerate(m):
                if e:
                    key = (k, e)
                    if key not in cache:
                        cache[key] = images[k] ** e
                    term = term * cache[key]
            result = result + term
        return result

    # -- changes of ambient ring ------------------------------------------

    def extend(self, extra: int) -> "Poly":
        """Embed into a ring with ``extra`` new trailing variables."""
        pad = (0,) * extra
        return Poly._raw({m + pad: c for m, c in self._terms.items()}, self.nvars + extra)

    def truncate(self, nvars: int) -> "Poly":
        """Drop trailing variables, which must not occur."""
        out = {}
        for m, c in self._terms.items():
            if any(m[nvars:]):
                raise ValueError("polynomial involves a dropped variable")
            out[m[:nvars]] = c
        return Poly._raw(out, nvars)

    # -- division -----------------------------------------------------------

    def divmod_lex(self, other: "Poly") -> tuple:
        """Multivariate division by a single divisor under lex order."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        lm, lc = other.leading_term(lex_key)
        q: dict = {}
        r: dict = {}
        p = dict(self._terms)
        while p:
            m = max(p, key=lex_key)
            c = p[m]
            if all(a >= b for a, b in zip(m, lm)):
                qm = tuple(a - b for a, b in zip(m, lm))
                qc = c / lc
                q[qm] = qc
                for om, oc in other._terms.items():
                    t = _mono_mul(qm, om)
                    v = p.get(t, 0) - qc * oc
                    if v:
                        p[t] = v
                    else:
                        del p[t]
            else:
                r[m] = c
                del p[m]
        return Poly._raw(q, self.nvars), Poly._raw(r, self.nvars)

    def exquo(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        q, r = self.divmod_lex(other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def divides(self, other: "Poly") -> bool:
        if not self:
            return not other
        return not other.divmod_lex(self)[1]

    def gcd(self, other: "Poly") -> "Poly":
        return gcd_poly(self, other)


# -- module-level operations ------------------------------------------------


def differentiate(f: Poly, i: int) -> Poly:
    """Partial derivative of ``f`` with respect to ``x_i`` (1-based)."""
    return f.diff(i)


def evaluate(f: Poly, point: Sequence[Scalar]) -> Fraction:
    return f.evaluate(point)


def variables(nvars: int) -> list:
    return Poly.gens(nvars)


# -- gcd --------------------------------------------------------------------
#
# Recursive: pick the highest-index variable that occurs, view both inputs as
# univariate in it with coefficients in the remaining variables, split off the
# content, and run the subresultant PRS on the primitive parts.


def _as_univariate(f: Poly, k: int) -> dict:
    """Coefficients of ``f`` in ``x_{k+1}``: degree -> Poly with that variable zeroed."""
    parts: dict = {}
    for m, c in f._terms.items():
        e = m[k]
        parts.setdefault(e, {})[m[:k] + (0,) + m[k + 1:]] = c
    return {e: Poly._raw(t, f.nvars) for e, t in parts.items()}


def _from_univariate(coeffs: dict, k: int, nvars: int) -> Poly:
    out: dict = {}
    for e, p in coeffs.items():
        for m, c in p._terms.items():
            out[m[:k] + (e,) + m[k + 1:]] = c
    return Poly._raw(out, nvars)


def _uni_degree(u: dict) -> int:
    return max(u, default=-1)


def _uni_trim(u: dict) -> dict:
    return {e: p for e, p in u.items() if p}


def _uni_prem(a: dict, b: dict, k: int, nvars: int) -> dict:
    """Pseudo-remainder of ``a`` by ``b`` as univariate polynomials."""
    db = _uni_degree(b)
    lb = b[db]
    r = dict(a)
    dr = _uni_degree(r)
    steps = dr - db + 1
    while r and dr >= db:
        lr = r[dr]
        shift = dr - db
        new = {e: p * lb for e, p in r.items()}
        for e, p in b.items():
            t = e + shift
            new[t] = new.get(t, Poly.zero(nvars)) - lr * p
        r = _uni_trim(new)
        dr = _uni_degree(r)
        steps -= 1
    if steps > 0 and r:
        factor = lb**steps
        r = {e: p * factor for e, p in r.items()}
    return r


def _content(u: dict) -> Poly:
    g = None
    for p in u.values():
        g = p if g is None else _gcd(g, p)
        if g.is_constant():
            break
    return g


def _gcd(a: Poly, b: Poly) -> Poly:
    n = a.nvars
    if not a:
        return b.monic() if b else b
    if not b:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Poly.one(n)
    used = set(a.variables()) | set(b.variables())
    k = max(used) - 1
    ua, ub = _as_univariate(a, k), _as_univariate(b, k)
    ca, cb = _content(ua), _content(ub)
    cont = _gcd(ca, cb)
    pa = {e: p.exquo(ca) for e, p in ua.items()}
    pb = {e: p.exquo(cb) for e, p in ub.items()}
    if _uni_degree(pa) < _uni_degree(pb):
        pa, pb = pb, pa
    g = _subresultant_prs(pa, pb, k, n)
    if _uni_degree(g) == 0:
        prim = Poly.one(n)
    else:
        gc = _content(g)
        prim = _from_univariate({e: p.exquo(gc) for e, p in g.items()}, k, n)
    return (prim * cont).monic()


def _subresultant_prs(a: dict, b: dict, k: int, n: int) -> dict:
    """Last nonzero remainder of the subresultant PRS of ``a`` and ``b``."""
    g = Poly.one(n)
    h = Poly.one(n)
    while True:
        delta = _uni_degree(a) - _uni_degree(b)
        r = _uni_prem(a, b, k, n)
        if not r:
            return b
        if _uni_degree(r) == 0:
            return r
        divisor = g * h**delta
        a, b = b, {e: p.exquo(divisor) for e, p in r.items()}
        g = a[_uni_degree(a)]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g**delta).exquo(h ** (delta - 1))


def gcd_poly(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor, monic under the canonical order."""
    if a.nvars != b.nvars:
        raise ValueError(f"variable-count mismatch: {a.nvars} vs {b.nvars}")
    if not a and not b:
        raise ValueError("gcd of two zero polynomials is undefined")
    return _gcd(a, b)


def lcm_poly(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return Poly.zero(a.nvars)
    return (a * b).exquo(gcd_poly(a, b)).monic()
