"""Reference computations that share no code with the package.

sympy handles the symbolic side; the bounded-degree membership search and the
brute-force linear factor search are plain enumeration over Fractions.
"""

import itertools
import random
from fractions import Fraction

import sympy

from pspec import Poly


def symbols(n):
    return sympy.symbols(f"x1:{n + 1}")


def to_sympy(f: Poly, xs=None):
    xs = xs or symbols(f.nvars)
    return sympy.Add(*[
        sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[x**e for x, e in zip(xs, m)])
        for m, c in f.terms.items()
    ])


def from_sympy(expr, n):
    xs = symbols(n)
    p = sympy.Poly(sympy.expand(expr), *xs)
    return Poly({m: Fraction(int(c.p), int(c.q)) for m, c in p.terms()}, n)


def random_poly(rng: random.Random, n: int, degree: int, nterms: int = 4, coeffs=range(-3, 4)) -> Poly:
    terms = {}
    for _ in range(nterms):
        d = rng.randint(0, degree)
        m = [0] * n
        for _ in range(d):
            m[rng.randrange(n)] += 1
        terms[tuple(m)] = Fraction(rng.choice([c for c in coeffs if c]))
    return Poly(terms, n)


def jacobian_bracket(pairs, f: Poly, g: Poly, n: int):
    """``(t1...t_{n-2})^2 * det Jac(f, g, s1/t1, ...)`` computed by sympy."""
    xs = symbols(n)
    funcs = [to_sympy(f, xs), to_sympy(g, xs)] + [to_sympy(s, xs) / to_sympy(t, xs) for s, t in pairs]
    jac = sympy.Matrix([[sympy.diff(h, x) for x in xs] for h in funcs])
    scale = sympy.Mul(*[to_sympy(t, xs) for _, t in pairs]) ** 2
    return sympy.expand(sympy.cancel(scale * jac.det()))


def _monomials(n, max_deg):
    for d in range(max_deg + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            m = [0] * n
            for i in combo:
                m[i] += 1
            yield tuple(m)


def _solvable(columns, target):
    """Whether ``target`` lies in the rational span of ``columns`` (dict vectors)."""
    keys = sorted(set().union(target, *columns))
    rows = [[col.get(k, Fraction(0)) for col in columns] + [target.get(k, Fraction(0))] for k in keys]
    ncols = len(columns)
    rank = 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                factor = rows[r][c] / rows[rank][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return all(not row[-1] for row in rows[rank:])


def bounded_membership(f: Poly, gens, max_deg: int = 4) -> bool:
    """Search for ``f = sum h_i g_i`` with every ``deg(h_i g_i) <= max_deg``."""
    n = f.nvars
    columns = []
    for g in gens:
        if not g:
            continue
        for m in _monomials(n, max_deg - g.total_degree()):
            columns.append(dict((g * Poly({m: 1}, n)).terms))
    if not f:
        return True
    return _solvable(columns, dict(f.terms))


def linear_factor_gcd(a: Poly, b: Poly, coeffs=range(-2, 3)) -> Poly:
    """Product of the small monic linear forms dividing both, by enumeration."""
    n = a.nvars
    result = Poly.one(n)
    for vec in itertools.product(coeffs, repeat=n + 1):
        lead = next((c for c in vec[:n] if c), None)
        if lead != 1:
            continue
        form = Poly({tuple(int(i == j) for j in range(n)): c for i, c in enumerate(vec[:n]) if c}, n) + vec[n]
        qa, qb = a, b
        while True:
            ra, rb = _divide(qa, form), _divide(qb, form)
            if ra is None or rb is None:
                break
            qa, qb = ra, rb
            result = result * form
    return result


def _divide(f: Poly, g: Poly):
    q = sympy.div(to_sympy(f), to_sympy(g), *symbols(f.nvars))
    return from_sympy(q[0], f.nvars) if q[1] == 0 else None
