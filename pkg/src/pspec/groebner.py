"""Buchberger's algorithm over QQ, plus membership, elimination and saturation.

The engine works on dicts ``{monomial: int}`` kept content-free (integer
content divided out, positive leading coefficient); results are converted
back to monic :class:`Poly` values only at the end.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

from .poly import Poly, grevlex_key, grlex_key, lex_key

_BASE_KEYS = {"lex": lex_key, "grlex": grlex_key, "grevlex": grevlex_key}


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order, optionally with an elimination block.

    ``block`` lists 1-based variable indices that dominate all others; within
    the block and within the rest, ``kind`` decides.
    """

    kind: str = "grevlex"
    block: tuple = ()

    def __post_init__(self):
        if self.kind not in _BASE_KEYS:
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "block", tuple(sorted(set(self.block))))

    @cached_property
    def key(self):
        base = _BASE_KEYS[self.kind]
        if not self.block:
            return base
        inside = [i - 1 for i in self.block]
        inside_set = set(inside)

        def block_key(m):
            rest = tuple(e for k, e in enumerate(m) if k not in inside_set)
            return (base(tuple(m[k] for k in inside)), base(rest))

        return block_key


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")


# -- integer-coefficient polynomial helpers ----------------------------------


def _to_int(f: Poly) -> dict:
    terms = f.terms
    if not terms:
        return {}
    den = reduce(math.lcm, (c.denominator for c in terms.values()), 1)
    out = {m: int(c * den) for m, c in terms.items()}
    return _primitive(out)


def _primitive(p: dict, key=None) -> dict:
    if not p:
        return p
    g = reduce(math.gcd, p.values())
    if key is not None and p[max(p, key=key)] < 0:
        g = -g
    if g == 1:
        return p
    return {m: c // g for m, c in p.items()}


def _to_poly(p: dict, nvars: int, key) -> Poly:
    if not p:
        return Poly.zero(nvars)
    lc = p[max(p, key=key)]
    return Poly({m: Fraction(c, lc) for m, c in p.items()}, nvars)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _disjoint(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Basis:
    """Working state of one Buchberger run."""

    def __init__(self, key):
        self.key = key
        self.polys: list = []
        self.leads: list = []
        self.sugar: list = []
        self.active: list = []

    def lead(self, p: dict):
        return max(p, key=self.key)

    def reduce(self, f: dict, sugar: int, among=None) -> tuple:
        """Fraction-free reduction of ``f`` by the active basis."""
        key = self.key
        among = self.active if among is None else among
        p = dict(f)
        r: dict = {}
        while p:
            m = max(p, key=key)
            c = p[m]
            g = next((i for i in among if _divides(self.leads[i], m)), None)
            if g is None:
                r[m] = c
                del p[m]
                continue
            gp = self.polys[g]
            lg = self.leads[g]
            lc = gp[lg]
            d = math.gcd(c, lc)
            a, b = lc // d, c // d
            t = tuple(x - y for x, y in zip(m, lg))
            sugar = max(sugar, sum(t) + self.sugar[g])
            if a != 1:
                p = {k: v * a for k, v in p.items()}
                r = {k: v * a for k, v in r.items()}
            for gm, gc in gp.items():
                mm = tuple(x + y for x, y in zip(t, gm))
                v = p.get(mm, 0) - b * gc
                if v:
                    p[mm] = v
                else:
                    p.pop(mm, None)
            if a != 1 and (p or r):
                content = reduce(math.gcd, list(p.values()) + list(r.values()))
                if content > 1:
                    p = {k: v // content for k, v in p.items()}
                    r = {k: v // content for k, v in r.items()}
        return _primitive(r, key), sugar

    def add(self, p: dict, sugar: int) -> int:
        self.polys.append(p)
        self.leads.append(self.lead(p))
        self.sugar.append(sugar)
        return len(self.polys) - 1


def _update(basis: _Basis, pairs: list, h: int) -> list:
    """Gebauer-Moeller update: add polynomial ``h`` and prune pairs."""
    leads = basis.leads
    lh = leads[h]
    candidates = [(h, g, _lcm(lh, leads[g])) for g in basis.active]
    kept = []
    for idx, (_, g, l1) in enumerate(candidates):
        if _disjoint(lh, leads[g]):
            kept.append((h, g, l1))
            continue
        others = candidates[idx + 1:] + kept
        if any(_divides(l2, l1) for (_, _, l2) in others):
            continue
        kept.append((h, g, l1))
    new_pairs = [pr for pr in kept if not _disjoint(lh, leads[pr[1]])]
    survivors = []
    for (a, b, l) in pairs:
        if _divides(lh, l) and _lcm(leads[a], lh) != l and _lcm(leads[b], lh) != l:
            continue
        survivors.append((a, b, l))
    basis.active = [g for g in basis.active if not _divides(lh, leads[g])] + [h]
    return survivors + new_pairs


def _spoly(basis: _Basis, i: int, j: int, l) -> tuple:
    pi, pj = basis.polys[i], basis.polys[j]
    li, lj = basis.leads[i], basis.leads[j]
    ci, cj = pi[li], pj[lj]
    d = math.gcd(ci, cj)
    ai, aj = cj // d, ci // d
    ti = tuple(x - y for x, y in zip(l, li))
    tj = tuple(x - y for x, y in zip(l, lj))
    out: dict = {}
    for m, c in pi.items():
        mm = tuple(x + y for x, y in zip(ti, m))
        out[mm] = out.get(mm, 0) + ai * c
    for m, c in pj.items():
        mm = tuple(x + y for x, y in zip(tj, m))
        v = out.get(mm, 0) - aj * c
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    out = {m: c for m, c in out.items() if c}
    sugar = max(basis.sugar[i] + sum(ti), basis.sugar[j] + sum(tj))
    return _primitive(out), sugar


def _select(pairs: list, basis: _Basis, strategy: str) -> int:
    if strategy == "fifo":
        return 0
    key = basis.key
    if strategy == "normal":
        return min(range(len(pairs)), key=lambda k: key(pairs[k][2]))
    if strategy == "sugar":
        def sk(k):
            a, b, l = pairs[k]
            s = max(basis.sugar[a] + sum(l) - sum(basis.leads[a]),
                    basis.sugar[b] + sum(l) - sum(basis.leads[b]))
            return (s, key(l))
        return min(range(len(pairs)), key=sk)
    raise ValueError(f"unknown pair-selection strategy {strategy!r}")


def _buchberger(gens: list, key, strategy: str = "sugar") -> list:
    basis = _Basis(key)
    pairs: list = []
    inputs = sorted((g for g in gens if g), key=lambda p: key(max(p, key=key)))
    for g in inputs:
        r, s = basis.reduce(g, max(sum(m) for m in g))
        if not r:
            continue
        if all(not any(m) for m in r):
            return [{next(iter(r)): 1}]
        h = basis.add(r, s)
        pairs = _update(basis, pairs, h)
    while pairs:
        k = _select(pairs, basis, strategy)
        i, j, l = pairs.pop(k)
        sp, s = _spoly(basis, i, j, l)
        if not sp:
            continue
        r, s = basis.reduce(sp, s)
        if not r:
            continue
        if all(not any(m) for m in r):
            return [{next(iter(r)): 1}]
        h = basis.add(r, s)
        pairs = _update(basis, pairs, h)
    return _interreduce(basis)


def _interreduce(basis: _Basis) -> list:
    key = basis.key
    idx = list(basis.active)
    # minimal basis: drop any element whose lead is divisible by another's
    minimal = []
    for i in sorted(idx, key=lambda i: key(basis.leads[i])):
        if not any(_divides(basis.leads[j], basis.leads[i]) for j in minimal):
            minimal.append(i)
    out = []
    for i in minimal:
        others = [j for j in minimal if j != i]
        r, _ = basis.reduce(basis.polys[i], basis.sugar[i], among=others)
        out.append(r)
    out.sort(key=lambda p: key(max(p, key=key)), reverse=True)
    return out


# -- public API --------------------------------------------------------------


STRATEGIES = ("sugar", "normal", "fifo")


def _check_same(polys: Sequence[Poly], nvars: int) -> None:
    for p in polys:
        if p.nvars != nvars:
            raise ValueError(f"variable-count mismatch: expected {nvars}, got {p.nvars}")


def groebner(gens: Sequence[Poly], order: MonomialOrder = GREVLEX, *,
             nvars: int | None = None, strategy: str = "sugar") -> list:
    """Reduced Groebner basis, monic, sorted by leading monomial (descending)."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown pair-selection strategy {strategy!r}")
    gens = list(gens)
    if nvars is None:
        if not gens:
            raise ValueError("cannot infer the variable count of an empty ideal")
        nvars = gens[0].nvars
    _check_same(gens, nvars)
    key = order.key
    result = _buchberger([_to_int(g) for g in gens], key, strategy)
    return [_to_poly(p, nvars, key) for p in result]


def normal_form(f: Poly, G: Sequence[Poly], order: MonomialOrder = GREVLEX) -> Poly:
    """Remainder of multivariate division of ``f`` by ``G`` (full reduction)."""
    G = [g for g in G if g]
    _check_same(G, f.nvars)
    key = order.key
    leads = [g.leading_term(key) for g in G]
    p = dict(f.terms)
    r = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for g, (lm, lc) in zip(G, leads):
            if _divides(lm, m):
                t = tuple(x - y for x, y in zip(m, lm))
                q = c / lc
                for gm, gc in g.terms.items():
                    mm = tuple(x + y for x, y in zip(t, gm))
                    v = p.get(mm, 0) - q * gc
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            r[m] = c
            del p[m]
    return Poly(r, f.nvars)


class IdealHandle:
    """An ideal of ``QQ[x1..xn]`` with a lazily computed reduced Groebner basis."""

    def __init__(self, gens: Iterable[Poly], order: MonomialOrder = GREVLEX,
                 nvars: int | None = None):
        self.gens = tuple(gens)
        if nvars is None:
            if not self.gens:
                raise ValueError("nvars is required for an ideal with no generators")
            nvars = self.gens[0].nvars
        _check_same(self.gens, nvars)
        self.nvars = nvars
        self.order = order
        self._gb = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"IdealHandle({[str(g) for g in self.gens]}, order={self.order.kind})"

    def groebner_basis(self) -> list:
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    self._gb = tuple(groebner(self.gens, self.order, nvars=self.nvars))
        return list(self._gb)

    def reduce(self, f: Poly) -> Poly:
        return normal_form(f, self.groebner_basis(), self.order)

    def contains(self, f: Poly) -> bool:
        if f.nvars != self.nvars:
            raise ValueError(f"variable-count mismatch: expected {self.nvars}, got {f.nvars}")
        if not f:
            return True
        return not self.reduce(f)

    def __contains__(self, f: Poly) -> bool:
        return self.contains(f)

    def contains_ideal(self, other: "IdealHandle") -> bool:
        return all(self.contains(g) for g in other.gens)

    def is_proper(self) -> bool:
        gb = self.groebner_basis()
        return not (len(gb) == 1 and gb[0].is_constant())

    def is_zero(self) -> bool:
        return not self.groebner_basis()

    def same_ideal(self, other: "IdealHandle") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def with_order(self, order: MonomialOrder) -> "IdealHandle":
        return IdealHandle(self.gens, order, self.nvars)


def groebner_basis(I: IdealHandle) -> list:
    return I.groebner_basis()


def contains(I: IdealHandle, f: Poly) -> bool:
    return I.contains(f)


def is_proper(I: IdealHandle) -> bool:
    return I.is_proper()


def eliminate(I: IdealHandle, drop: Iterable[int]) -> IdealHandle:
    """Generators of ``I`` intersected with the ring of the remaining variables.

    ``drop`` holds 1-based indices.  The result lives in the same ambient ring;
    its generators simply do not involve the dropped variables.
    """
    drop = tuple(sorted(set(drop)))
    n = I.nvars
    if not drop:
        return IdealHandle(I.gens, I.order, n)
    if any(not 1 <= i <= n for i in drop):
        raise IndexError(f"variable index out of range 1..{n}: {drop}")
    if len(drop) >= n:
        raise ValueError("cannot eliminate every variable")
    order = MonomialOrder(I.order.kind if I.order.kind != "lex" else "grevlex", drop)
    gb = groebner(I.gens, order, nvars=n)
    dropped = [i - 1 for i in drop]
    kept = [g for g in gb if not any(m[k] for m in g.terms for k in dropped)]
    return IdealHandle(kept, I.order, n)


def saturate(I: IdealHandle, f: Poly) -> IdealHandle:
    """``I : f^oo``, via a fresh variable ``y`` and the ideal ``I + (1 - y f)``."""
    if not f:
        raise ValueError("cannot saturate by zero")
    if f.nvars != I.nvars:
        raise ValueError(f"variable-count mismatch: expected {I.nvars}, got {f.nvars}")
    n = I.nvars
    if f.is_constant():
        return IdealHandle(I.gens, I.order, n)
    y = Poly.var(n + 1, n + 1)
    gens = [g.extend(1) for g in I.gens] + [1 - y * f.extend(1)]
    ext = IdealHandle(gens, I.order, n + 1)
    elim = eliminate(ext, [n + 1])
    return IdealHandle([g.truncate(n) for g in elim.gens], I.order, n)
