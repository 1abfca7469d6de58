"""Diagonal torus actions ``h.f = f(h_1 x_1, ..., h_n x_n)`` and their weights."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .bracket import PoissonStructure, maximal_minor
from .poly import Poly


@dataclass(frozen=True)
class TorusElement:
    h: tuple

    def __post_init__(self):
        h = tuple(Fraction(v) for v in self.h)
        if any(not v for v in h):
            raise ValueError("torus elements need nonzero entries")
        object.__setattr__(self, "h", h)

    def __len__(self) -> int:
        return len(self.h)

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        if len(other) != len(self):
            raise ValueError("torus elements of different lengths")
        return TorusElement(tuple(a * b for a, b in zip(self.h, other.h)))

    @property
    def product(self) -> Fraction:
        return prod(self.h, start=Fraction(1))


def _element(h) -> TorusElement:
    return h if isinstance(h, TorusElement) else TorusElement(tuple(h))


def act(h, f: Poly) -> Poly:
    """Scale each monomial ``x^e`` of ``f`` by ``h^e``."""
    h = _element(h)
    if len(h) != f.nvars:
        raise ValueError(f"torus element has {len(h)} entries, polynomial has {f.nvars} variables")
    out = {}
    for m, c in f.terms.items():
        w = c
        for hi, e in zip(h.h, m):
            if e:
                w *= hi**e
        out[m] = w
    return Poly(out, f.nvars)


def semi_invariant_weight(h, f: Poly) -> Fraction | None:
    """The scalar ``c`` with ``h.f = c f``, or ``None`` if there is none.

    The zero polynomial has no well-defined weight and gives ``None``.
    """
    if not f:
        return None
    hf = act(h, f)
    m, c = f.leading_term()
    ratio = hf.terms[m] / c
    return ratio if hf == f.scale(ratio) else None


@dataclass
class WeightReport:
    sigma: tuple
    tau: tuple
    rho: Fraction | None
    product: Fraction
    is_in_Hprime: bool

    @property
    def rho_criterion(self) -> bool | None:
        if self.rho is None:
            return None
        return self.rho == self.product


def weight_report(S: PoissonStructure, h) -> WeightReport:
    h = _element(h)
    if S.pairs is None:
        raise ValueError("weights need a structure built from (s, t) pairs")
    if len(h) != S.nvars:
        raise ValueError(f"torus element has {len(h)} entries, structure has {S.nvars} variables")
    sigma = tuple(semi_invariant_weight(h, s) for s, _ in S.pairs)
    tau = tuple(semi_invariant_weight(h, t) for _, t in S.pairs)
    inside = all(w is not None for w in sigma + tau)
    rho = prod(sigma + tau, start=Fraction(1)) if inside else None
    return WeightReport(sigma, tau, rho, h.product, inside)


def poisson_auto_check(S: PoissonStructure, h) -> bool:
    """``h.{x_i, x_j} = h_i h_j {x_i, x_j}`` for all ``i < j``."""
    h = _element(h)
    if len(h) != S.nvars:
        raise ValueError(f"torus element has {len(h)} entries, structure has {S.nvars} variables")
    return all(act(h, b) == b.scale(h.h[i - 1] * h.h[j - 1]) for (i, j), b in S.table().items())


def h_group_check(S: PoissonStructure, h) -> bool:
    """Every maximal minor ``E_ij`` is semi-invariant of weight ``h_i h_j``."""
    h = _element(h)
    if S.E is None:
        raise ValueError("raw-table structures have no E matrix")
    if len(h) != S.nvars:
        raise ValueError(f"torus element has {len(h)} entries, structure has {S.nvars} variables")
    for i, j in itertools.combinations(range(1, S.nvars + 1), 2):
        minor = maximal_minor(S.E, i, j)
        if act(h, minor) != minor.scale(h.h[i - 1] * h.h[j - 1]):
            return False
    return True


def substitution_check(S: PoissonStructure, images: Sequence[Poly], *, anti: bool = False) -> bool:
    """Check that ``x_i -> images[i-1]`` is a Poisson (anti-)automorphism on generators.

    Compares ``theta({x_i, x_j})`` with ``{theta(x_i), theta(x_j)}`` (or its
    negative when ``anti``); bijectivity of ``theta`` is the caller's concern.
    """
    if len(images) != S.nvars:
        raise ValueError(f"need {S.nvars} images, got {len(images)}")
    sign = -1 if anti else 1
    for (i, j), b in S.table().items():
        lhs = b.compose(images)
        rhs = S.bracket(images[i - 1], images[j - 1])
        if lhs != rhs.scale(sign):
            return False
    return True
