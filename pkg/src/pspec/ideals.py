"""Decision procedures on ideals for a :class:`PoissonStructure`.

Poisson and residually-null tests, the membership pattern ``gamma(P)`` of the
``s_i``/``t_i`` in an ideal, pencil ideals ``(lambda_i s_i - mu_i t_i)``,
classification of Poisson maximal ideals at rational points, verification of
user-supplied primitive-ideal candidates, and the smoothness criterion for
fibres of ``(s_1, ..., s_{n-2})`` when every ``t_i = 1``.

Primality and minimality are never decided here; candidates are supplied by
the caller and only their checkable properties are verified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bracket import PoissonStructure, RatFunc, jacobian_rank, maximal_minor
from .groebner import GREVLEX, IdealHandle, MonomialOrder
from .poly import Poly, Scalar


def _ideal(S: PoissonStructure, gens: Sequence[Poly], order: MonomialOrder = GREVLEX) -> IdealHandle:
    return IdealHandle(gens, order, S.nvars)


def _as_ideal(S: PoissonStructure, I) -> IdealHandle:
    if isinstance(I, IdealHandle):
        if I.nvars != S.nvars:
            raise ValueError(f"ideal has {I.nvars} variables, structure has {S.nvars}")
        return I
    return _ideal(S, list(I))


# -- Poisson and residually null ---------------------------------------------


def is_poisson_ideal(S: PoissonStructure, I) -> bool:
    """``{g, x_j}`` lies in ``I`` for every generator ``g`` and every ``j``.

    Enough because each ``{-, x_j}`` is a derivation and ``I`` is an ideal.
    """
    I = _as_ideal(S, I)
    xs = Poly.gens(S.nvars)
    return all(I.contains(S.bracket(g, x)) for g in I.gens if g for x in xs)


def is_residually_null(S: PoissonStructure, I) -> bool:
    """Every generator bracket ``{x_i, x_j}`` lies in ``I``."""
    I = _as_ideal(S, I)
    return all(I.contains(b) for b in S.table().values())


def first_nonvanishing_bracket(S: PoissonStructure, I):
    """``((i, j), {x_i, x_j})`` for the first bracket outside ``I``, or ``None``."""
    I = _as_ideal(S, I)
    for ij, b in sorted(S.table().items()):
        if not I.contains(b):
            return ij, b
    return None


# -- gamma ---------------------------------------------------------------------


@dataclass(frozen=True)
class GammaSequence:
    entries: tuple

    @property
    def dense(self) -> bool:
        return all(e != (0, 0) for e in self.entries)

    def __str__(self) -> str:
        return "(" + ",".join(f"({a},{b})" for a, b in self.entries) + ")"


@dataclass(frozen=True)
class GammaData:
    gamma: GammaSequence
    S_gamma: tuple
    V_gamma: tuple | None

    @property
    def dense(self) -> bool:
        return self.gamma.dense

    @property
    def M_gamma_generators(self) -> tuple:
        return self.S_gamma


def gamma_of(S: PoissonStructure, P) -> GammaData:
    """Which of ``s_i``, ``t_i`` avoid ``P``, and the induced ``S``/``V`` data."""
    P = _as_ideal(S, P)
    if S.pairs is None:
        raise ValueError("gamma needs a structure built from (s, t) pairs")
    if not P.is_proper():
        raise ValueError("gamma is only defined for proper ideals")
    entries = []
    members = []
    for s, t in S.pairs:
        g = 0 if P.contains(s) else 1
        d = 0 if P.contains(t) else 1
        entries.append((g, d))
        if g:
            members.append(s)
        if d:
            members.append(t)
    gamma = GammaSequence(tuple(entries))
    V = None
    if gamma.dense:
        V = tuple(RatFunc(s, t) if d else RatFunc(t, s) for (s, t), (_, d) in zip(S.pairs, entries))
    return GammaData(gamma, tuple(members), V)


# -- pencils -------------------------------------------------------------------


@dataclass(frozen=True)
class PencilSpec:
    lambdas: tuple
    mus: tuple

    def __post_init__(self):
        lambdas = tuple(Fraction(v) for v in self.lambdas)
        mus = tuple(Fraction(v) for v in self.mus)
        if len(lambdas) != len(mus):
            raise ValueError("lambdas and mus must have the same length")
        for i, (lam, mu) in enumerate(zip(lambdas, mus), start=1):
            if not lam and not mu:
                raise ValueError(f"(lambda_{i}, mu_{i}) must not be (0, 0)")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "mus", mus)


def pencil_generators(S: PoissonStructure, spec: PencilSpec) -> list:
    if S.pairs is None:
        raise ValueError("pencils need a structure built from (s, t) pairs")
    if len(spec.lambdas) != len(S.pairs):
        raise ValueError(f"need {len(S.pairs)} pencil parameters, got {len(spec.lambdas)}")
    return [s.scale(lam) - t.scale(mu) for (s, t), lam, mu in zip(S.pairs, spec.lambdas, spec.mus)]


def pencil_ideal(S: PoissonStructure, spec: PencilSpec, order: MonomialOrder = GREVLEX) -> IdealHandle:
    """The ideal generated by ``lambda_i s_i - mu_i t_i``; always a Poisson ideal."""
    return _ideal(S, pencil_generators(S, spec), order)


# -- points --------------------------------------------------------------------


def _rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, len(m)):
            f = m[r][c] / m[rank][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass
class ClassificationReport:
    """Verdict on whether the maximal ideal at ``point`` is Poisson.

    ``condition1`` is the first index ``i`` with ``s_i(p) = t_i(p) = 0``.
    ``condition2`` says the ``g_i = t_i(p) s_i - s_i(p) t_i`` are algebraically
    dependent and ``condition3`` that ``p`` is a singular point of the variety
    they cut out; each is only evaluated when the earlier ones fail.
    """

    point: tuple
    condition1: int | None
    condition2: bool
    condition3: bool | None
    direct_verdict: bool
    final: bool
    g: tuple = ()
    gradient_rank: int | None = None
    witness: tuple | None = None

    @property
    def deciding_condition(self) -> int | None:
        if self.condition1 is not None:
            return 1
        if self.condition2:
            return 2
        if self.condition3:
            return 3
        return None

    @property
    def consistent(self) -> bool:
        return self.final == self.direct_verdict


def classify_point(S: PoissonStructure, p: Sequence[Scalar]) -> ClassificationReport:
    if S.pairs is None:
        raise ValueError("classification needs a structure built from (s, t) pairs")
    if len(p) != S.nvars:
        raise ValueError(f"point has {len(p)} coordinates, expected {S.nvars}")
    p = tuple(Fraction(v) for v in p)

    witness = None
    for ij, b in sorted(S.table().items()):
        value = b.evaluate(p)
        if value:
            witness = (ij, value)
            break
    direct = witness is None

    values = [(s.evaluate(p), t.evaluate(p)) for s, t in S.pairs]
    cond1 = next((i for i, (sv, tv) in enumerate(values, start=1) if not sv and not tv), None)
    if cond1 is not None:
        return ClassificationReport(p, cond1, False, None, direct, True, witness=witness)

    g = tuple(t.evaluate(p) * s - s.evaluate(p) * t for s, t in S.pairs)
    k = len(g)
    cond2 = jacobian_rank(g) < k
    if cond2:
        return ClassificationReport(p, None, True, None, direct, True, g=g, witness=witness)

    rank = _rational_rank([[d.evaluate(p) for d in gi.gradient()] for gi in g])
    cond3 = rank < k
    return ClassificationReport(p, None, False, cond3, direct, cond3, g=g,
                                gradient_rank=rank, witness=witness)


def point_ideal(p: Sequence[Scalar]) -> IdealHandle:
    n = len(p)
    return IdealHandle([Poly.var(i, n) - Fraction(v) for i, v in enumerate(p, start=1)], nvars=n)


# -- primitive candidates ------------------------------------------------------


class CandidateError(ValueError):
    pass


@dataclass
class PrimitiveReport:
    pencil: IdealHandle
    pencil_proper: bool
    pencil_poisson: bool
    pencil_residually_null: bool
    candidate: IdealHandle | None = None
    candidate_contains_pencil: bool | None = None
    candidate_poisson: bool | None = None
    candidate_residually_null: bool | None = None
    not_checked: tuple = field(default=("primality", "minimality"))

    @property
    def subject_residually_null(self) -> bool:
        if self.candidate is not None:
            return bool(self.candidate_residually_null)
        return self.pencil_residually_null

    @property
    def verdict(self) -> str:
        if self.subject_residually_null:
            return "residually null: not Poisson primitive"
        poisson = self.candidate_poisson if self.candidate is not None else self.pencil_poisson
        if not poisson:
            return "not a Poisson ideal"
        return "proper Poisson: Poisson primitive if prime and minimal over the pencil ideal"


def analyze_primitive_candidate(S: PoissonStructure, spec: PencilSpec, candidate=None) -> PrimitiveReport:
    I = pencil_ideal(S, spec)
    if not I.is_proper():
        raise CandidateError("pencil ideal is improper (it is the whole ring)")
    report = PrimitiveReport(
        pencil=I,
        pencil_proper=True,
        pencil_poisson=is_poisson_ideal(S, I),
        pencil_residually_null=is_residually_null(S, I),
    )
    if candidate is not None:
        P = _as_ideal(S, candidate)
        if not P.contains_ideal(I):
            raise CandidateError("candidate does not contain the pencil ideal")
        if not P.is_proper():
            raise CandidateError("candidate is the whole ring")
        report.candidate = P
        report.candidate_contains_pencil = True
        report.candidate_poisson = is_poisson_ideal(S, P)
        report.candidate_residually_null = is_residually_null(S, P)
    return report


# -- smoothness ----------------------------------------------------------------


def singular_locus_ideal(S: PoissonStructure, mus: Sequence[Scalar]) -> IdealHandle:
    """``(s_i - mu_i) + (maximal minors of the Jacobian of the s_i)``."""
    if S.pairs is None:
        raise ValueError("smoothness needs a structure built from (s, t) pairs")
    if any(t != 1 for _, t in S.pairs):
        raise ValueError("smoothness check requires every t_i = 1")
    if len(mus) != len(S.pairs):
        raise ValueError(f"need {len(S.pairs)} values of mu, got {len(mus)}")
    ss = [s for s, _ in S.pairs]
    if jacobian_rank(ss) < len(ss):
        raise ValueError("s_1, ..., s_{n-2} are algebraically dependent")
    jac = [s.gradient() for s in ss]
    minors = [maximal_minor(jac, i, j) for i, j in itertools.combinations(range(1, S.nvars + 1), 2)]
    gens = [s - Fraction(mu) for s, mu in zip(ss, mus)] + [m for m in minors if m]
    return _ideal(S, gens)


def smoothness_check(S: PoissonStructure, mus: Sequence[Scalar]) -> bool:
    """True iff the fibre ``s_i = mu_i`` has no singular point over the complex numbers."""
    return not singular_locus_ideal(S, mus).is_proper()
