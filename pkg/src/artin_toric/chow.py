"""Stanley-Reisner presentation of the rational Chow ring and integration.

On a complete simplicial stacky fan every class can be rewritten so that no
variable appears squared; a square-free monomial whose rays span a cone
``sigma`` stands for ``[V(sigma)] / D_sigma``, which makes top-degree classes
integrable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .classes import ChowClass
from .fan import (
    PreconditionError,
    StackyFan,
    require_complete_simplicial,
    stacky_multiplicity,
)
from .linalg import solve_unique


class DegreeError(PreconditionError):
    pass


class ReductionError(RuntimeError):
    """Internal inconsistency during reduction; cannot happen on validated complete fans."""


@dataclass(frozen=True)
class SRPresentation:
    nrays: int
    linear_relations: tuple[tuple[int, ...], ...]
    minimal_nonfaces: tuple[frozenset, ...]

    def relation_classes(self):
        return [
            ChowClass(self.nrays, {_unit(self.nrays, i): c for i, c in enumerate(row) if c})
            for row in self.linear_relations
        ]

    def nonface_classes(self):
        return [ChowClass.monomial(_indicator(self.nrays, s)) for s in self.minimal_nonfaces]


def _unit(n, i):
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _indicator(n, s):
    return tuple(int(i in s) for i in range(n))


def support(exponent) -> frozenset:
    return frozenset(i for i, e in enumerate(exponent) if e)


def in_some_cone(fan: StackyFan, rays) -> bool:
    s = frozenset(rays)
    return any(s <= c for c in fan.max_cones)


def minimal_nonfaces(fan: StackyFan) -> list[frozenset]:
    """Inclusion-minimal ray sets not contained in any cone."""
    n = fan.nrays
    contained = {frozenset()} | {frozenset(s) for c in fan.max_cones for k in range(1, len(c) + 1) for s in combinations(sorted(c), k)}
    out = set()
    for s in contained:
        for j in range(n):
            if j in s:
                continue
            t = s | {j}
            if t in contained:
                continue
            if all(t - {i} in contained for i in t):
                out.add(t)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def sr_presentation(fan: StackyFan) -> SRPresentation:
    relations = tuple(tuple(v[k] for v in fan.rays) for k in range(fan.rank))
    return SRPresentation(fan.nrays, relations, tuple(minimal_nonfaces(fan)))


def monomial_is_zero(fan: StackyFan, exponent) -> bool:
    return not in_some_cone(fan, support(exponent))


def drop_zero_monomials(fan: StackyFan, cls: ChowClass) -> ChowClass:
    return ChowClass(cls.nvars, {e: c for e, c in cls.items() if not monomial_is_zero(fan, e)})


@dataclass(frozen=True)
class Membership:
    divisibility: bool
    primary_components: bool

    def __bool__(self):
        if self.divisibility != self.primary_components:
            raise ReductionError("irrelevant-ideal membership routes disagree")
        return self.divisibility


def irrelevant_membership(fan: StackyFan, exponent) -> Membership:
    """Membership of a Cox monomial in the irrelevant ideal, decided twice.

    The first route checks divisibility by ``prod(X_rho for rho not in sigma)``
    for some cone ``sigma``; the second checks membership in every prime
    ``(X_rho : rho in S)`` over ray sets ``S`` not contained in a cone.
    """
    supp = support(exponent)
    rays = frozenset(range(fan.nrays))
    by_divisibility = any(rays - c <= supp for c in fan.max_cones)
    by_components = True
    for k in range(1, fan.nrays + 1):
        for s in combinations(range(fan.nrays), k):
            if not in_some_cone(fan, s) and not (supp & set(s)):
                by_components = False
                break
        if not by_components:
            break
    return Membership(by_divisibility, by_components)


def lowest_index(candidates: Sequence[int]) -> int:
    return min(candidates)


def first_lexicographic(cones: Sequence[frozenset]) -> frozenset:
    return min(cones, key=sorted)


class Reducer:
    """Rewrites classes on a complete simplicial fan into square-free form.

    ``pick_variable`` chooses which squared variable to lower (default: the
    lowest ray index) and ``pick_cone`` which maximal cone containing the
    support supplies the basis (default: lexicographically smallest).  Results
    are memoized per monomial, so one reducer should keep one strategy.
    """

    def __init__(
        self,
        fan: StackyFan,
        pick_variable: Callable[[Sequence[int]], int] = lowest_index,
        pick_cone: Callable[[Sequence[frozenset]], frozenset] = first_lexicographic,
        check: bool = True,
    ):
        if check:
            require_complete_simplicial(fan)
        self.fan = fan
        self.pick_variable = pick_variable
        self.pick_cone = pick_cone
        self._memo: dict[tuple, dict] = {}
        self._coeffs: dict[tuple, list[Fraction]] = {}

    def relation(self, cone, ray) -> dict[int, Fraction]:
        """``b`` with ``v_ray + sum(b[i] * v_i for i in cone) == 0``."""
        basis = sorted(cone)
        key = (tuple(basis), ray)
        if key not in self._coeffs:
            self._coeffs[key] = solve_unique([self.fan.rays[i] for i in basis], self.fan.rays[ray])
        return dict(zip(basis, self._coeffs[key]))

    def step(self, exponent):
        """One application of the self-intersection recursion.

        Returns ``(i0, sigma, {new_exponent: coefficient})``, or ``None`` when the
        monomial is already square-free or zero.
        """
        exponent = tuple(exponent)
        supp = support(exponent)
        if not in_some_cone(self.fan, supp):
            return None
        heavy = [i for i, e in enumerate(exponent) if e >= 2]
        if not heavy:
            return None
        i0 = self.pick_variable(heavy)
        options = self.fan.containing_max_cones(supp)
        if not options:
            raise ReductionError(f"no maximal cone contains {sorted(supp)}")
        sigma = self.pick_cone(options)
        neighbours = [
            r for r in range(self.fan.nrays) if r not in sigma and in_some_cone(self.fan, supp | {r})
        ]
        out = {}
        for r in neighbours:
            b = self.relation(sigma, r)[i0]
            if b:
                e = list(exponent)
                e[i0] -= 1
                e[r] += 1
                out[tuple(e)] = out.get(tuple(e), 0) + b
        return i0, sigma, out

    def reduce_monomial(self, exponent) -> dict[tuple, Fraction]:
        exponent = tuple(exponent)
        if exponent in self._memo:
            return self._memo[exponent]
        if not in_some_cone(self.fan, support(exponent)):
            result = {}
        elif max(exponent, default=0) <= 1:
            result = {exponent: Fraction(1)}
        else:
            _, _, expansion = self.step(exponent)
            result = {}
            for e, c in expansion.items():
                for e2, c2 in self.reduce_monomial(e).items():
                    result[e2] = result.get(e2, 0) + c * c2
            result = {e: c for e, c in result.items() if c}
        self._memo[exponent] = result
        return result

    def reduce(self, cls: ChowClass) -> ChowClass:
        if cls.nvars != self.fan.nrays:
            raise ValueError(f"class has {cls.nvars} variables, fan has {self.fan.nrays} rays")
        total: dict[tuple, Fraction] = {}
        for e, c in cls.items():
            for e2, c2 in self.reduce_monomial(e).items():
                total[e2] = total.get(e2, 0) + c * c2
        return ChowClass(cls.nvars, total)

    def integrate(self, cls: ChowClass) -> Fraction:
        d = self.fan.rank
        if not cls.is_homogeneous(d):
            raise DegreeError(f"integration needs a class of pure degree {d}, got degrees {sorted(cls.degrees())}")
        total = Fraction(0)
        for e, c in self.reduce(cls).items():
            coeff = phi_squarefree(self.fan, e, check=False)[1]
            total += c * coeff
        return total


def reduce_squarefree(fan: StackyFan, cls: ChowClass, **strategy) -> ChowClass:
    return Reducer(fan, **strategy).reduce(cls)


def phi_squarefree(fan: StackyFan, exponent, check=True) -> tuple[frozenset, Fraction]:
    """Orbit closure ``V(sigma)`` and coefficient ``1/D_sigma`` of a square-free monomial."""
    if check:
        require_complete_simplicial(fan)
    if any(e > 1 for e in exponent):
        raise ValueError(f"monomial {tuple(exponent)} is not square-free")
    s = support(exponent)
    if s not in fan.cones:
        return s, Fraction(0)
    return s, Fraction(1, stacky_multiplicity(fan, s))


def integrate_simplicial(fan: StackyFan, cls: ChowClass, reducer: Reducer | None = None) -> Fraction:
    if reducer is None:
        reducer = Reducer(fan)
    elif reducer.fan is not fan:
        raise ValueError("reducer belongs to a different fan")
    return reducer.integrate(cls)


def euler_simplicial(fan: StackyFan) -> Fraction:
    require_complete_simplicial(fan)
    return sum((Fraction(1, stacky_multiplicity(fan, c)) for c in fan.max_cones), Fraction(0))


@dataclass(frozen=True)
class WallRelation:
    """``v_plus + beta_minus * v_minus + sum(b[r] * v_r for r in ridge) == 0``."""

    ridge: frozenset
    plus_ray: int
    minus_ray: int
    plus_cone: frozenset
    minus_cone: frozenset
    beta_minus: Fraction
    b: dict = field(hash=False)
    beta_plus: Fraction = Fraction(1)


def wall_relation(fan: StackyFan, ridge) -> WallRelation:
    require_complete_simplicial(fan)
    ridge = frozenset(ridge)
    if ridge not in fan.cones or fan.dim(ridge) != fan.rank - 1:
        raise PreconditionError(f"{sorted(ridge)} is not a codimension-one cone")
    around = fan.containing_max_cones(ridge)
    if len(around) != 2:
        raise PreconditionError(f"ridge {sorted(ridge)} lies in {len(around)} maximal cones, expected 2")
    (p,) = around[0] - ridge
    (m,) = around[1] - ridge
    if p > m:
        p, m = m, p
        around = around[::-1]
    basis = [m] + sorted(ridge)
    coeffs = solve_unique([fan.rays[i] for i in basis], fan.rays[p])
    return WallRelation(
        ridge=ridge,
        plus_ray=p,
        minus_ray=m,
        plus_cone=around[0],
        minus_cone=around[1],
        beta_minus=coeffs[0],
        b=dict(zip(basis[1:], coeffs[1:])),
    )


def is_zero_class(fan: StackyFan, cls: ChowClass, reducer: Reducer | None = None) -> bool:
    """Whether ``cls`` vanishes in the rational Chow ring of a complete simplicial fan.

    Uses Poincare duality: a class of degree ``k`` is zero iff it pairs to zero
    with every square-free monomial of degree ``d - k`` supported on a cone.
    """
    if reducer is None:
        reducer = Reducer(fan)
    d = fan.rank
    for k in sorted(cls.degrees()):
        part = cls.graded_part(k)
        if k > d:
            continue
        duals = [c for c in fan.cones if len(c) == d - k]
        for c in duals:
            probe = ChowClass.monomial(_indicator(fan.nrays, c))
            if reducer.integrate(part * probe) != 0:
                return False
    return True
