"""Integration and Euler characteristics on non-simplicial stacky fans.

A non-simplicial fan is refined by stacky star subdivisions until it is
simplicial; classes are pulled back along the composite map and integrated
there.  For rank 3 there is also a closed formula for the Euler
characteristic in terms of wall relations around each exceptional ray.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .chow import DegreeError, Reducer, drop_zero_monomials, euler_simplicial, wall_relation
from .classes import ChowClass
from .fan import (
    ConeNotFoundError,
    NotCompleteError,
    PreconditionError,
    StackyFan,
    is_complete,
    nonsimplicial_cones,
    require_complete_simplicial,
    stacky_multiplicity,
    star_subdivide,
)
from .linalg import dot
from .pullback import PullbackMap, apply


@dataclass(frozen=True)
class SubdivisionStep:
    cone: tuple[int, ...]
    new_ray: tuple[int, ...]
    new_index: int

    def to_dict(self):
        return {"cone": list(self.cone), "new_ray_index": self.new_index, "new_ray": list(self.new_ray)}


@dataclass(frozen=True)
class SimplicializationResult:
    source: StackyFan
    target: StackyFan
    pullback: PullbackMap
    steps: tuple[SubdivisionStep, ...]

    def to_dict(self):
        return {
            "steps": [s.to_dict() for s in self.steps],
            "pullback": {
                f"x{i}": {f"y{j}": c for j, c in img.items()} for i, img in self.pullback.table().items()
            },
            "fan": self.target.to_dict(),
        }


def simplicialize(fan: StackyFan) -> SimplicializationResult:
    """Star-subdivide until simplicial.

    Each round subdivides the nonsimplicial cone of smallest dimension, ties
    broken by the lexicographically smallest ray-index set.
    """
    current = fan
    fmap = PullbackMap.identity(fan.nrays)
    steps = []
    while True:
        bad = nonsimplicial_cones(current)
        if not bad:
            break
        sigma = bad[0]
        current, step_map = star_subdivide(current, sigma)
        fmap = fmap.then(step_map)
        steps.append(SubdivisionStep(tuple(sorted(sigma)), current.rays[-1], current.nrays - 1))
    return SimplicializationResult(fan, current, fmap, tuple(steps))


def replay(fan: StackyFan, steps) -> StackyFan:
    for step in steps:
        cone = step.cone if isinstance(step, SubdivisionStep) else step["cone"]
        fan, _ = star_subdivide(fan, cone)
    return fan


def pullback(fmap: PullbackMap, cls: ChowClass) -> ChowClass:
    return apply(fmap, cls)


def _require_complete(fan):
    if not is_complete(fan):
        raise NotCompleteError("fan is not complete")


def integrate_artin(fan: StackyFan, cls: ChowClass, simp: SimplicializationResult | None = None) -> Fraction:
    _require_complete(fan)
    if cls.nvars != fan.nrays:
        raise ValueError(f"class has {cls.nvars} variables, fan has {fan.nrays} rays")
    if not cls.is_homogeneous(fan.rank):
        raise DegreeError(f"integration needs a class of pure degree {fan.rank}, got degrees {sorted(cls.degrees())}")
    simp = simp or simplicialize(fan)
    target = simp.target
    lifted = drop_zero_monomials(target, apply(simp.pullback, cls))
    return Reducer(target).integrate(lifted)


def top_chern_class(target: StackyFan, fmap: PullbackMap) -> ChowClass:
    """Degree-``d`` part of ``prod(1 + f*(x_rho))`` on the target fan."""
    d = target.rank
    acc = ChowClass.one(target.nrays)
    for i in range(fmap.source_rays):
        acc = acc + acc * fmap.image(i)
        acc = ChowClass(acc.nvars, {e: c for e, c in acc.items() if sum(e) <= d})
        acc = drop_zero_monomials(target, acc)
    return acc.graded_part(d)


def euler_artin(fan: StackyFan, simp: SimplicializationResult | None = None) -> Fraction:
    _require_complete(fan)
    simp = simp or simplicialize(fan)
    return Reducer(simp.target).integrate(top_chern_class(simp.target, simp.pullback))


@dataclass(frozen=True)
class NewConeTerm:
    cone: tuple[int, ...]
    tau: tuple[int, ...]
    multiplicity: int
    value: Fraction


@dataclass(frozen=True)
class RayTerm:
    cone: tuple[int, ...]
    ray: int
    plus_ray: int
    minus_ray: int
    b: Fraction
    multiplicity_plus: int
    pairing_ratio: Fraction
    value: Fraction


@dataclass
class Euler3DReport:
    chi_simplicial: Fraction
    new_cone_terms: list[NewConeTerm] = field(default_factory=list)
    ray_terms: list[RayTerm] = field(default_factory=list)
    dual_vectors: dict = field(default_factory=dict)

    @property
    def correction(self) -> Fraction:
        return sum((t.value for t in self.new_cone_terms), Fraction(0)) + sum(
            (t.value for t in self.ray_terms), Fraction(0)
        )

    @property
    def chi(self) -> Fraction:
        return self.chi_simplicial + self.correction

    def cone_total(self, cone) -> Fraction:
        cone = tuple(sorted(cone))
        return sum((t.value for t in self.new_cone_terms if t.cone == cone), Fraction(0)) + sum(
            (t.value for t in self.ray_terms if t.cone == cone), Fraction(0)
        )


def default_dual_vector(v_sigma):
    """First standard dual basis vector pairing nonzero with ``v_sigma``."""
    for i, x in enumerate(v_sigma):
        if x:
            return tuple(int(i == j) for j in range(len(v_sigma)))
    raise PreconditionError("exceptional vector is zero")


def euler_artin_3d(fan: StackyFan, dual_vectors=None, simp: SimplicializationResult | None = None) -> Euler3DReport:
    """Euler characteristic of a complete rank-3 stacky fan by the closed formula.

    ``dual_vectors`` optionally maps a nonsimplicial cone (as a sorted tuple of
    ray indices) to the dual vector ``m`` used to eliminate the cube of its
    exceptional generator.
    """
    if fan.rank != 3:
        raise PreconditionError(f"the closed Euler formula needs rank 3, got rank {fan.rank}")
    _require_complete(fan)
    simp = simp or simplicialize(fan)
    target = simp.target
    report = Euler3DReport(chi_simplicial=euler_simplicial(target))
    dual_vectors = dual_vectors or {}
    for step in simp.steps:
        sigma = step.cone
        s = len(sigma)
        k0 = step.new_index
        v_sigma = target.rays[k0]
        m = tuple(dual_vectors.get(sigma) or default_dual_vector(v_sigma))
        denom = dot(m, v_sigma)
        if denom == 0:
            raise PreconditionError(f"dual vector {m} pairs to zero with {list(v_sigma)}")
        report.dual_vectors[sigma] = m
        for tau in target.containing_max_cones({k0}):
            D = stacky_multiplicity(target, tau)
            report.new_cone_terms.append(NewConeTerm(sigma, tuple(sorted(tau)), D, Fraction(s - 3, D)))
        for rho in sigma:
            wall = wall_relation(target, {k0, rho})
            b = wall.b[k0]
            D_plus = stacky_multiplicity(target, wall.plus_cone)
            ratio = Fraction(dot(m, target.rays[rho]), denom)
            value = (comb(s - 1, 2) - comb(s, 3) * ratio) * b / (wall.beta_plus * D_plus)
            report.ray_terms.append(RayTerm(sigma, rho, wall.plus_ray, wall.minus_ray, b, D_plus, ratio, value))
    return report


def subdivision_euler_delta(fan: StackyFan, cone) -> Fraction:
    """Change in Euler characteristic caused by star-subdividing ``cone``.

    For a maximal cone this is ``(s - 1) / D_sigma``.  For a smaller cone each
    maximal cone ``tau`` containing it is split into ``s`` cones of the same
    multiplicity, so the change is the sum of ``(s - 1) / D_tau``.  The value is
    checked against the recomputed difference.
    """
    require_complete_simplicial(fan)
    sigma = frozenset(cone)
    if sigma not in fan.cones:
        raise ConeNotFoundError(sigma)
    s = fan.dim(sigma)
    if s == 0:
        raise PreconditionError("cannot subdivide the zero cone")
    delta = sum((Fraction(s - 1, stacky_multiplicity(fan, tau)) for tau in fan.containing_max_cones(sigma)), Fraction(0))
    if s == 1:
        return delta
    sub, _ = star_subdivide(fan, sigma)
    recomputed = euler_simplicial(sub) - euler_simplicial(fan)
    if recomputed != delta:
        raise ArithmeticError(f"Euler characteristic changed by {recomputed}, expected {delta}")
    return delta
