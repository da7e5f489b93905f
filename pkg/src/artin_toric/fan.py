"""Stacky fans: validation, face structure, multiplicities and star subdivision.

A stacky fan is stored as its lattice rank, the distinguished lattice vector
on each ray, and the maximal cones as sets of ray indices (0-based).  All
geometric data (dimensions, facets, faces) is derived exactly and cached.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod
from pathlib import Path

from .linalg import dot, elementary_divisors, columns_matrix, nullspace, primitive, rank, row_reduce
from .pullback import PullbackMap


class FanError(Exception):
    """Base class for every error raised about a fan."""


class FanValidationError(FanError):
    axiom = "fan axiom"


class FanFormatError(FanValidationError):
    axiom = "well-formed fan data"


class ZeroRayError(FanValidationError):
    axiom = "rays are nonzero"

    def __init__(self, ray):
        self.ray = ray
        super().__init__(f"ray {ray} is the zero vector")


class DuplicateRayError(FanValidationError):
    axiom = "rays are distinct"

    def __init__(self, first, second):
        self.rays = (first, second)
        super().__init__(f"rays {first} and {second} lie on the same ray")


class UnknownRayError(FanValidationError):
    axiom = "cones use listed rays"

    def __init__(self, cone, ray):
        self.cone = tuple(cone)
        self.ray = ray
        super().__init__(f"cone {list(cone)} refers to unknown ray {ray}")


class UnusedRayError(FanValidationError):
    axiom = "every ray lies in a cone"

    def __init__(self, ray):
        self.ray = ray
        super().__init__(f"ray {ray} is not used by any cone")


class NotPointedError(FanValidationError):
    axiom = "cones are strongly convex"

    def __init__(self, cone):
        self.cone = tuple(sorted(cone))
        super().__init__(f"cone {list(self.cone)} contains a line")


class NonExtremalRayError(FanValidationError):
    axiom = "cone generators are extremal rays"

    def __init__(self, cone, ray):
        self.cone = tuple(sorted(cone))
        self.ray = ray
        super().__init__(f"ray {ray} is not an extremal ray of cone {list(self.cone)}")


class BadIntersectionError(FanValidationError):
    axiom = "cones meet along common faces"

    def __init__(self, first, second):
        self.cones = (tuple(sorted(first)), tuple(sorted(second)))
        super().__init__(
            f"cones {list(self.cones[0])} and {list(self.cones[1])} do not intersect in a common face"
        )


class ConeNotFoundError(FanError):
    def __init__(self, cone):
        self.cone = tuple(sorted(cone))
        super().__init__(f"{list(self.cone)} is not a cone of the fan")


class PreconditionError(FanError):
    """A mathematical hypothesis of an operation does not hold."""


class NotSimplicialError(PreconditionError):
    pass


class NotCompleteError(PreconditionError):
    pass


@dataclass(frozen=True)
class Cone:
    rays: tuple[int, ...]
    dim: int
    facets: tuple[tuple[int, ...], ...]

    @property
    def is_simplicial(self):
        return self.dim == len(self.rays)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    error: FanValidationError | None = None

    def __bool__(self):
        return self.ok

    def describe(self):
        if self.ok:
            return "valid"
        return f"invalid ({self.error.axiom}): {self.error}"


class StackyFan:
    """Lattice rank, distinguished ray vectors and maximal cones of a stacky fan.

    Construction validates the fan axioms unless ``check=False``; the object
    is treated as immutable afterwards.
    """

    def __init__(self, rank: int, rays, max_cones, history=(), check=True):
        self.rank = int(rank)
        self.rays = tuple(tuple(int(x) for x in v) for v in rays)
        cones = [frozenset(int(i) for i in c) for c in max_cones]
        self.history = tuple(dict(h) for h in history)
        self._dim: dict[frozenset, int] = {}
        self._facets: dict[frozenset, tuple] = {}
        self._faces: dict[frozenset, frozenset] = {}
        self._support: dict[frozenset, list] = {}
        if check:
            _check_rays(self.rank, self.rays, cones)
        # drop listed cones that are faces of other listed cones
        uniq = set(cones)
        self.max_cones = tuple(
            sorted((c for c in uniq if not any(c < o for o in uniq)), key=lambda c: sorted(c))
        )
        if check:
            self._check_cones()
        all_cones = set()
        for c in self.max_cones:
            all_cones |= self.faces(c)
        self.cones = frozenset(all_cones)

    @property
    def nrays(self):
        return len(self.rays)

    def __eq__(self, other):
        if not isinstance(other, StackyFan):
            return NotImplemented
        return (self.rank, self.rays, self.max_cones) == (other.rank, other.rays, other.max_cones)

    def __hash__(self):
        return hash((self.rank, self.rays, self.max_cones))

    def __repr__(self):
        return f"StackyFan(rank={self.rank}, rays={len(self.rays)}, max_cones={[sorted(c) for c in self.max_cones]})"

    # geometry of ray subsets

    def vectors(self, cone):
        return [self.rays[i] for i in sorted(cone)]

    def dim(self, cone) -> int:
        cone = frozenset(cone)
        if cone not in self._dim:
            self._dim[cone] = rank(self.vectors(cone)) if cone else 0
        return self._dim[cone]

    def _supporting(self, cone):
        """Facets of ``cone`` with inward normals, as ``[(functional, facet), ...]``."""
        cone = frozenset(cone)
        if cone in self._support:
            return self._support[cone]
        k = self.dim(cone)
        if k == 0:
            return []
        members = sorted(cone)
        found: list[tuple[list[Fraction], frozenset]] = []
        for sub in combinations(members, k - 1):
            sub = frozenset(sub)
            if any(sub <= f for _, f in found):
                continue
            if self.dim(sub) != k - 1:
                continue
            normal = None
            for cand in nullspace([self.rays[i] for i in sorted(sub)], self.rank):
                if any(dot(cand, self.rays[i]) for i in members):
                    normal = cand
                    break
            normal = list(primitive(normal))
            values = {i: dot(normal, self.rays[i]) for i in members}
            if all(x >= 0 for x in values.values()):
                pass
            elif all(x <= 0 for x in values.values()):
                normal = [-x for x in normal]
            else:
                continue
            facet = frozenset(i for i, x in values.items() if x == 0)
            if all(facet != f for _, f in found):
                found.append((normal, facet))
        self._support[cone] = found
        return found

    def facets(self, cone) -> list[frozenset]:
        """Codimension-one faces of a cone of the fan."""
        cone = frozenset(cone)
        if cone not in self._facets:
            self._facets[cone] = tuple(sorted((f for _, f in self._supporting(cone)), key=sorted))
        return list(self._facets[cone])

    def faces(self, cone) -> frozenset:
        cone = frozenset(cone)
        if cone not in self._faces:
            out = {cone}
            for f in self.facets(cone):
                out |= self.faces(f)
            self._faces[cone] = frozenset(out)
        return self._faces[cone]

    def cone(self, indices) -> Cone:
        c = frozenset(indices)
        if c not in self.cones:
            raise ConeNotFoundError(c)
        return Cone(tuple(sorted(c)), self.dim(c), tuple(tuple(sorted(f)) for f in self.facets(c)))

    def is_cone(self, indices) -> bool:
        return frozenset(indices) in self.cones

    def cones_of_dim(self, k):
        return sorted((c for c in self.cones if self.dim(c) == k), key=sorted)

    def containing_max_cones(self, indices):
        s = frozenset(indices)
        return [c for c in self.max_cones if s <= c]

    # validation

    def _check_cones(self):
        for c in self.max_cones:
            sup = self._supporting(c)
            k = self.dim(c)
            members = sorted(c)
            mat = [[dot(n, self.rays[j]) for j in members] for n, _ in sup]
            if rank(mat) != k:
                raise NotPointedError(c)
            for i in members:
                tight = [row for row, (_, f) in zip(mat, sup) if i in f]
                if rank(tight) != k - 1:
                    raise NonExtremalRayError(c, i)
        for a, b in combinations(self.max_cones, 2):
            if not self._meets_in_face(a, b):
                raise BadIntersectionError(a, b)

    def _halfspaces(self, cone):
        eqs = nullspace(self.vectors(cone), self.rank) if cone else [
            [Fraction(int(i == j)) for j in range(self.rank)] for i in range(self.rank)
        ]
        ineqs = [n for n, _ in self._supporting(cone)]
        return eqs, ineqs

    def _meets_in_face(self, a, b) -> bool:
        common = a & b
        if common not in self.faces(a) or common not in self.faces(b):
            return False
        if a <= b or b <= a:
            return True
        # a supporting hyperplane of one cone with the other on its far side
        # confines the intersection to a pair of smaller faces
        for this, other in ((a, b), (b, a)):
            for normal, face in self._supporting(this):
                values = [dot(normal, self.rays[i]) for i in sorted(other)]
                if all(x <= 0 for x in values):
                    other_face = frozenset(i for i, x in zip(sorted(other), values) if x == 0)
                    return self._meets_in_face(face, other_face)
        return self._meets_by_enumeration(a, b)

    def _meets_by_enumeration(self, a, b) -> bool:
        """Enumerate the extreme rays of the intersection and compare with the common rays."""
        common = a & b
        eqa, ina = self._halfspaces(a)
        eqb, inb = self._halfspaces(b)
        eqs = eqa + eqb
        ineqs = ina + inb
        red, piv = row_reduce(eqs) if eqs else ([], [])
        eqs = red[: len(piv)]
        need = self.rank - 1 - len(eqs)
        allowed = {primitive(self.rays[i]) for i in common}
        if need < 0:
            return True
        for sub in combinations(ineqs, need):
            rows = eqs + list(sub)
            if rows and rank(rows) != self.rank - 1:
                continue
            null = nullspace(rows, self.rank)
            if len(null) != 1:
                continue
            u = null[0]
            for cand in (u, [-x for x in u]):
                if all(dot(e, cand) == 0 for e in eqs) and all(dot(h, cand) >= 0 for h in ineqs):
                    if primitive(cand) not in allowed:
                        return False
        return True

    # serialization

    def to_dict(self):
        out = {
            "rank": self.rank,
            "rays": [list(v) for v in self.rays],
            "max_cones": [sorted(c) for c in self.max_cones],
        }
        if self.history:
            out["history"] = [dict(h) for h in self.history]
        return out

    def dumps(self) -> str:
        """JSON text with one ray, cone or history step per line."""
        data = self.to_dict()
        lines = ["{", f'  "rank": {self.rank},', '  "rays": [']
        lines.append(",\n".join(f"    {json.dumps(v)}" for v in data["rays"]))
        lines += ["  ],", '  "max_cones": [']
        lines.append(",\n".join(f"    {json.dumps(c)}" for c in data["max_cones"]))
        if "history" in data:
            lines += ["  ],", '  "history": [']
            lines.append(",\n".join(f"    {json.dumps(h, sort_keys=True)}" for h in data["history"]))
        lines += ["  ]", "}"]
        return "\n".join(lines)

    @classmethod
    def from_dict(cls, data, check=True):
        if not isinstance(data, dict):
            raise FanFormatError("fan data must be an object")
        missing = {"rank", "rays", "max_cones"} - set(data)
        if missing:
            raise FanFormatError(f"fan data is missing {sorted(missing)}")
        unknown = set(data) - {"rank", "rays", "max_cones", "history", "comment", "labels"}
        if unknown:
            raise FanFormatError(f"unknown fan fields {sorted(unknown)}")
        try:
            return cls(data["rank"], data["rays"], data["max_cones"], data.get("history", ()), check=check)
        except (TypeError, ValueError) as exc:
            raise FanFormatError(f"malformed fan data: {exc}") from exc

    @classmethod
    def loads(cls, text, check=True):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FanFormatError(f"fan file is not valid JSON: {exc}") from exc
        return cls.from_dict(data, check=check)

    @classmethod
    def load(cls, path, check=True):
        return cls.loads(Path(path).read_text(), check=check)

    def relabel(self, order):
        """The same fan with ray ``order[k]`` moved to index ``k``."""
        pos = {old: new for new, old in enumerate(order)}
        return StackyFan(
            self.rank,
            [self.rays[i] for i in order],
            [[pos[i] for i in c] for c in self.max_cones],
            check=False,
        )


def _check_rays(d, rays, cones):
    if d < 1:
        raise FanFormatError("rank must be positive")
    for i, v in enumerate(rays):
        if len(v) != d:
            raise FanFormatError(f"ray {i} has {len(v)} coordinates, rank is {d}")
    for i, v in enumerate(rays):
        if not any(v):
            raise ZeroRayError(i)
    seen = {}
    for i, v in enumerate(rays):
        p = primitive(v)
        if p in seen:
            raise DuplicateRayError(seen[p], i)
        seen[p] = i
    if not cones:
        raise FanFormatError("fan has no cones")
    used = set()
    for c in cones:
        for i in c:
            if not 0 <= i < len(rays):
                raise UnknownRayError(sorted(c), i)
        used |= c
    for i in range(len(rays)):
        if i not in used:
            raise UnusedRayError(i)


def validate(fan_or_data) -> ValidationReport:
    """Check every fan axiom; report the first violation instead of raising."""
    try:
        if isinstance(fan_or_data, StackyFan):
            f = fan_or_data
            StackyFan(f.rank, f.rays, f.max_cones)
        else:
            StackyFan.from_dict(fan_or_data)
    except FanValidationError as exc:
        return ValidationReport(False, exc)
    return ValidationReport(True)


def facets(fan: StackyFan, cone) -> list[frozenset]:
    cone = frozenset(cone)
    if cone not in fan.cones:
        raise ConeNotFoundError(cone)
    return fan.facets(cone)


def nonsimplicial_cones(fan: StackyFan) -> list[frozenset]:
    return sorted((c for c in fan.cones if fan.dim(c) != len(c)), key=lambda c: (fan.dim(c), sorted(c)))


def is_simplicial(fan: StackyFan) -> bool:
    # faces of simplicial cones are simplicial, so maximal cones decide
    return all(fan.dim(c) == len(c) for c in fan.max_cones)


def is_complete(fan: StackyFan) -> bool:
    """Support is all of R^d: pure of full dimension and every ridge is shared by two cones."""
    d = fan.rank
    if any(fan.dim(c) != d for c in fan.max_cones):
        return False
    count: dict[frozenset, int] = {}
    for c in fan.max_cones:
        for f in fan.facets(c):
            count[f] = count.get(f, 0) + 1
    return all(n == 2 for n in count.values())


def require_complete_simplicial(fan: StackyFan):
    if not is_simplicial(fan):
        bad = [sorted(c) for c in nonsimplicial_cones(fan)]
        raise NotSimplicialError(f"fan is not simplicial; nonsimplicial cones {bad}")
    if not is_complete(fan):
        raise NotCompleteError("fan is not complete")


def lattice_index(vectors, d) -> int:
    """Index of the span of integer ``vectors`` inside its saturation in Z^d."""
    if not vectors:
        return 1
    return prod(elementary_divisors(columns_matrix(vectors)))


def stacky_multiplicity(fan: StackyFan, cone) -> int:
    cone = frozenset(cone)
    if cone not in fan.cones:
        raise ConeNotFoundError(cone)
    if fan.dim(cone) != len(cone):
        raise NotSimplicialError(f"cone {sorted(cone)} is not simplicial")
    return lattice_index(fan.vectors(cone), fan.rank)


def star_subdivide(fan: StackyFan, cone) -> tuple[StackyFan, PullbackMap]:
    """Stacky star subdivision at ``cone``.

    The new distinguished vector is the sum of the cone's ray vectors and gets
    index ``fan.nrays``.  Every cone containing ``cone`` is replaced by the
    joins of the new ray with its faces not containing ``cone``.
    """
    sigma = frozenset(cone)
    if sigma not in fan.cones:
        raise ConeNotFoundError(sigma)
    if fan.dim(sigma) < 2:
        raise PreconditionError(f"star subdivision needs a cone of dimension >= 2, got {sorted(sigma)}")
    n = fan.nrays
    new_ray = tuple(sum(col) for col in zip(*fan.vectors(sigma)))
    new_cones = []
    for tau in fan.max_cones:
        if sigma <= tau:
            new_cones.extend(f | {n} for f in fan.facets(tau) if not sigma <= f)
        else:
            new_cones.append(tau)
    step = {"cone": sorted(sigma), "new_ray_index": n, "new_ray": list(new_ray)}
    sub = StackyFan(fan.rank, fan.rays + (new_ray,), new_cones, fan.history + (step,))
    return sub, PullbackMap.star(n, sigma)


def multiplicity_table(fan: StackyFan) -> dict[tuple[int, ...], int]:
    return {tuple(sorted(c)): stacky_multiplicity(fan, c) for c in fan.max_cones if fan.dim(c) == len(c)}
