"""Ring homomorphisms between Stanley-Reisner rings induced by subdivision."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classes import ChowClass
from .linalg import DimensionError


@dataclass(frozen=True)
class PullbackMap:
    """Sends each source generator ``x_i`` to a linear form in the target generators.

    ``images[i]`` is a tuple of ``(target_index, coefficient)`` pairs.
    """

    source_rays: int
    target_rays: int
    images: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        if len(self.images) != self.source_rays:
            raise DimensionError(f"{len(self.images)} images for {self.source_rays} generators")
        for img in self.images:
            for j, _ in img:
                if not 0 <= j < self.target_rays:
                    raise DimensionError(f"image refers to y{j}, target has {self.target_rays} rays")

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(((i, 1),) for i in range(n)))

    @classmethod
    def star(cls, n, cone, new_index=None):
        """Elementary step: ``x_i -> y_i + y_new`` on the rays of ``cone``, ``y_i`` elsewhere."""
        new = n if new_index is None else new_index
        images = []
        for i in range(n):
            img = [(i, 1)]
            if i in cone:
                img.append((new, 1))
            images.append(tuple(img))
        return cls(n, n + 1, tuple(images))

    def image(self, i) -> ChowClass:
        return ChowClass(self.target_rays, {_unit(self.target_rays, j): c for j, c in self.images[i]})

    def then(self, other: "PullbackMap") -> "PullbackMap":
        """``other* o self*``: pull back along ``self`` first, then along ``other``."""
        if other.source_rays != self.target_rays:
            raise DimensionError(f"cannot compose: {self.target_rays} rays vs {other.source_rays}")
        images = []
        for img in self.images:
            acc: dict[int, int] = {}
            for j, c in img:
                for k, c2 in other.images[j]:
                    acc[k] = acc.get(k, 0) + c * c2
            images.append(tuple(sorted((k, c) for k, c in acc.items() if c)))
        return PullbackMap(self.source_rays, other.target_rays, tuple(images))

    def __call__(self, cls: ChowClass) -> ChowClass:
        return apply(self, cls)

    def table(self):
        """``{source_index: {target_index: coefficient}}`` for reports."""
        return {i: {j: c for j, c in img} for i, img in enumerate(self.images)}


def _unit(n, j):
    e = [0] * n
    e[j] = 1
    return tuple(e)


def apply(fmap: PullbackMap, cls: ChowClass, truncate: int | None = None) -> ChowClass:
    """Substitute generator images into ``cls`` and expand.

    With ``truncate`` set, monomials above that degree are discarded while
    expanding.
    """
    if cls.nvars != fmap.source_rays:
        raise DimensionError(f"class has {cls.nvars} variables, map expects {fmap.source_rays}")
    images = [fmap.image(i) for i in range(fmap.source_rays)]
    total: dict = {}
    for exp, coeff in cls.items():
        term = ChowClass.constant(fmap.target_rays, coeff)
        for i, e in enumerate(exp):
            for _ in range(e):
                term = term * images[i]
                if truncate is not None:
                    term = ChowClass(term.nvars, {x: c for x, c in term.items() if sum(x) <= truncate})
        for x, c in term.items():
            total[x] = total.get(x, Fraction(0)) + c
    return ChowClass(fmap.target_rays, total)
