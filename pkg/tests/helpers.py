import itertools
import json
import math
import random
from fractions import Fraction
from importlib import resources

from artin_toric.fan import StackyFan
from artin_toric.linalg import primitive

# labels v0..v5 on the subdivided fixture are ray indices 0..5;
# on the unsubdivided fixture v1..v5 are indices 0..4
SIGMA_NS = frozenset({0, 1, 2, 3})


def load_data(name) -> StackyFan:
    text = resources.files("artin_toric").joinpath("data", name).read_text()
    return StackyFan.loads(text)


def data_path(name):
    return str(resources.files("artin_toric").joinpath("data", name))


def example_sigma():
    return load_data("example_sigma.json")


def example_subdivided():
    return load_data("example_sigma_subdivided.json")


def projective_plane():
    return load_data("projective_plane.json")


def four_quadrants():
    return load_data("four_quadrants.json")


def square_bipyramid():
    return load_data("square_bipyramid.json")


def cube_fan(scales=None):
    """Fan over the faces of the cube [-1,1]^3: six square cones."""
    pts = list(itertools.product([1, -1], repeat=3))
    scales = scales or [1] * len(pts)
    rays = [tuple(k * x for x in p) for k, p in zip(scales, pts)]
    cones = [[i for i, p in enumerate(pts) if p[axis] == sign] for axis in range(3) for sign in (1, -1)]
    return StackyFan(3, rays, cones)


def rescaled(fan, scales):
    """Same fan, distinguished vectors multiplied by positive integers."""
    return StackyFan(fan.rank, [tuple(k * x for x in v) for k, v in zip(scales, fan.rays)], fan.max_cones)


def _scale(v, k):
    return tuple(k * x for x in v)


def random_fan_2d(rng: random.Random, max_scale=3):
    while True:
        k = rng.randint(3, 7)
        dirs = set()
        while len(dirs) < k:
            v = (rng.randint(-4, 4), rng.randint(-4, 4))
            if v != (0, 0):
                dirs.add(primitive(v))
        dirs = sorted(dirs, key=lambda v: math.atan2(v[1], v[0]))
        if all(dirs[i][0] * dirs[(i + 1) % k][1] - dirs[i][1] * dirs[(i + 1) % k][0] > 0 for i in range(k)):
            rays = [_scale(v, rng.randint(1, max_scale)) for v in dirs]
            return StackyFan(2, rays, [[i, (i + 1) % k] for i in range(k)])


def random_fan_3d(rng: random.Random, max_scale=3, npoints=10):
    from scipy.spatial import ConvexHull

    while True:
        pts = [tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(npoints)]
        pts += [(2, 0, 0), (-2, 0, 0), (0, 2, 0), (0, -2, 0), (0, 0, 2), (0, 0, -2)]
        pts = sorted(set(pts))
        try:
            hull = ConvexHull(pts)
        except Exception:
            continue
        verts = sorted(set(hull.vertices))
        index = {v: i for i, v in enumerate(verts)}
        rays = [_scale(primitive(pts[v]), rng.randint(1, max_scale)) for v in verts]
        cones = [[index[v] for v in simplex] for simplex in hull.simplices]
        return StackyFan(3, rays, cones)


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def as_fraction(text):
    return Fraction(text)


def _plane(a, b, c):
    u = [b[i] - a[i] for i in range(3)]
    w = [c[i] - a[i] for i in range(3)]
    n = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
    off = sum(n[i] * a[i] for i in range(3))
    g = math.gcd(math.gcd(*n), off)
    n, off = tuple(x // g for x in n), off // g
    if off < 0:
        n, off = tuple(-x for x in n), -off
    return n, off


def random_polytope_fan_3d(rng: random.Random, max_scale=3, npoints=8, coord=2):
    """Fan over the faces of a random lattice polytope; polygonal faces give nonsimplicial cones."""
    from scipy.spatial import ConvexHull

    while True:
        pts = [tuple(rng.randint(-coord, coord) for _ in range(3)) for _ in range(npoints)]
        pts += [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
        pts = sorted(set(pts))
        try:
            hull = ConvexHull(pts)
        except Exception:
            continue
        faces = {}
        for simplex in hull.simplices:
            key = _plane(*(pts[v] for v in simplex))
            faces.setdefault(key, set()).update(int(v) for v in simplex)
        verts = sorted({v for f in faces.values() for v in f})
        index = {v: i for i, v in enumerate(verts)}
        rays = [_scale(primitive(pts[v]), rng.randint(1, max_scale)) for v in verts]
        return StackyFan(3, rays, [[index[v] for v in f] for f in faces.values()])
