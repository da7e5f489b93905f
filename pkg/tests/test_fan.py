import json
import random

import pytest

import helpers
from artin_toric.fan import (
    BadIntersectionError,
    ConeNotFoundError,
    DuplicateRayError,
    FanFormatError,
    NonExtremalRayError,
    NotPointedError,
    NotSimplicialError,
    PreconditionError,
    StackyFan,
    UnknownRayError,
    UnusedRayError,
    ZeroRayError,
    facets,
    is_complete,
    is_simplicial,
    nonsimplicial_cones,
    stacky_multiplicity,
    star_subdivide,
    validate,
)
from artin_toric.linalg import columns_matrix, determinant


def fs(*xs):
    return frozenset(xs)


class TestValidate:
    def test_example_is_valid(self):
        fan = helpers.example_sigma()
        assert validate(fan).ok
        assert validate(fan.to_dict()).describe() == "valid"

    @pytest.mark.parametrize(
        "data, error",
        [
            ({"rank": 2, "rays": [[1, 0], [-1, 0], [0, 1]], "max_cones": [[0, 1, 2]]}, NotPointedError),
            ({"rank": 2, "rays": [[1, 0], [0, 1], [1, 1]], "max_cones": [[0, 1], [0, 2]]}, BadIntersectionError),
            ({"rank": 2, "rays": [[1, 0], [0, 0]], "max_cones": [[0, 1]]}, ZeroRayError),
            ({"rank": 2, "rays": [[1, 0], [2, 0]], "max_cones": [[0], [1]]}, DuplicateRayError),
            ({"rank": 2, "rays": [[1, 0], [0, 1]], "max_cones": [[0, 5]]}, UnknownRayError),
            ({"rank": 2, "rays": [[1, 0], [0, 1], [-1, 0]], "max_cones": [[0, 1]]}, UnusedRayError),
            ({"rank": 2, "rays": [[1, 0], [0, 1], [1, 1]], "max_cones": [[0, 1, 2]]}, NonExtremalRayError),
            ({"rank": 2, "rays": [[1, 0, 0]], "max_cones": [[0]]}, FanFormatError),
            ({"rank": 2, "rays": [[1, 0]]}, FanFormatError),
        ],
    )
    def test_named_violations(self, data, error):
        report = validate(data)
        assert not report.ok
        assert type(report.error) is error
        with pytest.raises(error):
            StackyFan.from_dict(data)

    def test_witness_is_carried(self):
        data = {"rank": 2, "rays": [[1, 0], [0, 1], [1, 1]], "max_cones": [[0, 1], [0, 2]]}
        err = validate(data).error
        assert err.cones == ((0, 1), (0, 2))

    def test_cones_crossing_in_3d(self):
        # two 2-cones crossing through each other's relative interior
        data = {"rank": 3, "rays": [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], "max_cones": [[0, 1], [2, 3]]}
        assert isinstance(validate(data).error, BadIntersectionError)

    def test_cones_meeting_at_apex_only(self):
        data = {"rank": 3, "rays": [[1, 0, 1], [0, 1, 1], [-1, 0, -1], [0, -1, -1]], "max_cones": [[0, 1], [2, 3]]}
        assert validate(data).ok

    def test_nested_listing_is_collapsed(self):
        fan = StackyFan(2, [(1, 0), (0, 1)], [[0, 1], [0]])
        assert fan.max_cones == (fs(0, 1),)

    def test_bad_json(self):
        with pytest.raises(FanFormatError):
            StackyFan.loads("{not json")


class TestFacets:
    def test_square_cone(self):
        fan = helpers.example_sigma()
        assert facets(fan, {0, 1, 2, 3}) == [fs(0, 1), fs(0, 3), fs(1, 2), fs(2, 3)]

    def test_simplex(self):
        fan = StackyFan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [[0, 1, 2]])
        assert sorted(map(sorted, facets(fan, {0, 1, 2}))) == [[0, 1], [0, 2], [1, 2]]

    def test_ray(self):
        fan = helpers.projective_plane()
        assert facets(fan, {0}) == [frozenset()]

    def test_unknown_cone(self):
        fan = helpers.example_sigma()
        with pytest.raises(ConeNotFoundError):
            facets(fan, {0, 2})

    def test_faces_of_faces_are_cones(self):
        fan = helpers.example_sigma()
        for c in fan.cones:
            for f in fan.facets(c):
                assert f in fan.cones
            assert fan.dim(c) <= len(c)


class TestSimplicialComplete:
    def test_example(self):
        fan = helpers.example_sigma()
        assert not is_simplicial(fan)
        assert nonsimplicial_cones(fan) == [fs(0, 1, 2, 3)]
        assert is_complete(fan)

    def test_subdivided_example(self):
        fan = helpers.example_subdivided()
        assert is_simplicial(fan) and is_complete(fan)

    def test_projective_plane(self):
        fan = helpers.projective_plane()
        assert is_simplicial(fan) and is_complete(fan)

    def test_single_cone_not_complete(self):
        assert not is_complete(StackyFan(2, [(1, 0), (0, 1)], [[0, 1]]))

    def test_not_pure(self):
        fan = StackyFan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [2]])
        assert not is_complete(fan)

    def test_half_plane_not_complete(self):
        fan = StackyFan(2, [(1, 0), (0, 1), (-1, 0)], [[0, 1], [1, 2]])
        assert not is_complete(fan)

    def test_rank_one(self):
        assert is_complete(StackyFan(1, [(2,), (-3,)], [[0], [1]]))

    def test_cube(self):
        fan = helpers.cube_fan()
        assert is_complete(fan)
        assert len(nonsimplicial_cones(fan)) == 6


class TestMultiplicity:
    # subdivided fixture: index k is the ray labelled v_k
    @pytest.mark.parametrize(
        "cone, expected",
        [
            ({3, 4, 5}, 1),
            ({1, 4, 5}, 1),
            ({0, 3, 4}, 5),
            ({0, 1, 4}, 5),
            ({1, 2, 5}, 2),
            ({0, 1, 2}, 7),
        ],
    )
    def test_example(self, cone, expected):
        assert stacky_multiplicity(helpers.example_subdivided(), cone) == expected

    def test_scaled_ray(self):
        fan = StackyFan(2, [(2, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
        assert stacky_multiplicity(fan, {0}) == 2

    def test_nonsimplicial(self):
        with pytest.raises(NotSimplicialError):
            stacky_multiplicity(helpers.example_sigma(), {0, 1, 2, 3})

    def test_lower_dimensional(self):
        fan = helpers.example_subdivided()
        assert stacky_multiplicity(fan, {0, 3}) == 1
        assert stacky_multiplicity(fan, {0, 4}) == 5

    def test_determinant_path_agrees(self):
        rng = random.Random(3)
        for _ in range(5):
            fan = helpers.random_fan_3d(rng)
            for c in fan.max_cones:
                assert stacky_multiplicity(fan, c) == abs(determinant(columns_matrix(fan.vectors(c))))


class TestStarSubdivide:
    def test_example(self):
        fan = helpers.example_sigma()
        sub, fmap = star_subdivide(fan, {0, 1, 2, 3})
        assert sub.rays[5] == (0, 1, 4)
        new = {c for c in sub.max_cones if 5 in c}
        assert new == {fs(5, 0, 1), fs(5, 1, 2), fs(5, 2, 3), fs(5, 0, 3)}
        assert {c for c in sub.max_cones if 5 not in c} == {c for c in fan.max_cones if len(c) == 3}
        assert sub.history == ({"cone": [0, 1, 2, 3], "new_ray_index": 5, "new_ray": [0, 1, 4]},)
        # the ray labelled v5 is index 4
        assert fmap.images[4] == ((4, 1),)
        assert fmap.images[0] == ((0, 1), (5, 1))

    def test_matches_fixture_after_relabel(self):
        sub, _ = star_subdivide(helpers.example_sigma(), {0, 1, 2, 3})
        assert sub.relabel([5, 0, 1, 2, 3, 4]) == helpers.example_subdivided()

    def test_quadrant(self):
        fan = helpers.four_quadrants()
        sub, _ = star_subdivide(fan, {0, 1})
        assert sub.rays[4] == (1, 1)
        assert len(sub.max_cones) == 5
        assert is_complete(sub) and is_simplicial(sub)

    def test_errors(self):
        fan = helpers.four_quadrants()
        with pytest.raises(ConeNotFoundError):
            star_subdivide(fan, {0, 2})
        with pytest.raises(PreconditionError):
            star_subdivide(fan, {0})

    def test_properties_on_random_fans(self):
        rng = random.Random(11)
        for _ in range(8):
            fan = helpers.random_fan_3d(rng) if rng.random() < 0.5 else helpers.random_fan_2d(rng)
            cone = rng.choice([c for c in sorted(fan.cones, key=sorted) if fan.dim(c) >= 2])
            sub, _ = star_subdivide(fan, cone)
            assert validate(sub).ok
            assert is_complete(sub)
            assert len(sub.max_cones) > len(fan.max_cones)


class TestSerialization:
    def test_round_trip(self):
        fan = helpers.example_sigma()
        sub, _ = star_subdivide(fan, {0, 1, 2, 3})
        again = StackyFan.loads(sub.dumps())
        assert again == sub
        assert again.history == sub.history
        assert json.loads(sub.dumps()) == sub.to_dict()

    def test_zero_based_fixture_labels(self):
        data = helpers.load_json(helpers.data_path("example_sigma_subdivided.json"))
        assert data["labels"][0] == "v0"
