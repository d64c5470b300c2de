import itertools
from fractions import Fraction

import numpy as np
import pytest

from affprimes import forms, geometry


def ap_body(k, n):
    """1 <= n1, 0 <= n2, n1 + (k-1) n2 <= N."""
    return geometry.ConvexBody(
        2, [((-1, 0), -1), ((0, -(k - 1)), 0), ((1, k - 1), n)], n
    )


def test_contains():
    box = geometry.ConvexBody.box(2, -2, 2)
    assert box.contains((0, 0))
    assert box.contains((2, -2))
    assert not box.contains((3, 0))
    half = geometry.ConvexBody(2, [((1, 0), 0)], 5)
    assert not half.contains((1, 0))
    assert half.contains((0, 0))
    # AP4 body boundary case 1 <= 1
    assert ap_body(4, 10).contains((1, 0))


def test_lattice_points_small():
    box = geometry.ConvexBody.box(1, 0, 2)
    assert sorted(box.lattice_points()) == [(0,), (1,), (2,)]
    tri = geometry.ConvexBody(2, [((-1, 0), 0), ((0, -1), 0), ((1, 1), 2)], 3)
    assert tri.lattice_point_count() == 6
    empty = geometry.ConvexBody(2, [((1, 0), 0), ((-1, 0), -1)], 3)
    assert empty.lattice_point_count() == 0
    assert empty.is_empty()


def test_box_count_exact():
    for d in (1, 2, 3):
        for n in (3, 7):
            box = geometry.ConvexBody.box(d, 0, n)
            assert box.lattice_point_count() == (n + 1) ** d


def test_enumeration_consistent_with_contains():
    # exhaustive in the bounding box for small 2-d bodies
    body = geometry.ConvexBody(
        2, [((2, 3), 25), ((-1, 1), 4), ((0, -1), 2)], 20
    )
    enumerated = set(body.lattice_points())
    for x in range(-20, 21):
        for y in range(-20, 21):
            assert ((x, y) in enumerated) == body.contains((x, y))


def test_dimension_guard():
    with pytest.raises(ValueError):
        list(geometry.ConvexBody.box(7, 0, 1).runs())


def test_archimedean_factor_ap4():
    n = 3000
    body = ap_body(4, n)
    count, frac = geometry.archimedean_factor(body, forms.ap_system(4))
    assert abs(count - n**2 / 6) <= 0.01 * n**2 / 6
    assert frac == pytest.approx(count / n**2)


def test_archimedean_factor_trivial_cases():
    n = 40
    box = geometry.ConvexBody.box(2, 0, n)
    ident = forms.identity_system(2)
    count, _ = geometry.archimedean_factor(box, ident)
    assert count == n**2        # psi_i >= 1 trims one hyperplane each
    neg = forms.system([[-1, 0]], [0])
    count, _ = geometry.archimedean_factor(box, neg)
    assert count == 0


def test_volume_packing_random_simplices(rng):
    # |count - vol| <= C_d N^{d-1} with vol by the exact determinant formula
    c_d = {2: 12, 3: 40}
    for d in (2, 3):
        for _ in range(12):
            n = int(rng.integers(8, 30))
            while True:
                verts = [
                    [Fraction(int(rng.integers(-n, n + 1))) for _ in range(d)]
                    for _ in range(d + 1)
                ]
                vol = geometry.volume_simplex(verts)
                if vol > 0:
                    break
            body = geometry.simplex_body(verts, n)
            count = body.lattice_point_count()
            assert abs(count - float(vol)) <= c_d[d] * n ** (d - 1)


def test_boundary_shell_counts():
    # strict Euclidean shell of the square [0, 100]^2 at eps = 0.1, counted by
    # direct decomposition: inside band 101^2 - 81^2 = 3640, four outside edge
    # bands 4 * 9 * 101 = 3636, four rounded outer corners
    # 4 * #{1<=a,b<=9 : a^2 + b^2 < 100} = 4 * 67 = 268.
    inside = 101**2 - 81**2
    edges = 4 * 9 * 101
    corners = 4 * sum(
        1 for a in range(1, 10) for b in range(1, 10) if a * a + b * b < 100
    )
    square = geometry.ConvexBody.box(2, 0, 100)
    count = geometry.boundary_shell_count(square, Fraction(1, 10))
    assert count == inside + edges + corners == 7544
    assert count <= 8 * 0.1 * 100**2
    empty = geometry.ConvexBody(2, [((1, 0), 0), ((-1, 0), -1)], 10)
    assert geometry.boundary_shell_count(empty, 0.5) == 0


def test_boundary_shell_scaling():
    n = 60
    square = geometry.ConvexBody.box(2, 0, n)
    tri = geometry.ConvexBody(2, [((-1, 0), 0), ((0, -1), 0), ((1, 1), n)], n)
    for body in (square, tri):
        prev = None
        for eps in (Fraction(1, 100), Fraction(5, 100), Fraction(1, 10)):
            c = geometry.boundary_shell_count(body, eps)
            assert c <= 10 * float(eps) * n**2, (eps, c)
            if prev is not None:
                assert c >= prev       # monotone in eps
            prev = c


def test_body_json_roundtrip():
    obj = {
        "dim": 2,
        "halfspaces": [
            {"a": [-1, 0], "c": -1},
            {"a": [1, 3], "c": {"times_N": 1}},
            {"a": ["1/2", 0], "c": "7/2"},
        ],
        "N": 50,
    }
    body = geometry.convex_body_from_json(obj)
    assert body.contains((1, 0))
    assert body.contains((7, 0))
    assert not body.contains((8, 0))        # x1/2 <= 7/2
    back = geometry.convex_body_to_json(body)
    body2 = geometry.convex_body_from_json(back)
    assert body2.halfspaces == body.halfspaces


def test_degenerate_segment_body():
    # lower-dimensional bodies enumerate by exact membership, no special case
    seg = geometry.ConvexBody(
        2, [((1, 0), 2), ((-1, 0), -2), ((0, -1), 0), ((0, 1), 3)], 5
    )
    assert sorted(seg.lattice_points()) == [(2, 0), (2, 1), (2, 2), (2, 3)]
