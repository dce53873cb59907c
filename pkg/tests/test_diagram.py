import itertools
import random

import pytest

from kj.diagram import (
    PlanarDiagram,
    all_orientations,
    checkerboard_nesting,
    crossing_sign,
    oriented_resolution,
    parse_pd,
    render_pd,
    resolve,
    writhe,
)
from kj.errors import PDSyntaxError, PDValidationError

from diagrams import CURL, FIG8, HOPF, MIRROR_TREFOIL, TREFOIL


def test_parse_trefoil():
    d = parse_pd(TREFOIL)
    assert d.crossing_count == 3
    assert d.edge_count == 6
    assert d.component_count == 1


def test_parse_empty_and_unknot():
    assert parse_pd("PD[]").is_empty()
    u = parse_pd("PD[O]")
    assert u.component_count == 1 and u.crossing_count == 0
    uu = parse_pd("PD[O,O]")
    assert uu.component_count == 2 and uu.loops == (1, 2)


def test_parse_curl():
    d = parse_pd(CURL)
    assert d.crossing_count == 1 and d.component_count == 1
    d.validate()


def test_parse_errors():
    with pytest.raises(PDSyntaxError):
        parse_pd("PD[X(1,2,3)]")
    with pytest.raises(PDSyntaxError):
        parse_pd("X(1,2,3,4)")
    with pytest.raises(PDValidationError):
        parse_pd("PD[X(1,1,1,2)]")  # edge 1 used three times
    with pytest.raises(PDValidationError):
        # connected sum of occurrences that cannot embed in the plane
        parse_pd("PD[X(1,2,1,2)]")


def test_whitespace_insensitive():
    d = parse_pd(" PD[ X( 1, 5 ,2,4),X(3,1,4,6)  , X(5,3,6,2) ] ")
    assert d.crossing_count == 3


def test_roundtrip():
    for text in (TREFOIL, MIRROR_TREFOIL, CURL, HOPF, FIG8, "PD[]", "PD[O,O]"):
        d = parse_pd(text)
        d2 = parse_pd(render_pd(d))
        assert sorted(d.crossings) == sorted(d2.crossings)
        assert len(d.loops) == len(d2.loops)


def test_writhe_values():
    assert writhe(parse_pd(TREFOIL)) == 3
    assert writhe(parse_pd(MIRROR_TREFOIL)) == -3
    assert writhe(parse_pd("PD[]")) == 0
    assert writhe(parse_pd(CURL)) == 1


def test_writhe_orientation_behavior():
    tre = parse_pd(TREFOIL)
    for o in all_orientations(tre):
        assert writhe(tre, o) == 3
    hopf = parse_pd(HOPF)
    assert writhe(hopf, (True, True)) == 2
    assert writhe(hopf, (True, False)) == -2
    assert writhe(hopf, (False, False)) == 2  # reversing everything preserves signs


def test_crossing_signs_reference():
    tre = parse_pd(TREFOIL)
    o = tuple([True])
    assert [crossing_sign(tre, o, c) for c in range(3)] == [1, 1, 1]
    mir = parse_pd(MIRROR_TREFOIL)
    assert [crossing_sign(mir, o, c) for c in range(3)] == [-1, -1, -1]


def test_resolve_circle_counts():
    tre = parse_pd(TREFOIL)
    assert resolve(tre, (0, 0, 0)).circle_count == 2
    assert resolve(tre, (1, 1, 1)).circle_count == 3
    assert resolve(parse_pd("PD[O]"), ()).circle_count == 1
    with pytest.raises(PDValidationError):
        resolve(tre, (0, 0))


def test_single_bit_flip_changes_circles_by_one():
    diagrams = [parse_pd(t) for t in (TREFOIL, MIRROR_TREFOIL, CURL, HOPF, FIG8)]
    for d in diagrams:
        n = d.crossing_count
        for bits in itertools.product((0, 1), repeat=n):
            k = resolve(d, bits).circle_count
            for j in range(n):
                flipped = list(bits)
                flipped[j] ^= 1
                k2 = resolve(d, tuple(flipped)).circle_count
                assert abs(k - k2) == 1


def test_oriented_resolution():
    tre = parse_pd(TREFOIL)
    assert oriented_resolution(tre, (True,)) == (0, 0, 0)
    mir = parse_pd(MIRROR_TREFOIL)
    assert oriented_resolution(mir, (True,)) == (1, 1, 1)
    assert oriented_resolution(parse_pd("PD[]"), ()) == ()
    assert oriented_resolution(parse_pd(CURL), (True,)) == (0,)


def test_oriented_resolution_circle_counts():
    # circle counts k(o) used by the rescaling exponents
    assert resolve(parse_pd(TREFOIL), (0, 0, 0)).circle_count == 2
    fig8 = parse_pd(FIG8)
    assert writhe(fig8) == 0
    bits = oriented_resolution(fig8, (True,))
    assert resolve(fig8, bits).circle_count == 3


def test_checkerboard_examples():
    assert checkerboard_nesting(parse_pd("PD[O]"), ()) == (0,)
    assert checkerboard_nesting(parse_pd("PD[O,O]"), ()) == (0, 0)
    # both Seifert circles of the trefoil touch the declared outer face
    assert checkerboard_nesting(parse_pd(TREFOIL), (0, 0, 0)) == (0, 0)


def test_checkerboard_two_coloring_is_consistent():
    rng = random.Random(3)
    for text in (TREFOIL, MIRROR_TREFOIL, HOPF, FIG8, CURL):
        d = parse_pd(text)
        for _ in range(4):
            bits = tuple(rng.randint(0, 1) for _ in range(d.crossing_count))
            res = resolve(d, bits)
            colors = res._coloring[0]
            for i in range(res.circle_count):
                if res.circles[i].is_free_loop:
                    continue
                l, r = res.circle_side_faces(i)
                assert colors[l] != colors[r]


def test_euler_formula_all_resolutions_valid():
    for text in (TREFOIL, MIRROR_TREFOIL, CURL, HOPF, FIG8):
        parse_pd(text).validate()


def test_component_map_consistency():
    hopf = parse_pd(HOPF)
    cm = hopf.component_map
    assert cm[1] == cm[2] and cm[3] == cm[4] and cm[1] != cm[3]


def test_writhe_sign_count_consistency():
    from diagrams import CINQUEFOIL

    for text in (TREFOIL, MIRROR_TREFOIL, HOPF, FIG8, CURL, CINQUEFOIL):
        d = parse_pd(text)
        for o in all_orientations(d):
            signs = [crossing_sign(d, o, c) for c in range(d.crossing_count)]
            n_plus = signs.count(1)
            n_minus = signs.count(-1)
            assert n_plus + n_minus == d.crossing_count
            assert writhe(d, o) == n_plus - n_minus
