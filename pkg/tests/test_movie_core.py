import pytest
from fractions import Fraction

from kj.cube import V_MINUS, V_PLUS, build_complex
from kj.diagram import PlanarDiagram, parse_pd, render_pd
from kj.errors import IllegalMoveError
from kj.moves import Birth, Death, R1Move, R2Move, R3Move, Saddle, apply_move
from kj.movie import Movie, MovieMaps, compatible_orientations, kj_number
from kj.rings import QQ

from diagrams import R3_UNKNOT, TREFOIL, UNKNOT


def test_birth_on_empty():
    d, rec = apply_move(PlanarDiagram(), Birth())
    assert render_pd(d) == "PD[O]"
    assert rec.data["loop"] == 1


def test_saddle_split_then_merge_loops():
    d = parse_pd("PD[O]")
    d2, rec = apply_move(d, Saddle((1, 1)))
    assert render_pd(d2) == "PD[O, O]"
    d3, rec2 = apply_move(d2, Saddle((1, 2)))
    assert render_pd(d3) == "PD[O]"
    assert rec2.data["new_loop"] == 1


def test_death():
    d = parse_pd("PD[O]")
    d2, _ = apply_move(d, Death(1))
    assert d2.is_empty()
    with pytest.raises(IllegalMoveError):
        apply_move(parse_pd(TREFOIL), Death(1))


def test_r1_add_on_loop_matches_expected_code():
    d = parse_pd("PD[O]")
    d2, rec = apply_move(d, R1Move("add", 1, "left"))
    assert d2.crossings == ((1, 1, 2, 2),)
    d3, rec2 = apply_move(d2, R1Move("remove", rec.data["loop_edge"]))
    assert render_pd(d3) == "PD[O]"


def test_r1_right_hand():
    d = parse_pd("PD[O]")
    d2, rec = apply_move(d, R1Move("add", 1, "right"))
    from kj.diagram import writhe

    assert writhe(d2) == -1
    d3, _ = apply_move(d2, R1Move("remove", rec.data["loop_edge"]))
    assert render_pd(d3) == "PD[O]"


def test_r1_add_on_trefoil_edge():
    d = parse_pd(TREFOIL)
    d2, rec = apply_move(d, R1Move("add", 2, "left"))
    assert d2.crossing_count == 4
    from kj.diagram import writhe

    assert writhe(d2) == 4
    d3, _ = apply_move(d2, R1Move("remove", rec.data["loop_edge"]))
    assert sorted(d3.crossings) == sorted(d.crossings)


def test_r2_add_remove_self_poke():
    d = parse_pd("PD[O]")
    d2, rec = apply_move(d, R2Move("add", (1, 1)))
    assert d2.crossing_count == 2
    from kj.diagram import writhe

    assert writhe(d2) == 0
    d3, _ = apply_move(d2, R2Move("remove", (rec.data["m1"], rec.data["m2"])))
    assert render_pd(d3) == "PD[O]"


def test_r2_add_two_loops():
    d = parse_pd("PD[O,O]")
    d2, rec = apply_move(d, R2Move("add", (1, 2)))
    assert d2.crossing_count == 2 and d2.component_count == 2
    d3, _ = apply_move(d2, R2Move("remove", (rec.data["m1"], rec.data["m2"])))
    assert render_pd(d3) == "PD[O, O]"


def test_r2_add_trefoil_edges():
    d = parse_pd(TREFOIL)
    d2, rec = apply_move(d, R2Move("add", (1, 3)))
    assert d2.crossing_count == 5
    d3, _ = apply_move(d2, R2Move("remove", (rec.data["m1"], rec.data["m2"])))
    assert sorted(d3.crossings) == sorted(d.crossings)


def test_r3_applies_and_is_involutive():
    d = parse_pd(R3_UNKNOT)
    d2, rec = apply_move(d, R3Move((0, 1, 2)))
    assert d2.crossing_count == 3
    assert sorted(d2.crossings) != sorted(d.crossings)
    d3, _ = apply_move(d2, R3Move((0, 1, 2)))
    # sliding back returns the original diagram up to edge names
    assert d3.crossing_count == 3
    from kj.cube import kauffman_bracket

    assert kauffman_bracket(d2) == kauffman_bracket(d)


def test_movie_construction_and_euler():
    mv = Movie(
        PlanarDiagram(),
        [Birth(), Saddle((1, 1)), Saddle((1, 2)), Death(1)],
    )
    assert mv.euler_characteristic == 0
    assert mv.is_closed
    assert [render_pd(f) for f in mv.frames] == [
        "PD[]",
        "PD[O]",
        "PD[O, O]",
        "PD[O]",
        "PD[]",
    ]


def test_sphere_torus_genus2_numbers():
    sphere = Movie(PlanarDiagram(), [Birth(), Death(1)])
    assert sphere.euler_characteristic == 2
    assert kj_number(sphere) == 0
    torus = Movie(
        PlanarDiagram(), [Birth(), Saddle((1, 1)), Saddle((1, 2)), Death(1)]
    )
    assert kj_number(torus) == 2
    genus2 = Movie(
        PlanarDiagram(),
        [
            Birth(),
            Saddle((1, 1)),
            Saddle((1, 2)),
            Saddle((1, 1)),
            Saddle((1, 2)),
            Death(1),
        ],
    )
    assert genus2.euler_characteristic == -2
    assert kj_number(genus2) == 0


def test_genus1_chain_values():
    # split then merge on the unknot: v+ -> 2 v-, v- -> 2t v+
    mv = Movie(parse_pd("PD[O]"), [Saddle((1, 1)), Saddle((1, 2))])
    maps1 = MovieMaps(mv, t=1, ring=QQ)
    cm = maps1.chain_composite()
    src = maps1.complexes[0]
    dst = maps1.complexes[-1]
    plus_in = ((), (V_PLUS,))
    minus_in = ((), (V_MINUS,))
    out_plus = cm.apply_chain({plus_in: Fraction(1)})
    # the final frame's loop id is 1 again
    assert out_plus == {((), (V_MINUS,)): Fraction(2)}
    out_minus = cm.apply_chain({minus_in: Fraction(1)})
    assert out_minus == {((), (V_PLUS,)): Fraction(2)}
    maps0 = MovieMaps(mv, t=0, ring=QQ)
    cm0 = maps0.chain_composite()
    assert cm0.apply_chain({plus_in: Fraction(1)}) == {((), (V_MINUS,)): Fraction(2)}
    assert cm0.apply_chain({minus_in: Fraction(1)}) == {}


def test_compatible_orientations_identity_and_genus1():
    tre = parse_pd(TREFOIL)
    ident = Movie(tre, [])
    assert compatible_orientations(ident, (True,)) == {(True,)}
    mv = Movie(parse_pd("PD[O]"), [Saddle((1, 1)), Saddle((1, 2))])
    assert compatible_orientations(mv, (True,)) == {(True,)}
    assert compatible_orientations(mv, (False,)) == {(False,)}


def test_surface_components_and_closedness():
    torus = Movie(
        PlanarDiagram(), [Birth(), Saddle((1, 1)), Saddle((1, 2)), Death(1)]
    )
    assert torus.has_closed_component()
    assert torus.is_connected_surface()
    strip = Movie(parse_pd("PD[O]"), [Saddle((1, 1)), Saddle((1, 2))])
    assert not strip.has_closed_component()
