from fractions import Fraction

import pytest

from kj.canonical import (
    LABEL_A,
    LABEL_B,
    canonical_chain,
    lee_generator,
    mod4_types,
    verify_basis,
)
from kj.cube import V_MINUS, V_PLUS, build_complex
from kj.diagram import all_orientations, parse_pd
from kj.errors import PDValidationError
from kj.homology import FieldHomology
from kj.rings import QQ, QSQRT2, QSqrt2, half_power_of_two

from diagrams import CURL, FIG8, HOPF, R3_UNKNOT, TREFOIL, UNKNOT, UNLINK2


def test_unknot_generators_expand_correctly():
    d = parse_pd(UNKNOT)
    c = build_complex(d, 1, QQ)
    s_o = canonical_chain(c, (True,))
    s_oprime = canonical_chain(c, (False,))
    plus = ((), (V_PLUS,))
    minus = ((), (V_MINUS,))
    assert s_o == {minus: Fraction(1), plus: Fraction(1)}
    assert s_oprime == {minus: Fraction(1), plus: Fraction(-1)}
    # v+ = (s_o - s_o')/2
    half = Fraction(1, 2)
    diff = {g: half * (s_o.get(g, 0) - s_oprime.get(g, 0)) for g in set(s_o) | set(s_oprime)}
    diff = {g: v for g, v in diff.items() if v}
    assert diff == {plus: Fraction(1)}


def test_generators_are_cycles_everywhere():
    for text in (UNKNOT, CURL, TREFOIL, HOPF, FIG8, UNLINK2, R3_UNKNOT):
        d = parse_pd(text)
        c = build_complex(d, 1, QQ)
        for o in all_orientations(d):
            chain = canonical_chain(c, o)
            assert c.apply_differential(chain) == {}


def test_adjacent_circles_alternate_labels():
    d = parse_pd(TREFOIL)
    gen = lee_generator(d, (True,))
    assert sorted(gen.labels) == [LABEL_A, LABEL_B]


def test_scale_exponents():
    assert lee_generator(parse_pd(UNKNOT), (True,)).scale_exponent == Fraction(-1, 2)
    assert lee_generator(parse_pd(TREFOIL), (True,)).scale_exponent == Fraction(1, 2)
    assert lee_generator(parse_pd(FIG8), (True,)).scale_exponent == Fraction(-3, 2)


def test_rescaled_chain_uses_exact_half_powers():
    d = parse_pd(UNKNOT)
    c = build_complex(d, 1, QSQRT2)
    sbar = canonical_chain(c, (True,), rescaled=True)
    inv_sqrt2 = half_power_of_two(-1)
    assert sbar[((), (V_PLUS,))] == inv_sqrt2
    assert sbar[((), (V_MINUS,))] == inv_sqrt2


def test_verify_basis_on_corpus():
    for text in (UNKNOT, CURL, TREFOIL, HOPF, FIG8, UNLINK2, R3_UNKNOT):
        report = verify_basis(parse_pd(text))
        assert report.ok, text
        assert report.homology_rank == 2 ** parse_pd(text).component_count


def test_mod4_types():
    assert mod4_types(parse_pd(UNKNOT)) == (3, 1)
    for text in (TREFOIL, CURL, FIG8):
        plus, minus = mod4_types(parse_pd(text))
        assert (plus - minus) % 4 == 2
    with pytest.raises(PDValidationError):
        mod4_types(parse_pd(HOPF))


def test_global_color_flip_swaps_generators_on_knots():
    for text in (UNKNOT, TREFOIL, CURL, FIG8):
        d = parse_pd(text)
        flipped = lee_generator(d, (True,), flip_colors=True)
        reversed_ = lee_generator(d, (False,))
        assert flipped.labels == reversed_.labels
        assert flipped.bits == reversed_.bits


def test_canonical_classes_independent_in_homology():
    d = parse_pd(HOPF)
    c = build_complex(d, 1, QQ)
    fh = FieldHomology(c)
    coords = []
    for o in all_orientations(d):
        chain = canonical_chain(c, o)
        coords.append(fh.reduce_chain(chain))
    # four distinct classes across degrees 0 and 2
    assert len(coords) == 4
    seen = set()
    for i, cc in coords:
        seen.add((i, tuple(sorted((k, str(v)) for k, v in cc.items()))))
    assert len(seen) == 4
