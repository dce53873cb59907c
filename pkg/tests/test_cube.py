import itertools
import random

import pytest

from kj.cube import (
    V_MINUS,
    V_PLUS,
    build_complex,
    filtration_level,
    graded_euler_characteristic,
    kauffman_bracket,
    mod4_split,
)
from kj.diagram import parse_pd, resolve
from kj.errors import PDValidationError
from kj.laurent import Laurent
from kj.rings import GF, QQ, ZZ

from diagrams import CURL, FIG8, HOPF, MIRROR_TREFOIL, TREFOIL


def test_unknot_complex():
    c = build_complex(parse_pd("PD[O]"), 0, QQ)
    assert c.degrees() == [0]
    assert c.dim(0) == 2
    gens = c.bases[0]
    qs = sorted(c.q_of(g) for g in gens)
    assert qs == [-1, 1]
    assert c.diff[0].is_zero()


def test_trefoil_generator_count_matches_brute_force():
    d = parse_pd(TREFOIL)
    total = sum(
        2 ** resolve(d, bits).circle_count
        for bits in itertools.product((0, 1), repeat=3)
    )
    assert total == 30
    c = build_complex(d, 0, QQ)
    assert sum(c.dim(i) for i in c.degrees()) == total


def test_curl_lee_complex_small():
    c = build_complex(parse_pd(CURL), 1, QQ)
    assert sorted(c.dim(i) for i in c.degrees()) == [2, 4]
    c.validate()


def test_lee_rejects_characteristic_two():
    with pytest.raises(PDValidationError):
        build_complex(parse_pd(CURL), 1, GF(2))


def test_d_squared_zero_on_corpus_both_theories():
    for text in (TREFOIL, MIRROR_TREFOIL, CURL, HOPF, FIG8, "PD[O,O]", "PD[]"):
        d = parse_pd(text)
        for t in (0, 1):
            build_complex(d, t, QQ).validate()


def test_q_grading_examples():
    c = build_complex(parse_pd("PD[O]"), 0, QQ)
    (plus,) = [g for g in c.bases[0] if g[1] == (V_PLUS,)]
    assert c.q_of(plus) == 1
    tre = build_complex(parse_pd(TREFOIL), 0, QQ)
    gen = ((0, 0, 0), (V_MINUS, V_MINUS))
    assert tre.q_of(gen) == 1  # -2 + 0 + 3


def test_filtration_level():
    c = build_complex(parse_pd("PD[O]"), 0, QQ)
    plus = ((), (V_PLUS,))
    minus = ((), (V_MINUS,))
    one = QQ.one
    assert filtration_level(c, {plus: one, minus: one}) == -1
    assert filtration_level(c, {plus: one}) == 1
    assert filtration_level(c, {}) == float("inf")


def test_lee_differential_is_graded_plus_degree_four():
    for text in (CURL, TREFOIL, HOPF):
        d = parse_pd(text)
        c0 = build_complex(d, 0, QQ)
        c1 = build_complex(d, 1, QQ)
        for i in c1.degrees():
            if i + 1 not in c1.bases:
                continue
            delta = c1.diff[i] - c0.diff[i]
            for (r, col), _ in delta.data.items():
                dq = c1.q_of(c1.bases[i + 1][r]) - c1.q_of(c1.bases[i][col])
                assert dq == 4


def test_kauffman_bracket_values():
    assert kauffman_bracket(parse_pd("PD[O]")) == Laurent({1: 1, -1: 1})
    assert kauffman_bracket(parse_pd("PD[]")) == Laurent.one()
    assert kauffman_bracket(parse_pd("PD[O,O]")) == Laurent({1: 1, -1: 1}) ** 2
    tre = kauffman_bracket(parse_pd(TREFOIL))
    assert tre == Laurent({1: 1, 3: 1, 5: 1, 9: -1})
    mir = kauffman_bracket(parse_pd(MIRROR_TREFOIL))
    assert mir == Laurent({-1: 1, -3: 1, -5: 1, -9: -1})


def test_euler_characteristic_equals_bracket():
    for text in (TREFOIL, MIRROR_TREFOIL, CURL, HOPF, FIG8, "PD[O]", "PD[O,O]", "PD[]"):
        d = parse_pd(text)
        c = build_complex(d, 0, QQ)
        assert graded_euler_characteristic(c) == kauffman_bracket(d)


def test_euler_characteristic_multiplicative_disjoint_union():
    u2 = build_complex(parse_pd("PD[O,O]"), 0, QQ)
    assert graded_euler_characteristic(u2) == Laurent({1: 1, -1: 1}) ** 2


def test_mod4_split():
    c = build_complex(parse_pd("PD[O]"), 1, QQ)
    residues, parts = mod4_split(c)
    assert residues == [1, 3]
    assert parts[1] == {((), (V_PLUS,))}
    assert parts[3] == {((), (V_MINUS,))}
    for text in (TREFOIL, CURL):
        residues, _ = mod4_split(build_complex(parse_pd(text), 1, QQ))
        assert (residues[1] - residues[0]) % 4 == 2
    with pytest.raises(PDValidationError):
        mod4_split(build_complex(parse_pd(HOPF), 1, QQ))


def test_d_squared_on_random_small_diagrams():
    # crude random PD generator: random closures are rarely valid, so build
    # random resolutions of corpus diagrams instead and rely on moves later
    rng = random.Random(19)
    texts = [TREFOIL, MIRROR_TREFOIL, CURL, HOPF, FIG8]
    for _ in range(10):
        d = parse_pd(rng.choice(texts))
        for t in (0, 1):
            build_complex(d, t, ZZ if t == 0 else QQ).validate()


def test_empty_diagram_complex_is_rank_one():
    c = build_complex(parse_pd("PD[]"), 0, QQ)
    assert c.degrees() == [0] and c.dim(0) == 1
    assert c.q_of(c.bases[0][0]) == 0
    from kj.homology import homology

    assert homology(c).nonzero() == {(0, 0): (1, [])}
