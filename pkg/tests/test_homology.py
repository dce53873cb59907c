import pytest

from kj.cube import build_complex, graded_euler_characteristic
from kj.diagram import parse_pd
from kj.homology import FieldHomology, homology, lee_total_rank
from kj.laurent import Laurent
from kj.rings import GF, QQ, ZZ

from diagrams import CINQUEFOIL, FIG8, HOPF, MIRROR_TREFOIL, TREFOIL, UNKNOT, UNLINK2


def test_unknot_homology():
    s = homology(build_complex(parse_pd(UNKNOT), 0, ZZ))
    assert s.nonzero() == {(0, 1): (1, []), (0, -1): (1, [])}


def test_trefoil_integral_khovanov():
    s = homology(build_complex(parse_pd(TREFOIL), 0, ZZ))
    assert s.nonzero() == {
        (0, 1): (1, []),
        (0, 3): (1, []),
        (2, 5): (1, []),
        (3, 7): (0, [2]),
        (3, 9): (1, []),
    }


def test_mirror_trefoil_integral_khovanov():
    s = homology(build_complex(parse_pd(MIRROR_TREFOIL), 0, ZZ))
    # degrees and gradings mirror; the order-2 torsion moves to degree -2
    assert s.nonzero() == {
        (0, -1): (1, []),
        (0, -3): (1, []),
        (-2, -5): (1, []),
        (-2, -7): (0, [2]),
        (-3, -9): (1, []),
    }


def test_homology_euler_characteristic_consistency():
    for text in (TREFOIL, FIG8, HOPF, CINQUEFOIL):
        d = parse_pd(text)
        c = build_complex(d, 0, ZZ)
        s = homology(c)
        chi = Laurent.zero()
        for (i, q), (rank, _) in s.groups.items():
            chi = chi + Laurent.q(q, (-1) ** i * rank)
        assert chi == graded_euler_characteristic(c)


def test_universal_coefficients_spot_check():
    d = parse_pd(TREFOIL)
    z = homology(build_complex(d, 0, ZZ))
    for ring in (QQ, GF(3), GF(5), GF(7)):
        f = homology(build_complex(d, 0, ring))
        free = {k: v[0] for k, v in z.nonzero().items() if v[0]}
        got = {k: v[0] for k, v in f.nonzero().items() if v[0]}
        # p = 2 would differ; odd p prime to the torsion agrees with Z ranks
        assert got == free


def test_acyclic_two_term_complex():
    # d = identity on a one-dimensional space in adjacent degrees
    d = parse_pd(UNKNOT)
    c = build_complex(d, 0, QQ)
    fh = FieldHomology(c)
    assert fh.total_rank() == 2  # sanity on the unknot itself
    from kj.sparse import SparseMatrix

    class TwoTerm:
        ring = QQ
        t = 0

        def __init__(self):
            self.bases = {0: ["x"], 1: ["y"]}
            self.diff = {
                0: SparseMatrix(1, 1, QQ, {(0, 0): QQ.one}),
                1: SparseMatrix(0, 1, QQ),
            }

        def degrees(self):
            return [0, 1]

        def dim(self, i):
            return len(self.bases.get(i, ()))

        def q_of(self, g):
            return 0

    s = homology(TwoTerm())  # type: ignore[arg-type]
    assert s.nonzero() == {}


def test_lee_ranks_are_two_to_the_components():
    expected = {
        UNKNOT: 2,
        TREFOIL: 2,
        FIG8: 2,
        HOPF: 4,
        UNLINK2: 4,
    }
    for text, rank in expected.items():
        c = build_complex(parse_pd(text), 1, QQ)
        assert lee_total_rank(c) == rank


def test_lee_ranks_over_odd_prime_fields():
    for ring in (GF(3), GF(5)):
        c = build_complex(parse_pd(TREFOIL), 1, ring)
        assert lee_total_rank(c) == 2


def test_trefoil_lee_degrees():
    c = build_complex(parse_pd(TREFOIL), 1, QQ)
    s = homology(c)
    assert s.nonzero() == {(0, None): (2, [])}


def test_hopf_lee_degrees():
    c = build_complex(parse_pd(HOPF), 1, QQ)
    s = homology(c)
    assert s.nonzero() == {(0, None): (2, []), (2, None): (2, [])}


def test_field_homology_reduce_roundtrip():
    c = build_complex(parse_pd(TREFOIL), 0, QQ)
    fh = FieldHomology(c)
    for i in c.degrees():
        for k, rep in enumerate(fh.reps[i]):
            coords = fh.reduce(i, rep)
            assert coords == {k: QQ.one}
    # exact cycles reduce to zero
    for i in c.degrees():
        if i + 1 not in c.bases:
            continue
        img = c.diff[i].columns()
        for col in img[:3]:
            if col:
                assert fh.reduce(i + 1, col) == {}
