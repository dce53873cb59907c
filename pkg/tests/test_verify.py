import random

from kj.canonical import canonical_chain
from kj.cube import build_complex
from kj.diagram import parse_pd
from kj.homology import homology
from kj.movie import Movie, MovieMaps, compatible_orientations
from kj.moves import R1Move, R2Move, R3Move, Saddle, apply_move
from kj.rings import QQ, QSQRT2
from kj.sparse import solve_in_image
from kj.verify import (
    corollary_suite,
    euler_oracle_suite,
    leading_order_suite,
    random_cancelling_insertion,
    rmoves_suite,
    verify_corollary,
    verify_proposition,
)

from diagrams import R3_UNKNOT, TREFOIL, UNKNOT, UNLINK2


def test_birth_proposition_example():
    mv = Movie(parse_pd(UNKNOT), [__import__("kj.moves", fromlist=["Birth"]).Birth()])
    report = verify_proposition(mv, (True,))
    assert report.ok
    assert report.details["chi"] == 1
    assert len(report.details["compatible"]) == 2
    # here 2^(-chi) = 2^(-1) differs from 2^(-1/2): the alternative fails
    assert report.details["exponent_-chi"] is False


def test_death_proposition_example():
    from kj.moves import Death

    mv = Movie(parse_pd(UNLINK2), [Death(1)])
    report = verify_proposition(mv, (True, True))
    assert report.ok and report.details["chi"] == 1


def test_genus1_proposition_and_corollary():
    mv = Movie(parse_pd(UNKNOT), [Saddle((1, 1)), Saddle((1, 2))])
    rep = verify_proposition(mv, (True,))
    assert rep.ok and rep.details["chi"] == -2
    cor = verify_corollary(mv)
    assert cor.ok and cor.details["combination"] == "sum" and cor.details["sign"] in (1, -1)


def test_r2_exactness_witness():
    # in the opposite-orientation poke, the image differs from the target
    # canonical chain by an exact term
    mv = Movie(parse_pd(UNKNOT), [R2Move("add", (1, 1))])
    maps = MovieMaps(mv, t=1, ring=QSQRT2)
    c1, c2 = maps.complexes
    cm = maps.chain_steps[0]
    from kj.movie import effective_orientation, movie_total_flip

    flip = movie_total_flip(mv)
    for o in ((True,), (False,)):
        image = cm.apply_chain(canonical_chain(c1, o, rescaled=True))
        o2 = effective_orientation(next(iter(compatible_orientations(mv, o))), flip)
        for sign in (1, -1):
            target = canonical_chain(c2, o2, rescaled=True)
            target = {g: QSQRT2.from_int(sign) * v for g, v in target.items()}
            residue = dict(image)
            for g, v in target.items():
                w = residue.get(g, QSQRT2.zero) - v
                if QSQRT2.is_zero(w):
                    residue.pop(g, None)
                else:
                    residue[g] = w
            if not residue:
                break
            i, vec = c2.chain_to_vec(residue)
            if i - 1 not in c2.bases:
                continue
            sol = solve_in_image(c2.diff[i - 1], vec)
            if sol is not None:
                break
        else:
            raise AssertionError(f"no exactness witness for {o}")


def test_reidemeister_moves_preserve_homology():
    base = parse_pd(TREFOIL)
    base_summary = homology(build_complex(base, 0, QQ)).nonzero()
    moves = [
        Movie(base, [R1Move("add", 1, "left")]),
        Movie(base, [R1Move("add", 2, "right")]),
        Movie(base, [R2Move("add", (1, 3))]),
    ]
    for mv in moves:
        after = homology(build_complex(mv.frames[-1], 0, QQ)).nonzero()
        assert after == base_summary
    slid = Movie(parse_pd(R3_UNKNOT), [R3Move((0, 1, 2))])
    a = homology(build_complex(slid.frames[0], 0, QQ)).nonzero()
    b = homology(build_complex(slid.frames[1], 0, QQ)).nonzero()
    assert a == b


def test_homology_invariant_under_crossing_reordering():
    reordered = parse_pd("PD[X(5,3,6,2), X(1,5,2,4), X(3,1,4,6)]")
    a = homology(build_complex(parse_pd(TREFOIL), 0, QQ)).nonzero()
    b = homology(build_complex(reordered, 0, QQ)).nonzero()
    assert a == b


def test_suites_all_green():
    for reports in (
        euler_oracle_suite(),
        rmoves_suite(3),
        corollary_suite(),
        leading_order_suite(),
    ):
        assert all(r.ok for r in reports), [r.line() for r in reports if not r.ok]


def test_insertion_invariance_nonclosed():
    # inserting a cancelling pair into an open movie keeps the induced map
    # up to global sign
    mv = Movie(parse_pd(UNKNOT), [Saddle((1, 1)), Saddle((1, 2))])
    rng = random.Random(5)
    noisy = random_cancelling_insertion(mv, rng)
    a = MovieMaps(mv, t=0, ring=QQ).composite_step()
    b = MovieMaps(noisy, t=0, ring=QQ).composite_step()
    for i, m in a.mats.items():
        other = b.mats[i]
        assert m == other or m == other.scale(QQ.from_int(-1))
