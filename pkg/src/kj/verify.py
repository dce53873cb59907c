"""Machine verification of the canonical-generator calculus.

Each checker runs the exact-arithmetic engine on one instance and returns a
structured report; the suites iterate over the bundled corpus plus seeded
random instances. Reports carry the realized signs and both exponent
hypotheses (-chi/2 against -chi), so a discrepancy is documented rather
than assumed away.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .canonical import canonical_chain
from .cube import build_complex, graded_euler_characteristic, kauffman_bracket
from .diagram import PlanarDiagram, all_orientations, parse_pd, render_pd
from .errors import IllegalMoveError
from .homology import homology
from .movie import (
    Movie,
    MovieMaps,
    compatible_orientations,
    effective_orientation,
    movie_total_flip,
)
from .moves import Birth, Death, Move, R1Move, R2Move, R3Move, Saddle, apply_move
from .rings import QQ, QSQRT2, QSqrt2, half_power_of_two
from .sparse import SparseMatrix, solve_in_image

__all__ = [
    "verify_proposition",
    "verify_corollary",
    "leading_order_check",
    "euler_oracle_suite",
    "rmoves_suite",
    "proposition_suite",
    "corollary_suite",
    "leading_order_suite",
    "run_suite",
]


@dataclass
class CheckReport:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "details": _plain(self.details)}

    def line(self) -> str:
        status = "pass" if self.ok else "FAIL"
        extras = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"[{status}] {self.name}" + (f" ({extras})" if extras else "")


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, set):
        return [_plain(v) for v in sorted(x, key=repr)]
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, QSqrt2):
        return str(x)
    return x


def _canonical_matrix(complex_, fh, orientations, rescaled=True):
    """Columns: homology coordinates of each canonical class, stacked over
    degrees. Returns (matrix, row offset per degree, column degree list)."""
    offset = {}
    run = 0
    for i in sorted(fh.reps):
        offset[i] = run
        run += fh.rank(i)
    m = SparseMatrix(run, len(orientations), complex_.ring)
    degrees = []
    for j, o in enumerate(orientations):
        chain = canonical_chain(complex_, o, rescaled=rescaled)
        i, vec = complex_.chain_to_vec(chain)
        coords = fh.reduce(i, vec)
        degrees.append(i)
        for r, v in coords.items():
            m.set(offset[i] + r, j, v)
    return m, offset, degrees


def _expand_in_canonical_chains(complex_, chain, orientations):
    """Solve chain = sum c_o * rescaled canonical chain, or None."""
    gens = sorted(set(chain))
    index = {}
    cols = []
    for o in orientations:
        col = {}
        for g, v in canonical_chain(complex_, o, rescaled=True).items():
            index.setdefault(g, len(index))
            col[index[g]] = v
        cols.append(col)
    for g in gens:
        index.setdefault(g, len(index))
    m = SparseMatrix(len(index), len(orientations), complex_.ring)
    for j, col in enumerate(cols):
        for r, v in col.items():
            m.set(r, j, v)
    target = {index[g]: v for g, v in chain.items()}
    return solve_in_image(m, target)


def verify_proposition(movie: Movie, orientation) -> CheckReport:
    """phi'(sbar_o) against sum over compatible orientations of
    +-2^(-chi/2) sbar, with the alternative exponent -chi also evaluated."""
    name = f"proposition[{_movie_name(movie)}, o={_otxt(orientation)}]"
    if any(f.is_empty() for f in movie.frames):
        return CheckReport(name, False, {"error": "movie has an empty frame"})
    if movie.has_closed_component():
        return CheckReport(name, False, {"error": "movie has a closed component"})
    chi = movie.euler_characteristic
    maps = MovieMaps(movie, t=1, ring=QSQRT2)
    c1, c2 = maps.complexes[0], maps.complexes[-1]
    fh2 = maps.homologies[-1]
    sbar = canonical_chain(c1, orientation, rescaled=True)
    level, image = maps.apply_to_chain(sbar)
    flip = movie_total_flip(movie)
    compat = {
        effective_orientation(o, flip)
        for o in compatible_orientations(movie, orientation)
    }
    finals = all_orientations(movie.frames[-1])
    if level == "chain":
        coeffs = _expand_in_canonical_chains(c2, image, finals)
        if coeffs is None:
            # fall back to homology classes
            i, vec = c2.chain_to_vec(image) if image else (None, {})
            if image:
                coords = fh2.reduce(i, vec)
            else:
                coords = {}
            level, image = "class", (i, coords)
        else:
            return _judge_proposition(name, chi, finals, coeffs, compat, "chain")
    i, coords = image
    m, offset, degrees = _canonical_matrix(c2, fh2, finals)
    target = {offset[i] + r: v for r, v in coords.items()} if coords else {}
    coeffs = solve_in_image(m, target)
    if coeffs is None:
        return CheckReport(
            name, False, {"error": "image is not in the canonical span"}
        )
    return _judge_proposition(name, chi, finals, coeffs, compat, "class")


def _judge_proposition(name, chi, finals, coeffs, compat, level) -> CheckReport:
    ring = QSQRT2
    main = half_power_of_two(-chi)        # 2^(-chi/2)
    alt = half_power_of_two(-2 * chi)     # 2^(-chi)
    signs = {}
    ok_main = True
    ok_alt = True
    for j, o in enumerate(finals):
        c = coeffs.get(j, ring.zero)
        if o in compat:
            if c == main:
                signs[o] = 1
            elif c == -main:
                signs[o] = -1
            else:
                ok_main = False
            if c != alt and c != -alt:
                ok_alt = False
        else:
            if not ring.is_zero(c):
                ok_main = False
                ok_alt = False
    details = {
        "chi": chi,
        "level": level,
        "compatible": [_otxt(o) for o in sorted(compat)],
        "signs": {_otxt(o): s for o, s in sorted(signs.items())},
        "exponent_-chi/2": ok_main,
        "exponent_-chi": ok_alt,
    }
    return CheckReport(name, ok_main, details)


def verify_corollary(movie: Movie) -> CheckReport:
    """The mod-4 dichotomy for a connected cobordism between knots."""
    name = f"corollary[{_movie_name(movie)}]"
    d1, d2 = movie.frames[0], movie.frames[-1]
    if d1.component_count != 1 or d2.component_count != 1:
        return CheckReport(name, False, {"error": "ends are not knots"})
    if not movie.is_connected_surface():
        return CheckReport(name, False, {"error": "cobordism is not connected"})
    chi = movie.euler_characteristic
    maps = MovieMaps(movie, t=1, ring=QSQRT2)
    c1, c2 = maps.complexes[0], maps.complexes[-1]
    fh2 = maps.homologies[-1]
    ring = QSQRT2
    s_plus = canonical_chain(c1, (True,), rescaled=True)
    s_minus = canonical_chain(c1, (False,), rescaled=True)
    diff = dict(s_plus)
    for g, v in s_minus.items():
        w = diff.get(g, ring.zero) - v
        if ring.is_zero(w):
            diff.pop(g, None)
        else:
            diff[g] = w
    level, image = maps.apply_to_chain(diff)
    finals = all_orientations(d2)
    if level == "chain":
        coeffs = _expand_in_canonical_chains(c2, image, finals)
    else:
        i, coords = image
        m, offset, _ = _canonical_matrix(c2, fh2, finals)
        target = {offset[i] + r: v for r, v in coords.items()} if coords else {}
        coeffs = solve_in_image(m, target)
    if coeffs is None:
        return CheckReport(name, False, {"error": "image not in canonical span"})
    c_a = coeffs.get(0, ring.zero)
    c_b = coeffs.get(1, ring.zero)
    factor = half_power_of_two(-chi)
    residue = chi % 4
    if residue == 0:
        shape_ok = c_a == -c_b  # multiple of sbar_o - sbar_o'
    elif residue == 2:
        shape_ok = c_a == c_b  # multiple of sbar_o + sbar_o'
    else:
        return CheckReport(name, False, {"error": f"chi = {chi} is odd"})
    sign = None
    if c_a == factor:
        sign = 1
    elif c_a == -factor:
        sign = -1
    ok = shape_ok and sign is not None
    alt_ok = shape_ok and (c_a == half_power_of_two(-2 * chi) or c_a == -half_power_of_two(-2 * chi))
    return CheckReport(
        name,
        ok,
        {
            "chi": chi,
            "residue_mod_4": residue,
            "combination": "difference" if residue == 0 else "sum",
            "sign": sign,
            "exponent_-chi/2": ok,
            "exponent_-chi": alt_ok,
            "level": level,
        },
    )


def leading_order_check(movie: Movie) -> CheckReport:
    """Per move, the t = 1 chain map minus the t = 0 one must raise the
    q-filtration strictly; for chain-level movies the composite difference
    must raise it by at least chi + 4."""
    name = f"leading-order[{_movie_name(movie)}]"
    maps0 = MovieMaps(movie, t=0, ring=QQ)
    maps1 = MovieMaps(movie, t=1, ring=QQ)
    per_move = []
    all_ok = True
    for k, rec in enumerate(movie.records):
        cm0, cm1 = maps0.chain_steps[k], maps1.chain_steps[k]
        if cm0 is None or cm1 is None:
            per_move.append({"move": rec.kind, "checked": False})
            continue
        chi_move = {"birth": 1, "death": 1}.get(
            rec.kind, -1 if rec.kind.startswith("saddle") else 0
        )
        ok, min_shift = _difference_filtration(
            maps0.complexes[k], maps0.complexes[k + 1], cm0, cm1, chi_move
        )
        all_ok = all_ok and ok
        per_move.append(
            {"move": rec.kind, "checked": True, "chi": chi_move,
             "strictly_higher": ok, "min_extra_shift": min_shift}
        )
    comp_detail = {}
    comp0 = maps0.chain_composite()
    comp1 = maps1.chain_composite()
    if comp0 is not None and comp1 is not None:
        chi = movie.euler_characteristic
        ok, min_shift = _difference_filtration(
            maps0.complexes[0], maps0.complexes[-1], comp0, comp1, chi,
            minimum_extra=4,
        )
        all_ok = all_ok and ok
        comp_detail = {"composite_ok": ok, "composite_min_extra": min_shift}
    return CheckReport(name, all_ok, {"moves": per_move, **comp_detail})


def _difference_filtration(c_src, c_dst, cm0, cm1, chi, minimum_extra=1):
    ok = True
    min_shift = None
    for i in cm0.mats:
        # the t = 0 map must be pure of degree chi
        for (r, c), _ in cm0.mats[i].data.items():
            dq = c_dst.q_of(c_dst.bases[i][r]) - c_src.q_of(c_src.bases[i][c])
            if dq != chi:
                ok = False
        delta = cm1.mats[i] - cm0.mats[i]
        for (r, c), _ in delta.data.items():
            dq = c_dst.q_of(c_dst.bases[i][r]) - c_src.q_of(c_src.bases[i][c])
            extra = dq - chi
            min_shift = extra if min_shift is None else min(min_shift, extra)
            if extra < minimum_extra:
                ok = False
    return ok, min_shift


def final_computation_check(movie: Movie) -> CheckReport:
    """The genus-one calculation: phi'(v+) = +-2 v- and the vanishing of the
    correction term via the q >= 3 gap of the unknot's homology."""
    from .cube import V_MINUS, V_PLUS

    name = f"final-computation[{_movie_name(movie)}]"
    maps0 = MovieMaps(movie, t=0, ring=QQ)
    maps1 = MovieMaps(movie, t=1, ring=QQ)
    comp0, comp1 = maps0.chain_composite(), maps1.chain_composite()
    if comp0 is None or comp1 is None:
        return CheckReport(name, False, {"error": "movie is not chain-level"})
    c_in, c_out = maps1.complexes[0], maps1.complexes[-1]
    plus = next(
        g for g in c_in.bases[0] if g[1] == (V_PLUS,) * len(g[1]) and not g[0]
    )
    one = QQ.one
    img1 = comp1.apply_chain({plus: one})
    img0 = comp0.apply_chain({plus: one})
    minus_gen = next(g for g in c_out.bases[0] if g[1] == (V_MINUS,))
    expect = {minus_gen: QQ.from_int(2)}
    neg = {minus_gen: QQ.from_int(-2)}
    phi_ok = img1 in (expect, neg)
    psi = dict(img1)
    for g, v in img0.items():
        w = psi.get(g, QQ.zero) - v
        if QQ.is_zero(w):
            psi.pop(g, None)
        else:
            psi[g] = w
    chi = movie.euler_characteristic
    bound = 1 + chi + 4
    gap_ok = all(
        q < bound
        for (i, q), (rank, _) in homology(build_complex(movie.frames[-1], 0, QQ)).nonzero().items()
        if rank
    )
    return CheckReport(
        name,
        phi_ok and not psi and gap_ok,
        {
            "phi_prime_v_plus": "2 v-" if img1 == expect else ("-2 v-" if img1 == neg else "unexpected"),
            "psi_v_plus_zero": not psi,
            "target_gap_above": bound - 1,
            "gap_ok": gap_ok,
        },
    )


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _movie_name(movie: Movie) -> str:
    names = {
        "birth": "b", "death": "d", "saddle": "s",
        "r1": "r1", "r2": "r2", "r3": "r3",
    }
    start = "empty" if movie.initial.is_empty() else render_pd(movie.initial)
    seq = ",".join(names.get(m.kind, m.kind) for m in movie.moves)
    return f"{start};{seq}"


def _otxt(o) -> str:
    return "".join("+" if b else "-" for b in o) or "()"


def euler_oracle_suite(corpus=None) -> list[CheckReport]:
    from .corpus import DIAGRAMS

    out = []
    for name, text in (corpus or DIAGRAMS).items():
        d = parse_pd(text)
        chi_q = graded_euler_characteristic(build_complex(d, 0, QQ))
        bracket = kauffman_bracket(d)
        out.append(
            CheckReport(
                f"euler-oracle[{name}]",
                chi_q == bracket,
                {"bracket": str(bracket)},
            )
        )
    return out


def _canonical_transport_report(movie: Movie, label: str) -> CheckReport:
    """rho'([sbar_o]) = +-[sbar_otilde] for every orientation."""
    maps = MovieMaps(movie, t=1, ring=QSQRT2)
    total = maps.composite_step()
    flip = movie_total_flip(movie)
    c1, c2 = maps.complexes[0], maps.complexes[-1]
    fh1, fh2 = maps.homologies[0], maps.homologies[-1]
    signs = {}
    for o in all_orientations(movie.frames[0]):
        outs = compatible_orientations(movie, o)
        if len(outs) != 1:
            return CheckReport(label, False, {"error": f"transport of {o} branches"})
        o2 = effective_orientation(next(iter(outs)), flip)
        chain = canonical_chain(c1, o, rescaled=True)
        i, vec = c1.chain_to_vec(chain)
        img = total.apply_class(i, fh1.reduce(i, vec))
        expect_chain = canonical_chain(c2, o2, rescaled=True)
        j, evec = c2.chain_to_vec(expect_chain)
        if i != j:
            return CheckReport(label, False, {"error": "degree mismatch"})
        ecoords = fh2.reduce(j, evec)
        matched = None
        for s in (1, -1):
            if {k: QSQRT2.from_int(s) * v for k, v in ecoords.items()} == img:
                matched = s
                break
        if matched is None:
            return CheckReport(
                label, False, {"error": f"image of {_otxt(o)} is not a signed canonical class"}
            )
        signs[_otxt(o)] = matched
    return CheckReport(label, True, {"signs": signs})


def rmoves_suite(seed: int = 0) -> list[CheckReport]:
    from .corpus import DIAGRAMS

    out = []
    unknot = parse_pd(DIAGRAMS["unknot"])
    trefoil = parse_pd(DIAGRAMS["trefoil"])
    hopf = parse_pd(DIAGRAMS["hopf"])
    unlink = parse_pd(DIAGRAMS["unlink2"])
    instances: list[tuple[str, Movie]] = []
    for hand in ("left", "right"):
        instances.append(
            (f"r1-add-{hand}-unknot", Movie(unknot, [R1Move("add", 1, hand)]))
        )
        instances.append(
            (f"r1-add-{hand}-trefoil", Movie(trefoil, [R1Move("add", 1, hand)]))
        )
    curl = Movie(unknot, [R1Move("add", 1, "left")])
    instances.append(
        (
            "r1-remove-left",
            Movie(unknot, [R1Move("add", 1, "left"),
                           R1Move("remove", curl.records[0].data["loop_edge"])]),
        )
    )
    poke = Movie(unknot, [R2Move("add", (1, 1))])
    m1, m2 = poke.records[0].data["m1"], poke.records[0].data["m2"]
    instances.append(("r2-add-fold-unknot", poke))
    instances.append(
        (
            "r2-remove-fold",
            Movie(unknot, [R2Move("add", (1, 1)), R2Move("remove", (m1, m2))]),
        )
    )
    instances.append(("r2-add-unlink", Movie(unlink, [R2Move("add", (1, 2))])))
    instances.append(
        ("r2-add-unlink-over", Movie(unlink, [R2Move("add", (1, 2), over=True)]))
    )
    instances.append(("r2-add-trefoil", Movie(trefoil, [R2Move("add", (1, 3))])))
    instances.append(("r2-add-hopf", Movie(hopf, [R2Move("add", (1, 3))])))
    from .corpus import DIAGRAMS as _D

    r3d = parse_pd(_D["r3-unknot"])
    instances.append(("r3-slide", Movie(r3d, [R3Move((0, 1, 2))])))
    for label, movie in instances:
        out.append(_canonical_transport_report(movie, f"rmoves[{label}]"))
    return out


def _elementary_morse_instances() -> list[tuple[str, Movie, tuple]]:
    from .corpus import DIAGRAMS

    out = []
    for name in ("unknot", "unlink2", "curl", "trefoil", "hopf", "fig8"):
        d = parse_pd(DIAGRAMS[name])
        for o in all_orientations(d):
            out.append((f"birth-on-{name}", Movie(d, [Birth()]), o))
        for loop in d.loops[:1]:
            if d.component_count > 1:
                for o in all_orientations(d):
                    out.append((f"death-on-{name}", Movie(d, [Death(loop)]), o))
        saddles = []
        edges = list(d.edges)
        for e1 in edges:
            for e2 in edges:
                for side in ("left", "right"):
                    if len(saddles) >= 3:
                        break
                    try:
                        mv = Movie(d, [Saddle((e1, e2), side)])
                    except IllegalMoveError:
                        continue
                    if any(f.is_empty() for f in mv.frames):
                        continue
                    saddles.append((f"saddle-{e1}-{e2}-{side}-{name}", mv))
        for label, mv in saddles:
            for o in all_orientations(d):
                out.append((label, mv, o))
    return out


def _random_composite_movies(seed: int, count: int = 10):
    from .corpus import DIAGRAMS

    rng = random.Random(seed)
    starts = ["unknot", "unlink2", "curl", "trefoil", "hopf"]
    movies = []
    attempts = 0
    while len(movies) < count and attempts < 400:
        attempts += 1
        d = parse_pd(DIAGRAMS[rng.choice(starts)])
        moves: list[Move] = []
        frame = d
        steps = rng.randint(2, 4)
        good = True
        for _ in range(steps):
            cands = _legal_move_candidates(frame, rng)
            picked = None
            for mv in cands:
                try:
                    nxt, _ = apply_move(frame, mv)
                except IllegalMoveError:
                    continue
                if nxt.is_empty():
                    continue
                if nxt.crossing_count > 4:
                    continue
                picked = (mv, nxt)
                break
            if picked is None:
                good = False
                break
            moves.append(picked[0])
            frame = picked[1]
        if not good or not moves:
            continue
        movie = Movie(d, moves)
        if movie.has_closed_component():
            continue
        movies.append(movie)
    return movies


def _legal_move_candidates(d: PlanarDiagram, rng: random.Random) -> list[Move]:
    edges = list(d.edges)
    cands: list[Move] = [Birth()]
    for loop in d.loops:
        cands.append(Death(loop))
    for _ in range(6):
        if edges:
            e1, e2 = rng.choice(edges), rng.choice(edges)
            cands.append(Saddle((e1, e2), rng.choice(("left", "right"))))
            cands.append(R2Move("add", (e1, e2), rng.choice((False, True))))
    if edges:
        cands.append(R1Move("add", rng.choice(edges), rng.choice(("left", "right"))))
    rng.shuffle(cands)
    return cands


def proposition_suite(seed: int = 0) -> list[CheckReport]:
    out = []
    for label, movie, o in _elementary_morse_instances():
        out.append(
            _rename(verify_proposition(movie, o), f"proposition[{label}, o={_otxt(o)}]")
        )
    for idx, movie in enumerate(_random_composite_movies(seed)):
        for o in all_orientations(movie.frames[0])[:2]:
            out.append(
                _rename(
                    verify_proposition(movie, o),
                    f"proposition[seeded-{idx}, o={_otxt(o)}]",
                )
            )
    # the printed exponent must fail somewhere (chi != 0 instances exist)
    alt_fails = any(
        not r.details.get("exponent_-chi", True) for r in out if r.ok
    )
    out.append(
        CheckReport(
            "proposition[exponent-discrepancy]",
            alt_fails,
            {"alternative_exponent_fails_somewhere": alt_fails},
        )
    )
    return out


def _rename(report: CheckReport, name: str) -> CheckReport:
    report.name = name
    return report


def _genus_movie(genus: int) -> Movie:
    moves: list[Move] = []
    for _ in range(genus):
        moves.append(Saddle((1, 1)))
        moves.append(Saddle((1, 2)))
    return Movie(parse_pd("PD[O]"), moves)


def corollary_suite(seed: int = 0) -> list[CheckReport]:
    out = [
        _rename(verify_corollary(Movie(parse_pd("PD[O]"), [])), "corollary[identity]"),
        _rename(verify_corollary(_genus_movie(1)), "corollary[genus-1]"),
        _rename(verify_corollary(_genus_movie(2)), "corollary[genus-2]"),
    ]
    return out


def leading_order_suite(seed: int = 0) -> list[CheckReport]:
    from .corpus import DIAGRAMS

    unknot = parse_pd(DIAGRAMS["unknot"])
    unlink = parse_pd(DIAGRAMS["unlink2"])
    trefoil = parse_pd(DIAGRAMS["trefoil"])
    movies = [
        ("birth", Movie(unknot, [Birth()])),
        ("death", Movie(unlink, [Death(1)])),
        ("saddle-split", Movie(unknot, [Saddle((1, 1))])),
        ("saddle-merge", Movie(unlink, [Saddle((1, 2))])),
        ("r1-left", Movie(unknot, [R1Move("add", 1, "left")])),
        ("r1-right", Movie(unknot, [R1Move("add", 1, "right")])),
        ("r2-fold", Movie(unknot, [R2Move("add", (1, 1))])),
        ("r2-unlink", Movie(unlink, [R2Move("add", (1, 2))])),
        ("saddle-trefoil", Movie(trefoil, [Saddle((1, 1))])),
        ("genus-1", _genus_movie(1)),
    ]
    out = [
        _rename(leading_order_check(mv), f"leading-order[{label}]")
        for label, mv in movies
    ]
    out.append(
        _rename(final_computation_check(_genus_movie(1)), "leading-order[final-computation]")
    )
    return out


SUITES = {
    "euler-oracle": lambda seed: euler_oracle_suite(),
    "rmoves": rmoves_suite,
    "proposition": proposition_suite,
    "corollary": corollary_suite,
    "leading-order": leading_order_suite,
}


def run_suite(name: str, seed: int = 0) -> list[CheckReport]:
    if name == "all":
        out = []
        for key in ("euler-oracle", "rmoves", "proposition", "corollary", "leading-order"):
            out.extend(SUITES[key](seed))
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](seed)


# ---------------------------------------------------------------------------
# randomized cancelling insertions (closed-movie invariance)
# ---------------------------------------------------------------------------


def random_cancelling_insertion(movie: Movie, rng: random.Random) -> Movie:
    """Insert one (add, remove) Reidemeister pair at a random legal spot."""
    for _ in range(200):
        k = rng.randrange(len(movie.moves) + 1)
        frame = movie.frames[k]
        if frame.is_empty():
            continue
        edges = list(frame.edges)
        choice = rng.random()
        try:
            if choice < 0.5:
                edge = rng.choice(edges)
                hand = rng.choice(("left", "right"))
                add = R1Move("add", edge, hand)
                mid, rec = apply_move(frame, add)
                remove = R1Move("remove", rec.data["loop_edge"], hand)
            else:
                e1 = rng.choice(edges)
                e2 = rng.choice(edges)
                add = R2Move("add", (e1, e2), rng.choice((False, True)))
                mid, rec = apply_move(frame, add)
                remove = R2Move("remove", (rec.data["m1"], rec.data["m2"]))
            apply_move(mid, remove)
        except IllegalMoveError:
            continue
        moves = list(movie.moves)
        moves[k:k] = [add, remove]
        try:
            return Movie(movie.initial, moves)
        except IllegalMoveError:
            # downstream moves may reference edges renamed by the insertion
            continue
    raise RuntimeError("found no legal cancelling insertion")
