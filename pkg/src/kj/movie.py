"""Movies of elementary moves and the maps they induce.

A movie is an initial diagram plus a sequence of moves; its frames are the
successive diagrams. Every move induces a map between the homologies of
its frames (for both t = 0 and t = 1):

* Morse moves and forward R1/R2 moves are honest chain maps, machine
  checked to commute with the differentials;
* R1/R2 removals invert the homology isomorphism of the matching forward
  move;
* R3 acts at homology level by transporting representative cycles through
  the resolution identifications of the slide.

Composing the per-move maps yields the cobordism-induced map; for a closed
movie (empty diagram to empty diagram) at t = 0 the image of the generator
is the Khovanov-Jacobsson number up to sign.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cube import (
    ChainComplex,
    Gen,
    V_MINUS,
    V_PLUS,
    build_complex,
    counit,
    edge_map_on_chain,
    merge_products,
    split_products,
)
from .diagram import PlanarDiagram, oriented_resolution as _oriented_bits, parse_pd, render_pd, resolve
from .errors import IllegalMoveError, InternalInvariantError
from .homology import FieldHomology
from .moves import (
    Move,
    MoveRecord,
    apply_move,
    move_from_json,
    move_to_json,
)
from .rings import QQ, QSQRT2, Ring
from .sparse import SparseMatrix, solve_in_image

__all__ = ["Movie", "MovieMaps", "kj_number", "induced_map", "compatible_orientations"]


# ---------------------------------------------------------------------------
# chain maps
# ---------------------------------------------------------------------------


class ChainMap:
    """A map of chain complexes, homogeneous of a fixed homological shift.

    Matrices are keyed by source degree i and map into degree i + shift of
    the target (reference orientations of the two diagrams need not assign
    crossings the same signs, so saddles may shift degrees).
    """

    def __init__(self, src: ChainComplex, dst: ChainComplex, shift: int = 0):
        self.src = src
        self.dst = dst
        self.shift = shift
        self.mats: dict[int, SparseMatrix] = {}
        for i in src.degrees():
            self.mats[i] = SparseMatrix(dst.dim(i + shift), src.dim(i), src.ring)

    def add_entry(self, gen_src: Gen, gen_dst: Gen, coeff) -> None:
        i, col = self.src.index[gen_src]
        j, row = self.dst.index[gen_dst]
        if j != i + self.shift:
            raise InternalInvariantError(
                f"chain map entry shifts degree by {j - i}, expected {self.shift}"
            )
        self.mats[i].add_to(row, col, coeff)

    def apply_chain(self, chain: dict) -> dict:
        if not chain:
            return {}
        i, vec = self.src.chain_to_vec(chain)
        if i not in self.mats:
            return {}
        return self.dst.vec_to_chain(i + self.shift, self.mats[i].apply(vec))

    def verify(self) -> None:
        """Commutation with both differentials, exactly."""
        for i in self.src.degrees():
            if i + 1 not in self.src.bases:
                continue
            left = (
                self.mats[i + 1] * self.src.diff[i]
                if i + 1 in self.mats
                else None
            )
            j = i + self.shift
            if j in self.dst.diff and j + 1 in self.dst.bases:
                right = self.dst.diff[j] * self.mats[i]
            else:
                right = None
            if left is None or left.is_zero():
                left = None
            if right is None or right.is_zero():
                right = None
            if left is None and right is None:
                continue
            if left is None or right is None or not (left - right).is_zero():
                raise InternalInvariantError(
                    f"chain map does not commute with d at degree {i}"
                )

    def compose(self, earlier: "ChainMap") -> "ChainMap":
        out = ChainMap(earlier.src, self.dst, earlier.shift + self.shift)
        for i in out.mats:
            j = i + earlier.shift
            if i in earlier.mats and j in self.mats:
                out.mats[i] = self.mats[j] * earlier.mats[i]
        return out

    def scaled(self, s: int) -> "ChainMap":
        out = ChainMap(self.src, self.dst, self.shift)
        for i, m in self.mats.items():
            out.mats[i] = m.scale(self.src.ring.from_int(s))
        return out

    def plus(self, other: "ChainMap") -> "ChainMap":
        if other.shift != self.shift:
            raise InternalInvariantError("cannot add maps of different shifts")
        out = ChainMap(self.src, self.dst, self.shift)
        for i in self.mats:
            out.mats[i] = self.mats[i] + other.mats[i]
        return out


def _match_circles_by_edges(res_src, res_dst, overrides: dict[int, int]):
    """Source circle index -> target circle index; overrides win, the rest
    must match edge sets exactly."""
    by_set = {circ.edge_set(): i for i, circ in enumerate(res_dst.circles)}
    out = dict(overrides)
    for i, circ in enumerate(res_src.circles):
        if i in out:
            continue
        j = by_set.get(circ.edge_set())
        if j is None:
            raise InternalInvariantError(
                f"no matching circle for {sorted(circ.edges)}"
            )
        out[i] = j
    return out


def _place_labels(res_dst, corr: dict[int, int], labels, overrides: dict[int, int]):
    out = [None] * res_dst.circle_count
    for tgt, lab in overrides.items():
        out[tgt] = lab
    for src_idx, lab in enumerate(labels):
        tgt = corr.get(src_idx)
        if tgt is not None and out[tgt] is None:
            out[tgt] = lab
    if any(x is None for x in out):
        raise InternalInvariantError("incomplete label transport")
    return tuple(out)


def morse_chain_map(rec: MoveRecord, c1: ChainComplex, c2: ChainComplex) -> ChainMap:
    """Chain map of a birth, death, or saddle (same crossing set)."""
    t = c1.t
    ring = c1.ring
    # a reconnection can change reference crossing signs, shifting degrees
    cm = ChainMap(c1, c2, shift=c1.n_minus - c2.n_minus)
    kind = rec.kind
    for bits, res1 in c1.resolutions.items():
        res2 = c2.resolutions[bits]
        if kind == "birth":
            loop = rec.data["loop"]
            lidx = res2.circle_index_of_edge(loop)
            corr = _match_circles_by_edges(res1, res2, {})
            for labels_gen in _gens_at(c1, bits):
                labels = labels_gen[1]
                tlabels = _place_labels(res2, corr, labels, {lidx: V_PLUS})
                cm.add_entry(labels_gen, (bits, tlabels), ring.one)
        elif kind == "death":
            loop = rec.data["loop"]
            lidx = res1.circle_index_of_edge(loop)
            corr = _match_circles_by_edges(res1, res2, {lidx: -1})
            corr.pop(lidx)
            for gen in _gens_at(c1, bits):
                labels = gen[1]
                coeff = counit(labels[lidx])
                if not coeff:
                    continue
                tlabels = _place_labels(res2, corr, labels, {})
                cm.add_entry(gen, (bits, tlabels), ring.from_int(coeff))
        else:
            e1, e2 = rec.data["feet"]
            i1 = res1.circle_index_of_edge(e1)
            i2 = res1.circle_index_of_edge(e2)
            if i1 != i2:
                # merge
                target = _saddle_merge_target(rec, res2)
                corr = _match_circles_by_edges(res1, res2, {i1: target, i2: target})
                for gen in _gens_at(c1, bits):
                    labels = gen[1]
                    for lab, coeff in merge_products(labels[i1], labels[i2], t):
                        tlabels = _place_labels(res2, corr, labels, {target: lab})
                        cm.add_entry(gen, (bits, tlabels), ring.from_int(coeff))
            else:
                ta, tb = _saddle_split_targets(rec, res2)
                corr = _match_circles_by_edges(res1, res2, {i1: ta})
                for gen in _gens_at(c1, bits):
                    labels = gen[1]
                    for (la, lb), coeff in split_products(labels[i1], t):
                        tlabels = _place_labels(
                            res2, corr, labels, {ta: la, tb: lb}
                        )
                        cm.add_entry(gen, (bits, tlabels), ring.from_int(coeff))
    cm.verify()
    return cm


def _gens_at(c: ChainComplex, bits):
    k = c.resolutions[bits].circle_count
    import itertools

    for labels in itertools.product((V_PLUS, V_MINUS), repeat=k):
        yield (bits, labels)


def _saddle_merge_target(rec: MoveRecord, res2) -> int:
    data = rec.data
    if "new_loop" in data:
        return res2.circle_index_of_edge(data["new_loop"])
    if "absorbed" in data:
        return res2.circle_index_of_edge(data["feet"][0])
    return res2.circle_index_of_edge(data["feet"][0])


def _saddle_split_targets(rec: MoveRecord, res2):
    data = rec.data
    if "new_loop" in data:
        return (
            res2.circle_index_of_edge(data["kept"] if "kept" in data else data["feet"][0]),
            res2.circle_index_of_edge(data["new_loop"]),
        )
    e1, e2 = data["feet"]
    return res2.circle_index_of_edge(e1), res2.circle_index_of_edge(e2)


def _twist_sign(bits, above: int) -> int:
    """Parity correction for inserting or toggling a 1-bit at ``above``."""
    return -1 if sum(bits[above + 1 :]) % 2 else 1


def _apply_x(label: int, t: int):
    """Multiplication by the degree -2 generator: v+ -> v-, v- -> t v+."""
    if label == V_PLUS:
        return [(V_MINUS, 1)]
    return [(V_PLUS, t)] if t else []


def r1_chain_map(
    rec_data: dict, c_small: ChainComplex, c_big: ChainComplex, cross_embed
) -> ChainMap:
    """Forward map of a curl addition, built against the big complex as-is.

    cross_embed maps each small crossing index to its big index; the curl
    crossing sits at rec_data["crossing"] in the big diagram.
    """
    hand = rec_data["hand"]
    cstar = rec_data["crossing"]
    f1 = rec_data["loop_edge"]
    a_small, a_big = rec_data["anchor"]
    t = c_small.t
    ring = c_small.ring
    nbig = c_big.diagram.crossing_count
    cm = ChainMap(c_small, c_big)
    for bits, res1 in c_small.resolutions.items():
        host = res1.circle_index_of_edge(a_small)
        tbits = _embed_bits(bits, cross_embed, nbig, {cstar: 0 if hand == "left" else 1})
        res2 = c_big.resolutions[tbits]
        lidx = res2.circle_index_of_edge(f1)
        midx = res2.circle_index_of_edge(a_big)
        corr = _match_circles_by_edges(res1, res2, {host: midx})
        sign = 1 if hand == "left" else _twist_sign(tbits, cstar)
        for gen in _gens_at(c_small, bits):
            labels = gen[1]
            if hand == "right":
                tlabels = _place_labels(res2, corr, labels, {lidx: V_PLUS})
                cm.add_entry(gen, (tbits, tlabels), ring.from_int(sign))
                continue
            # left curl: split at the marked point minus twice the genus term
            for (la, lb), coeff in split_products(labels[host], t):
                tlabels = _place_labels(res2, corr, labels, {midx: la, lidx: lb})
                cm.add_entry(gen, (tbits, tlabels), ring.from_int(sign * coeff))
            for lx, coeff in _apply_x(labels[host], t):
                tlabels = _place_labels(res2, corr, labels, {midx: lx, lidx: V_PLUS})
                cm.add_entry(gen, (tbits, tlabels), ring.from_int(-2 * sign * coeff))
    cm.verify()
    return cm


def _embed_bits(bits, cross_embed, nbig, extra: dict[int, int]):
    out = [None] * nbig
    for small_idx, big_idx in cross_embed.items():
        out[big_idx] = bits[small_idx]
    for pos, b in extra.items():
        out[pos] = b
    if any(x is None for x in out):
        raise InternalInvariantError("crossing embedding left a gap")
    return tuple(out)


def r2_chain_map(
    rec_data: dict, c_small: ChainComplex, c_big: ChainComplex, cross_embed
) -> ChainMap:
    """Forward map of a poke: inclusion into the parallel part plus the
    contraction correction through the circle part."""
    k1 = rec_data["k1"]
    k2 = rec_data["k2"]
    m1 = rec_data["m1"]
    m2 = rec_data["m2"]
    anchors: dict[int, int] = rec_data["anchors"]
    ring = c_small.ring
    nbig = c_big.diagram.crossing_count
    # parallel part: k1 -> 0, k2 -> 1 (k1 is the crossing whose 1-smoothing
    # joins the middle edges, per detect_r2_pattern)
    incl = ChainMap(c_small, c_big)
    for bits, res1 in c_small.resolutions.items():
        tbits = _embed_bits(bits, cross_embed, nbig, {k1: 0, k2: 1})
        res2 = c_big.resolutions[tbits]
        overrides = {}
        for small_edge, big_edge in anchors.items():
            src_idx = res1.circle_index_of_edge(small_edge)
            overrides[src_idx] = res2.circle_index_of_edge(big_edge)
        corr = _match_circles_by_edges(res1, res2, overrides)
        sign = _twist_sign(tbits, k2)
        for gen in _gens_at(c_small, bits):
            tlabels = _place_labels(res2, corr, gen[1], {})
            incl.add_entry(gen, (tbits, tlabels), ring.from_int(sign))
    alpha = _r2_alpha(incl, c_big, k1, k2, m1, m2)
    for s in (1, -1):
        candidate = incl.plus(alpha.scaled(s))
        try:
            candidate.verify()
            return candidate
        except InternalInvariantError:
            continue
    raise InternalInvariantError("no sign makes the poke map a chain map")


def _spectator_parity_sign(bits, pattern_positions) -> int:
    """Cube-edge components at distinct positions anticommute, so the
    correction term carries the parity of all 1-bits away from the pattern."""
    parity = sum(b for u, b in enumerate(bits) if u not in pattern_positions) % 2
    return -1 if parity else 1


def _r2_alpha(incl: ChainMap, c_big: ChainComplex, k1, k2, m1, m2) -> ChainMap:
    """(identify with the circle part) after (cube edge at k1), applied to
    the image of the parallel inclusion."""
    out = ChainMap(incl.src, incl.dst)
    for i, m in incl.mats.items():
        for (row, col), v in m.data.items():
            gen_small = incl.src.bases[i][col]
            gen_big = incl.dst.bases[i][row]
            tau = _spectator_parity_sign(gen_big[0], {k1, k2})
            mid = edge_map_on_chain(c_big, {gen_big: v}, k1)
            for gmid, coeff in mid.items():
                target, tcoeff = _identify_with_circle_part(
                    c_big, gmid, k2, m1, m2
                )
                out.add_entry(
                    gen_small, target, coeff * tcoeff * c_big.ring.from_int(tau)
                )
    return out


def _identify_with_circle_part(c_big: ChainComplex, gen: Gen, k2, m1, m2):
    """Send a generator at the k2 = 1 position to the k2 = 0 position whose
    diagram is the same plus the small middle circle (born with v+)."""
    bits, labels = gen
    if bits[k2] != 1:
        raise InternalInvariantError("identification expects the folded position")
    tbits = bits[:k2] + (0,) + bits[k2 + 1 :]
    res_mid = c_big.resolutions[bits]
    res_circ = c_big.resolutions[tbits]
    m_set = {m1, m2}
    circle_idx = None
    for i, circ in enumerate(res_circ.circles):
        if circ.edge_set() <= m_set:
            circle_idx = i
            break
    if circle_idx is None:
        raise InternalInvariantError("circle part has no middle circle")
    corr = {}
    for i, circ in enumerate(res_mid.circles):
        keys = circ.edge_set() - m_set
        tgt = None
        for j, tcirc in enumerate(res_circ.circles):
            if j != circle_idx and keys & tcirc.edge_set():
                tgt = j
                break
        if tgt is None:
            raise InternalInvariantError("middle identification failed")
        corr[i] = tgt
    tlabels = _place_labels(res_circ, corr, labels, {circle_idx: V_PLUS})
    sign = _twist_sign(bits, k2)
    return (tbits, tlabels), c_big.ring.from_int(sign)


# ---------------------------------------------------------------------------
# movies
# ---------------------------------------------------------------------------


@dataclass
class Movie:
    """An initial diagram and a sequence of moves, with derived frames."""

    initial: PlanarDiagram
    moves: list[Move]
    frames: list[PlanarDiagram] = field(default_factory=list)
    records: list[MoveRecord] = field(default_factory=list)

    def __post_init__(self):
        self.frames = [self.initial]
        self.records = []
        for idx, mv in enumerate(self.moves):
            try:
                nxt, rec = apply_move(self.frames[-1], mv)
            except IllegalMoveError as exc:
                raise IllegalMoveError(f"move {idx} ({mv.kind}): {exc}") from exc
            self.frames.append(nxt)
            self.records.append(rec)

    @staticmethod
    def from_json(text: str) -> "Movie":
        obj = json.loads(text)
        init = obj.get("initial", "empty")
        if init == "empty":
            d = PlanarDiagram()
        else:
            d = parse_pd(init)
        moves = [move_from_json(m) for m in obj.get("moves", [])]
        return Movie(d, moves)

    def to_json(self) -> dict:
        init = "empty" if self.initial.is_empty() else render_pd(self.initial)
        return {"initial": init, "moves": [move_to_json(m) for m in self.moves]}

    @property
    def euler_characteristic(self) -> int:
        chi = 0
        for rec in self.records:
            if rec.kind in ("birth", "death"):
                chi += 1
            elif rec.kind.startswith("saddle"):
                chi -= 1
        return chi

    @property
    def is_closed(self) -> bool:
        return self.frames[0].is_empty() and self.frames[-1].is_empty()

    # -- surface components -------------------------------------------------

    def _component_links(self, k: int) -> list[tuple[int, int]]:
        """(old component, new component) adjacencies across move k."""
        d1, d2 = self.frames[k], self.frames[k + 1]
        rec = self.records[k]
        links = []
        anchors = dict(rec.data.get("anchors", ()))
        if "anchor" in rec.data:
            a, b = rec.data["anchor"]
            anchors[a] = b
        for nc, new_comp in enumerate(d2.components):
            news = set(new_comp)
            for oc, old_comp in enumerate(d1.components):
                olds = set(old_comp)
                shared = olds & news
                linked = bool(shared)
                if not linked:
                    for a, b in anchors.items():
                        if a in olds and b in news:
                            linked = True
                            break
                if linked:
                    links.append((oc, nc))
        if rec.kind == "saddle_merge":
            e1, e2 = rec.data["feet"]
            target = rec.data.get("new_loop", e1)
            nc = d2.component_map[target if target in d2.component_map else e1]
            for e in rec.data["feet"]:
                links.append((d1.component_map[e], nc))
        elif rec.kind == "saddle_split" and "new_loop" in rec.data:
            e1 = rec.data["feet"][0]
            links.append(
                (d1.component_map[e1], d2.component_map[rec.data["new_loop"]])
            )
        elif rec.kind == "saddle_reconnect":
            e1, e2 = rec.data["feet"]
            for e_old in (e1, e2):
                for e_new in (e1, e2):
                    links.append((d1.component_map[e_old], d2.component_map[e_new]))
        return sorted(set(links))

    def surface_components(self):
        """Union-find classes of (frame, component) nodes; a class not
        meeting either boundary frame is a closed component."""
        parent: dict = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for k, frame in enumerate(self.frames):
            for ci in range(frame.component_count):
                find((k, ci))
        for k in range(len(self.records)):
            for oc, nc in self._component_links(k):
                union((k, oc), (k + 1, nc))
        classes: dict = {}
        for k, frame in enumerate(self.frames):
            for ci in range(frame.component_count):
                classes.setdefault(find((k, ci)), set()).add((k, ci))
        return list(classes.values())

    def has_closed_component(self) -> bool:
        last = len(self.frames) - 1
        for cls in self.surface_components():
            if not any(k in (0, last) for k, _ in cls):
                return True
        return False

    def is_connected_surface(self) -> bool:
        return len(self.surface_components()) <= 1


def _direction_flip(d1: PlanarDiagram, d2: PlanarDiagram, rec: MoveRecord, e: int):
    """Whether edge e's reference direction flips across the move; None when
    undecidable from this edge."""
    if e in d1.loops or e in d2.loops:
        return False if (e in d1.loops) == (e in d2.loops) else None
    cmap = rec.crossing_map

    def mapped(dart):
        c, s = dart
        if c not in cmap:
            return None
        return (cmap[c], s)

    t1, h1 = mapped(d1.edge_tail[e]), mapped(d1.edge_head[e])
    t2, h2 = d2.edge_tail[e], d2.edge_head[e]
    same = (t1 is not None and t1 == t2) or (h1 is not None and h1 == h2)
    flip = (t1 is not None and t1 == h2) or (h1 is not None and h1 == t2)
    if same and not flip:
        return False
    if flip and not same:
        return True
    return None


def _oriented_circle_color(d: PlanarDiagram, o, edge: int) -> int:
    """Color left of the oriented-resolution circle through ``edge``, along
    the direction the orientation induces on it."""
    from .diagram import oriented_resolution as _ores

    res = resolve(d, _ores(d, o))
    i = res.circle_index_of_edge(edge)
    along = res.traversal_matches_orientation(i, o)
    return res.left_color_along(i, along)


def propagate_orientation(
    d1: PlanarDiagram, d2: PlanarDiagram, rec: MoveRecord, o: tuple[bool, ...]
) -> list[tuple[bool, ...]]:
    """Orientations on d2 induced by o across the move; empty when the move
    is not orientation-compatible, two entries after a birth."""
    if rec.kind in ("saddle_merge", "saddle_split", "saddle_reconnect"):
        e1, e2 = rec.data["feet"]
        res = resolve(d1, _oriented_bits(d1, o))
        i1 = res.circle_index_of_edge(e1)
        i2 = res.circle_index_of_edge(e2)
        if i1 != i2:
            # a merge of two circles survives only when their labels agree,
            # i.e. when their left colors coincide
            col1 = res.left_color_along(i1, res.traversal_matches_orientation(i1, o))
            col2 = res.left_color_along(i2, res.traversal_matches_orientation(i2, o))
            if col1 != col2:
                return []
    anchors = dict(rec.data.get("anchors", ()))
    if "anchor" in rec.data:
        a, b = rec.data["anchor"]
        anchors[a] = b
    out: list[bool | None] = []
    branch_at = None
    for nc, new_comp in enumerate(d2.components):
        news = set(new_comp)
        val = None
        # prefer a shared edge whose direction is comparable
        for oc, old_comp in enumerate(d1.components):
            shared = sorted(set(old_comp) & news)
            for e in shared:
                flip = _direction_flip(d1, d2, rec, e)
                if flip is not None:
                    val = o[oc] != flip
                    break
            if val is not None:
                break
        if val is None:
            flip_set = set(rec.data.get("flip_components", ()))
            for a, b in anchors.items():
                if b in news and a in d1.component_map:
                    val = o[d1.component_map[a]]
                    if a in flip_set or b in flip_set:
                        val = not val
                    break
        if val is None:
            # shared edges exist but none has a comparable direction (all
            # their ends moved): strands keep their courses, so keep the bool
            for oc, old_comp in enumerate(d1.components):
                if set(old_comp) & news:
                    val = o[oc]
                    break
        if val is None and rec.kind == "birth" and rec.data["loop"] in news:
            branch_at = nc
        if val is None and rec.kind in ("saddle_merge", "saddle_split"):
            # a fresh loop carries its circle's color across the saddle: the
            # canonical label is preserved by merges and squared by splits,
            # and for a free loop color 1 means the reference sense
            e1 = rec.data["feet"][0]
            val = _oriented_circle_color(d1, o, e1) == 1
        out.append(val)
    if branch_at is None and any(v is None for v in out):
        raise InternalInvariantError("orientation transport left a component")
    if branch_at is not None:
        res = []
        for b in (True, False):
            cand = list(out)
            cand[branch_at] = b
            if any(v is None for v in cand):
                raise InternalInvariantError("orientation transport incomplete")
            res.append(tuple(cand))
        return res
    return [tuple(out)]


def compatible_orientations(movie: Movie, o_in) -> set[tuple[bool, ...]]:
    """All orientations of the final frame compatible with o_in through the
    movie's cobordism."""
    states = {tuple(o_in)}
    for k in range(len(movie.records)):
        nxt: set = set()
        for o in states:
            for o2 in propagate_orientation(
                movie.frames[k], movie.frames[k + 1], movie.records[k], o
            ):
                nxt.add(o2)
        states = nxt
    return states


# ---------------------------------------------------------------------------
# homology-level steps and composition
# ---------------------------------------------------------------------------


def _change_twist(bits, changes: dict[int, int]) -> int:
    """Sign making a bit-substitution commute with the other cube edges.

    For each changed position x with old bit != new bit, every 1-bit above x
    contributes a flip.
    """
    parity = 0
    for x, new in changes.items():
        if bits[x] != new:
            for u, b in enumerate(bits):
                if u > x and u not in changes and b:
                    parity ^= 1
    return -1 if parity else 1


def _invert_degree_matrices(mats: dict[int, SparseMatrix]) -> dict[int, SparseMatrix]:
    out = {}
    for i, m in mats.items():
        if m.rows != m.cols:
            raise InternalInvariantError(
                f"induced map at degree {i} is not square ({m.rows}x{m.cols})"
            )
        inv = SparseMatrix(m.cols, m.rows, m.ring)
        for col in range(m.rows):
            target = {col: m.ring.one}
            sol = solve_in_image(m, target)
            if sol is None:
                raise InternalInvariantError(
                    f"induced map at degree {i} is not invertible"
                )
            for r, v in sol.items():
                inv.set(r, col, v)
        out[i] = inv
    return out


class StepMap:
    """Homology-level map of one move: matrices keyed by source degree,
    mapping into degree i + shift of the target."""

    def __init__(self, fh_src: FieldHomology, fh_dst: FieldHomology, mats, shift: int = 0):
        self.fh_src = fh_src
        self.fh_dst = fh_dst
        self.mats = mats  # dict source degree -> SparseMatrix
        self.shift = shift

    @staticmethod
    def from_chain_map(cm: ChainMap, fh_src, fh_dst) -> "StepMap":
        mats = {}
        for i in sorted(fh_src.reps):
            src_rank = fh_src.rank(i)
            dst_rank = fh_dst.rank(i + cm.shift)
            m = SparseMatrix(dst_rank, src_rank, cm.src.ring)
            for col, rep in enumerate(fh_src.reps[i]):
                img = cm.mats[i].apply(rep) if i in cm.mats else {}
                if img:
                    coords = fh_dst.reduce(i + cm.shift, img)
                    for r, v in coords.items():
                        m.set(r, col, v)
            mats[i] = m
        return StepMap(fh_src, fh_dst, mats, cm.shift)

    def inverse(self) -> "StepMap":
        inverted = _invert_degree_matrices(self.mats)
        mats = {i + self.shift: m for i, m in inverted.items()}
        return StepMap(self.fh_dst, self.fh_src, mats, -self.shift)

    def compose_after(self, earlier: "StepMap") -> "StepMap":
        mats = {}
        for i, m in earlier.mats.items():
            j = i + earlier.shift
            if j in self.mats:
                mats[i] = self.mats[j] * m
            else:
                mats[i] = SparseMatrix(0, m.cols, m.ring)
        return StepMap(
            earlier.fh_src, self.fh_dst, mats, earlier.shift + self.shift
        )

    def apply_class(self, i: int, coords: dict) -> dict:
        if i not in self.mats:
            return {}
        return self.mats[i].apply(coords)


# -- R3 transport ---------------------------------------------------------------


class _R3Transport:
    """Homology map of a slide move, by rewriting representatives.

    Cycles supported where the middle crossing keeps the triangle open are
    carried across the resolution identification; the rest is rewritten,
    modulo boundaries, into the standard section of the folded part (the
    poke contraction) and carried across the matching identification.
    """

    def __init__(self, rec: MoveRecord, c1: ChainComplex, c2: ChainComplex):
        self.c1 = c1
        self.c2 = c2
        self.rec = rec
        data = rec.data
        self.p, self.q, self.r = data["p"], data["q"], data["r"]
        self.sides1 = (data["t"], data["m"], data["b"])
        self.sides2 = (data["t2"], data["m2"], data["b2"])
        self.sigma1 = self._open_bit(c1.diagram, *self.sides1)
        self.sigma2 = self._open_bit(c2.diagram, *self.sides2)
        self.beta1 = self._glue_bits(c1.diagram, *self.sides1)
        self.beta2 = self._glue_bits(c2.diagram, *self.sides2)

    def _slot(self, d, e, c):
        (s,) = [s for (cc, s) in d.occurrences[e] if cc == c]
        return s

    def _open_bit(self, d, t, m, b):
        """Bit of the middle crossing that does not glue the two triangle
        sides to each other."""
        from .diagram import smoothing_partner

        sm, sb = self._slot(d, m, self.r), self._slot(d, b, self.r)
        closed = 0 if smoothing_partner(sm, 0) == sb else 1
        return 1 - closed

    def _glue_bits(self, d, t, m, b):
        """(beta_p, beta_q): bits gluing t to the other side at p and q."""
        from .diagram import smoothing_partner

        st_p, sm_p = self._slot(d, t, self.p), self._slot(d, m, self.p)
        st_q, sb_q = self._slot(d, t, self.q), self._slot(d, b, self.q)
        bp = 0 if smoothing_partner(st_p, 0) == sm_p else 1
        bq = 0 if smoothing_partner(st_q, 0) == sb_q else 1
        return bp, bq

    # -- identifications ---------------------------------------------------

    def _transport_gen(self, gen: Gen, tbits_pattern: dict[int, int]):
        """Carry one generator across a diagram identification given the new
        bits at p, q, r; labels follow circles matched by shared edges away
        from the triangle sides."""
        bits, labels = gen
        tbits = list(bits)
        for pos, b in tbits_pattern.items():
            tbits[pos] = b
        tbits = tuple(tbits)
        res1 = self.c1.resolutions[bits]
        res2 = self.c2.resolutions[tbits]
        local1, local2 = set(self.sides1), set(self.sides2)
        corr = {}
        for i, circ in enumerate(res1.circles):
            keys = circ.edge_set() - local1
            tgt = None
            for j, tcirc in enumerate(res2.circles):
                if keys & tcirc.edge_set():
                    tgt = j
                    break
            if tgt is None:
                raise InternalInvariantError("slide transport lost a circle")
            corr[i] = tgt
        tlabels = _place_labels(res2, corr, labels, {})
        return (tbits, tlabels)

    def _sigma_image(self, gen: Gen):
        bits, _ = gen
        changes = {
            self.p: bits[self.q],
            self.q: bits[self.p],
            self.r: self.sigma2,
        }
        sign = _change_twist(bits, changes)
        return self._transport_gen(gen, changes), sign

    def _x_pattern(self, which: int):
        """(p, q, r) bits of the straight section of the folded part."""
        beta = self.beta1 if which == 1 else self.beta2
        sigma = self.sigma1 if which == 1 else self.sigma2
        return {self.p: 1 - beta[0], self.q: 1 - beta[1], self.r: 1 - sigma}

    def _alpha(self, complex_: ChainComplex, chain: dict, which: int) -> dict:
        """Contraction correction inside the folded part of one diagram."""
        sides = self.sides1 if which == 1 else self.sides2
        xpat = self._x_pattern(which)
        flip_candidates = [
            pos for pos, bit in ((self.p, xpat[self.p]), (self.q, xpat[self.q]))
            if bit == 0
        ]
        ring = complex_.ring
        for flip in flip_candidates:
            other = self.q if flip == self.p else self.p
            try:
                out: dict = {}
                for gen, coeff in chain.items():
                    tau = _spectator_parity_sign(gen[0], {self.p, self.q})
                    mid = edge_map_on_chain(complex_, {gen: coeff}, flip)
                    for gmid, c in mid.items():
                        tgt, tc = _identify_with_local_circle(
                            complex_, gmid, other, set(sides)
                        )
                        v = out.get(tgt, ring.zero) + c * tc * ring.from_int(tau)
                        if ring.is_zero(v):
                            out.pop(tgt, None)
                        else:
                            out[tgt] = v
                return out
            except InternalInvariantError:
                continue
        raise InternalInvariantError("slide fold admits no contraction corner")

    def class_map(self, fh1: FieldHomology, fh2: FieldHomology):
        mats = {}
        for i in sorted(fh1.reps):
            src = fh1.reps[i]
            m = SparseMatrix(fh2.rank(i), len(src), self.c1.ring)
            for col, rep in enumerate(src):
                chain = self.c1.vec_to_chain(i, rep)
                image = self._map_cycle(chain, i)
                if image:
                    _, vec = self.c2.chain_to_vec(image)
                    coords = fh2.reduce(i, vec)
                    for r, v in coords.items():
                        m.set(r, col, v)
            mats[i] = m
        return mats

    def _map_cycle(self, chain: dict, i: int) -> dict:
        ring = self.c1.ring
        # decompose: chain + d(w) = v_sigma + y + alpha(y)
        sigma_gens = [
            g for g in self.c1.bases[i] if g[0][self.r] == self.sigma1
        ]
        xpat = self._x_pattern(1)
        x_gens = [
            g
            for g in self.c1.bases[i]
            if all(g[0][pos] == b for pos, b in xpat.items())
        ]
        cols: list[dict] = []
        col_meta: list[tuple[str, object]] = []
        if i - 1 in self.c1.bases:
            d_prev = self.c1.diff[i - 1]
            for j in range(self.c1.dim(i - 1)):
                col = d_prev.column(j)
                if col:
                    cols.append(col)
                    col_meta.append(("d", j))
        for g in x_gens:
            vec = {self.c1.index[g][1]: ring.one}
            alpha = self._alpha(self.c1, {g: ring.one}, 1)
            for tg, c in alpha.items():
                pos = self.c1.index[tg][1]
                vec[pos] = vec.get(pos, ring.zero) + c
            cols.append({k: v for k, v in vec.items() if not ring.is_zero(v)})
            col_meta.append(("x", g))
        for g in sigma_gens:
            cols.append({self.c1.index[g][1]: ring.one})
            col_meta.append(("s", g))
        m = SparseMatrix(self.c1.dim(i), len(cols), ring)
        for j, col in enumerate(cols):
            for r, v in col.items():
                m.set(r, j, v)
        _, target = self.c1.chain_to_vec(chain)
        sol = solve_in_image(m, target)
        if sol is None:
            raise InternalInvariantError(
                "slide transport: no representative in the standard section"
            )
        image: dict = {}
        y_chain: dict = {}
        for j, coeff in sol.items():
            kind, meta = col_meta[j]
            if kind == "d" or ring.is_zero(coeff):
                continue
            if kind == "s":
                tgt, sign = self._sigma_image(meta)
                image[tgt] = image.get(tgt, ring.zero) + coeff * ring.from_int(sign)
            else:
                y_chain[meta] = y_chain.get(meta, ring.zero) + coeff
        if y_chain:
            moved = self._transport_x(y_chain)
            for tg, c in moved.items():
                image[tg] = image.get(tg, ring.zero) + c
            alpha2 = self._alpha(self.c2, moved, 2)
            for tg, c in alpha2.items():
                image[tg] = image.get(tg, ring.zero) + c
        image = {g: v for g, v in image.items() if not ring.is_zero(v)}
        # the transported representative must again be a cycle
        if self.c2.apply_differential(image):
            raise InternalInvariantError("slide transport broke the cycle")
        return image

    def _transport_x(self, y_chain: dict) -> dict:
        xpat2 = self._x_pattern(2)
        out: dict = {}
        ring = self.c1.ring
        for g, coeff in y_chain.items():
            changes = dict(xpat2)
            sign = _change_twist(g[0], changes)
            tgt = self._transport_gen(g, changes)
            out[tgt] = out.get(tgt, ring.zero) + coeff * ring.from_int(sign)
        return out


def _identify_with_local_circle(complex_: ChainComplex, gen: Gen, other_pos, local_edges):
    """Identify the folded position with (unfolded position) + small circle
    made of local edges; the circle is born with v+."""
    bits, labels = gen
    if bits[other_pos] == 0:
        raise InternalInvariantError("identification expects the folded position")
    tbits = bits[:other_pos] + (0,) + bits[other_pos + 1 :]
    res_mid = complex_.resolutions[bits]
    res_circ = complex_.resolutions[tbits]
    circle_idx = None
    for i, circ in enumerate(res_circ.circles):
        if circ.edge_set() <= local_edges:
            circle_idx = i
            break
    if circle_idx is None:
        raise InternalInvariantError("no local circle at the folded position")
    corr = {}
    for i, circ in enumerate(res_mid.circles):
        keys = circ.edge_set() - local_edges
        tgt = None
        for j, tcirc in enumerate(res_circ.circles):
            if j != circle_idx and keys & tcirc.edge_set():
                tgt = j
                break
        if tgt is None:
            raise InternalInvariantError("local identification failed")
        corr[i] = tgt
    tlabels = _place_labels(res_circ, corr, labels, {circle_idx: V_PLUS})
    sign = _change_twist(bits, {other_pos: 0})
    return (tbits, tlabels), complex_.ring.from_int(sign)


# ---------------------------------------------------------------------------
# the full movie pipeline
# ---------------------------------------------------------------------------


class MovieMaps:
    """Per-frame complexes and the induced maps of every move, at one t."""

    def __init__(self, movie: Movie, t: int, ring: Ring | None = None):
        self.movie = movie
        self.t = t
        self.ring = ring or (QSQRT2 if t == 1 else QQ)
        self.complexes = [
            build_complex(f, t, self.ring, validate=False) for f in movie.frames
        ]
        self.homologies = [FieldHomology(c) for c in self.complexes]
        self.chain_steps: list[ChainMap | None] = []
        self.steps: list[StepMap] = []
        for k, rec in enumerate(movie.records):
            cm, step = self._build_step(k, rec)
            self.chain_steps.append(cm)
            self.steps.append(step)

    def _build_step(self, k: int, rec: MoveRecord):
        c1, c2 = self.complexes[k], self.complexes[k + 1]
        fh1, fh2 = self.homologies[k], self.homologies[k + 1]
        kind = rec.kind
        if kind in ("birth", "death") or kind.startswith("saddle"):
            cm = morse_chain_map(rec, c1, c2)
            return cm, StepMap.from_chain_map(cm, fh1, fh2)
        if kind == "r1_add":
            embed = {old: new for old, new in rec.crossing_map.items()}
            cm = r1_chain_map(rec.data, c1, c2, embed)
            return cm, StepMap.from_chain_map(cm, fh1, fh2)
        if kind == "r2_add":
            embed = {old: new for old, new in rec.crossing_map.items()}
            cm = r2_chain_map(rec.data, c1, c2, embed)
            return cm, StepMap.from_chain_map(cm, fh1, fh2)
        if kind == "r1_remove":
            embed = {new: old for old, new in rec.crossing_map.items()}
            forward = r1_chain_map(rec.data, c2, c1, embed)
            fwd = StepMap.from_chain_map(forward, fh2, fh1)
            return None, fwd.inverse()
        if kind == "r2_remove":
            embed = {new: old for old, new in rec.crossing_map.items()}
            forward = r2_chain_map(rec.data, c2, c1, embed)
            fwd = StepMap.from_chain_map(forward, fh2, fh1)
            return None, fwd.inverse()
        if kind == "r3":
            transport = _R3Transport(rec, c1, c2)
            mats = transport.class_map(fh1, fh2)
            step = StepMap(fh1, fh2, mats, 0)
            _invert_degree_matrices(mats)  # must be an isomorphism
            return None, step
        raise InternalInvariantError(f"unknown record kind {kind}")

    # -- composites ----------------------------------------------------------

    def composite_step(self) -> StepMap:
        if not self.steps:
            fh = self.homologies[0]
            mats = {
                i: SparseMatrix.identity(fh.rank(i), self.ring)
                for i in sorted(fh.reps)
            }
            return StepMap(fh, fh, mats, 0)
        total = self.steps[0]
        for step in self.steps[1:]:
            total = step.compose_after(total)
        return total

    def chain_composite(self) -> ChainMap | None:
        if any(cm is None for cm in self.chain_steps):
            return None
        if not self.chain_steps:
            return None
        total = self.chain_steps[0]
        for cm in self.chain_steps[1:]:
            total = cm.compose(total)
        return total

    def apply_to_chain(self, chain: dict):
        """Push a chain through the whole movie; chain-level when possible,
        otherwise class coordinates in the final frame's homology."""
        cm = self.chain_composite()
        if cm is not None:
            return "chain", cm.apply_chain(chain)
        if not chain:
            return "class", (0, {})
        i, vec = self.complexes[0].chain_to_vec(chain)
        coords = self.homologies[0].reduce(i, vec)
        total = self.composite_step()
        return "class", (i, total.apply_class(i, coords))


def kj_number(movie: Movie) -> int:
    """|image of the generator| for a closed movie at t = 0."""
    if not movie.is_closed:
        raise IllegalMoveError("the movie is not closed (empty to empty)")
    maps = MovieMaps(movie, t=0, ring=QQ)
    total = maps.composite_step()
    m = total.mats.get(0)
    if m is None or m.rows != 1 or m.cols != 1:
        raise InternalInvariantError("empty-diagram homology is not rank one")
    val = m.get(0, 0)
    frac = Fraction(val)
    if frac.denominator != 1:
        raise InternalInvariantError(f"induced map is not integral: {frac}")
    return abs(frac.numerator)


def induced_map(movie: Movie, t: int, ring: Ring | None = None) -> MovieMaps:
    """All per-move induced maps and their composite for one theory."""
    return MovieMaps(movie, t, ring)


# ---------------------------------------------------------------------------
# coloring convention tracking
# ---------------------------------------------------------------------------


def _left_color_at(d: PlanarDiagram, o, edge: int) -> int | None:
    """Checkerboard color to the left of ``edge`` along its induced
    direction in the oriented resolution; None for free loops."""
    if edge in d.loops:
        return None
    from .diagram import oriented_resolution as _ores

    res = resolve(d, _ores(d, o))
    i = res.circle_index_of_edge(edge)
    along = res.traversal_matches_orientation(i, o)
    return res.left_color_along(i, along)


def coloring_flip(d1: PlanarDiagram, d2: PlanarDiagram, rec: MoveRecord) -> bool:
    """Whether the outer-face convention flips across a move.

    The checkerboard color to the left of a strand is preserved by every
    elementary map on the compatible canonical labels, so comparing it on a
    surviving edge detects a change of declared outer face; such a change
    swaps every label of every canonical generator. Moves with no surviving
    comparable edge keep the convention by definition (their transported
    orientations are pinned directly instead).
    """
    shared = sorted(set(d1.crossing_edges) & set(d2.crossing_edges))
    if not shared:
        return False
    for o1 in _some_orientations(d1):
        outs = propagate_orientation(d1, d2, rec, o1)
        if not outs:
            continue
        o2 = outs[0]
        for e in shared:
            if _direction_flip(d1, d2, rec, e) is None:
                continue
            c1 = _left_color_at(d1, o1, e)
            c2 = _left_color_at(d2, o2, e)
            if c1 is None or c2 is None:
                continue
            return c1 != c2
    return False


def _some_orientations(d: PlanarDiagram):
    from .diagram import all_orientations

    return all_orientations(d)


def movie_convention_flips(movie: Movie) -> list[bool]:
    """Per-move outer-face convention flips along the movie."""
    return [
        coloring_flip(movie.frames[k], movie.frames[k + 1], movie.records[k])
        for k in range(len(movie.records))
    ]


def movie_total_flip(movie: Movie) -> bool:
    total = False
    for f in movie_convention_flips(movie):
        total ^= f
    return total


def effective_orientation(o, flip: bool):
    """The orientation whose canonical generator matches across a
    convention flip: the total reversal when flipped."""
    return tuple(not b for b in o) if flip else tuple(o)
