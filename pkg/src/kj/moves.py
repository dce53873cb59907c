"""Elementary movie moves: birth, death, saddle, and Reidemeister rewrites.

``apply_move`` rewrites a PD code and returns the new diagram together with
a MoveRecord describing exactly which edges and crossings were touched; the
induced-map builders consume the record rather than re-deriving locations.
Fresh edges always take the lowest unused identifiers, in a fixed per-move
order, so frames are reproducible. New crossings append to the end of the
crossing list (this keeps the cube signs of untouched crossings stable).

Free loops live side by side in the unbounded region: a death or a saddle
foot on a loop is legal there, and a saddle or poke between a loop and a
crossing edge requires that edge to border the outer face.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Dart, PlanarDiagram, smoothing_partner
from .errors import IllegalMoveError, PDValidationError

__all__ = [
    "Birth",
    "Death",
    "Saddle",
    "R1Move",
    "R2Move",
    "R3Move",
    "Move",
    "MoveRecord",
    "apply_move",
    "move_from_json",
    "move_to_json",
    "detect_curl",
    "detect_r2_pattern",
    "find_triangle",
]


@dataclass(frozen=True)
class Birth:
    kind: str = field(default="birth", init=False)


@dataclass(frozen=True)
class Death:
    edge: int
    kind: str = field(default="death", init=False)


@dataclass(frozen=True)
class Saddle:
    edges: tuple[int, int]
    side: str = "left"  # which side of the first edge the band leaves from
    kind: str = field(default="saddle", init=False)


@dataclass(frozen=True)
class R1Move:
    action: str  # add | remove
    edge: int  # add: host edge or loop; remove: the curl's loop edge
    hand: str = "left"  # left = positive curl, right = negative curl
    kind: str = field(default="r1", init=False)


@dataclass(frozen=True)
class R2Move:
    action: str  # add | remove
    edges: tuple[int, int]  # add: the two strands; remove: the bigon edges
    over: bool = False  # add only: first strand passes over the second
    kind: str = field(default="r2", init=False)


@dataclass(frozen=True)
class R3Move:
    crossings: tuple[int, int, int]
    kind: str = field(default="r3", init=False)


Move = Birth | Death | Saddle | R1Move | R2Move | R3Move


def move_from_json(obj: dict) -> Move:
    t = obj.get("type")
    if t == "birth":
        return Birth()
    if t == "death":
        return Death(int(obj["edge"]))
    if t == "saddle":
        e1, e2 = obj["edges"]
        return Saddle((int(e1), int(e2)), obj.get("side", "left"))
    if t == "r1":
        return R1Move(obj["action"], int(obj["edge"]), obj.get("hand", "left"))
    if t == "r2":
        e1, e2 = obj["edges"]
        return R2Move(obj["action"], (int(e1), int(e2)), bool(obj.get("over", False)))
    if t == "r3":
        c1, c2, c3 = obj["crossings"]
        return R3Move((int(c1), int(c2), int(c3)))
    raise IllegalMoveError(f"unknown move type {t!r}")


def move_to_json(m: Move) -> dict:
    if isinstance(m, Birth):
        return {"type": "birth"}
    if isinstance(m, Death):
        return {"type": "death", "edge": m.edge}
    if isinstance(m, Saddle):
        return {"type": "saddle", "edges": list(m.edges), "side": m.side}
    if isinstance(m, R1Move):
        return {"type": "r1", "action": m.action, "edge": m.edge, "hand": m.hand}
    if isinstance(m, R2Move):
        out = {"type": "r2", "action": m.action, "edges": list(m.edges)}
        if m.action == "add":
            out["over"] = m.over
        return out
    if isinstance(m, R3Move):
        return {"type": "r3", "crossings": list(m.crossings)}
    raise IllegalMoveError(f"unknown move {m!r}")


@dataclass
class MoveRecord:
    """What a move actually did, for map builders and orientation tracking.

    kind: birth, death, saddle_merge, saddle_split, saddle_reconnect,
          r1_add, r1_remove, r2_add, r2_remove, r3.
    crossing_map: surviving old crossing index -> new index.
    data: per-kind location details (see the builders in movie.py).
    """

    kind: str
    crossing_map: dict[int, int] = field(default_factory=dict)
    data: dict = field(default_factory=dict)


# -- shared helpers -------------------------------------------------------------


def _replace_occurrence(crossings: list[list[int]], dart: Dart, new_edge: int):
    c, s = dart
    crossings[c][s] = new_edge


def _edge_side_face(d: PlanarDiagram, edge: int, side: str) -> int:
    """Face on the given side of a crossing edge (sides relative to the
    reference direction)."""
    c, s = d.edge_head[edge]
    if side == "left":
        return d.face_of_sector[(c, (s - 1) % 4)]
    return d.face_of_sector[(c, s)]


def _directed_occurrences(d: PlanarDiagram, edge: int, face: int):
    """(tail dart, head dart, along_reference) of ``edge`` directed with
    ``face`` on its left; None if the edge does not border the face."""
    tail, head = d.edge_tail[edge], d.edge_head[edge]
    c, s = head
    if d.face_of_sector[(c, (s - 1) % 4)] == face:
        return tail, head, True
    if d.face_of_sector[(c, s)] == face:
        return head, tail, False
    return None


def _outer_faces(d: PlanarDiagram) -> set[int]:
    """The designated outer face of each crossing component."""
    out = set()
    for comp in d.crossing_components:
        comp_set = set(comp)
        comp_edges = [
            e for e in d.crossing_edges if d.occurrences[e][0][0] in comp_set
        ]
        e0 = min(comp_edges)
        c, s = min(d.occurrences[e0])
        out.add(d.face_of_sector[(c, (s - 1) % 4)])
    return out


def _outer_directed(d: PlanarDiagram, edge: int):
    """Directed occurrence of ``edge`` with the outer region on its left."""
    outer = _outer_faces(d)
    for side in ("left", "right"):
        f = _edge_side_face(d, edge, side)
        if f in outer:
            return _directed_occurrences(d, edge, f)
    return None


def _is_loop(d: PlanarDiagram, e: int) -> bool:
    return e in d.loops


def _crossing_component_of_edge(d: PlanarDiagram, e: int) -> int:
    c = d.occurrences[e][0][0]
    for i, comp in enumerate(d.crossing_components):
        if c in comp:
            return i
    raise KeyError(e)


def _identity_map(d: PlanarDiagram) -> dict[int, int]:
    return {c: c for c in range(d.crossing_count)}


def apply_move(d: PlanarDiagram, move: Move) -> tuple[PlanarDiagram, MoveRecord]:
    """Apply one move, validating legality. Raises IllegalMoveError."""
    if isinstance(move, Birth):
        return _birth(d)
    if isinstance(move, Death):
        return _death(d, move)
    if isinstance(move, Saddle):
        return _saddle(d, move)
    if isinstance(move, R1Move):
        if move.action == "add":
            return _r1_add(d, move)
        if move.action == "remove":
            return _r1_remove(d, move)
        raise IllegalMoveError(f"unknown r1 action {move.action!r}")
    if isinstance(move, R2Move):
        if move.action == "add":
            return _r2_add(d, move)
        if move.action == "remove":
            return _r2_remove(d, move)
        raise IllegalMoveError(f"unknown r2 action {move.action!r}")
    if isinstance(move, R3Move):
        return _r3(d, move)
    raise IllegalMoveError(f"unknown move {move!r}")


# -- Morse moves ----------------------------------------------------------------


def _birth(d: PlanarDiagram):
    (loop,) = d.fresh_edges(1)
    d2 = PlanarDiagram(d.crossings, d.loops + (loop,))
    rec = MoveRecord("birth", _identity_map(d), {"loop": loop})
    return d2, rec


def _death(d: PlanarDiagram, move: Death):
    if not _is_loop(d, move.edge):
        raise IllegalMoveError(
            f"death needs a crossingless circle; edge {move.edge} is not one"
        )
    d2 = PlanarDiagram(d.crossings, tuple(e for e in d.loops if e != move.edge))
    rec = MoveRecord("death", _identity_map(d), {"loop": move.edge})
    return d2, rec


def _saddle(d: PlanarDiagram, move: Saddle):
    e1, e2 = move.edges
    if e1 not in d.occurrences or e2 not in d.occurrences:
        raise IllegalMoveError(f"saddle edges {move.edges} not in the diagram")
    if move.side not in ("left", "right"):
        raise IllegalMoveError(f"unknown saddle side {move.side!r}")
    ident = _identity_map(d)
    loop1, loop2 = _is_loop(d, e1), _is_loop(d, e2)

    if loop1 and loop2:
        if e1 == e2:
            # band from a free loop to itself: split off a fresh loop.
            # side "left" = inside of the reference (counterclockwise) loop.
            (new,) = d.fresh_edges(1)
            d2 = PlanarDiagram(d.crossings, d.loops + (new,))
            along = move.side == "left"
            rec = MoveRecord(
                "saddle_split",
                ident,
                {"feet": (e1, e2), "kept": e1, "new_loop": new,
                 "d1_ref": along, "d2_ref": along},
            )
            return d2, rec
        # merge two side-by-side loops through the outer region; the band
        # face lies left of each loop traversed clockwise
        remaining = tuple(e for e in d.loops if e not in (e1, e2))
        (new,) = PlanarDiagram(d.crossings, remaining).fresh_edges(1)
        d2 = PlanarDiagram(d.crossings, remaining + (new,))
        rec = MoveRecord(
            "saddle_merge",
            ident,
            {"feet": (e1, e2), "new_loop": new, "d1_ref": False, "d2_ref": False},
        )
        return d2, rec

    if loop1 != loop2:
        # merge a free loop into a strand bordering the outer region
        loop, edge = (e1, e2) if loop1 else (e2, e1)
        occ = _outer_directed(d, edge)
        if occ is None:
            raise IllegalMoveError(
                f"edge {edge} does not border the outer region"
            )
        d2 = PlanarDiagram(d.crossings, tuple(e for e in d.loops if e != loop))
        rec = MoveRecord(
            "saddle_merge",
            ident,
            {"feet": (edge, loop), "absorbed": loop,
             "d1_ref": occ[2], "d2_ref": False},
        )
        return d2, rec

    # both feet on crossing edges
    if e1 == e2:
        # both feet on one edge, same side: split off a fresh loop
        face = _edge_side_face(d, e1, move.side)
        occ = _directed_occurrences(d, e1, face)
        (new,) = d.fresh_edges(1)
        d2 = PlanarDiagram(d.crossings, d.loops + (new,))
        rec = MoveRecord(
            "saddle_split",
            ident,
            {"feet": (e1, e2), "kept": e1, "new_loop": new,
             "d1_ref": occ[2], "d2_ref": occ[2]},
        )
        return d2, rec

    if _crossing_component_of_edge(d, e1) == _crossing_component_of_edge(d, e2):
        face = _edge_side_face(d, e1, move.side)
        got2 = _directed_occurrences(d, e2, face)
        if got2 is None:
            raise IllegalMoveError(
                f"edges {e1} and {e2} do not border a common face "
                f"(side {move.side} of {e1})"
            )
        got1 = _directed_occurrences(d, e1, face)
    else:
        got1 = _outer_directed(d, e1)
        got2 = _outer_directed(d, e2)
        if got1 is None or got2 is None:
            raise IllegalMoveError(
                f"edges {e1} and {e2} lie in different pieces and do not "
                "both border the outer region"
            )
    tail1, head1, ref1 = got1
    tail2, head2, ref2 = got2
    crossings = [list(t) for t in d.crossings]
    # reconnect: e1 runs tail1 -> head2, e2 runs tail2 -> head1
    _replace_occurrence(crossings, head2, e1)
    _replace_occurrence(crossings, head1, e2)
    d2 = PlanarDiagram(tuple(tuple(t) for t in crossings), d.loops)
    try:
        d2.validate()
    except PDValidationError as exc:
        raise IllegalMoveError(f"saddle produced an invalid diagram: {exc}")
    rec = MoveRecord(
        "saddle_reconnect",
        ident,
        {"feet": (e1, e2), "d1_ref": ref1, "d2_ref": ref2},
    )
    return d2, rec


# -- Reidemeister I ---------------------------------------------------------------


def _r1_add(d: PlanarDiagram, move: R1Move):
    if move.hand not in ("left", "right"):
        raise IllegalMoveError(f"unknown curl handedness {move.hand!r}")
    e = move.edge
    if e not in d.occurrences:
        raise IllegalMoveError(f"r1 add: edge {e} not in the diagram")
    n = d.crossing_count
    ident = _identity_map(d)
    if _is_loop(d, e):
        remaining = tuple(x for x in d.loops if x != e)
        f1, f2 = PlanarDiagram(d.crossings, remaining).fresh_edges(2)
        cross = (f1, f1, f2, f2) if move.hand == "left" else (f2, f1, f1, f2)
        d2 = PlanarDiagram(d.crossings + (cross,), remaining)
        d2.validate()
        rec = MoveRecord(
            "r1_add",
            ident,
            {"hand": move.hand, "crossing": n, "loop_edge": f1,
             "anchor": (e, f2), "host_was_loop": True},
        )
        return d2, rec
    f1, f2 = d.fresh_edges(2)
    head = d.edge_head[e]
    crossings = [list(t) for t in d.crossings]
    _replace_occurrence(crossings, head, f2)
    # left curl: X(f1, f1, e_out, e_in); right curl: X(e_in, f1, f1, e_out)
    cross = (f1, f1, f2, e) if move.hand == "left" else (e, f1, f1, f2)
    d2 = PlanarDiagram(tuple(tuple(t) for t in crossings) + (cross,), d.loops)
    d2.validate()
    rec = MoveRecord(
        "r1_add",
        ident,
        {"hand": move.hand, "crossing": n, "loop_edge": f1,
         "anchor": (e, e), "host_was_loop": False},
    )
    return d2, rec


def detect_curl(d: PlanarDiagram, loop_edge: int):
    """Identify the curl crossing carrying ``loop_edge`` twice.

    Returns (crossing, hand, e_in, e_out): the strand enters at e_in and
    leaves at e_out; hand left means the positive curl (its 0-smoothing
    splits the small circle off).
    """
    occ = d.occurrences.get(loop_edge)
    if not occ or len(occ) != 2 or occ[0][0] != occ[1][0]:
        raise IllegalMoveError(f"edge {loop_edge} is not a curl loop")
    c = occ[0][0]
    slots = {occ[0][1], occ[1][1]}
    tup = d.crossings[c]
    if slots == {0, 1}:
        hand, e_in, e_out = "left", tup[3], tup[2]
    elif slots == {2, 3}:
        hand, e_in, e_out = "left", tup[0], tup[1]
    elif slots == {1, 2}:
        hand, e_in, e_out = "right", tup[0], tup[3]
    elif slots == {0, 3}:
        hand, e_in, e_out = "right", tup[1], tup[2]
    else:
        raise IllegalMoveError(f"edge {loop_edge} is not a curl loop")
    return c, hand, e_in, e_out


def _splice(d: PlanarDiagram, removed: set[int], glue_pairs):
    """Remove crossings and reglue the strands across them.

    ``glue_pairs`` lists pairs of darts at removed crossings whose edges are
    to be joined end to end. Returns (crossings, crossing_map, new_loops,
    merged) where merged maps each involved old edge to its new identifier
    (chains keep the least id; closed chains become free loops).
    """
    crossing_map = {
        i: i - sum(1 for r in removed if r < i)
        for i in range(d.crossing_count)
        if i not in removed
    }
    crossings = [list(t) for i, t in enumerate(d.crossings) if i not in removed]
    glue: dict[Dart, Dart] = {}
    for a, b in glue_pairs:
        if a in glue or b in glue:
            raise IllegalMoveError("conflicting strand gluings")
        glue[a] = b
        glue[b] = a
    involved = sorted({d.edge_at(a) for a in glue})

    def walk(edge: int, out_dart: Dart):
        """Follow gluings away from ``edge`` through its end ``out_dart``.
        Returns (chain, terminal dart), terminal None when the chain closes
        back onto ``edge``."""
        chain = []
        cur = out_dart
        while cur in glue:
            nxt = glue[cur]
            e = d.edge_at(nxt)
            if e == edge:
                return chain, None
            chain.append(e)
            cur = d.other_end(e, nxt)
        return chain, cur

    merged: dict[int, int] = {}
    new_loops: list[int] = []
    done: set[int] = set()
    for e in involved:
        if e in done:
            continue
        occ1, occ2 = d.occurrences[e]
        right, term_r = walk(e, occ2)
        if term_r is None:
            cycle = [e] + right
            new_id = min(cycle)
            for x in cycle:
                merged[x] = new_id
                done.add(x)
            new_loops.append(new_id)
            continue
        left, term_l = walk(e, occ1)
        chain = list(reversed(left)) + [e] + right
        new_id = min(chain)
        for x in chain:
            merged[x] = new_id
            done.add(x)
        for term in (term_l, term_r):
            c, s = term
            if c in removed:
                raise IllegalMoveError("strand terminates at a removed crossing")
            crossings[crossing_map[c]][s] = new_id
    return crossings, crossing_map, new_loops, merged


def _r1_remove(d: PlanarDiagram, move: R1Move):
    c, hand, e_in, e_out = detect_curl(d, move.edge)
    occ_in = [o for o in d.occurrences[e_in] if o[0] == c]
    occ_out = [o for o in d.occurrences[e_out] if o[0] == c]
    if e_in == e_out:
        pair = (occ_in[0], occ_in[1])
    else:
        pair = (occ_in[0], occ_out[0])
    crossings, crossing_map, new_loops, merged = _splice(d, {c}, [pair])
    d2 = PlanarDiagram(
        tuple(tuple(t) for t in crossings), d.loops + tuple(new_loops)
    )
    d2.validate()
    keep = merged[e_in]
    rec = MoveRecord(
        "r1_remove",
        crossing_map,
        {"hand": hand, "crossing": c, "loop_edge": move.edge,
         "anchor": (keep, keep), "host_is_loop": bool(new_loops)},
    )
    return d2, rec


# -- Reidemeister II --------------------------------------------------------------


def _r2_add(d: PlanarDiagram, move: R2Move):
    """Poke one strand across another.

    Writing u for the strand passing under at both new crossings and o for
    the one passing over, the local result is always

        K1 = X(u_in, m2, m1, o_out),   K2 = X(m1, m2, u_out, o_in)

    with m1 the under middle and m2 the over middle. Strand pieces keep the
    original edge id on their tail side; free loops contribute one circular
    piece each.
    """
    e1, e2 = move.edges
    if e1 not in d.occurrences or e2 not in d.occurrences:
        raise IllegalMoveError(f"r2 add: edges {move.edges} not in the diagram")
    under, over = (e2, e1) if move.over else (e1, e2)
    n = d.crossing_count
    ident = _identity_map(d)
    u_loop, o_loop = _is_loop(d, under), _is_loop(d, over)

    if under == over:
        if u_loop:
            # poke a free loop across itself
            remaining = tuple(x for x in d.loops if x != under)
            u, m1, m2, p = PlanarDiagram(d.crossings, remaining).fresh_edges(4)
            k1 = (u, m2, m1, u)
            k2 = (m1, m2, p, p)
            d2 = PlanarDiagram(d.crossings + (k1, k2), remaining)
            d2.validate()
            nk1, nk2, nm1, nm2 = detect_r2_pattern(d2, (m1, m2))
            rec = MoveRecord(
                "r2_add",
                ident,
                {"k1": nk1, "k2": nk2, "m1": nm1, "m2": nm2,
                 "anchors": {under: u}, "flip_components": [under]},
            )
            return d2, rec
        # fold a crossing edge across itself
        m1, m2, p, a2 = d.fresh_edges(4)
        head = d.edge_head[under]
        crossings = [list(t) for t in d.crossings]
        _replace_occurrence(crossings, head, a2)
        k1 = (under, m2, m1, a2)
        k2 = (m1, m2, p, p)
        d2 = PlanarDiagram(
            tuple(tuple(t) for t in crossings) + (k1, k2), d.loops
        )
        d2.validate()
        nk1, nk2, nm1, nm2 = detect_r2_pattern(d2, (m1, m2))
        rec = MoveRecord(
            "r2_add",
            ident,
            {"k1": nk1, "k2": nk2, "m1": nm1, "m2": nm2,
             "anchors": {under: under}},
        )
        return d2, rec

    if u_loop and o_loop:
        remaining = tuple(x for x in d.loops if x not in (under, over))
        u, v, m1, m2 = PlanarDiagram(d.crossings, remaining).fresh_edges(4)
        k1 = (u, m2, m1, v)
        k2 = (m1, m2, u, v)
        d2 = PlanarDiagram(d.crossings + (k1, k2), remaining)
        d2.validate()
        nk1, nk2, nm1, nm2 = detect_r2_pattern(d2, (m1, m2))
        rec = MoveRecord(
            "r2_add",
            ident,
            {"k1": nk1, "k2": nk2, "m1": nm1, "m2": nm2,
             "anchors": {under: u, over: v},
             "flip_components": [under, over]},
        )
        return d2, rec

    if u_loop or o_loop:
        loop, edge = (under, over) if u_loop else (over, under)
        got = _outer_directed(d, edge)
        if got is None:
            raise IllegalMoveError(
                f"edge {edge} does not border the outer region"
            )
        along_ref = got[2]
        remaining = tuple(x for x in d.loops if x != loop)
        base = PlanarDiagram(d.crossings, remaining)
        head = d.edge_head[edge]
        crossings = [list(t) for t in d.crossings]
        if u_loop:
            # under strand is the loop (single piece u); over strand splits
            # into (edge, m2, e2b) with direction determined by its side
            u, m1, m2, e2b = base.fresh_edges(4)
            _replace_occurrence(crossings, head, e2b)
            if along_ref:
                k1 = (u, m2, m1, e2b)
                k2 = (m1, m2, u, edge)
            else:
                k1 = (u, m2, m1, edge)
                k2 = (m1, m2, u, e2b)
            anchors = {under: u, over: edge}
        else:
            # over strand is the loop (single piece v); under strand splits
            u1b, m1, m2, v = base.fresh_edges(4)
            _replace_occurrence(crossings, head, u1b)
            if along_ref:
                k1 = (edge, m2, m1, v)
                k2 = (m1, m2, u1b, v)
            else:
                k1 = (edge, v, m1, m2)
                k2 = (m1, v, u1b, m2)
            anchors = {under: edge, over: v}
        d2 = PlanarDiagram(
            tuple(tuple(t) for t in crossings) + (k1, k2), remaining
        )
        d2.validate()
        nk1, nk2, nm1, nm2 = detect_r2_pattern(d2, (m1, m2))
        rec = MoveRecord(
            "r2_add",
            ident,
            {"k1": nk1, "k2": nk2, "m1": nm1, "m2": nm2, "anchors": anchors},
        )
        return d2, rec

    # both crossing edges
    if _crossing_component_of_edge(d, under) == _crossing_component_of_edge(d, over):
        face = None
        for side in ("left", "right"):
            f = _edge_side_face(d, under, side)
            if _directed_occurrences(d, over, f) is not None:
                face = f
                break
        if face is None:
            raise IllegalMoveError(
                f"edges {under} and {over} do not border a common face"
            )
        got_u = _directed_occurrences(d, under, face)
        got_o = _directed_occurrences(d, over, face)
    else:
        got_u = _outer_directed(d, under)
        got_o = _outer_directed(d, over)
        if got_u is None or got_o is None:
            raise IllegalMoveError(
                f"edges {under} and {over} lie in different pieces and do "
                "not both border the outer region"
            )
    fu, fo = got_u[2], got_o[2]
    u1b, m1, m2, o2b = d.fresh_edges(4)
    crossings = [list(t) for t in d.crossings]
    _replace_occurrence(crossings, d.edge_head[under], u1b)
    _replace_occurrence(crossings, d.edge_head[over], o2b)
    # the under strand enters the first crossing along its own direction; the
    # over strand's wiring depends on which side of each strand the common
    # face lies (reference direction on the left or not)
    if fu and fo:
        k1, k2 = (under, m2, m1, o2b), (m1, m2, u1b, over)
    elif fu and not fo:
        k1, k2 = (under, m2, m1, over), (m1, m2, u1b, o2b)
    elif not fu and fo:
        k1, k2 = (under, over, m1, m2), (m1, o2b, u1b, m2)
    else:
        k1, k2 = (under, o2b, m1, m2), (m1, over, u1b, m2)
    d2 = PlanarDiagram(
        tuple(tuple(t) for t in crossings) + (k1, k2), d.loops
    )
    d2.validate()
    nk1, nk2, nm1, nm2 = detect_r2_pattern(d2, (m1, m2))
    rec = MoveRecord(
        "r2_add",
        ident,
        {"k1": nk1, "k2": nk2, "m1": nm1, "m2": nm2,
         "anchors": {under: under, over: over}},
    )
    return d2, rec


def detect_r2_pattern(d: PlanarDiagram, m_edges: tuple[int, int]):
    """Identify an R2 bigon from its two middle edges.

    Returns (k1, k2, m1, m2): m1 is the all-under middle, m2 the all-over
    one; k1 is the crossing whose middle slots are joined by its
    1-smoothing (the bit that flips first along the contraction).
    """
    ma, mb = m_edges
    for e in (ma, mb):
        if e not in d.occurrences or len(d.occurrences[e]) != 2:
            raise IllegalMoveError(f"r2 remove: edge {e} is not a strand edge")
    ca = tuple(sorted({o[0] for o in d.occurrences[ma]}))
    cb = tuple(sorted({o[0] for o in d.occurrences[mb]}))
    if len(ca) != 2 or ca != cb:
        raise IllegalMoveError(
            f"edges {m_edges} do not join one pair of crossings"
        )
    k_first, k_second = ca

    def slot(e, c):
        (s,) = [s for (cc, s) in d.occurrences[e] if cc == c]
        return s

    roles = {}
    for e in (ma, mb):
        r1, r2 = slot(e, k_first) % 2, slot(e, k_second) % 2
        if r1 != r2:
            raise IllegalMoveError(
                f"edge {e} changes over/under role; not an R2 bigon"
            )
        roles[e] = r1  # 0 under strand material, 1 over
    if sorted(roles.values()) != [0, 1]:
        raise IllegalMoveError("the two middle edges are on the same strand")
    m1 = ma if roles[ma] == 0 else mb
    m2 = mb if m1 is ma else ma

    def circled_bit(c):
        # bit whose smoothing glues the two middle slots to each other
        s1, s2 = slot(m1, c), slot(m2, c)
        return 0 if smoothing_partner(s1, 0) == s2 else 1

    bits = {c: circled_bit(c) for c in (k_first, k_second)}
    ones = [c for c in (k_first, k_second) if bits[c] == 1]
    if len(ones) != 1:
        raise IllegalMoveError(
            "bigon smoothing pattern is not a Reidemeister II pattern"
        )
    k1 = ones[0]
    k2 = k_second if k1 == k_first else k_first
    # sanity: middle slots must be adjacent at both crossings
    for c in (k_first, k_second):
        if slot(m1, c) not in (
            smoothing_partner(slot(m2, c), 0),
            smoothing_partner(slot(m2, c), 1),
        ):
            raise IllegalMoveError("middle edges are not adjacent at a crossing")
    return k1, k2, m1, m2


def _r2_remove(d: PlanarDiagram, move: R2Move):
    k1, k2, m1, m2 = detect_r2_pattern(d, move.edges)
    removed = {k1, k2}

    def outer_dart(e, c):
        (s,) = [s for (cc, s) in d.occurrences[e] if cc == c]
        return (c, (s + 2) % 4)

    pairs = [
        (outer_dart(m1, k1), outer_dart(m1, k2)),
        (outer_dart(m2, k1), outer_dart(m2, k2)),
    ]
    crossings, crossing_map, new_loops, merged = _splice(d, removed, pairs)
    d2 = PlanarDiagram(
        tuple(tuple(t) for t in crossings), d.loops + tuple(new_loops)
    )
    d2.validate()
    under_kept = merged[d.edge_at(outer_dart(m1, k1))]
    over_kept = merged[d.edge_at(outer_dart(m2, k1))]
    rec = MoveRecord(
        "r2_remove",
        crossing_map,
        {"k1": k1, "k2": k2, "m1": m1, "m2": m2,
         "anchors": {under_kept: under_kept, over_kept: over_kept},
         "under_kept": under_kept, "over_kept": over_kept,
         "flip_components": [e for e in (under_kept, over_kept) if e in new_loops]},
    )
    return d2, rec


# -- Reidemeister III -------------------------------------------------------------


def find_triangle(d: PlanarDiagram, crossings: tuple[int, int, int]):
    """A face bounded by exactly the three given crossings, as its dart orbit."""
    want = set(crossings)
    if len(want) != 3 or any(not (0 <= c < d.crossing_count) for c in want):
        raise IllegalMoveError(f"bad crossing triple {crossings}")
    for orbit in d.faces:
        if len(orbit) == 3 and {c for c, _ in orbit} == want:
            return orbit
    raise IllegalMoveError(f"crossings {crossings} do not bound a triangle")


def _r3(d: PlanarDiagram, move: R3Move):
    orbit = find_triangle(d, move.crossings)
    side_edges = set()
    for (c, s) in orbit:
        side_edges.add(d.edge_at((c, (s - 1) % 4)))
    if len(side_edges) != 3:
        raise IllegalMoveError("triangle sides are degenerate")

    def profile(e):
        roles = sorted(s % 2 for (_, s) in d.occurrences[e])
        return {(1, 1): "over", (0, 0): "under"}.get(tuple(roles), "mixed")

    movable = sorted(e for e in side_edges if profile(e) == "over")
    if not movable:
        movable = sorted(e for e in side_edges if profile(e) == "under")
    if not movable:
        raise IllegalMoveError(
            f"triangle {move.crossings} has no strand passing over or under "
            "both others; not a slide triangle"
        )
    t_edge = movable[0]
    t_crossings = sorted({c for c, _ in d.occurrences[t_edge]})
    if len(t_crossings) != 2:
        raise IllegalMoveError("movable side is degenerate")
    (r,) = [c for c in move.crossings if c not in t_crossings]
    other_sides = [e for e in sorted(side_edges) if e != t_edge]

    def crossings_of(e):
        return {c for c, _ in d.occurrences[e]}

    p = q = m_edge = b_edge = None
    for first, second in ((other_sides[0], other_sides[1]),
                          (other_sides[1], other_sides[0])):
        pc = crossings_of(first) - {r}
        qc = crossings_of(second) - {r}
        if (
            len(pc) == 1
            and len(qc) == 1
            and r in crossings_of(first)
            and r in crossings_of(second)
            and pc | qc == set(t_crossings)
        ):
            p, q = pc.pop(), qc.pop()
            m_edge, b_edge = first, second
            break
    if p is None:
        raise IllegalMoveError("triangle sides do not close up")

    def slot(e, c):
        (s,) = [s for (cc, s) in d.occurrences[e] if cc == c]
        return s

    def opp_edge(e, c):
        return d.crossings[c][(slot(e, c) + 2) % 4]

    m_outer_p = opp_edge(m_edge, p)   # strand M beyond P
    m_outer_r = opp_edge(m_edge, r)   # strand M beyond R
    b_outer_q = opp_edge(b_edge, q)
    b_outer_r = opp_edge(b_edge, r)
    t_outer_p = opp_edge(t_edge, p)
    t_outer_q = opp_edge(t_edge, q)

    t2, m2, b2 = d.fresh_edges(3)
    crossings = [list(t) for t in d.crossings]
    # the crossing P slides along strand M past R; Q slides along B past R;
    # each physical slot keeps its role, only the incident edge changes
    crossings[p][slot(m_edge, p)] = m_outer_r
    crossings[p][(slot(m_edge, p) + 2) % 4] = m2
    crossings[p][slot(t_edge, p)] = t_outer_q
    crossings[p][(slot(t_edge, p) + 2) % 4] = t2
    crossings[q][slot(b_edge, q)] = b_outer_r
    crossings[q][(slot(b_edge, q) + 2) % 4] = b2
    crossings[q][slot(t_edge, q)] = t_outer_p
    crossings[q][(slot(t_edge, q) + 2) % 4] = t2
    crossings[r][slot(m_edge, r)] = m_outer_p
    crossings[r][(slot(m_edge, r) + 2) % 4] = m2
    crossings[r][slot(b_edge, r)] = b_outer_q
    crossings[r][(slot(b_edge, r) + 2) % 4] = b2
    d2 = PlanarDiagram(tuple(tuple(t) for t in crossings), d.loops)
    try:
        d2.validate()
    except PDValidationError as exc:
        raise IllegalMoveError(f"r3 produced an invalid diagram: {exc}")
    rec = MoveRecord(
        "r3",
        _identity_map(d),
        {"p": p, "q": q, "r": r,
         "t": t_edge, "m": m_edge, "b": b_edge,
         "t2": t2, "m2": m2, "b2": b2},
    )
    return d2, rec
