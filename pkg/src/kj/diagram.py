"""Planar link diagrams from PD codes.

A crossing X(a, b, c, d) lists its four incident edges counterclockwise,
with the understrand entering at a and leaving at c. Slots are numbered
0..3 in tuple order; the overstrand occupies slots 1 and 3. Crossingless
components ("free loops", the O token) carry an edge identifier of their
own and are placed side by side in the unbounded region.

Everything downstream (resolutions, gradings, induced maps) reduces to
three traced structures computed here:

* strand directions, giving each edge a tail and head occurrence;
* faces of the four-valent map, via the counterclockwise rotation system,
  with the Euler count V - E + F = 2 per connected piece as the
  realizability check;
* circles of a complete resolution, with left/right faces and a two-
  coloring of the resolved regions (outer face color 0).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .errors import InternalInvariantError, PDSyntaxError, PDValidationError

__all__ = [
    "PlanarDiagram",
    "Resolution",
    "Circle",
    "parse_pd",
    "render_pd",
    "crossing_sign",
    "writhe",
    "oriented_resolution",
    "resolve",
    "checkerboard_nesting",
    "all_orientations",
]

# A dart is an (crossing index, slot) pair naming one edge end.
Dart = tuple[int, int]


@dataclass(frozen=True)
class PlanarDiagram:
    """Immutable planar diagram: crossing tuples plus free-loop edge ids."""

    crossings: tuple[tuple[int, int, int, int], ...] = ()
    loops: tuple[int, ...] = ()

    # -- raw incidence ----------------------------------------------------

    @cached_property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @cached_property
    def occurrences(self) -> dict[int, tuple[Dart, ...]]:
        """Edge id -> the darts where it meets crossings (free loops: ())."""
        occ: dict[int, list[Dart]] = {e: [] for e in self.loops}
        for c, tup in enumerate(self.crossings):
            for s, e in enumerate(tup):
                occ.setdefault(e, []).append((c, s))
        return {e: tuple(v) for e, v in occ.items()}

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.occurrences))

    @cached_property
    def crossing_edges(self) -> tuple[int, ...]:
        return tuple(e for e in self.edges if e not in self.loops)

    @cached_property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_at(self, dart: Dart) -> int:
        return self.crossings[dart[0]][dart[1]]

    def other_end(self, edge: int, dart: Dart) -> Dart:
        a, b = self.occurrences[edge]
        return b if dart == a else a

    # -- strand structure --------------------------------------------------

    @cached_property
    def _strands(self):
        """Directions and components from walking strands through crossings.

        Returns (tail, head, components): tail/head map each crossing edge to
        its departure/arrival dart; components is a tuple of sorted edge
        tuples, free loops included as singletons.
        """
        tail: dict[int, Dart] = {}
        head: dict[int, Dart] = {}
        comps: list[tuple[int, ...]] = []
        visited_departures: set[Dart] = set()

        def walk(start: Dart):
            comp_edges = set()
            dep = start
            while True:
                if dep in visited_departures:
                    raise PDValidationError(
                        f"inconsistent strand directions at crossing {dep[0]}"
                    )
                visited_departures.add(dep)
                e = self.edge_at(dep)
                if e in tail:
                    raise PDValidationError(f"edge {e} departs twice")
                tail[e] = dep
                arr = self.other_end(e, dep)
                if arr == dep:
                    raise PDValidationError(f"edge {e} has a single end")
                head[e] = arr
                comp_edges.add(e)
                c, s = arr
                if s == 0:
                    nxt = (c, 2)
                elif s in (1, 3):
                    nxt = (c, 4 - s)
                else:  # s == 2: arriving at an understrand exit slot
                    raise PDValidationError(
                        f"edge {e} enters crossing {c} at its understrand exit"
                    )
                if nxt == start:
                    break
                dep = nxt
            return tuple(sorted(comp_edges))

        # understrand exits force directions; walk those strands first
        for c in range(self.crossing_count):
            dep = (c, 2)
            if dep not in visited_departures:
                comps.append(walk(dep))
        # components passing over everywhere get a deterministic direction
        remaining = sorted(e for e in self.crossing_edges if e not in tail)
        for e in remaining:
            if e in tail:
                continue
            comps.append(walk(self.occurrences[e][0]))
        for e in self.loops:
            comps.append((e,))
        # sanity: every occurrence is exactly one tail and one head
        for e in self.crossing_edges:
            if e not in tail or e not in head or tail[e] == head[e]:
                raise PDValidationError(f"edge {e} has no consistent direction")
        comps.sort(key=lambda t: t[0])
        return tail, head, tuple(comps)

    @cached_property
    def edge_tail(self) -> dict[int, Dart]:
        return self._strands[0]

    @cached_property
    def edge_head(self) -> dict[int, Dart]:
        return self._strands[1]

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        return self._strands[2]

    @cached_property
    def component_map(self) -> dict[int, int]:
        return {e: i for i, comp in enumerate(self.components) for e in comp}

    @cached_property
    def component_count(self) -> int:
        return len(self.components)

    # -- faces of the four-valent map ---------------------------------------

    @cached_property
    def faces(self) -> tuple[tuple[Dart, ...], ...]:
        """Face orbits of the rotation system, as tuples of arrival darts.

        Walking into dart (c, s) with the face on the left, the walk leaves
        along slot s-1; the face holds the sector between slots s-1 and s.
        """
        todo = {(c, s) for c in range(self.crossing_count) for s in range(4)}
        orbits = []
        while todo:
            start = min(todo)
            orbit = []
            cur = start
            while True:
                orbit.append(cur)
                todo.discard(cur)
                c, s = cur
                exit_dart = (c, (s - 1) % 4)
                cur = self.other_end(self.edge_at(exit_dart), exit_dart)
                if cur == start:
                    break
            orbits.append(tuple(orbit))
        return tuple(orbits)

    @cached_property
    def face_of_sector(self) -> dict[Dart, int]:
        """Sector (c, i), between slots i and i+1, -> index into faces."""
        out = {}
        for fi, orbit in enumerate(self.faces):
            for (c, s) in orbit:
                out[(c, (s - 1) % 4)] = fi
        return out

    @cached_property
    def crossing_components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components of the four-valent graph (crossing indices)."""
        parent = list(range(self.crossing_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.crossing_edges:
            (c1, _), (c2, _) = self.occurrences[e]
            parent[find(c1)] = find(c2)
        groups: dict[int, list[int]] = {}
        for c in range(self.crossing_count):
            groups.setdefault(find(c), []).append(c)
        return tuple(tuple(sorted(g)) for g in sorted(groups.values()))

    def validate(self) -> None:
        """Check all structural invariants, raising PDValidationError."""
        for e, occ in self.occurrences.items():
            if e <= 0:
                raise PDValidationError(f"edge identifiers must be positive: {e}")
            expected = 0 if e in self.loops else 2
            if len(occ) != expected:
                raise PDValidationError(
                    f"edge {e} occurs {len(occ)} times (expected {expected})"
                )
        _ = self.components  # forces direction consistency checks
        # Euler formula per connected piece of the four-valent map
        face_comp: dict[int, set[int]] = {}
        for fi, orbit in enumerate(self.faces):
            for (c, _) in orbit:
                face_comp.setdefault(fi, set()).add(c)
        for comp in self.crossing_components:
            cset = set(comp)
            v = len(comp)
            e = sum(
                1
                for ed in self.crossing_edges
                if self.occurrences[ed][0][0] in cset
            )
            f = sum(1 for fi, cs in face_comp.items() if cs & cset)
            if v - e + f != 2:
                raise PDValidationError(
                    f"crossings {comp} do not embed in the plane "
                    f"(V-E+F = {v - e + f})"
                )

    # -- conveniences --------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.crossings and not self.loops

    def fresh_edges(self, n: int, also_avoid=()) -> list[int]:
        """The n lowest unused positive edge identifiers."""
        used = set(self.occurrences) | set(also_avoid)
        out: list[int] = []
        e = 1
        while len(out) < n:
            if e not in used:
                out.append(e)
            e += 1
        return out

    def __repr__(self):
        return render_pd(self)


# -- PD text grammar ----------------------------------------------------------

_TOKEN_RE = re.compile(r"X\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)|O")


def parse_pd(text: str) -> PlanarDiagram:
    """Parse ``PD[X(a,b,c,d), ..., O]`` text into a validated diagram.

    Whitespace-insensitive. ``PD[]`` is the empty diagram, ``O`` a
    crossingless unknot component (free loops receive the lowest edge ids
    unused by crossings, in token order).
    """
    s = "".join(text.split())
    if not s.startswith("PD[") or not s.endswith("]"):
        raise PDSyntaxError("PD code must have the form PD[...]")
    body = s[3:-1]
    crossings: list[tuple[int, int, int, int]] = []
    loop_count = 0
    if body:
        pos = 0
        while pos < len(body):
            m = _TOKEN_RE.match(body, pos)
            if m is None:
                raise PDSyntaxError(f"bad token at {body[pos:pos + 20]!r}")
            if m.group(0) == "O":
                loop_count += 1
            else:
                crossings.append(tuple(int(g) for g in m.groups()))  # type: ignore[arg-type]
            pos = m.end()
            if pos < len(body):
                if body[pos] != ",":
                    raise PDSyntaxError(f"expected ',' at {body[pos:pos + 20]!r}")
                pos += 1
                if pos == len(body):
                    raise PDSyntaxError("trailing comma")
    d = PlanarDiagram(tuple(crossings), ())
    if loop_count:
        d = PlanarDiagram(d.crossings, tuple(d.fresh_edges(loop_count)))
    d.validate()
    return d


def render_pd(d: PlanarDiagram) -> str:
    parts = [f"X({a},{b},{c},{e})" for (a, b, c, e) in d.crossings]
    parts.extend("O" for _ in d.loops)
    return "PD[" + ", ".join(parts) + "]"


# -- orientations and crossing signs ------------------------------------------

def all_orientations(d: PlanarDiagram) -> list[tuple[bool, ...]]:
    """All 2^l orientations; True keeps a component's reference direction."""
    out = [()]
    for _ in range(d.component_count):
        out = [o + (b,) for o in out for b in (True, False)]
    return [tuple(o) for o in out]


def _check_orientation(d: PlanarDiagram, orientation) -> tuple[bool, ...]:
    o = tuple(orientation)
    if len(o) != d.component_count:
        raise PDValidationError(
            f"orientation length {len(o)} != component count {d.component_count}"
        )
    return o


def crossing_sign(d: PlanarDiagram, orientation, c: int) -> int:
    """Sign of crossing c: +1 when the overstrand runs slot 3 -> slot 1
    under the given orientation, -1 otherwise."""
    o = _check_orientation(d, orientation)
    over_edge = d.crossings[c][1]
    under_edge = d.crossings[c][0]
    sign = 1 if d.edge_tail[over_edge] == (c, 1) else -1
    if not o[d.component_map[under_edge]]:
        sign = -sign
    if not o[d.component_map[over_edge]]:
        sign = -sign
    return sign


def writhe(d: PlanarDiagram, orientation=None) -> int:
    """Sum of crossing signs. Defaults to the reference orientation."""
    o = (
        tuple([True] * d.component_count)
        if orientation is None
        else _check_orientation(d, orientation)
    )
    return sum(crossing_sign(d, o, c) for c in range(d.crossing_count))


def oriented_resolution(d: PlanarDiagram, orientation) -> tuple[int, ...]:
    """Bit per crossing: 0 at positive crossings, 1 at negative ones."""
    o = _check_orientation(d, orientation)
    return tuple(
        0 if crossing_sign(d, o, c) == 1 else 1 for c in range(d.crossing_count)
    )


# -- complete resolutions ------------------------------------------------------

def smoothing_partner(slot: int, bit: int) -> int:
    """Slot joined to ``slot`` by the smoothing arc: the 0-smoothing pairs
    (0,1) and (2,3), the 1-smoothing pairs (0,3) and (1,2)."""
    if bit == 0:
        return slot ^ 1
    return 3 - slot


@dataclass(frozen=True)
class Circle:
    """One circle of a complete resolution.

    For crossing circles, ``trace`` lists the arrival darts visited by the
    canonical traversal (started at the lowest edge's lowest occurrence);
    ``edges`` follows the same order. Free loops have an empty trace and the
    counterclockwise reference direction by convention.
    """

    edges: tuple[int, ...]
    trace: tuple[Dart, ...]
    is_free_loop: bool = False

    @property
    def min_edge(self) -> int:
        return min(self.edges)

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)


@dataclass(frozen=True)
class Resolution:
    """A complete resolution: the smoothing choice and its circles."""

    diagram: PlanarDiagram
    bits: tuple[int, ...]

    @cached_property
    def circles(self) -> tuple[Circle, ...]:
        d = self.diagram
        circles: list[Circle] = []
        seen: set[Dart] = set()
        for e in d.crossing_edges:
            start = min(d.occurrences[e])
            if start in seen:
                continue
            trace: list[Dart] = []
            edges: list[int] = []
            cur = start  # an arrival dart
            while True:
                trace.append(cur)
                seen.add(cur)
                edges.append(d.edge_at(cur))
                c, s = cur
                exit_dart = (c, smoothing_partner(s, self.bits[c]))
                seen.add(exit_dart)
                cur = d.other_end(d.edge_at(exit_dart), exit_dart)
                if cur == start:
                    break
            circles.append(Circle(tuple(edges), tuple(trace)))
        for e in d.loops:
            circles.append(Circle((e,), (), is_free_loop=True))
        circles.sort(key=lambda c: c.min_edge)
        return tuple(circles)

    @cached_property
    def circle_count(self) -> int:
        return len(self.circles)

    def circle_index_of_edge(self, edge: int) -> int:
        for i, c in enumerate(self.circles):
            if edge in c.edges:
                return i
        raise KeyError(edge)

    @cached_property
    def circle_of_dart(self) -> dict[Dart, int]:
        """Arrival or exit dart -> circle index (crossing circles only)."""
        out: dict[Dart, int] = {}
        for i, circ in enumerate(self.circles):
            for dart in circ.trace:
                c, s = dart
                out[dart] = i
                out[(c, smoothing_partner(s, self.bits[c]))] = i
        return out

    # -- resolved faces and the two-coloring --------------------------------

    @cached_property
    def _face_merge(self) -> dict[int, int]:
        """Map face index -> representative after merging across smoothings."""
        d = self.diagram
        parent: dict[int, int] = {i: i for i in range(len(d.faces))}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c, bit in enumerate(self.bits):
            # the smoothing arcs absorb the two sectors they do not hug
            if bit == 0:
                merged = ((c, 1), (c, 3))
            else:
                merged = ((c, 0), (c, 2))
            f1 = find(d.face_of_sector[merged[0]])
            f2 = find(d.face_of_sector[merged[1]])
            parent[f1] = f2
        return {i: find(i) for i in parent}

    def _resolved_face_at(self, sector: Dart) -> int:
        return self._face_merge[self.diagram.face_of_sector[sector]]

    def circle_side_faces(self, i: int) -> tuple[int, int]:
        """(left, right) resolved-face ids along the canonical traversal."""
        circ = self.circles[i]
        if circ.is_free_loop:
            raise ValueError("free loops have no crossing-level faces")
        c, s = circ.trace[0]
        return (
            self._resolved_face_at((c, (s - 1) % 4)),
            self._resolved_face_at((c, s)),
        )

    @cached_property
    def _coloring(self) -> tuple[dict[int, int], dict[int, int]]:
        """Per crossing-component: resolved-face colors and outer face ids.

        Returns (face_color, outer_of_component) where outer_of_component is
        keyed by crossing-component index. The two-coloring flips across
        every circle; the outer face of each component is color 0.
        """
        d = self.diagram
        face_color: dict[int, int] = {}
        outer: dict[int, int] = {}
        comp_of_crossing = {}
        for ci, comp in enumerate(d.crossing_components):
            for c in comp:
                comp_of_crossing[c] = ci
        # adjacency: each crossing circle separates its two side faces
        adj: dict[int, set[int]] = {}
        for i, circ in enumerate(self.circles):
            if circ.is_free_loop:
                continue
            l, r = self.circle_side_faces(i)
            adj.setdefault(l, set()).add(r)
            adj.setdefault(r, set()).add(l)
        for ci, comp in enumerate(d.crossing_components):
            comp_edges = [
                e for e in d.crossing_edges if d.occurrences[e][0][0] in set(comp)
            ]
            e0 = min(comp_edges)
            c, s = min(d.occurrences[e0])
            out_face = self._resolved_face_at((c, (s - 1) % 4))
            outer[ci] = out_face
            stack = [out_face]
            face_color[out_face] = 0
            while stack:
                f = stack.pop()
                for g in sorted(adj.get(f, ())):
                    if g in face_color:
                        if face_color[g] != 1 - face_color[f]:
                            raise InternalInvariantError(
                                "resolved face structure is not two-colorable"
                            )
                    else:
                        face_color[g] = 1 - face_color[f]
                        stack.append(g)
        return face_color, outer

    def nesting_parity(self, i: int) -> int:
        """Color of the face left of circle i under its canonical traversal.

        Free loops sit in the unbounded region and get parity 0.
        """
        circ = self.circles[i]
        if circ.is_free_loop:
            return 0
        face_color, _ = self._coloring
        left, _ = self.circle_side_faces(i)
        return face_color[left]

    def left_color_along(self, i: int, along_reference: bool) -> int:
        """Color on the left of circle i traversed with (or against) the
        canonical trace direction. Free loops: canonical = counterclockwise,
        whose left side is the bounded interior (color 1)."""
        circ = self.circles[i]
        if circ.is_free_loop:
            return 1 if along_reference else 0
        face_color, _ = self._coloring
        left, right = self.circle_side_faces(i)
        return face_color[left if along_reference else right]

    def traversal_matches_orientation(self, i: int, d_orientation) -> bool:
        """Whether the canonical trace of circle i runs along the edge
        directions induced by the given link orientation. Raises if the
        circle's edges are not coherently oriented (never happens for
        oriented resolutions)."""
        d = self.diagram
        o = _check_orientation(d, d_orientation)
        circ = self.circles[i]
        if circ.is_free_loop:
            # free loop reference direction is counterclockwise
            return o[d.component_map[circ.edges[0]]]
        votes = set()
        for dart in circ.trace:
            e = d.edge_at(dart)
            forward = d.edge_head[e] == dart  # trace arrives where edge arrives
            comp_dir = o[d.component_map[e]]
            votes.add(forward == comp_dir)
        if len(votes) != 1:
            raise InternalInvariantError(
                "circle is not coherently oriented by the link orientation"
            )
        return votes.pop()


def resolve(d: PlanarDiagram, bits) -> Resolution:
    """Resolve every crossing (bit 0 or 1) and trace the resulting circles."""
    b = tuple(int(x) for x in bits)
    if len(b) != d.crossing_count:
        raise PDValidationError(
            f"bitvector length {len(b)} != crossing count {d.crossing_count}"
        )
    if any(x not in (0, 1) for x in b):
        raise PDValidationError("bits must be 0 or 1")
    return Resolution(d, b)


def checkerboard_nesting(d: PlanarDiagram, bits) -> tuple[int, ...]:
    """Per-circle nesting parity of the resolved diagram (outer face 0)."""
    res = resolve(d, bits)
    return tuple(res.nesting_parity(i) for i in range(res.circle_count))
