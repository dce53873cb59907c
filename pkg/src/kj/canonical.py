"""Canonical cycles of the filtered theory, one per link orientation.

On the oriented resolution every circle receives one of the two idempotent-
like labels

    a = v- + v+,      b = v- - v+,

chosen by the color of the region to the circle's left when traversed with
its induced direction (colors from the checkerboard structure, outer face
0; left color 1 gives a). Circles touching at a crossing see the two sides
of one smoothing arc, so they always receive opposite labels and the chain
is killed by every merge, making it a cycle.

The rescaled generator multiplies by 2^((w - k)/2), with w the writhe and
k the circle count of the oriented resolution; this lives in Q(sqrt2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cube import ChainComplex, Gen, V_MINUS, V_PLUS, build_complex
from .diagram import (
    PlanarDiagram,
    all_orientations,
    oriented_resolution,
    resolve,
    writhe,
)
from .errors import InternalInvariantError, PDValidationError
from .homology import FieldHomology
from .rings import QQ, QSQRT2, Ring, half_power_of_two
from .sparse import SparseMatrix, rank as matrix_rank

__all__ = [
    "LABEL_A",
    "LABEL_B",
    "CanonicalGenerator",
    "lee_generator",
    "rescaled_generator",
    "canonical_chain",
    "verify_basis",
    "mod4_types",
]

LABEL_A = "a"
LABEL_B = "b"

# expansion of the two labels in the (v+, v-) basis: label -> {v_label: coeff}
_EXPANSION = {
    LABEL_A: {V_MINUS: 1, V_PLUS: 1},
    LABEL_B: {V_MINUS: 1, V_PLUS: -1},
}


@dataclass
class CanonicalGenerator:
    """The canonical cycle of one orientation, with its rescaling data."""

    diagram: PlanarDiagram
    orientation: tuple[bool, ...]
    bits: tuple[int, ...]
    labels: tuple[str, ...]  # a/b per circle of the oriented resolution
    scale_exponent: Fraction  # (w - k)/2

    def chain(self, complex_: ChainComplex) -> dict:
        """The raw cycle as a chain of ``complex_`` (any ring, t = 1)."""
        return _expand_labels(complex_, self.bits, self.labels, rescale=False)

    def rescaled_chain(self, complex_: ChainComplex) -> dict:
        """The rescaled cycle; requires the Q(sqrt2) complex."""
        if complex_.ring is not QSQRT2:
            raise ValueError("rescaled generators live over Q(sqrt2)")
        return _expand_labels(complex_, self.bits, self.labels, rescale=True)


def _expand_labels(complex_, bits, labels, rescale: bool) -> dict:
    ring = complex_.ring
    chain: dict[Gen, object] = {}
    k = len(labels)
    stack = [((), ring.one)]
    for lab in labels:
        new = []
        for prefix, coeff in stack:
            for vlab, c in _EXPANSION[lab].items():
                new.append((prefix + (vlab,), coeff * ring.from_int(c)))
        stack = new
    for tup, coeff in stack:
        chain[(bits, tup)] = coeff
    if rescale:
        d = complex_.diagram
        w = writhe(d)
        exp = w - k  # twice the exponent (w - k)/2
        factor = half_power_of_two(exp)
        chain = {g: factor * v for g, v in chain.items()}
    return chain


def lee_generator(
    d: PlanarDiagram, orientation, flip_colors: bool = False
) -> CanonicalGenerator:
    """Construct the canonical cycle data for one orientation.

    ``flip_colors`` swaps the global checkerboard convention; it exchanges
    the two labels on every circle and exists for convention tests.
    """
    if d.is_empty():
        raise PDValidationError("the empty diagram has no circles to label")
    o = tuple(orientation)
    bits = oriented_resolution(d, o)
    res = resolve(d, bits)
    labels = []
    for i in range(res.circle_count):
        along = res.traversal_matches_orientation(i, o)
        color = res.left_color_along(i, along)
        if flip_colors:
            color = 1 - color
        labels.append(LABEL_A if color == 1 else LABEL_B)
    k = res.circle_count
    w = writhe(d, o)
    return CanonicalGenerator(
        diagram=d,
        orientation=o,
        bits=bits,
        labels=tuple(labels),
        scale_exponent=Fraction(w - k, 2),
    )


def canonical_chain(complex_: ChainComplex, orientation, rescaled: bool = False) -> dict:
    """Chain of the canonical cycle in a t = 1 complex."""
    if complex_.t != 1:
        raise ValueError("canonical generators are cycles of the t = 1 complex")
    gen = lee_generator(complex_.diagram, orientation)
    return gen.rescaled_chain(complex_) if rescaled else gen.chain(complex_)


def rescaled_generator(gen: CanonicalGenerator, complex_: ChainComplex) -> dict:
    """The 2^((w-k)/2)-rescaled chain of a previously built generator."""
    return gen.rescaled_chain(complex_)


@dataclass
class BasisReport:
    diagram: PlanarDiagram
    ok: bool
    expected_rank: int
    homology_rank: int
    coordinates: SparseMatrix  # homology coordinates of each canonical class

    def to_json(self):
        return {
            "ok": self.ok,
            "expected_rank": self.expected_rank,
            "homology_rank": self.homology_rank,
            "matrix": self.coordinates.to_json(),
        }


def verify_basis(d: PlanarDiagram, ring: Ring | None = None) -> BasisReport:
    """Check that the canonical classes freely generate the t = 1 homology.

    Returns the change-of-basis matrix from canonical classes to the
    computed homology basis; a failure indicates a labeling-rule bug.
    """
    ring = ring or QQ
    complex_ = build_complex(d, 1, ring)
    fh = FieldHomology(complex_)
    orientations = all_orientations(d)
    expected = len(orientations)
    cols: list[tuple[int, dict]] = []
    for o in orientations:
        chain = canonical_chain(complex_, o)
        if complex_.apply_differential(chain):
            raise InternalInvariantError(
                f"canonical chain of {o} is not a cycle"
            )
        cols.append(fh.reduce_chain(chain))
    rank = fh.total_rank()
    # full-rank check: the classes must be independent and span
    offset: dict[int, int] = {}
    run = 0
    for i in sorted(fh.reps):
        offset[i] = run
        run += fh.rank(i)
    m = SparseMatrix(run, expected, ring)
    for j, (i, coords) in enumerate(cols):
        for kk, v in coords.items():
            m.set(offset[i] + kk, j, v)
    ok = expected == rank and matrix_rank(m) == expected
    return BasisReport(d, ok, expected, rank, m)


def mod4_types(d: PlanarDiagram) -> tuple[int, int]:
    """q residues mod 4 of (sbar_o + sbar_o') and (sbar_o - sbar_o') for a knot.

    Both combinations must be homogeneous mod 4 and their residues differ
    by 2; raises otherwise.
    """
    if d.component_count != 1:
        raise PDValidationError("mod-4 types are stated for knots")
    complex_ = build_complex(d, 1, QSQRT2)
    o = (True,)
    oprime = (False,)
    plus = _combine(complex_, o, oprime, 1)
    minus = _combine(complex_, o, oprime, -1)
    out = []
    for chain in (plus, minus):
        residues = {complex_.q_of(g) % 4 for g in chain}
        if len(residues) != 1:
            raise InternalInvariantError(
                "canonical combination is not homogeneous mod 4"
            )
        out.append(residues.pop())
    if (out[0] - out[1]) % 4 != 2:
        raise InternalInvariantError("mod-4 residues do not differ by 2")
    return out[0], out[1]


def _combine(complex_, o1, o2, sign: int) -> dict:
    c1 = canonical_chain(complex_, o1, rescaled=True)
    c2 = canonical_chain(complex_, o2, rescaled=True)
    ring = complex_.ring
    out = dict(c1)
    for g, v in c2.items():
        s = out.get(g, ring.zero) + ring.from_int(sign) * v
        if ring.is_zero(s):
            out.pop(g, None)
        else:
            out[g] = s
    return out
