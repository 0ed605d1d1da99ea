"""Simplicial complexes in facet form, free-face collapses, and the collapsed model.

Faces are sorted tuples of vertex indices. A complex stores only its maximal
faces; membership and ownership queries go through per-vertex facet bitmasks.
"""
from __future__ import annotations

import itertools
import logging
from math import comb
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .errors import InvalidArgumentError, PreconditionError, ResourceLimitError
from .graphs import Graph, FnVertex, core_vertices, fold_core_exponential, neighborhood, variant

__all__ = [
    "Complex",
    "neighborhood_complex",
    "delta_facet_families",
    "build_delta",
    "delta_via_collapse",
    "complex_to_json",
    "complex_from_json",
    "DEFAULT_MAX_FACES",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_FACES = 5_000_000

Face = Tuple[int, ...]


class Complex:
    """A simplicial complex given by its facets (pairwise incomparable maximal faces)."""

    __slots__ = ("labels", "facets", "_vmask")

    def __init__(self, labels: Sequence[str], facets: Iterable[Iterable[int]]):
        self.labels = tuple(labels)
        n = len(self.labels)
        canon = set()
        for f in facets:
            t = tuple(sorted(set(f)))
            if not t:
                continue
            if t[0] < 0 or t[-1] >= n:
                raise InvalidArgumentError(f"facet {t} has a vertex out of range")
            canon.add(t)
        ordered = sorted(canon)
        vmask = [0] * n
        for j, f in enumerate(ordered):
            for v in f:
                vmask[v] |= 1 << j
        keep = []
        for j, f in enumerate(ordered):
            m = vmask[f[0]]
            for v in f[1:]:
                m &= vmask[v]
            if m == (1 << j):
                keep.append(f)
        self.facets = tuple(keep)
        self._vmask = [0] * n
        for j, f in enumerate(self.facets):
            for v in f:
                self._vmask[v] |= 1 << j

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def used_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v in range(len(self.labels)) if self._vmask[v])

    def facets_containing(self, face: Sequence[int]) -> List[Face]:
        face = tuple(sorted(set(face)))
        if not face:
            return list(self.facets)
        if face[0] < 0 or face[-1] >= len(self.labels):
            raise InvalidArgumentError(f"face {face} has a vertex out of range")
        m = self._vmask[face[0]]
        for v in face[1:]:
            m &= self._vmask[v]
        out = []
        j = 0
        while m:
            if m & 1:
                out.append(self.facets[j])
            m >>= 1
            j += 1
        return out

    def contains(self, face: Sequence[int]) -> bool:
        face = tuple(sorted(set(face)))
        if not face:
            return True
        if face[0] < 0 or face[-1] >= len(self.labels):
            return False
        m = self._vmask[face[0]]
        for v in face[1:]:
            m &= self._vmask[v]
        return m != 0

    def face_count_estimate(self, dim: int) -> int:
        """Upper bound (before dedup) on the number of faces of one dimension."""
        return sum(comb(len(f), dim + 1) for f in self.facets)

    def iter_faces_of_dim(self, dim: int) -> Iterator[Face]:
        """All faces of one dimension, each yielded once (owned by its first facet)."""
        k = dim + 1
        for j, facet in enumerate(self.facets):
            if len(facet) < k:
                continue
            jb = 1 << j
            vmask = self._vmask
            for face in itertools.combinations(facet, k):
                m = vmask[face[0]]
                for v in face[1:]:
                    m &= vmask[v]
                if m & (jb - 1) == 0:
                    yield face

    def faces_by_dim(self, maxdim: int, max_faces: int = DEFAULT_MAX_FACES) -> List[List[Face]]:
        """Faces of each dimension 0..maxdim, lexicographically sorted per dimension."""
        total = sum(self.face_count_estimate(d) for d in range(maxdim + 1))
        if total > max_faces:
            big = max((len(f) for f in self.facets), default=0)
            raise ResourceLimitError(
                f"enumerating faces up to dim {maxdim} needs ~{total} steps "
                f"(largest facet has {big} vertices), over the bound {max_faces}",
                bound=max_faces)
        out = []
        for d in range(maxdim + 1):
            faces = sorted(self.iter_faces_of_dim(d))
            log.debug("dim %d: %d faces", d, len(faces))
            out.append(faces)
        return out

    def faces_up_to(self, maxdim: int, max_faces: int = DEFAULT_MAX_FACES) -> List[Face]:
        """Every face of dimension <= maxdim, deduplicated and sorted lexicographically."""
        merged = [f for faces in self.faces_by_dim(maxdim, max_faces) for f in faces]
        merged.sort()
        return merged

    def is_free_pair(self, face: Sequence[int], facet: Sequence[int]) -> bool:
        """True iff `facet` is a facet of the complex and the only one containing `face`."""
        face = tuple(sorted(set(face)))
        facet = tuple(sorted(set(facet)))
        if not face or not set(face) < set(facet):
            raise InvalidArgumentError(f"{face} is not a proper nonempty subset of {facet}")
        owners = self.facets_containing(face)
        return owners == [facet]

    def elementary_collapse(self, face: Sequence[int], facet: Sequence[int]) -> "Complex":
        """Remove the interval between a free face and its unique facet."""
        face = tuple(sorted(set(face)))
        facet = tuple(sorted(set(facet)))
        if not self.is_free_pair(face, facet):
            raise PreconditionError(f"{face} is not a free face of {facet}")
        new_facets = [f for f in self.facets if f != facet]
        for s in face:
            new_facets.append(tuple(v for v in facet if v != s))
        return Complex(self.labels, new_facets)

    def collapse_free_family(self, facet: Sequence[int], xs: Sequence[int],
                             ys: Sequence[int]) -> "Complex":
        """Collapse a facet xs+ys down to the stars {x}+ys, one x at a time.

        Requires every pair {x_i, x_j} to be a free face at its step; the
        intermediate facet containing the pair is derived from the collapse
        order, and each step is checked before it runs.
        """
        xs = list(xs)
        ys = list(ys)
        facet = tuple(sorted(set(facet)))
        if sorted(xs + ys) != list(facet):
            raise InvalidArgumentError("xs + ys must partition the facet")
        if len(xs) < 2:
            raise InvalidArgumentError("need at least two x vertices to collapse")
        cur = self
        t = len(xs)
        for i in range(t - 1):
            base = [v for v in facet if v not in xs[:i]]
            for j in range(i + 1, t):
                gone = set(xs[i + 1:j])
                target = tuple(v for v in base if v not in gone)
                pair = tuple(sorted((xs[i], xs[j])))
                if not cur.is_free_pair(pair, target):
                    raise PreconditionError(
                        f"pair {pair} is not a free face of {target} at step ({i},{j})")
                cur = cur.elementary_collapse(pair, target)
        return cur

    def __eq__(self, other) -> bool:
        return (isinstance(other, Complex)
                and self.labels == other.labels and self.facets == other.facets)

    def __hash__(self):
        return hash((self.labels, self.facets))

    def __repr__(self) -> str:
        return f"Complex({len(self.labels)} vertices, {len(self.facets)} facets, dim {self.dim})"


def neighborhood_complex(G: Graph) -> Complex:
    """Facets are the maximal neighborhoods N(v); vertices with no neighbors drop out."""
    facets = []
    for v in range(G.vertex_count):
        nb = neighborhood(G, [v])
        if nb:
            facets.append(nb)
    return Complex(G.labels, facets)


def _core_index(n: int) -> Tuple[List[FnVertex], Dict[Tuple[int, ...], int]]:
    verts = core_vertices(n + 1, n)
    return verts, {v.values: i for i, v in enumerate(verts)}


def delta_facet_families(n: int) -> Dict[str, List[Face]]:
    """The four facet families of the collapsed model on the core of K_{n+1}^{K_n}.

    M1: {f, f_s, <x>} for injective f missing x and each position s.
    A1: {<1>, <y>, g} for 1 and y in the image of g, y != 1.
    A2: {<2>, <y>, g} for 2 and y in the image of g, 1 not in the image, y != 2.
    A3: every n-subset of the n+1 constants.
    """
    if n < 3:
        raise InvalidArgumentError("the collapsed model is defined for n >= 3")
    verts, index = _core_index(n)
    m1: List[Face] = []
    a1: List[Face] = []
    a2: List[Face] = []
    for i, f in enumerate(verts):
        if not (f.is_injective and not f.is_constant):
            continue
        x = f.missing_values(n + 1)[0]
        for s in range(1, n + 1):
            fs = index[variant(f, s, x).values]
            m1.append(tuple(sorted((i, fs, x - 1))))
        im = f.image
        if 1 in im:
            for y in sorted(im - {1}):
                a1.append(tuple(sorted((0, y - 1, i))))
        else:
            for y in sorted(im - {2}):
                a2.append(tuple(sorted((1, y - 1, i))))
    a3 = [tuple(sorted(c)) for c in itertools.combinations(range(n + 1), n)]
    return {"M1": sorted(m1), "A1": sorted(a1), "A2": sorted(a2), "A3": sorted(a3)}


def build_delta(n: int) -> Complex:
    """The collapsed model itself, built directly from its facet families."""
    fams = delta_facet_families(n)
    labels = [v.label() for v in core_vertices(n + 1, n)]
    return Complex(labels, [f for fam in fams.values() for f in fam])


def delta_via_collapse(n: int) -> Complex:
    """Reach the collapsed model from the neighborhood complex by checked collapses.

    Stage 1 collapses each neighborhood facet to triangles through its center.
    Stage 2 collapses each constants-plus-injective facet onto its anchor
    constant (<1> when the injective map covers 1, else <2>). Every step is
    validated as an elementary collapse, so this doubles as a proof trace.
    """
    if n < 3:
        raise InvalidArgumentError("the collapse cascade is defined for n >= 3")
    verts, index = _core_index(n)
    G = fold_core_exponential(n + 1, n)
    C = neighborhood_complex(G)

    for i, f in enumerate(verts):
        if not (f.is_injective and not f.is_constant):
            continue
        x = f.missing_values(n + 1)[0]
        xs = sorted(index[variant(f, s, x).values] for s in range(1, n + 1))
        facet = tuple(sorted(xs + [i, x - 1]))
        C = C.collapse_free_family(facet, xs, [i, x - 1])
    for y in range(1, n + 2):
        xs = sorted(i for i, f in enumerate(verts)
                    if f.is_injective and not f.is_constant and y not in f.image)
        ys = [z - 1 for z in range(1, n + 2) if z != y]
        facet = tuple(sorted(xs + ys))
        C = C.collapse_free_family(facet, xs, ys)

    for i, f in enumerate(verts):
        if not (f.is_injective and not f.is_constant):
            continue
        im = sorted(f.image)
        anchor = 1 if 1 in f.image else 2
        rest = [y for y in im if y != anchor]
        for a in range(len(rest) - 1):
            for b in range(a + 1, len(rest)):
                pair = tuple(sorted((rest[a] - 1, rest[b] - 1, i)))
                owners = C.facets_containing(pair)
                if len(owners) != 1:
                    raise PreconditionError(
                        f"face {pair} should have a unique facet, found {len(owners)}")
                C = C.elementary_collapse(pair, owners[0])
    return C


def complex_to_json(C: Complex) -> dict:
    return {
        "vertex_labels": list(C.labels),
        "facets": [list(f) for f in C.facets],
    }


def complex_from_json(data: dict) -> Complex:
    try:
        labels = list(data["vertex_labels"])
        facets = [[int(v) for v in f] for f in data["facets"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"malformed complex JSON: {exc}") from exc
    return Complex(labels, facets)
