"""Discrete Morse machinery: face posets, matchings, critical cells, path parities.

A matching pairs a cell with a cofacet; acyclic matchings induce a chain
complex on the critical cells whose boundary entries count alternating
descent paths mod 2. Parities are computed by memoized traversal of the
descent relation; an exhaustive path enumerator is kept for cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .complexes import Complex, Face
from .errors import (InternalConsistencyError, InvalidArgumentError,
                     ResourceLimitError)
from .gf2 import Gf2Matrix

__all__ = [
    "FacePoset",
    "Matching",
    "CriticalSet",
    "AcyclicityResult",
    "face_poset",
    "validate_matching",
    "is_acyclic",
    "critical_cells",
    "DescentCache",
    "alternating_path_parity",
    "morse_boundaries",
    "enumerate_alternating_paths",
    "matching_to_csv",
    "DEFAULT_MAX_CELLS",
]

DEFAULT_MAX_CELLS = 2_000_000


def _subfaces(cell: Face) -> List[Face]:
    return [cell[:t] + cell[t + 1:] for t in range(len(cell))]


class FacePoset:
    """All nonempty faces of a complex, grouped by dimension."""

    __slots__ = ("labels", "cells_by_dim", "_all")

    def __init__(self, labels: Sequence[str], cells_by_dim: Sequence[Sequence[Face]]):
        self.labels = tuple(labels)
        self.cells_by_dim = tuple(tuple(level) for level in cells_by_dim)
        self._all = frozenset(c for level in self.cells_by_dim for c in level)

    @property
    def dim(self) -> int:
        return len(self.cells_by_dim) - 1

    @property
    def size(self) -> int:
        return len(self._all)

    def __contains__(self, cell: Face) -> bool:
        return cell in self._all

    def cells(self, d: int) -> Tuple[Face, ...]:
        return self.cells_by_dim[d] if 0 <= d <= self.dim else ()

    def __repr__(self) -> str:
        return f"FacePoset({self.size} cells, dim {self.dim})"


def face_poset(C: Complex, max_cells: int = DEFAULT_MAX_CELLS) -> FacePoset:
    """Materialize every face of the complex. Meant for small complexes."""
    return FacePoset(C.labels, C.faces_by_dim(C.dim, max_faces=max_cells))


class Matching:
    """A pairing of cells with cofacets, stored as lower cell -> upper cell."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: Dict[Face, Face]):
        self.pairs = dict(pairs)

    def reverse(self) -> Dict[Face, Face]:
        rev: Dict[Face, Face] = {}
        for low, up in self.pairs.items():
            if up in rev:
                raise InternalConsistencyError(f"cell {up} is matched twice")
            rev[up] = low
        return rev

    def matched(self) -> Set[Face]:
        return set(self.pairs) | set(self.pairs.values())

    def __len__(self) -> int:
        return len(self.pairs)

    def __repr__(self) -> str:
        return f"Matching({len(self.pairs)} pairs)"


def validate_matching(P: FacePoset, M: Matching) -> List[str]:
    """All structural violations, as messages; empty means the matching is valid."""
    bad = []
    seen_upper: Set[Face] = set()
    for low, up in M.pairs.items():
        if low not in P:
            bad.append(f"{low} is not a cell of the poset")
        if up not in P:
            bad.append(f"{up} is not a cell of the poset")
        if len(up) != len(low) + 1 or not set(low) < set(up):
            bad.append(f"{low} -> {up} is not a cover relation")
        if up in seen_upper:
            bad.append(f"{up} is the upper cell of two pairs")
        seen_upper.add(up)
    overlap = set(M.pairs) & seen_upper
    for cell in sorted(overlap):
        bad.append(f"{cell} appears on both sides of the matching")
    return bad


@dataclass(frozen=True)
class AcyclicityResult:
    acyclic: bool
    cycle: Optional[Tuple[Face, ...]] = None


def is_acyclic(P: FacePoset, M: Matching) -> AcyclicityResult:
    """Check the matched digraph (up along pairs, down to other facets) for cycles.

    A directed cycle must alternate up and down moves through matched pairs,
    so it suffices to search the induced graph on lower cells. On failure the
    full alternating cell cycle is returned.
    """
    pairs = M.pairs
    color: Dict[Face, int] = {}
    parent: Dict[Face, Face] = {}
    for root in pairs:
        if color.get(root):
            continue
        stack: List[Tuple[Face, int]] = [(root, 0)]
        while stack:
            x, adv = stack.pop()
            if adv == 0:
                if color.get(x) == 2:
                    continue
                color[x] = 1
            succs = [y for y in _subfaces(pairs[x]) if y != x and y in pairs]
            if adv < len(succs):
                stack.append((x, adv + 1))
                y = succs[adv]
                st = color.get(y, 0)
                if st == 1:
                    cycle = [y]
                    cur = x
                    while cur != y:
                        cycle.append(cur)
                        cur = parent[cur]
                    cycle.append(y)
                    cycle.reverse()
                    full: List[Face] = []
                    for z in cycle[:-1]:
                        full.extend((z, pairs[z]))
                    full.append(cycle[0])
                    return AcyclicityResult(False, tuple(full))
                if st == 0:
                    parent[y] = x
                    stack.append((y, 0))
            else:
                color[x] = 2
    return AcyclicityResult(True, None)


@dataclass(frozen=True)
class CriticalSet:
    """Unmatched cells per dimension, each level in lexicographic order."""

    by_dim: Tuple[Tuple[Face, ...], ...]

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self.by_dim)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def cells(self, d: int) -> Tuple[Face, ...]:
        return self.by_dim[d] if 0 <= d < len(self.by_dim) else ()


def critical_cells(P: FacePoset, M: Matching) -> CriticalSet:
    matched = M.matched()
    return CriticalSet(tuple(
        tuple(c for c in P.cells(d) if c not in matched)
        for d in range(P.dim + 1)))


class DescentCache:
    """Memoized alternating-descent supports for a fixed acyclic matching.

    For a cell x, sets(x) is the set of critical cells of the same dimension
    reachable from x by descent with odd path count. The boundary support of
    a critical cell is the XOR of its facets' sets, which includes the
    direct facet case.
    """

    def __init__(self, P: FacePoset, M: Matching):
        self._pairs = M.pairs
        self._upper = M.reverse()
        self._memo: Dict[Face, FrozenSet[Face]] = {}

    def sets(self, cell: Face) -> FrozenSet[Face]:
        memo = self._memo
        if cell in memo:
            return memo[cell]
        expanding: Set[Face] = set()
        stack = [cell]
        while stack:
            x = stack[-1]
            if x in memo:
                expanding.discard(x)
                stack.pop()
                continue
            up = self._pairs.get(x)
            if up is None:
                memo[x] = frozenset((x,)) if x not in self._upper else frozenset()
                stack.pop()
                continue
            kids = [y for y in _subfaces(up) if y != x]
            missing = [y for y in kids if y not in memo]
            if missing:
                if x in expanding:
                    raise InternalConsistencyError(
                        f"descent from {x} depends on itself; matching is cyclic")
                expanding.add(x)
                stack.extend(missing)
                continue
            acc: Set[Face] = set()
            for y in kids:
                acc ^= memo[y]
            memo[x] = frozenset(acc)
            expanding.discard(x)
            stack.pop()
        return memo[cell]

    def boundary_support(self, tau: Face) -> FrozenSet[Face]:
        acc: Set[Face] = set()
        for y in _subfaces(tau):
            acc ^= self.sets(y)
        return frozenset(acc)


def alternating_path_parity(P: FacePoset, M: Matching, tau: Face, sigma: Face,
                            cache: Optional[DescentCache] = None) -> int:
    """Mod-2 count of alternating paths between critical cells of adjacent dimension."""
    if len(tau) != len(sigma) + 1:
        raise InvalidArgumentError("cells must sit in adjacent dimensions")
    matched = M.matched()
    if tau in matched or sigma in matched:
        raise InvalidArgumentError("parity is defined between critical cells")
    cache = cache or DescentCache(P, M)
    return 1 if sigma in cache.boundary_support(tau) else 0


def morse_boundaries(P: FacePoset, M: Matching,
                     cache: Optional[DescentCache] = None) -> List[Gf2Matrix]:
    """Boundary matrices of the critical-cell chain complex, dimensions 1..top.

    Rows and columns follow the critical-cell order (by dimension, then
    lexicographic). Dimensions with no critical cells yield zero-sized
    matrices so the chain stays index-aligned.
    """
    crit = critical_cells(P, M)
    counts = crit.counts
    top = max((d for d, c in enumerate(counts) if c), default=0)
    cache = cache or DescentCache(P, M)
    mats = []
    for d in range(1, top + 1):
        lows = crit.cells(d - 1)
        idx = {c: i for i, c in enumerate(lows)}
        cols = []
        for tau in crit.cells(d):
            bits = 0
            for sigma in cache.boundary_support(tau):
                bits |= 1 << idx[sigma]
            cols.append(bits)
        mats.append(Gf2Matrix.from_columns(cols, len(lows)))
    return mats


def enumerate_alternating_paths(P: FacePoset, M: Matching, start: Face,
                                end: Optional[Face] = None,
                                max_paths: int = 100_000) -> List[Tuple[Face, ...]]:
    """Every alternating path from a critical cell down to critical cells.

    Exhaustive and unmemoized, so only suitable for small inputs; used to
    cross-check the parity computation. Paths are full cell sequences
    (start, x1, pair(x1), ..., end); the direct-facet path has length 2.
    """
    pairs = M.pairs
    upper = M.reverse()
    out: List[Tuple[Face, ...]] = []

    def descend(x: Face, prefix: Tuple[Face, ...]):
        if len(out) >= max_paths:
            raise ResourceLimitError(f"more than {max_paths} alternating paths",
                                     bound=max_paths)
        up = pairs.get(x)
        if up is None:
            if x not in upper and (end is None or x == end):
                out.append(prefix + (x,))
            return
        for y in _subfaces(up):
            if y != x:
                descend(y, prefix + (x, up))

    for y in _subfaces(start):
        descend(y, (start,))
    return out


def matching_to_csv(P: FacePoset, M: Matching) -> str:
    """Matched pairs as CSV, cells rendered as space-joined vertex labels."""
    labels = P.labels
    lines = ["cell,matched_cell"]
    for low in sorted(M.pairs, key=lambda c: (len(c), c)):
        up = M.pairs[low]
        lines.append(" ".join(labels[v] for v in low) + ","
                     + " ".join(labels[v] for v in up))
    return "\n".join(lines) + "\n"
