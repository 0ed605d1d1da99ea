from __future__ import annotations

import itertools
import math

import pytest

from expmorse.complexes import (Complex, build_delta, complex_from_json,
                                complex_to_json, delta_facet_families,
                                delta_via_collapse, neighborhood_complex)
from expmorse.errors import (InvalidArgumentError, PreconditionError,
                             ResourceLimitError)
from expmorse.graphs import complete_graph, cycle_graph


def _brute_faces(C: Complex):
    out = set()
    for f in C.facets:
        for k in range(1, len(f) + 1):
            out.update(itertools.combinations(f, k))
    return out


def test_constructor_canonicalizes():
    C = Complex(["a", "b", "c"], [(2, 0), (0, 2), (1,), (0,)])
    # contained facets dropped, duplicates merged, vertices sorted
    assert C.facets == ((0, 2), (1,))
    assert C.dim == 1


def test_faces_by_dim_matches_subset_enumeration():
    for C in [neighborhood_complex(cycle_graph(5)), build_delta(3)]:
        want = _brute_faces(C)
        got = set()
        levels = C.faces_by_dim(C.dim)
        for level in levels:
            got.update(level)
        assert got == want
        for d, level in enumerate(levels):
            assert list(level) == sorted(level)
            assert all(len(f) == d + 1 for f in level)
            assert set(C.iter_faces_of_dim(d)) == {f for f in want if len(f) == d + 1}


def test_face_count_estimate_upper_bounds_actual():
    C = build_delta(3)
    for d in range(C.dim + 1):
        assert C.face_count_estimate(d) >= len(list(C.iter_faces_of_dim(d)))


def test_faces_budget_enforced():
    C = build_delta(3)
    with pytest.raises(ResourceLimitError):
        C.faces_by_dim(2, max_faces=10)


def test_contains_and_facets_containing():
    C = Complex(list("abcd"), [(0, 1, 2), (1, 2, 3)])
    assert C.contains((1, 2))
    assert not C.contains((0, 3))
    assert C.facets_containing((1, 2)) == [(0, 1, 2), (1, 2, 3)]
    assert C.facets_containing((0, 1)) == [(0, 1, 2)]


def test_free_pair_oracle():
    C = Complex(list("abcd"), [(0, 1, 2), (1, 2, 3)])
    assert C.is_free_pair((0, 1), (0, 1, 2))
    assert not C.is_free_pair((1, 2), (0, 1, 2))  # two owners
    with pytest.raises(InvalidArgumentError):
        C.is_free_pair((0, 1, 2), (0, 1, 2))


def test_elementary_collapse_removes_interval():
    C = Complex(list("abcd"), [(0, 1, 2), (1, 2, 3)])
    D = C.elementary_collapse((0, 1), (0, 1, 2))
    assert not D.contains((0, 1)) and not D.contains((0, 1, 2))
    assert D.contains((0, 2))
    with pytest.raises(PreconditionError):
        C.elementary_collapse((1, 2), (0, 1, 2))


def test_collapse_free_family_full_simplex_to_point():
    C = Complex(list("abc"), [(0, 1, 2)])
    D = C.collapse_free_family((0, 1, 2), [1, 2], [0])
    # collapsing away vertex layers leaves a cone fragment, same homotopy type
    assert D.contains((0,))
    assert not D.contains((1, 2))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_delta_family_counts(n):
    fams = delta_facet_families(n)
    assert list(fams) == ["M1", "A1", "A2", "A3"]
    assert len(fams["M1"]) == math.factorial(n + 1) * n
    assert len(fams["A1"]) == n * math.factorial(n) * (n - 1)
    assert len(fams["A2"]) == math.factorial(n) * (n - 1)
    assert len(fams["A3"]) == n + 1
    seen = set()
    for fam in fams.values():
        for face in fam:
            assert len(face) == 3 or (len(face) == n and fam is fams["A3"])
            assert face not in seen
            seen.add(face)


def test_delta_n3_exact_counts():
    fams = delta_facet_families(3)
    assert tuple(len(fams[k]) for k in ("M1", "A1", "A2", "A3")) == (72, 36, 12, 4)


@pytest.mark.parametrize("n", [3, 4])
def test_collapse_route_agrees_with_direct_build(n):
    assert delta_via_collapse(n) == build_delta(n)


def test_neighborhood_complex_facets_are_maximal_neighborhoods():
    g = cycle_graph(6)
    C = neighborhood_complex(g)
    want = set()
    hoods = [tuple(g.neighbors(v)) for v in range(6)]
    for h in hoods:
        if h and not any(set(h) < set(h2) for h2 in hoods):
            want.add(h)
    assert set(C.facets) == want


def test_neighborhood_complex_of_complete_graph():
    C = neighborhood_complex(complete_graph(4))
    assert C.facets == ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))


def test_complex_json_round_trip():
    C = build_delta(3)
    assert complex_from_json(complex__to_json_dict := complex_to_json(C)) == C
    assert set(complex__to_json_dict) == {"vertex_labels", "facets"}
    with pytest.raises(InvalidArgumentError):
        complex_from_json({"facets": [[0]]})
