from itertools import combinations_with_replacement, product

import pytest

from hypercover.cover import CoverFamily, GridSpec, Hyperplane, appendix_cover, verify_almost_cover
from hypercover.errors import BudgetExceeded
from hypercover.search import EXACT, certify, enumerate_candidates, find_cover

H = Hyperplane


def brute_planes(g, excluded, bound):
    """All hyperplanes with small integer data meeting >= n grid points in general position."""
    import numpy as np

    pts = [p for p in g.points() if p != excluded]
    out = set()
    for coeffs in product(range(-bound, bound + 1), repeat=g.n):
        if not any(coeffs):
            continue
        for rhs in range(-bound * g.m * g.n, bound * g.m * g.n + 1):
            h = H(coeffs, rhs)
            if h.contains(excluded):
                continue
            on = [p for p in pts if h.contains(p)]
            if len(on) < g.n:
                continue
            diffs = np.array([[a - b for a, b in zip(p, on[0])] for p in on[1:]])
            if np.linalg.matrix_rank(diffs) == g.n - 1:
                out.add(h)
    return out


def test_candidates_small():
    assert set(enumerate_candidates(GridSpec(1, 2)).planes) == {H((1, 0), 1), H((0, 1), 1), H((1, 1), 1)}
    assert enumerate_candidates(GridSpec(1, 1)).planes == [H((1,), 1)]


@pytest.mark.parametrize("g,excluded,bound", [(GridSpec(2, 2), (0, 0), 4), (GridSpec(2, 2), (1, 1), 4), (GridSpec(1, 3), (0, 0, 0), 2)])
def test_candidates_match_brute_force(g, excluded, bound):
    cands = enumerate_candidates(g, excluded)
    assert len(set(cands.planes)) == len(cands.planes)
    assert not any(h.contains(excluded) for h in cands.planes)
    assert set(cands.planes) == brute_planes(g, excluded, bound)


def test_candidates_include_appendix_planes():
    planes = set(enumerate_candidates(GridSpec(2, 2)).planes)
    assert set(appendix_cover(2).planes) <= planes
    assert set(appendix_cover(3).planes) <= set(enumerate_candidates(GridSpec(2, 3)).planes)


def test_incidence_consistent():
    c = enumerate_candidates(GridSpec(2, 2))
    for h, inc in zip(c.planes, c.incidence):
        assert [c.points[i] for i in inc] == [p for p in c.points if h.contains(p)]


def test_find_cover_k1():
    g = GridSpec(1, 2)
    assert find_cover(g, 1, 1) is None
    fam = find_cover(g, 1, 2)
    assert fam == CoverFamily([(H((1, 0), 1), 1), (H((0, 1), 1), 1)])


def brute_min(g, k, cands):
    for size in range(1, 3 * g.m * g.n + 1):
        for combo in combinations_with_replacement(range(len(cands)), size):
            fam = CoverFamily([(cands.planes[i], 1) for i in combo])
            if verify_almost_cover(g, k, fam).satisfied:
                return size
    return None


@pytest.mark.parametrize("m,n,k", [(1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 3, 1), (1, 3, 2)])
def test_search_agrees_with_brute_force(m, n, k):
    g = GridSpec(m, n)
    cands = enumerate_candidates(g)
    best = brute_min(g, k, cands)
    assert find_cover(g, k, best - 1, candidates=cands) is None
    fam = find_cover(g, k, best, candidates=cands)
    assert fam is not None and fam.size() == best


def test_pruning_does_not_change_answer():
    g = GridSpec(2, 2)
    for size in (8, 9):
        a = find_cover(g, 3, size)
        b = find_cover(g, 3, size, prune=False)
        assert (a is None) == (b is None)


def test_find_cover_2_2_3():
    g = GridSpec(2, 2)
    fam = find_cover(g, 3, 9)
    assert fam.size() == 9 and verify_almost_cover(g, 3, fam).satisfied
    assert find_cover(g, 3, 8) is None


@pytest.mark.parametrize("m,n,k,value", [(2, 2, 3, 9), (1, 2, 2, 3), (2, 2, 2, 6), (3, 2, 2, 9), (1, 2, 3, 5)])
def test_certify_exact(m, n, k, value):
    cert = certify(m, n, k)
    assert cert.value == value and cert.status == EXACT
    assert verify_almost_cover(GridSpec(m, n), k, cert.witness).satisfied
    assert cert.witness.size() == value


def test_certify_with_appendix_witness():
    cert = certify(2, 4, 3, use_appendix=True)
    assert cert.value == 13 and cert.status == EXACT and cert.source == "appendix"


def test_certify_rejects_bad_witness():
    with pytest.raises(ValueError):
        certify(2, 2, 3, witness=appendix_cover(2).without(H((1, 1), 2)))


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as info:
        certify(2, 3, 3, max_nodes=50)
    assert info.value.nodes >= 50
    assert info.value.partial["lower"] == 11


def test_certificate_json():
    import json

    d = json.loads(certify(1, 2, 2).to_json())
    assert d["value"] == 3 and d["status"] == "exact"


def test_minimum_depends_on_excluded_point():
    # relative to grid-spanned candidates: the centre of {0,1,2}^2 needs one more line
    g = GridSpec(2, 2)
    assert find_cover(g, 3, 9, (1, 1)) is None
    assert find_cover(g, 3, 10, (1, 1)) is not None
    assert find_cover(g, 3, 9, (2, 1)) is not None
