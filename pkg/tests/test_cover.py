import pytest

from hypercover.cover import (
    BALL_SERRA,
    DEGREE_BOUND,
    TWO_COVER_EXACT,
    CoverFamily,
    CoverParseError,
    GridSpec,
    Hyperplane,
    appendix_cover,
    construct_layered_cover,
    construct_two_cover,
    coverage_count,
    lower_bound,
    upper_bound,
    verify_almost_cover,
)

H = Hyperplane


def test_hyperplane_normalization():
    assert H((2, 4), 6) == H((1, 2), 3)
    assert H((-1, 1), 0) == H((1, -1), 0)
    assert H((0, -3), -3) == H((0, 1), 1)
    assert H.from_rational(("1/2", "1/3"), 1) == H((3, 2), 6)
    with pytest.raises(ValueError):
        H((0, 0), 1)


def test_hyperplane_contains_and_str():
    h = H((1, 1, -1), 1)
    assert h.contains((1, 1, 1)) and not h.contains((0, 0, 0))
    assert str(h) == "x1 + x2 - x3 = 1"
    with pytest.raises(ValueError):
        h.contains((1, 1))


def test_coverage_count_examples():
    fam = appendix_cover(2)
    assert coverage_count(fam, (1, 1)) == 3
    assert coverage_count(CoverFamily(), (1, 1)) == 0
    assert coverage_count(CoverFamily({H.axis(0, 1, 2): 5}), (1, 0)) == 5


@pytest.mark.parametrize("n,size", [(2, 9), (3, 11), (4, 13)])
def test_appendix_covers(n, size):
    fam = appendix_cover(n)
    rep = verify_almost_cover(GridSpec(2, n), 3, fam)
    assert fam.size() == size
    assert rep.satisfied and rep.excluded_cover == 0 and rep.min_cover_excluding >= 3


def test_appendix_contents():
    assert H((1, 1, -1), 1) in appendix_cover(3).planes
    assert H((1, 1, 2), 2) in appendix_cover(3).planes
    assert H((1, -1, 1, 1), 1) in appendix_cover(4).planes
    assert H((1, 2, 1, 1), 2) in appendix_cover(4).planes
    with pytest.raises(ValueError):
        appendix_cover(5)


def test_verify_small_k1():
    fam = CoverFamily([(H.axis(0, 1, 2), 1), (H.axis(1, 1, 2), 1)])
    rep = verify_almost_cover(GridSpec(1, 2), 1, fam)
    assert rep.satisfied
    assert rep.per_point == {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 2}


def test_verify_reports_deficient_point():
    fam = appendix_cover(2).without(H((1, 1), 2))
    rep = verify_almost_cover(GridSpec(2, 2), 3, fam)
    assert not rep.satisfied
    assert (1, 1) in rep.deficient and rep.per_point[(1, 1)] == 2


def test_verify_fails_when_excluded_point_covered():
    fam = appendix_cover(2)
    rep = verify_almost_cover(GridSpec(2, 2), 3, fam, excluded=(1, 1))
    assert not rep.satisfied and rep.excluded_cover == 3


def test_verify_dimension_mismatch():
    with pytest.raises(ValueError):
        verify_almost_cover(GridSpec(2, 3), 3, appendix_cover(2))


def test_two_cover_examples():
    g = GridSpec(1, 2)
    fam = construct_two_cover(g)
    assert fam == CoverFamily([(H.axis(0, 1, 2), 1), (H.axis(1, 1, 2), 1), (H((1, 1), 1), 1)])
    fam = construct_two_cover(g, (1, 1))
    assert fam == CoverFamily([(H.axis(0, 0, 2), 1), (H.axis(1, 0, 2), 1), (H((1, 1), 1), 1)])
    assert verify_almost_cover(g, 2, fam, (1, 1)).satisfied
    fam = construct_two_cover(GridSpec(2, 2))
    assert fam.size() == 6 and verify_almost_cover(GridSpec(2, 2), 2, fam).satisfied


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [2, 3])
def test_two_cover_any_excluded_point(m, n):
    g = GridSpec(m, n)
    for a in g.points():
        fam = construct_two_cover(g, a)
        assert fam.size() == m * n + m
        assert verify_almost_cover(g, 2, fam, a).satisfied


def test_layered_examples():
    fam = construct_layered_cover(GridSpec(1, 2), 3)
    assert fam == CoverFamily([(H.axis(0, 1, 2), 1), (H.axis(1, 1, 2), 1), (H((1, 1), 1), 2), (H((1, 1), 2), 1)])
    assert construct_layered_cover(GridSpec(2, 2), 2).size() == 6
    fam = construct_layered_cover(GridSpec(2, 3), 3)
    assert fam.size() == 12 and verify_almost_cover(GridSpec(2, 3), 3, fam).satisfied
    assert upper_bound(2, 3, 3) == 12


def test_lower_bound_examples():
    assert lower_bound(2, 3, 3) == (11, DEGREE_BOUND)
    assert lower_bound(1, 5, 1) == (5, BALL_SERRA)
    assert lower_bound(3, 2, 2) == (9, TWO_COVER_EXACT)
    assert lower_bound(2, 3, 4) == (2 * 3 + 3 * 3 - 1, DEGREE_BOUND)
    # k = 4 needs n >= 3 for the stronger bound
    assert lower_bound(2, 2, 4) == (2 * 2 + 3 * 2, BALL_SERRA)
    assert lower_bound(2, 3, 5)[1] == BALL_SERRA


def test_cover_file_round_trip():
    fam = appendix_cover(4)
    assert CoverFamily.from_text(fam.to_text()) == fam
    assert CoverFamily.from_text("# c\n1 0 = 1\n0 1 = 1 x 2\n1 0 = 1 x 1\n") == CoverFamily(
        [(H.axis(0, 1, 2), 2), (H.axis(1, 1, 2), 2)])


@pytest.mark.parametrize("bad", ["1 0 1\n", "1 0 =\n", "1 0 = 1 x\n", "1 a = 2\n", "1 0 = 1\n1 0 0 = 1\n", "0 0 = 1\n", "1 0 = 1 x 0\n"])
def test_cover_file_parse_errors(bad):
    with pytest.raises(CoverParseError):
        CoverFamily.from_text(bad)


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(0, 2)
    assert GridSpec(2, 3).size() == 27
