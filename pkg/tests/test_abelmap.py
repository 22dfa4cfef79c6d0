import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levelseries.abelmap import (
    AbelClass,
    Divisor,
    DivisorError,
    EnumerationBoundExceeded,
    abel,
    compare_Pg,
    divisor_of_section,
    enumerate_Pg,
    section_divisor,
)
from levelseries.curvemodel import (
    CurveConfig,
    LimitSeries,
    fiber_sample,
    forget,
    phi_dn,
    phi_up,
    random_series,
    series_m,
    series_profile,
)
from levelseries.numfn import refine_fff
from levelseries.qlinalg import GF, QQ, projective_points

F2, F3 = GF(2), GF(3)
C12 = CurveConfig(F2, 1, 2)
ZERO, ONE, Y1, Z = (0, 0), (1, 0), (0, 1), (0, 1)
EXACT = LimitSeries.from_sections(C12, 0, [[(ONE, ONE)], [(ZERO, ONE)], [(ZERO, Z)]])
NONEXACT = LimitSeries.from_sections(C12, 0, [[(Y1, ZERO)], [(ZERO, ONE)], [(ZERO, Z)]])
QY = Divisor.points(QY=1)


def random_valid(seed):
    import random

    rng = random.Random(seed)
    F = rng.choice([F2, F3])
    d = rng.randint(1, 3)
    delta = rng.randint(1, 3)
    r = rng.randint(0, min(d, 1))
    return random_series(F, d, delta, r, seed, exact=rng.random() < 0.5)


# divisors of sections


def test_divisor_of_constant_section():
    assert section_divisor(C12, 0, ONE, ONE) == QY
    assert divisor_of_section(EXACT, 0, C12.level(0).coords(ONE, ONE)) == QY


def test_divisor_with_p_correction():
    D = section_divisor(C12, 1, Y1, ONE)
    assert D == Divisor.points(P=1)
    assert D.degree == 1


def test_invertible_levels_have_no_correction():
    cfg = CurveConfig(QQ, 3, 2)
    # f = y^q (1 + y), h = 1 + z (or 1 when q = 0) at level 2q
    for q in range(3):
        f = tuple(int(k in (q, q + 1)) for k in range(4))
        h = tuple(int(k == 0 or (k == 1 and q > 0)) for k in range(4))
        D = section_divisor(cfg, 2 * q, f, h)
        assert D.degree == 3
        assert D.kP == 0
        assert D.kQY == 3 - (q + 1)


def test_roots_are_kept_unfactored():
    cfg = CurveConfig(F3, 3, 1)
    # f = 2 + y^2, h = 2
    D = section_divisor(cfg, 0, (2, 0, 1, 0), (2, 0, 0, 0))
    assert D.uY == (2, 0, 1)
    assert D.kQY == 1 and D.kQZ == 0 and D.kP == 0
    D2 = section_divisor(cfg, 0, (1, 0, 2, 0), (1, 0, 0, 0))
    assert D2 == D  # scaling the section does not change D


def test_torsion_directions_refused():
    with pytest.raises(DivisorError, match="torsion directions"):
        section_divisor(C12, 1, Y1, ZERO)
    with pytest.raises(DivisorError, match="torsion directions"):
        section_divisor(C12, 1, ZERO, ONE)


def test_section_must_lie_in_series():
    with pytest.raises(DivisorError, match="not in V"):
        divisor_of_section(NONEXACT, 0, C12.level(0).coords(ONE, ONE))
    with pytest.raises(DivisorError):
        divisor_of_section(EXACT, 5, (1, 0))


def test_divisor_validation():
    with pytest.raises(DivisorError):
        Divisor((0, 1), 0, (1,), 0, 0)
    with pytest.raises(DivisorError):
        Divisor((1, 2), 0, (1,), 0, 0)
    with pytest.raises(DivisorError):
        Divisor((1,), -1, (1,), 0, 0)


# Abel map


def test_abel_examples():
    assert abel(3, Divisor.points(QY=3)) == AbelClass(3, 0)
    assert abel(3, Divisor.points(QZ=3)) == AbelClass(3, 0)
    D = Divisor.points(P=2, QZ=1)
    assert {abel(3, D, k) for k in range(3)} == {AbelClass(3, 0)}


def test_abel_rejects_wrong_degree():
    with pytest.raises(DivisorError):
        abel(2, QY)
    with pytest.raises(DivisorError):
        abel(1, QY, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_divisor_laws_on_random_series(seed):
    g = random_valid(seed)
    d = g.config.d
    res = enumerate_Pg(g)
    for D in res.points:
        assert D.degree == d
        assert min(D.kQY, D.kQZ, D.kP) >= 0
        for k in range(D.kP + 1):
            assert abel(d, D, k) == AbelClass(d, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_divisor_is_projective(seed, scale):
    g = random_valid(seed)
    F = g.field
    for i, V in enumerate(g.V):
        for s in projective_points(V):
            f, h = g.config.level(i).section(s)
            if not (any(f) and any(h)):
                continue
            t = scale % F.p or 1
            assert divisor_of_section(g, i, tuple(t * x % F.p for x in s)) == divisor_of_section(g, i, s)


def test_pushed_sections_always_lose_a_component():
    # the level-consistency property never has both divisors defined
    for seed in range(20):
        g = random_valid(seed)
        cfg = g.config
        for i in range(cfg.top):
            lev = cfg.level(i)
            for s in projective_points(g.V[i]):
                f, h = lev.section(s)
                assert not any(phi_up(cfg, i, f, h)[0])
            lev1 = cfg.level(i + 1)
            for s in projective_points(g.V[i + 1]):
                f, h = lev1.section(s)
                assert not any(phi_dn(cfg, i, f, h)[1])


# enumeration of P(g)


def test_enumerate_exact_desk_series():
    res = enumerate_Pg(EXACT)
    assert res.points == [QY] and res.S == [0] and res.exact
    assert res.by_level[1] == frozenset() and res.by_level[2] == frozenset()


def test_enumerate_nonexact_desk_series():
    res = enumerate_Pg(NONEXACT)
    assert res.points == [] and res.S == [] and not res.exact


def test_enumerate_requires_prime_field_and_bound():
    with pytest.raises(DivisorError):
        enumerate_Pg(_q_series())
    # cost (r+1)(d delta+1)p^(r+1) = 6 for the desk series
    assert enumerate_Pg(EXACT, bound=6).points == [QY]
    with pytest.raises(EnumerationBoundExceeded, match="bound 5"):
        enumerate_Pg(EXACT, bound=5)


def _q_series():
    from levelseries.qlinalg import Subspace

    cfg = CurveConfig(QQ, 1, 1)
    return LimitSeries(cfg, 0, (Subspace.span(QQ, 2, [(1, 0)]), Subspace.span(QQ, 2, [(0, 1)])))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_S_matches_profile(seed):
    g = random_valid(seed)
    res = enumerate_Pg(g)
    prof = series_profile(g)
    assert res.S == [i for i in range(g.config.top + 1) if prof.m(i) > 0]
    assert len(res.S) == sum(1 for m in series_m(g) if m > 0)
    # levels with m = 0 may still carry divisors once r >= 1, never the reverse
    for i in res.S:
        assert res.by_level[i]


# comparison under forgetting


def test_compare_exact_with_its_lift():
    g = forget(EXACT, 1)
    rep = compare_Pg(g, EXACT)
    assert rep["extra_components"] == [] and rep["points_equal"]
    assert rep["consistent"]


def test_compare_nonexact_with_exact_lift():
    g = forget(NONEXACT, 1)
    lift = fiber_sample(g, refine_fff(series_profile(g), 2, 1), 2)
    rep = compare_Pg(g, lift)
    assert rep["extra_components"] and rep["exact_prime"] and not rep["exact"]
    assert rep["included"] and not rep["points_equal"]
    assert rep["consistent"]


def test_compare_with_itself():
    rep = compare_Pg(NONEXACT, NONEXACT)
    assert rep["c"] == 1 and rep["points_equal"] and rep["extra_components"] == []


def test_compare_requires_forget():
    with pytest.raises(DivisorError):
        compare_Pg(forget(EXACT, 1), NONEXACT)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(1, 2), (1, 3), (2, 4)]))
def test_forgetful_monotonicity(seed, deltas):
    import random

    rng = random.Random(seed)
    F = rng.choice([F2, F3])
    d = rng.randint(1, 2)
    gp = random_series(F, d, deltas[1], rng.randint(0, 1), seed, exact=rng.random() < 0.5)
    g = forget(gp, deltas[0])
    rep = compare_Pg(g, gp)
    assert rep["included"] and rep["matched_levels_agree"]
    assert rep["consistent"]
